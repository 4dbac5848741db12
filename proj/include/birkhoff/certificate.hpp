#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "birkhoff/targeter.hpp"

namespace birkhoff {

// Certificate JSON conventions: exact values are "p/q" strings, interval
// and bound values are hex-float doubles (outward-rounded), so a stored
// certificate replays bit-exactly.

namespace cert_json {

using nlohmann::json;

inline std::string hex_of(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}
inline double hex_to(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

inline json interval_to(const Interval& v) {
    auto [lo, hi] = v.to_hex_pair();
    return json::array({lo, hi});
}
inline Interval interval_from(const json& j) {
    return Interval::from_hex_pair(j.at(0).get<std::string>(), j.at(1).get<std::string>());
}

inline json point_to(const TorusPoint& p) {
    return json::array({p.x1.to_string(), p.x2.to_string()});
}
inline TorusPoint point_from(const json& j, unsigned long D) {
    return {QuadExt::parse(j.at(0).get<std::string>(), D),
            QuadExt::parse(j.at(1).get<std::string>(), D)};
}

inline json periodic_to(const PeriodicPoint& p) {
    return json{{"x1", rat_to_string(p.point.x1.rat_part())},
                {"x2", rat_to_string(p.point.x2.rat_part())},
                {"period", p.period}};
}

}  // namespace cert_json

inline nlohmann::json certificate_to_json(const TargetCertificate& c) {
    using namespace cert_json;
    json j;
    j["system"] = {{"matrix", json::array({c.A.a.get_str(), c.A.b.get_str(), c.A.c.get_str(),
                                           c.A.d.get_str()})},
                   {"observable", c.observable_text},
                   {"precision_bits", static_cast<long>(c.precision)},
                   {"discriminant", c.D}};
    j["request"] = {{"K0", rat_to_string(c.K0)}, {"eps", rat_to_string(c.eps)}};

    json pair;
    pair["p"] = periodic_to(c.pair.p);
    pair["q"] = periodic_to(c.pair.q);
    pair["x"] = point_to(c.pair.x);
    pair["y"] = point_to(c.pair.y);
    pair["t_x"] = c.pair.t_x.to_string();
    pair["u_x"] = c.pair.u_x.to_string();
    pair["t_y"] = c.pair.t_y.to_string();
    pair["u_y"] = c.pair.u_y.to_string();
    pair["delta0"] = hex_of(c.pair.delta0);
    pair["H"] = hex_of(c.pair.H);
    pair["lam"] = hex_of(c.pair.lam);
    j["pair"] = pair;

    json rounds = json::array();
    for (const auto& r : c.rounds)
        rounds.push_back(json{{"k", r.k},
                              {"found", r.found},
                              {"m_k", r.m_k.get_str()},
                              {"n_k", r.n_k.get_str()},
                              {"L", r.L},
                              {"delta", hex_of(r.delta)},
                              {"shadow_budget", hex_of(r.shadow_budget)}});
    j["plan"] = {{"m_k", c.m_k.get_str()},   {"n_k", c.n_k.get_str()}, {"L1", c.plan.L1},
                 {"L2", c.plan.L2},          {"L3", c.plan.L3},        {"L4", c.plan.L4},
                 {"L", c.plan.L},            {"L0", c.plan.L0},        {"alpha", rat_to_string(c.plan.alpha)},
                 {"k_start", c.k_start},     {"rounds", rounds}};

    j["k_constants"] = {{"K1", interval_to(c.kc.K1)},
                        {"K2", interval_to(c.kc.K2)},
                        {"K3", interval_to(c.kc.K3)},
                        {"K4", interval_to(c.kc.K4)},
                        {"K", interval_to(c.kc.K)},
                        {"K_partial", interval_to(c.kc.K_partial)},
                        {"tails", json::array({hex_of(c.kc.tails[0]), hex_of(c.kc.tails[1]),
                                               hex_of(c.kc.tails[2]), hex_of(c.kc.tails[3])})},
                        {"Ltilde", c.kc.Ltilde}};

    j["shadow"] = {{"z", json::array({rat_to_string(c.shadow.z.point.x1.rat_part()),
                                      rat_to_string(c.shadow.z.point.x2.rat_part())})},
                   {"z_at_0", json::array({rat_to_string(c.shadow.z_at_0.x1.rat_part()),
                                           rat_to_string(c.shadow.z_at_0.x2.rat_part())})},
                   {"L", c.shadow.L},
                   {"y_index", c.shadow.y_index},
                   {"min_period", c.shadow.z.period},
                   {"max_dist", hex_of(c.shadow.max_dist)},
                   {"delta", hex_of(c.shadow.delta)},
                   {"delta_priori", hex_of(c.delta_priori)},
                   {"mu", hex_of(c.shadow.mu)},
                   {"a_posteriori_ratio", hex_of(c.shadow.a_posteriori_ratio)}};

    j["sum"] = {{"over_L", interval_to(c.sum_L)},
                {"min_period", c.min_period},
                {"over_min_period", interval_to(c.sum_min)}};

    j["budget"] = {{"eps", rat_to_string(c.budget.eps)},
                   {"series_consumed",
                    json::array({hex_of(c.budget.series_consumed[0]),
                                 hex_of(c.budget.series_consumed[1]),
                                 hex_of(c.budget.series_consumed[2]),
                                 hex_of(c.budget.series_consumed[3])})},
                   {"shadow_apriori", hex_of(c.budget.shadow_apriori)},
                   {"shadow_aposteriori", hex_of(c.budget.shadow_aposteriori)},
                   {"dioph_consumed", hex_of(c.budget.dioph_consumed)}};

    j["verdict"] = c.verdict;
    return j;
}

/// Reconstructs the exact content needed for replay. Derived geometric data
/// (eigenvectors, distance bounds) is recomputed from the exact fields.
inline TargetCertificate certificate_from_json(const nlohmann::json& j) {
    using namespace cert_json;
    TargetCertificate c;
    const auto& sys = j.at("system");
    std::array<std::string, 4> me = sys.at("matrix");
    c.A = IntMat2{BigInt(me[0]), BigInt(me[1]), BigInt(me[2]), BigInt(me[3])};
    c.observable_text = sys.at("observable").get<std::string>();
    c.precision = sys.at("precision_bits").get<long>();
    c.D = sys.at("discriminant").get<unsigned long>();

    c.K0 = parse_rational(j.at("request").at("K0").get<std::string>());
    c.eps = parse_rational(j.at("request").at("eps").get<std::string>());
    c.budget.eps = c.eps;

    EigenData eig = eigen_data(c.A, c.precision);
    if (eig.D != c.D) throw ParseError("certificate: discriminant mismatch");

    const auto& pj = j.at("pair");
    auto load_periodic = [&](const nlohmann::json& pp) {
        BigRat x1 = parse_rational(pp.at("x1").get<std::string>());
        BigRat x2 = parse_rational(pp.at("x2").get<std::string>());
        long period = pp.at("period").get<long>();
        PeriodicPoint out = make_periodic(c.A, TorusPoint::from_rational(x1, x2, c.D),
                                          std::max(period, 1L));
        if (out.period != period) throw ParseError("certificate: stored period is wrong");
        return out;
    };
    HeteroclinicPair pair;
    pair.p = load_periodic(pj.at("p"));
    pair.q = load_periodic(pj.at("q"));
    pair.x = point_from(pj.at("x"), c.D);
    pair.y = point_from(pj.at("y"), c.D);
    pair.t_x = QuadExt::parse(pj.at("t_x").get<std::string>(), c.D);
    pair.u_x = QuadExt::parse(pj.at("u_x").get<std::string>(), c.D);
    pair.t_y = QuadExt::parse(pj.at("t_y").get<std::string>(), c.D);
    pair.u_y = QuadExt::parse(pj.at("u_y").get<std::string>(), c.D);
    pair.eig = eig;
    mpfr_prec_t prec = c.precision;
    Interval ns = eig.v_s.norm(prec), nu = eig.v_u.norm(prec);
    pair.dxp = pair.t_x.abs().enclose(prec) * ns;
    pair.dxq = pair.u_x.abs().enclose(prec) * nu;
    pair.dyq = pair.t_y.abs().enclose(prec) * ns;
    pair.dyp = pair.u_y.abs().enclose(prec) * nu;
    pair.delta0 = cert_json::hex_to(pj.at("delta0").get<std::string>());
    pair.H = cert_json::hex_to(pj.at("H").get<std::string>());
    pair.lam = cert_json::hex_to(pj.at("lam").get<std::string>());
    c.pair = pair;

    const auto& pl = j.at("plan");
    c.m_k = BigInt(pl.at("m_k").get<std::string>());
    c.n_k = BigInt(pl.at("n_k").get<std::string>());
    c.plan.L1 = pl.at("L1").get<long>();
    c.plan.L2 = pl.at("L2").get<long>();
    c.plan.L3 = pl.at("L3").get<long>();
    c.plan.L4 = pl.at("L4").get<long>();
    c.plan.L = pl.at("L").get<long>();
    c.plan.L0 = pl.at("L0").get<long>();
    c.plan.alpha = parse_rational(pl.at("alpha").get<std::string>());
    c.k_start = pl.at("k_start").get<long>();

    const auto& kj = j.at("k_constants");
    c.kc.K1 = interval_from(kj.at("K1"));
    c.kc.K2 = interval_from(kj.at("K2"));
    c.kc.K3 = interval_from(kj.at("K3"));
    c.kc.K4 = interval_from(kj.at("K4"));
    c.kc.K = interval_from(kj.at("K"));
    c.kc.K_partial = interval_from(kj.at("K_partial"));
    for (int s = 0; s < 4; ++s) {
        c.kc.tails[static_cast<std::size_t>(s)] =
            hex_to(kj.at("tails").at(s).get<std::string>());
        c.kc.Ltilde[static_cast<std::size_t>(s)] = kj.at("Ltilde").at(s).get<long>();
    }

    const auto& sj = j.at("shadow");
    c.shadow.L = sj.at("L").get<long>();
    c.shadow.y_index = sj.at("y_index").get<long>();
    c.shadow.max_dist = hex_to(sj.at("max_dist").get<std::string>());
    c.shadow.delta = hex_to(sj.at("delta").get<std::string>());
    c.delta_priori = hex_to(sj.at("delta_priori").get<std::string>());
    c.shadow.mu = hex_to(sj.at("mu").get<std::string>());
    c.shadow.a_posteriori_ratio = hex_to(sj.at("a_posteriori_ratio").get<std::string>());
    {
        BigRat zx = parse_rational(sj.at("z").at(0).get<std::string>());
        BigRat zy = parse_rational(sj.at("z").at(1).get<std::string>());
        c.shadow.z.point = TorusPoint::from_rational(zx, zy, c.D);
        c.shadow.z.period = sj.at("min_period").get<long>();
        BigRat ax = parse_rational(sj.at("z_at_0").at(0).get<std::string>());
        BigRat ay = parse_rational(sj.at("z_at_0").at(1).get<std::string>());
        c.shadow.z_at_0 = TorusPoint::from_rational(ax, ay, c.D);
    }

    const auto& uj = j.at("sum");
    c.sum_L = interval_from(uj.at("over_L"));
    c.min_period = uj.at("min_period").get<long>();
    c.sum_min = interval_from(uj.at("over_min_period"));

    c.verdict = j.at("verdict").get<std::string>();
    return c;
}

struct VerifyReport {
    bool ok = true;
    std::string first_failure;
    std::vector<std::string> passed;

    void fail(const std::string& name) {
        if (ok) first_failure = name;
        ok = false;
    }
};

/// Re-runs every check of a stored certificate at the requested precision:
/// exact line membership of x and y, exact periodicity of z, the shadowing
/// distance bound, and the sum enclosure against the requested window.
inline VerifyReport verify_certificate(const TargetCertificate& c, mpfr_prec_t precision) {
    VerifyReport rep;
    const EigenData& eig = c.pair.eig;

    auto record = [&](bool good, const std::string& name) {
        if (good)
            rep.passed.push_back(name);
        else
            rep.fail(name);
        return good;
    };

    // x on W^s(p) and W^u(q), y on W^s(q) and W^u(p): residuals exactly zero
    {
        auto on_line = [&](const TorusPoint& pt, const TorusPoint& base, const QuadExt& par,
                           const QuadVec2& dir) {
            QuadVec2 rel{(pt.x1 - base.x1 - par * dir.x).reduced(),
                         (pt.x2 - base.x2 - par * dir.y).reduced()};
            return rel.is_zero();
        };
        record(on_line(c.pair.x, c.pair.p.point, c.pair.t_x, eig.v_s) &&
                   on_line(c.pair.x, c.pair.q.point, c.pair.u_x, eig.v_u),
               "x-line-membership");
        record(on_line(c.pair.y, c.pair.q.point, c.pair.t_y, eig.v_s) &&
                   on_line(c.pair.y, c.pair.p.point, c.pair.u_y, eig.v_u),
               "y-line-membership");
    }

    // exact L-periodicity and minimal period of z
    {
        TorusPoint zy = c.shadow.z.point;
        bool periodic = zy.is_rational() && apply(mat_pow(c.A, c.shadow.L), zy) == zy;
        long min_period = 0;
        if (periodic) {
            for (long d = 1; d <= c.shadow.L; ++d) {
                if (c.shadow.L % d != 0) continue;
                if (apply(mat_pow(c.A, d), zy) == zy) {
                    min_period = d;
                    break;
                }
            }
        }
        record(periodic && min_period == c.min_period, "z-periodicity");
        bool aligned = apply(mat_pow(c.A, c.shadow.y_index), c.shadow.z_at_0) == zy;
        record(aligned, "z-index-alignment");
        if (!rep.ok) return rep;
    }

    // shadow distance: rebuild the pseudo-orbit and re-verify max_n d <= mu delta
    {
        try {
            PseudoOrbit po = build_pseudo_orbit(c.A, c.pair, c.plan.L1, c.plan.L2, c.plan.L3,
                                                c.plan.L4, c.plan.L, precision);
            verify_shadow(c.A, c.shadow, po, precision);  // throws on a proven violation
            record(true, "shadow-bound");
        } catch (const Error&) {
            record(false, "shadow-bound");
        }
    }

    // sum enclosure: recompute at the requested precision and test the window
    {
        PeriodicPoint z = make_periodic(c.A, c.shadow.z.point, c.shadow.L);
        bool period_ok = z.period == c.min_period;
        SumEnclosure s = birkhoff_sum(parse_observable(c.observable_text), z, precision);
        long copies = c.shadow.L / z.period;
        Interval sum_L = Interval::from_int(copies, precision) * s.sum;
        bool inside = sum_L.strictly_inside(c.K0 - c.eps, c.K0 + c.eps);
        bool consistent = sum_L.intersects(c.sum_L);
        record(period_ok && inside && consistent, "sum-enclosure");
    }
    return rep;
}

inline void write_text_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error("cannot move " + tmp + " into place");
}

}  // namespace birkhoff
