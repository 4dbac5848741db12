#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "birkhoff/diophantine.hpp"
#include "birkhoff/errors.hpp"
#include "birkhoff/heteroclinic.hpp"
#include "birkhoff/observable.hpp"
#include "birkhoff/shadowing.hpp"
#include "birkhoff/torus.hpp"

namespace birkhoff {

struct TargetConfig {
    mpfr_prec_t precision = 128;
    mpfr_prec_t prec_ceiling = 1 << 16;
    long L_max = 5000;
    long scan_max = 20000;            // coefficient scan ceiling in the combo search
    BigInt cf_bound{1000000000000L};  // continued-fraction denominator cap
    long hetero_radius = 2;
    long period_max = 4096;        // cap when certifying user-supplied periodic points
    BigInt enum_cap{1000000};      // periodic-point enumeration cap
    long lattice_scan_period = 8;  // scan depth for the lattice diagnostic
    double lattice_tol = 1e-9;
    long rescan_period_max = 0;  // > 0 enables the alternate-orbit rescan path
    int max_rounds = 40;
};

/// The eps ledger of the construction: four series slots of eps/9, the
/// shadowing slot of 4 eps/9 and the Diophantine slot of eps/9.
struct ErrorBudget {
    BigRat eps;
    std::array<double, 4> series_consumed{};  // tail + half enclosure width per K_i
    double shadow_apriori = 0.0;              // L C (mu delta)^theta
    double shadow_aposteriori = 0.0;          // L C max_dist^theta
    double dioph_consumed = 0.0;              // |combo + K - K0| upper bound

    double slot_series() const { return Interval::from_rat(eps / 9, 64).hi_d(); }
    double slot_shadow() const { return Interval::from_rat(eps * 4 / 9, 64).hi_d(); }
    double slot_dioph() const { return Interval::from_rat(eps / 9, 64).hi_d(); }

    bool closes() const {
        for (double c : series_consumed)
            if (c > slot_series()) return false;
        return shadow_apriori <= slot_shadow() && dioph_consumed <= slot_dioph();
    }
};

/// Enclosures of the four correction series and their truncation data.
/// K_i encloses the full series (computed partial sum widened by the
/// geometric tail); K_partial encloses just the four partial sums, which is
/// what the combination window is aimed at -- the tails are spent from the
/// four series slots, not from the Diophantine slot.
struct KConstants {
    Interval K1, K2, K3, K4, K;
    Interval K_partial;
    std::array<double, 4> tails{};   // geometric tail bounds at the cut
    std::array<long, 4> Ltilde{};    // truncation lengths, in single iterates
};

/// Encloses the series
///   K1 = sum_j sum_i phi(f^(-i pi(p) - j) y) - phi(f^-j p)   (and siblings)
/// by walking the exact orbits of x and y until the geometric tail bound
/// C d (lam^theta)^(N+1) / (1 - lam^theta) drops below half the eps/9 slot.
/// Terms whose two points coincide are exactly zero and contribute nothing.
inline KConstants k_constants(const IntMat2& m, const TrigPolynomial& phi,
                              const HeteroclinicPair& pair, const BigRat& eps,
                              mpfr_prec_t prec) {
    KConstants out;
    Interval zero = Interval::from_int(0, prec);
    out.K1 = out.K2 = out.K3 = out.K4 = zero;

    if (phi.is_constant()) {
        out.K = out.K_partial = zero;
        out.Ltilde = {pair.p.period, pair.q.period, pair.q.period, pair.p.period};
        return out;
    }

    HolderData hd = holder_constant(phi);
    Interval C = Interval::from_double(hd.C, prec);
    Interval lam = pair.eig.lam_interval(prec);
    Interval one = Interval::from_int(1, prec);
    BigRat slot_half = eps / 18;

    IntMat2 inv = mat_pow(m, -1);

    // series index: 0 = y backward to p, 1 = y forward to q,
    //               2 = x backward to q, 3 = x forward to p
    struct Series {
        TorusPoint start;
        const PeriodicPoint* anchor;
        bool backward;
        Interval d0;
    };
    std::array<Series, 4> series{{{pair.y, &pair.p, true, pair.dyp},
                                  {pair.y, &pair.q, false, pair.dyq},
                                  {pair.x, &pair.q, true, pair.dxq},
                                  {pair.x, &pair.p, false, pair.dxp}}};

    std::array<Interval, 4> sums{zero, zero, zero, zero};
    for (int s = 0; s < 4; ++s) {
        const Series& sr = series[static_cast<std::size_t>(s)];
        long period = sr.anchor->period;
        // orbit values of phi along the anchor, by forward index
        std::vector<Interval> anchor_vals;
        anchor_vals.reserve(static_cast<std::size_t>(period));
        for (const auto& pt : sr.anchor->orbit) anchor_vals.push_back(eval(phi, pt, prec));

        TorusPoint w = sr.start;
        long n = sr.backward ? 1 : 0;
        if (sr.backward) w = apply(inv, w);
        for (long block = 0;; ++block) {
            for (long step = 0; step < period; ++step) {
                long idx = sr.backward ? (period - (n % period)) % period : n % period;
                const TorusPoint& anchor_pt = sr.anchor->orbit[static_cast<std::size_t>(idx)];
                if (!(w == anchor_pt)) {
                    sums[static_cast<std::size_t>(s)] =
                        sums[static_cast<std::size_t>(s)] +
                        (eval(phi, w, prec) - anchor_vals[static_cast<std::size_t>(idx)]);
                }
                ++n;
                w = apply(sr.backward ? inv : m, w);
            }
            long steps_done = sr.backward ? n - 1 : n;  // full iterates consumed
            // next unseen index is steps_done+1 (backward, n starts at 1) or
            // steps_done (forward, n starts at 0); the tail is geometric
            unsigned long next = static_cast<unsigned long>(sr.backward ? steps_done + 1
                                                                        : steps_done);
            Interval tail = C * sr.d0 * lam.pow_ui(next) / (one - lam);
            if (rat_from_mpfr(tail.hi().get()) <= slot_half) {
                out.tails[static_cast<std::size_t>(s)] = tail.hi_d();
                out.Ltilde[static_cast<std::size_t>(s)] = steps_done;
                break;
            }
            if (block > 100000) throw PrecisionExhausted("k_constants: tail does not close");
        }
    }
    out.K_partial = sums[0] + sums[1] + sums[2] + sums[3];
    for (int s = 0; s < 4; ++s) {
        Interval tail = Interval::from_double(out.tails[static_cast<std::size_t>(s)], prec);
        Interval spread(MpFloat((-tail).lo()), MpFloat(tail.hi()));
        sums[static_cast<std::size_t>(s)] = sums[static_cast<std::size_t>(s)] + spread;
    }
    out.K1 = sums[0];
    out.K2 = sums[1];
    out.K3 = sums[2];
    out.K4 = sums[3];
    out.K = out.K1 + out.K2 + out.K3 + out.K4;
    return out;
}

struct LengthPlan {
    long L1 = 0, L2 = 0, L3 = 0, L4 = 0, L = 0, L0 = 0;
    BigRat alpha;
};

/// L1 = L4 = m_k pi(p), L2 = L3 = n_k pi(q); alpha = L0 / max L_i.
inline LengthPlan plan_lengths(const BigInt& m_k, const BigInt& n_k, const HeteroclinicPair& pair,
                               long L_cap) {
    if (m_k < 1 || n_k < 1) throw Error("plan_lengths: m_k, n_k must be >= 1");
    BigInt l14 = m_k * pair.p.period;
    BigInt l23 = n_k * pair.q.period;
    BigInt total = 2 * l14 + 2 * l23;
    if (total > L_cap)
        throw CapExceeded("plan_lengths: L = " + total.get_str() + " exceeds cap " +
                          std::to_string(L_cap));
    LengthPlan plan;
    plan.L1 = plan.L4 = static_cast<long>(l14.get_si());
    plan.L2 = plan.L3 = static_cast<long>(l23.get_si());
    plan.L = plan.L1 + plan.L2 + plan.L3 + plan.L4;
    plan.L0 = std::min(plan.L1, plan.L2);
    plan.alpha = make_rat(plan.L0, std::max(plan.L1, plan.L2));
    return plan;
}

enum class TargetStatus { Success, Obstructed, HypothesisViolation };

/// One escalation round of the planner, kept for the trace log.
struct PlanRound {
    long k = 0;
    bool found = false;
    BigInt m_k, n_k;
    long L = 0;
    double delta = 0.0;
    double shadow_budget = 0.0;  // L C (mu delta)^theta
};

/// Full audit trail of one target request.
struct TargetCertificate {
    // system
    IntMat2 A;
    std::string observable_text;
    mpfr_prec_t precision = 128;
    unsigned long D = 0;
    // request
    BigRat K0, eps;
    // pair
    HeteroclinicPair pair;
    // plan
    BigInt m_k, n_k;
    LengthPlan plan;
    long k_start = 1;
    std::vector<PlanRound> rounds;
    // constants and shadow
    KConstants kc;
    ShadowCertificate shadow;
    double delta_priori = 0.0;
    // sum
    Interval sum_L;          // Birkhoff sum over the L-periodic orbit of z
    Interval sum_min;        // sum over one minimal period
    long min_period = 0;
    // ledger and verdict
    ErrorBudget budget;
    std::string verdict;
};

struct TargetOutcome {
    TargetStatus status = TargetStatus::Success;
    TargetCertificate cert;      // meaningful on success
    ComboResult obstruction;     // meaningful when obstructed
    LatticeResult lattice;       // diagnostic evidence, when computed
    std::string message;
};

namespace detail {

/// Birkhoff sums of every minimal-period orbit up to period_max.
inline std::vector<std::pair<PeriodicPoint, Interval>> scan_sums(const IntMat2& m,
                                                                 const TrigPolynomial& phi,
                                                                 long period_max,
                                                                 const BigInt& cap,
                                                                 unsigned long D,
                                                                 mpfr_prec_t prec) {
    std::vector<std::pair<PeriodicPoint, Interval>> out;
    for (long n = 1; n <= period_max; ++n) {
        auto res = enumerate_periodic(m, n, cap, D);
        for (auto& orbit : res.orbits) {
            if (orbit.period != n) continue;  // counted at its own minimal period
            Interval s = birkhoff_sum(phi, orbit, prec).sum;
            out.emplace_back(std::move(orbit), std::move(s));
        }
    }
    return out;
}

inline LatticeResult lattice_diagnostic(const IntMat2& m, const TrigPolynomial& phi,
                                        const TargetConfig& cfg, unsigned long D) {
    std::vector<Interval> vals;
    for (auto& [orbit, s] : scan_sums(m, phi, cfg.lattice_scan_period, cfg.enum_cap, D,
                                      cfg.precision))
        vals.push_back(s);
    return detect_lattice(vals, cfg.lattice_tol);
}

}  // namespace detail

/// The headline construction: given S_phi f(p) < 0 < S_phi f(q), produce a
/// certified periodic point z with its Birkhoff sum inside (K0-eps, K0+eps).
/// The plan follows the eps/9 ledger; the certificate's verdict rests only
/// on the direct rigorous enclosure of the sum at z.
inline TargetOutcome hit_target(const IntMat2& m, const TrigPolynomial& phi,
                                const PeriodicPoint& p, const PeriodicPoint& q, const BigRat& K0,
                                const BigRat& eps, const TargetConfig& cfg = {}) {
    if (!(eps > 0)) throw Error("hit_target: eps must be positive");
    mpfr_prec_t prec = cfg.precision;
    EigenData eig = eigen_data(m, prec);

    TargetOutcome out;
    SumEnclosure Sp = birkhoff_sum(phi, p, prec);
    SumEnclosure Sq = birkhoff_sum(phi, q, prec);

    // hypothesis: S_phi f(p) < 0 < S_phi f(q), decided by the enclosures.
    // A constant observable is trivially degenerate and is reported as a
    // plain hypothesis violation; otherwise a detected sum lattice is the
    // honest explanation for the failure and is reported as an obstruction.
    if (!(Sp.sum.is_negative() && Sq.sum.is_positive())) {
        if (!phi.is_constant()) out.lattice = detail::lattice_diagnostic(m, phi, cfg, eig.D);
        if (out.lattice.verdict == LatticeVerdict::Lattice) {
            // the reachable sums lie on a lattice; report it as obstruction
            out.status = TargetStatus::Obstructed;
            out.obstruction.found = false;
            out.obstruction.best_gap = out.lattice.c;
            double c = out.lattice.c;
            double j = std::floor(Interval::from_rat(K0, 64).mid_d() / c);
            out.obstruction.evidence.push_back({BigInt(0), BigInt(0), j * c});
            out.obstruction.evidence.push_back({BigInt(0), BigInt(0), (j + 1) * c});
            out.message = "Birkhoff sums lie on a lattice; the hypothesis S(p) < 0 < S(q) "
                          "cannot hold and the window is unreachable";
        } else {
            out.status = TargetStatus::HypothesisViolation;
            out.message = "hypothesis S_phi f(p) < 0 < S_phi f(q) is violated";
        }
        return out;
    }

    HeteroclinicPair pair = hetero_pair(p, q, eig, cfg.hetero_radius, prec);
    KConstants kc = k_constants(m, phi, pair, eps, prec);

    TargetCertificate cert;
    cert.A = m;
    cert.observable_text = observable_to_text(phi);
    cert.precision = prec;
    cert.D = eig.D;
    cert.K0 = K0;
    cert.eps = eps;
    cert.pair = pair;
    cert.kc = kc;
    cert.budget.eps = eps;

    // window for 2 m S_p + 2 n S_q, aimed at the computed partial sums:
    // the numeric width of K_partial is folded into the target, the series
    // tails are charged to their own eps/9 slots
    BigRat k_mid =
        (rat_from_mpfr(kc.K_partial.lo().get()) + rat_from_mpfr(kc.K_partial.hi().get())) / 2;
    BigRat k_halfwidth = rat_from_mpfr(kc.K_partial.width().get()) / 2;
    BigRat window_half = eps / 9 - k_halfwidth;
    if (!(window_half > 0))
        throw PrecisionExhausted("hit_target: K enclosure consumes the Diophantine slot");

    long pi_p = p.period, pi_q = q.period;
    long k_start = 1;
    for (int s = 0; s < 4; ++s) {
        long period = (s == 0 || s == 3) ? pi_p : pi_q;
        long blocks = (kc.Ltilde[static_cast<std::size_t>(s)] + period - 1) / period;
        k_start = std::max(k_start, blocks);
    }
    cert.k_start = k_start;

    HolderData hd = holder_constant(phi);
    Interval C = Interval::from_double(hd.C, prec);
    Interval mu = Interval::from_double(mu_constant(eig), prec);
    Interval lam = pair.eig.lam_interval(prec);
    Interval two = Interval::from_int(2, prec);
    Interval h_int = Interval::from_double(pair.H, prec);
    Interval d0_int = Interval::from_double(pair.delta0, prec);
    BigRat shadow_slot = eps * 4 / 9;

    mpfr_prec_t sum_prec = prec;
    auto refine_sums = [&](mpfr_prec_t pr) {
        sum_prec = pr;
        SumEnclosure rp = birkhoff_sum(phi, p, pr);
        SumEnclosure rq = birkhoff_sum(phi, q, pr);
        Interval a = two * rp.sum;
        Interval b = two * rq.sum;
        return std::pair<Interval, Interval>(a, b);
    };

    long k = k_start;
    std::optional<ComboResult> hit;
    LengthPlan plan;
    for (int round = 0; round < cfg.max_rounds; ++round) {
        PlanRound pr;
        pr.k = k;
        ComboQuery query;
        query.a = two * Sp.sum;
        query.b = two * Sq.sum;
        query.target = K0 - k_mid;
        query.half_width = window_half;
        query.k_min = k;
        query.cf_bound = cfg.cf_bound;
        query.scan_max = cfg.scan_max;
        query.prec = prec;
        query.prec_ceiling = cfg.prec_ceiling;
        query.refine = refine_sums;
        ComboResult combo = search_combo(query);
        if (!combo.found) {
            if (cfg.rescan_period_max > 0) {
                // alternate-orbit path: look for a finer-gap negative partner
                auto sums = detail::scan_sums(m, phi, cfg.rescan_period_max, cfg.enum_cap, eig.D,
                                              prec);
                TargetConfig sub = cfg;
                sub.rescan_period_max = 0;
                for (auto& [orbit, s] : sums) {
                    if (!s.is_negative() || orbit.point == p.point) continue;
                    TargetOutcome alt = hit_target(m, phi, orbit, q, K0, eps, sub);
                    if (alt.status == TargetStatus::Success) return alt;
                }
            }
            out.status = TargetStatus::Obstructed;
            out.obstruction = combo;
            out.lattice = detail::lattice_diagnostic(m, phi, cfg, eig.D);
            out.message = "no integer combination reaches the window";
            return out;
        }

        plan = plan_lengths(combo.m, combo.n, pair, cfg.L_max);
        pr.found = true;
        pr.m_k = combo.m;
        pr.n_k = combo.n;
        pr.L = plan.L;

        // shadow slot: L C (mu delta)^theta <= 4 eps / 9 with
        // delta = 2 H lam^L0 delta0
        Interval delta_priori =
            two * h_int * lam.pow_ui(static_cast<unsigned long>(plan.L0)) * d0_int;
        Interval shadow_cost = Interval::from_int(plan.L, prec) * C *
                               (mu * delta_priori).pow_rat(hd.theta, prec);
        pr.delta = delta_priori.hi_d();
        pr.shadow_budget = shadow_cost.hi_d();
        cert.rounds.push_back(pr);
        if (!(rat_from_mpfr(shadow_cost.hi().get()) <= shadow_slot)) {
            k *= 2;  // delta shrinks like lam^(alpha L0), so this terminates
            continue;
        }

        hit = combo;
        cert.delta_priori = delta_priori.hi_d();
        cert.budget.shadow_apriori = shadow_cost.hi_d();
        cert.budget.dioph_consumed =
            (combo.value + kc.K_partial - Interval::from_rat(K0, prec)).abs().hi_d();
        break;
    }
    if (!hit) throw PrecisionExhausted("hit_target: escalation did not close the shadow slot");

    cert.m_k = hit->m;
    cert.n_k = hit->n;
    cert.plan = plan;

    PseudoOrbit po = build_pseudo_orbit(m, pair, plan.L1, plan.L2, plan.L3, plan.L4, cfg.L_max,
                                        prec);
    cert.shadow = shadow_periodic(m, po, prec);
    cert.shadow.max_dist = verify_shadow(m, cert.shadow, po, prec);

    // a posteriori shadow contribution to the ledger
    {
        Interval md = Interval::from_double(cert.shadow.max_dist, prec);
        Interval cost = md.hi_d() > 0 ? Interval::from_int(plan.L, prec) * C *
                                            md.pow_rat(hd.theta, prec)
                                      : Interval::from_int(0, prec);
        cert.budget.shadow_aposteriori = cost.hi_d();
    }
    for (int s = 0; s < 4; ++s) {
        // per-series slot usage: half the K_i width = geometric tail at the
        // cut plus the numeric half-width of the computed partial sum
        Interval Ki = s == 0 ? kc.K1 : s == 1 ? kc.K2 : s == 2 ? kc.K3 : kc.K4;
        cert.budget.series_consumed[static_cast<std::size_t>(s)] = Ki.width_d() / 2;
    }

    // decide membership of the Birkhoff sum over L by direct enclosure
    const BigRat win_lo = K0 - eps, win_hi = K0 + eps;
    long copies = cert.shadow.L / cert.shadow.z.period;
    for (mpfr_prec_t sp = sum_prec;; sp *= 2) {
        SumEnclosure sz = birkhoff_sum(phi, cert.shadow.z, sp);
        cert.sum_min = sz.sum;
        cert.min_period = cert.shadow.z.period;
        cert.sum_L = Interval::from_int(copies, sp) * sz.sum;
        if (cert.sum_L.strictly_inside(win_lo, win_hi)) break;
        if (mpfr_cmp_q(cert.sum_L.hi().get(), win_lo.get_mpq_t()) < 0 ||
            mpfr_cmp_q(cert.sum_L.lo().get(), win_hi.get_mpq_t()) > 0)
            throw Error("hit_target: certified sum landed outside the window (planning bug)");
        if (sp >= cfg.prec_ceiling)
            throw PrecisionExhausted("hit_target: cannot decide window membership");
    }

    cert.verdict = cert.min_period == cert.shadow.L
                       ? "success"
                       : "success (minimal period " + std::to_string(cert.min_period) +
                             " divides L = " + std::to_string(cert.shadow.L) + ")";
    out.status = TargetStatus::Success;
    out.cert = cert;
    out.message = "target hit";
    return out;
}

/// Scan summary for the density experiment.
struct ScanRow {
    PeriodicPoint orbit;
    Interval sum;
};

struct ScanResult {
    std::vector<ScanRow> rows;                    // sorted by (period, representative)
    std::vector<long> histogram;                  // bins over [win_lo, win_hi]
    BigRat win_lo, win_hi;
    double max_gap = 0.0;  // largest gap between consecutive distinct sums in the window
};

inline ScanResult scan_density(const IntMat2& m, const TrigPolynomial& phi, long period_max,
                               const BigRat& win_lo, const BigRat& win_hi, long bins,
                               const BigInt& cap, unsigned long D, mpfr_prec_t prec) {
    if (!(win_hi > win_lo)) throw Error("scan_density: empty window");
    ScanResult res;
    res.win_lo = win_lo;
    res.win_hi = win_hi;
    res.histogram.assign(static_cast<std::size_t>(std::max(0L, bins)), 0);

    auto rows = detail::scan_sums(m, phi, period_max, cap, D, prec);
    res.rows.reserve(rows.size());
    double lo = Interval::from_rat(win_lo, 64).lo_d();
    double hi = Interval::from_rat(win_hi, 64).hi_d();
    std::vector<double> inside;
    double max_width = 0.0;
    for (auto& [orbit, s] : rows) {
        double mid = s.mid_d();
        max_width = std::max(max_width, s.width_d());
        if (bins > 0 && mid >= lo && mid < hi) {
            auto b = static_cast<std::size_t>((mid - lo) / (hi - lo) * static_cast<double>(bins));
            if (b >= static_cast<std::size_t>(bins)) b = static_cast<std::size_t>(bins) - 1;
            ++res.histogram[b];
        }
        if (mid >= lo && mid <= hi) inside.push_back(mid);
        res.rows.push_back({std::move(orbit), std::move(s)});
    }

    std::sort(inside.begin(), inside.end());
    double merge_tol = std::max(2 * max_width, 1e-12);
    std::vector<double> distinct;
    for (double v : inside)
        if (distinct.empty() || v - distinct.back() > merge_tol) distinct.push_back(v);
    if (distinct.size() < 2) {
        res.max_gap = hi - lo;
    } else {
        double g = 0.0;
        for (std::size_t i = 1; i < distinct.size(); ++i)
            g = std::max(g, distinct[i] - distinct[i - 1]);
        res.max_gap = g;
    }
    return res;
}

}  // namespace birkhoff
