#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/interval.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

/// Least positive element of { k a + l b : k, l integers } for exact
/// rational a, b: with a/b = l/k in lowest terms the group is (b/k) Z,
/// so the gap is |b| / k.
inline BigRat gap(const BigRat& a, const BigRat& b) {
    if (b == 0) throw DivisionByZero("gap: b = 0");
    auto [l, k] = lowest_terms(a, b);
    (void)l;
    return abs(b) / BigRat(k);
}

/// m0 l + n0 k = sign with m0, n0 >= 1, for coprime l, k of opposite signs.
/// Stepping by (|k|, |l|) leaves the combination value unchanged and raises
/// both components, so "large enough" solutions always exist.
inline std::pair<BigInt, BigInt> bezout_combo(const BigInt& l, const BigInt& k, int sign) {
    if (sign != 1 && sign != -1) throw Error("bezout_combo: sign must be +/-1");
    BigInt g, u, v;
    mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), l.get_mpz_t(), k.get_mpz_t());
    if (g != 1) throw NotCoprime("bezout_combo: gcd(" + l.get_str() + "," + k.get_str() + ") != 1");
    if (sgn(l) * sgn(k) >= 0) throw Error("bezout_combo: l and k must have opposite signs");
    if (sign == -1) {
        u = -u;
        v = -v;
    }
    BigInt step_m = abs(k), step_n = abs(l);
    auto deficit = [](const BigInt& start, const BigInt& step) -> BigInt {
        if (start >= 1) return BigInt(0);
        return ceil_rat(make_rat(BigInt(1) - start, step));
    };
    BigInt t = std::max(deficit(u, step_m), deficit(v, step_n));
    return {u + t * step_m, v + t * step_n};
}

/// The i0-th member of the family: (m0 + k i0, n0 - l i0). The combination
/// value m l + n k does not depend on i0; with l < 0 < k both components
/// strictly increase in i0.
inline std::pair<BigInt, BigInt> ari_family(const BigInt& m0, const BigInt& n0, const BigInt& l,
                                            const BigInt& k, const BigInt& i0) {
    return {m0 + k * i0, n0 - l * i0};
}

/// A request to place m a + n b inside the open window
/// (target - half_width, target + half_width) with integers m, n >= k_min.
struct ComboQuery {
    Interval a, b;  // a.hi < 0 < b.lo
    std::optional<BigRat> a_exact, b_exact;  // exact values when known
    BigRat target;
    BigRat half_width;  // > 0
    long k_min = 1;
    BigInt cf_bound{1000000000000L};  // continued-fraction denominator cap
    long scan_max = 20000;            // direct scan ceiling on m
    mpfr_prec_t prec = 128;
    mpfr_prec_t prec_ceiling = 1 << 16;
    // Re-evaluates (a, b) at a higher precision; optional.
    std::function<std::pair<Interval, Interval>(mpfr_prec_t)> refine;
};

struct NearMiss {
    BigInt m, n;
    double value;
};

struct ComboResult {
    bool found = false;
    BigInt m, n;
    Interval value;
    double best_gap = 0.0;  // finest positive combination located (when obstructed)
    std::vector<NearMiss> evidence;
};

namespace detail {

struct Convergent {
    BigInt p, q;  // p/q convergent of the ratio
};

inline std::vector<Convergent> convergents(BigRat rho, const BigInt& q_bound) {
    std::vector<Convergent> out;
    BigInt p_prev = 1, q_prev = 0, p_cur = 0, q_cur = 1;
    for (int guard = 0; guard < 20000; ++guard) {
        BigInt ai = floor_rat(rho);
        BigInt p_next = ai * p_cur + p_prev;
        BigInt q_next = ai * q_cur + q_prev;
        if (q_next > q_bound) break;
        out.push_back({p_next, q_next});
        BigRat frac = rho - BigRat(ai);
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        if (frac == 0) break;
        rho = BigRat(1) / frac;
    }
    return out;
}

inline BigRat interval_mid(const Interval& v) {
    return (rat_from_mpfr(v.lo().get()) + rat_from_mpfr(v.hi().get())) / 2;
}

/// Exact search when a, b are known rationals: every combination value lies
/// on the lattice (b/k) Z for a/b = l/k in lowest terms, so window hits and
/// misses are decidable. Coefficients come from the Bezout family.
inline ComboResult search_exact(const BigRat& a, const BigRat& b, const BigRat& win_lo,
                                const BigRat& win_hi, const BigRat& target, long k_min,
                                mpfr_prec_t prec) {
    auto [l, k] = lowest_terms(a, b);  // k > 0; a < 0 < b forces l < 0
    BigRat g = abs(b) / BigRat(k);     // lattice spacing, > 0

    // admissible integers s with s*g strictly inside the window
    BigInt s_min = floor_rat(win_lo / g) + 1;
    BigInt s_max = ceil_rat(win_hi / g) - 1;

    auto family_lift = [&](BigInt m, BigInt n) {
        // raise both coefficients to >= k_min without moving the value
        BigInt t(0);
        BigInt step_m = abs(k), step_n = abs(l);
        auto deficit = [&](const BigInt& start, const BigInt& step) -> BigInt {
            if (start >= k_min) return BigInt(0);
            return ceil_rat(make_rat(BigInt(k_min) - start, step));
        };
        t = std::max(deficit(m, step_m), deficit(n, step_n));
        return std::pair<BigInt, BigInt>{m + t * step_m, n + t * step_n};
    };

    if (s_min <= s_max) {
        // pick the admissible s nearest the target
        BigInt s = round_nearest(target / g);
        if (s < s_min) s = s_min;
        if (s > s_max) s = s_max;
        BigInt m, n;
        if (s == 0) {
            m = abs(k);
            n = abs(l);
        } else {
            // value(m, n) = (b/k)(m l + n k), b > 0: need m l + n k = s
            auto [m0, n0] = bezout_combo(l, k, sgn(s));
            m = abs(s) * m0;
            n = abs(s) * n0;
        }
        std::tie(m, n) = family_lift(m, n);
        BigRat value = BigRat(m) * a + BigRat(n) * b;
        if (!(value > win_lo && value < win_hi))
            throw Error("search_combo: exact lattice hit fell outside the window (bug)");
        ComboResult r;
        r.found = true;
        r.m = m;
        r.n = n;
        r.value = Interval::from_rat(value, prec);
        return r;
    }

    ComboResult r;
    r.found = false;
    r.best_gap = Interval::from_rat(g, 64).hi_d();
    BigInt s_lo = floor_rat(target / g);
    for (BigInt ds = 0; ds <= 1; ++ds) {
        BigInt s = s_lo + ds;
        BigInt m, n;
        if (s == 0) {
            m = abs(k);
            n = abs(l);
        } else {
            auto [m0, n0] = bezout_combo(l, k, sgn(s));
            m = abs(s) * m0;
            n = abs(s) * n0;
        }
        std::tie(m, n) = family_lift(m, n);
        r.evidence.push_back({m, n, Interval::from_rat(BigRat(m) * a + BigRat(n) * b, 64).mid_d()});
    }
    return r;
}

}  // namespace detail

/// Searches for integers m, n >= k_min with m a + n b rigorously inside the
/// open window. When a and b are exact rationals the window is decided on
/// the exact combination lattice; otherwise a direct coefficient scan (the
/// matching n for each m is pinned by the midpoints, every candidate is
/// verified in interval arithmetic) runs first, then a step search driven
/// by continued-fraction convergents of |a|/b. Failure reports the finest
/// positive combination found plus the lattice near-misses by the window.
inline ComboResult search_combo(const ComboQuery& query) {
    if (!query.a.is_negative() || !query.b.is_positive())
        throw Error("search_combo: need a < 0 < b");
    if (!(query.half_width > 0)) throw Error("search_combo: half_width must be positive");

    const BigRat win_lo = query.target - query.half_width;
    const BigRat win_hi = query.target + query.half_width;

    if (query.a_exact && query.b_exact)
        return detail::search_exact(*query.a_exact, *query.b_exact, win_lo, win_hi, query.target,
                                    query.k_min, query.prec);

    mpfr_prec_t p_work = query.prec;
    Interval a = query.a, b = query.b;
    auto refresh = [&]() {
        if (query.refine) {
            auto [ra, rb] = query.refine(p_work);
            a = ra;
            b = rb;
        }
    };

    auto combo = [&](const BigInt& m, const BigInt& n) {
        return Interval::from_rat(BigRat(m), p_work) * a + Interval::from_rat(BigRat(n), p_work) * b;
    };
    // Ensures the enclosure of m a + n b is fine enough to decide the window.
    auto sharp_combo = [&](const BigInt& m, const BigInt& n) -> std::optional<Interval> {
        for (;;) {
            Interval v = combo(m, n);
            BigRat width = rat_from_mpfr(v.width().get());
            if (width * BigRat(10) < query.half_width) return v;
            if (!query.refine) return std::nullopt;
            if (p_work >= query.prec_ceiling)
                throw PrecisionExhausted("search_combo: precision ceiling reached");
            p_work *= 2;
            refresh();
        }
    };
    auto accept = [&](const BigInt& m, const BigInt& n) -> std::optional<ComboResult> {
        if (m < query.k_min || n < query.k_min) return std::nullopt;
        auto v = sharp_combo(m, n);
        if (!v || !v->strictly_inside(win_lo, win_hi)) return std::nullopt;
        ComboResult r;
        r.found = true;
        r.m = m;
        r.n = n;
        r.value = *v;
        return r;
    };

    if (auto r = accept(BigInt(query.k_min), BigInt(query.k_min))) return *r;

    // direct scan: for each m, the best n is pinned by the midpoints
    BigRat mid_a = detail::interval_mid(a);
    BigRat mid_b = detail::interval_mid(b);
    for (long m = query.k_min; m <= query.scan_max; ++m) {
        BigRat ideal = (query.target - BigRat(m) * mid_a) / mid_b;
        BigInt n_star = round_nearest(ideal);
        for (long d : {0L, -1L, 1L}) {
            BigInt n = n_star + d;
            if (auto r = accept(BigInt(m), n)) return *r;
        }
    }

    // small combinations from continued-fraction convergents of |a| / b
    BigRat rho = (-mid_a) / mid_b;
    auto cvs = detail::convergents(rho, query.cf_bound);
    struct Combo {
        BigInt m, n;
        Interval v;
    };
    std::optional<Combo> pos, neg;
    auto offer = [&](const BigInt& m, const BigInt& n) {
        if (m <= 0 || n <= 0) return;
        Interval v = combo(m, n);
        if (v.is_positive()) {
            if (!pos || v.hi() < pos->v.hi()) pos = Combo{m, n, v};
        } else if (v.is_negative()) {
            if (!neg || (-v).hi() < (-neg->v).hi()) neg = Combo{m, n, v};
        }
    };
    for (const auto& c : cvs) offer(c.q, c.p);
    if (cvs.size() >= 2)
        offer(cvs.back().q - cvs[cvs.size() - 2].q, cvs.back().p - cvs[cvs.size() - 2].p);

    // Archimedean walk: step the base combination toward the window with
    // the finest combination of the needed sign
    Interval base_v = combo(BigInt(query.k_min), BigInt(query.k_min));
    BigRat base_mid = detail::interval_mid(base_v);
    auto step_search = [&](const Combo& g) -> std::optional<ComboResult> {
        BigRat g_mid = detail::interval_mid(g.v);
        if (g_mid == 0) return std::nullopt;
        BigInt h0 = floor_rat((query.target - base_mid) / g_mid);
        for (long dh = -1; dh <= 2; ++dh) {
            BigInt h = h0 + dh;
            if (h < 0) continue;
            if (auto r = accept(BigInt(query.k_min) + h * g.m, BigInt(query.k_min) + h * g.n))
                return *r;
        }
        return std::nullopt;
    };
    BigRat two_w = 2 * query.half_width;
    if (pos && rat_from_mpfr(pos->v.hi().get()) < two_w && base_mid < query.target)
        if (auto r = step_search(*pos)) return *r;
    if (neg && rat_from_mpfr((-neg->v).hi().get()) < two_w && base_mid > query.target)
        if (auto r = step_search(*neg)) return *r;

    // obstructed: report the finest positive combination and the lattice
    // values nearest the window
    ComboResult r;
    r.found = false;
    std::optional<Combo> finest = pos;
    if (neg) {
        Combo flipped{neg->m, neg->n, -neg->v};
        if (!finest || flipped.v.hi() < finest->v.hi()) finest = flipped;
    }
    if (finest) {
        r.best_gap = finest->v.hi_d();
        BigRat g_mid = detail::interval_mid(finest->v);
        if (g_mid > 0) {
            BigInt j0 = floor_rat(query.target / g_mid);
            for (long dj = 0; dj <= 1; ++dj) {
                BigInt j = j0 + dj;
                if (j < 1) continue;
                r.evidence.push_back(
                    {j * finest->m, j * finest->n, combo(j * finest->m, j * finest->n).mid_d()});
            }
        }
    }
    return r;
}

enum class LatticeVerdict { None, Lattice, AllZero };

struct LatticeResult {
    LatticeVerdict verdict = LatticeVerdict::None;
    double c = 0.0;
};

/// Largest c > tol with every value within tol of c Z, by a real Euclidean
/// descent (symmetric remainders) with cutoff tol on the magnitudes. Values
/// are interval midpoints; this is a diagnostic, not a certificate.
inline LatticeResult detect_lattice(const std::vector<Interval>& values, double tol) {
    std::vector<double> mags;
    for (const auto& v : values) {
        double m = std::fabs(v.mid_d());
        if (m > tol) mags.push_back(m);
    }
    if (mags.empty()) return {LatticeVerdict::AllZero, 0.0};

    double g = 0.0;
    for (double m : mags) {
        double x = std::max(g, m), y = std::min(g, m);
        while (y > tol) {
            double rem = std::fmod(x, y);
            if (rem > y / 2) rem = y - rem;
            x = y;
            y = rem;
        }
        g = x;
        if (g <= tol) return {LatticeVerdict::None, 0.0};
    }
    // A genuine lattice quantizes with residues at rounding-noise scale,
    // well below the spacing; a descent that merely ran out of cutoff
    // leaves residues of order g and is rejected.
    double margin = std::min(tol, g / 16);
    for (double m : mags) {
        double q = std::round(m / g);
        if (std::fabs(m - q * g) > margin) return {LatticeVerdict::None, 0.0};
    }
    return {LatticeVerdict::Lattice, g};
}

}  // namespace birkhoff
