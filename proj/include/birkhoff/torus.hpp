#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/matrix.hpp"
#include "birkhoff/quadext.hpp"

namespace birkhoff {

/// Unreduced point of the plane (a lift); projection is componentwise mod 1.
using LiftedPoint = QuadVec2;

/// Point of the 2-torus, coordinates reduced to [0, 1) exactly.
struct TorusPoint {
    QuadExt x1, x2;

    static TorusPoint reduce(const QuadExt& a, const QuadExt& b) {
        return {a.reduced(), b.reduced()};
    }
    static TorusPoint reduce(const LiftedPoint& p) { return reduce(p.x, p.y); }
    static TorusPoint from_rational(const BigRat& a, const BigRat& b, unsigned long D) {
        return {QuadExt::rational(frac_rat(a), D), QuadExt::rational(frac_rat(b), D)};
    }

    LiftedPoint lift() const { return {x1, x2}; }
    bool is_rational() const { return x1.is_rational() && x2.is_rational(); }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        return a.x1 == b.x1 && a.x2 == b.x2;
    }
    friend bool operator!=(const TorusPoint& a, const TorusPoint& b) { return !(a == b); }
    friend bool operator<(const TorusPoint& a, const TorusPoint& b) {
        int c = a.x1.cmp(b.x1);
        if (c != 0) return c < 0;
        return a.x2.cmp(b.x2) < 0;
    }
};

/// Exact image of pt under the induced torus map, reduced to [0,1)^2.
inline TorusPoint apply(const IntMat2& m, const TorusPoint& pt) {
    return TorusPoint::reduce(m.apply(pt.lift()));
}

/// Shortest representative of the difference a - b mod Z^2; componentwise
/// centering to (-1/2, 1/2] already minimizes the Euclidean norm over all
/// integer translates.
inline QuadVec2 torus_displacement(const TorusPoint& a, const TorusPoint& b) {
    return {(a.x1 - b.x1).centered(), (a.x2 - b.x2).centered()};
}

/// Exact squared quotient distance.
inline QuadExt torus_dist_sq(const TorusPoint& a, const TorusPoint& b) {
    return torus_displacement(a, b).norm_sq();
}

/// Rigorous enclosure of the quotient Euclidean distance.
inline Interval torus_distance(const TorusPoint& a, const TorusPoint& b, mpfr_prec_t prec) {
    return torus_dist_sq(a, b).enclose(prec).sqrt_nonneg();
}

/// Periodic point: exact rational torus point with its minimal period and
/// the full orbit, orbit[0] = point.
struct PeriodicPoint {
    TorusPoint point;
    long period = 0;
    std::vector<TorusPoint> orbit;
};

/// Least period of a rational point, at most n_max.
inline long minimal_period(const IntMat2& m, const TorusPoint& pt, long n_max) {
    if (!pt.is_rational()) throw Error("minimal_period: point must be rational");
    TorusPoint z = pt;
    for (long n = 1; n <= n_max; ++n) {
        z = apply(m, z);
        if (z == pt) return n;
    }
    throw NotPeriodicWithin("minimal_period: no period within " + std::to_string(n_max));
}

inline PeriodicPoint make_periodic(const IntMat2& m, const TorusPoint& pt, long n_max) {
    PeriodicPoint p;
    p.point = pt;
    p.period = minimal_period(m, pt, n_max);
    p.orbit.reserve(static_cast<std::size_t>(p.period));
    TorusPoint z = pt;
    for (long i = 0; i < p.period; ++i) {
        p.orbit.push_back(z);
        z = apply(m, z);
    }
    return p;
}

/// Exact lifted iterates A^i . pt for i in [from, to], no reduction.
inline std::vector<LiftedPoint> orbit_segment(const IntMat2& m, const LiftedPoint& pt,
                                              long from, long to) {
    if (from > to) throw Error("orbit_segment: from > to");
    std::vector<LiftedPoint> out;
    out.reserve(static_cast<std::size_t>(to - from + 1));
    LiftedPoint z = mat_pow(m, from).apply(pt);
    out.push_back(z);
    for (long i = from; i < to; ++i) {
        z = m.apply(z);
        out.push_back(z);
    }
    return out;
}

struct EnumerationResult {
    std::vector<PeriodicPoint> orbits;  // minimal periods divide n; sorted by (period, point)
    BigInt fixed_point_count;           // |det(A^n - I)| = total points counted with multiplicity 1
};

/// All fixed points of f^n, found exactly as the lattice (A^n - I)^{-1} Z^2
/// mod Z^2, grouped into orbits.
inline EnumerationResult enumerate_periodic(const IntMat2& m, long n, const BigInt& cap,
                                            unsigned long D) {
    IntMat2 p = mat_pow(m, n);
    IntMat2 M{p.a - 1, p.b, p.c, p.d - 1};
    BigInt det = M.det();
    if (det == 0) throw Error("enumerate_periodic: A^n - I singular (not hyperbolic?)");
    BigInt count = det < 0 ? BigInt(-det) : det;
    if (count > cap)
        throw CapExceeded("enumerate_periodic: " + count.get_str() + " fixed points exceeds cap " +
                          cap.get_str());

    // Representatives of Z^2 / M Z^2 from a lower-triangular basis of the
    // column lattice: x-coordinates run mod g = gcd(M.a, M.b), and for each
    // x-class the y-coordinate runs mod |det|/g.
    BigInt g;
    mpz_gcd(g.get_mpz_t(), M.a.get_mpz_t(), M.b.get_mpz_t());
    BigInt h = count / g;

    using Key = std::pair<BigRat, BigRat>;
    std::map<Key, bool> seen;
    std::vector<PeriodicPoint> orbits;

    auto step = [&](const Key& z) -> Key {
        auto [u, v] = m.apply(z.first, z.second);
        return {frac_rat(u), frac_rat(v)};
    };

    for (BigInt i = 0; i < g; ++i) {
        for (BigInt j = 0; j < h; ++j) {
            // z = adj(M) (i, j) / det, reduced mod 1
            BigRat z1 = make_rat(M.d * i - M.b * j, det);
            BigRat z2 = make_rat(-M.c * i + M.a * j, det);
            Key z{frac_rat(z1), frac_rat(z2)};
            if (seen.contains(z)) continue;
            // walk the orbit; its length is the minimal period and divides n
            std::vector<Key> cyc{z};
            seen[z] = true;
            for (Key w = step(z); !(w == z); w = step(w)) {
                seen[w] = true;
                cyc.push_back(w);
            }
            long period = static_cast<long>(cyc.size());
            if (n % period != 0)
                throw Error("enumerate_periodic: orbit length does not divide n");
            // representative: lexicographically smallest point of the orbit
            std::size_t rep = 0;
            for (std::size_t k = 1; k < cyc.size(); ++k)
                if (cyc[k] < cyc[rep]) rep = k;
            PeriodicPoint pp;
            pp.period = period;
            pp.orbit.reserve(cyc.size());
            for (std::size_t k = 0; k < cyc.size(); ++k) {
                const Key& w = cyc[(rep + k) % cyc.size()];
                pp.orbit.push_back(TorusPoint::from_rational(w.first, w.second, D));
            }
            pp.point = pp.orbit.front();
            orbits.push_back(std::move(pp));
        }
    }

    std::sort(orbits.begin(), orbits.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
        if (a.period != b.period) return a.period < b.period;
        return a.point < b.point;
    });
    return {std::move(orbits), count};
}

}  // namespace birkhoff
