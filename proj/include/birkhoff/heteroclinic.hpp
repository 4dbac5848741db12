#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/matrix.hpp"
#include "birkhoff/torus.hpp"

namespace birkhoff {

/// Stable or unstable line of a periodic point: a straight line in the plane
/// through a lift of the point, with an exact eigenvector direction.
struct InvariantLine {
    LiftedPoint base;   // canonical lift (coordinates in [0,1)^2)
    QuadVec2 direction; // exact eigenvector (unnormalized)
    bool stable = true;
};

inline InvariantLine invariant_line(const PeriodicPoint& p, const EigenData& eig, bool stable) {
    return {p.point.lift(), stable ? eig.v_s : eig.v_u, stable};
}

/// One transversal intersection of a stable and an unstable line, with the
/// exact line parameters that produced it.
struct Intersection {
    TorusPoint point;
    QuadExt t;  // parameter along the stable line
    QuadExt u;  // parameter along the unstable line
    long m1 = 0, m2 = 0;  // integer translate applied to the unstable base
};

/// Solves base_s + t v_s = base_u + m + u v_u exactly over the field, for
/// every integer translate m with |m|_inf <= radius. Results are projected,
/// de-duplicated, and sorted by the larger of the two line distances
/// |t| |v_s| and |u| |v_u| (exact squared comparisons; ties broken
/// lexicographically on (t, u)). The line distance dominates the quotient
/// distance to the base point and is the quantity every decay estimate
/// consumes, so the head of the list is the best heteroclinic candidate.
inline std::vector<Intersection> intersect_lines(const InvariantLine& ls, const InvariantLine& lu,
                                                 long radius) {
    if (!ls.stable || lu.stable) throw Error("intersect_lines: need (stable, unstable)");
    const QuadVec2& vs = ls.direction;
    const QuadVec2& vu = lu.direction;
    QuadExt det = vs.x * (-vu.y) - (-vu.x) * vs.y;
    if (det.is_zero()) throw Error("intersect_lines: parallel directions");
    QuadExt ns_sq = vs.norm_sq();
    QuadExt nu_sq = vu.norm_sq();

    std::vector<Intersection> out;
    for (long m1 = -radius; m1 <= radius; ++m1) {
        for (long m2 = -radius; m2 <= radius; ++m2) {
            unsigned long D = vs.x.disc();
            QuadVec2 rhs{lu.base.x + QuadExt::rational(BigRat(m1), D) - ls.base.x,
                         lu.base.y + QuadExt::rational(BigRat(m2), D) - ls.base.y};
            QuadExt t = (rhs.x * (-vu.y) - (-vu.x) * rhs.y) / det;
            QuadExt u = (vs.x * rhs.y - vs.y * rhs.x) / det;
            LiftedPoint hit{ls.base.x + t * vs.x, ls.base.y + t * vs.y};
            out.push_back({TorusPoint::reduce(hit), t, u, m1, m2});
        }
    }

    auto param_dist_sq = [&](const Intersection& i) {
        QuadExt ds = i.t * i.t * ns_sq;
        QuadExt du = i.u * i.u * nu_sq;
        return ds.cmp(du) >= 0 ? ds : du;
    };
    auto key_less = [&](const Intersection& a, const Intersection& b) {
        int c = param_dist_sq(a).cmp(param_dist_sq(b));
        if (c != 0) return c < 0;
        c = a.t.cmp(b.t);
        if (c != 0) return c < 0;
        return a.u.cmp(b.u) < 0;
    };
    std::sort(out.begin(), out.end(), key_less);
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Intersection& a, const Intersection& b) {
                              return a.point == b.point;
                          }),
              out.end());
    return out;
}

/// Heteroclinic data for a pair of periodic orbits:
///   x in W^s(p) cap W^u(q),  y in W^s(q) cap W^u(p),
/// with rigorous upper bounds on the four anchor distances. The d* bounds
/// are lift-parameter distances (|t| |v|), which dominate the torus
/// distances and drive every geometric decay estimate exactly.
struct HeteroclinicPair {
    PeriodicPoint p, q;
    TorusPoint x, y;
    QuadExt t_x, u_x;  // x = p + t_x v_s = q + m + u_x v_u (lifted)
    QuadExt t_y, u_y;  // y = q + t_y v_s = p + m' + u_y v_u (lifted)
    Interval dxp, dxq, dyq, dyp;  // enclosures of the four line distances
    double delta0 = 0.0;          // upper bound on max of the four
    double H = 1.0;
    double lam = 0.0;
    EigenData eig;
};

/// Picks x minimizing max(d(x,p), d(x,q)) and y minimizing max(d(y,q), d(y,p))
/// among the transversal intersections within the translate search radius,
/// excluding the anchor points themselves (relevant in the homoclinic case).
inline HeteroclinicPair hetero_pair(const PeriodicPoint& p, const PeriodicPoint& q,
                                    const EigenData& eig, long search_radius = 2,
                                    mpfr_prec_t prec = 128) {
    auto pick = [&](const PeriodicPoint& s_anchor, const PeriodicPoint& u_anchor)
        -> Intersection {
        auto hits = intersect_lines(invariant_line(s_anchor, eig, true),
                                    invariant_line(u_anchor, eig, false), search_radius);
        for (const auto& h : hits) {
            if (h.point == s_anchor.point || h.point == u_anchor.point) continue;
            return h;  // hits are sorted: first admissible is the minimizer
        }
        throw Error("hetero_pair: no intersection away from the anchors; enlarge the radius");
    };

    HeteroclinicPair out;
    out.p = p;
    out.q = q;
    out.eig = eig;
    Intersection ix = pick(p, q);
    Intersection iy = pick(q, p);
    out.x = ix.point;
    out.y = iy.point;
    out.t_x = ix.t;
    out.u_x = ix.u;
    out.t_y = iy.t;
    out.u_y = iy.u;

    Interval ns = eig.v_s.norm(prec);
    Interval nu = eig.v_u.norm(prec);
    out.dxp = ix.t.abs().enclose(prec) * ns;
    out.dxq = ix.u.abs().enclose(prec) * nu;
    out.dyq = iy.t.abs().enclose(prec) * ns;
    out.dyp = iy.u.abs().enclose(prec) * nu;
    out.delta0 = max(max(out.dxp, out.dxq), max(out.dyq, out.dyp)).hi_d();
    out.H = eig.H;
    out.lam = eig.lam;
    return out;
}

/// Degenerate pair anchored at a single periodic orbit with x = y = anchor:
/// all four distances are exactly zero, and the pseudo-orbit built from it
/// is a true orbit. Useful as an exactness fixture.
inline HeteroclinicPair degenerate_pair(const PeriodicPoint& p, const EigenData& eig,
                                        mpfr_prec_t prec = 128) {
    HeteroclinicPair out;
    out.p = p;
    out.q = p;
    out.eig = eig;
    out.x = p.point;
    out.y = p.point;
    QuadExt z = QuadExt::zero(eig.D);
    out.t_x = out.u_x = out.t_y = out.u_y = z;
    Interval zero = Interval::from_int(0, prec);
    out.dxp = out.dxq = out.dyq = out.dyp = zero;
    out.delta0 = 0.0;
    out.H = eig.H;
    out.lam = eig.lam;
    return out;
}

/// Recomputes d(f^n x, f^n p) (and the three sibling distances with the
/// appropriate forward/backward iterates) and checks the geometric decay
/// bound H lam^n d0. Only a proven violation (disjoint enclosures on the
/// wrong side) raises DecayViolated; it signals a bug, not a math case.
inline Interval decay_check(const IntMat2& m, const HeteroclinicPair& pair, long n,
                            mpfr_prec_t prec = 128) {
    if (n < 0) throw Error("decay_check: n must be >= 0");
    IntMat2 fwd = mat_pow(m, n);
    IntMat2 bwd = mat_pow(m, -n);
    Interval lam_n = pair.eig.lam_interval(prec).pow_ui(static_cast<unsigned long>(n));
    Interval h = Interval::from_double(pair.H, prec);

    auto check = [&](const IntMat2& it, const TorusPoint& a, const TorusPoint& anchor,
                     const Interval& d0, const char* what) -> Interval {
        Interval dist = torus_distance(apply(it, a), apply(it, anchor), prec);
        Interval bound = h * lam_n * d0;
        if (dist.lo() > bound.hi())
            throw DecayViolated(std::string("decay_check: ") + what + " exceeds H lam^n d0");
        return dist;
    };

    Interval first = check(fwd, pair.x, pair.p.point, pair.dxp, "d(f^n x, f^n p)");
    check(bwd, pair.x, pair.q.point, pair.dxq, "d(f^-n x, f^-n q)");
    check(fwd, pair.y, pair.q.point, pair.dyq, "d(f^n y, f^n q)");
    check(bwd, pair.y, pair.p.point, pair.dyp, "d(f^-n y, f^-n p)");
    return first;
}

}  // namespace birkhoff
