#pragma once

#include <array>
#include <string>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/heteroclinic.hpp"
#include "birkhoff/matrix.hpp"
#include "birkhoff/torus.hpp"

namespace birkhoff {

/// The four-segment periodic pseudo-orbit
///   Q = { f^-L1(y) .. f^-1(y), y .. f^(L2-1)(y), f^-L3(x) .. f^-1(x), x .. f^(L4-1)(x) }.
/// Segments are exact orbit pieces, so the only error carriers are the
/// junction seams; each seam is the centered representative of the gap
/// between f(last of one segment) and the first of the next, which is the
/// optimal integer re-lift.
struct PseudoOrbit {
    std::array<std::vector<TorusPoint>, 4> segments;
    long L1 = 0, L2 = 0, L3 = 0, L4 = 0;
    long L = 0, L0 = 0;
    BigRat alpha;                    // L0 / max L_i, in (0, 1]
    std::array<QuadVec2, 4> seams;   // after S1, S2, S3 and the wrap after S4
    double delta = 0.0;              // upper bound on the max Euclidean seam norm
    double delta_priori = 0.0;       // 2 H lam^L0 delta0, rounded up
    HeteroclinicPair pair;

    long y_index() const { return L1; }  // global position of y in Q

    const TorusPoint& at(long n) const {
        long i = n % L;
        if (i < 0) i += L;
        if (i < L1) return segments[0][static_cast<std::size_t>(i)];
        i -= L1;
        if (i < L2) return segments[1][static_cast<std::size_t>(i)];
        i -= L2;
        if (i < L3) return segments[2][static_cast<std::size_t>(i)];
        i -= L3;
        return segments[3][static_cast<std::size_t>(i)];
    }
};

/// A valid Lipschitz shadowing constant for the linear system:
/// mu = H (1/(1 - |lambda_s|) + 1/(|lambda_u| - 1)), rounded up.
inline double mu_constant(const EigenData& eig, mpfr_prec_t prec = 96) {
    Interval one = Interval::from_int(1, prec);
    Interval ls = eig.lambda_s.abs().enclose(prec);
    Interval lu = eig.lambda_u.abs().enclose(prec);
    Interval h = Interval::from_double(eig.H, prec);
    Interval mu = h * (one / (one - ls) + one / (lu - one));
    return mu.hi_d();
}

inline PseudoOrbit build_pseudo_orbit(const IntMat2& m, const HeteroclinicPair& pair, long L1,
                                      long L2, long L3, long L4, long L_cap = 5000,
                                      mpfr_prec_t prec = 128) {
    long pp = pair.p.period, pq = pair.q.period;
    if (L1 <= 0 || L2 <= 0 || L3 <= 0 || L4 <= 0)
        throw BadMultiples("build_pseudo_orbit: lengths must be positive");
    if (L1 % pp || L4 % pp)
        throw BadMultiples("build_pseudo_orbit: L1, L4 must be multiples of period(p)");
    if (L2 % pq || L3 % pq)
        throw BadMultiples("build_pseudo_orbit: L2, L3 must be multiples of period(q)");
    PseudoOrbit po;
    po.L1 = L1;
    po.L2 = L2;
    po.L3 = L3;
    po.L4 = L4;
    po.L = L1 + L2 + L3 + L4;
    po.L0 = std::min(std::min(L1, L2), std::min(L3, L4));
    po.alpha = make_rat(po.L0, std::max(std::max(L1, L2), std::max(L3, L4)));
    po.pair = pair;
    if (po.L > L_cap)
        throw CapExceeded("build_pseudo_orbit: L = " + std::to_string(po.L) + " exceeds cap " +
                          std::to_string(L_cap));

    IntMat2 inv = mat_pow(m, -1);
    auto backward = [&](const TorusPoint& base, long len) {
        std::vector<TorusPoint> seg(static_cast<std::size_t>(len));
        TorusPoint w = base;
        for (long i = len - 1; i >= 0; --i) {
            w = apply(inv, w);
            seg[static_cast<std::size_t>(i)] = w;
        }
        return seg;
    };
    auto forward = [&](const TorusPoint& base, long len) {
        std::vector<TorusPoint> seg;
        seg.reserve(static_cast<std::size_t>(len));
        TorusPoint w = base;
        for (long i = 0; i < len; ++i) {
            seg.push_back(w);
            w = apply(m, w);
        }
        return seg;
    };
    po.segments[0] = backward(pair.y, L1);
    po.segments[1] = forward(pair.y, L2);
    po.segments[2] = backward(pair.x, L3);
    po.segments[3] = forward(pair.x, L4);

    auto seam = [&](const TorusPoint& prev_last, const TorusPoint& next_first) {
        return torus_displacement(next_first, apply(m, prev_last));
    };
    po.seams[0] = seam(po.segments[0].back(), po.segments[1].front());
    po.seams[1] = seam(po.segments[1].back(), po.segments[2].front());
    po.seams[2] = seam(po.segments[2].back(), po.segments[3].front());
    po.seams[3] = seam(po.segments[3].back(), po.segments[0].front());
    if (!po.seams[0].is_zero() || !po.seams[2].is_zero())
        throw Error("build_pseudo_orbit: orbit-interior seam is nonzero (bug)");

    Interval dmax = Interval::from_int(0, prec);
    for (const auto& s : po.seams)
        if (!s.is_zero()) dmax = max(dmax, s.norm_sq().enclose(prec).sqrt_nonneg());
    po.delta = dmax.hi_d();

    Interval lam_pow = pair.eig.lam_interval(prec).pow_ui(static_cast<unsigned long>(po.L0));
    Interval bound = Interval::from_int(2, prec) * Interval::from_double(pair.H, prec) * lam_pow *
                     Interval::from_double(pair.delta0, prec);
    po.delta_priori = bound.hi_d();
    if (dmax.lo() > bound.hi())
        throw Error("build_pseudo_orbit: seam norm provably exceeds 2 H lam^L0 delta0 (bug)");
    return po;
}

/// Certified periodic shadow of a pseudo-orbit.
struct ShadowCertificate {
    PeriodicPoint z;       // indexed so that z shadows the position of y
    TorusPoint z_at_0;     // the orbit point aligned with Q[0] = f^-L1(y)
    long L = 0;            // shadowing period (z is exactly L-periodic)
    long y_index = 0;
    double max_dist = 0.0; // verified max_n d(f^n z, Q[n]), upper bound
    double delta = 0.0;
    double mu = 0.0;
    double a_posteriori_ratio = 0.0;
};

/// Recomputes max_n d(f^n z, x_n) rigorously over all L positions and
/// checks it against mu * delta. Only a proven violation throws.
inline double verify_shadow(const IntMat2& m, const ShadowCertificate& cert,
                            const PseudoOrbit& po, mpfr_prec_t prec) {
    MpFloat max_lo(prec), max_hi(prec);
    mpfr_set_zero(max_lo.get(), 1);
    mpfr_set_zero(max_hi.get(), 1);
    TorusPoint w = cert.z_at_0;
    for (long n = 0; n < po.L; ++n) {
        Interval d = torus_distance(w, po.at(n), prec);
        if (d.lo() > max_lo) max_lo = d.lo();
        if (d.hi() > max_hi) max_hi = d.hi();
        w = apply(m, w);
    }
    if (!(w == cert.z_at_0)) throw Error("verify_shadow: z is not L-periodic (bug)");
    Interval bound = Interval::from_double(cert.mu, prec) * Interval::from_double(cert.delta, prec);
    if (max_lo > bound.hi())
        throw ShadowBoundViolated("verify_shadow: max distance provably exceeds mu * delta");
    return max_hi.to_double(MPFR_RNDU);
}

/// Solves the one-period accumulated-error equation
///   (A^L - I) c = sum_j A^(L-1-j) e_j
/// exactly over the field and returns the projected shadow point. The
/// irrational parts must cancel (periodic points are rational); anything
/// else is an implementation bug, reported as IrrationalResidue.
inline ShadowCertificate shadow_periodic(const IntMat2& m, const PseudoOrbit& po,
                                         mpfr_prec_t prec = 128) {
    unsigned long D = po.pair.eig.D;
    const long L = po.L;

    // positions of the four junction seams in the flattened orbit
    std::array<long, 4> at{po.L1 - 1, po.L1 + po.L2 - 1, po.L1 + po.L2 + po.L3 - 1, L - 1};
    QuadVec2 rhs{QuadExt::zero(D), QuadExt::zero(D)};
    for (int j = 0; j < 4; ++j) {
        if (po.seams[static_cast<std::size_t>(j)].is_zero()) continue;
        IntMat2 p = mat_pow(m, L - 1 - at[static_cast<std::size_t>(j)]);
        rhs = rhs + p.apply(po.seams[static_cast<std::size_t>(j)]);
    }

    IntMat2 AL = mat_pow(m, L);
    IntMat2 M{AL.a - 1, AL.b, AL.c, AL.d - 1};
    BigInt det = M.det();
    if (det == 0) throw Error("shadow_periodic: A^L - I singular");
    // c = adj(M) rhs / det
    QuadExt det_q = QuadExt::rational(BigRat(det), D);
    QuadVec2 c{(QuadExt::rational(BigRat(M.d), D) * rhs.x -
                QuadExt::rational(BigRat(M.b), D) * rhs.y) /
                   det_q,
               (QuadExt::rational(BigRat(-M.c), D) * rhs.x +
                QuadExt::rational(BigRat(M.a), D) * rhs.y) /
                   det_q};

    LiftedPoint z_lift = po.at(0).lift() + c;
    TorusPoint z0 = TorusPoint::reduce(z_lift);
    if (!z0.is_rational())
        throw IrrationalResidue("shadow_periodic: shadow point has nonzero irrational part: " +
                                z0.x1.to_string() + ", " + z0.x2.to_string());
    {
        // (A^L - I) z0 must be an exact integer vector
        BigRat w1 = BigRat(M.a) * z0.x1.rat_part() + BigRat(M.b) * z0.x2.rat_part();
        BigRat w2 = BigRat(M.c) * z0.x1.rat_part() + BigRat(M.d) * z0.x2.rat_part();
        if (w1.get_den() != 1 || w2.get_den() != 1)
            throw IrrationalResidue("shadow_periodic: (A^L - I) z not integral (bug)");
    }

    ShadowCertificate cert;
    cert.z_at_0 = z0;
    cert.L = L;
    cert.y_index = po.y_index();
    cert.delta = po.delta;
    cert.mu = mu_constant(po.pair.eig);

    // index z at the position of y, and attach the minimal period
    TorusPoint zy = apply(mat_pow(m, po.y_index()), z0);
    long min_period = L;
    for (long d = 1; d <= L; ++d) {
        if (L % d != 0) continue;
        if (apply(mat_pow(m, d), zy) == zy) {
            min_period = d;
            break;
        }
    }
    cert.z.point = zy;
    cert.z.period = min_period;
    cert.z.orbit.reserve(static_cast<std::size_t>(min_period));
    TorusPoint w = zy;
    for (long i = 0; i < min_period; ++i) {
        cert.z.orbit.push_back(w);
        w = apply(m, w);
    }

    cert.max_dist = verify_shadow(m, cert, po, prec);
    double denom = cert.delta;
    cert.a_posteriori_ratio = denom > 0 ? cert.max_dist / denom : 0.0;
    return cert;
}

}  // namespace birkhoff
