#pragma once

#include <array>
#include <string>

#include "birkhoff/errors.hpp"
#include "birkhoff/quadext.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

/// 2x2 integer matrix with arbitrary-precision entries.
struct IntMat2 {
    BigInt a, b, c, d;  // [[a, b], [c, d]]

    static IntMat2 identity() { return {1, 0, 0, 1}; }

    BigInt det() const { return a * d - b * c; }
    BigInt trace() const { return a + d; }
    /// adj(M) * M = det(M) * I.
    IntMat2 adjugate() const { return {d, -b, -c, a}; }
    IntMat2 transpose() const { return {a, c, b, d}; }

    friend IntMat2 operator*(const IntMat2& x, const IntMat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const IntMat2& x, const IntMat2& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }

    QuadVec2 apply(const QuadVec2& v) const {
        BigRat ra(a), rb(b), rc(c), rd(d);
        return {ra * v.x + rb * v.y, rc * v.x + rd * v.y};
    }
    std::pair<BigRat, BigRat> apply(const BigRat& x, const BigRat& y) const {
        return {BigRat(a) * x + BigRat(b) * y, BigRat(c) * x + BigRat(d) * y};
    }

    std::string to_string() const {
        return "[[" + a.get_str() + "," + b.get_str() + "],[" + c.get_str() + "," + d.get_str() + "]]";
    }
};

/// Exact n-th power; negative powers require |det| = 1 (the inverse is then
/// integral, +/- the adjugate).
inline IntMat2 mat_pow(const IntMat2& m, long n) {
    IntMat2 base = m;
    if (n < 0) {
        BigInt det = m.det();
        if (det != 1 && det != -1)
            throw Error("mat_pow: negative power of non-unimodular matrix");
        IntMat2 adj = m.adjugate();
        if (det == -1) adj = {-adj.a, -adj.b, -adj.c, -adj.d};
        base = adj;
        n = -n;
    }
    IntMat2 out = IntMat2::identity();
    while (n > 0) {
        if (n & 1) out = out * base;
        base = base * base;
        n >>= 1;
    }
    return out;
}

/// Square-free part of a positive integer, by trial division.
inline BigInt squarefree_part(BigInt n) {
    if (n <= 0) throw Error("squarefree_part: nonpositive input");
    BigInt out = 1;
    for (BigInt p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e % 2 == 1) out *= p;
    }
    return out * n;
}

/// Exact spectral data of a hyperbolic unimodular 2x2 integer matrix.
/// lambda_u, lambda_s and the eigenvectors live in Q(sqrt(D)) where D is the
/// square-free part of tr^2 - 4 det, and satisfy A v = lambda v exactly.
struct EigenData {
    QuadExt lambda_u, lambda_s;  // |lambda_u| > 1 > |lambda_s|
    QuadVec2 v_u, v_s;           // exact (unnormalized) eigenvectors
    unsigned long D = 0;
    double H = 1.0;    // upper bound on the condition number of the unit eigenbasis
    double lam = 0.0;  // upper bound on |lambda_s| (= 1/|lambda_u| for |det| = 1)

    Interval lam_interval(mpfr_prec_t prec) const { return lambda_s.abs().enclose(prec); }
};

inline EigenData eigen_data(const IntMat2& m, mpfr_prec_t prec = 128) {
    BigInt det = m.det();
    BigInt tr = m.trace();
    if (det != 1 && det != -1)
        throw NotHyperbolic("eigen_data: |det| must be 1, got " + det.get_str());
    // exact integer criterion: det=1 needs |tr|>2, det=-1 needs tr != 0
    if (det == 1 && (tr <= 2 && tr >= -2))
        throw NotHyperbolic("eigen_data: eigenvalue of modulus 1 (det 1, |tr| <= 2)");
    if (det == -1 && tr == 0)
        throw NotHyperbolic("eigen_data: eigenvalue of modulus 1 (det -1, tr = 0)");

    BigInt disc = tr * tr - 4 * det;  // > 0 here
    BigInt root;
    if (mpz_root(root.get_mpz_t(), disc.get_mpz_t(), 2) != 0)
        throw RationalSpectrum("eigen_data: discriminant " + disc.get_str() + " is a perfect square");
    BigInt D_big = squarefree_part(disc);
    if (!D_big.fits_ulong_p()) throw Error("eigen_data: discriminant too large");
    unsigned long D = D_big.get_ui();
    // disc = f^2 * D, so sqrt(disc) = f * sqrt(D)
    BigInt fsq = disc / D_big;
    BigInt f;
    mpz_sqrt(f.get_mpz_t(), fsq.get_mpz_t());

    QuadExt half_tr = QuadExt::rational(make_rat(tr, BigInt(2)), D);
    QuadExt half_root(BigRat(0), make_rat(f, BigInt(2)), D);
    QuadExt l1 = half_tr + half_root;
    QuadExt l2 = half_tr - half_root;

    EigenData e;
    e.D = D;
    bool l1_big = l1.abs_cmp(l2) > 0;
    e.lambda_u = l1_big ? l1 : l2;
    e.lambda_s = l1_big ? l2 : l1;

    auto eigvec = [&](const QuadExt& lambda) -> QuadVec2 {
        QuadExt A = QuadExt::rational(BigRat(m.a), D);
        QuadExt Dq = QuadExt::rational(BigRat(m.d), D);
        if (m.b != 0) {
            // (a - lambda) x + b y = 0  ->  v = (1, (lambda - a)/b)
            return {QuadExt::one(D), (lambda - A) / QuadExt::rational(BigRat(m.b), D)};
        }
        if (m.c != 0) {
            // c x + (d - lambda) y = 0  ->  v = ((lambda - d)/c, 1)
            return {(lambda - Dq) / QuadExt::rational(BigRat(m.c), D), QuadExt::one(D)};
        }
        throw NotHyperbolic("eigen_data: diagonal unimodular matrix is not hyperbolic");
    };
    e.v_u = eigvec(e.lambda_u);
    e.v_s = eigvec(e.lambda_s);

    // H >= cond_2(P) for P the matrix of unit eigenvectors. With
    // c = cos(angle between them), cond_2(P) = sqrt((1+|c|)/(1-|c|)),
    // and c^2 = (v_u . v_s)^2 / (|v_u|^2 |v_s|^2) is exact.
    QuadExt dot = e.v_u.dot(e.v_s);
    QuadExt c_sq = (dot * dot) / (e.v_u.norm_sq() * e.v_s.norm_sq());
    Interval c_abs = c_sq.enclose(prec).sqrt_nonneg();
    Interval one = Interval::from_int(1, prec);
    Interval h = ((one + c_abs) / (one - c_abs)).sqrt_nonneg();
    e.H = std::max(1.0, h.hi_d());
    e.lam = e.lambda_s.abs().enclose(prec).hi_d();
    return e;
}

}  // namespace birkhoff
