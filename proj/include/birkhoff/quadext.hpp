#pragma once

#include <cassert>
#include <string>

#include "birkhoff/errors.hpp"
#include "birkhoff/interval.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

/// Exact element a + b*sqrt(D) of the real quadratic field Q(sqrt(D)),
/// D a fixed square-free positive non-square integer. All arithmetic is
/// exact; comparisons and signs are decided without any floating point.
class QuadExt {
  public:
    QuadExt() : d_(0) {}
    QuadExt(BigRat rat, BigRat irr, unsigned long d)
        : a_(std::move(rat)), b_(std::move(irr)), d_(d) {}
    static QuadExt rational(BigRat q, unsigned long d) { return QuadExt(std::move(q), BigRat(0), d); }
    static QuadExt zero(unsigned long d) { return rational(BigRat(0), d); }
    static QuadExt one(unsigned long d) { return rational(BigRat(1), d); }
    static QuadExt sqrt_d(unsigned long d) { return QuadExt(BigRat(0), BigRat(1), d); }

    const BigRat& rat_part() const { return a_; }
    const BigRat& irr_part() const { return b_; }
    unsigned long disc() const { return d_; }
    bool is_rational() const { return b_ == 0; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    QuadExt conj() const { return QuadExt(a_, -b_, d_); }
    /// Field norm a^2 - D*b^2 (the rational part of x * conj(x)).
    BigRat norm() const { return a_ * a_ - BigRat(static_cast<long>(d_)) * b_ * b_; }

    friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
        assert(x.d_ == y.d_ || x.d_ == 0 || y.d_ == 0);
        return QuadExt(x.a_ + y.a_, x.b_ + y.b_, x.d_ ? x.d_ : y.d_);
    }
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y) {
        assert(x.d_ == y.d_ || x.d_ == 0 || y.d_ == 0);
        return QuadExt(x.a_ - y.a_, x.b_ - y.b_, x.d_ ? x.d_ : y.d_);
    }
    friend QuadExt operator-(const QuadExt& x) { return QuadExt(-x.a_, -x.b_, x.d_); }
    friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
        assert(x.d_ == y.d_ || x.d_ == 0 || y.d_ == 0);
        unsigned long d = x.d_ ? x.d_ : y.d_;
        BigRat dd(static_cast<long>(d));
        return QuadExt(x.a_ * y.a_ + dd * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, d);
    }
    friend QuadExt operator*(const BigRat& c, const QuadExt& x) { return QuadExt(c * x.a_, c * x.b_, x.d_); }
    QuadExt inverse() const {
        BigRat n = norm();
        if (n == 0) throw DivisionByZero("QuadExt::inverse of zero");
        return QuadExt(a_ / n, -b_ / n, d_);
    }
    friend QuadExt operator/(const QuadExt& x, const QuadExt& y) { return x * y.inverse(); }

    friend bool operator==(const QuadExt& x, const QuadExt& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
    friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

    /// Exact sign. Never consults floating point: mixed-sign cases compare
    /// a^2 against D*b^2, which decides a vs -b*sqrt(D) exactly (sqrt(D) is
    /// irrational, so equality forces a = b = 0).
    int sign() const {
        int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        BigRat lhs = a_ * a_;
        BigRat rhs = BigRat(static_cast<long>(d_)) * b_ * b_;
        int c = cmp(lhs, rhs);
        // |a| vs |b|sqrt(D): whichever dominates gives its term's sign.
        if (c == 0) throw Error("QuadExt::sign: sqrt(D) rational, D not square-free?");
        return c > 0 ? sa : sb;
    }
    int cmp(const QuadExt& y) const { return (*this - y).sign(); }
    friend bool operator<(const QuadExt& x, const QuadExt& y) { return x.cmp(y) < 0; }
    friend bool operator<=(const QuadExt& x, const QuadExt& y) { return x.cmp(y) <= 0; }
    friend bool operator>(const QuadExt& x, const QuadExt& y) { return x.cmp(y) > 0; }
    friend bool operator>=(const QuadExt& x, const QuadExt& y) { return x.cmp(y) >= 0; }

    QuadExt abs() const { return sign() < 0 ? -*this : *this; }
    /// Compare |x| with |y| exactly.
    int abs_cmp(const QuadExt& y) const { return this->abs().cmp(y.abs()); }

    /// Exact floor. Rational values use integer division; irrational values
    /// are separated from every integer, so interval refinement terminates.
    BigInt floor() const {
        if (is_rational()) return floor_rat(a_);
        for (mpfr_prec_t p = 96;; p *= 2) {
            Interval e = enclose(p);
            MpFloat flo(p), fhi(p);
            mpfr_floor(flo.get(), e.lo().get());
            mpfr_floor(fhi.get(), e.hi().get());
            if (flo == fhi) {
                BigInt n;
                mpfr_get_z(n.get_mpz_t(), flo.get(), MPFR_RNDN);
                return n;
            }
            if (p > (1 << 22)) throw PrecisionExhausted("QuadExt::floor");
        }
    }
    /// Fractional part in [0, 1), exact.
    QuadExt reduced() const { return *this - QuadExt::rational(BigRat(floor()), d_); }
    /// Representative of the class mod 1 lying in (-1/2, 1/2], exact.
    QuadExt centered() const {
        QuadExt half(make_rat(1, 2), BigRat(0), d_);
        QuadExt c = (*this + half).reduced() - half;
        if (c == -half) c = half;  // tie x = n + 1/2 maps to +1/2
        return c;
    }

    /// Rigorous enclosure with width <= 2^(1-prec) * max(1, |x|).
    /// The only irrational ingredient is sqrt(D): its dyadic bounds give
    /// exact rational bounds on x, converted outward in a single rounding,
    /// so refining the precision always yields a sub-interval.
    Interval enclose(mpfr_prec_t prec) const {
        if (prec < 8) prec = 8;
        for (mpfr_prec_t p = 2 * prec + 8;; p *= 2) {
            MpFloat slo(p), shi(p);
            mpfr_sqrt_ui(slo.get(), d_ ? d_ : 1, MPFR_RNDD);
            mpfr_sqrt_ui(shi.get(), d_ ? d_ : 1, MPFR_RNDU);
            BigRat sq_lo = rat_from_mpfr(slo.get());
            BigRat sq_hi = rat_from_mpfr(shi.get());
            BigRat v_lo = a_ + b_ * (sgn(b_) >= 0 ? sq_lo : sq_hi);
            BigRat v_hi = a_ + b_ * (sgn(b_) >= 0 ? sq_hi : sq_lo);
            MpFloat lo(prec), hi(prec);
            mpfr_set_q(lo.get(), v_lo.get_mpq_t(), MPFR_RNDD);
            mpfr_set_q(hi.get(), v_hi.get_mpq_t(), MPFR_RNDU);
            Interval out(std::move(lo), std::move(hi));
            // contract check against an under-approximation of max(1, |x|),
            // so passing it implies width <= 2^(1-prec) * max(1, |x|)
            MpFloat bound(prec + 8), m(prec + 8), one(prec + 8);
            mpfr_set_si(one.get(), 1, MPFR_RNDN);
            if (out.lo().sign() > 0 || out.hi().sign() < 0) {
                MpFloat alo(prec + 8), ahi(prec + 8);
                mpfr_abs(alo.get(), out.lo().get(), MPFR_RNDD);
                mpfr_abs(ahi.get(), out.hi().get(), MPFR_RNDD);
                mpfr_min(m.get(), alo.get(), ahi.get(), MPFR_RNDD);
            } else {
                mpfr_set_zero(m.get(), 1);
            }
            mpfr_max(m.get(), m.get(), one.get(), MPFR_RNDD);
            mpfr_mul_2si(bound.get(), m.get(), 1 - static_cast<long>(prec), MPFR_RNDD);
            if (out.width() <= bound) return out;
            if (p > (1 << 22)) throw PrecisionExhausted("QuadExt::enclose");
        }
    }

    std::string to_string() const {
        if (is_rational()) return rat_to_string(a_);
        return rat_to_string(a_) + " + " + rat_to_string(b_) + "*sqrt(" + std::to_string(d_) + ")";
    }
    static QuadExt parse(const std::string& s, unsigned long d) {
        auto plus = s.find("+");
        auto sq = s.find("*sqrt(");
        if (sq == std::string::npos) return rational(parse_rational(s), d);
        if (plus == std::string::npos) throw ParseError("QuadExt::parse: '" + s + "'");
        BigRat a = parse_rational(s.substr(0, plus));
        BigRat b = parse_rational(s.substr(plus + 1, sq - plus - 1));
        return QuadExt(a, b, d);
    }

  private:
    static int sgn(const BigRat& q) { return mpq_sgn(q.get_mpq_t()); }
    static int cmp(const BigRat& x, const BigRat& y) { return mpq_cmp(x.get_mpq_t(), y.get_mpq_t()); }

    BigRat a_, b_;
    unsigned long d_;
};

/// 2-vector over the quadratic field.
struct QuadVec2 {
    QuadExt x, y;

    friend QuadVec2 operator+(const QuadVec2& u, const QuadVec2& v) { return {u.x + v.x, u.y + v.y}; }
    friend QuadVec2 operator-(const QuadVec2& u, const QuadVec2& v) { return {u.x - v.x, u.y - v.y}; }
    friend QuadVec2 operator-(const QuadVec2& u) { return {-u.x, -u.y}; }
    friend QuadVec2 operator*(const QuadExt& c, const QuadVec2& v) { return {c * v.x, c * v.y}; }

    QuadExt dot(const QuadVec2& v) const { return x * v.x + y * v.y; }
    QuadExt norm_sq() const { return x * x + y * y; }
    bool is_zero() const { return x.is_zero() && y.is_zero(); }
    Interval norm(mpfr_prec_t prec) const { return norm_sq().enclose(prec).sqrt_nonneg(); }
};

}  // namespace birkhoff
