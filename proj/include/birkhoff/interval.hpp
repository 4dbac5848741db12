#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>

#include "birkhoff/errors.hpp"
#include "birkhoff/rational.hpp"

namespace birkhoff {

/// RAII wrapper around a single mpfr_t. Value semantics, precision carried
/// by the underlying mpfr variable.
class MpFloat {
  public:
    explicit MpFloat(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    MpFloat(const MpFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);  // same precision: exact
    }
    MpFloat(MpFloat&& o) noexcept {
        mpfr_init2(v_, 2);
        mpfr_swap(v_, o.v_);
    }
    MpFloat& operator=(MpFloat o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~MpFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    double to_double(mpfr_rnd_t rnd) const { return mpfr_get_d(v_, rnd); }
    bool is_nan() const { return mpfr_nan_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    friend bool operator<(const MpFloat& a, const MpFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator<=(const MpFloat& a, const MpFloat& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
    friend bool operator>(const MpFloat& a, const MpFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator>=(const MpFloat& a, const MpFloat& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }
    friend bool operator==(const MpFloat& a, const MpFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

  private:
    mpfr_t v_;
};

/// Exact rational value of a finite mpfr number.
inline BigRat rat_from_mpfr(mpfr_srcptr f) {
    if (mpfr_zero_p(f)) return BigRat(0);
    BigInt m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), f);
    BigRat q(m);
    if (e >= 0)
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    else
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    return q;
}

/// Closed interval [lo, hi] with mpfr endpoints; every operation rounds
/// outward, so the true value of any expression stays enclosed.
class Interval {
  public:
    Interval() : lo_(2), hi_(2) {}
    Interval(MpFloat lo, MpFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (!(lo_ <= hi_)) throw Error("Interval: lo > hi");
    }

    static Interval from_rat(const BigRat& q, mpfr_prec_t prec) {
        MpFloat lo(prec), hi(prec);
        mpfr_set_q(lo.get(), q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(hi.get(), q.get_mpq_t(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    static Interval from_int(long n, mpfr_prec_t prec) {
        MpFloat lo(prec), hi(prec);
        mpfr_set_si(lo.get(), n, MPFR_RNDD);
        mpfr_set_si(hi.get(), n, MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    static Interval from_double(double x, mpfr_prec_t prec = 64) {
        MpFloat lo(prec), hi(prec);
        mpfr_set_d(lo.get(), x, MPFR_RNDD);
        mpfr_set_d(hi.get(), x, MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    static Interval from_doubles(double lo, double hi, mpfr_prec_t prec = 64) {
        MpFloat l(prec), h(prec);
        mpfr_set_d(l.get(), lo, MPFR_RNDD);
        mpfr_set_d(h.get(), hi, MPFR_RNDU);
        return Interval(std::move(l), std::move(h));
    }
    /// Encloses a decimal literal; handy for frozen oracle digits in tests.
    static Interval from_decimal(const std::string& s, mpfr_prec_t prec) {
        MpFloat lo(prec), hi(prec);
        if (mpfr_set_str(lo.get(), s.c_str(), 10, MPFR_RNDD) != 0)
            throw ParseError("Interval::from_decimal: '" + s + "'");
        mpfr_set_str(hi.get(), s.c_str(), 10, MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    static Interval sqrt_ui(unsigned long n, mpfr_prec_t prec) {
        MpFloat lo(prec), hi(prec);
        mpfr_sqrt_ui(lo.get(), n, MPFR_RNDD);
        mpfr_sqrt_ui(hi.get(), n, MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    static Interval pi(mpfr_prec_t prec) {
        MpFloat lo(prec), hi(prec);
        mpfr_const_pi(lo.get(), MPFR_RNDD);
        mpfr_const_pi(hi.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    const MpFloat& lo() const { return lo_; }
    const MpFloat& hi() const { return hi_; }
    double lo_d() const { return lo_.to_double(MPFR_RNDD); }
    double hi_d() const { return hi_.to_double(MPFR_RNDU); }
    double mid_d() const { return 0.5 * (lo_.to_double(MPFR_RNDN) + hi_.to_double(MPFR_RNDN)); }
    mpfr_prec_t prec() const { return std::max(lo_.prec(), hi_.prec()); }

    double width_d() const {
        MpFloat w(std::max<mpfr_prec_t>(lo_.prec(), 64));
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        return w.to_double(MPFR_RNDU);
    }
    MpFloat width() const {
        MpFloat w(prec());
        mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
        return w;
    }

    bool contains_zero() const { return lo_.sign() <= 0 && hi_.sign() >= 0; }
    bool is_positive() const { return lo_.sign() > 0; }
    bool is_negative() const { return hi_.sign() < 0; }
    bool contains(const BigRat& q) const {
        return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
    }
    bool subset_of(const Interval& o) const { return o.lo_ <= lo_ && hi_ <= o.hi_; }
    bool intersects(const Interval& o) const { return !(hi_ < o.lo_ || o.hi_ < lo_); }
    /// Strictly inside the open interval (a, b) given by exact rationals.
    bool strictly_inside(const BigRat& a, const BigRat& b) const {
        return mpfr_cmp_q(lo_.get(), a.get_mpq_t()) > 0 && mpfr_cmp_q(hi_.get(), b.get_mpq_t()) < 0;
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        MpFloat lo(p), hi(p);
        mpfr_add(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_add(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        MpFloat lo(p), hi(p);
        mpfr_sub(lo.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
        mpfr_sub(hi.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    friend Interval operator-(const Interval& a) {
        mpfr_prec_t p = a.prec();
        MpFloat lo(p), hi(p);
        mpfr_neg(lo.get(), a.hi_.get(), MPFR_RNDD);
        mpfr_neg(hi.get(), a.lo_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    friend Interval operator*(const Interval& a, const Interval& b) {
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        MpFloat lo(p), hi(p), t(p);
        bool first = true;
        auto consider = [&](mpfr_srcptr x, mpfr_srcptr y) {
            mpfr_mul(t.get(), x, y, MPFR_RNDD);
            if (first || t < lo) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            mpfr_mul(t.get(), x, y, MPFR_RNDU);
            if (first || t > hi) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            first = false;
        };
        consider(a.lo_.get(), b.lo_.get());
        consider(a.lo_.get(), b.hi_.get());
        consider(a.hi_.get(), b.lo_.get());
        consider(a.hi_.get(), b.hi_.get());
        return Interval(std::move(lo), std::move(hi));
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains_zero()) throw DivisionByZero("Interval division by interval containing 0");
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        MpFloat lo(p), hi(p), t(p);
        bool first = true;
        auto consider = [&](mpfr_srcptr x, mpfr_srcptr y) {
            mpfr_div(t.get(), x, y, MPFR_RNDD);
            if (first || t < lo) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            mpfr_div(t.get(), x, y, MPFR_RNDU);
            if (first || t > hi) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            first = false;
        };
        consider(a.lo_.get(), b.lo_.get());
        consider(a.lo_.get(), b.hi_.get());
        consider(a.hi_.get(), b.lo_.get());
        consider(a.hi_.get(), b.hi_.get());
        return Interval(std::move(lo), std::move(hi));
    }

    Interval abs() const {
        if (lo_.sign() >= 0) return *this;
        if (hi_.sign() <= 0) return -*this;
        mpfr_prec_t p = prec();
        MpFloat lo(p), hi(p), t(p);
        mpfr_set_zero(lo.get(), 1);
        mpfr_neg(t.get(), lo_.get(), MPFR_RNDU);
        mpfr_max(hi.get(), t.get(), hi_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    Interval sqrt() const {
        if (lo_.sign() < 0) throw Error("Interval::sqrt of negative interval");
        mpfr_prec_t p = prec();
        MpFloat lo(p), hi(p);
        mpfr_sqrt(lo.get(), lo_.get(), MPFR_RNDD);
        mpfr_sqrt(hi.get(), hi_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    /// sqrt of an enclosure of a value known to be nonnegative; a lower
    /// endpoint pushed below zero by outward rounding is clamped.
    Interval sqrt_nonneg() const {
        if (hi_.sign() < 0) throw Error("Interval::sqrt_nonneg of negative interval");
        if (lo_.sign() >= 0) return sqrt();
        mpfr_prec_t p = prec();
        MpFloat lo(p), hi(p);
        mpfr_set_zero(lo.get(), 1);
        mpfr_sqrt(hi.get(), hi_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    /// x^n for integer n >= 0 on a nonnegative interval.
    Interval pow_ui(unsigned long n) const {
        if (lo_.sign() < 0) throw Error("Interval::pow_ui of negative interval");
        mpfr_prec_t p = prec();
        MpFloat lo(p), hi(p);
        mpfr_pow_ui(lo.get(), lo_.get(), n, MPFR_RNDD);
        mpfr_pow_ui(hi.get(), hi_.get(), n, MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

    /// x^theta for a rational exponent, x strictly positive.
    Interval pow_rat(const BigRat& theta, mpfr_prec_t prec_bits) const {
        if (lo_.sign() <= 0) throw Error("Interval::pow_rat needs positive interval");
        if (theta == 1) return *this;
        mpfr_prec_t p = std::max(prec(), prec_bits);
        Interval th = Interval::from_rat(theta, p);
        MpFloat lo(p), hi(p), t(p);
        bool first = true;
        auto consider = [&](mpfr_srcptr x, mpfr_srcptr e) {
            mpfr_pow(t.get(), x, e, MPFR_RNDD);
            if (first || t < lo) mpfr_set(lo.get(), t.get(), MPFR_RNDD);
            mpfr_pow(t.get(), x, e, MPFR_RNDU);
            if (first || t > hi) mpfr_set(hi.get(), t.get(), MPFR_RNDU);
            first = false;
        };
        consider(lo_.get(), th.lo().get());
        consider(lo_.get(), th.hi().get());
        consider(hi_.get(), th.lo().get());
        consider(hi_.get(), th.hi().get());
        return Interval(std::move(lo), std::move(hi));
    }

    friend Interval min(const Interval& a, const Interval& b) {
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        MpFloat lo(p), hi(p);
        mpfr_min(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_min(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    friend Interval max(const Interval& a, const Interval& b) {
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        MpFloat lo(p), hi(p);
        mpfr_max(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_max(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    friend Interval hull(const Interval& a, const Interval& b) {
        mpfr_prec_t p = std::max(a.prec(), b.prec());
        MpFloat lo(p), hi(p);
        mpfr_min(lo.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
        mpfr_max(hi.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }

  private:
    // cos over a mpfr point, as an interval (one ulp of slack per endpoint).
    static Interval cos_point(mpfr_srcptr x, mpfr_prec_t p) {
        MpFloat lo(p), hi(p);
        mpfr_cos(lo.get(), x, MPFR_RNDD);
        mpfr_cos(hi.get(), x, MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    static Interval sin_point(mpfr_srcptr x, mpfr_prec_t p) {
        MpFloat lo(p), hi(p);
        mpfr_sin(lo.get(), x, MPFR_RNDD);
        mpfr_sin(hi.get(), x, MPFR_RNDU);
        return Interval(std::move(lo), std::move(hi));
    }
    // Range of f over an argument interval from endpoint values widened by
    // the argument width (|f'| <= 1 for sin and cos), clipped to [-1, 1].
    static Interval trig_range(const Interval& theta, bool is_cos) {
        mpfr_prec_t p = theta.prec();
        Interval at_lo = is_cos ? cos_point(theta.lo().get(), p) : sin_point(theta.lo().get(), p);
        Interval at_hi = is_cos ? cos_point(theta.hi().get(), p) : sin_point(theta.hi().get(), p);
        MpFloat w = theta.width();
        Interval spread = hull(at_lo, at_hi);
        MpFloat lo(p), hi(p), one(p), mone(p);
        mpfr_sub(lo.get(), spread.lo().get(), w.get(), MPFR_RNDD);
        mpfr_add(hi.get(), spread.hi().get(), w.get(), MPFR_RNDU);
        mpfr_set_si(one.get(), 1, MPFR_RNDN);
        mpfr_set_si(mone.get(), -1, MPFR_RNDN);
        mpfr_max(lo.get(), lo.get(), mone.get(), MPFR_RNDD);
        mpfr_min(hi.get(), hi.get(), one.get(), MPFR_RNDU);
        if (lo > hi) mpfr_swap(lo.get(), hi.get());  // clipping pathologies
        return Interval(std::move(lo), std::move(hi));
    }

  public:
    /// Enclosure of cos(2*pi*x).
    Interval cos2pi() const {
        mpfr_prec_t p = std::max<mpfr_prec_t>(prec(), 64);
        Interval theta = Interval::from_int(2, p) * Interval::pi(p) * (*this);
        return trig_range(theta, true);
    }
    /// Enclosure of sin(2*pi*x).
    Interval sin2pi() const {
        mpfr_prec_t p = std::max<mpfr_prec_t>(prec(), 64);
        Interval theta = Interval::from_int(2, p) * Interval::pi(p) * (*this);
        return trig_range(theta, false);
    }

    /// Hex-float pair for bit-exact round-tripping through text.
    std::pair<std::string, std::string> to_hex_pair() const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%a", lo_d());
        std::string l = buf;
        std::snprintf(buf, sizeof buf, "%a", hi_d());
        return {l, std::string(buf)};
    }
    static Interval from_hex_pair(const std::string& lo, const std::string& hi) {
        return from_doubles(std::strtod(lo.c_str(), nullptr), std::strtod(hi.c_str(), nullptr));
    }

  private:
    MpFloat lo_, hi_;
};

}  // namespace birkhoff
