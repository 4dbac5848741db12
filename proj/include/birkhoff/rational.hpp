#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "birkhoff/errors.hpp"

namespace birkhoff {

// Exact arbitrary-precision integers and rationals, backed by GMP.
// mpq_class keeps every value in lowest terms with a positive denominator,
// which is exactly the representation contract for rationals here.
using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigRat make_rat(const BigInt& num, const BigInt& den) {
    if (den == 0) throw DivisionByZero("make_rat: zero denominator");
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

inline BigRat make_rat(long num, long den) { return make_rat(BigInt(num), BigInt(den)); }

inline BigInt floor_rat(const BigRat& q) {
    BigInt r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline BigInt ceil_rat(const BigRat& q) {
    BigInt r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

/// Fractional part in [0, 1).
inline BigRat frac_rat(const BigRat& q) { return q - BigRat(floor_rat(q)); }

/// Nearest integer; halves round down so that the representative of the
/// tie lies in (-1/2, 1/2] (lexicographically smallest shift wins).
inline BigInt round_nearest(const BigRat& q) {
    return ceil_rat(q - make_rat(1, 2));
}

/// Writes a/b as l/k in lowest terms with k > 0.
inline std::pair<BigInt, BigInt> lowest_terms(const BigRat& a, const BigRat& b) {
    if (b == 0) throw DivisionByZero("lowest_terms: b = 0");
    BigRat r = a / b;
    return {r.get_num(), r.get_den()};
}

inline std::string rat_to_string(const BigRat& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "p/q", plain integers, and decimal literals like "-0.25" or "1e-3".
inline BigRat parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("parse_rational: empty string");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        BigInt num, den;
        if (mpz_set_str(num.get_mpz_t(), s.substr(0, slash).c_str(), 10) != 0 ||
            mpz_set_str(den.get_mpz_t(), s.substr(slash + 1).c_str(), 10) != 0)
            throw ParseError("parse_rational: bad fraction '" + text + "'");
        return make_rat(num, den);
    }

    // Decimal form: sign, digits, optional fraction digits, optional exponent.
    std::string digits;
    long exp10 = 0;
    std::size_t i = 0;
    bool neg = false;
    if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
    bool seen_digit = false, seen_dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_dot) --exp10;
            seen_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            exp10 += std::stol(s.substr(i + 1));
            i = s.size() - 1;
        } else {
            throw ParseError("parse_rational: bad literal '" + text + "'");
        }
    }
    if (!seen_digit) throw ParseError("parse_rational: bad literal '" + text + "'");

    BigInt num;
    if (mpz_set_str(num.get_mpz_t(), digits.c_str(), 10) != 0)
        throw ParseError("parse_rational: bad literal '" + text + "'");
    if (neg) num = -num;
    BigInt scale = 1;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    return exp10 < 0 ? make_rat(num, scale) : BigRat(num * scale);
}

/// Exact conversion of a finite double (doubles are binary rationals).
inline BigRat rat_from_double(double x) {
    BigRat r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

}  // namespace birkhoff
