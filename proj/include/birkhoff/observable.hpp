#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "birkhoff/errors.hpp"
#include "birkhoff/interval.hpp"
#include "birkhoff/torus.hpp"

namespace birkhoff {

/// One a*cos(2 pi k.x) + b*sin(2 pi k.x) term; frequencies are kept in the
/// canonical half-lattice (k1 > 0, or k1 = 0 and k2 > 0).
struct TrigTerm {
    long k1 = 0, k2 = 0;
    BigRat cos_coef, sin_coef;
};

/// Finite real trigonometric polynomial on the torus.
struct TrigPolynomial {
    BigRat constant;
    std::vector<TrigTerm> terms;  // sorted by (k1, k2), frequencies distinct

    static TrigPolynomial zero() { return {}; }
    bool is_constant() const { return terms.empty(); }

    /// Sum of |a_k| + |b_k| over all terms (exact).
    BigRat coef_mass() const {
        BigRat s = 0;
        for (const auto& t : terms) s += abs(t.cos_coef) + abs(t.sin_coef);
        return s;
    }
};

namespace detail {
inline void add_term(std::map<std::pair<long, long>, std::pair<BigRat, BigRat>>& acc, long k1,
                     long k2, const BigRat& c, const BigRat& s) {
    if (k1 == 0 && k2 == 0) throw Error("add_term: zero frequency");
    BigRat cc = c, ss = s;
    if (k1 < 0 || (k1 == 0 && k2 < 0)) {  // cos even, sin odd
        k1 = -k1;
        k2 = -k2;
        ss = -ss;
    }
    auto& slot = acc[{k1, k2}];
    slot.first += cc;
    slot.second += ss;
}

inline TrigPolynomial from_map(const BigRat& constant,
                               const std::map<std::pair<long, long>, std::pair<BigRat, BigRat>>& acc) {
    TrigPolynomial p;
    p.constant = constant;
    for (const auto& [k, cs] : acc) {
        if (cs.first == 0 && cs.second == 0) continue;
        p.terms.push_back({k.first, k.second, cs.first, cs.second});
    }
    return p;
}
}  // namespace detail

/// Builds a polynomial from (k1, k2, cos coef, sin coef) triples, merging
/// duplicate frequencies and normalizing signs.
inline TrigPolynomial make_trig(const BigRat& constant,
                                const std::vector<TrigTerm>& raw_terms) {
    std::map<std::pair<long, long>, std::pair<BigRat, BigRat>> acc;
    BigRat c0 = constant;
    for (const auto& t : raw_terms) {
        if (t.k1 == 0 && t.k2 == 0) {
            c0 += t.cos_coef;  // cos(0) = 1, sin(0) = 0
            continue;
        }
        detail::add_term(acc, t.k1, t.k2, t.cos_coef, t.sin_coef);
    }
    return detail::from_map(c0, acc);
}

/// Text syntax: one directive per line (or ';'-separated):
///   cos k1 k2 coef  |  sin k1 k2 coef  |  const coef
/// with coef a rational "p/q" or decimal literal. '#' starts a comment.
inline TrigPolynomial parse_observable(const std::string& text) {
    std::vector<TrigTerm> raw;
    BigRat constant = 0;
    std::string normalized = text;
    std::replace(normalized.begin(), normalized.end(), ';', '\n');
    std::istringstream lines(normalized);
    std::string line;
    while (std::getline(lines, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "const") {
            std::string coef;
            if (!(ls >> coef)) throw ParseError("observable: 'const' needs a coefficient");
            constant += parse_rational(coef);
        } else if (kind == "cos" || kind == "sin") {
            long k1, k2;
            std::string coef;
            if (!(ls >> k1 >> k2 >> coef))
                throw ParseError("observable: '" + kind + "' needs k1 k2 coef");
            TrigTerm t;
            t.k1 = k1;
            t.k2 = k2;
            (kind == "cos" ? t.cos_coef : t.sin_coef) = parse_rational(coef);
            raw.push_back(t);
        } else {
            throw ParseError("observable: unknown directive '" + kind + "'");
        }
        std::string extra;
        if (ls >> extra) throw ParseError("observable: trailing tokens in '" + line + "'");
    }
    return make_trig(constant, raw);
}

inline std::string observable_to_text(const TrigPolynomial& p) {
    std::ostringstream out;
    if (p.constant != 0 || p.terms.empty()) out << "const " << rat_to_string(p.constant) << "\n";
    for (const auto& t : p.terms) {
        if (t.cos_coef != 0)
            out << "cos " << t.k1 << " " << t.k2 << " " << rat_to_string(t.cos_coef) << "\n";
        if (t.sin_coef != 0)
            out << "sin " << t.k1 << " " << t.k2 << " " << rat_to_string(t.sin_coef) << "\n";
    }
    return out.str();
}

inline TrigPolynomial operator+(const TrigPolynomial& f, const TrigPolynomial& g) {
    std::vector<TrigTerm> raw = f.terms;
    raw.insert(raw.end(), g.terms.begin(), g.terms.end());
    return make_trig(f.constant + g.constant, raw);
}

inline TrigPolynomial operator-(const TrigPolynomial& f) {
    TrigPolynomial out = f;
    out.constant = -out.constant;
    for (auto& t : out.terms) {
        t.cos_coef = -t.cos_coef;
        t.sin_coef = -t.sin_coef;
    }
    return out;
}

inline TrigPolynomial operator-(const TrigPolynomial& f, const TrigPolynomial& g) {
    return f + (-g);
}

/// phi o f for the torus map induced by an integer matrix: each frequency k
/// maps to A^T k (cos/sin arguments are k . (A x) = (A^T k) . x).
inline TrigPolynomial compose_with(const TrigPolynomial& f, const IntMat2& m) {
    std::vector<TrigTerm> raw;
    for (const auto& t : f.terms) {
        TrigTerm s = t;
        BigInt nk1 = m.a * t.k1 + m.c * t.k2;
        BigInt nk2 = m.b * t.k1 + m.d * t.k2;
        if (!nk1.fits_slong_p() || !nk2.fits_slong_p())
            throw Error("compose_with: frequency overflow");
        s.k1 = nk1.get_si();
        s.k2 = nk2.get_si();
        raw.push_back(s);
    }
    return make_trig(f.constant, raw);
}

/// Certified Hölder data: |phi(x) - phi(y)| <= C d(x, y)^theta.
struct HolderData {
    BigRat theta{1};
    double C = 0.0;  // rounded-up gradient bound, a valid Lipschitz constant
};

/// theta = 1 and C = roundup of 2 pi sum_k |k|_2 (|a_k| + |b_k|).
inline HolderData holder_constant(const TrigPolynomial& f, mpfr_prec_t prec = 96) {
    Interval sum = Interval::from_int(0, prec);
    for (const auto& t : f.terms) {
        BigRat ksq(BigInt(t.k1) * BigInt(t.k1) + BigInt(t.k2) * BigInt(t.k2));
        Interval knorm = Interval::from_rat(ksq, prec).sqrt();
        Interval mass = Interval::from_rat(abs(t.cos_coef) + abs(t.sin_coef), prec);
        sum = sum + knorm * mass;
    }
    Interval c = Interval::from_int(2, prec) * Interval::pi(prec) * sum;
    return {BigRat(1), c.hi_d()};
}

/// Rigorous enclosure of phi at a torus point; the argument k.x is reduced
/// mod 1 exactly before any rounding, so the width contract
/// width <= (sum |a_k|+|b_k|) 2^(2-prec) is met for every frequency size.
inline Interval eval(const TrigPolynomial& f, const TorusPoint& pt, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    Interval acc = Interval::from_rat(f.constant, wp);
    for (const auto& t : f.terms) {
        QuadExt arg = (QuadExt::rational(BigRat(t.k1), pt.x1.disc()) * pt.x1 +
                       QuadExt::rational(BigRat(t.k2), pt.x1.disc()) * pt.x2)
                          .reduced();
        Interval a = arg.enclose(wp);
        if (t.cos_coef != 0) acc = acc + Interval::from_rat(t.cos_coef, wp) * a.cos2pi();
        if (t.sin_coef != 0) acc = acc + Interval::from_rat(t.sin_coef, wp) * a.sin2pi();
    }
    return acc;
}

/// Enclosure of a Birkhoff sum along one minimal period.
struct SumEnclosure {
    Interval sum;
    long term_count = 0;

    double lo() const { return sum.lo_d(); }
    double hi() const { return sum.hi_d(); }
};

inline SumEnclosure birkhoff_sum(const TrigPolynomial& f, const PeriodicPoint& z,
                                 mpfr_prec_t prec) {
    Interval acc = Interval::from_int(0, prec + 16);
    for (const auto& pt : z.orbit) acc = acc + eval(f, pt, prec);
    return {acc, static_cast<long>(z.orbit.size())};
}

}  // namespace birkhoff
