#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "birkhoff/matrix.hpp"
#include "birkhoff/quadext.hpp"
#include "birkhoff/rational.hpp"

using namespace birkhoff;

namespace {
const IntMat2 kCat{2, 1, 1, 1};

// 50 digits, independent of the library's sqrt path
const char* kGolden = "2.6180339887498948482045868343656381177203091798058";

QuadExt rand_quad(std::mt19937_64& rng, unsigned long D) {
    std::uniform_int_distribution<long> num(-50, 50);
    std::uniform_int_distribution<long> den(1, 30);
    return {make_rat(num(rng), den(rng)), make_rat(num(rng), den(rng)), D};
}
}  // namespace

TEST_CASE("rational parsing and lowest terms") {
    CHECK(parse_rational("3/4") == make_rat(3, 4));
    CHECK(parse_rational("-0.25") == make_rat(-1, 4));
    CHECK(parse_rational("0.3") == make_rat(3, 10));
    CHECK(parse_rational("1e-3") == make_rat(1, 1000));
    CHECK(parse_rational("-2") == BigRat(-2));
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);

    auto [l1, k1] = lowest_terms(make_rat(-3, 4), make_rat(1, 2));
    CHECK(l1 == -3);
    CHECK(k1 == 2);
    auto [l2, k2] = lowest_terms(BigRat(0), BigRat(7));
    CHECK(l2 == 0);
    CHECK(k2 == 1);
    auto [l3, k3] = lowest_terms(make_rat(6, 5), make_rat(2, 5));
    CHECK(l3 == 3);
    CHECK(k3 == 1);
    CHECK_THROWS_AS(lowest_terms(BigRat(1), BigRat(0)), DivisionByZero);
}

TEST_CASE("mat_pow on the cat map") {
    IntMat2 sq = mat_pow(kCat, 2);
    CHECK(sq == IntMat2{5, 3, 3, 2});
    CHECK(mat_pow(kCat, 0) == IntMat2::identity());
    CHECK(mat_pow(kCat, -1) == IntMat2{1, -1, -1, 2});

    // group law over random exponents, against iterated multiplication
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> exp(-20, 20);
    for (int i = 0; i < 50; ++i) {
        long a = exp(rng), b = exp(rng);
        CHECK(mat_pow(kCat, a) * mat_pow(kCat, b) == mat_pow(kCat, a + b));
    }
}

TEST_CASE("eigen_data certifies the cat map exactly") {
    EigenData e = eigen_data(kCat);
    CHECK(e.D == 5);
    CHECK(e.lambda_u == QuadExt(make_rat(3, 2), make_rat(1, 2), 5));
    CHECK(e.lambda_s == QuadExt(make_rat(3, 2), make_rat(-1, 2), 5));
    CHECK(e.v_u.x == QuadExt::one(5));
    CHECK(e.v_u.y == QuadExt(make_rat(-1, 2), make_rat(1, 2), 5));
    CHECK(e.v_s.y == QuadExt(make_rat(-1, 2), make_rat(-1, 2), 5));
    // A v = lambda v holds exactly, not approximately
    CHECK((kCat.apply(e.v_u) - e.lambda_u * e.v_u).is_zero());
    CHECK((kCat.apply(e.v_s) - e.lambda_s * e.v_s).is_zero());
    // lambda_u lambda_s = det
    CHECK(e.lambda_u * e.lambda_s == QuadExt::one(5));
    CHECK(e.H >= 1.0);
    // symmetric matrix: orthogonal eigenvectors, H = 1 up to rounding
    CHECK(e.H <= 1.0 + 1e-20);
}

TEST_CASE("eigen_data on a det -1 matrix and non-hyperbolic inputs") {
    EigenData e = eigen_data(IntMat2{1, 1, 1, 0});
    CHECK(e.D == 5);
    CHECK(e.lambda_u == QuadExt(make_rat(1, 2), make_rat(1, 2), 5));
    CHECK(e.lambda_s == QuadExt(make_rat(1, 2), make_rat(-1, 2), 5));
    CHECK((e.lambda_u * e.lambda_s) == QuadExt::rational(BigRat(-1), 5));

    CHECK_THROWS_AS(eigen_data(IntMat2{1, 1, 0, 1}), NotHyperbolic);
    CHECK_THROWS_AS(eigen_data(IntMat2{0, 1, -1, 0}), NotHyperbolic);
    CHECK_THROWS_AS(eigen_data(IntMat2{2, 0, 0, 2}), NotHyperbolic);  // det 4
}

TEST_CASE("QuadExt field axioms on random elements") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        QuadExt x = rand_quad(rng, 5), y = rand_quad(rng, 5), z = rand_quad(rng, 5);
        CHECK((x + y) * z == x * z + y * z);
        CHECK((x * y) * z == x * (y * z));
        CHECK(x + y == y + x);
        if (!x.is_zero()) CHECK(x * x.inverse() == QuadExt::one(5));
        // conjugate product is rational with value a^2 - D b^2
        QuadExt prod = x * x.conj();
        CHECK(prod.is_rational());
        CHECK(prod.rat_part() == x.norm());
    }
}

TEST_CASE("QuadExt exact ordering and floor") {
    QuadExt golden(make_rat(3, 2), make_rat(1, 2), 5);  // (3+sqrt5)/2
    CHECK(golden.sign() == 1);
    CHECK(golden.floor() == 2);
    CHECK((-golden).floor() == -3);
    CHECK(QuadExt(make_rat(-3, 2), make_rat(1, 2), 5).sign() < 0);   // sqrt5/2 < 3/2
    CHECK(QuadExt(make_rat(-1, 2), make_rat(1, 2), 5).sign() > 0);   // sqrt5/2 > 1/2
    CHECK(QuadExt::rational(make_rat(7, 3), 5).floor() == 2);
    QuadExt r = golden.reduced();
    CHECK(r >= QuadExt::zero(5));
    CHECK(r < QuadExt::one(5));
    CHECK(golden - r == QuadExt::rational(BigRat(2), 5));
}

TEST_CASE("enclose is rigorous and meets the width contract") {
    mpfr_prec_t p = 53;
    SECTION("rational value gives a point interval") {
        Interval e = QuadExt::rational(make_rat(3, 2), 5).enclose(p);
        CHECK(e.lo_d() == 1.5);
        CHECK(e.hi_d() == 1.5);
        CHECK(e.width_d() == 0.0);
    }
    SECTION("golden mean against frozen digits") {
        QuadExt x(make_rat(3, 2), make_rat(1, 2), 5);
        Interval e = x.enclose(p);
        Interval oracle = Interval::from_decimal(kGolden, 200);
        CHECK(e.intersects(oracle));
        CHECK(e.width_d() <= std::ldexp(1.0, -50) * 3);
    }
    SECTION("x - conj(x) vanishes for rational x") {
        QuadExt x = QuadExt::rational(make_rat(22, 7), 5);
        Interval e = (x - x.conj()).enclose(p);
        CHECK(e.lo_d() == 0.0);
        CHECK(e.hi_d() == 0.0);
    }
}

TEST_CASE("enclose is monotone in precision") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        QuadExt x = rand_quad(rng, 5);
        Interval coarse = x.enclose(64);
        Interval fine = x.enclose(128);
        Interval finer = x.enclose(256);
        CHECK(fine.subset_of(coarse));
        CHECK(finer.subset_of(fine));
    }
}

TEST_CASE("QuadExt string round trip") {
    QuadExt x(make_rat(-7, 3), make_rat(2, 9), 5);
    CHECK(QuadExt::parse(x.to_string(), 5) == x);
    QuadExt r = QuadExt::rational(make_rat(4, 11), 5);
    CHECK(QuadExt::parse(r.to_string(), 5) == r);
}
