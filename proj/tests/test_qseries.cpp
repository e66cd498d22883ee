#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "loopsig/errors.hpp"
#include "loopsig/laurent.hpp"
#include "loopsig/series.hpp"

using namespace loopsig;

namespace {

TruncatedSeries make(int order, std::vector<long> num, long den = 1) {
    TruncatedSeries s(order);
    for (size_t j = 0; j < num.size(); ++j) s.set_coeff(static_cast<int>(j), Rational(num[j], den));
    return s;
}

// Independent inversion oracle: solve a*b = 1 coefficient by coefficient
// with plain rational arithmetic (no calls into invert()).
std::vector<Rational> solve_inverse(const TruncatedSeries& a) {
    std::vector<Rational> b(static_cast<size_t>(a.order()) + 1);
    b[0] = 1 / a.coeff(0);
    for (int k = 1; k <= a.order(); ++k) {
        Rational acc = 0;
        for (int i = 1; i <= k; ++i) acc += a.coeff(i) * b[static_cast<size_t>(k - i)];
        b[static_cast<size_t>(k)] = -b[0] * acc;
    }
    return b;
}

std::mt19937 rng(20240811);

TruncatedSeries random_series(int order, bool invertible) {
    std::uniform_int_distribution<long> num(-6, 6);
    std::uniform_int_distribution<long> den(1, 3);
    TruncatedSeries s(order);
    for (int j = 0; j <= order; ++j) s.set_coeff(j, Rational(num(rng), den(rng)));
    if (invertible && s.coeff(0) == 0) s.set_coeff(0, Rational(1));
    return s;
}

LaurentPolynomial random_poly(int lo, int hi, bool force_exponent_zero) {
    std::uniform_int_distribution<long> coeff(-5, 5);
    LaurentPolynomial p;
    for (int e = lo; e <= hi; ++e) p.add_term(e, coeff(rng));
    if (force_exponent_zero) {
        if (p.terms().find(0) == p.terms().end()) p.add_term(0, 1);
    } else if (p.is_zero()) {
        p.add_term(lo, 1);
    }
    return p;
}

}  // namespace

TEST_CASE("series add/sub/mul basics") {
    auto one_plus_q = make(2, {1, 1});
    auto one_minus_q = make(2, {1, -1});
    CHECK(one_plus_q * one_minus_q == make(2, {1, 0, -1}));

    auto s = random_series(5, false);
    CHECK(s + TruncatedSeries(5) == s);

    auto t = make(2, {1, 2, 3});
    CHECK((t - t).is_zero());

    CHECK_THROWS_AS(make(2, {1}) + make(3, {1}), OrderMismatchError);
}

TEST_CASE("series inversion") {
    auto geom = invert(make(3, {1, -1}));
    CHECK(geom == make(3, {1, 1, 1, 1}));

    CHECK(invert(TruncatedSeries::constant(2, 2)) == TruncatedSeries::constant(2, Rational(1, 2)));

    auto a = make(2, {2, 8, 24});
    auto oracle = solve_inverse(a);
    auto b = invert(a);
    for (int j = 0; j <= 2; ++j) CHECK(b.coeff(j) == oracle[static_cast<size_t>(j)]);
    CHECK(b.coeff(0) == Rational(1, 2));
    CHECK(b.coeff(1) == Rational(-2));
    CHECK(b.coeff(2) == Rational(2));

    CHECK_THROWS_AS(invert(make(2, {0, 1})), NotInvertibleError);
}

TEST_CASE("series powers") {
    CHECK(pow(make(2, {1, 1}), 2) == make(2, {1, 2, 1}));
    auto s = random_series(4, false);
    CHECK(pow(s, 0) == TruncatedSeries::constant(4, 1));
    CHECK(pow(make(2, {2, 8, 24}), 2) == make(2, {4, 32, 160}));
    // negative power = power of the inverse
    auto a = random_series(4, true);
    CHECK(pow(a, -3) == pow(invert(a), 3));
}

TEST_CASE("expand_inv_one_plus_qk") {
    CHECK(expand_inv_one_plus_qk(2, 5) == make(5, {1, 0, -1, 0, 1, 0}));
    CHECK(expand_inv_one_plus_qk(0, 3) == TruncatedSeries::constant(3, Rational(1, 2)));
    CHECK(expand_inv_one_plus_qk(-1, 3) == make(3, {0, 1, -1, 1}));
}

TEST_CASE("expand_inv_one_plus_qk is inverse of 1+q^k") {
    const int N = 12;
    for (long k = -5; k <= 5; ++k) {
        if (k == 0) continue;
        const int pad = N + static_cast<int>(std::abs(k));
        auto s = expand_inv_one_plus_qk(k, pad);
        LaurentPolynomial sp;
        for (int j = 0; j <= pad; ++j) {
            CHECK(is_integer(s.coeff(j)));
            sp.add_term(j, s.coeff(j).get_num());
        }
        auto prod = sp * LaurentPolynomial::one_plus_qk(k);
        // product must be 1 + (terms beyond order N)
        for (const auto& [e, c] : prod.terms()) {
            if (e == 0) {
                CHECK(c == 1);
            } else {
                CHECK(e > N);
            }
        }
    }
    // k = 0: the factor is the constant 2
    CHECK(Rational(2) * expand_inv_one_plus_qk(0, 4) == TruncatedSeries::constant(4, 1));
}

TEST_CASE("ring axioms on random series") {
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_series(5, false);
        auto b = random_series(5, false);
        auto c = random_series(5, false);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) + c == a + (b + c));
    }
}

TEST_CASE("invert then multiply gives one") {
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_series(6, true);
        CHECK(a * invert(a) == TruncatedSeries::constant(6, 1));
    }
}

TEST_CASE("laurent fraction arithmetic") {
    auto one_plus_q = LaurentPolynomial::one_plus_qk(1);
    LaurentFraction f1(LaurentPolynomial::one(), one_plus_q);           // 1/(1+q)
    LaurentFraction f2(LaurentPolynomial::monomial(1, 1), one_plus_q);  // q/(1+q)
    CHECK(f1 + f2 == LaurentFraction::one());

    auto a = LaurentFraction(random_poly(0, 3, false), random_poly(0, 3, true));
    CHECK(a * LaurentFraction::one() == a);

    // 1/(1+q) + 1/(1+q^-1) - 1 = 0 exactly
    LaurentFraction g(LaurentPolynomial::one(), LaurentPolynomial::one_plus_qk(-1));
    auto sum = f1 + g + LaurentFraction::constant(Rational(-1));
    CHECK(sum.is_zero());
}

TEST_CASE("laurent fraction canonical form") {
    // 1/(1+q^-1) canonicalizes to q/(1+q)
    LaurentFraction g(LaurentPolynomial::one(), LaurentPolynomial::one_plus_qk(-1));
    CHECK(g == LaurentFraction(LaurentPolynomial::monomial(1, 1), LaurentPolynomial::one_plus_qk(1)));
    CHECK(g.den().min_exponent() == 0);

    // content and sign are normalized
    LaurentPolynomial n2 = LaurentPolynomial::monomial(2, -4);
    LaurentPolynomial d2;
    d2.add_term(0, -2);
    d2.add_term(1, -6);
    LaurentFraction h(n2, d2);
    CHECK(h.den().terms().begin()->second > 0);
    CHECK(h.num() == LaurentPolynomial::monomial(2, 2));
}

TEST_CASE("laurent fraction order") {
    auto one_plus_q = LaurentPolynomial::one_plus_qk(1);
    LaurentFraction f(LaurentPolynomial::monomial(1, 1), one_plus_q * one_plus_q);
    CHECK(f.order() == 1);
    CHECK_FALSE(LaurentFraction::zero().order().has_value());

    // q^2(1+q)/(1+q^3) has order 2
    LaurentFraction g(LaurentPolynomial::monomial(2, 1) * one_plus_q, LaurentPolynomial::one_plus_qk(3));
    CHECK(g.order() == 2);
}

TEST_CASE("laurent fraction expansion") {
    auto one_plus_q = LaurentPolynomial::one_plus_qk(1);
    LaurentFraction f(LaurentPolynomial::monomial(0, 2), one_plus_q * one_plus_q);
    CHECK(f.expand(2) == make(2, {2, -4, 6}));

    LaurentFraction g(LaurentPolynomial::monomial(1, 1), one_plus_q * one_plus_q);
    CHECK(g.expand(3) == make(3, {0, 1, -2, 3}));

    CHECK(LaurentFraction::zero().expand(4).is_zero());

    LaurentFraction pole(LaurentPolynomial::one_plus_qk(-1), LaurentPolynomial::one());
    CHECK_THROWS_AS(pole.expand(3), PoleAtOriginError);
}

TEST_CASE("expansion check by multiplying back") {
    // expand(num/den)*den == num up to the truncation order
    for (int trial = 0; trial < 50; ++trial) {
        auto num = random_poly(0, 4, false);
        auto den = random_poly(0, 3, true);
        LaurentFraction f(num, den);
        if (f.is_zero()) continue;
        const int N = 8;
        auto s = f.expand(N);
        // multiply the truncated expansion by den and compare with num
        std::vector<Rational> prod(N + 1, Rational(0));
        for (const auto& [e, c] : f.den().terms())
            for (int j = 0; e + j <= N; ++j) prod[static_cast<size_t>(e + j)] += Rational(c) * s.coeff(j);
        for (int j = 0; j <= N; ++j) {
            Rational expect(0);
            auto it = f.num().terms().find(j);
            if (it != f.num().terms().end()) expect = Rational(it->second);
            CHECK(prod[static_cast<size_t>(j)] == expect);
        }
    }
}

TEST_CASE("expansion of a sum is the sum of expansions") {
    for (int trial = 0; trial < 50; ++trial) {
        LaurentFraction a(random_poly(0, 4, false), random_poly(0, 3, true));
        LaurentFraction b(random_poly(0, 4, false), random_poly(0, 3, true));
        CHECK((a + b).expand(7) == a.expand(7) + b.expand(7));
    }
}

TEST_CASE("order is additive under multiplication") {
    for (int trial = 0; trial < 50; ++trial) {
        LaurentFraction a(random_poly(-3, 3, false), random_poly(-2, 2, false));
        LaurentFraction b(random_poly(-3, 3, false), random_poly(-2, 2, false));
        if (a.is_zero() || b.is_zero()) continue;
        CHECK((a * b).order().value() == a.order().value() + b.order().value());
    }
}

TEST_CASE("bivariate arithmetic") {
    BivariateSeries a(2, 2), b(2, 2);
    a.set_coeff(0, TruncatedSeries::constant(2, 1));
    a.set_coeff(1, TruncatedSeries::monomial(2, 1, 1));  // q x
    b.set_coeff(0, TruncatedSeries::constant(2, 1));
    b.set_coeff(1, Rational(-1) * TruncatedSeries::monomial(2, 1, 1));
    auto prod = a * b;
    CHECK(prod.coeff(0) == TruncatedSeries::constant(2, 1));
    CHECK(prod.coeff(1).is_zero());
    CHECK(prod.coeff(2) == Rational(-1) * TruncatedSeries::monomial(2, 2, 1));

    BivariateSeries c(2, 0);
    c.set_coeff(0, TruncatedSeries::constant(0, 1));
    c.set_coeff(1, TruncatedSeries::constant(0, 3));
    c.set_coeff(2, TruncatedSeries::constant(0, 5));
    CHECK(c.coeff(2) == TruncatedSeries::constant(0, 5));

    CHECK_THROWS_AS(a + BivariateSeries(3, 2), OrderMismatchError);
}

TEST_CASE("bivariate inversion") {
    std::uniform_int_distribution<long> small(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        BivariateSeries a(3, 3);
        for (int i = 0; i <= 3; ++i) {
            TruncatedSeries s(3);
            for (int j = 0; j <= 3; ++j) s.set_coeff(j, Rational(small(rng)));
            a.set_coeff(i, s);
        }
        auto s0 = a.coeff(0);
        s0.set_coeff(0, Rational(1));
        a.set_coeff(0, s0);
        CHECK(a * invert(a) == BivariateSeries::constant(3, 3, 1));
    }
}

TEST_CASE("x derivative") {
    BivariateSeries a(3, 1);
    a.set_coeff(2, TruncatedSeries::constant(1, 7));
    auto d = derivative_x(a);
    CHECK(d.coeff(1) == TruncatedSeries::constant(1, 14));
    CHECK(d.coeff(0).is_zero());
    CHECK(d.coeff(2).is_zero());
}
