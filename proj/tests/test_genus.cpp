#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopsig/errors.hpp"
#include "loopsig/genus.hpp"

using namespace loopsig;

TEST_CASE("x/tanh(x) expansion") {
    const auto s = x_over_tanh_x(6);
    CHECK(s.coeff(0) == 1);
    CHECK(s.coeff(2) == Rational(1, 3));
    CHECK(s.coeff(4) == Rational(-1, 45));
    CHECK(s.coeff(6) == Rational(2, 945));
    CHECK(s.coeff(1) == 0);
    CHECK(s.coeff(3) == 0);
}

TEST_CASE("multiplicative sequence for the signature series") {
    const auto s = x_over_tanh_x(6);
    std::vector<Rational> coeffs;
    for (int k = 0; k <= 3; ++k) coeffs.push_back(s.coeff(2 * k));
    const auto ks = multiplicative_sequence(coeffs, 3);
    REQUIRE(ks.size() == 3);

    PontryaginPolynomial k1;
    k1.add_term({1}, Rational(1, 3));
    CHECK(ks[0].terms() == k1.terms());

    PontryaginPolynomial k2;
    k2.add_term({2}, Rational(-1, 45));
    k2.add_term({0, 1}, Rational(7, 45));
    CHECK(ks[1].terms() == k2.terms());

    for (size_t j = 0; j < ks.size(); ++j) CHECK(ks[j].homogeneous_of_weight(static_cast<int>(j) + 1));
}

TEST_CASE("trivial multiplicative sequence") {
    const auto ks = multiplicative_sequence({Rational(1)}, 3);
    for (const auto& k : ks) CHECK(k.is_zero());
    CHECK_THROWS_AS(multiplicative_sequence({Rational(2)}, 2), std::invalid_argument);
}

TEST_CASE("Pontryagin numbers of projective spaces") {
    const auto n1 = pontryagin_numbers_projective(1);
    CHECK(n1.at({1}) == 3);

    const auto n2 = pontryagin_numbers_projective(2);
    CHECK(n2.at({1, 1}) == 25);
    CHECK(n2.at({2}) == 10);

    // K_1 evaluation gives the signature of CP^2
    PontryaginPolynomial k1;
    k1.add_term({1}, Rational(1, 3));
    CHECK(evaluate_pontryagin(k1, n1) == 1);
}

TEST_CASE("genus evaluation on projective spaces") {
    CHECK(genus_eval_projective(x_over_tanh_x(2), 2) == 1);
    CHECK(genus_eval_projective(x_over_tanh_x(4), 4) == 1);
    CHECK(genus_eval_projective(x_over_tanh_x(6), 6) == 1);
    CHECK(genus_eval_projective(x_over_tanh_x(5), 3) == 0);  // odd dimension
    CHECK_THROWS_AS(genus_eval_projective(x_over_tanh_x(2), 4), std::invalid_argument);
}

TEST_CASE("two-route agreement for the classical signature") {
    const auto s = x_over_tanh_x(8);
    std::vector<Rational> coeffs;
    for (int k = 0; k <= 4; ++k) coeffs.push_back(s.coeff(2 * k));
    for (int n = 1; n <= 3; ++n) {
        const auto ks = multiplicative_sequence(coeffs, n);
        const Rational via_k = evaluate_pontryagin(ks.back(), pontryagin_numbers_projective(n));
        const Rational via_coeff = genus_eval_projective(x_over_tanh_x(2 * n), 2 * n);
        CHECK(via_k == via_coeff);
        CHECK(via_k == 1);
    }
}

TEST_CASE("characteristic q-series") {
    // q^0 layer is x coth(x/2) = 2 + x^2/6 - x^4/360 + ...
    const auto q0 = signature_q_series(4, 0);
    CHECK(q0.coeff(0) == TruncatedSeries::constant(0, 2));
    CHECK(q0.coeff(2) == TruncatedSeries::constant(0, Rational(1, 6)));
    CHECK(q0.coeff(4) == TruncatedSeries::constant(0, Rational(-1, 360)));

    // even in x at all computed orders
    const auto q = signature_q_series(7, 3);
    for (int i = 1; i <= 7; i += 2) CHECK(q.coeff(i).is_zero());

    // Q(0) equals the quarter-power product form
    CHECK(q.coeff(0) == eps_powers(3).eps_inv_quarter);
}

TEST_CASE("eps powers") {
    const auto eps = eps_powers(2);
    TruncatedSeries expected(2);
    expected.set_coeff(0, 2);
    expected.set_coeff(1, 8);
    expected.set_coeff(2, 24);
    CHECK(eps.eps_inv_quarter == expected);
    CHECK(eps.eps.coeff(0) == Rational(1, 16));
    CHECK(eps.eps * pow(eps.eps_inv_quarter, 4) == TruncatedSeries::constant(2, 1));
    CHECK(eps.eps_quarter * eps.eps_inv_quarter == TruncatedSeries::constant(2, 1));
}

TEST_CASE("elliptic parameter fit") {
    const auto fit = elliptic_parameters_fit(4, 8);
    // the q^0 layer comes from f = 2 tanh(x/2): (f')^2 = 1 - f^2/2 + f^4/16
    CHECK(fit.delta.coeff(0) == Rational(1, 4));
    CHECK(fit.epsilon.coeff(0) == Rational(1, 16));
    CHECK(fit.epsilon == eps_powers(4).eps);

    // och(q, P^2) is a weight-2 form, so it equals the fitted delta
    const auto och = och_from_sign(loop_signature_oracle_projective(2, 4), 2);
    CHECK(och == fit.delta);
}

TEST_CASE("projective oracle series") {
    for (int d : {1, 3, 5}) CHECK(loop_signature_oracle_projective(d, 4).is_zero());

    const auto p2 = loop_signature_oracle_projective(2, 2);
    CHECK(p2.coeff(0) == 1);
    CHECK(p2.coeff(1) == 32);
    // hand value from the lattice side: (1/4 + 6q + 6q^2)(4 + 32q + 160q^2)
    CHECK(p2.coeff(2) == 256);

    CHECK(loop_signature_oracle_projective(4, 1).coeff(0) == 1);
}

TEST_CASE("och from sign") {
    const auto p2 = loop_signature_oracle_projective(2, 2);
    const auto och = och_from_sign(p2, 2);
    CHECK(och.coeff(0) == Rational(1, 4));
    CHECK(och.coeff(1) == 6);

    CHECK(och_from_sign(TruncatedSeries(3), 2).is_zero());
    CHECK_THROWS_AS(och_from_sign(p2, 3), std::invalid_argument);
}
