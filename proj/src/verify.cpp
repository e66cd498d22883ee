#include "loopsig/verify.hpp"

#include <random>
#include <sstream>

#include "loopsig/errors.hpp"
#include "loopsig/genus.hpp"
#include "loopsig/signature.hpp"

namespace loopsig {

namespace {

void check(Suite& suite, const std::string& name, bool pass, const std::string& detail = "") {
    suite.push_back({name, pass, detail});
}

std::string series_brief(const TruncatedSeries& s, int upto = 3) {
    std::ostringstream os;
    os << "[";
    for (int i = 0; i <= std::min(upto, s.order()); ++i) {
        if (i) os << ", ";
        os << rational_to_string(s.coeff(i));
    }
    if (s.order() > upto) os << ", ...";
    os << "]";
    return os.str();
}

KleinschmidtData kdata(int d, int s, std::vector<long long> a) {
    KleinschmidtData k;
    k.d = d;
    k.s = s;
    k.a = std::move(a);
    return k;
}

}  // namespace

Suite verify_oracle(int order) {
    Suite suite;
    for (int d : {2, 4}) {
        const auto lattice = loop_signature(FamilySpec::projective(d), order);
        const auto oracle = loop_signature_oracle_projective(d, order);
        check(suite, "projective:" + std::to_string(d) + " lattice route == series route",
              lattice.series == oracle,
              "lattice " + series_brief(lattice.series) + " vs series " + series_brief(oracle));
    }
    const auto p2 = loop_signature(FamilySpec::projective(2), order).series;
    check(suite, "projective:2 starts 1 + 32q", p2.coeff(0) == 1 && p2.coeff(1) == 32,
          series_brief(p2));
    return suite;
}

Suite verify_vanishing(int order) {
    Suite suite;
    for (int d : {1, 3}) {
        const auto lattice = loop_signature(FamilySpec::projective(d), order);
        check(suite, "projective:" + std::to_string(d) + " lattice route is zero",
              lattice.series.is_zero());
        check(suite, "projective:" + std::to_string(d) + " series route is zero",
              loop_signature_oracle_projective(d, order).is_zero());
    }
    for (const auto& data : {kdata(2, 2, {1}), kdata(4, 2, {0, 1, 2})}) {
        const auto fam = FamilySpec::kleinschmidt(data);
        check(suite, fam.name() + " (even split) is zero",
              loop_signature(fam, order).series.is_zero());
    }
    return suite;
}

Suite verify_positivity(int projective_order, int kleinschmidt_order) {
    Suite suite;
    for (int d : {2, 4, 6}) {
        const auto sig = loop_signature(FamilySpec::projective(d), projective_order).series;
        const auto report = positivity_report(sig);
        check(suite, "projective:" + std::to_string(d) + " positive and even at q>=1",
              report.passed(), report.detail.empty() ? series_brief(sig) : report.detail);
        bool character_ok = true;
        std::string detail;
        try {
            const auto character = implied_h0_character(d, projective_order);
            const auto doubled = Rational(2) * character - TruncatedSeries::constant(projective_order, 1);
            character_ok = doubled == sig;
            detail = series_brief(character);
        } catch (const std::exception& e) {
            character_ok = false;
            detail = e.what();
        }
        check(suite, "projective:" + std::to_string(d) + " implied character is a realization",
              character_ok, detail);
    }
    for (const auto& data : {kdata(4, 3, {0, 1}), kdata(4, 3, {1, 1}), kdata(4, 3, {1, 2})}) {
        const auto fam = FamilySpec::kleinschmidt(data);
        const auto sig = loop_signature(fam, kleinschmidt_order).series;
        const auto report = positivity_report(sig);
        check(suite, fam.name() + " positive and even at q>=1", report.passed(),
              report.detail.empty() ? series_brief(sig) : report.detail);
    }
    return suite;
}

Suite verify_rigidity(long long box_radius) {
    Suite suite;
    {
        const auto report = rigidity_check(projective_fan(1), box_radius);
        check(suite, "projective:1 spin, every nonzero character vanishes",
              report.is_spin && report.all_nonzero_vanish,
              std::to_string(report.points_checked) + " characters checked");
    }
    {
        const auto fan = product_fan(projective_fan(1), projective_fan(1));
        const auto report = rigidity_check(fan, box_radius);
        check(suite, "P1 x P1 spin, every nonzero character vanishes",
              report.is_spin && report.all_nonzero_vanish,
              std::to_string(report.points_checked) + " characters checked");
    }
    {
        const auto report = rigidity_check(projective_fan(2), box_radius);
        const bool witness_ok = !report.is_spin && report.witness_m.has_value();
        check(suite, "projective:2 not spin, witness found", witness_ok);
        // the witness at m = (1,0) is exactly q/(1+q)^2
        const auto one_plus_q = LaurentPolynomial::one_plus_qk(1);
        const LaurentFraction expected(LaurentPolynomial::monomial(1, 1), one_plus_q * one_plus_q);
        check(suite, "projective:2 character (1,0) equals q/(1+q)^2",
              cone_sum({1, 0}, projective_fan(2)) == expected);
    }
    return suite;
}

Suite verify_spin(int order) {
    Suite suite;
    {
        const auto witness = spin_test(product_fan(projective_fan(1), projective_fan(1)));
        check(suite, "P1 x P1 spin witness", witness.has_value() && *witness == std::vector<long long>{1, 1});
    }
    check(suite, "projective:2 not spin", !spin_test(projective_fan(2)).has_value());
    check(suite, "projective:3 spin", spin_test(projective_fan(3)).has_value());
    {
        const auto series = loop_signature(FamilySpec::projective(1), order).series;
        const auto report = spin_constancy_check(projective_fan(1), series);
        check(suite, "projective:1 constant-series factorization", report.passed(),
              "S(0) = " + rational_to_string(report.cone_sum_at_zero));
    }
    {
        const auto fam = FamilySpec::product({FamilySpec::projective(1), FamilySpec::projective(1)});
        const auto series = loop_signature(fam, order).series;
        const auto report = spin_constancy_check(product_fan(projective_fan(1), projective_fan(1)), series);
        check(suite, "P1 x P1 constant-series factorization", report.passed(),
              "S(0) = " + rational_to_string(report.cone_sum_at_zero));
    }
    {
        const auto series = loop_signature(FamilySpec::projective(2), order).series;
        const auto report = spin_constancy_check(projective_fan(2), series);
        check(suite, "projective:2 reported not applicable", !report.applicable);
    }
    return suite;
}

Suite verify_multiplicativity(int order) {
    Suite suite;
    const auto p2 = loop_signature(FamilySpec::projective(2), order).series;
    const auto squared = pow(p2, 2);

    const auto closed = loop_signature(FamilySpec::kleinschmidt(kdata(4, 3, {0, 0})), order).series;
    check(suite, "X_4(0,0) equals the square of the P2 series", closed == squared,
          series_brief(closed));

    const auto fam = FamilySpec::product({FamilySpec::projective(2), FamilySpec::projective(2)});
    const auto family_route = loop_signature(fam, order).series;
    check(suite, "product family route equals the square", family_route == squared);

    const auto fan = product_fan(projective_fan(2), projective_fan(2));
    const auto region = enumeration_region(fam, order);
    const auto generic = loop_signature_over_points(fan, order, region, fam.name(), Soundness::proved);
    check(suite, "generic route over the product region equals the square",
          generic.series == squared,
          std::to_string(generic.lattice_points_used) + " lattice points");

    check(suite, "X_4(0,0) fan equals the P2 x P2 fan up to ray order",
          fans_equal_up_to_ray_order(kleinschmidt_fan(kdata(4, 3, {0, 0})), fan));

    // spot-check the character-sum factorization on random points
    std::mt19937 rng(7);
    std::uniform_int_distribution<long long> coord(-3, 3);
    bool factorizes = true;
    const auto f1 = projective_fan(2);
    const auto f2 = projective_fan(2);
    for (int trial = 0; trial < 10 && factorizes; ++trial) {
        LatticePoint m1{coord(rng), coord(rng)}, m2{coord(rng), coord(rng)};
        LatticePoint joined = m1;
        joined.insert(joined.end(), m2.begin(), m2.end());
        factorizes = equivalent(cone_sum(joined, fan), cone_sum(m1, f1) * cone_sum(m2, f2));
    }
    check(suite, "cone sums factor over product fans", factorizes);
    return suite;
}

Suite verify_numerator(int d_max) {
    Suite suite;
    for (int d = 1; d <= d_max; ++d) {
        const auto report = numerator_identity_check(d);
        check(suite, "alternating sum collapses for d=" + std::to_string(d), report.pass,
              report.detail);
    }
    const auto two = numerator_identity_check_two_factor(5, 5);
    check(suite, "two-factor collapse up to (r+1,s) = (5,5)", two.pass, two.detail);
    return suite;
}

Suite verify_elliptic(int q_order) {
    Suite suite;
    bool fit_ok = true;
    std::string fit_detail;
    TruncatedSeries delta(q_order), epsilon(q_order);
    try {
        const auto fit = elliptic_parameters_fit(q_order, 8);
        delta = fit.delta;
        epsilon = fit.epsilon;
        fit_detail = "delta " + series_brief(delta) + ", eps " + series_brief(epsilon);
    } catch (const std::exception& e) {
        fit_ok = false;
        fit_detail = e.what();
    }
    check(suite, "fit has zero residual and product-form eps", fit_ok, fit_detail);
    if (!fit_ok) return suite;

    check(suite, "delta(0) = 1/4", delta.coeff(0) == Rational(1, 4),
          "delta(0) = " + rational_to_string(delta.coeff(0)));
    check(suite, "eps(0) = 1/16", epsilon.coeff(0) == Rational(1, 16));

    const auto och = och_from_sign(loop_signature_oracle_projective(2, q_order), 2);
    check(suite, "och(q, P2) = 1/4 + 6q + ...",
          och.coeff(0) == Rational(1, 4) && och.coeff(1) == 6, series_brief(och));
    check(suite, "och(q, P2) equals the fitted delta (weight-2 consistency)", och == delta);
    return suite;
}

Suite verify_genus() {
    Suite suite;
    const auto lseries = x_over_tanh_x(6);
    std::vector<Rational> coeffs;
    for (int k = 0; k <= 3; ++k) coeffs.push_back(lseries.coeff(2 * k));
    const auto sequence = multiplicative_sequence(coeffs, 3);

    PontryaginPolynomial k1;
    k1.add_term({1}, Rational(1, 3));
    check(suite, "K_1 = p1/3", sequence[0].terms() == k1.terms(), sequence[0].to_string());

    PontryaginPolynomial k2;
    k2.add_term({2}, Rational(-1, 45));
    k2.add_term({0, 1}, Rational(7, 45));
    check(suite, "K_2 = (7 p2 - p1^2)/45", sequence[1].terms() == k2.terms(), sequence[1].to_string());

    {
        const auto numbers = pontryagin_numbers_projective(1);
        check(suite, "p1[CP^2] = 3", numbers.at({1}) == 3);
    }
    {
        const auto numbers = pontryagin_numbers_projective(2);
        check(suite, "p1^2[CP^4] = 25 and p2[CP^4] = 10",
              numbers.at({1, 1}) == 25 && numbers.at({2}) == 10);
    }

    for (int n = 1; n <= 3; ++n) {
        const auto numbers = pontryagin_numbers_projective(n);
        const Rational via_k = evaluate_pontryagin(sequence[static_cast<size_t>(n) - 1], numbers);
        const Rational via_coeff = genus_eval_projective(x_over_tanh_x(2 * n), 2 * n);
        check(suite, "signature of CP^" + std::to_string(2 * n) + " is 1 on both routes",
              via_k == 1 && via_coeff == 1,
              "K route " + rational_to_string(via_k) + ", series route " +
                  rational_to_string(via_coeff));
    }
    return suite;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "oracle",   "vanishing", "positivity",       "rigidity", "spin",
        "multiplicativity", "numerator", "elliptic", "genus"};
    return names;
}

Suite run_suite(const std::string& name, const VerifyOptions& options) {
    if (name == "oracle") return verify_oracle(options.order.value_or(4));
    if (name == "vanishing") return verify_vanishing(options.order.value_or(6));
    if (name == "positivity")
        return verify_positivity(options.order.value_or(8), options.order.value_or(6));
    if (name == "rigidity") return verify_rigidity(options.box.value_or(5));
    if (name == "spin") return verify_spin(options.order.value_or(6));
    if (name == "multiplicativity") return verify_multiplicativity(options.order.value_or(6));
    if (name == "numerator") return verify_numerator(options.d.value_or(6));
    if (name == "elliptic") return verify_elliptic(options.order.value_or(4));
    if (name == "genus") return verify_genus();
    if (name == "all") {
        Suite all;
        for (const auto& suite_name : suite_names()) {
            Suite part = run_suite(suite_name, options);
            for (auto& r : part) r.name = suite_name + ": " + r.name;
            all.insert(all.end(), part.begin(), part.end());
        }
        return all;
    }
    throw std::invalid_argument("unknown suite '" + name + "'");
}

bool all_passed(const Suite& suite) {
    for (const auto& r : suite)
        if (!r.pass) return false;
    return true;
}

}  // namespace loopsig
