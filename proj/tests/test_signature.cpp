#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <random>
#include <set>

#include "loopsig/errors.hpp"
#include "loopsig/genus.hpp"
#include "loopsig/signature.hpp"

using namespace loopsig;

namespace {

KleinschmidtData kdata(int d, int s, std::vector<long long> a) {
    KleinschmidtData k;
    k.d = d;
    k.s = s;
    k.a = std::move(a);
    return k;
}

LaurentFraction q_over_one_plus_q_squared() {
    const auto b = LaurentPolynomial::one_plus_qk(1);
    return LaurentFraction(LaurentPolynomial::monomial(1, 1), b * b);
}

std::mt19937 rng(424242);

LatticePoint random_point(int d, long long radius) {
    std::uniform_int_distribution<long long> coord(-radius, radius);
    LatticePoint m(static_cast<size_t>(d));
    for (auto& v : m) v = coord(rng);
    return m;
}

}  // namespace

TEST_CASE("cone sums on the projective line") {
    const Fan p1 = projective_fan(1);
    CHECK(cone_sum({3}, p1).is_zero());
    CHECK(cone_sum({0}, p1).is_zero());
    CHECK(cone_sum({-7}, p1).is_zero());
}

TEST_CASE("cone sum on the projective plane") {
    const Fan p2 = projective_fan(2);
    const auto term = cone_sum({1, 0}, p2);
    CHECK(term == q_over_one_plus_q_squared());
    CHECK(term.order() == 1);
    CHECK(cone_sum({0, 0}, p2).as_constant() == Rational(1, 4));
}

TEST_CASE("closed projective terms match the generic cone sums") {
    for (int d : {2, 4}) {
        const Fan fan = projective_fan(d);
        const auto region = enumeration_region(FamilySpec::projective(d), 3);
        for (const auto& m : region) {
            CHECK(closed_term_projective(m, d) == cone_sum(m, fan));
            CHECK(term_order_projective(m, d) == *closed_term_projective(m, d).order());
        }
    }
    // m = 0 gives the constant 2^-d
    CHECK(closed_term_projective({0, 0}, 2).as_constant() == Rational(1, 4));
    CHECK(closed_term_projective({0, 0, 0}, 3).is_zero());
}

TEST_CASE("closed Picard-2 terms match the generic cone sums") {
    for (const auto& data : {kdata(4, 3, {0, 1}), kdata(4, 3, {1, 2})}) {
        const Fan fan = kleinschmidt_fan(data);
        const auto region = enumeration_region(FamilySpec::kleinschmidt(data), 3);
        for (const auto& m : region) {
            CHECK(closed_term_kleinschmidt(m, data) == cone_sum(m, fan));
            CHECK(term_order_kleinschmidt(m, data) == *closed_term_kleinschmidt(m, data).order());
        }
    }
}

TEST_CASE("closed Picard-2 term examples") {
    // even split vanishes identically
    for (long long m1 : {-2, 0, 3})
        CHECK(closed_term_kleinschmidt({m1, 1}, kdata(2, 2, {1})).is_zero());

    // X_4(0,0) at the origin: 2*2/2^6
    CHECK(closed_term_kleinschmidt({0, 0, 0, 0}, kdata(4, 3, {0, 0})).as_constant() ==
          Rational(1, 16));

    // X_4(0,0) at (1,0,0,0): q/(1+q)^2 times 1/4
    const auto term = closed_term_kleinschmidt({1, 0, 0, 0}, kdata(4, 3, {0, 0}));
    const auto b = LaurentPolynomial::one_plus_qk(1);
    LaurentPolynomial four = LaurentPolynomial::monomial(0, 4);
    CHECK(term == LaurentFraction(LaurentPolynomial::monomial(1, 1), four * b * b));
}

TEST_CASE("term orders are positive away from the origin") {
    for (int trial = 0; trial < 200; ++trial) {
        const auto m2 = random_point(2, 20);
        if (m2 != LatticePoint{0, 0}) CHECK(term_order_projective(m2, 2) > 0);
        const auto m4 = random_point(4, 20);
        if (m4 != LatticePoint(4, 0)) {
            CHECK(term_order_projective(m4, 4) > 0);
            CHECK(term_order_kleinschmidt(m4, kdata(4, 3, {0, 1})) > 0);
            CHECK(term_order_kleinschmidt(m4, kdata(4, 3, {1, 2})) > 0);
        }
    }
}

TEST_CASE("enumeration regions") {
    const auto r0 = enumeration_region(FamilySpec::projective(2), 0);
    CHECK(r0 == std::vector<LatticePoint>{{0, 0}});

    auto r1 = enumeration_region(FamilySpec::projective(2), 1);
    std::vector<LatticePoint> expected = {{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}, {-1, 1}, {1, -1}};
    std::sort(expected.begin(), expected.end());
    CHECK(r1 == expected);

    // region points are exactly those with order <= N
    for (const auto& m : enumeration_region(FamilySpec::projective(2), 4))
        CHECK(term_order_projective(m, 2) <= 4);

    // product region of X_4(0,0): pairs of the two plane regions
    const auto fam = FamilySpec::product({FamilySpec::projective(2), FamilySpec::projective(2)});
    const auto pairs = enumeration_region(fam, 1);
    CHECK(pairs.size() == 13);
    const auto klein = enumeration_region(FamilySpec::kleinschmidt(kdata(4, 3, {0, 0})), 1);
    CHECK(pairs == klein);
}

TEST_CASE("loop signature of the projective line vanishes") {
    const auto result = loop_signature(FamilySpec::projective(1), 6);
    CHECK(result.series.is_zero());
    CHECK(result.soundness == Soundness::proved);
}

TEST_CASE("loop signature of the projective plane") {
    const auto result = loop_signature(FamilySpec::projective(2), 1);
    CHECK(result.series.coeff(0) == 1);
    CHECK(result.series.coeff(1) == 32);
    CHECK(result.lattice_points_used == 7);

    const auto longer = loop_signature(FamilySpec::projective(2), 6);
    CHECK(longer.series.all_integer());
    CHECK(longer.series == loop_signature_oracle_projective(2, 6));
}

TEST_CASE("product signatures factor") {
    const auto p2 = loop_signature(FamilySpec::projective(2), 5).series;
    const auto closed = loop_signature(FamilySpec::kleinschmidt(kdata(4, 3, {0, 0})), 5).series;
    CHECK(closed == pow(p2, 2));

    const auto fam = FamilySpec::product({FamilySpec::projective(2), FamilySpec::projective(2)});
    CHECK(loop_signature(fam, 5).series == pow(p2, 2));
}

TEST_CASE("constant term equals the fan signature") {
    struct Case {
        FamilySpec family;
        Fan fan;
    };
    std::vector<Case> cases;
    cases.push_back({FamilySpec::projective(2), projective_fan(2)});
    cases.push_back({FamilySpec::projective(4), projective_fan(4)});
    cases.push_back({FamilySpec::product({FamilySpec::projective(1), FamilySpec::projective(1)}),
                     product_fan(projective_fan(1), projective_fan(1))});
    for (const auto& data : {kdata(4, 3, {0, 0}), kdata(4, 3, {0, 1}), kdata(4, 3, {1, 2})})
        cases.push_back({FamilySpec::kleinschmidt(data), kleinschmidt_fan(data)});
    for (const auto& c : cases) {
        const auto result = loop_signature(c.family, 3);
        CHECK(result.series.coeff(0) == static_cast<long>(signature_from_fan(c.fan)));
        CHECK(result.series.all_integer());
    }
}

TEST_CASE("generic box route agrees with the closed form") {
    const auto family = loop_signature(FamilySpec::projective(2), 2).series;
    const auto generic = loop_signature(projective_fan(2), 2, 8);
    CHECK(generic.series == family);
    CHECK(generic.soundness == Soundness::best_effort);
    CHECK(generic.shell_clean);  // radius 8 shell terms all have order > 2

    // an undersized box is reported as unclean
    const auto tight = loop_signature(projective_fan(2), 6, 2);
    CHECK_FALSE(tight.shell_clean);
}

TEST_CASE("generic route over supplied points") {
    const auto region = enumeration_region(FamilySpec::projective(2), 3);
    const auto result = loop_signature_over_points(projective_fan(2), 3, region, "projective:2",
                                                   Soundness::proved);
    CHECK(result.series == loop_signature(FamilySpec::projective(2), 3).series);
}

TEST_CASE("equivariant tables") {
    const auto p1_table = equivariant_table(projective_fan(1), 5);
    CHECK(p1_table.size() == 11);
    for (const auto& term : p1_table) CHECK(term.is_zero());

    const Fan p1xp1 = product_fan(projective_fan(1), projective_fan(1));
    for (const auto& term : equivariant_table(p1xp1, 2)) CHECK(term.is_zero());

    const auto p2_table = equivariant_table(projective_fan(2), 1);
    bool found = false;
    for (const auto& term : p2_table)
        if (term.m == LatticePoint{1, 0}) {
            found = true;
            CHECK(term.term == q_over_one_plus_q_squared());
            CHECK(term.order == 1);
        }
    CHECK(found);
}

TEST_CASE("rigidity checks") {
    const auto p1 = rigidity_check(projective_fan(1), 5);
    CHECK(p1.is_spin);
    CHECK(p1.all_nonzero_vanish);
    CHECK(p1.points_checked == 10);

    const Fan p1xp1 = product_fan(projective_fan(1), projective_fan(1));
    const auto r = rigidity_check(p1xp1, 5);
    CHECK(r.is_spin);
    CHECK(r.all_nonzero_vanish);
    CHECK(r.points_checked == 120);

    const auto p2 = rigidity_check(projective_fan(2), 5);
    CHECK_FALSE(p2.is_spin);
    CHECK_FALSE(p2.all_nonzero_vanish);
    REQUIRE(p2.witness_m.has_value());
    CHECK(*p2.witness_m == LatticePoint{1, 0});
    CHECK(p2.witness_term == q_over_one_plus_q_squared());
    CHECK(p2.passed());
}

TEST_CASE("spin constancy factorization") {
    {
        const auto series = loop_signature(FamilySpec::projective(1), 5).series;
        const auto report = spin_constancy_check(projective_fan(1), series);
        CHECK(report.passed());
        CHECK(report.cone_sum_at_zero == 0);
    }
    {
        const Fan fan = product_fan(projective_fan(1), projective_fan(1));
        const auto fam = FamilySpec::product({FamilySpec::projective(1), FamilySpec::projective(1)});
        const auto report = spin_constancy_check(fan, loop_signature(fam, 5).series);
        CHECK(report.passed());
        CHECK(report.expected_constant == 0);
    }
    {
        const auto series = loop_signature(FamilySpec::projective(2), 5).series;
        const auto report = spin_constancy_check(projective_fan(2), series);
        CHECK_FALSE(report.applicable);
    }
}

TEST_CASE("positivity reports") {
    TruncatedSeries good(2);
    good.set_coeff(0, 1);
    good.set_coeff(1, 32);
    good.set_coeff(2, 256);
    CHECK(positivity_report(good).passed());

    TruncatedSeries odd_tail(1);
    odd_tail.set_coeff(0, 1);
    odd_tail.set_coeff(1, 3);
    const auto r1 = positivity_report(odd_tail);
    CHECK_FALSE(r1.passed());
    CHECK(r1.all_positive);
    CHECK_FALSE(r1.even_at_positive_powers);

    TruncatedSeries negative(1);
    negative.set_coeff(0, -1);
    negative.set_coeff(1, 2);
    CHECK_FALSE(positivity_report(negative).all_positive);
}

TEST_CASE("implied character") {
    const auto character = implied_h0_character(2, 1);
    CHECK(character.coeff(0) == 1);
    CHECK(character.coeff(1) == 16);
    CHECK_THROWS_AS(implied_h0_character(3, 2), std::invalid_argument);
}

TEST_CASE("numerator collapse") {
    for (int d = 1; d <= 4; ++d) CHECK(numerator_identity_check(d).pass);
    CHECK(numerator_identity_check_two_factor(4, 4).pass);
}

TEST_CASE("family parsing") {
    const auto p = parse_family("projective:3");
    CHECK(p.kind == FamilySpec::Kind::projective);
    CHECK(p.proj_dim == 3);

    const auto k = parse_family("kleinschmidt:4:3:0,1");
    CHECK(k.kind == FamilySpec::Kind::kleinschmidt);
    CHECK(k.kdata.d == 4);
    CHECK(k.kdata.s == 3);
    CHECK(k.kdata.a == std::vector<long long>{0, 1});
    CHECK(k.name() == "kleinschmidt:4:3:0,1");

    CHECK_THROWS_AS(parse_family("projective"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("kleinschmidt:4:3"), std::invalid_argument);
    CHECK_THROWS_AS(parse_family("torus:2"), std::invalid_argument);
}

TEST_CASE("thread count does not change values") {
    setenv("LOOPSIG_THREADS", "1", 1);
    const auto serial = loop_signature(FamilySpec::projective(2), 5);
    setenv("LOOPSIG_THREADS", "4", 1);
    const auto parallel = loop_signature(FamilySpec::projective(2), 5);
    unsetenv("LOOPSIG_THREADS");
    CHECK(serial.series == parallel.series);
    CHECK(serial.lattice_points_used == parallel.lattice_points_used);
}
