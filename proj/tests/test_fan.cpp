#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "loopsig/errors.hpp"
#include "loopsig/fan.hpp"
#include "loopsig/json_io.hpp"

using namespace loopsig;

namespace {

KleinschmidtData kdata(int d, int s, std::vector<long long> a) {
    KleinschmidtData k;
    k.d = d;
    k.s = s;
    k.a = std::move(a);
    return k;
}

std::vector<long long> h_poly_product(const std::vector<long long>& a,
                                      const std::vector<long long>& b) {
    std::vector<long long> r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

}  // namespace

TEST_CASE("projective fan construction") {
    const Fan p1 = projective_fan(1);
    CHECK(p1.rays() == std::vector<RayVector>{{1}, {-1}});
    CHECK(p1.max_cones().size() == 2);
    CHECK(validate_fan(p1).valid);

    const Fan p2 = projective_fan(2);
    CHECK(p2.rays().size() == 3);
    CHECK(p2.max_cones().size() == 3);
    CHECK(p2.cones().size() == 7);  // proper subsets of the three rays
    CHECK(validate_fan(p2).valid);

    CHECK_THROWS_AS(projective_fan(0), std::invalid_argument);
}

TEST_CASE("validation failures carry the offender") {
    // P^2 with one maximal cone removed: a facet with a single incident cone
    const Fan p2 = projective_fan(2);
    std::vector<Cone> partial(p2.max_cones().begin(), p2.max_cones().end() - 1);
    const Fan broken(2, p2.rays(), partial);
    const auto report = validate_fan(broken);
    CHECK_FALSE(report.valid);
    CHECK(report.first_failure().find("completeness") != std::string::npos);

    const Fan imprimitive(2, {{2, 0}, {0, 1}, {-2, -1}}, {{{0, 1}}, {{1, 2}}, {{0, 2}}});
    const auto report2 = validate_fan(imprimitive);
    CHECK_FALSE(report2.valid);
    CHECK(report2.first_failure().find("primitivity") != std::string::npos);

    // non-unimodular maximal cone
    const Fan irregular(2, {{1, 0}, {1, 2}, {-1, -1}}, {{{0, 1}}, {{1, 2}}, {{0, 2}}});
    const auto report3 = validate_fan(irregular);
    CHECK_FALSE(report3.valid);
    bool regularity_failed = false;
    for (const auto& c : report3.checks)
        if (c.name == "regularity" && !c.pass) regularity_failed = true;
    CHECK(regularity_failed);
}

TEST_CASE("h-vector and signature") {
    CHECK(h_vector(projective_fan(2)) == std::vector<long long>{1, 1, 1});
    CHECK(signature_from_fan(projective_fan(2)) == 1);

    const Fan p1xp1 = product_fan(projective_fan(1), projective_fan(1));
    CHECK(h_vector(p1xp1) == std::vector<long long>{1, 2, 1});
    CHECK(signature_from_fan(p1xp1) == 0);

    CHECK(signature_from_fan(projective_fan(4)) == 1);
    CHECK(h_vector(projective_fan(4)) == std::vector<long long>{1, 1, 1, 1, 1});

    const Fan p2xp2 = product_fan(projective_fan(2), projective_fan(2));
    CHECK(h_vector(p2xp2) == std::vector<long long>{1, 2, 3, 2, 1});
}

TEST_CASE("h-vector properties over the construction set") {
    std::vector<Fan> fans;
    for (int d = 1; d <= 5; ++d) fans.push_back(projective_fan(d));
    fans.push_back(product_fan(projective_fan(1), projective_fan(2)));
    fans.push_back(product_fan(projective_fan(2), projective_fan(2)));
    fans.push_back(kleinschmidt_fan(kdata(2, 2, {1})));
    fans.push_back(kleinschmidt_fan(kdata(4, 3, {0, 1})));
    fans.push_back(kleinschmidt_fan(kdata(4, 3, {1, 2})));
    fans.push_back(kleinschmidt_fan(kdata(4, 2, {0, 1, 2})));
    fans.push_back(kleinschmidt_fan(kdata(5, 3, {0, 1, 2})));
    for (const auto& fan : fans) {
        CHECK(validate_fan(fan).valid);
        const auto h = h_vector(fan);
        long long total = 0;
        for (size_t p = 0; p < h.size(); ++p) {
            total += h[p];
            CHECK(h[p] == h[h.size() - 1 - p]);  // palindromic
        }
        CHECK(total == static_cast<long long>(fan.max_cones().size()));
    }
}

TEST_CASE("kleinschmidt fans") {
    // the Hirzebruch surface: rays e1, -e1, e2, e1 - e2
    const Fan f1 = kleinschmidt_fan(kdata(2, 2, {1}));
    std::vector<RayVector> expected = {{1, 0}, {-1, 0}, {0, 1}, {1, -1}};
    auto rays = f1.rays();
    std::sort(rays.begin(), rays.end());
    std::sort(expected.begin(), expected.end());
    CHECK(rays == expected);
    CHECK(validate_fan(f1).valid);

    // ray count is always d + 2
    for (const auto& data : {kdata(2, 2, {0}), kdata(4, 3, {0, 0}), kdata(4, 3, {1, 2}),
                             kdata(5, 4, {3, 7}), kdata(6, 3, {0, 0, 2, 5})}) {
        const Fan fan = kleinschmidt_fan(data);
        CHECK(static_cast<int>(fan.rays().size()) == data.d + 2);
        CHECK(static_cast<int>(fan.max_cones().size()) == (data.r() + 1) * data.s);
        CHECK(validate_fan(fan).valid);
    }

    // X_4(0,0) is P^2 x P^2 in the given coordinates
    CHECK(fans_equal_up_to_ray_order(kleinschmidt_fan(kdata(4, 3, {0, 0})),
                                     product_fan(projective_fan(2), projective_fan(2))));

    CHECK_THROWS_AS(kleinschmidt_fan(kdata(1, 2, {})), std::invalid_argument);
    CHECK_THROWS_AS(kleinschmidt_fan(kdata(4, 1, {0, 0, 0, 0})), std::invalid_argument);
    CHECK_THROWS_AS(kleinschmidt_fan(kdata(4, 3, {2, 1})), std::invalid_argument);  // decreasing
    CHECK_THROWS_AS(kleinschmidt_fan(kdata(4, 3, {-1, 0})), std::invalid_argument);
}

TEST_CASE("product fans") {
    const Fan p1xp1 = product_fan(projective_fan(1), projective_fan(1));
    CHECK(p1xp1.rays().size() == 4);
    CHECK(p1xp1.max_cones().size() == 4);
    CHECK(validate_fan(p1xp1).valid);

    // product with the point fan is the identity
    const Fan point(0, {}, {Cone{}});
    CHECK(validate_fan(point).valid);
    CHECK(fans_equal_up_to_ray_order(product_fan(projective_fan(2), point), projective_fan(2)));

    // h-polynomial multiplies, signature multiplies
    const Fan a = projective_fan(2);
    const Fan b = kleinschmidt_fan(kdata(2, 2, {1}));
    const Fan ab = product_fan(a, b);
    CHECK(h_vector(ab) == h_poly_product(h_vector(a), h_vector(b)));
    CHECK(signature_from_fan(ab) == signature_from_fan(a) * signature_from_fan(b));
}

TEST_CASE("spin test") {
    const Fan p1xp1 = product_fan(projective_fan(1), projective_fan(1));
    auto witness = spin_test(p1xp1);
    REQUIRE(witness.has_value());
    CHECK(*witness == std::vector<long long>{1, 1});

    CHECK_FALSE(spin_test(projective_fan(2)).has_value());
    CHECK(spin_test(projective_fan(3)).has_value());
    CHECK_FALSE(spin_test(projective_fan(4)).has_value());
    CHECK(spin_test(projective_fan(1)).has_value());

    // spin on a product iff spin on both factors
    std::vector<Fan> fans;
    for (int d = 1; d <= 4; ++d) fans.push_back(projective_fan(d));
    fans.push_back(kleinschmidt_fan(kdata(2, 2, {1})));
    for (const auto& f1 : fans)
        for (const auto& f2 : fans) {
            const bool both = spin_test(f1).has_value() && spin_test(f2).has_value();
            CHECK(spin_test(product_fan(f1, f2)).has_value() == both);
        }
}

TEST_CASE("fan JSON round trip") {
    const Fan fan = kleinschmidt_fan(kdata(4, 3, {1, 2}));
    const std::string text = fan_to_json(fan);
    const Fan loaded = fan_from_json(text);
    CHECK(loaded.dim() == fan.dim());
    CHECK(loaded.rays() == fan.rays());
    CHECK(loaded.max_cones().size() == fan.max_cones().size());
    CHECK(loaded.cones().size() == fan.cones().size());  // faces reconstructed
    CHECK(fan_to_json(loaded) == text);                  // byte-stable

    CHECK_THROWS_AS(fan_from_json("{"), FanError);
    CHECK_THROWS_AS(fan_from_json("{\"dim\": 2}"), FanError);
    CHECK_THROWS_AS(fan_from_json("{\"dim\":1,\"rays\":[[1]],\"max_cones\":[[3]]}"), FanError);
}
