#pragma once

#include <optional>
#include <string>
#include <vector>

namespace loopsig {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

using Suite = std::vector<CheckResult>;

struct VerifyOptions {
    std::optional<int> order;
    std::optional<int> d;
    std::optional<long long> box;
};

// Two-route agreement of the loop-space signature of projective space:
// lattice sums against the characteristic-series evaluation.
Suite verify_oracle(int order);

// Odd-dimensional projective spaces and even-split Picard-2 varieties give
// the zero series on both routes.
Suite verify_vanishing(int order);

// Positive coefficients, even at positive powers, and a non-negative
// integral implied character for the projective spaces.
Suite verify_positivity(int projective_order, int kleinschmidt_order);

// Spin fans have every nonzero character sum vanish exactly; the projective
// plane produces the expected nonzero witness.
Suite verify_rigidity(long long box_radius);

// Spin witnesses and the constant-series factorization on spin fans.
Suite verify_spin(int order);

// Product fans factor: closed-form, family and generic routes agree with
// the square of the factor series.
Suite verify_multiplicativity(int order);

// Symbolic collapse of the alternating numerator sums.
Suite verify_numerator(int d_max);

// Elliptic-parameter fit: residual, product-form epsilon, och consistency.
Suite verify_elliptic(int q_order);

// Multiplicative-sequence machinery against the projective spaces.
Suite verify_genus();

const std::vector<std::string>& suite_names();
Suite run_suite(const std::string& name, const VerifyOptions& options);

bool all_passed(const Suite& suite);

}  // namespace loopsig
