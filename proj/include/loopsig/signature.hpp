#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "loopsig/fan.hpp"
#include "loopsig/laurent.hpp"
#include "loopsig/series.hpp"

namespace loopsig {

using LatticePoint = std::vector<long long>;

// One character's contribution: the lattice point, its exact cone sum, and
// the order of vanishing of that sum at q = 0 (nullopt = identically zero).
struct EquivariantTerm {
    LatticePoint m;
    LaurentFraction term;
    std::optional<long long> order;

    bool is_zero() const { return term.is_zero(); }
};

enum class Soundness { proved, best_effort };

struct LoopSignatureResult {
    TruncatedSeries series;
    std::string family;
    unsigned long long lattice_points_used = 0;
    Soundness soundness = Soundness::proved;
    bool shell_clean = true;  // generic mode: no boundary-shell term reaches the order
    std::string diagnostics;
};

// Supported closed-form families.
struct FamilySpec {
    enum class Kind { projective, kleinschmidt, product };

    Kind kind = Kind::projective;
    int proj_dim = 0;
    KleinschmidtData kdata;
    std::vector<FamilySpec> factors;

    static FamilySpec projective(int d);
    static FamilySpec kleinschmidt(KleinschmidtData data);
    static FamilySpec product(std::vector<FamilySpec> factors);

    int dim() const;
    Fan fan() const;
    std::string name() const;
};

// Parses "projective:<d>" and "kleinschmidt:<d>:<s>:<a1,...,ar>".
FamilySpec parse_family(const std::string& text);

// The sum over all cones of (-1)^codim prod_{rays} 1/(1+q^{m.n}), over the
// common denominator prod_{all rays}(1+q^{m.n}); exact, canonical, with
// exact zero detection.
LaurentFraction cone_sum(const LatticePoint& m, const Fan& fan);

// Closed form of the cone sum for projective d-space: 2/prod(1+q^{m.k_i})
// for even d, identically zero for odd d.
LaurentFraction closed_term_projective(const LatticePoint& m, int d);

// Closed form for the Picard-number-2 family: 2(1+q^{m.w}) over the product
// of the u- and v-factors when s is odd and d even; identically zero
// otherwise.
LaurentFraction closed_term_kleinschmidt(const LatticePoint& m, const KleinschmidtData& data);

// Exact order of vanishing of the corresponding closed-form term.
long long term_order_projective(const LatticePoint& m, int d);
long long term_order_kleinschmidt(const LatticePoint& m, const KleinschmidtData& data);

// Every lattice point whose term can reach q^N, in deterministic order.
std::vector<LatticePoint> enumeration_region(const FamilySpec& family, int order);

// sign(q, LX) for a supported family: exact truncated sum of the closed-form
// terms over the enumeration region times the d-th power of eps^{-1/4}.
// Coefficients are checked to be integers.
LoopSignatureResult loop_signature(const FamilySpec& family, int order);

// Generic route for an arbitrary valid complete fan: cone sums over the
// infinity-norm box of the given radius. Soundness is best_effort; the
// boundary shell is checked and reported.
LoopSignatureResult loop_signature(const Fan& fan, int order, long long box_radius);

// Generic route over a caller-supplied point set (e.g. a product region).
LoopSignatureResult loop_signature_over_points(const Fan& fan, int order,
                                               const std::vector<LatticePoint>& points,
                                               const std::string& family_label,
                                               Soundness soundness);

// Exact cone sums for every m in the infinity-norm box.
std::vector<EquivariantTerm> equivariant_table(const Fan& fan, long long box_radius);

struct RigidityReport {
    bool is_spin = false;
    bool all_nonzero_vanish = false;
    unsigned long long points_checked = 0;
    std::optional<LatticePoint> witness_m;  // first m != 0 with nonzero term
    LaurentFraction witness_term;

    // spin fans must have every nonzero character vanish; non-spin fans are
    // expected to produce a witness
    bool passed() const { return is_spin ? all_nonzero_vanish : witness_m.has_value(); }
};

RigidityReport rigidity_check(const Fan& fan, long long box_radius);

struct SpinConstancyReport {
    bool applicable = false;  // fan is spin
    Rational cone_sum_at_zero;
    Rational expected_constant;  // signature / 2^d
    bool constant_ok = false;
    bool series_ok = false;

    bool passed() const { return applicable && constant_ok && series_ok; }
};

// For a spin fan: checks S(0) = signature/2^d and that the given series
// equals signature * (eps^{-1/4})^d / 2^d coefficient-wise.
SpinConstancyReport spin_constancy_check(const Fan& fan, const TruncatedSeries& sign_series);

struct PositivityReport {
    bool all_positive = false;
    bool even_at_positive_powers = false;
    std::optional<int> first_bad_index;
    std::string detail;

    bool passed() const { return all_positive && even_at_positive_powers; }
};

PositivityReport positivity_report(const TruncatedSeries& series);

// (sign(q, L P^d) + 1)/2; checked to have non-negative integer coefficients.
TruncatedSeries implied_h0_character(int d, int order);

struct NumeratorIdentityReport {
    bool pass = true;
    std::string detail;
};

// Symbolically expands the alternating sum over proper subsets of
// complements of products (1+X_i) and checks the collapse to
// 1 + (-1)^d X_1...X_{d+1}; also the double-product analogue for the
// Picard-number-2 fans for all (r+1, s) up to the given bounds.
NumeratorIdentityReport numerator_identity_check(int d);
NumeratorIdentityReport numerator_identity_check_two_factor(int r_plus_1_max, int s_max);

// Worker cap honoring the LOOPSIG_THREADS environment variable.
unsigned worker_count();

}  // namespace loopsig
