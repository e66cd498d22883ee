#pragma once

#include <optional>
#include <string>
#include <vector>

#include "loopsig/rational.hpp"

namespace loopsig {

// Primitive integer generator of a 1-dimensional cone.
using RayVector = std::vector<long long>;

// A cone of a simplicial fan, recorded by the sorted indices of its rays.
struct Cone {
    std::vector<int> ray_indices;

    int dim() const { return static_cast<int>(ray_indices.size()); }
    bool operator==(const Cone&) const = default;
};

// Combinatorial model of a (purportedly complete, regular) fan in Z^d. The
// cone list is closed under faces and contains the empty cone; closure is
// generated eagerly from the maximal cones at construction. Values are
// immutable once built.
class Fan {
public:
    Fan(int dim, std::vector<RayVector> rays, std::vector<Cone> max_cones);

    int dim() const { return dim_; }
    const std::vector<RayVector>& rays() const { return rays_; }
    const std::vector<Cone>& cones() const { return cones_; }
    const std::vector<Cone>& max_cones() const { return max_cones_; }

private:
    int dim_;
    std::vector<RayVector> rays_;
    std::vector<Cone> cones_;      // full face closure, sorted by (dim, lex)
    std::vector<Cone> max_cones_;  // the input maximal cones, deduplicated
};

struct FanCheck {
    std::string name;
    bool pass;
    std::string detail;
};

struct FanValidationReport {
    bool valid = true;
    std::vector<FanCheck> checks;

    std::string first_failure() const;
};

// Checks primitivity of the rays, face closure, regularity (each maximal
// cone has d rays spanning a determinant-±1 matrix) and completeness via
// facet pairing (every (d-1)-cone lies in exactly two maximal cones).
FanValidationReport validate_fan(const Fan& fan);

// Fan of projective d-space: rays e_1..e_d and -e_1-...-e_d, cones spanned
// by all proper subsets.
Fan projective_fan(int d);

// Classification data for the smooth complete toric varieties of Picard
// number two: dimension d, split s with 1 < s < d+1, r = d-s+1, and a
// non-decreasing list a_1..a_r of non-negative twists.
struct KleinschmidtData {
    int d = 0;
    int s = 0;
    std::vector<long long> a;

    int r() const { return d - s + 1; }
    void validate() const;  // throws std::invalid_argument
};

// Fan with rays u_1..u_{r+1}, v_1..v_s and the (r+1)*s maximal cones
// obtained by dropping one u and one v.
Fan kleinschmidt_fan(const KleinschmidtData& data);

// Fan of the product variety: embedded rays of both factors, cones all
// joins of a cone of each factor.
Fan product_fan(const Fan& f1, const Fan& f2);

// Coefficients h_0..h_d of sum_{C in fan} (t-1)^{d-dim C}.
std::vector<long long> h_vector(const Fan& fan);

// Alternating sum of the h-vector.
long long signature_from_fan(const Fan& fan);

// A vector pairing oddly with every ray generator, if one exists (the spin
// criterion); solved over the field with two elements.
std::optional<std::vector<long long>> spin_test(const Fan& fan);

// Equality up to simultaneous reordering of the rays (and the induced
// relabeling of cones); not up to lattice automorphism.
bool fans_equal_up_to_ray_order(const Fan& a, const Fan& b);

}  // namespace loopsig
