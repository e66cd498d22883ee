#pragma once

#include <map>
#include <string>
#include <vector>

#include "loopsig/series.hpp"

namespace loopsig {

// Polynomial in the Pontryagin classes. A monomial is the exponent vector
// (entry i = exponent of p_{i+1}); the weighted degree of p_i is i.
class PontryaginPolynomial {
public:
    using Monomial = std::vector<int>;

    void add_term(Monomial m, const Rational& coeff);
    const std::map<Monomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // True when every monomial has weighted degree n.
    bool homogeneous_of_weight(int n) const;

    std::string to_string() const;  // e.g. "1/3*p1", "-1/45*p1^2 + 7/45*p2"

private:
    std::map<Monomial, Rational> terms_;
};

// The polynomials K_1..K_n attached to an even characteristic series with
// coefficients a_0=1, a_1, ... : expand Q(x_1)...Q(x_n) in n variables and
// rewrite each homogeneous layer in the elementary symmetric functions of
// the x_i^2.
std::vector<PontryaginPolynomial> multiplicative_sequence(const std::vector<Rational>& q_coeffs,
                                                          int n);

// All Pontryagin numbers p_I of complex projective 2n-space, keyed by the
// partition I of n (parts non-increasing). Uses the total Pontryagin class
// (1+x^2)^{2n+1} truncated above x^{4n}.
std::map<std::vector<int>, Integer> pontryagin_numbers_projective(int n);

// Evaluate a Pontryagin polynomial against a table of Pontryagin numbers.
Rational evaluate_pontryagin(const PontryaginPolynomial& poly,
                             const std::map<std::vector<int>, Integer>& numbers);

// Genus of complex projective d-space for an even characteristic series
// given as an x-series with rational coefficients:
//   [coefficient of x^d in Q(x)^{d+1}] / Q(0).
// Odd d gives 0 (the coefficient of an odd power of an even series).
Rational genus_eval_projective(const TruncatedSeries& q_series_in_x, int d);

// Same with q-series coefficients.
TruncatedSeries genus_eval_projective(const BivariateSeries& q, int d);

// The characteristic series of the loop-space signature:
//   Q(x) = x (1+e^-x)/(1-e^-x) * prod_{n>=1} (1+q^n e^-x)(1+q^n e^x) /
//          ((1-q^n e^-x)(1-q^n e^x)),
// truncated at the given orders; factors with n > q_order are 1 up to the
// truncation, so the cutoff is exact.
BivariateSeries signature_q_series(int x_order, int q_order);

struct EpsPowers {
    TruncatedSeries eps;
    TruncatedSeries eps_quarter;
    TruncatedSeries eps_inv_quarter;
};

// eps_inv_quarter = 2 prod (1+q^n)^2/(1-q^n)^2; the quarter powers of eps
// are defined through this explicit product, never by root extraction.
EpsPowers eps_powers(int q_order);

struct EllipticParameters {
    TruncatedSeries delta;
    TruncatedSeries epsilon;
};

// Fit (f')^2 = 1 - 2 delta f^2 + eps f^4 for f = x/(Q/Q(0)) built from
// signature_q_series, solving the x^2 and x^4 layers. Throws FitError when
// the remaining layers do not vanish or the fitted eps disagrees with the
// eps_powers product form.
EllipticParameters elliptic_parameters_fit(int q_order, int x_order);

// Loop-space signature of projective d-space through the characteristic
// series route: coefficient of x^d in Q(x)^{d+1}, divided by Q(0). The
// independent check against the lattice-sum evaluator.
TruncatedSeries loop_signature_oracle_projective(int d, int q_order);

// och(q, X) = sign(q, LX) * eps^{d/4} for even complex dimension d.
TruncatedSeries och_from_sign(const TruncatedSeries& sign_series, int d);

// x/tanh(x) as an exact x-series (the signature-genus characteristic
// series): 1 + x^2/3 - x^4/45 + 2x^6/945 - ...
TruncatedSeries x_over_tanh_x(int x_order);

}  // namespace loopsig
