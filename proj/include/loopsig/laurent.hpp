#pragma once

#include <map>
#include <optional>

#include "loopsig/rational.hpp"
#include "loopsig/series.hpp"

namespace loopsig {

// Laurent polynomial in q with integer coefficients: a finite map from
// (possibly negative) exponent to nonzero coefficient.
class LaurentPolynomial {
public:
    LaurentPolynomial() = default;  // zero

    static LaurentPolynomial one();
    static LaurentPolynomial monomial(long long exponent, Integer coeff);
    // 1 + q^k (equals the constant 2 when k = 0).
    static LaurentPolynomial one_plus_qk(long long k);

    void add_term(long long exponent, const Integer& coeff);

    bool is_zero() const { return terms_.empty(); }
    long long min_exponent() const;  // requires nonzero
    long long max_exponent() const;  // requires nonzero
    const std::map<long long, Integer>& terms() const { return terms_; }

    // gcd of the coefficients, positive; 0 for the zero polynomial.
    Integer content() const;

    LaurentPolynomial shifted(long long delta) const;
    void divide_content(const Integer& g);
    void negate();

private:
    std::map<long long, Integer> terms_;
};

bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b);
LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b);
LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b);
LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b);

// Ratio of Laurent polynomials, kept in canonical form: the denominator has
// lowest exponent 0 and positive lowest coefficient, the gcd of the two
// contents is removed, and a zero numerator collapses to 0/1. Zero testing
// and order computation are therefore O(size). Full polynomial gcd reduction
// is not performed.
class LaurentFraction {
public:
    LaurentFraction();  // zero
    LaurentFraction(LaurentPolynomial num, LaurentPolynomial den);

    static LaurentFraction zero();
    static LaurentFraction one();
    static LaurentFraction constant(const Rational& value);

    bool is_zero() const { return num_.is_zero(); }
    const LaurentPolynomial& num() const { return num_; }
    const LaurentPolynomial& den() const { return den_; }

    // Order of vanishing of the q-expansion at q = 0; nullopt means
    // +infinity (the zero fraction).
    std::optional<long long> order() const;

    // Expansion to the given order by long division. Throws
    // PoleAtOriginError when order() < 0.
    TruncatedSeries expand(int order) const;

    // The constant value when both num and den are constants.
    Rational as_constant() const;

private:
    void canonicalize();

    LaurentPolynomial num_;
    LaurentPolynomial den_;
};

// Structural equality of canonical forms.
bool operator==(const LaurentFraction& a, const LaurentFraction& b);

LaurentFraction operator+(const LaurentFraction& a, const LaurentFraction& b);
LaurentFraction operator*(const LaurentFraction& a, const LaurentFraction& b);

// Cross-multiplied equality (num_a*den_b == num_b*den_a); true semantic
// equality even when the canonical forms are not fully reduced.
bool equivalent(const LaurentFraction& a, const LaurentFraction& b);

}  // namespace loopsig
