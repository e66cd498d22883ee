#pragma once

#include <vector>

#include "loopsig/rational.hpp"

namespace loopsig {

// Power series in q truncated at a fixed order N: coefficients of q^0..q^N,
// exact rationals. The order is part of the value; combining series of
// different orders throws OrderMismatchError.
class TruncatedSeries {
public:
    explicit TruncatedSeries(int order);
    TruncatedSeries(int order, std::vector<Rational> coeffs);

    static TruncatedSeries constant(int order, const Rational& value);
    static TruncatedSeries monomial(int order, int exponent, const Rational& value);

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Rational& coeff(int j) const { return coeffs_.at(j); }
    void set_coeff(int j, const Rational& value) {
        coeffs_.at(j) = value;
        coeffs_.at(j).canonicalize();
    }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    bool is_zero() const;
    bool all_integer() const;

    TruncatedSeries truncated(int new_order) const;

private:
    std::vector<Rational> coeffs_;
};

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
TruncatedSeries operator*(const Rational& c, const TruncatedSeries& a);

// Multiplicative inverse up to the truncation order. Throws
// NotInvertibleError when the constant term is zero.
TruncatedSeries invert(const TruncatedSeries& a);

// Integer power by repeated squaring; negative exponents go through invert.
TruncatedSeries pow(const TruncatedSeries& a, long exponent);

// Expansion of 1/(1 + q^k) at q = 0:
//   k > 0: 1 - q^k + q^{2k} - ...
//   k = 0: the constant 1/2
//   k < 0: q^{|k|} - q^{2|k|} + ...   (rewrite 1/(1+q^k) = q^{-k}/(1+q^{-k}))
TruncatedSeries expand_inv_one_plus_qk(long k, int order);

// Series in x whose coefficients are q-series, truncated in both variables.
// All coefficient series share one q-order.
class BivariateSeries {
public:
    BivariateSeries(int x_order, int q_order);

    static BivariateSeries constant(int x_order, int q_order, const Rational& value);

    int x_order() const { return static_cast<int>(coeffs_.size()) - 1; }
    int q_order() const { return q_order_; }
    const TruncatedSeries& coeff(int i) const { return coeffs_.at(i); }
    void set_coeff(int i, const TruncatedSeries& s);

    bool is_zero() const;

private:
    int q_order_;
    std::vector<TruncatedSeries> coeffs_;
};

bool operator==(const BivariateSeries& a, const BivariateSeries& b);
BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b);
BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b);
BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b);

// Inverse in the x-adic sense: the x^0 coefficient must be an invertible
// q-series.
BivariateSeries invert(const BivariateSeries& a);

BivariateSeries pow(const BivariateSeries& a, long exponent);

// d/dx.
BivariateSeries derivative_x(const BivariateSeries& a);

}  // namespace loopsig
