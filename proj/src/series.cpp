#include "loopsig/series.hpp"

#include <cstdlib>
#include <utility>

#include "loopsig/errors.hpp"

namespace loopsig {

namespace {

void require_same_order(int a, int b) {
    if (a != b)
        throw OrderMismatchError("series order mismatch: " + std::to_string(a) +
                                 " vs " + std::to_string(b));
}

}  // namespace

TruncatedSeries::TruncatedSeries(int order) {
    if (order < 0) throw std::invalid_argument("negative series order");
    coeffs_.assign(static_cast<size_t>(order) + 1, Rational(0));
}

TruncatedSeries::TruncatedSeries(int order, std::vector<Rational> coeffs)
    : coeffs_(std::move(coeffs)) {
    if (order < 0 || coeffs_.size() != static_cast<size_t>(order) + 1)
        throw std::invalid_argument("coefficient count does not match order");
    for (auto& c : coeffs_) c.canonicalize();
}

TruncatedSeries TruncatedSeries::constant(int order, const Rational& value) {
    TruncatedSeries s(order);
    s.coeffs_[0] = value;
    return s;
}

TruncatedSeries TruncatedSeries::monomial(int order, int exponent, const Rational& value) {
    TruncatedSeries s(order);
    if (exponent < 0) throw std::invalid_argument("negative monomial exponent");
    if (exponent <= order) s.coeffs_[static_cast<size_t>(exponent)] = value;
    return s;
}

bool TruncatedSeries::is_zero() const {
    for (const auto& c : coeffs_)
        if (c != 0) return false;
    return true;
}

bool TruncatedSeries::all_integer() const {
    for (const auto& c : coeffs_)
        if (!is_integer(c)) return false;
    return true;
}

TruncatedSeries TruncatedSeries::truncated(int new_order) const {
    if (new_order > order())
        throw std::invalid_argument("cannot extend a truncated series");
    TruncatedSeries s(new_order);
    for (int j = 0; j <= new_order; ++j) s.coeffs_[static_cast<size_t>(j)] = coeffs_[static_cast<size_t>(j)];
    return s;
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.order() == b.order() && a.coeffs() == b.coeffs();
}

TruncatedSeries operator+(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_order(a.order(), b.order());
    TruncatedSeries r(a.order());
    for (int j = 0; j <= a.order(); ++j) r.set_coeff(j, a.coeff(j) + b.coeff(j));
    return r;
}

TruncatedSeries operator-(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_order(a.order(), b.order());
    TruncatedSeries r(a.order());
    for (int j = 0; j <= a.order(); ++j) r.set_coeff(j, a.coeff(j) - b.coeff(j));
    return r;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
    require_same_order(a.order(), b.order());
    const int n = a.order();
    TruncatedSeries r(n);
    Rational acc, t;
    for (int k = 0; k <= n; ++k) {
        acc = 0;
        for (int i = 0; i <= k; ++i) {
            if (a.coeff(i) == 0 || b.coeff(k - i) == 0) continue;
            t = a.coeff(i) * b.coeff(k - i);
            acc += t;
        }
        r.set_coeff(k, acc);
    }
    return r;
}

TruncatedSeries operator*(const Rational& c, const TruncatedSeries& a) {
    TruncatedSeries r(a.order());
    for (int j = 0; j <= a.order(); ++j) r.set_coeff(j, c * a.coeff(j));
    return r;
}

TruncatedSeries invert(const TruncatedSeries& a) {
    if (a.coeff(0) == 0)
        throw NotInvertibleError("series with zero constant term has no inverse");
    const int n = a.order();
    TruncatedSeries b(n);
    Rational inv0 = 1 / a.coeff(0);
    b.set_coeff(0, inv0);
    for (int k = 1; k <= n; ++k) {
        Rational acc = 0;
        for (int i = 1; i <= k; ++i) acc += a.coeff(i) * b.coeff(k - i);
        b.set_coeff(k, -inv0 * acc);
    }
    return b;
}

TruncatedSeries pow(const TruncatedSeries& a, long exponent) {
    if (exponent < 0) return pow(invert(a), -exponent);
    TruncatedSeries result = TruncatedSeries::constant(a.order(), 1);
    TruncatedSeries base = a;
    unsigned long e = static_cast<unsigned long>(exponent);
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

TruncatedSeries expand_inv_one_plus_qk(long k, int order) {
    TruncatedSeries s(order);
    if (k == 0) {
        s.set_coeff(0, Rational(1, 2));
        return s;
    }
    const long a = std::labs(k);
    // 1/(1+q^a) = sum_j (-1)^j q^{ja}; for k < 0 multiply through by q^a.
    const long lead = (k > 0) ? 0 : a;
    int sign = 1;
    for (long e = lead; e <= order; e += a) {
        s.set_coeff(static_cast<int>(e), Rational(sign));
        sign = -sign;
    }
    return s;
}

BivariateSeries::BivariateSeries(int x_order, int q_order) : q_order_(q_order) {
    if (x_order < 0) throw std::invalid_argument("negative x order");
    coeffs_.assign(static_cast<size_t>(x_order) + 1, TruncatedSeries(q_order));
}

BivariateSeries BivariateSeries::constant(int x_order, int q_order, const Rational& value) {
    BivariateSeries s(x_order, q_order);
    s.coeffs_[0] = TruncatedSeries::constant(q_order, value);
    return s;
}

void BivariateSeries::set_coeff(int i, const TruncatedSeries& s) {
    if (s.order() != q_order_)
        throw OrderMismatchError("bivariate coefficient q-order mismatch");
    coeffs_.at(static_cast<size_t>(i)) = s;
}

bool BivariateSeries::is_zero() const {
    for (const auto& s : coeffs_)
        if (!s.is_zero()) return false;
    return true;
}

bool operator==(const BivariateSeries& a, const BivariateSeries& b) {
    if (a.x_order() != b.x_order() || a.q_order() != b.q_order()) return false;
    for (int i = 0; i <= a.x_order(); ++i)
        if (!(a.coeff(i) == b.coeff(i))) return false;
    return true;
}

namespace {

void require_same_shape(const BivariateSeries& a, const BivariateSeries& b) {
    if (a.x_order() != b.x_order() || a.q_order() != b.q_order())
        throw OrderMismatchError("bivariate series shape mismatch");
}

}  // namespace

BivariateSeries operator+(const BivariateSeries& a, const BivariateSeries& b) {
    require_same_shape(a, b);
    BivariateSeries r(a.x_order(), a.q_order());
    for (int i = 0; i <= a.x_order(); ++i) r.set_coeff(i, a.coeff(i) + b.coeff(i));
    return r;
}

BivariateSeries operator-(const BivariateSeries& a, const BivariateSeries& b) {
    require_same_shape(a, b);
    BivariateSeries r(a.x_order(), a.q_order());
    for (int i = 0; i <= a.x_order(); ++i) r.set_coeff(i, a.coeff(i) - b.coeff(i));
    return r;
}

BivariateSeries operator*(const BivariateSeries& a, const BivariateSeries& b) {
    require_same_shape(a, b);
    BivariateSeries r(a.x_order(), a.q_order());
    for (int k = 0; k <= a.x_order(); ++k) {
        TruncatedSeries acc(a.q_order());
        for (int i = 0; i <= k; ++i) {
            if (a.coeff(i).is_zero() || b.coeff(k - i).is_zero()) continue;
            acc = acc + a.coeff(i) * b.coeff(k - i);
        }
        r.set_coeff(k, acc);
    }
    return r;
}

BivariateSeries invert(const BivariateSeries& a) {
    const TruncatedSeries inv0 = invert(a.coeff(0));
    BivariateSeries b(a.x_order(), a.q_order());
    b.set_coeff(0, inv0);
    for (int k = 1; k <= a.x_order(); ++k) {
        TruncatedSeries acc(a.q_order());
        for (int i = 1; i <= k; ++i) acc = acc + a.coeff(i) * b.coeff(k - i);
        b.set_coeff(k, TruncatedSeries(a.q_order()) - inv0 * acc);
    }
    return b;
}

BivariateSeries pow(const BivariateSeries& a, long exponent) {
    if (exponent < 0) return pow(invert(a), -exponent);
    BivariateSeries result = BivariateSeries::constant(a.x_order(), a.q_order(), 1);
    BivariateSeries base = a;
    unsigned long e = static_cast<unsigned long>(exponent);
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e > 0) base = base * base;
    }
    return result;
}

BivariateSeries derivative_x(const BivariateSeries& a) {
    BivariateSeries r(a.x_order(), a.q_order());
    for (int i = 0; i + 1 <= a.x_order(); ++i)
        r.set_coeff(i, Rational(i + 1) * a.coeff(i + 1));
    return r;
}

}  // namespace loopsig
