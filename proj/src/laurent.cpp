#include "loopsig/laurent.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "loopsig/errors.hpp"

namespace loopsig {

LaurentPolynomial LaurentPolynomial::one() { return monomial(0, 1); }

LaurentPolynomial LaurentPolynomial::monomial(long long exponent, Integer coeff) {
    LaurentPolynomial p;
    if (coeff != 0) p.terms_.emplace(exponent, std::move(coeff));
    return p;
}

LaurentPolynomial LaurentPolynomial::one_plus_qk(long long k) {
    LaurentPolynomial p = one();
    p.add_term(k, 1);
    return p;
}

void LaurentPolynomial::add_term(long long exponent, const Integer& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.emplace(exponent, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

long long LaurentPolynomial::min_exponent() const {
    if (terms_.empty()) throw std::logic_error("min_exponent of zero polynomial");
    return terms_.begin()->first;
}

long long LaurentPolynomial::max_exponent() const {
    if (terms_.empty()) throw std::logic_error("max_exponent of zero polynomial");
    return terms_.rbegin()->first;
}

Integer LaurentPolynomial::content() const {
    Integer g = 0;
    for (const auto& [e, c] : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

LaurentPolynomial LaurentPolynomial::shifted(long long delta) const {
    LaurentPolynomial p;
    for (const auto& [e, c] : terms_) p.terms_.emplace(e + delta, c);
    return p;
}

void LaurentPolynomial::divide_content(const Integer& g) {
    if (g == 1) return;
    for (auto& [e, c] : terms_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

void LaurentPolynomial::negate() {
    for (auto& [e, c] : terms_) c = -c;
}

bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.terms() == b.terms();
}

LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(e, c);
    return r;
}

LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial r = a;
    for (const auto& [e, c] : b.terms()) r.add_term(e, -c);
    return r;
}

LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial r;
    Integer t;
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) {
            t = ca * cb;
            r.add_term(ea + eb, t);
        }
    return r;
}

LaurentFraction::LaurentFraction() : num_(), den_(LaurentPolynomial::one()) {}

LaurentFraction::LaurentFraction(LaurentPolynomial num, LaurentPolynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::invalid_argument("zero denominator");
    canonicalize();
}

LaurentFraction LaurentFraction::zero() { return LaurentFraction(); }

LaurentFraction LaurentFraction::one() {
    return LaurentFraction(LaurentPolynomial::one(), LaurentPolynomial::one());
}

LaurentFraction LaurentFraction::constant(const Rational& value) {
    Rational v = value;
    v.canonicalize();
    return LaurentFraction(LaurentPolynomial::monomial(0, v.get_num()),
                           LaurentPolynomial::monomial(0, v.get_den()));
}

namespace {

// Exact quotient num/den when den divides num in Z[q, q^-1]; nullopt
// otherwise. Both arguments nonzero.
std::optional<LaurentPolynomial> exact_divide(const LaurentPolynomial& num,
                                              const LaurentPolynomial& den) {
    const long long nv = num.min_exponent();
    const long long dv = den.min_exponent();
    const long long ndeg = num.max_exponent() - nv;
    const long long ddeg = den.max_exponent() - dv;
    if (ddeg > ndeg) return std::nullopt;
    // ascending power-series division of the shifted polynomials
    std::vector<Rational> n(static_cast<size_t>(ndeg) + 1, Rational(0));
    for (const auto& [e, c] : num.terms()) n[static_cast<size_t>(e - nv)] = Rational(c);
    std::vector<Rational> d(static_cast<size_t>(ddeg) + 1, Rational(0));
    for (const auto& [e, c] : den.terms()) d[static_cast<size_t>(e - dv)] = Rational(c);
    const long long qdeg = ndeg - ddeg;
    std::vector<Rational> quot(static_cast<size_t>(qdeg) + 1, Rational(0));
    const Rational inv0 = 1 / d[0];
    for (long long j = 0; j <= qdeg; ++j) {
        Rational acc = n[static_cast<size_t>(j)];
        for (long long i = 1; i <= std::min(j, ddeg); ++i)
            acc -= d[static_cast<size_t>(i)] * quot[static_cast<size_t>(j - i)];
        quot[static_cast<size_t>(j)] = inv0 * acc;
        if (!is_integer(quot[static_cast<size_t>(j)])) return std::nullopt;
    }
    LaurentPolynomial q;
    for (long long j = 0; j <= qdeg; ++j)
        if (quot[static_cast<size_t>(j)] != 0)
            q.add_term(j + nv - dv, quot[static_cast<size_t>(j)].get_num());
    if (!(q * den == num)) return std::nullopt;
    return q;
}

}  // namespace

void LaurentFraction::canonicalize() {
    if (num_.is_zero()) {
        den_ = LaurentPolynomial::one();
        return;
    }
    const long long shift = den_.min_exponent();
    if (shift != 0) {
        den_ = den_.shifted(-shift);
        num_ = num_.shifted(-shift);
    }
    if (den_.terms().begin()->second < 0) {
        num_.negate();
        den_.negate();
    }
    Integer g;
    mpz_gcd(g.get_mpz_t(), num_.content().get_mpz_t(), den_.content().get_mpz_t());
    if (g > 1) {
        num_.divide_content(g);
        den_.divide_content(g);
    }
    if (den_.terms().size() > 1 || den_.terms().begin()->second != 1) {
        if (auto q = exact_divide(num_, den_)) {
            num_ = std::move(*q);
            den_ = LaurentPolynomial::one();
        }
    }
}

std::optional<long long> LaurentFraction::order() const {
    if (num_.is_zero()) return std::nullopt;
    return num_.min_exponent();  // canonical den has min exponent 0
}

TruncatedSeries LaurentFraction::expand(int order) const {
    TruncatedSeries s(order);
    if (num_.is_zero()) return s;
    if (num_.min_exponent() < 0)
        throw PoleAtOriginError("Laurent fraction has a pole at q = 0");
    // Dense long division against the canonical denominator (d0 at q^0).
    std::vector<Rational> n(static_cast<size_t>(order) + 1, Rational(0));
    for (const auto& [e, c] : num_.terms())
        if (e <= order) n[static_cast<size_t>(e)] = Rational(c);
    std::vector<Rational> d(static_cast<size_t>(order) + 1, Rational(0));
    for (const auto& [e, c] : den_.terms())
        if (e <= order) d[static_cast<size_t>(e)] = Rational(c);
    const Rational inv0 = 1 / d[0];
    for (int j = 0; j <= order; ++j) {
        Rational acc = n[static_cast<size_t>(j)];
        for (int i = 1; i <= j; ++i) {
            if (d[static_cast<size_t>(i)] == 0) continue;
            acc -= d[static_cast<size_t>(i)] * s.coeff(j - i);
        }
        s.set_coeff(j, inv0 * acc);
    }
    return s;
}

Rational LaurentFraction::as_constant() const {
    if (num_.is_zero()) return Rational(0);
    if (num_.max_exponent() != 0 || den_.max_exponent() != 0)
        throw std::logic_error("fraction is not a constant");
    return Rational(num_.terms().begin()->second) / Rational(den_.terms().begin()->second);
}

bool operator==(const LaurentFraction& a, const LaurentFraction& b) {
    return a.num() == b.num() && a.den() == b.den();
}

LaurentFraction operator+(const LaurentFraction& a, const LaurentFraction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    return LaurentFraction(a.num() * b.den() + b.num() * a.den(), a.den() * b.den());
}

LaurentFraction operator*(const LaurentFraction& a, const LaurentFraction& b) {
    if (a.is_zero() || b.is_zero()) return LaurentFraction::zero();
    return LaurentFraction(a.num() * b.num(), a.den() * b.den());
}

bool equivalent(const LaurentFraction& a, const LaurentFraction& b) {
    return a.num() * b.den() == b.num() * a.den();
}

}  // namespace loopsig
