#include "loopsig/genus.hpp"

#include <algorithm>
#include <sstream>

#include "loopsig/errors.hpp"

namespace loopsig {

namespace {

// Dense multivariate polynomial in nvars variables truncated at a total
// degree bound; only what multiplicative_sequence needs.
using MultiPoly = std::map<std::vector<int>, Rational>;

MultiPoly mp_mul(const MultiPoly& a, const MultiPoly& b, int max_total) {
    MultiPoly r;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            int total = 0;
            std::vector<int> e(ea.size());
            for (size_t i = 0; i < ea.size(); ++i) {
                e[i] = ea[i] + eb[i];
                total += e[i];
            }
            if (total > max_total) continue;
            Rational& slot = r[e];
            slot += ca * cb;
            if (slot == 0) r.erase(e);
        }
    return r;
}

// elementary symmetric function e_k in nvars variables
MultiPoly elementary_symmetric(int k, int nvars) {
    MultiPoly r;
    std::vector<int> idx(static_cast<size_t>(k));
    // iterate k-subsets of {0..nvars-1}
    for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
    if (k == 0) {
        r[std::vector<int>(static_cast<size_t>(nvars), 0)] = 1;
        return r;
    }
    while (true) {
        std::vector<int> e(static_cast<size_t>(nvars), 0);
        for (int i : idx) e[static_cast<size_t>(i)] = 1;
        r[e] = 1;
        int pos = k - 1;
        while (pos >= 0 && idx[static_cast<size_t>(pos)] == nvars - k + pos) --pos;
        if (pos < 0) break;
        ++idx[static_cast<size_t>(pos)];
        for (int i = pos + 1; i < k; ++i)
            idx[static_cast<size_t>(i)] = idx[static_cast<size_t>(i - 1)] + 1;
    }
    return r;
}

TruncatedSeries exp_series(int x_order, long scale) {
    // e^{scale * x}
    TruncatedSeries s(x_order);
    Rational c(1);
    s.set_coeff(0, c);
    for (int k = 1; k <= x_order; ++k) {
        c *= Rational(scale, k);
        s.set_coeff(k, c);
    }
    return s;
}

BivariateSeries lift_x_series(const TruncatedSeries& xs, int q_order) {
    BivariateSeries b(xs.order(), q_order);
    for (int i = 0; i <= xs.order(); ++i)
        b.set_coeff(i, TruncatedSeries::constant(q_order, xs.coeff(i)));
    return b;
}

BivariateSeries scale_bv(const TruncatedSeries& c, const BivariateSeries& a) {
    BivariateSeries r(a.x_order(), a.q_order());
    for (int i = 0; i <= a.x_order(); ++i) r.set_coeff(i, c * a.coeff(i));
    return r;
}

void require_even_in_x(const BivariateSeries& q) {
    for (int i = 1; i <= q.x_order(); i += 2)
        if (!q.coeff(i).is_zero())
            throw std::invalid_argument("characteristic series is not even in x");
}

}  // namespace

void PontryaginPolynomial::add_term(Monomial m, const Rational& coeff) {
    while (!m.empty() && m.back() == 0) m.pop_back();
    if (coeff == 0) return;
    Rational& slot = terms_[m];
    slot += coeff;
    slot.canonicalize();
    if (slot == 0) terms_.erase(m);
}

bool PontryaginPolynomial::homogeneous_of_weight(int n) const {
    for (const auto& [m, c] : terms_) {
        int w = 0;
        for (size_t i = 0; i < m.size(); ++i) w += static_cast<int>(i + 1) * m[i];
        if (w != n) return false;
    }
    return true;
}

std::string PontryaginPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rational_to_string(c);
        for (size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            os << "*p" << (i + 1);
            if (m[i] > 1) os << "^" << m[i];
        }
    }
    return os.str();
}

std::vector<PontryaginPolynomial> multiplicative_sequence(const std::vector<Rational>& q_coeffs,
                                                          int n) {
    if (q_coeffs.empty() || q_coeffs[0] != 1)
        throw std::invalid_argument("multiplicative sequence needs a_0 = 1");
    if (n < 1) throw std::invalid_argument("multiplicative sequence needs n >= 1");

    // product over i of (sum_k a_k y_i^k), truncated at total degree n,
    // where y_i stands for x_i^2
    MultiPoly prod;
    prod[std::vector<int>(static_cast<size_t>(n), 0)] = 1;
    for (int var = 0; var < n; ++var) {
        MultiPoly factor;
        for (int k = 0; k <= n && k < static_cast<int>(q_coeffs.size()); ++k) {
            if (q_coeffs[static_cast<size_t>(k)] == 0) continue;
            std::vector<int> e(static_cast<size_t>(n), 0);
            e[static_cast<size_t>(var)] = k;
            factor[e] = q_coeffs[static_cast<size_t>(k)];
        }
        prod = mp_mul(prod, factor, n);
    }

    std::vector<MultiPoly> elementary;
    for (int k = 0; k <= n; ++k) elementary.push_back(elementary_symmetric(k, n));

    std::vector<PontryaginPolynomial> result;
    for (int j = 1; j <= n; ++j) {
        MultiPoly layer;
        for (const auto& [e, c] : prod) {
            int total = 0;
            for (int v : e) total += v;
            if (total == j) layer[e] = c;
        }
        PontryaginPolynomial kj;
        // rewrite in elementary symmetric functions by repeatedly killing
        // the lexicographically largest monomial
        while (!layer.empty()) {
            auto it = layer.rbegin();
            std::vector<int> lambda = it->first;
            Rational coeff = it->second;
            // symmetric polynomials have a partition-shaped leading term
            for (size_t i = 0; i + 1 < lambda.size(); ++i)
                if (lambda[i] < lambda[i + 1])
                    throw std::logic_error("expansion lost symmetry");
            PontryaginPolynomial::Monomial mono(static_cast<size_t>(j), 0);
            MultiPoly e_product;
            e_product[std::vector<int>(static_cast<size_t>(n), 0)] = 1;
            for (size_t i = 0; i < lambda.size(); ++i) {
                int next = (i + 1 < lambda.size()) ? lambda[i + 1] : 0;
                int mult = lambda[i] - next;
                if (mult < 0) throw std::logic_error("not a partition");
                if (mult == 0) continue;
                mono[i] += mult;
                for (int rep = 0; rep < mult; ++rep)
                    e_product = mp_mul(e_product, elementary[i + 1], j);
            }
            kj.add_term(mono, coeff);
            for (const auto& [e, c] : e_product) {
                auto slot = layer.find(e);
                Rational delta = coeff * c;
                if (slot == layer.end()) {
                    if (delta != 0) layer[e] = -delta;
                } else {
                    slot->second -= delta;
                    if (slot->second == 0) layer.erase(slot);
                }
            }
        }
        if (!kj.homogeneous_of_weight(j)) throw std::logic_error("K_j not homogeneous");
        result.push_back(std::move(kj));
    }
    return result;
}

std::map<std::vector<int>, Integer> pontryagin_numbers_projective(int n) {
    if (n < 1) throw std::invalid_argument("pontryagin_numbers_projective needs n >= 1");
    // total Pontryagin class (1+t)^{2n+1} with t = x^2, truncated above t^n;
    // p_i is the coefficient of t^i and the fundamental class pairs with t^n
    const int classes = 2 * n + 1;
    std::vector<Integer> p(static_cast<size_t>(n) + 1);
    p[0] = 1;
    for (int i = 1; i <= n; ++i) {
        // binomial(2n+1, i)
        Integer b;
        mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(classes),
                     static_cast<unsigned long>(i));
        p[static_cast<size_t>(i)] = b;
    }

    // enumerate partitions of n and take products of the matching p_i,
    // multiplying polynomials modulo t^{n+1} and reading the t^n coefficient
    std::map<std::vector<int>, Integer> numbers;
    std::vector<int> parts;
    auto recurse = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            Integer value = 1;
            for (int part : parts) value *= p[static_cast<size_t>(part)];
            std::vector<int> key = parts;
            std::sort(key.begin(), key.end(), std::greater<int>());
            numbers[key] = value;
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            parts.push_back(part);
            self(self, remaining - part, part);
            parts.pop_back();
        }
    };
    recurse(recurse, n, n);
    return numbers;
}

Rational evaluate_pontryagin(const PontryaginPolynomial& poly,
                             const std::map<std::vector<int>, Integer>& numbers) {
    Rational total = 0;
    for (const auto& [mono, coeff] : poly.terms()) {
        std::vector<int> partition;
        for (size_t i = 0; i < mono.size(); ++i)
            for (int rep = 0; rep < mono[i]; ++rep) partition.push_back(static_cast<int>(i + 1));
        std::sort(partition.begin(), partition.end(), std::greater<int>());
        auto it = numbers.find(partition);
        if (it == numbers.end()) throw std::invalid_argument("missing Pontryagin number");
        total += coeff * Rational(it->second);
    }
    return total;
}

Rational genus_eval_projective(const TruncatedSeries& q_series_in_x, int d) {
    if (q_series_in_x.coeff(0) == 0)
        throw std::invalid_argument("characteristic series needs a nonzero constant term");
    for (int i = 1; i <= q_series_in_x.order(); i += 2)
        if (q_series_in_x.coeff(i) != 0)
            throw std::invalid_argument("characteristic series is not even in x");
    if (d % 2 != 0) return Rational(0);
    if (q_series_in_x.order() < d)
        throw std::invalid_argument("x order too small for the requested dimension");
    TruncatedSeries power = pow(q_series_in_x, d + 1);
    return power.coeff(d) / q_series_in_x.coeff(0);
}

TruncatedSeries genus_eval_projective(const BivariateSeries& q, int d) {
    require_even_in_x(q);
    if (d % 2 != 0) return TruncatedSeries(q.q_order());
    if (q.x_order() < d)
        throw std::invalid_argument("x order too small for the requested dimension");
    BivariateSeries power = pow(q, d + 1);
    return power.coeff(d) * invert(q.coeff(0));
}

BivariateSeries signature_q_series(int x_order, int q_order) {
    if (x_order < 0 || q_order < 0) throw std::invalid_argument("negative truncation order");
    // prefactor x(1+e^-x)/(1-e^-x) as an x-series
    TruncatedSeries em = exp_series(x_order, -1);
    TruncatedSeries a = TruncatedSeries::constant(x_order, 1) + em;
    // (1 - e^-x)/x = sum_{k>=0} (-1)^k x^k/(k+1)!
    TruncatedSeries b(x_order);
    {
        Rational c(1);
        b.set_coeff(0, c);
        for (int k = 1; k <= x_order; ++k) {
            c *= Rational(-1, k + 1);
            b.set_coeff(k, c);
        }
    }
    BivariateSeries result = lift_x_series(a * invert(b), q_order);

    for (int n = 1; n <= q_order; ++n) {
        // (1 + q^n e^-x)(1 + q^n e^x) / ((1 - q^n e^-x)(1 - q^n e^x))
        for (int sign : {-1, +1}) {
            BivariateSeries numer = BivariateSeries::constant(x_order, q_order, 1);
            BivariateSeries denom_inv(x_order, q_order);
            for (int j = 0; j * n <= q_order; ++j) {
                TruncatedSeries ex = exp_series(x_order, sign * j);
                for (int i = 0; i <= x_order; ++i) {
                    TruncatedSeries s = denom_inv.coeff(i);
                    Rational add = ex.coeff(i);
                    if (add != 0) {
                        Rational v = s.coeff(j * n) + add;
                        s.set_coeff(j * n, v);
                        denom_inv.set_coeff(i, s);
                    }
                }
                if (j == 1) {
                    TruncatedSeries qn = TruncatedSeries::monomial(q_order, n, 1);
                    BivariateSeries add(x_order, q_order);
                    for (int i = 0; i <= x_order; ++i) add.set_coeff(i, ex.coeff(i) * qn);
                    numer = numer + add;
                }
            }
            result = result * numer * denom_inv;
        }
    }
    return result;
}

EpsPowers eps_powers(int q_order) {
    TruncatedSeries inv_quarter = TruncatedSeries::constant(q_order, 2);
    for (int n = 1; n <= q_order; ++n) {
        TruncatedSeries one_plus(q_order);
        one_plus.set_coeff(0, 1);
        if (n <= q_order) one_plus.set_coeff(n, 1);
        TruncatedSeries geom(q_order);  // 1/(1-q^n)
        for (int j = 0; j * n <= q_order; ++j) geom.set_coeff(j * n, 1);
        TruncatedSeries factor = one_plus * geom;
        inv_quarter = inv_quarter * factor * factor;
    }
    TruncatedSeries quarter = invert(inv_quarter);
    return EpsPowers{pow(quarter, 4), quarter, inv_quarter};
}

EllipticParameters elliptic_parameters_fit(int q_order, int x_order) {
    if (x_order < 8) throw std::invalid_argument("elliptic fit needs x_order >= 8");
    const int xi = x_order + 1;  // buffer so derivatives are exact through x_order
    BivariateSeries q = signature_q_series(xi, q_order);
    TruncatedSeries q0_inv = invert(q.coeff(0));
    BivariateSeries qhat = scale_bv(q0_inv, q);

    BivariateSeries qhat_inv = invert(qhat);
    BivariateSeries f(xi, q_order);  // x / qhat
    for (int i = 1; i <= xi; ++i) f.set_coeff(i, qhat_inv.coeff(i - 1));

    BivariateSeries fp = derivative_x(f);
    BivariateSeries fp2 = fp * fp;
    BivariateSeries f2 = f * f;
    BivariateSeries f4 = f2 * f2;

    // x^2 layer: fp2_2 = -2 delta f2_2 ; x^4 layer: fp2_4 = -2 delta f2_4 + eps f4_4
    TruncatedSeries delta =
        Rational(-1, 2) * (fp2.coeff(2) * invert(f2.coeff(2)));
    TruncatedSeries eps =
        (fp2.coeff(4) + Rational(2) * (delta * f2.coeff(4))) * invert(f4.coeff(4));

    // residual (f')^2 - (1 - 2 delta f^2 + eps f^4) through x_order
    BivariateSeries rhs = BivariateSeries::constant(xi, q_order, 1);
    rhs = rhs - scale_bv(Rational(2) * delta, f2) + scale_bv(eps, f4);
    BivariateSeries residual = fp2 - rhs;
    for (int i = 0; i <= x_order; ++i)
        if (!residual.coeff(i).is_zero())
            throw FitError("elliptic fit residual is nonzero at x^" + std::to_string(i));

    if (!(eps == eps_powers(q_order).eps))
        throw FitError("fitted eps disagrees with the product form");

    return EllipticParameters{delta, eps};
}

TruncatedSeries loop_signature_oracle_projective(int d, int q_order) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    BivariateSeries q = signature_q_series(d, q_order);
    if (d % 2 != 0) return genus_eval_projective(q, d);  // zero by evenness
    TruncatedSeries numerator = pow(q, d + 1).coeff(d);
    return numerator * eps_powers(q_order).eps_quarter;
}

TruncatedSeries och_from_sign(const TruncatedSeries& sign_series, int d) {
    if (d % 2 != 0) throw std::invalid_argument("och_from_sign needs even complex dimension");
    return sign_series * pow(eps_powers(sign_series.order()).eps_quarter, d);
}

TruncatedSeries x_over_tanh_x(int x_order) {
    // cosh(x) / (sinh(x)/x)
    TruncatedSeries cosh_x(x_order), sinh_over_x(x_order);
    Rational c(1), s(1);
    cosh_x.set_coeff(0, c);
    sinh_over_x.set_coeff(0, s);
    for (int k = 2; k <= x_order; k += 2) {
        c /= Rational(k * (k - 1));
        s /= Rational(k * (k + 1));
        cosh_x.set_coeff(k, c);
        sinh_over_x.set_coeff(k, s);
    }
    return cosh_x * invert(sinh_over_x);
}

}  // namespace loopsig
