#include "loopsig/signature.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

#include "loopsig/errors.hpp"
#include "loopsig/genus.hpp"

namespace loopsig {

namespace {

long long checked_dot(const LatticePoint& m, const RayVector& ray) {
    __int128 acc = 0;
    for (size_t i = 0; i < ray.size(); ++i)
        acc += static_cast<__int128>(m[i]) * static_cast<__int128>(ray[i]);
    if (acc > LLONG_MAX / 8 || acc < LLONG_MIN / 8)
        throw std::overflow_error("lattice pairing exceeds the supported exponent range");
    return static_cast<long long>(acc);
}

std::string point_to_string(const LatticePoint& m) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < m.size(); ++i) {
        if (i) os << ",";
        os << m[i];
    }
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// fast per-point expansion
//
// Each closed-form term is 2 (1+q^w)^{0 or 1} / prod_i (1+q^{e_i}). Factors
// with e_i = 0 are the constant 2; every other factor expands with
// coefficients in {-1,0,1}. The expansions are multiplied as plain integer
// vectors and accumulated against the common denominator 2^{dim+2}, which
// clears every power of two that can occur.
// ---------------------------------------------------------------------------

class TermAccumulator {
public:
    TermAccumulator(int order, int dim, int buckets)
        : order_(order), two_power_(dim + 2), acc_(static_cast<size_t>(buckets)) {
        for (auto& bucket : acc_) bucket.assign(static_cast<size_t>(order_) + 1, Integer(0));
    }

    // exps: denominator exponents m.n; numer_exp: the numerator exponent m.w
    // for the two-factor closed form, nullopt for the projective one.
    void add(const std::vector<long long>& exps, std::optional<long long> numer_exp,
             long long expected_order, int bucket) {
        const long long shift = numer_exp ? std::min<long long>(0, *numer_exp) : 0;
        const long long padded = order_ - shift;
        check_overflow_bound(padded, static_cast<long long>(exps.size()) + (numer_exp ? 1 : 0));

        prod_.assign(static_cast<size_t>(padded) + 1, 0);
        prod_[0] = 1;
        long long zeros = 0;
        for (long long e : exps) {
            if (e == 0) {
                ++zeros;
                continue;
            }
            multiply_inv_one_plus(e, padded);
        }
        int extra_two = 1;  // the overall factor 2
        if (numer_exp) {
            if (*numer_exp == 0) {
                ++extra_two;  // 1 + q^0 = 2
            } else {
                multiply_one_plus_abs(*numer_exp < 0 ? -*numer_exp : *numer_exp, padded);
            }
        }
        const long long pow2 = two_power_ + extra_two - zeros;
        if (pow2 < 0) throw std::logic_error("power-of-two budget exhausted");

        // runtime soundness check: the leading exponent must match the
        // predicted order of the term
        long long lead = -1;
        for (long long j = 0; j <= padded; ++j)
            if (prod_[static_cast<size_t>(j)] != 0) {
                lead = j;
                break;
            }
        if (lead < 0 || lead + shift != expected_order)
            throw std::logic_error("term order mismatch: predicted " +
                                   std::to_string(expected_order) + ", found " +
                                   std::to_string(lead < 0 ? -1 : lead + shift));

        auto& acc = acc_.at(static_cast<size_t>(bucket));
        for (long long j = std::max<long long>(0, shift); j <= order_; ++j) {
            const long long v = prod_[static_cast<size_t>(j - shift)];
            if (v == 0) continue;
            scratch_ = static_cast<long>(v);
            scratch_ <<= static_cast<unsigned long>(pow2);
            acc[static_cast<size_t>(j)] += scratch_;
        }
        ++count_;
    }

    void merge(const TermAccumulator& other) {
        for (size_t b = 0; b < acc_.size(); ++b)
            for (size_t j = 0; j < acc_[b].size(); ++j) acc_[b][j] += other.acc_[b][j];
        count_ += other.count_;
    }

    TruncatedSeries bucket_series(int bucket) const {
        TruncatedSeries s(order_);
        const Integer denom = Integer(1) << static_cast<unsigned long>(two_power_);
        const Rational scale(Integer(1), denom);
        for (int j = 0; j <= order_; ++j)
            s.set_coeff(j, Rational(acc_.at(static_cast<size_t>(bucket))[static_cast<size_t>(j)]) * scale);
        return s;
    }

    TruncatedSeries total_series() const {
        TruncatedSeries s(order_);
        for (size_t b = 0; b < acc_.size(); ++b) s = s + bucket_series(static_cast<int>(b));
        return s;
    }

    unsigned long long count() const { return count_; }

private:
    void multiply_inv_one_plus(long long e, long long padded) {
        // by the expansion of 1/(1+q^e): alternating +-1 at multiples of |e|,
        // starting at 0 for e > 0 and at |e| for e < 0
        const long long a = e > 0 ? e : -e;
        const long long start = e > 0 ? 0 : a;
        next_.assign(static_cast<size_t>(padded) + 1, 0);
        int sign = 1;
        for (long long t = start; t <= padded; t += a) {
            for (long long k = 0; k + t <= padded; ++k) {
                const long long v = prod_[static_cast<size_t>(k)];
                if (v != 0) next_[static_cast<size_t>(k + t)] += sign > 0 ? v : -v;
            }
            sign = -sign;
        }
        prod_.swap(next_);
    }

    void multiply_one_plus_abs(long long a, long long padded) {
        // by (1 + q^a), a > 0
        for (long long k = padded - a; k >= 0; --k) {
            const long long v = prod_[static_cast<size_t>(k)];
            if (v != 0) prod_[static_cast<size_t>(k + a)] += v;
        }
    }

    void check_overflow_bound(long long padded, long long factors) {
        if (padded <= checked_padded_ && factors <= checked_factors_) return;
        // coefficients are bounded by 2 * C(padded + factors, factors)
        Integer bound;
        mpz_bin_uiui(bound.get_mpz_t(), static_cast<unsigned long>(padded + factors),
                     static_cast<unsigned long>(factors));
        bound <<= 1;
        if (mpz_sizeinbase(bound.get_mpz_t(), 2) >= 62)
            throw std::overflow_error("truncation order too large for the integer fast path");
        checked_padded_ = std::max(checked_padded_, padded);
        checked_factors_ = std::max(checked_factors_, factors);
    }

    int order_;
    long long two_power_;
    std::vector<std::vector<Integer>> acc_;
    std::vector<long long> prod_, next_;
    Integer scratch_;
    unsigned long long count_ = 0;
    long long checked_padded_ = -1, checked_factors_ = -1;
};

void run_tasks(unsigned ntasks, const std::function<void(unsigned)>& task) {
    const unsigned workers = std::min(worker_count(), std::max(1u, ntasks));
    if (workers <= 1 || ntasks <= 1) {
        for (unsigned i = 0; i < ntasks; ++i) task(i);
        return;
    }
    std::atomic<unsigned> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (unsigned i = next.fetch_add(1); i < ntasks; i = next.fetch_add(1)) task(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// enumeration of the supported regions
// ---------------------------------------------------------------------------

// All m in Z^d with positive-part sum and negative-part sum both <= N; this
// is exactly {m : ord(m) <= N} for the projective term, whose order is
// max(possum, negsum).
void enumerate_projective(int d, int N, long long first_coord_min, long long first_coord_max,
                          const std::function<void(const LatticePoint&, long long)>& leaf) {
    LatticePoint m(static_cast<size_t>(d), 0);
    auto rec = [&](auto&& self, int i, long long possum, long long negsum) -> void {
        if (i == d) {
            leaf(m, std::max(possum, negsum));
            return;
        }
        const long long lo = i == 0 ? std::max(-(static_cast<long long>(N) - negsum), first_coord_min)
                                    : -(static_cast<long long>(N) - negsum);
        const long long hi = i == 0 ? std::min(static_cast<long long>(N) - possum, first_coord_max)
                                    : static_cast<long long>(N) - possum;
        for (long long v = lo; v <= hi; ++v) {
            m[static_cast<size_t>(i)] = v;
            self(self, i + 1, possum + std::max<long long>(0, v), negsum + std::max<long long>(0, -v));
        }
        m[static_cast<size_t>(i)] = 0;
    };
    rec(rec, 0, 0, 0);
}

struct KleinschmidtGeometry {
    int d, s, r;
    std::vector<long long> a;

    explicit KleinschmidtGeometry(const KleinschmidtData& data)
        : d(data.d), s(data.s), r(data.r()), a(data.a) {}

    long long mw(const LatticePoint& m) const {
        __int128 acc = 0;
        for (int i = 0; i < r; ++i)
            acc += static_cast<__int128>(a[static_cast<size_t>(i)]) * m[static_cast<size_t>(i)];
        if (acc > LLONG_MAX / 8 || acc < LLONG_MIN / 8)
            throw std::overflow_error("twist pairing exceeds the supported range");
        return static_cast<long long>(acc);
    }

    // denominator exponents (u part then v part) and m.w
    void exponents(const LatticePoint& m, std::vector<long long>& exps, long long& w) const {
        exps.clear();
        long long usum = 0;
        for (int i = 0; i < r; ++i) {
            exps.push_back(m[static_cast<size_t>(i)]);
            usum += m[static_cast<size_t>(i)];
        }
        exps.push_back(-usum);
        long long vsum = 0;
        for (int j = 0; j < s - 1; ++j) {
            exps.push_back(m[static_cast<size_t>(r + j)]);
            vsum += m[static_cast<size_t>(r + j)];
        }
        w = mw(m);
        exps.push_back(w - vsum);
    }

    long long order(const LatticePoint& m) const {
        std::vector<long long> exps;
        long long w = 0;
        exponents(m, exps, w);
        long long ord = std::min<long long>(0, w);
        for (long long e : exps) ord += std::max<long long>(0, -e);
        return ord;
    }
};

// u coordinates with max(possum, negsum) <= N, i.e. the u-part penalty bound.
std::vector<LatticePoint> kleinschmidt_u_points(const KleinschmidtGeometry& g, int N) {
    std::vector<LatticePoint> result;
    LatticePoint u(static_cast<size_t>(g.r), 0);
    auto rec = [&](auto&& self, int i, long long possum, long long negsum) -> void {
        if (i == g.r) {
            result.push_back(u);
            return;
        }
        for (long long v = -(static_cast<long long>(N) - negsum);
             v <= static_cast<long long>(N) - possum; ++v) {
            u[static_cast<size_t>(i)] = v;
            self(self, i + 1, possum + std::max<long long>(0, v), negsum + std::max<long long>(0, -v));
        }
        u[static_cast<size_t>(i)] = 0;
    };
    rec(rec, 0, 0, 0);
    return result;
}

// For one u-part, walk the v coordinates with the penalty bound
// negV + max(0, SV - m.w) <= M and report points with exact order <= N.
void enumerate_kleinschmidt_v(const KleinschmidtGeometry& g, int N, const LatticePoint& upart,
                              const std::function<void(const LatticePoint&, long long)>& leaf) {
    long long possumU = 0, negsumU = 0;
    for (int i = 0; i < g.r; ++i) {
        possumU += std::max<long long>(0, upart[static_cast<size_t>(i)]);
        negsumU += std::max<long long>(0, -upart[static_cast<size_t>(i)]);
    }
    const long long ordU = std::max(possumU, negsumU);
    LatticePoint m(static_cast<size_t>(g.d), 0);
    std::copy(upart.begin(), upart.end(), m.begin());
    const long long w = g.mw(m);
    const long long budget = static_cast<long long>(N) - ordU + std::max<long long>(0, -w);
    if (budget < 0) return;
    const long long pos_cap = std::max<long long>(0, w) + budget;

    const int nv = g.s - 1;
    auto rec = [&](auto&& self, int j, long long posv, long long negv) -> void {
        if (j == nv) {
            const long long sv = posv - negv;
            const long long penalty = negv + std::max<long long>(0, sv - w);
            if (penalty > budget) return;
            const long long ord = ordU + penalty + std::min<long long>(0, w);
            if (ord <= N) leaf(m, ord);
            return;
        }
        for (long long v = -(budget - negv); v <= pos_cap - posv; ++v) {
            m[static_cast<size_t>(g.r + j)] = v;
            self(self, j + 1, posv + std::max<long long>(0, v), negv + std::max<long long>(0, -v));
        }
        m[static_cast<size_t>(g.r + j)] = 0;
    };
    rec(rec, 0, 0, 0);
}

bool projective_vanishes(int d) { return d % 2 != 0; }

bool kleinschmidt_vanishes(const KleinschmidtData& data) {
    return data.d % 2 != 0 || data.s % 2 == 0;
}

// ---------------------------------------------------------------------------
// per-family bucketed sums: bucket o holds the expansion sum of the terms of
// exact order o, before the eps factor
// ---------------------------------------------------------------------------

struct BucketSums {
    std::vector<TruncatedSeries> series;          // index = order bucket
    std::vector<unsigned long long> counts;       // points per bucket

    explicit BucketSums(int order)
        : series(static_cast<size_t>(order) + 1, TruncatedSeries(order)),
          counts(static_cast<size_t>(order) + 1, 0) {}

    unsigned long long total_count() const {
        return std::accumulate(counts.begin(), counts.end(), 0ull);
    }
};

BucketSums bucket_sums(const FamilySpec& family, int order);

BucketSums bucket_sums_projective(int d, int order) {
    BucketSums result(order);
    if (projective_vanishes(d)) return result;
    const unsigned ntasks = static_cast<unsigned>(2 * order + 1);
    std::vector<TermAccumulator> accs(
        ntasks, TermAccumulator(order, d, order + 1));
    std::vector<std::vector<unsigned long long>> counts(
        ntasks, std::vector<unsigned long long>(static_cast<size_t>(order) + 1, 0));
    run_tasks(ntasks, [&](unsigned t) {
        const long long first = static_cast<long long>(t) - order;
        std::vector<long long> exps;
        enumerate_projective(d, order, first, first, [&](const LatticePoint& m, long long ord) {
            exps.clear();
            long long sum = 0;
            for (long long v : m) {
                exps.push_back(v);
                sum += v;
            }
            exps.push_back(-sum);
            accs[t].add(exps, std::nullopt, ord, static_cast<int>(ord));
            ++counts[t][static_cast<size_t>(ord)];
        });
    });
    for (unsigned t = 0; t < ntasks; ++t) {
        for (int o = 0; o <= order; ++o) {
            result.series[static_cast<size_t>(o)] =
                result.series[static_cast<size_t>(o)] + accs[t].bucket_series(o);
            result.counts[static_cast<size_t>(o)] += counts[t][static_cast<size_t>(o)];
        }
    }
    return result;
}

BucketSums bucket_sums_kleinschmidt(const KleinschmidtData& data, int order) {
    BucketSums result(order);
    if (kleinschmidt_vanishes(data)) return result;
    const KleinschmidtGeometry g(data);
    const auto upoints = kleinschmidt_u_points(g, order);
    const unsigned ntasks = static_cast<unsigned>(upoints.size());
    std::vector<TermAccumulator> accs(ntasks, TermAccumulator(order, g.d, order + 1));
    std::vector<std::vector<unsigned long long>> counts(
        ntasks, std::vector<unsigned long long>(static_cast<size_t>(order) + 1, 0));
    run_tasks(ntasks, [&](unsigned t) {
        std::vector<long long> exps;
        enumerate_kleinschmidt_v(g, order, upoints[t], [&](const LatticePoint& m, long long ord) {
            long long w = 0;
            g.exponents(m, exps, w);
            accs[t].add(exps, w, ord, static_cast<int>(ord));
            ++counts[t][static_cast<size_t>(ord)];
        });
    });
    for (unsigned t = 0; t < ntasks; ++t) {
        for (int o = 0; o <= order; ++o) {
            result.series[static_cast<size_t>(o)] =
                result.series[static_cast<size_t>(o)] + accs[t].bucket_series(o);
            result.counts[static_cast<size_t>(o)] += counts[t][static_cast<size_t>(o)];
        }
    }
    return result;
}

BucketSums bucket_sums_product(const std::vector<FamilySpec>& factors, int order) {
    BucketSums acc = bucket_sums(factors.at(0), order);
    for (size_t f = 1; f < factors.size(); ++f) {
        const BucketSums next = bucket_sums(factors[f], order);
        BucketSums combined(order);
        for (int o1 = 0; o1 <= order; ++o1) {
            if (acc.counts[static_cast<size_t>(o1)] == 0 &&
                acc.series[static_cast<size_t>(o1)].is_zero())
                continue;
            for (int o2 = 0; o1 + o2 <= order; ++o2) {
                combined.series[static_cast<size_t>(o1 + o2)] =
                    combined.series[static_cast<size_t>(o1 + o2)] +
                    acc.series[static_cast<size_t>(o1)] * next.series[static_cast<size_t>(o2)];
                combined.counts[static_cast<size_t>(o1 + o2)] +=
                    acc.counts[static_cast<size_t>(o1)] * next.counts[static_cast<size_t>(o2)];
            }
        }
        acc = std::move(combined);
    }
    return acc;
}

BucketSums bucket_sums(const FamilySpec& family, int order) {
    switch (family.kind) {
        case FamilySpec::Kind::projective:
            return bucket_sums_projective(family.proj_dim, order);
        case FamilySpec::Kind::kleinschmidt:
            return bucket_sums_kleinschmidt(family.kdata, order);
        case FamilySpec::Kind::product:
            return bucket_sums_product(family.factors, order);
    }
    throw std::logic_error("unknown family kind");
}

TruncatedSeries apply_eps_and_check(const TruncatedSeries& raw, int dim,
                                    const std::string& label) {
    const TruncatedSeries eps_factor = pow(eps_powers(raw.order()).eps_inv_quarter, dim);
    TruncatedSeries series = raw * eps_factor;
    for (int j = 0; j <= series.order(); ++j)
        if (!is_integer(series.coeff(j)))
            throw IntegralityError("non-integer coefficient " + rational_to_string(series.coeff(j)) +
                                   " at q^" + std::to_string(j) + " in " + label);
    return series;
}

void enumerate_box(int d, long long radius, const std::function<void(const LatticePoint&)>& cb) {
    LatticePoint m(static_cast<size_t>(d), 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == d) {
            cb(m);
            return;
        }
        for (long long v = -radius; v <= radius; ++v) {
            m[static_cast<size_t>(i)] = v;
            self(self, i + 1);
        }
        m[static_cast<size_t>(i)] = 0;
    };
    rec(rec, 0);
}

void require_valid(const Fan& fan) {
    auto report = validate_fan(fan);
    if (!report.valid) throw FanError("invalid fan: " + report.first_failure());
}

}  // namespace

// ---------------------------------------------------------------------------
// FamilySpec
// ---------------------------------------------------------------------------

FamilySpec FamilySpec::projective(int d) {
    if (d < 1) throw std::invalid_argument("projective family needs d >= 1");
    FamilySpec f;
    f.kind = Kind::projective;
    f.proj_dim = d;
    return f;
}

FamilySpec FamilySpec::kleinschmidt(KleinschmidtData data) {
    data.validate();
    FamilySpec f;
    f.kind = Kind::kleinschmidt;
    f.kdata = std::move(data);
    return f;
}

FamilySpec FamilySpec::product(std::vector<FamilySpec> factors) {
    if (factors.size() < 2) throw std::invalid_argument("product family needs two factors");
    FamilySpec f;
    f.kind = Kind::product;
    f.factors = std::move(factors);
    return f;
}

int FamilySpec::dim() const {
    switch (kind) {
        case Kind::projective:
            return proj_dim;
        case Kind::kleinschmidt:
            return kdata.d;
        case Kind::product: {
            int total = 0;
            for (const auto& f : factors) total += f.dim();
            return total;
        }
    }
    throw std::logic_error("unknown family kind");
}

Fan FamilySpec::fan() const {
    switch (kind) {
        case Kind::projective:
            return projective_fan(proj_dim);
        case Kind::kleinschmidt:
            return kleinschmidt_fan(kdata);
        case Kind::product: {
            Fan result = factors.at(0).fan();
            for (size_t i = 1; i < factors.size(); ++i) result = product_fan(result, factors[i].fan());
            return result;
        }
    }
    throw std::logic_error("unknown family kind");
}

std::string FamilySpec::name() const {
    switch (kind) {
        case Kind::projective:
            return "projective:" + std::to_string(proj_dim);
        case Kind::kleinschmidt: {
            std::string s = "kleinschmidt:" + std::to_string(kdata.d) + ":" + std::to_string(kdata.s) + ":";
            for (size_t i = 0; i < kdata.a.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(kdata.a[i]);
            }
            return s;
        }
        case Kind::product: {
            std::string s = "product(";
            for (size_t i = 0; i < factors.size(); ++i) {
                if (i) s += " x ";
                s += factors[i].name();
            }
            return s + ")";
        }
    }
    throw std::logic_error("unknown family kind");
}

FamilySpec parse_family(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    try {
        if (parts.size() == 2 && parts[0] == "projective")
            return FamilySpec::projective(std::stoi(parts[1]));
        if (parts.size() == 4 && parts[0] == "kleinschmidt") {
            KleinschmidtData data;
            data.d = std::stoi(parts[1]);
            data.s = std::stoi(parts[2]);
            std::string item;
            for (char c : parts[3] + ",") {
                if (c == ',') {
                    if (!item.empty()) data.a.push_back(std::stoll(item));
                    item.clear();
                } else {
                    item.push_back(c);
                }
            }
            return FamilySpec::kleinschmidt(std::move(data));
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        throw std::invalid_argument("bad family spec '" + text + "': " + e.what());
    }
    throw std::invalid_argument("bad family spec '" + text +
                                "' (expected projective:<d> or kleinschmidt:<d>:<s>:<a1,...,ar>)");
}

// ---------------------------------------------------------------------------
// exact per-point terms
// ---------------------------------------------------------------------------

LaurentFraction cone_sum(const LatticePoint& m, const Fan& fan) {
    if (static_cast<int>(m.size()) != fan.dim())
        throw std::invalid_argument("lattice point dimension mismatch");
    std::vector<long long> exps;
    exps.reserve(fan.rays().size());
    for (const auto& ray : fan.rays()) exps.push_back(checked_dot(m, ray));

    std::vector<LaurentPolynomial> binomials;
    binomials.reserve(exps.size());
    for (long long e : exps) binomials.push_back(LaurentPolynomial::one_plus_qk(e));

    LaurentPolynomial den = LaurentPolynomial::one();
    for (const auto& b : binomials) den = den * b;

    const int d = fan.dim();
    LaurentPolynomial num;
    for (const auto& cone : fan.cones()) {
        LaurentPolynomial complement = LaurentPolynomial::one();
        size_t next = 0;
        for (int ray = 0; ray < static_cast<int>(binomials.size()); ++ray) {
            if (next < cone.ray_indices.size() && cone.ray_indices[next] == ray) {
                ++next;
                continue;
            }
            complement = complement * binomials[static_cast<size_t>(ray)];
        }
        if ((d - cone.dim()) % 2 == 0)
            num = num + complement;
        else
            num = num - complement;
    }
    return LaurentFraction(std::move(num), std::move(den));
}

LaurentFraction closed_term_projective(const LatticePoint& m, int d) {
    if (d < 1) throw std::invalid_argument("dimension must be positive");
    if (static_cast<int>(m.size()) != d) throw std::invalid_argument("lattice point dimension mismatch");
    if (projective_vanishes(d)) return LaurentFraction::zero();
    LaurentPolynomial den = LaurentPolynomial::one();
    long long sum = 0;
    for (long long v : m) {
        den = den * LaurentPolynomial::one_plus_qk(v);
        sum += v;
    }
    den = den * LaurentPolynomial::one_plus_qk(-sum);
    return LaurentFraction(LaurentPolynomial::monomial(0, 2), std::move(den));
}

LaurentFraction closed_term_kleinschmidt(const LatticePoint& m, const KleinschmidtData& data) {
    data.validate();
    if (static_cast<int>(m.size()) != data.d)
        throw std::invalid_argument("lattice point dimension mismatch");
    if (kleinschmidt_vanishes(data)) return LaurentFraction::zero();
    const KleinschmidtGeometry g(data);
    std::vector<long long> exps;
    long long w = 0;
    g.exponents(m, exps, w);
    LaurentPolynomial den = LaurentPolynomial::one();
    for (long long e : exps) den = den * LaurentPolynomial::one_plus_qk(e);
    LaurentPolynomial num = LaurentPolynomial::one_plus_qk(w);
    num = num + num;  // 2 (1 + q^w)
    return LaurentFraction(std::move(num), std::move(den));
}

long long term_order_projective(const LatticePoint& m, int d) {
    if (static_cast<int>(m.size()) != d) throw std::invalid_argument("lattice point dimension mismatch");
    long long possum = 0, negsum = 0;
    for (long long v : m) {
        possum += std::max<long long>(0, v);
        negsum += std::max<long long>(0, -v);
    }
    return std::max(possum, negsum);
}

long long term_order_kleinschmidt(const LatticePoint& m, const KleinschmidtData& data) {
    data.validate();
    if (static_cast<int>(m.size()) != data.d)
        throw std::invalid_argument("lattice point dimension mismatch");
    return KleinschmidtGeometry(data).order(m);
}

// ---------------------------------------------------------------------------
// regions
// ---------------------------------------------------------------------------

namespace {

void region_with_orders(const FamilySpec& family, int order,
                        std::vector<std::pair<LatticePoint, long long>>& out) {
    switch (family.kind) {
        case FamilySpec::Kind::projective:
            enumerate_projective(family.proj_dim, order, LLONG_MIN / 8, LLONG_MAX / 8,
                                 [&](const LatticePoint& m, long long ord) { out.emplace_back(m, ord); });
            return;
        case FamilySpec::Kind::kleinschmidt: {
            const KleinschmidtGeometry g(family.kdata);
            for (const auto& u : kleinschmidt_u_points(g, order))
                enumerate_kleinschmidt_v(g, order, u, [&](const LatticePoint& m, long long ord) {
                    out.emplace_back(m, ord);
                });
            return;
        }
        case FamilySpec::Kind::product: {
            std::vector<std::pair<LatticePoint, long long>> partial;
            partial.emplace_back(LatticePoint{}, 0);
            for (const auto& factor : family.factors) {
                std::vector<std::pair<LatticePoint, long long>> fac;
                region_with_orders(factor, order, fac);
                std::vector<std::pair<LatticePoint, long long>> next;
                for (const auto& [pm, pord] : partial)
                    for (const auto& [fm, ford] : fac) {
                        if (pord + ford > order) continue;
                        LatticePoint joined = pm;
                        joined.insert(joined.end(), fm.begin(), fm.end());
                        next.emplace_back(std::move(joined), pord + ford);
                    }
                partial = std::move(next);
            }
            out.insert(out.end(), partial.begin(), partial.end());
            return;
        }
    }
    throw std::logic_error("unknown family kind");
}

}  // namespace

std::vector<LatticePoint> enumeration_region(const FamilySpec& family, int order) {
    if (order < 0) throw std::invalid_argument("negative order");
    std::vector<std::pair<LatticePoint, long long>> pts;
    region_with_orders(family, order, pts);
    std::vector<LatticePoint> result;
    result.reserve(pts.size());
    for (auto& [m, ord] : pts) result.push_back(std::move(m));
    std::sort(result.begin(), result.end());
    return result;
}

// ---------------------------------------------------------------------------
// evaluators
// ---------------------------------------------------------------------------

LoopSignatureResult loop_signature(const FamilySpec& family, int order) {
    if (order < 0) throw std::invalid_argument("negative order");
    const BucketSums buckets = bucket_sums(family, order);
    TruncatedSeries raw(order);
    for (const auto& s : buckets.series) raw = raw + s;

    LoopSignatureResult result{
        apply_eps_and_check(raw, family.dim(), "loop signature of " + family.name()),
        family.name(),
        buckets.total_count(),
        Soundness::proved,
        true,
        ""};
    std::ostringstream diag;
    diag << "closed-form region, every term order verified; " << result.lattice_points_used
         << " lattice points";
    if (result.lattice_points_used == 0) diag << " (every term vanishes identically)";
    result.diagnostics = diag.str();
    return result;
}

LoopSignatureResult loop_signature(const Fan& fan, int order, long long box_radius) {
    if (order < 0) throw std::invalid_argument("negative order");
    if (box_radius < 0) throw std::invalid_argument("negative box radius");
    require_valid(fan);

    TruncatedSeries raw(order);
    unsigned long long used = 0;
    long long worst_margin = LLONG_MIN;
    bool shell_clean = true;
    enumerate_box(fan.dim(), box_radius, [&](const LatticePoint& m) {
        const LaurentFraction term = cone_sum(m, fan);
        ++used;
        const auto ord = term.order();
        if (ord && *ord <= order) raw = raw + term.expand(order);
        bool on_shell = false;
        for (long long v : m)
            if (v == box_radius || v == -box_radius) on_shell = true;
        if (on_shell && ord) {
            worst_margin = std::max(worst_margin, static_cast<long long>(order) - *ord);
            if (*ord <= order) shell_clean = false;
        }
    });

    LoopSignatureResult result{apply_eps_and_check(raw, fan.dim(), "generic loop signature"),
                               "generic",
                               used,
                               Soundness::best_effort,
                               shell_clean,
                               ""};
    std::ostringstream diag;
    diag << "box radius " << box_radius << "; boundary-shell margin ";
    if (worst_margin == LLONG_MIN)
        diag << "-inf (every shell term vanishes)";
    else
        diag << worst_margin;
    diag << (shell_clean ? "; clean" : "; NOT clean: some shell term reaches the order");
    result.diagnostics = diag.str();
    return result;
}

LoopSignatureResult loop_signature_over_points(const Fan& fan, int order,
                                               const std::vector<LatticePoint>& points,
                                               const std::string& family_label,
                                               Soundness soundness) {
    if (order < 0) throw std::invalid_argument("negative order");
    require_valid(fan);
    TruncatedSeries raw(order);
    for (const auto& m : points) {
        const LaurentFraction term = cone_sum(m, fan);
        const auto ord = term.order();
        if (ord && *ord <= order) raw = raw + term.expand(order);
    }
    LoopSignatureResult result{apply_eps_and_check(raw, fan.dim(), "loop signature of " + family_label),
                               family_label,
                               points.size(),
                               soundness,
                               true,
                               "caller-supplied region of " + std::to_string(points.size()) + " points"};
    return result;
}

std::vector<EquivariantTerm> equivariant_table(const Fan& fan, long long box_radius) {
    if (box_radius < 0) throw std::invalid_argument("negative box radius");
    require_valid(fan);
    std::vector<EquivariantTerm> table;
    enumerate_box(fan.dim(), box_radius, [&](const LatticePoint& m) {
        LaurentFraction term = cone_sum(m, fan);
        auto ord = term.order();
        table.push_back(EquivariantTerm{m, std::move(term), ord});
    });
    return table;
}

RigidityReport rigidity_check(const Fan& fan, long long box_radius) {
    if (box_radius < 0) throw std::invalid_argument("negative box radius");
    require_valid(fan);
    RigidityReport report;
    report.is_spin = spin_test(fan).has_value();
    report.all_nonzero_vanish = true;

    std::vector<LatticePoint> points;
    enumerate_box(fan.dim(), box_radius, [&](const LatticePoint& m) {
        bool zero = true;
        for (long long v : m) zero = zero && v == 0;
        if (!zero) points.push_back(m);
    });
    // scan small characters first, preferring the lexicographically largest
    // within a shell, so the reported witness is the natural one
    std::sort(points.begin(), points.end(), [](const LatticePoint& a, const LatticePoint& b) {
        auto norms = [](const LatticePoint& p) {
            long long sup = 0, l1 = 0;
            for (long long v : p) {
                sup = std::max(sup, std::llabs(v));
                l1 += std::llabs(v);
            }
            return std::make_pair(sup, l1);
        };
        auto na = norms(a), nb = norms(b);
        if (na != nb) return na < nb;
        return a > b;
    });
    for (const auto& m : points) {
        LaurentFraction term = cone_sum(m, fan);
        ++report.points_checked;
        if (!term.is_zero()) {
            report.all_nonzero_vanish = false;
            if (!report.witness_m) {
                report.witness_m = m;
                report.witness_term = std::move(term);
            }
        }
    }
    return report;
}

SpinConstancyReport spin_constancy_check(const Fan& fan, const TruncatedSeries& sign_series) {
    require_valid(fan);
    SpinConstancyReport report;
    report.applicable = spin_test(fan).has_value();
    if (!report.applicable) return report;

    const int d = fan.dim();
    const LatticePoint origin(static_cast<size_t>(d), 0);
    report.cone_sum_at_zero = cone_sum(origin, fan).as_constant();
    const long long sig = signature_from_fan(fan);
    const Integer two_d = Integer(1) << static_cast<unsigned long>(d);
    report.expected_constant = Rational(Integer(static_cast<long>(sig)), two_d);
    report.expected_constant.canonicalize();
    report.constant_ok = report.cone_sum_at_zero == report.expected_constant;

    const TruncatedSeries expected =
        report.expected_constant * pow(eps_powers(sign_series.order()).eps_inv_quarter, d);
    report.series_ok = sign_series == expected;
    return report;
}

PositivityReport positivity_report(const TruncatedSeries& series) {
    PositivityReport report;
    report.all_positive = true;
    report.even_at_positive_powers = true;
    for (int j = 0; j <= series.order(); ++j) {
        const Rational& c = series.coeff(j);
        if (c <= 0) {
            report.all_positive = false;
            if (!report.first_bad_index) {
                report.first_bad_index = j;
                report.detail = "coefficient " + rational_to_string(c) + " at q^" + std::to_string(j) +
                                " is not positive";
            }
        }
        if (j >= 1 && !is_even_integer(c)) {
            report.even_at_positive_powers = false;
            if (!report.first_bad_index) {
                report.first_bad_index = j;
                report.detail = "coefficient " + rational_to_string(c) + " at q^" + std::to_string(j) +
                                " is not an even integer";
            }
        }
    }
    return report;
}

TruncatedSeries implied_h0_character(int d, int order) {
    if (d < 1 || d % 2 != 0)
        throw std::invalid_argument("implied character needs even positive dimension");
    const TruncatedSeries sign = loop_signature(FamilySpec::projective(d), order).series;
    TruncatedSeries character =
        Rational(1, 2) * (sign + TruncatedSeries::constant(order, 1));
    for (int j = 0; j <= order; ++j)
        if (!is_integer(character.coeff(j)) || character.coeff(j) < 0)
            throw IntegralityError("implied character coefficient " +
                                   rational_to_string(character.coeff(j)) + " at q^" +
                                   std::to_string(j) + " is not a non-negative integer");
    return character;
}

// ---------------------------------------------------------------------------
// symbolic numerator collapse
// ---------------------------------------------------------------------------

namespace {

// alternating sum over proper sub-bitmasks: sum_{B proper subset of full}
// (-1)^{d - popcount(B)} prod_{i not in B} (1 + X_i), as a map from monomial
// bitmask to coefficient
std::map<unsigned, long long> expand_alternating(unsigned full, int d) {
    std::map<unsigned, long long> coeff;
    for (unsigned b = 0; b < full; ++b) {  // proper subsets only
        const int sign_exp = d - __builtin_popcount(b);
        const long long sign = (sign_exp % 2 == 0) ? 1 : -1;
        const unsigned cb = full & ~b;
        unsigned t = cb;
        while (true) {  // all submasks of cb, including 0
            coeff[t] += sign;
            if (t == 0) break;
            t = (t - 1) & cb;
        }
    }
    for (auto it = coeff.begin(); it != coeff.end();)
        it = it->second == 0 ? coeff.erase(it) : std::next(it);
    return coeff;
}

std::string mask_to_string(unsigned mask, int n) {
    std::string s;
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) s += "X" + std::to_string(i + 1);
    return s.empty() ? "1" : s;
}

}  // namespace

NumeratorIdentityReport numerator_identity_check(int d) {
    NumeratorIdentityReport report;
    if (d > 6) {
        report.pass = false;
        report.detail = "symbolic expansion limited to d <= 6";
        return report;
    }
    const int n = d + 1;
    const unsigned full = (1u << n) - 1;
    auto coeff = expand_alternating(full, d);
    std::map<unsigned, long long> expected;
    expected[0] = 1;
    expected[full] += (d % 2 == 0) ? 1 : -1;
    for (auto it = expected.begin(); it != expected.end();)
        it = it->second == 0 ? expected.erase(it) : std::next(it);
    if (coeff != expected) {
        report.pass = false;
        for (const auto& [mask, c] : coeff) {
            auto jt = expected.find(mask);
            if (jt == expected.end() || jt->second != c) {
                report.detail = "unexpected monomial " + mask_to_string(mask, n) + " with coefficient " +
                                std::to_string(c);
                break;
            }
        }
        if (report.detail.empty()) report.detail = "missing monomial";
    }
    return report;
}

NumeratorIdentityReport numerator_identity_check_two_factor(int r_plus_1_max, int s_max) {
    NumeratorIdentityReport report;
    for (int ru = 2; ru <= r_plus_1_max; ++ru)
        for (int s = 2; s <= s_max; ++s) {
            const int r = ru - 1;
            const int d = r + s - 1;
            const unsigned ufull = (1u << ru) - 1;
            const unsigned vfull = (1u << s) - 1;
            // expand sum over proper I, proper J of
            // (-1)^{d-|I|-|J|} prod_{U not in I}(1+U) prod_{V not in J}(1+V)
            std::map<unsigned, long long> coeff;
            for (unsigned bi = 0; bi < ufull; ++bi)
                for (unsigned bj = 0; bj < vfull; ++bj) {
                    const int sign_exp = d - __builtin_popcount(bi) - __builtin_popcount(bj);
                    const long long sign = (sign_exp % 2 == 0) ? 1 : -1;
                    const unsigned cu = ufull & ~bi;
                    const unsigned cv = vfull & ~bj;
                    unsigned tu = cu;
                    while (true) {
                        unsigned tv = cv;
                        while (true) {
                            coeff[tu | (tv << ru)] += sign;
                            if (tv == 0) break;
                            tv = (tv - 1) & cv;
                        }
                        if (tu == 0) break;
                        tu = (tu - 1) & cu;
                    }
                }
            for (auto it = coeff.begin(); it != coeff.end();)
                it = it->second == 0 ? coeff.erase(it) : std::next(it);
            // (1 + (-1)^r U_full)(1 + (-1)^{s-1} V_full)
            std::map<unsigned, long long> expected;
            const long long su = (r % 2 == 0) ? 1 : -1;
            const long long sv = ((s - 1) % 2 == 0) ? 1 : -1;
            expected[0] = 1;
            expected[ufull] += su;
            expected[vfull << ru] += sv;
            expected[ufull | (vfull << ru)] += su * sv;
            for (auto it = expected.begin(); it != expected.end();)
                it = it->second == 0 ? expected.erase(it) : std::next(it);
            if (coeff != expected) {
                report.pass = false;
                report.detail = "mismatch at (r+1,s)=(" + std::to_string(ru) + "," + std::to_string(s) + ")";
                return report;
            }
        }
    return report;
}

unsigned worker_count() {
    if (const char* env = std::getenv("LOOPSIG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 64));
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : std::min(hc, 8u);
}

}  // namespace loopsig
