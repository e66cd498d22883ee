#include "loopsig/fan.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "loopsig/errors.hpp"

namespace loopsig {

namespace {

std::string cone_to_string(const Cone& c) {
    std::ostringstream os;
    os << "{";
    for (size_t i = 0; i < c.ray_indices.size(); ++i) {
        if (i) os << ",";
        os << c.ray_indices[i];
    }
    os << "}";
    return os.str();
}

std::string ray_to_string(const RayVector& r) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < r.size(); ++i) {
        if (i) os << ",";
        os << r[i];
    }
    os << ")";
    return os.str();
}

bool cone_less(const Cone& a, const Cone& b) {
    if (a.ray_indices.size() != b.ray_indices.size())
        return a.ray_indices.size() < b.ray_indices.size();
    return a.ray_indices < b.ray_indices;
}

// Fraction-free Gaussian elimination; exact integer determinant.
Integer determinant(std::vector<std::vector<Integer>> m) {
    const size_t n = m.size();
    if (n == 0) return 1;
    int sign = 1;
    Integer prev = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            size_t pivot = k + 1;
            while (pivot < n && m[pivot][k] == 0) ++pivot;
            if (pivot == n) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

}  // namespace

Fan::Fan(int dim, std::vector<RayVector> rays, std::vector<Cone> max_cones)
    : dim_(dim), rays_(std::move(rays)) {
    if (dim_ < 0) throw FanError("negative fan dimension");
    for (const auto& r : rays_)
        if (static_cast<int>(r.size()) != dim_)
            throw FanError("ray " + ray_to_string(r) + " has wrong length");

    std::set<std::vector<int>> closure;
    for (auto& c : max_cones) {
        std::sort(c.ray_indices.begin(), c.ray_indices.end());
        for (size_t i = 0; i < c.ray_indices.size(); ++i) {
            int idx = c.ray_indices[i];
            if (idx < 0 || idx >= static_cast<int>(rays_.size()))
                throw FanError("cone " + cone_to_string(c) + " has a ray index out of range");
            if (i > 0 && c.ray_indices[i] == c.ray_indices[i - 1])
                throw FanError("cone " + cone_to_string(c) + " repeats a ray index");
        }
        if (c.ray_indices.size() > 24)
            throw FanError("cone with more than 24 rays; face closure refused");
        const unsigned n = static_cast<unsigned>(c.ray_indices.size());
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<int> face;
            for (unsigned b = 0; b < n; ++b)
                if (mask & (1u << b)) face.push_back(c.ray_indices[b]);
            closure.insert(std::move(face));
        }
        if (std::find(max_cones_.begin(), max_cones_.end(), c) == max_cones_.end())
            max_cones_.push_back(c);
    }
    if (max_cones_.empty()) closure.insert({});  // ensure the empty cone exists
    for (auto& ids : closure) cones_.push_back(Cone{ids});
    std::sort(cones_.begin(), cones_.end(), cone_less);
    std::sort(max_cones_.begin(), max_cones_.end(), cone_less);
}

std::string FanValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.pass) return c.name + ": " + c.detail;
    return "";
}

FanValidationReport validate_fan(const Fan& fan) {
    FanValidationReport report;
    auto add = [&](const std::string& name, bool pass, const std::string& detail) {
        report.checks.push_back({name, pass, detail});
        if (!pass) report.valid = false;
    };

    // primitivity (and nonzero rays)
    {
        bool ok = true;
        std::string detail;
        for (const auto& r : fan.rays()) {
            Integer g = 0;
            for (long long e : r) {
                Integer v(static_cast<long>(e));
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            }
            if (g != 1) {
                ok = false;
                detail = "ray " + ray_to_string(r) + " has content " + g.get_str();
                break;
            }
        }
        add("primitivity", ok, detail);
    }

    // distinct rays
    {
        auto sorted = fan.rays();
        std::sort(sorted.begin(), sorted.end());
        bool ok = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
        add("distinct rays", ok, ok ? "" : "duplicate ray generator");
    }

    // face closure, empty cone, rays as 1-cones
    {
        std::set<std::vector<int>> present;
        for (const auto& c : fan.cones()) present.insert(c.ray_indices);
        bool ok = present.count({}) > 0;
        std::string detail = ok ? "" : "empty cone missing";
        for (const auto& c : fan.cones()) {
            if (!ok) break;
            for (size_t skip = 0; skip < c.ray_indices.size(); ++skip) {
                std::vector<int> face;
                for (size_t i = 0; i < c.ray_indices.size(); ++i)
                    if (i != skip) face.push_back(c.ray_indices[i]);
                if (!present.count(face)) {
                    ok = false;
                    detail = "cone " + cone_to_string(c) + " has a missing face";
                    break;
                }
            }
        }
        for (int i = 0; ok && i < static_cast<int>(fan.rays().size()); ++i)
            if (!present.count({i})) {
                ok = false;
                detail = "ray " + std::to_string(i) + " is not a cone of the fan";
            }
        add("face closure", ok, detail);
    }

    // regularity: every maximal cone has d rays with determinant +-1
    {
        bool ok = true;
        std::string detail;
        for (const auto& c : fan.max_cones()) {
            if (c.dim() != fan.dim()) continue;  // reported by completeness
            std::vector<std::vector<Integer>> m;
            for (int idx : c.ray_indices) {
                std::vector<Integer> row;
                for (long long e : fan.rays()[static_cast<size_t>(idx)]) row.emplace_back(static_cast<long>(e));
                m.push_back(std::move(row));
            }
            Integer det = determinant(std::move(m));
            if (det != 1 && det != -1) {
                ok = false;
                detail = "cone " + cone_to_string(c) + " has determinant " + det.get_str();
                break;
            }
        }
        add("regularity", ok, detail);
    }

    // completeness: nonempty, maximal cones of full dimension, and every
    // facet shared by exactly two maximal cones
    {
        bool ok = !fan.max_cones().empty();
        std::string detail = ok ? "" : "fan has no maximal cone";
        for (const auto& c : fan.max_cones()) {
            if (!ok) break;
            if (c.dim() != fan.dim()) {
                ok = false;
                detail = "maximal cone " + cone_to_string(c) + " has dimension " +
                         std::to_string(c.dim());
            }
        }
        if (ok && fan.dim() >= 1) {
            std::map<std::vector<int>, int> facet_count;
            for (const auto& c : fan.max_cones())
                for (size_t skip = 0; skip < c.ray_indices.size(); ++skip) {
                    std::vector<int> facet;
                    for (size_t i = 0; i < c.ray_indices.size(); ++i)
                        if (i != skip) facet.push_back(c.ray_indices[i]);
                    ++facet_count[facet];
                }
            for (const auto& [facet, count] : facet_count)
                if (count != 2) {
                    ok = false;
                    detail = "facet " + cone_to_string(Cone{facet}) + " lies in " +
                             std::to_string(count) + " maximal cones";
                    break;
                }
        }
        add("completeness", ok, detail);
    }

    return report;
}

Fan projective_fan(int d) {
    if (d < 1) throw std::invalid_argument("projective_fan requires d >= 1");
    std::vector<RayVector> rays;
    for (int i = 0; i < d; ++i) {
        RayVector e(static_cast<size_t>(d), 0);
        e[static_cast<size_t>(i)] = 1;
        rays.push_back(std::move(e));
    }
    rays.emplace_back(static_cast<size_t>(d), -1);
    std::vector<Cone> max_cones;
    for (int skip = 0; skip <= d; ++skip) {
        Cone c;
        for (int i = 0; i <= d; ++i)
            if (i != skip) c.ray_indices.push_back(i);
        max_cones.push_back(std::move(c));
    }
    return Fan(d, std::move(rays), std::move(max_cones));
}

void KleinschmidtData::validate() const {
    if (d <= 1) throw std::invalid_argument("Kleinschmidt data requires d > 1");
    if (!(1 < s && s < d + 1)) throw std::invalid_argument("Kleinschmidt data requires 1 < s < d+1");
    if (static_cast<int>(a.size()) != r())
        throw std::invalid_argument("Kleinschmidt data requires r = d-s+1 twist entries");
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0) throw std::invalid_argument("Kleinschmidt twists must be non-negative");
        if (i > 0 && a[i] < a[i - 1])
            throw std::invalid_argument("Kleinschmidt twists must be non-decreasing");
    }
}

Fan kleinschmidt_fan(const KleinschmidtData& data) {
    data.validate();
    const int d = data.d, s = data.s, r = data.r();
    std::vector<RayVector> rays;
    // u_1..u_r = e_1..e_r, u_{r+1} = -(u_1+...+u_r)
    for (int i = 0; i < r; ++i) {
        RayVector e(static_cast<size_t>(d), 0);
        e[static_cast<size_t>(i)] = 1;
        rays.push_back(std::move(e));
    }
    {
        RayVector u(static_cast<size_t>(d), 0);
        for (int i = 0; i < r; ++i) u[static_cast<size_t>(i)] = -1;
        rays.push_back(std::move(u));
    }
    // v_1..v_{s-1} = e_{r+1}..e_{d}, v_s = sum a_i e_i - (v_1+...+v_{s-1})
    for (int j = 0; j < s - 1; ++j) {
        RayVector e(static_cast<size_t>(d), 0);
        e[static_cast<size_t>(r + j)] = 1;
        rays.push_back(std::move(e));
    }
    {
        RayVector v(static_cast<size_t>(d), 0);
        for (int i = 0; i < r; ++i) v[static_cast<size_t>(i)] = data.a[static_cast<size_t>(i)];
        for (int j = 0; j < s - 1; ++j) v[static_cast<size_t>(r + j)] = -1;
        rays.push_back(std::move(v));
    }
    // maximal cones: drop one u (index in 0..r) and one v (index in r+1..r+s)
    std::vector<Cone> max_cones;
    for (int i = 0; i <= r; ++i)
        for (int j = 0; j < s; ++j) {
            Cone c;
            for (int k = 0; k < r + 1 + s; ++k)
                if (k != i && k != r + 1 + j) c.ray_indices.push_back(k);
            max_cones.push_back(std::move(c));
        }
    return Fan(d, std::move(rays), std::move(max_cones));
}

Fan product_fan(const Fan& f1, const Fan& f2) {
    for (const Fan* f : {&f1, &f2}) {
        auto report = validate_fan(*f);
        if (!report.valid) throw FanError("invalid product factor: " + report.first_failure());
    }
    const int d1 = f1.dim(), d2 = f2.dim();
    std::vector<RayVector> rays;
    for (const auto& r : f1.rays()) {
        RayVector v = r;
        v.resize(static_cast<size_t>(d1 + d2), 0);
        rays.push_back(std::move(v));
    }
    for (const auto& r : f2.rays()) {
        RayVector v(static_cast<size_t>(d1), 0);
        v.insert(v.end(), r.begin(), r.end());
        rays.push_back(std::move(v));
    }
    const int offset = static_cast<int>(f1.rays().size());
    std::vector<Cone> max_cones;
    for (const auto& c1 : f1.max_cones())
        for (const auto& c2 : f2.max_cones()) {
            Cone c = c1;
            for (int idx : c2.ray_indices) c.ray_indices.push_back(idx + offset);
            max_cones.push_back(std::move(c));
        }
    return Fan(d1 + d2, std::move(rays), std::move(max_cones));
}

std::vector<long long> h_vector(const Fan& fan) {
    const int d = fan.dim();
    std::vector<long long> count(static_cast<size_t>(d) + 1, 0);
    for (const auto& c : fan.cones()) ++count[static_cast<size_t>(c.dim())];
    // sum_k count[k] * (t-1)^(d-k)
    std::vector<long long> h(static_cast<size_t>(d) + 1, 0);
    for (int k = 0; k <= d; ++k) {
        const int e = d - k;
        long long binom = 1;
        for (int j = 0; j <= e; ++j) {
            // coefficient of t^j in (t-1)^e is C(e,j) * (-1)^(e-j)
            long long term = binom * (((e - j) % 2 == 0) ? 1 : -1);
            h[static_cast<size_t>(j)] += count[static_cast<size_t>(k)] * term;
            binom = binom * (e - j) / (j + 1);
        }
    }
    return h;
}

long long signature_from_fan(const Fan& fan) {
    auto h = h_vector(fan);
    long long sig = 0;
    for (size_t p = 0; p < h.size(); ++p) sig += (p % 2 == 0) ? h[p] : -h[p];
    return sig;
}

std::optional<std::vector<long long>> spin_test(const Fan& fan) {
    const int d = fan.dim();
    const int nrows = static_cast<int>(fan.rays().size());
    // rows: ray mod 2, augmented with 1; solve ray . m = 1 over F_2
    std::vector<std::vector<uint8_t>> m(static_cast<size_t>(nrows),
                                        std::vector<uint8_t>(static_cast<size_t>(d) + 1, 0));
    for (int i = 0; i < nrows; ++i) {
        for (int j = 0; j < d; ++j)
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                static_cast<uint8_t>(((fan.rays()[static_cast<size_t>(i)][static_cast<size_t>(j)] % 2) + 2) % 2);
        m[static_cast<size_t>(i)][static_cast<size_t>(d)] = 1;
    }
    std::vector<int> pivot_col(static_cast<size_t>(nrows), -1);
    int rank = 0;
    for (int col = 0; col < d && rank < nrows; ++col) {
        int pivot = -1;
        for (int i = rank; i < nrows; ++i)
            if (m[static_cast<size_t>(i)][static_cast<size_t>(col)]) {
                pivot = i;
                break;
            }
        if (pivot < 0) continue;
        std::swap(m[static_cast<size_t>(rank)], m[static_cast<size_t>(pivot)]);
        for (int i = 0; i < nrows; ++i)
            if (i != rank && m[static_cast<size_t>(i)][static_cast<size_t>(col)])
                for (int j = col; j <= d; ++j)
                    m[static_cast<size_t>(i)][static_cast<size_t>(j)] ^=
                        m[static_cast<size_t>(rank)][static_cast<size_t>(j)];
        pivot_col[static_cast<size_t>(rank)] = col;
        ++rank;
    }
    for (int i = rank; i < nrows; ++i)
        if (m[static_cast<size_t>(i)][static_cast<size_t>(d)]) return std::nullopt;
    std::vector<long long> witness(static_cast<size_t>(d), 0);
    for (int i = 0; i < rank; ++i)
        witness[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] =
            m[static_cast<size_t>(i)][static_cast<size_t>(d)];
    return witness;
}

bool fans_equal_up_to_ray_order(const Fan& a, const Fan& b) {
    if (a.dim() != b.dim() || a.rays().size() != b.rays().size() ||
        a.max_cones().size() != b.max_cones().size())
        return false;
    auto canonical = [](const Fan& f) {
        std::vector<int> perm(f.rays().size());
        std::iota(perm.begin(), perm.end(), 0);
        std::sort(perm.begin(), perm.end(), [&](int i, int j) {
            return f.rays()[static_cast<size_t>(i)] < f.rays()[static_cast<size_t>(j)];
        });
        std::vector<int> inverse(perm.size());
        for (size_t i = 0; i < perm.size(); ++i) inverse[static_cast<size_t>(perm[i])] = static_cast<int>(i);
        std::vector<RayVector> rays;
        for (int i : perm) rays.push_back(f.rays()[static_cast<size_t>(i)]);
        std::vector<Cone> cones;
        for (const auto& c : f.max_cones()) {
            Cone mapped;
            for (int idx : c.ray_indices) mapped.ray_indices.push_back(inverse[static_cast<size_t>(idx)]);
            std::sort(mapped.ray_indices.begin(), mapped.ray_indices.end());
            cones.push_back(std::move(mapped));
        }
        std::sort(cones.begin(), cones.end(), cone_less);
        return std::make_pair(rays, cones);
    };
    return canonical(a) == canonical(b);
}

}  // namespace loopsig
