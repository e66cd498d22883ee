#include "loopsig/json_io.hpp"

#include <fstream>

#include <json.hpp>

#include "loopsig/errors.hpp"

namespace loopsig {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json poly_to_json(const LaurentPolynomial& p) {
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : p.terms()) {
        ordered_json term = ordered_json::array();
        term.push_back(e);
        term.push_back(c.get_str());
        terms.push_back(std::move(term));
    }
    return terms;
}

}  // namespace

std::string fan_to_json(const Fan& fan) {
    ordered_json j;
    j["dim"] = fan.dim();
    ordered_json rays = ordered_json::array();
    for (const auto& r : fan.rays()) rays.push_back(r);
    j["rays"] = std::move(rays);
    ordered_json cones = ordered_json::array();
    for (const auto& c : fan.max_cones()) cones.push_back(c.ray_indices);
    j["max_cones"] = std::move(cones);
    return j.dump(2) + "\n";
}

Fan fan_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw FanError(std::string("bad fan JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("rays") || !j.contains("max_cones"))
        throw FanError("fan JSON needs dim, rays and max_cones");
    const int dim = j["dim"].get<int>();
    std::vector<RayVector> rays;
    for (const auto& r : j["rays"]) rays.push_back(r.get<RayVector>());
    std::vector<Cone> cones;
    for (const auto& c : j["max_cones"]) cones.push_back(Cone{c.get<std::vector<int>>()});
    return Fan(dim, std::move(rays), std::move(cones));
}

Fan load_fan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FanError("cannot open fan file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return fan_from_json(text);
}

std::string series_to_json(const TruncatedSeries& series) {
    ordered_json j = ordered_json::array();
    for (int i = 0; i <= series.order(); ++i) j.push_back(rational_to_string(series.coeff(i)));
    return j.dump();
}

TruncatedSeries series_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("bad series JSON: ") + e.what());
    }
    if (!j.is_array() || j.empty()) throw std::invalid_argument("series JSON must be a nonempty array");
    TruncatedSeries s(static_cast<int>(j.size()) - 1);
    for (size_t i = 0; i < j.size(); ++i)
        s.set_coeff(static_cast<int>(i), rational_from_string(j[i].get<std::string>()));
    return s;
}

std::string loop_signature_result_to_json(const LoopSignatureResult& result) {
    ordered_json j;
    j["family"] = result.family;
    j["order"] = result.series.order();
    ordered_json coeffs = ordered_json::array();
    for (int i = 0; i <= result.series.order(); ++i)
        coeffs.push_back(rational_to_string(result.series.coeff(i)));
    j["coefficients"] = std::move(coeffs);
    j["soundness"] = result.soundness == Soundness::proved ? "proved" : "best_effort";
    j["lattice_points_used"] = result.lattice_points_used;
    j["diagnostics"] = result.diagnostics;
    return j.dump(2) + "\n";
}

std::string equivariant_table_to_json(const std::vector<EquivariantTerm>& table) {
    ordered_json arr = ordered_json::array();
    for (const auto& t : table) {
        ordered_json j;
        j["m"] = t.m;
        j["zero"] = t.is_zero();
        if (t.order)
            j["order"] = *t.order;
        else
            j["order"] = "inf";
        j["num"] = poly_to_json(t.term.num());
        j["den"] = poly_to_json(t.term.den());
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

}  // namespace loopsig
