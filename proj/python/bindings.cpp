#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "loopsig/errors.hpp"
#include "loopsig/fan.hpp"
#include "loopsig/genus.hpp"
#include "loopsig/json_io.hpp"
#include "loopsig/signature.hpp"
#include "loopsig/verify.hpp"

namespace py = pybind11;
using namespace loopsig;

namespace {

py::list series_to_list(const TruncatedSeries& s) {
    py::list out;
    for (int i = 0; i <= s.order(); ++i) out.append(rational_to_string(s.coeff(i)));
    return out;
}

py::dict fraction_to_dict(const LaurentFraction& f) {
    auto poly = [](const LaurentPolynomial& p) {
        py::list terms;
        for (const auto& [e, c] : p.terms()) terms.append(py::make_tuple(e, c.get_str()));
        return terms;
    };
    py::dict d;
    d["zero"] = f.is_zero();
    d["num"] = poly(f.num());
    d["den"] = poly(f.den());
    return d;
}

py::dict result_to_dict(const LoopSignatureResult& r) {
    py::dict d;
    d["family"] = r.family;
    d["order"] = r.series.order();
    d["coefficients"] = series_to_list(r.series);
    d["soundness"] = r.soundness == Soundness::proved ? "proved" : "best_effort";
    d["lattice_points_used"] = r.lattice_points_used;
    d["shell_clean"] = r.shell_clean;
    d["diagnostics"] = r.diagnostics;
    return d;
}

FamilySpec family_from_string(const std::string& text) { return parse_family(text); }

}  // namespace

PYBIND11_MODULE(_loopsig, m) {
    m.doc() = "exact loop-space signature computations for complete regular toric fans";

    py::class_<Fan>(m, "Fan")
        .def(py::init([](int dim, std::vector<RayVector> rays, std::vector<std::vector<int>> cones) {
                 std::vector<Cone> max_cones;
                 for (auto& c : cones) max_cones.push_back(Cone{std::move(c)});
                 return Fan(dim, std::move(rays), std::move(max_cones));
             }),
             py::arg("dim"), py::arg("rays"), py::arg("max_cones"))
        .def_property_readonly("dim", &Fan::dim)
        .def_property_readonly("rays", [](const Fan& f) { return f.rays(); })
        .def_property_readonly("max_cones",
                               [](const Fan& f) {
                                   std::vector<std::vector<int>> out;
                                   for (const auto& c : f.max_cones()) out.push_back(c.ray_indices);
                                   return out;
                               })
        .def("to_json", [](const Fan& f) { return fan_to_json(f); })
        .def("__repr__", [](const Fan& f) {
            std::ostringstream os;
            os << "Fan(dim=" << f.dim() << ", rays=" << f.rays().size()
               << ", max_cones=" << f.max_cones().size() << ")";
            return os.str();
        });

    m.def("projective_fan", &projective_fan, py::arg("d"));
    m.def(
        "kleinschmidt_fan",
        [](int d, int s, std::vector<long long> a) {
            KleinschmidtData data;
            data.d = d;
            data.s = s;
            data.a = std::move(a);
            return kleinschmidt_fan(data);
        },
        py::arg("d"), py::arg("s"), py::arg("a"));
    m.def("product_fan", &product_fan, py::arg("f1"), py::arg("f2"));
    m.def("fan_from_json", &fan_from_json, py::arg("text"));

    m.def(
        "validate_fan",
        [](const Fan& fan) {
            const auto report = validate_fan(fan);
            py::dict d;
            d["valid"] = report.valid;
            py::list checks;
            for (const auto& c : report.checks) {
                py::dict check;
                check["name"] = c.name;
                check["pass"] = c.pass;
                check["detail"] = c.detail;
                checks.append(std::move(check));
            }
            d["checks"] = std::move(checks);
            return d;
        },
        py::arg("fan"));

    m.def("h_vector", &h_vector, py::arg("fan"));
    m.def("signature_from_fan", &signature_from_fan, py::arg("fan"));
    m.def(
        "spin_test",
        [](const Fan& fan) -> py::object {
            const auto witness = spin_test(fan);
            if (!witness) return py::none();
            return py::cast(*witness);
        },
        py::arg("fan"));

    m.def(
        "loop_signature",
        [](const std::string& family, int order) {
            return result_to_dict(loop_signature(family_from_string(family), order));
        },
        py::arg("family"), py::arg("order"),
        "closed-form evaluation for projective:<d> or kleinschmidt:<d>:<s>:<a,...>");
    m.def(
        "loop_signature_fan",
        [](const Fan& fan, int order, long long box_radius) {
            return result_to_dict(loop_signature(fan, order, box_radius));
        },
        py::arg("fan"), py::arg("order"), py::arg("box_radius"),
        "generic best-effort evaluation over an infinity-norm box");

    m.def(
        "loop_signature_oracle_projective",
        [](int d, int order) { return series_to_list(loop_signature_oracle_projective(d, order)); },
        py::arg("d"), py::arg("order"));

    m.def(
        "cone_sum",
        [](const Fan& fan, const LatticePoint& m) { return fraction_to_dict(cone_sum(m, fan)); },
        py::arg("fan"), py::arg("m"));

    m.def(
        "equivariant_table",
        [](const Fan& fan, long long box_radius) {
            py::list out;
            for (const auto& term : equivariant_table(fan, box_radius)) {
                py::dict d = fraction_to_dict(term.term);
                d["m"] = term.m;
                if (term.order)
                    d["order"] = *term.order;
                else
                    d["order"] = py::none();
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("fan"), py::arg("box_radius"));

    m.def(
        "enumeration_region",
        [](const std::string& family, int order) {
            return enumeration_region(family_from_string(family), order);
        },
        py::arg("family"), py::arg("order"));

    m.def(
        "eps_powers",
        [](int order) {
            const auto eps = eps_powers(order);
            py::dict d;
            d["eps"] = series_to_list(eps.eps);
            d["eps_quarter"] = series_to_list(eps.eps_quarter);
            d["eps_inv_quarter"] = series_to_list(eps.eps_inv_quarter);
            return d;
        },
        py::arg("order"));

    m.def(
        "elliptic_parameters_fit",
        [](int q_order, int x_order) {
            const auto fit = elliptic_parameters_fit(q_order, x_order);
            return py::make_tuple(series_to_list(fit.delta), series_to_list(fit.epsilon));
        },
        py::arg("q_order"), py::arg("x_order") = 8);

    m.def(
        "och_from_sign",
        [](const std::vector<std::string>& coeffs, int d) {
            TruncatedSeries s(static_cast<int>(coeffs.size()) - 1);
            for (size_t i = 0; i < coeffs.size(); ++i)
                s.set_coeff(static_cast<int>(i), rational_from_string(coeffs[i]));
            return series_to_list(och_from_sign(s, d));
        },
        py::arg("sign_series"), py::arg("d"));

    m.def(
        "implied_h0_character",
        [](int d, int order) { return series_to_list(implied_h0_character(d, order)); },
        py::arg("d"), py::arg("order"));

    m.def(
        "rigidity_check",
        [](const Fan& fan, long long box_radius) {
            const auto r = rigidity_check(fan, box_radius);
            py::dict d;
            d["is_spin"] = r.is_spin;
            d["all_nonzero_vanish"] = r.all_nonzero_vanish;
            d["points_checked"] = r.points_checked;
            d["passed"] = r.passed();
            if (r.witness_m) {
                d["witness_m"] = *r.witness_m;
                d["witness_term"] = fraction_to_dict(r.witness_term);
            } else {
                d["witness_m"] = py::none();
            }
            return d;
        },
        py::arg("fan"), py::arg("box_radius"));

    m.def(
        "verify",
        [](const std::string& suite) {
            py::list out;
            for (const auto& r : run_suite(suite, VerifyOptions{})) {
                py::dict d;
                d["name"] = r.name;
                d["pass"] = r.pass;
                d["detail"] = r.detail;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("suite"));

    py::register_exception<OrderMismatchError>(m, "OrderMismatchError", PyExc_ValueError);
    py::register_exception<FanError>(m, "FanError", PyExc_ValueError);
    py::register_exception<IntegralityError>(m, "IntegralityError", PyExc_ArithmeticError);
}
