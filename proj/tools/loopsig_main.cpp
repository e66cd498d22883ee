#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loopsig/errors.hpp"
#include "loopsig/genus.hpp"
#include "loopsig/json_io.hpp"
#include "loopsig/signature.hpp"
#include "loopsig/verify.hpp"

namespace {

using namespace loopsig;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

std::vector<long long> parse_int_list(const std::string& text) {
    std::vector<long long> values;
    std::string item;
    for (char c : text + ",") {
        if (c == ',') {
            if (!item.empty()) values.push_back(std::stoll(item));
            item.clear();
        } else {
            item.push_back(c);
        }
    }
    return values;
}

void print_series(std::ostream& os, const TruncatedSeries& series, const std::string& format,
                  const std::string& label) {
    if (format == "csv") {
        os << "exponent,coefficient\n";
        for (int j = 0; j <= series.order(); ++j)
            os << j << "," << rational_to_string(series.coeff(j)) << "\n";
    } else if (format == "json") {
        os << series_to_json(series) << "\n";
    } else {
        os << label << ":";
        for (int j = 0; j <= series.order(); ++j) os << " " << rational_to_string(series.coeff(j));
        os << "\n";
    }
}

int cmd_fan(const std::string& kind, const std::vector<std::string>& args) {
    if (kind == "projective") {
        if (args.size() != 1) throw CLI::ValidationError("fan projective needs <d>");
        std::cout << fan_to_json(projective_fan(std::stoi(args[0])));
        return kExitOk;
    }
    if (kind == "kleinschmidt") {
        if (args.size() != 3)
            throw CLI::ValidationError("fan kleinschmidt needs <d> <s> <a1,...,ar>");
        KleinschmidtData data;
        data.d = std::stoi(args[0]);
        data.s = std::stoi(args[1]);
        data.a = parse_int_list(args[2]);
        std::cout << fan_to_json(kleinschmidt_fan(data));
        return kExitOk;
    }
    if (kind == "product") {
        if (args.size() != 2) throw CLI::ValidationError("fan product needs <f1.json> <f2.json>");
        std::cout << fan_to_json(product_fan(load_fan_file(args[0]), load_fan_file(args[1])));
        return kExitOk;
    }
    if (kind == "validate") {
        if (args.size() != 1) throw CLI::ValidationError("fan validate needs <f.json>");
        const Fan fan = load_fan_file(args[0]);
        const auto report = validate_fan(fan);
        for (const auto& c : report.checks)
            std::cout << (c.pass ? "pass" : "FAIL") << "  " << c.name
                      << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
        std::cout << (report.valid ? "valid" : "invalid") << "\n";
        return report.valid ? kExitOk : kExitCheckFailed;
    }
    throw CLI::ValidationError("unknown fan subcommand '" + kind + "'");
}

int cmd_signature(const std::optional<std::string>& family_text,
                  const std::optional<std::string>& fan_file, int order,
                  std::optional<long long> box, bool equivariant, bool och,
                  const std::string& format) {
    LoopSignatureResult result{TruncatedSeries(order), "", 0, Soundness::proved, true, ""};
    std::optional<Fan> fan;
    if (family_text) {
        const FamilySpec family = parse_family(*family_text);
        result = loop_signature(family, order);
        if (equivariant || och) fan.emplace(family.fan());
    } else {
        fan.emplace(load_fan_file(*fan_file));
        if (!box) throw CLI::ValidationError("a fan file needs --box <radius> for the generic route");
        result = loop_signature(*fan, order, *box);
    }

    if (format == "json") {
        std::cout << loop_signature_result_to_json(result);
    } else {
        print_series(std::cout, result.series, format, "sign(q,LX)");
        if (format == "text") {
            std::cout << "family: " << result.family << "\n"
                      << "soundness: "
                      << (result.soundness == Soundness::proved ? "proved" : "best_effort") << "\n"
                      << "lattice points: " << result.lattice_points_used << "\n"
                      << "diagnostics: " << result.diagnostics << "\n";
        }
    }

    if (och) {
        const int d = fan ? fan->dim() : 0;
        if (d % 2 != 0)
            throw CLI::ValidationError("--och needs an even complex dimension");
        print_series(std::cout, och_from_sign(result.series, d), format == "json" ? "text" : format,
                     "och(q,X)");
    }

    if (equivariant) {
        const long long radius = box.value_or(order);
        const auto table = equivariant_table(*fan, radius);
        if (format == "json") {
            std::cout << equivariant_table_to_json(table);
        } else {
            for (const auto& term : table) {
                std::cout << "m=(";
                for (size_t i = 0; i < term.m.size(); ++i)
                    std::cout << (i ? "," : "") << term.m[i];
                std::cout << ") ";
                if (term.is_zero()) {
                    std::cout << "0\n";
                    continue;
                }
                auto poly = [](const LaurentPolynomial& p) {
                    std::string s;
                    for (const auto& [e, c] : p.terms()) {
                        if (!s.empty()) s += " + ";
                        s += c.get_str() + "*q^" + std::to_string(e);
                    }
                    return s;
                };
                std::cout << "(" << poly(term.term.num()) << ") / (" << poly(term.term.den())
                          << ")  order " << *term.order << "\n";
            }
        }
    }

    const bool ok = result.soundness == Soundness::proved;
    return ok ? kExitOk : kExitCheckFailed;
}

int cmd_verify(const std::string& suite_name, const VerifyOptions& options) {
    const Suite suite = run_suite(suite_name, options);
    for (const auto& r : suite)
        std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.name
                  << (r.detail.empty() ? "" : "  (" + r.detail + ")") << "\n";
    const bool ok = all_passed(suite);
    std::cout << (ok ? "all checks passed" : "CHECKS FAILED") << " (" << suite.size() << ")\n";
    return ok ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact loop-space signature computations for complete regular toric fans"};
    app.require_subcommand(1);

    // fan
    auto* fan_cmd = app.add_subcommand("fan", "generate or validate fan JSON");
    std::string fan_kind;
    std::vector<std::string> fan_args;
    fan_cmd->add_option("kind", fan_kind, "projective | kleinschmidt | product | validate")
        ->required();
    fan_cmd->add_option("args", fan_args, "arguments of the generator");

    // signature
    auto* sig_cmd = app.add_subcommand("signature", "compute sign(q, LX) as an exact q-series");
    std::optional<std::string> family_text;
    std::optional<std::string> fan_file;
    int order = 4;
    std::optional<long long> box;
    bool equivariant = false;
    bool och = false;
    std::string format = "text";
    sig_cmd->add_option("--family", family_text,
                        "projective:<d> or kleinschmidt:<d>:<s>:<a1,...,ar>");
    sig_cmd->add_option("--fan", fan_file, "fan JSON file (generic route, needs --box)");
    sig_cmd->add_option("--order", order, "truncation order N")->required();
    sig_cmd->add_option("--box", box, "infinity-norm box radius for the generic route");
    sig_cmd->add_flag("--equivariant", equivariant, "also print the exact character table");
    sig_cmd->add_flag("--och", och, "also print och(q, X) (even dimension only)");
    sig_cmd->add_option("--format", format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run a verification suite");
    std::string suite_name;
    VerifyOptions options;
    verify_cmd->add_option("suite", suite_name, "suite name or 'all'")->required();
    int opt_order = -1, opt_d = -1;
    long long opt_box = -1;
    verify_cmd->add_option("--order", opt_order, "truncation order override");
    verify_cmd->add_option("--d", opt_d, "dimension bound override");
    verify_cmd->add_option("--box", opt_box, "box radius override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (fan_cmd->parsed()) return cmd_fan(fan_kind, fan_args);
        if (sig_cmd->parsed()) {
            if (family_text.has_value() == fan_file.has_value())
                throw CLI::ValidationError("give exactly one of --family and --fan");
            if (order < 0) throw CLI::ValidationError("--order must be non-negative");
            if (box && *box < 0) throw CLI::ValidationError("--box must be non-negative");
            return cmd_signature(family_text, fan_file, order, box, equivariant, och, format);
        }
        if (verify_cmd->parsed()) {
            if (opt_order >= 0) options.order = opt_order;
            if (opt_d >= 0) options.d = opt_d;
            if (opt_box >= 0) options.box = opt_box;
            return cmd_verify(suite_name, options);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
