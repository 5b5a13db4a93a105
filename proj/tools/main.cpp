#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "multihom/report.hpp"

using namespace multihom;

namespace {

struct CommonOptions {
    std::string expression;
    std::string file;
    int order = 0;
    int jet_level = 0;
    int max_source_order = 0;
    std::uint64_t seed = 0;
    std::string format = "text";
    std::string factors;
    int trials = 10;
    int degree_bound = 0;
};

void add_input_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("expression", opt.expression,
                    "polynomial in x,y,z or x1..xN (grammar: + - * ^ and p/q constants)");
    cmd->add_option("--file", opt.file, "read the polynomial from a file instead");
    cmd->add_option("-N,--order", opt.order, "truncation order (default 2*deg f + 4, max 24)");
    cmd->add_option("-k,--jet-level", opt.jet_level, "jet level for the derivation algebra");
    cmd->add_option("--max-source-order", opt.max_source_order,
                    "abort bound for the stabilization sweep");
    cmd->add_option("--seed", opt.seed, "seed for the toral search and random changes");
    cmd->add_option("--format", opt.format, "output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
}

std::string read_input(const CommonOptions& opt) {
    if (!opt.file.empty()) {
        std::ifstream in(opt.file);
        if (!in) throw ConfigError("cannot open input file '" + opt.file + "'");
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return text;
    }
    if (opt.expression.empty()) throw ConfigError("no input polynomial given");
    return opt.expression;
}

AnalysisConfig make_config(const CommonOptions& opt, const Polynomial& f) {
    if (f.nvars() > kMaxVars) throw ConfigError("more than 6 variables");
    if (opt.order > kMaxOrder) throw ConfigError("truncation order above the hard cap 24");
    if (opt.order < 0 || opt.jet_level < 0 || opt.max_source_order < 0)
        throw ConfigError("negative configuration value");
    AnalysisConfig cfg;
    cfg.truncation_order = opt.order;
    cfg.jet_level = opt.jet_level;
    cfg.max_source_order = opt.max_source_order;
    cfg.seed = opt.seed;
    if (!opt.factors.empty()) {
        std::string item;
        std::istringstream ss(opt.factors);
        while (std::getline(ss, item, ';')) {
            if (item.empty()) continue;
            // factors live in the normalized coordinates and the same
            // variable set as the input
            cfg.factors.push_back(parse_polynomial(item).poly);
        }
    }
    return cfg;
}

// factors may mention fewer variables than f; re-parse against the full set
std::vector<Polynomial> align_factors(const std::vector<std::string>& variables,
                                      const std::string& factors_text) {
    std::vector<Polynomial> out;
    if (factors_text.empty()) return out;
    std::string pad;
    for (const auto& v : variables) pad += "*" + v;
    std::string item;
    std::istringstream ss(factors_text);
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        out.push_back(parse_polynomial(item + " + 0" + pad).poly);
    }
    return out;
}

int run_analyze(const CommonOptions& opt, bool torus_only) {
    std::string text = read_input(opt);
    ParsedPolynomial parsed = parse_polynomial(text);
    AnalysisConfig cfg = make_config(opt, parsed.poly);
    cfg.factors = align_factors(parsed.variables, opt.factors);
    AnalysisReport rep = analyze(parsed.poly, parsed.variables, cfg);
    rep.input = text;
    if (opt.format == "json") {
        nlohmann::ordered_json j = report_to_json(rep);
        if (torus_only) {
            nlohmann::ordered_json t;
            t["input"] = j["input"];
            t["nvars"] = j["nvars"];
            t["torus"] = j["torus"];
            t["quasihomogeneous"] = j["quasihomogeneous"];
            std::cout << t.dump(2) << "\n";
        } else {
            std::cout << j.dump(2) << "\n";
        }
    } else {
        if (torus_only) {
            std::ostringstream os;
            os << "torus rank s = " << rep.torus.rank << "\n";
            for (const auto& w : rep.torus.weights) {
                os << "  weight (";
                for (size_t j = 0; j < w.size(); ++j) os << (j ? "," : "") << w[j].get_str();
                os << ")\n";
            }
            os << "multidegrees: (";
            for (size_t i = 0; i < rep.torus.multidegrees.size(); ++i)
                os << (i ? "," : "") << rep.torus.multidegrees[i].get_str();
            os << ")\nlinear_change: " << rep.torus.p.to_string() << "\n";
            std::cout << os.str();
        } else {
            std::cout << report_to_text(rep);
        }
    }
    return 0;
}

int run_normalize(const CommonOptions& opt) {
    std::string text = read_input(opt);
    ParsedPolynomial parsed = parse_polynomial(text);
    AnalysisConfig cfg = make_config(opt, parsed.poly);
    AnalysisReport rep = analyze(parsed.poly, parsed.variables, cfg);
    if (!rep.presentation) {
        std::cout << "rank 0: no multihomogeneous structure, equation unchanged\n";
        return 0;
    }
    const auto& eq = *rep.presentation;
    if (opt.format == "json") {
        nlohmann::ordered_json j;
        j["input"] = text;
        j["normalized_equation"] = eq.normalized.poly().to_string(parsed.variables);
        j["unit"] = eq.unit.poly().to_string(parsed.variables);
        nlohmann::ordered_json comp = nlohmann::ordered_json::array();
        for (const auto& c : eq.change.components())
            comp.push_back(c.poly().to_string(parsed.variables));
        j["change"] = comp;
        nlohmann::ordered_json lc = nlohmann::ordered_json::array();
        for (int i = 0; i < rep.torus.p.rows(); ++i) {
            nlohmann::ordered_json row = nlohmann::ordered_json::array();
            for (int k = 0; k < rep.torus.p.cols(); ++k) row.push_back(rep.torus.p(i, k).get_str());
            lc.push_back(row);
        }
        j["linear_change"] = lc;
        nlohmann::ordered_json lam = nlohmann::ordered_json::array();
        for (const auto& l : eq.multidegrees) lam.push_back(to_long(l));
        j["multidegrees"] = lam;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "normalized_equation: " << eq.normalized.poly().to_string(parsed.variables)
                  << "\n";
        std::cout << "unit: " << eq.unit.poly().to_string(parsed.variables) << "\n";
        std::cout << "change:\n";
        for (size_t i = 0; i < eq.change.components().size(); ++i)
            std::cout << "  " << parsed.variables[i] << " -> "
                      << eq.change.component(static_cast<int>(i)).poly().to_string(parsed.variables)
                      << "\n";
        std::cout << "linear_change: " << rep.torus.p.to_string() << "\n";
        std::cout << "multidegrees: (";
        for (size_t i = 0; i < eq.multidegrees.size(); ++i)
            std::cout << (i ? "," : "") << eq.multidegrees[i].get_str();
        std::cout << ")\n";
    }
    return 0;
}

int run_logder(const CommonOptions& opt) {
    std::string text = read_input(opt);
    ParsedPolynomial parsed = parse_polynomial(text);
    AnalysisConfig cfg = make_config(opt, parsed.poly);
    JetLieAlgebra l = stabilized_log_derivations(parsed.poly, cfg.jet_level,
                                                 {cfg.m_max_for(parsed.poly)});
    if (opt.format == "json") {
        nlohmann::ordered_json j;
        j["input"] = text;
        j["jet_level"] = l.level;
        j["stabilization_witness"] = l.witness;
        j["dimension"] = l.dim();
        nlohmann::ordered_json basis = nlohmann::ordered_json::array();
        for (size_t i = 0; i < l.basis.size(); ++i) {
            nlohmann::ordered_json e;
            e["field"] = l.basis[i].to_string(parsed.variables);
            e["cofactor"] = l.cofactors[i].to_string(parsed.variables);
            basis.push_back(e);
        }
        j["basis"] = basis;
        nlohmann::ordered_json dims = nlohmann::ordered_json::array();
        for (const auto& [m, d] : l.dims_by_m) {
            nlohmann::ordered_json e;
            e["m"] = m;
            e["dim"] = d;
            dims.push_back(e);
        }
        j["dims_by_source_order"] = dims;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "jet_level: " << l.level << "\n";
        std::cout << "stabilization_witness: " << l.witness << "\n";
        std::cout << "dimension: " << l.dim() << "\n";
        for (size_t i = 0; i < l.basis.size(); ++i)
            std::cout << "  " << l.basis[i].to_string(parsed.variables)
                      << "   cofactor: " << l.cofactors[i].to_string(parsed.variables) << "\n";
    }
    return 0;
}

int run_saito(const CommonOptions& opt) {
    std::string text = read_input(opt);
    ParsedPolynomial parsed = parse_polynomial(text);
    (void)make_config(opt, parsed.poly);
    SaitoResult res = saito_test(parsed.poly, opt.degree_bound);
    if (opt.format == "json") {
        nlohmann::ordered_json j;
        j["input"] = text;
        j["evidence"] = res.evidence;
        j["decided_at_degree"] = res.decided_at;
        if (res.colength >= 0) j["jacobian_colength"] = res.colength;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "saito_test: " << res.evidence << " (decided at degree " << res.decided_at
                  << ")\n";
        if (res.colength >= 0) std::cout << "jacobian_colength: " << res.colength << "\n";
    }
    return 0;
}

int run_invariance(const CommonOptions& opt) {
    std::string text = read_input(opt);
    ParsedPolynomial parsed = parse_polynomial(text);
    AnalysisConfig cfg = make_config(opt, parsed.poly);
    InvarianceReport rep = invariance_suite(parsed.poly, parsed.variables, cfg, opt.trials);
    if (opt.format == "json") {
        std::cout << invariance_to_json(rep).dump(2) << "\n";
    } else {
        std::cout << "trials: " << rep.trials << "\n";
        std::cout << "failures: " << rep.failures << "\n";
        std::cout << "base rank: " << rep.base_rank << "\n";
        for (const auto& r : rep.results)
            std::cout << "  trial " << r.trial << ": " << (r.agreed ? "agree" : "DISAGREE")
                      << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
    }
    return rep.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"maximal multihomogeneous structure of hypersurface singularities"};
    app.require_subcommand(1);

    CommonOptions opt;
    CLI::App* analyze_cmd = app.add_subcommand("analyze", "full analysis report");
    add_input_options(analyze_cmd, opt);
    analyze_cmd->add_option("--factors", opt.factors,
                            "semicolon-separated factors of the normalized equation");
    CLI::App* torus_cmd = app.add_subcommand("torus", "torus data only");
    add_input_options(torus_cmd, opt);
    CLI::App* normalize_cmd = app.add_subcommand("normalize", "equivariant normal form");
    add_input_options(normalize_cmd, opt);
    CLI::App* logder_cmd = app.add_subcommand("logder", "stabilized logarithmic derivations");
    add_input_options(logder_cmd, opt);
    CLI::App* saito_cmd = app.add_subcommand("saito", "Jacobian-ideal membership evidence");
    add_input_options(saito_cmd, opt);
    saito_cmd->add_option("--degree-bound", opt.degree_bound, "degree bound for the test");
    CLI::App* inv_cmd = app.add_subcommand("invariance", "invariance under random changes");
    add_input_options(inv_cmd, opt);
    inv_cmd->add_option("--trials", opt.trials, "number of random coordinate changes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(analyze_cmd)) return run_analyze(opt, false);
        if (app.got_subcommand(torus_cmd)) return run_analyze(opt, true);
        if (app.got_subcommand(normalize_cmd)) return run_normalize(opt);
        if (app.got_subcommand(logder_cmd)) return run_logder(opt);
        if (app.got_subcommand(saito_cmd)) return run_saito(opt);
        if (app.got_subcommand(inv_cmd)) return run_invariance(opt);
    } catch (const ObstructionError& e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        if (!e.dump.empty()) std::cerr << "diagnostic dump:\n" << e.dump << "\n";
        return 1;
    } catch (const StabilizationError& e) {
        std::cerr << "internal: " << e.what() << "\n";
        return 1;
    } catch (const RefusalError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidGermError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 2;
    } catch (const UnsupportedSpectrumError& e) {
        std::cerr << "refused (unsupported spectrum): " << e.what() << "\n";
        return 2;
    } catch (const FactorizationError& e) {
        std::cerr << "refused (factors): " << e.what() << "\n";
        return 2;
    } catch (const NonEquivariantFactorError& e) {
        std::cerr << "refused (factors): " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
