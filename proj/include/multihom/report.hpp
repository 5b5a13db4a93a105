#pragma once

#include <string>

#include <json.hpp>

#include "multihom/pipeline.hpp"

namespace multihom {

// Stable JSON schema; field order fixed so identical runs emit identical
// bytes. Integers are emitted as JSON numbers (they stay far below 2^53
// for these problem sizes), rationals as "p/q" strings.

namespace detail {

inline nlohmann::ordered_json json_ivec(const IVec& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& x : v) a.push_back(to_long(x));
    return a;
}

inline nlohmann::ordered_json json_imat(const IMat& m) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& r : m) a.push_back(json_ivec(r));
    return a;
}

inline nlohmann::ordered_json json_qmatrix(const QMatrix& m) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (int i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j).get_str());
        a.push_back(row);
    }
    return a;
}

inline nlohmann::ordered_json json_izvec(const std::vector<Integer>& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& x : v) a.push_back(to_long(x));
    return a;
}

}  // namespace detail

inline nlohmann::ordered_json report_to_json(const AnalysisReport& rep) {
    nlohmann::ordered_json j;
    j["input"] = rep.input;
    j["nvars"] = rep.nvars;
    j["variables"] = rep.variables;
    j["rossi_guard"] = rep.rossi_pass ? "pass" : "fail";

    nlohmann::ordered_json torus;
    torus["rank"] = rep.torus.rank;
    torus["weights"] = detail::json_imat(rep.torus.weights);
    torus["multidegrees"] = detail::json_izvec(rep.torus.multidegrees);
    torus["linear_change"] = detail::json_qmatrix(rep.torus.p);
    j["torus"] = torus;

    j["normalized_equation"] = rep.normalized.poly().to_string(rep.variables);
    j["stabilization_witness"] = rep.stabilization_witness;

    nlohmann::ordered_json diag;
    diag["dim_g0"] = rep.diagnostics.dim_g0;
    diag["estimated_r"] = rep.diagnostics.estimated_r;
    nlohmann::ordered_json wt = nlohmann::ordered_json::array();
    for (const auto& row : rep.diagnostics.weight_table) {
        nlohmann::ordered_json e;
        e["ad_weights"] = detail::json_ivec(row.weight);
        e["nilpotent_linear_part"] = row.nilpotent_linear_part;
        e["zero_linear_part"] = row.zero_linear_part;
        wt.push_back(e);
    }
    diag["weight_table"] = wt;
    nlohmann::ordered_json bt = nlohmann::ordered_json::array();
    for (const auto& row : rep.diagnostics.bracket_table) bt.push_back(detail::json_ivec(row));
    diag["bracket_table"] = bt;
    if (rep.torus.rank == 0)
        diag["all_nilpotent_certified"] = rep.diagnostics.all_nilpotent_certified;
    j["generator_diagnostics"] = diag;

    nlohmann::ordered_json factors = nlohmann::ordered_json::array();
    for (const auto& [poly, lambda] : rep.factor_data) {
        nlohmann::ordered_json e;
        e["polynomial"] = poly.to_string(rep.variables);
        e["multidegree"] = detail::json_izvec(lambda);
        factors.push_back(e);
    }
    j["factors"] = factors;

    j["quasihomogeneous"] = rep.quasihomogeneous;
    if (rep.positive_weight)
        j["positive_weight_witness"] = detail::json_ivec(*rep.positive_weight);

    nlohmann::ordered_json saito;
    saito["evidence"] = rep.saito.evidence;
    saito["decided_at_degree"] = rep.saito.decided_at;
    if (rep.saito.colength >= 0) saito["jacobian_colength"] = rep.saito.colength;
    j["saito_test"] = saito;

    j["warnings"] = rep.warnings;

    nlohmann::ordered_json cfg;
    cfg["truncation_order"] = rep.order;
    cfg["jet_level"] = rep.config.jet_level;
    cfg["max_source_order"] = rep.m_max;
    cfg["seed"] = rep.config.seed;
    j["config_echo"] = cfg;
    return j;
}

inline std::string report_to_text(const AnalysisReport& rep) {
    std::ostringstream os;
    os << "input: " << rep.input << "\n";
    os << "nvars: " << rep.nvars << "\n";
    os << "rossi_guard: " << (rep.rossi_pass ? "pass" : "fail") << "\n";
    os << "torus rank s = " << rep.torus.rank << "\n";
    os << "weights:";
    if (rep.torus.weights.empty()) os << " (none)";
    os << "\n";
    for (const auto& w : rep.torus.weights) {
        os << "  (";
        for (size_t j = 0; j < w.size(); ++j) os << (j ? "," : "") << w[j].get_str();
        os << ")\n";
    }
    os << "multidegrees: (";
    for (size_t i = 0; i < rep.torus.multidegrees.size(); ++i)
        os << (i ? "," : "") << rep.torus.multidegrees[i].get_str();
    os << ")\n";
    os << "linear_change: " << rep.torus.p.to_string() << "\n";
    os << "normalized_equation: " << rep.normalized.poly().to_string(rep.variables) << "\n";
    os << "stabilization_witness: " << rep.stabilization_witness << "\n";
    os << "dim_g0: " << rep.diagnostics.dim_g0 << "\n";
    os << "estimated_r: " << rep.diagnostics.estimated_r << "\n";
    if (!rep.diagnostics.weight_table.empty()) {
        os << "weight_table (nu-directions):\n";
        for (const auto& row : rep.diagnostics.weight_table) {
            os << "  ad_weights (";
            for (size_t i = 0; i < row.weight.size(); ++i)
                os << (i ? "," : "") << row.weight[i].get_str();
            os << ") nilpotent_linear_part=" << (row.nilpotent_linear_part ? "yes" : "no")
               << "\n";
        }
    }
    if (rep.torus.rank == 0)
        os << "all_nilpotent_certified: "
           << (rep.diagnostics.all_nilpotent_certified ? "yes" : "no") << "\n";
    for (const auto& [poly, lambda] : rep.factor_data) {
        os << "factor " << poly.to_string(rep.variables) << " multidegree (";
        for (size_t i = 0; i < lambda.size(); ++i) os << (i ? "," : "") << lambda[i].get_str();
        os << ")\n";
    }
    os << "quasihomogeneous: " << (rep.quasihomogeneous ? "yes" : "no") << "\n";
    if (rep.positive_weight) {
        os << "positive_weight_witness: (";
        for (size_t i = 0; i < rep.positive_weight->size(); ++i)
            os << (i ? "," : "") << (*rep.positive_weight)[i].get_str();
        os << ")\n";
    }
    os << "saito_test: " << rep.saito.evidence << " (decided at degree "
       << rep.saito.decided_at << ")\n";
    for (const auto& w : rep.warnings) os << "warning: " << w << "\n";
    os << "config: order=" << rep.order << " jet_level=" << rep.config.jet_level
       << " seed=" << rep.config.seed << "\n";
    return os.str();
}

inline nlohmann::ordered_json invariance_to_json(const InvarianceReport& rep) {
    nlohmann::ordered_json j;
    j["trials"] = rep.trials;
    j["failures"] = rep.failures;
    j["base_rank"] = rep.base_rank;
    j["base_weights"] = detail::json_imat(rep.base_form.weights);
    j["base_multidegrees"] = detail::json_izvec(rep.base_form.multidegrees);
    nlohmann::ordered_json rs = nlohmann::ordered_json::array();
    for (const auto& r : rep.results) {
        nlohmann::ordered_json e;
        e["trial"] = r.trial;
        e["agreed"] = r.agreed;
        e["rank"] = r.rank;
        if (!r.note.empty()) e["note"] = r.note;
        rs.push_back(e);
    }
    j["results"] = rs;
    return j;
}

}  // namespace multihom
