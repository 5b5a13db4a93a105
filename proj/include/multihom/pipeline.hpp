#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "multihom/normalform.hpp"
#include "multihom/parser.hpp"

namespace multihom {

struct AnalysisConfig {
    int truncation_order = 0;  // 0: default 2*deg f + 4
    int jet_level = 0;
    int max_source_order = 0;  // 0: default 4*deg f + 8
    std::uint64_t seed = 0;
    std::vector<Polynomial> factors;  // factors of the normalized equation

    int order_for(const Polynomial& f) const {
        int n = truncation_order > 0 ? truncation_order : 2 * f.degree() + 4;
        if (n < f.degree()) throw ConfigError("truncation order below deg f");
        return n;
    }
    int m_max_for(const Polynomial& f) const {
        int m = max_source_order > 0 ? max_source_order : 4 * f.degree() + 8;
        if (m < std::max(jet_level, f.degree()))
            throw ConfigError("max source order below max(jet level, deg f)");
        return m;
    }
};

// ---- reducedness helpers ------------------------------------------------

namespace detail {

inline int degree_in(const Polynomial& f, int i) {
    int d = 0;
    for (const auto& [m, c] : f.terms()) d = std::max(d, m.exponent(i));
    return d;
}

inline Polynomial leading_coeff_in(const Polynomial& f, int i) {
    int d = degree_in(f, i);
    std::vector<Polynomial::Term> terms;
    for (const auto& [m, c] : f.terms())
        if (m.exponent(i) == d) {
            auto e = m.exponents(f.nvars());
            e[i] = 0;
            terms.emplace_back(Monomial::from_exponents(e), c);
        }
    return Polynomial::from_terms(f.nvars(), std::move(terms));
}

inline Polynomial shift_in(const Polynomial& f, int i, int k) {
    std::vector<Polynomial::Term> terms;
    for (const auto& [m, c] : f.terms()) {
        auto e = m.exponents(f.nvars());
        e[i] += k;
        terms.emplace_back(Monomial::from_exponents(e), c);
    }
    return Polynomial::from_terms(f.nvars(), std::move(terms));
}

inline Polynomial pseudo_remainder(Polynomial f, const Polynomial& g, int i) {
    int dg = degree_in(g, i);
    Polynomial lcg = leading_coeff_in(g, i);
    int guard = 0;
    while (!f.is_zero() && degree_in(f, i) >= dg) {
        if (++guard > 200 || f.degree() > 100 || g.degree() > 100)
            throw Error("pseudo-division degree runaway");
        int df = degree_in(f, i);
        Polynomial lcf = leading_coeff_in(f, i);
        // the x_i-leading terms cancel exactly; integer content kept small
        f = (lcg * f - shift_in(lcf, i, df - dg) * g).scaled_primitive();
    }
    return f;
}

// single-divisor exact division test (remainder-free division decides
// divisibility for one divisor)
inline bool divides_exactly(const Polynomial& h, Polynomial f) {
    if (h.is_zero()) return f.is_zero();
    const auto& ht = h.terms().back();  // leading term in canonical order
    int guard = 0;
    while (!f.is_zero()) {
        if (++guard > 4000) return false;
        const auto& ft = f.terms().back();
        if (!ft.first.divisible_by(ht.first)) return false;
        Polynomial q = Polynomial::monomial(f.nvars(), ft.first / ht.first, ft.second / ht.second);
        f = f - q * h;
    }
    return true;
}

inline Polynomial strip_monomial_content(const Polynomial& f) {
    if (f.is_zero()) return f;
    std::vector<int> mins(f.nvars(), 1 << 20);
    for (const auto& [m, c] : f.terms())
        for (int i = 0; i < f.nvars(); ++i) mins[i] = std::min(mins[i], m.exponent(i));
    std::vector<Polynomial::Term> terms;
    for (const auto& [m, c] : f.terms()) {
        auto e = m.exponents(f.nvars());
        for (int i = 0; i < f.nvars(); ++i) e[i] -= mins[i];
        terms.emplace_back(Monomial::from_exponents(e), c);
    }
    return Polynomial::from_terms(f.nvars(), std::move(terms));
}

// Heuristic witness of non-reducedness: a positive-degree polynomial that
// divides f and every partial derivative, found from variable-square
// checks and pseudo-remainder sequences. Sound when it fires; may miss,
// and bails out silently when the remainder degrees run away.
inline std::optional<Polynomial> nonreduced_witness(const Polynomial& f) {
    int n = f.nvars();
    // squares of variables
    for (int i = 0; i < n; ++i) {
        int mn = 1 << 20;
        for (const auto& [m, c] : f.terms()) mn = std::min(mn, m.exponent(i));
        if (mn >= 2) return Polynomial::variable(n, i);
    }
    std::vector<Polynomial> partials;
    for (int i = 0; i < n; ++i) partials.push_back(f.partial_derivative(i));
    for (int i = 0; i < n; ++i) {
        if (degree_in(f, i) < 1 || partials[i].is_zero()) continue;
        try {
            Polynomial a = f, b = partials[i];
            int guard = 0;
            while (!b.is_zero() && degree_in(b, i) >= 1) {
                if (++guard > 64) break;
                Polynomial r = pseudo_remainder(a, b, i);
                a = std::move(b);
                b = r.is_zero() ? r : r.scaled_primitive();
            }
            Polynomial cand = b.is_zero() ? a : Polynomial(n);
            if (cand.is_zero()) continue;
            cand = strip_monomial_content(cand).scaled_primitive();
            if (cand.degree() < 1) continue;
            bool all = divides_exactly(cand, f);
            for (int j = 0; j < n && all; ++j) all = divides_exactly(cand, partials[j]);
            if (all) return cand;
        } catch (const Error&) {
            continue;  // degree runaway: skip this variable's probe
        }
    }
    return std::nullopt;
}

}  // namespace detail

// ---- Rossi guard ---------------------------------------------------------

struct RossiGuard {
    bool pass = false;
    std::string reason;  // set when the guard refuses
    std::vector<std::string> warnings;
};

// Refuses smooth germs and one-variable inputs (whose m^2-members are
// never reduced), then solves the unprojected logarithmic system allowing
// constant coefficients: a solution with nonzero constant part exhibits
// Der_f not contained in Delta, i.e. a product with a smooth factor.
inline RossiGuard rossi_guard(const Polynomial& f, const AnalysisConfig& cfg) {
    RossiGuard g;
    if (f.is_zero() || f.constant_term() != 0)
        throw InvalidGermError("input must be a nonzero germ vanishing at the origin");
    if (f.valuation() < 2) {
        g.reason =
            "smooth germ: the hypersurface is smooth or a product with a smooth factor "
            "(Rossi hypothesis fails)";
        return g;
    }
    if (f.nvars() == 1) {
        g.reason = "one-variable germ in m^2 is non-reduced (x^2 divides it)";
        return g;
    }
    if (auto w = detail::nonreduced_witness(f))
        g.warnings.push_back("possibly non-reduced input: '" +
                             w->to_string(default_variable_names(f.nvars())) +
                             "' divides f and all partial derivatives");
    auto constants = constant_part_solutions(f, {cfg.m_max_for(f)});
    if (!constants.empty()) {
        g.reason =
            "a logarithmic field with nonzero constant part exists: Var(f) is a product "
            "with a smooth factor (Rossi hypothesis fails)";
        return g;
    }
    g.pass = true;
    return g;
}

// ---- Saito membership test ------------------------------------------------

struct SaitoResult {
    std::string evidence;  // "yes" | "no" | "inconclusive"
    int decided_at = 0;    // the degree D where the verdict was reached
    int colength = -1;     // stabilized dim O/(J + m^{D+1}) when seen
};

// Decides f = sum a_i d_i(f) mod m^{D+1} with deg a_i <= D by exact linear
// algebra. Solvability is monotone decreasing in D, so two consecutive
// failures give "no" evidence; solvability together with a stabilized
// Jacobian colength across two increments gives "yes" evidence.
inline SaitoResult saito_test(const Polynomial& f, int degree_bound = 0) {
    if (f.is_zero() || f.valuation() < 2)
        throw InvalidGermError("the Saito test needs f in m^2");
    int n = f.nvars();
    int bound = degree_bound > 0 ? degree_bound : 2 * f.degree() + 6;

    std::vector<Polynomial> partials;
    for (int i = 0; i < n; ++i) partials.push_back(f.partial_derivative(i).scaled_primitive());
    Polynomial f_int = f.scaled_primitive();

    auto solve_at = [&](int d) -> std::pair<bool, int> {  // (solvable, rank)
        std::vector<Monomial> cols;  // (var-major) a_i coefficients, degree <= d
        std::vector<Monomial> monos = monomials_up_to_degree(n, d);
        std::map<std::uint64_t, int> row_of;
        for (size_t r = 0; r < monos.size(); ++r) row_of[monos[r].packed()] = static_cast<int>(r);
        std::vector<std::vector<std::pair<int, Integer>>> rows(monos.size());
        int col = 0;
        for (int i = 0; i < n; ++i)
            for (const auto& beta : monos) {
                for (const auto& [tau, c] : partials[i].terms()) {
                    Monomial gamma = beta * tau;
                    if (gamma.degree() > d) continue;
                    rows[row_of.at(gamma.packed())].emplace_back(col, Integer(c.get_num()));
                }
                ++col;
            }
        SparseEliminator se(col);
        for (size_t r = 0; r < monos.size(); ++r) {
            auto& row = rows[r];
            Rational rhs = f_int.coeff(monos[r]);
            if (rhs != 0) row.emplace_back(col, Integer(rhs.get_num()));
            if (!row.empty()) se.add_row(std::move(row));
        }
        se.eliminate();
        int rank = 0;
        for (int pc : se.pivot_columns())
            if (pc < col) ++rank;
        return {se.consistent(), rank};
    };

    std::vector<int> colengths;
    int consecutive_failures = 0;
    for (int d = 1; d <= bound; ++d) {
        auto [ok, rank] = solve_at(d);
        int monos = static_cast<int>(monomials_up_to_degree(n, d).size());
        colengths.push_back(monos - rank);
        if (!ok) {
            if (++consecutive_failures >= 2) return {"no", d, -1};
            continue;
        }
        consecutive_failures = 0;
        size_t k = colengths.size();
        if (k >= 3 && colengths[k - 1] == colengths[k - 2] &&
            colengths[k - 2] == colengths[k - 3])
            return {"yes", d, colengths.back()};
    }
    return {"inconclusive", bound, colengths.empty() ? -1 : colengths.back()};
}

// ---- the full analysis -----------------------------------------------------

struct GeneratorDiagnostics {
    int dim_g0 = 0;
    int estimated_r = 0;
    // one row per nu-direction: its ad-weight vector and whether the
    // linear part is nilpotent
    struct WeightRow {
        IVec weight;
        bool nilpotent_linear_part = false;
        bool zero_linear_part = false;
    };
    std::vector<WeightRow> weight_table;
    // bracket_table[j][i]: the integer c with [sigma_i, nu_j] = c * nu_j
    std::vector<IVec> bracket_table;
    bool all_nilpotent_certified = false;  // meaningful when rank == 0
};

struct AnalysisReport {
    std::string input;
    std::vector<std::string> variables;
    int nvars = 0;
    bool rossi_pass = false;
    TorusData torus;
    Jet normalized;
    int stabilization_witness = 0;
    GeneratorDiagnostics diagnostics;
    std::vector<std::pair<Polynomial, std::vector<Integer>>> factor_data;
    bool quasihomogeneous = false;
    std::optional<IVec> positive_weight;
    SaitoResult saito;
    std::vector<std::string> warnings;
    AnalysisConfig config;
    int order = 0;
    int m_max = 0;
    CanonicalTorusForm canonical_form;
    std::optional<EquivariantPresentation> presentation;
    CoordinateChangeJet linear_substitution{std::vector<Jet>{Jet::variable(1, 0, 1)}, 1};
};

// Runs the full Theorem-1 analysis: stabilized logarithmic derivations,
// toral family, integral weight data, coordinate change, Poincare-Dulac
// plus equivariant generator, diagnostics, maximality check and Saito
// cross-check. Every claim placed in the report is re-verified from raw
// data before emission.
inline AnalysisReport analyze(const Polynomial& f, const std::vector<std::string>& variables,
                              const AnalysisConfig& cfg) {
    AnalysisReport rep;
    rep.variables = variables;
    rep.nvars = f.nvars();
    rep.config = cfg;
    rep.input = f.to_string(variables);
    int n = f.nvars();
    int order = cfg.order_for(f);
    rep.order = order;
    rep.m_max = cfg.m_max_for(f);

    RossiGuard guard = rossi_guard(f, cfg);
    rep.warnings = guard.warnings;
    if (!guard.pass) throw RefusalError(guard.reason);
    rep.rossi_pass = true;

    StabilizationConfig scfg{cfg.m_max_for(f)};
    JetLieAlgebra l0 = stabilized_log_derivations(f, cfg.jet_level, scfg);
    rep.stabilization_witness = l0.witness;

    std::vector<QMatrix> g0 = linear_parts(l0);
    std::vector<QMatrix> family = maximal_toral_family(g0, n, cfg.seed, &rep.warnings);
    rep.torus = integral_weight_data(family, n);
    rep.linear_substitution = diagonalizing_change(rep.torus, std::max(order, f.degree()));

    if (rep.torus.rank >= 1) {
        // move to diagonalizing coordinates (exact: linear substitution
        // preserves total degree)
        Polynomial f1 = compose(Jet(f, f.degree()), rep.linear_substitution).poly();
        // normal form and multidegrees
        auto eq = make_equivariant(Jet(f1, order), rep.torus, order);
        rep.presentation = eq;
        rep.normalized = eq.normalized;
        rep.torus.multidegrees = eq.multidegrees;

        // diagnostics on the normalized equation's own algebra: the
        // diagonal weight fields are exact logarithmic fields there
        Polynomial g_rep = rep.normalized.poly();
        JetLieAlgebra lg = stabilized_log_derivations(g_rep, cfg.jet_level, scfg);
        std::vector<QMatrix> g0_final = linear_parts(lg);
        rep.diagnostics.dim_g0 = static_cast<int>(g0_final.size());

        auto maximality = check_maximality(rep.torus, g0_final);
        if (!maximality.pass)
            throw ObstructionError("maximality check failed on the normalized algebra",
                                   "witness count: " + std::to_string(maximality.witnesses.size()));

        WeightDecomposition dec = weight_decompose(lg, rep.torus);
        rep.diagnostics.estimated_r = dec.estimated_r;
        for (const auto& e : dec.graded) {
            if (e.in_sigma_span) continue;
            GeneratorDiagnostics::WeightRow row;
            row.weight = e.weight;
            QMatrix lin = e.field.linear_part();
            row.zero_linear_part = lin.is_zero();
            row.nilpotent_linear_part = is_nilpotent(lin);
            rep.diagnostics.weight_table.push_back(row);
            rep.diagnostics.bracket_table.push_back(e.weight);
            // Theorem 1.3 verification: [sigma_i, nu] = weight_i * nu exactly
            for (int i = 0; i < rep.torus.rank; ++i) {
                VectorFieldJet sigma = VectorFieldJet::diagonal_field(
                    rep.torus.weight_row_rational(i), e.field.order());
                if (sigma.bracket(e.field) != e.field * Rational(e.weight[i]))
                    throw ObstructionError("bracket-weight table verification failed", "");
            }
        }

        if (!cfg.factors.empty()) {
            auto lambdas = factor_multidegrees(rep.normalized, cfg.factors, rep.torus);
            for (size_t i = 0; i < cfg.factors.size(); ++i)
                rep.factor_data.emplace_back(cfg.factors[i], lambdas[i]);
        }

        rep.positive_weight = positive_weight_witness(rep.torus, rep.torus.multidegrees);
        if (rep.positive_weight) {
            rep.quasihomogeneous = true;
            if (!rep.torus.lattice.contains(*rep.positive_weight))
                throw ObstructionError("positive weight witness left the lattice", "");
        } else {
            rep.quasihomogeneous = false;
            if (rep.torus.rank >= 1)
                rep.warnings.push_back(
                    "the weight lattice contains no strictly positive vector; s >= 1 with "
                    "mixed-sign weights only");
        }

        std::vector<int> alpha0;
        if (!rep.normalized.poly().is_zero())
            alpha0 = rep.normalized.poly().terms().front().first.exponents(n);
        rep.canonical_form = canonical_comparison_form(rep.torus, alpha0);
    } else {
        rep.normalized = Jet(f, order);
        rep.diagnostics.dim_g0 = static_cast<int>(g0.size());
        rep.diagnostics.estimated_r = static_cast<int>(l0.dim());
        rep.diagnostics.all_nilpotent_certified = all_span_elements_nilpotent(g0, n);
        if (!rep.diagnostics.all_nilpotent_certified)
            throw ObstructionError(
                "empty toral family but a non-nilpotent linear part exists",
                "the randomized search missed a semisimple element; rerun with another seed");
        rep.quasihomogeneous = false;
        rep.canonical_form = CanonicalTorusForm{};
    }

    rep.saito = saito_test(f);
    if (rep.quasihomogeneous && rep.saito.evidence == "no")
        rep.warnings.push_back(
            "cross-check tension: positive weights found but the Saito test reports 'no'");

    // report self-consistency
    if (rep.torus.rank != static_cast<int>(rep.torus.weights.size()))
        throw ObstructionError("rank does not match the weight matrix", "");
    for (const auto& a : rep.torus.family)
        for (const auto& b : rep.torus.family)
            if (!QMatrix::commutator(a, b).is_zero())
                throw ObstructionError("toral family stopped commuting", "");
    for (const auto& a : rep.torus.family)
        if (!is_semisimple(a)) throw ObstructionError("toral family member not semisimple", "");
    return rep;
}

inline AnalysisReport analyze(const std::string& text, const AnalysisConfig& cfg) {
    ParsedPolynomial p = parse_polynomial(text);
    if (p.poly.nvars() > kMaxVars) throw ConfigError("more than 6 variables");
    AnalysisReport rep = analyze(p.poly, p.variables, cfg);
    rep.input = text;
    return rep;
}

// ---- Theorem-5 invariance suite --------------------------------------------

struct InvarianceTrial {
    int trial = 0;
    bool agreed = false;
    int rank = 0;
    CanonicalTorusForm form;
    std::string note;
};

struct InvarianceReport {
    int trials = 0;
    int failures = 0;
    CanonicalTorusForm base_form;
    int base_rank = 0;
    std::vector<InvarianceTrial> results;
};

// Applies seeded random coordinate changes (invertible linear part over
// small integers composed with tangent-to-identity polynomial parts of
// degree <= 3) and asserts that rank, sorted multidegrees and the
// canonicalized weight lattice are unchanged.
inline InvarianceReport invariance_suite(const Polynomial& f,
                                         const std::vector<std::string>& variables,
                                         const AnalysisConfig& cfg, int trials) {
    AnalysisReport base = analyze(f, variables, cfg);
    InvarianceReport rep;
    rep.trials = trials;
    rep.base_form = base.canonical_form;
    rep.base_rank = base.torus.rank;

    int n = f.nvars();
    Prng rng(cfg.seed * 0x9E3779B97F4A7C15ull + 17);
    for (int t = 1; t <= trials; ++t) {
        // random invertible linear part
        QMatrix lin(n, n);
        while (true) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) lin(i, j) = rng.range(-2, 2);
            if (lin.det() != 0) break;
        }
        int change_order = std::max(3 * f.degree() + 2, f.degree());
        std::vector<Jet> comp;
        for (int i = 0; i < n; ++i) {
            Polynomial c(n);
            for (int j = 0; j < n; ++j) c = c + Polynomial::variable(n, j) * lin(i, j);
            int extra = static_cast<int>(rng.range(0, 2));
            for (int k = 0; k < extra; ++k) {
                std::vector<int> e(n, 0);
                int deg = static_cast<int>(rng.range(2, 3));
                for (int rem = deg, v = 0; v < n; ++v) {
                    e[v] = static_cast<int>(rng.range(0, rem));
                    rem -= e[v];
                    if (v == n - 1) e[v] += rem;
                }
                c = c + Polynomial::monomial(n, Monomial::from_exponents(e),
                                             Rational(rng.range(-2, 2)));
            }
            comp.emplace_back(c, change_order);
        }
        CoordinateChangeJet psi(comp, change_order);
        Polynomial ft = compose(Jet(f, change_order), psi).poly();

        InvarianceTrial result;
        result.trial = t;
        try {
            AnalysisConfig tc = cfg;
            tc.truncation_order = std::max(cfg.order_for(f), ft.degree() + 2);
            tc.max_source_order = std::max(cfg.m_max_for(f), 4 * ft.degree() + 8);
            AnalysisReport r = analyze(ft, variables, tc);
            result.rank = r.torus.rank;
            result.form = r.canonical_form;
            result.agreed = (r.torus.rank == rep.base_rank) && (r.canonical_form == rep.base_form);
            if (!result.agreed) result.note = "invariants differ from the base run";
        } catch (const Error& e) {
            result.agreed = false;
            result.note = std::string("analysis failed: ") + e.what();
        }
        if (!result.agreed) ++rep.failures;
        rep.results.push_back(std::move(result));
    }
    return rep;
}

}  // namespace multihom
