#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "multihom/sparse_solver.hpp"
#include "multihom/vector_field.hpp"

namespace multihom {

// The jet realization of Der_f at source order m: polynomial fields with
// coefficient degrees in [1, m+1] (degree 0 included for the Rossi-guard
// variant) and cofactors h of degree <= m such that
//
//     delta(f) - h*f == 0  mod  m^{m+1},
//
// i.e. all coefficients of total degree <= m vanish. This is Der_{f_m} of
// the stabilization lemma: truncating a solution of source order m+1
// yields one of source order m, so the level-k projections form a
// non-increasing chain that stabilizes at pi_k(Der_f).

namespace detail {

struct JetSystem {
    int nvars = 0, m = 0, k = 0;
    bool with_constants = false;
    int ncols = 0, tail_start = 0;
    // column maps
    std::vector<std::pair<int, Monomial>> a_cols;  // (var, monomial) per a-column
    std::vector<Monomial> h_cols;
    std::vector<int> a_col_index;  // lookup by (var, monomial-rank) built on demand
    SparseEliminator se{0};
};

inline JetSystem build_jet_system(const Polynomial& f, int k, int m, bool with_constants) {
    if (f.is_zero()) throw InvalidGermError("log derivations of the zero germ");
    if (f.constant_term() != 0)
        throw InvalidGermError("log derivations need f in the maximal ideal");
    int n = f.nvars();
    JetSystem sys;
    sys.nvars = n;
    sys.m = m;
    sys.k = k;
    sys.with_constants = with_constants;

    Polynomial fi = f.scaled_primitive();

    // rows: one per monomial of degree <= m
    std::vector<Monomial> row_monos = monomials_up_to_degree(n, m);
    std::map<std::uint64_t, int> row_of;
    for (size_t r = 0; r < row_monos.size(); ++r)
        row_of[row_monos[r].packed()] = static_cast<int>(r);

    // columns: h block (degrees m..0), high a block, then the tail
    struct ColPlan {
        bool is_h;
        int var;
        Monomial mono;
    };
    std::vector<ColPlan> plan;
    for (int d = m; d >= 0; --d)
        for (const Monomial& mono : monomials_of_degree(n, d))
            plan.push_back({true, -1, mono});
    if (!with_constants) {
        for (int d = m + 1; d >= k + 2; --d)
            for (const Monomial& mono : monomials_of_degree(n, d))
                for (int i = 0; i < n; ++i) plan.push_back({false, i, mono});
        sys.tail_start = static_cast<int>(plan.size());
        for (int d = 1; d <= k + 1; ++d)
            for (const Monomial& mono : monomials_of_degree(n, d))
                for (int i = 0; i < n; ++i) plan.push_back({false, i, mono});
    } else {
        for (int d = m + 1; d >= 1; --d)
            for (const Monomial& mono : monomials_of_degree(n, d))
                for (int i = 0; i < n; ++i) plan.push_back({false, i, mono});
        sys.tail_start = static_cast<int>(plan.size());
        for (int i = 0; i < n; ++i) plan.push_back({false, i, Monomial::one()});
    }
    sys.ncols = static_cast<int>(plan.size());

    std::vector<std::vector<std::pair<int, Integer>>> rows(row_monos.size());
    std::vector<Polynomial> partials;
    for (int i = 0; i < n; ++i) partials.push_back(fi.partial_derivative(i));

    for (int col = 0; col < sys.ncols; ++col) {
        const ColPlan& cp = plan[col];
        if (cp.is_h) {
            sys.h_cols.push_back(cp.mono);
            for (const auto& [tau, c] : fi.terms()) {
                Monomial gamma = cp.mono * tau;
                if (gamma.degree() > m) continue;
                rows[row_of.at(gamma.packed())].emplace_back(col, Integer(-c.get_num()));
            }
        } else {
            sys.a_cols.emplace_back(cp.var, cp.mono);
            for (const auto& [tau, c] : partials[cp.var].terms()) {
                Monomial gamma = cp.mono * tau;
                if (gamma.degree() > m) continue;
                rows[row_of.at(gamma.packed())].emplace_back(col, Integer(c.get_num()));
            }
        }
    }

    sys.se = SparseEliminator(sys.ncols);
    for (auto& r : rows)
        if (!r.empty()) sys.se.add_row(std::move(r));
    return sys;
}

// map a full solution vector to (field components, cofactor)
inline std::pair<std::vector<Polynomial>, Polynomial> read_solution(const JetSystem& sys,
                                                                    const std::vector<Rational>& x) {
    int n = sys.nvars;
    std::vector<std::vector<Polynomial::Term>> comp_terms(n);
    std::vector<Polynomial::Term> h_terms;
    size_t hc = sys.h_cols.size();
    for (size_t c = 0; c < hc; ++c)
        if (x[c] != 0) h_terms.emplace_back(sys.h_cols[c], x[c]);
    for (size_t c = 0; c < sys.a_cols.size(); ++c) {
        const Rational& v = x[hc + c];
        if (v != 0) comp_terms[sys.a_cols[c].first].emplace_back(sys.a_cols[c].second, v);
    }
    std::vector<Polynomial> comp;
    for (int i = 0; i < n; ++i)
        comp.push_back(Polynomial::from_terms(n, std::move(comp_terms[i])));
    return {std::move(comp), Polynomial::from_terms(n, std::move(h_terms))};
}

}  // namespace detail

struct LogDerivationsLevel {
    int k = 0, m = 0;
    // canonical level-k basis, one field per canonical kernel vector
    std::vector<VectorFieldJet> basis;
    // full-order lifts of each basis element with their cofactors:
    // lift_i(f) - cofactor_i * f == 0 mod m^{m+1}
    std::vector<std::vector<Polynomial>> lifts;
    std::vector<Polynomial> cofactors;
    // raw canonical kernel vectors, for stabilization comparison
    std::vector<std::vector<Rational>> kernel_vectors;
};

inline LogDerivationsLevel log_derivations_at(const Polynomial& f, int k, int m) {
    if (m < k) throw ConfigError("source order below projection level");
    detail::JetSystem sys = detail::build_jet_system(f, k, m, false);
    sys.se.eliminate();
    LogDerivationsLevel out;
    out.k = k;
    out.m = m;
    out.kernel_vectors = sys.se.tail_kernel(sys.tail_start);
    for (const auto& tail : out.kernel_vectors) {
        out.basis.push_back(field_from_coordinates(f.nvars(), k + 1, tail, k));
        auto full = sys.se.lift(sys.tail_start, tail, false);
        auto [comp, h] = detail::read_solution(sys, full);
        out.lifts.push_back(std::move(comp));
        out.cofactors.push_back(std::move(h));
    }
    return out;
}

// exact check of the defining congruence at the given cutoff
inline bool satisfies_log_congruence(const Polynomial& f, const std::vector<Polynomial>& delta,
                                     const Polynomial& h, int cutoff) {
    Polynomial acc(f.nvars());
    for (int i = 0; i < f.nvars(); ++i) acc = acc + delta[i] * f.partial_derivative(i);
    acc = acc - h * f;
    return acc.truncated(cutoff).is_zero();
}

struct JetLieAlgebra {
    int level = 0;
    int witness = 0;  // first source order of the stabilized run
    Polynomial f;
    std::vector<VectorFieldJet> basis;
    std::vector<std::vector<Polynomial>> lifts;
    std::vector<Polynomial> cofactors;
    std::vector<std::pair<int, int>> dims_by_m;  // (m, level-k dimension)

    int dim() const { return static_cast<int>(basis.size()); }
};

struct StabilizationConfig {
    int m_max = 0;  // 0: use 4*deg f + 8
};

// Lemma-4 stabilization sweep: run the jet solve for increasing m starting
// at max(k, deg f) and stop when the projected level-k space agrees for
// two consecutive increments (three equal solves). Dimensions must be
// non-increasing along the sweep; bracket closure of the stabilized space
// is verified before returning.
inline JetLieAlgebra stabilized_log_derivations(const Polynomial& f, int k,
                                                StabilizationConfig cfg = {}) {
    if (f.is_zero() || f.constant_term() != 0)
        throw InvalidGermError("stabilization needs 0 != f in the maximal ideal");
    int m0 = std::max(k, f.degree());
    int m_max = cfg.m_max > 0 ? cfg.m_max : 4 * f.degree() + 8;
    if (m_max < m0 + 2) m_max = m0 + 2;

    JetLieAlgebra out;
    out.level = k;
    out.f = f;

    std::vector<LogDerivationsLevel> window;
    window.push_back(log_derivations_at(f, k, m0));
    out.dims_by_m.emplace_back(m0, static_cast<int>(window[0].kernel_vectors.size()));
    for (int m = m0 + 1; m <= m_max; ++m) {
        window.push_back(log_derivations_at(f, k, m));
        const auto& prev = window[window.size() - 2];
        const auto& cur = window.back();
        out.dims_by_m.emplace_back(m, static_cast<int>(cur.kernel_vectors.size()));
        if (cur.kernel_vectors.size() > prev.kernel_vectors.size())
            throw Error("level dimension increased along the stabilization sweep");
        if (window.size() >= 3) {
            const auto& a = window[window.size() - 3];
            if (a.kernel_vectors == prev.kernel_vectors &&
                prev.kernel_vectors == cur.kernel_vectors) {
                out.witness = m - 2;
                out.basis = a.basis;
                out.lifts = a.lifts;
                out.cofactors = a.cofactors;
                // bracket closure at level k, decided by exact linear solve
                std::vector<std::vector<Rational>> coords;
                for (const auto& b : out.basis) coords.push_back(field_coordinates(b, k + 1));
                for (size_t i = 0; i < out.basis.size(); ++i)
                    for (size_t j = i + 1; j < out.basis.size(); ++j) {
                        VectorFieldJet br = out.basis[i].bracket(out.basis[j]);
                        if (!in_span(coords, field_coordinates(br, k + 1)))
                            throw Error("stabilized space is not bracket-closed");
                    }
                return out;
            }
        }
        if (window.size() > 3) window.erase(window.begin());
    }
    throw StabilizationError(
        "no stabilization by m_max = " + std::to_string(m_max) +
        "; this signals a bug or pathological input, not a theory failure");
}

// canonical independent set of degree-0 graded parts: the computational
// g_0 = pi_0(Der_f)
inline std::vector<QMatrix> linear_parts(const JetLieAlgebra& l) {
    int n = l.f.nvars();
    std::vector<std::vector<Rational>> vecs;
    for (const auto& b : l.basis) {
        QMatrix a = b.linear_part();
        if (!a.is_zero()) vecs.push_back(a.vectorize());
    }
    std::vector<QMatrix> out;
    for (const auto& row : canonical_span_basis(vecs)) {
        QMatrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = row[i * n + j];
        out.push_back(std::move(a));
    }
    return out;
}

// Rossi-guard solve: allow constant coefficient parts and project the
// solution space onto them. A nonzero projection exhibits a logarithmic
// field not vanishing at the origin, i.e. Der_f not contained in Delta.
// The projection is non-increasing in m; stabilized like the main sweep.
inline std::vector<std::vector<Rational>> constant_part_solutions(const Polynomial& f,
                                                                  StabilizationConfig cfg = {}) {
    int m0 = std::max(1, f.degree());
    int m_max = cfg.m_max > 0 ? cfg.m_max : 4 * f.degree() + 8;
    if (m_max < m0 + 2) m_max = m0 + 2;
    std::vector<std::vector<std::vector<Rational>>> window;
    for (int m = m0; m <= m_max; ++m) {
        detail::JetSystem sys = detail::build_jet_system(f, 0, m, true);
        sys.se.eliminate();
        window.push_back(sys.se.tail_kernel(sys.tail_start));
        if (window.size() >= 3) {
            const auto& a = window[window.size() - 3];
            const auto& b = window[window.size() - 2];
            const auto& c = window.back();
            if (a == b && b == c) return c;
        }
        if (window.size() > 3) window.erase(window.begin());
    }
    throw StabilizationError("Rossi-guard solve did not stabilize");
}

// One inhomogeneous solve at source order m: a full-precision logarithmic
// field whose linear part is exactly the given matrix. Returns nothing if
// the pinned system is inconsistent at this order.
inline std::optional<std::pair<VectorFieldJet, Polynomial>> lift_with_linear_part(
    const Polynomial& f, int m, const QMatrix& target) {
    detail::JetSystem sys = detail::build_jet_system(f, 0, m, false);
    int n = f.nvars();
    // pin the n^2 linear coordinates; the tail block is the degree-1 slice
    for (const Monomial& mono : monomials_of_degree(n, 1)) {
        int var_of_mono = 0;
        while (!mono.has_variable(var_of_mono)) ++var_of_mono;
        for (int i = 0; i < n; ++i) {
            // coefficient of x_{var_of_mono} in component i
            int col = -1;
            for (size_t c = 0; c < sys.a_cols.size(); ++c)
                if (sys.a_cols[c].first == i && sys.a_cols[c].second == mono) {
                    col = static_cast<int>(sys.h_cols.size() + c);
                    break;
                }
            std::vector<std::pair<int, Rational>> row{{col, Rational(1)}};
            Rational v = target(var_of_mono, i);
            if (v != 0) row.emplace_back(sys.ncols, v);
            sys.se.add_row_rational(row);
        }
    }
    sys.se.eliminate();
    if (!sys.se.consistent()) return std::nullopt;
    auto x = sys.se.particular_solution();
    auto [comp, h] = detail::read_solution(sys, x);
    return std::make_pair(VectorFieldJet(std::move(comp), m), std::move(h));
}

}  // namespace multihom
