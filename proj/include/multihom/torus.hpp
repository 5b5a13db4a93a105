#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "multihom/chevalley.hpp"
#include "multihom/intlattice.hpp"
#include "multihom/logder.hpp"
#include "multihom/prng.hpp"

namespace multihom {

// The computational content of the maximal torus: its saturated integer
// weight lattice in diagonalizing coordinates, the diagonalizing matrix,
// and (after normalization) the multidegrees.
struct TorusData {
    int nvars = 0;
    int rank = 0;                      // s
    QMatrix p;                         // columns = common eigenvectors
    IMat weights;                      // s x n, Hermite-canonical rows
    IntegerLattice lattice;            // saturated weight lattice
    std::vector<Integer> multidegrees; // lambda, filled in by normalform
    std::vector<QMatrix> family;       // commuting semisimple family found
    std::vector<std::string> warnings;

    std::vector<Rational> weight_row_rational(int i) const {
        std::vector<Rational> w(nvars);
        for (int j = 0; j < nvars; ++j) w[j] = Rational(weights[i][j]);
        return w;
    }
};

namespace detail {

inline std::vector<std::vector<Rational>> vectorized(const std::vector<QMatrix>& ms) {
    std::vector<std::vector<Rational>> v;
    for (const auto& m : ms) v.push_back(m.vectorize());
    return v;
}

inline QMatrix devectorize(const std::vector<Rational>& v, int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = v[i * n + j];
    return m;
}

// basis of {X in span(basis) : [X, C_i] = 0 for all i}
inline std::vector<QMatrix> centralizer_in_span(const std::vector<QMatrix>& basis,
                                                const std::vector<QMatrix>& constraints, int n) {
    if (basis.empty()) return {};
    int d = static_cast<int>(basis.size());
    int rows = static_cast<int>(constraints.size()) * n * n;
    if (rows == 0) return basis;
    QMatrix sys(rows, d);
    for (size_t c = 0; c < constraints.size(); ++c)
        for (int b = 0; b < d; ++b) {
            QMatrix comm = QMatrix::commutator(basis[b], constraints[c]);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    sys(static_cast<int>(c) * n * n + i * n + j, b) = comm(i, j);
        }
    std::vector<QMatrix> out;
    for (const auto& coef : sys.nullspace()) {
        QMatrix x(n, n);
        for (int b = 0; b < d; ++b) x = x + basis[b] * coef[b];
        out.push_back(std::move(x));
    }
    return out;
}

}  // namespace detail

// Randomized-greedy maximal commuting semisimple family inside span(g0):
// repeatedly draw a seeded pseudo-random element of the centralizer of the
// family, take its Chevalley semisimple part, adjoin it when it enlarges
// the span, and stop after `max_idle` consecutive draws without growth.
inline std::vector<QMatrix> maximal_toral_family(const std::vector<QMatrix>& g0, int n,
                                                 std::uint64_t seed,
                                                 std::vector<std::string>* warnings = nullptr,
                                                 int max_idle = 8) {
    if (g0.empty()) return {};
    // precondition: g0 spans a Lie subalgebra
    auto g0_vec = detail::vectorized(g0);
    for (size_t i = 0; i < g0.size(); ++i)
        for (size_t j = i + 1; j < g0.size(); ++j)
            if (!in_span(g0_vec, QMatrix::commutator(g0[i], g0[j]).vectorize()))
                throw CommutationError("g0 is not closed under the bracket");

    Prng rng(seed);
    std::vector<QMatrix> family;
    std::vector<std::vector<Rational>> family_vec;

    auto try_adjoin = [&](const QMatrix& x) {
        if (x.is_zero()) return false;
        QMatrix s = jordan_chevalley(x).semisimple;
        if (s.is_zero() || in_span(family_vec, s.vectorize())) return false;
        if (!in_span(g0_vec, s.vectorize()) && warnings) {
            warnings->push_back(
                "algebraicity warning: a semisimple part left span(g0); it commutes with the "
                "family and was kept");
        }
        family.push_back(s);
        family_vec.push_back(s.vectorize());
        return true;
    };

    int idle = 0;
    while (idle < max_idle) {
        std::vector<QMatrix> cent = detail::centralizer_in_span(g0, family, n);
        if (cent.empty()) break;
        // deterministic pass first: semisimple parts of the canonical
        // centralizer basis keep the frame canonical whenever they suffice
        bool grew = false;
        for (const auto& c : cent)
            if (try_adjoin(c)) {
                grew = true;
                break;
            }
        if (grew) {
            idle = 0;
            continue;
        }
        // seeded random mixture to catch semisimple parts not visible on
        // basis elements
        QMatrix x(n, n);
        for (const auto& c : cent) x = x + c * Rational(rng.range(-4, 4));
        if (try_adjoin(x))
            idle = 0;
        else
            ++idle;
    }
    return family;
}

// Simultaneous diagonalization, joint primitive integer scaling, and
// saturation of the weight lattice. Multidegrees stay empty here.
inline TorusData integral_weight_data(const std::vector<QMatrix>& family, int n) {
    TorusData t;
    t.nvars = n;
    t.family = family;
    if (family.empty()) {
        t.rank = 0;
        t.p = QMatrix::identity(n);
        t.lattice = saturate(n, {});
        return t;
    }
    SimultaneousDiagonalization sd = simultaneous_diagonalize(family, n);
    t.p = sd.p;
    t.lattice = saturate(n, sd.weights);
    t.weights = t.lattice.basis();
    t.rank = t.lattice.rank();
    return t;
}

struct MaximalityReport {
    bool pass = true;
    std::vector<QMatrix> witnesses;  // centralizer elements whose semisimple
                                     // part escapes the sigma-span
};

// Theorem-1.6 criterion at the linear level: every canonical basis element
// of the centralizer of the diagonal weight fields inside g0 must have its
// Chevalley semisimple part inside the Q-span of those diagonal fields.
inline MaximalityReport check_maximality(const TorusData& t, const std::vector<QMatrix>& g0) {
    MaximalityReport rep;
    int n = t.nvars;
    std::vector<QMatrix> sigma;
    for (int i = 0; i < t.rank; ++i) {
        QMatrix d(n, n);
        for (int j = 0; j < n; ++j) d(j, j) = Rational(t.weights[i][j]);
        sigma.push_back(std::move(d));
    }
    auto sigma_vec = detail::vectorized(sigma);
    for (const auto& x : detail::centralizer_in_span(g0, sigma, n)) {
        QMatrix s = jordan_chevalley(x).semisimple;
        if (!in_span(sigma_vec, s.vectorize())) {
            rep.pass = false;
            rep.witnesses.push_back(x);
        }
    }
    return rep;
}

// Weight-0 nilpotent directions: the Chevalley nilpotent parts of the
// canonical centralizer basis. With maximality these span the n_0 of the
// Cartan-subalgebra diagnostic; no conjugacy claim is made.
inline std::vector<QMatrix> nilpotent_cone_diagnostic(const TorusData& t,
                                                      const std::vector<QMatrix>& g0) {
    int n = t.nvars;
    std::vector<QMatrix> sigma;
    for (int i = 0; i < t.rank; ++i) {
        QMatrix d(n, n);
        for (int j = 0; j < n; ++j) d(j, j) = Rational(t.weights[i][j]);
        sigma.push_back(std::move(d));
    }
    std::vector<std::vector<Rational>> nil_vecs;
    for (const auto& x : detail::centralizer_in_span(g0, sigma, n)) {
        QMatrix nil = jordan_chevalley(x).nilpotent;
        if (!nil.is_zero()) nil_vecs.push_back(nil.vectorize());
    }
    std::vector<QMatrix> out;
    for (const auto& v : canonical_span_basis(nil_vecs)) out.push_back(detail::devectorize(v, n));
    return out;
}

// Exact certificate that every element of the span is nilpotent. First a
// cheap sufficient check: if the associative span chain W_{j+1} = W_j * W_1
// dies by step n, every product of n span elements vanishes. Otherwise the
// trace powers tr(X^k), k = 1..n, are polynomials of degree <= k in each
// coefficient, so vanishing on the integer grid {0..k}^dim decides the
// statement exactly.
inline bool all_span_elements_nilpotent(const std::vector<QMatrix>& basis, int n) {
    if (basis.empty()) return true;
    int d = static_cast<int>(basis.size());

    std::vector<std::vector<Rational>> w1 = detail::vectorized(basis);
    std::vector<std::vector<Rational>> wj = w1;
    for (int step = 1; step < n && !wj.empty(); ++step) {
        std::vector<std::vector<Rational>> prods;
        for (const auto& a : wj)
            for (const auto& b : w1)
                prods.push_back((detail::devectorize(a, n) * detail::devectorize(b, n)).vectorize());
        wj = canonical_span_basis(prods);
    }
    if (wj.empty()) return true;

    double grid_size = 1;
    for (int b = 0; b < d; ++b) grid_size *= n + 1;
    if (grid_size > 2e6) throw Error("nilpotency certification grid too large");
    for (int k = 1; k <= n; ++k) {
        std::vector<int> grid(d, 0);
        while (true) {
            QMatrix x(n, n);
            for (int b = 0; b < d; ++b) x = x + basis[b] * Rational(grid[b]);
            if (x.pow(k).trace() != 0) return false;
            int pos = 0;
            while (pos < d && grid[pos] == k) grid[pos++] = 0;
            if (pos == d) break;
            ++grid[pos];
        }
    }
    return true;
}

// substitution x -> P^{-T} x; fields transported through it get linear
// parts P^{-1} A P, so the family becomes diagonal
inline CoordinateChangeJet diagonalizing_change(const TorusData& t, int order) {
    return CoordinateChangeJet::linear(t.p.inverse().transpose(), order);
}

// ---- weight decomposition of a jet Lie algebra under the torus --------

struct WeightGradedElement {
    IVec weight;  // in Z^s, the ad-eigenvalue vector
    VectorFieldJet field;
    bool in_sigma_span = false;  // only meaningful for weight 0
};

struct WeightDecomposition {
    std::vector<WeightGradedElement> graded;
    int estimated_r = 0;  // dim complement of the sigma-span
};

// Splits a level-k algebra computed in coordinates where the torus weights
// are diagonal into simultaneous ad(sigma_i)-eigenvectors with integer
// weight tags. The monomial field x^beta d_j has ad-weight <W_i, beta> -
// W_ij; stability of the space under the splitting is guarded by an
// assertion on dimensions.
inline WeightDecomposition weight_decompose(const JetLieAlgebra& l, const TorusData& t) {
    int n = l.f.nvars();
    int k = l.level;
    auto weight_of = [&](const Monomial& beta, int j) {
        IVec mu(t.rank, Integer(0));
        for (int i = 0; i < t.rank; ++i) {
            Integer w = -t.weights[i][j];
            for (int v = 0; v < n; ++v) w += t.weights[i][v] * beta.exponent(v);
            mu[i] = w;
        }
        return mu;
    };

    // split each basis element into weight components and regroup
    std::map<IVec, std::vector<std::vector<Rational>>> groups;
    for (const auto& b : l.basis) {
        std::map<IVec, std::vector<std::vector<Polynomial::Term>>> split;
        for (int j = 0; j < n; ++j)
            for (const auto& [beta, c] : b.component(j).terms()) {
                auto& slot = split[weight_of(beta, j)];
                if (slot.empty()) slot.assign(n, {});
                slot[j].emplace_back(beta, c);
            }
        for (auto& [mu, comp_terms] : split) {
            std::vector<Polynomial> comp;
            for (int j = 0; j < n; ++j)
                comp.push_back(Polynomial::from_terms(n, std::move(comp_terms[j])));
            groups[mu].push_back(field_coordinates(VectorFieldJet(std::move(comp), k), k + 1));
        }
    }

    WeightDecomposition out;
    int total = 0;
    IVec zero(t.rank, Integer(0));
    for (auto& [mu, vecs] : groups) {
        auto basis = canonical_span_basis(vecs);
        total += static_cast<int>(basis.size());
        if (mu == zero && t.rank > 0) {
            // split off the sigma-span inside the weight-0 block
            std::vector<std::vector<Rational>> sigma_coords;
            for (int i = 0; i < t.rank; ++i)
                sigma_coords.push_back(field_coordinates(
                    VectorFieldJet::diagonal_field(t.weight_row_rational(i), k), k + 1));
            for (const auto& sc : sigma_coords)
                if (!in_span(basis, sc))
                    throw Error("diagonal weight field missing from the weight-0 block");
            for (int i = 0; i < t.rank; ++i) {
                WeightGradedElement e{mu,
                                      field_from_coordinates(n, k + 1, sigma_coords[i], k), true};
                out.graded.push_back(std::move(e));
            }
            // complement: extend the sigma coordinates to a basis of the block
            std::vector<std::vector<Rational>> acc = sigma_coords;
            for (const auto& v : basis) {
                if (in_span(acc, v)) continue;
                acc.push_back(v);
                out.graded.push_back({mu, field_from_coordinates(n, k + 1, v, k), false});
            }
        } else {
            for (const auto& v : basis)
                out.graded.push_back({mu, field_from_coordinates(n, k + 1, v, k), false});
        }
    }
    if (total != l.dim())
        throw Error("weight decomposition does not preserve dimension (space not ad-stable)");
    out.estimated_r = l.dim() - t.rank;
    return out;
}

// ---- canonical cross-run comparison form -------------------------------
//
// Reports keep the natural coordinate order of the diagonalization; for
// Theorem-5 invariance comparisons the lattice and multidegrees are
// canonicalized by minimizing the Hermite basis over all coordinate
// permutations (flattened row-major lexicographic order, multidegrees as
// tie-break).

struct CanonicalTorusForm {
    int rank = 0;
    IMat weights;
    std::vector<Integer> multidegrees;

    bool operator==(const CanonicalTorusForm& o) const {
        return rank == o.rank && weights == o.weights && multidegrees == o.multidegrees;
    }
};

inline CanonicalTorusForm canonical_comparison_form(const TorusData& t,
                                                    const std::vector<int>& alpha0) {
    CanonicalTorusForm best;
    best.rank = t.rank;
    if (t.rank == 0) return best;
    int n = t.nvars;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    bool first = true;
    do {
        IMat rows;
        for (const auto& w : t.weights) {
            IVec r(n);
            for (int j = 0; j < n; ++j) r[j] = w[perm[j]];
            rows.push_back(std::move(r));
        }
        IMat basis = hermite_basis(rows);
        std::vector<Integer> lambda;
        if (!alpha0.empty()) {
            for (const auto& b : basis) {
                Integer l = 0;
                for (int j = 0; j < n; ++j) l += b[j] * alpha0[perm[j]];
                lambda.push_back(l);
            }
        }
        auto key = std::make_pair(basis, lambda);
        if (first || key < std::make_pair(best.weights, best.multidegrees)) {
            best.weights = basis;
            best.multidegrees = lambda;
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// ---- strictly positive weight search (quasihomogeneity flag) ----------
//
// Exact Fourier-Motzkin elimination on the open cone
//   { c in Q^s : (W^T c)_j > 0 for all j, <lambda, c> > 0 },
// with a rational witness by back-substitution when feasible.

namespace detail {

struct StrictSystem {
    // rows a: constraint <a, c> > 0
    std::vector<std::vector<Rational>> rows;
};

inline std::optional<std::vector<Rational>> fm_feasible(StrictSystem sys, int nvar) {
    if (nvar == 0) {
        for (const auto& r : sys.rows) {
            (void)r;
            return std::nullopt;  // 0 > 0 is infeasible
        }
        return std::vector<Rational>{};
    }
    int k = nvar - 1;
    StrictSystem reduced;
    std::vector<std::vector<Rational>> lowers, uppers;  // bounds on c_k
    for (auto& r : sys.rows) {
        if (r[k] == 0) {
            std::vector<Rational> rest(r.begin(), r.begin() + k);
            bool all_zero = true;
            for (const auto& x : rest)
                if (x != 0) all_zero = false;
            if (all_zero) return std::nullopt;  // 0 > 0
            reduced.rows.push_back(std::move(rest));
        } else if (r[k] > 0) {
            // c_k > -(rest)/r[k]
            std::vector<Rational> b(k);
            for (int i = 0; i < k; ++i) b[i] = -r[i] / r[k];
            lowers.push_back(std::move(b));
        } else {
            std::vector<Rational> b(k);
            for (int i = 0; i < k; ++i) b[i] = -r[i] / r[k];
            uppers.push_back(std::move(b));
        }
    }
    for (const auto& lo : lowers)
        for (const auto& up : uppers) {
            // lo(c) < up(c), i.e. <up - lo, c> > 0
            std::vector<Rational> r(k);
            bool all_zero = true;
            for (int i = 0; i < k; ++i) {
                r[i] = up[i] - lo[i];
                if (r[i] != 0) all_zero = false;
            }
            if (all_zero) return std::nullopt;  // empty open interval
            reduced.rows.push_back(std::move(r));
        }
    auto inner = fm_feasible(std::move(reduced), k);
    if (!inner) return std::nullopt;
    std::vector<Rational>& c = *inner;
    // back-substitute a value for c_k inside the open interval
    bool has_lo = false, has_up = false;
    Rational lo_val = 0, up_val = 0;
    for (const auto& lo : lowers) {
        Rational v = 0;
        for (int i = 0; i < k; ++i) v += lo[i] * c[i];
        if (!has_lo || v > lo_val) lo_val = v;
        has_lo = true;
    }
    for (const auto& up : uppers) {
        Rational v = 0;
        for (int i = 0; i < k; ++i) v += up[i] * c[i];
        if (!has_up || v < up_val) up_val = v;
        has_up = true;
    }
    Rational pick;
    if (has_lo && has_up)
        pick = (lo_val + up_val) / 2;
    else if (has_lo)
        pick = lo_val + 1;
    else if (has_up)
        pick = up_val - 1;
    else
        pick = 1;
    c.push_back(pick);
    return c;
}

}  // namespace detail

// Searches the saturated lattice for a strictly positive weight vector
// whose multidegree pairing is positive. Exact: feasibility of the open
// rational cone is decided by Fourier-Motzkin, and any rational point
// scales to an integer witness.
inline std::optional<IVec> positive_weight_witness(const TorusData& t,
                                                   const std::vector<Integer>& lambda) {
    if (t.rank == 0) return std::nullopt;
    int s = t.rank, n = t.nvars;
    detail::StrictSystem sys;
    for (int j = 0; j < n; ++j) {
        std::vector<Rational> row(s);
        for (int i = 0; i < s; ++i) row[i] = Rational(t.weights[i][j]);
        sys.rows.push_back(std::move(row));
    }
    if (!lambda.empty()) {
        std::vector<Rational> row(s);
        for (int i = 0; i < s; ++i) row[i] = Rational(lambda[i]);
        sys.rows.push_back(std::move(row));
    }
    auto c = detail::fm_feasible(sys, s);
    if (!c) return std::nullopt;
    // w = W^T c, cleared to a primitive integer vector
    std::vector<Rational> w(n, Rational(0));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < s; ++i) w[j] += Rational(t.weights[i][j]) * (*c)[i];
    Integer den = denominator_lcm(w);
    IVec wi(n);
    for (int j = 0; j < n; ++j) wi[j] = w[j].get_num() * (den / w[j].get_den());
    Integer g = content(wi);
    if (g > 1)
        for (auto& x : wi) x /= g;
    for (const auto& x : wi)
        if (x <= 0) throw Error("positive weight witness is not positive");
    return wi;
}

}  // namespace multihom
