#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "multihom/torus.hpp"

namespace multihom {

// ---- generic weight combination ----------------------------------------
//
// One integer vector w* in the row span of W whose resonances, on all
// exponent differences relevant at truncation order N, are exactly the
// joint resonances: <w*, a-b> = 0 implies W(a-b) = 0 for monomials of
// degree <= N+1 (function monomials and field monomials alike, since a
// field monomial weight is such a difference).

inline IVec generic_combination(const TorusData& t, int order) {
    if (t.rank < 1) throw InvalidStateError("generic combination needs rank >= 1");
    int s = t.rank, n = t.nvars;

    // distinct values of W*alpha over |alpha| <= order+1
    std::vector<IVec> values;
    {
        std::map<IVec, bool> seen;
        for (int d = 0; d <= order + 1; ++d)
            for (const Monomial& mono : monomials_of_degree(n, d)) {
                IVec y(s, Integer(0));
                for (int i = 0; i < s; ++i)
                    for (int v = 0; v < n; ++v)
                        y[i] += t.weights[i][v] * mono.exponent(v);
                if (seen.emplace(y, true).second) values.push_back(y);
            }
    }
    // nonzero pairwise differences, deduped up to sign
    std::vector<IVec> diffs;
    {
        std::map<IVec, bool> seen;
        for (size_t a = 0; a < values.size(); ++a)
            for (size_t b = 0; b < values.size(); ++b) {
                if (a == b) continue;
                IVec y(s);
                bool zero = true, flip = false;
                for (int i = 0; i < s; ++i) {
                    y[i] = values[a][i] - values[b][i];
                    if (y[i] != 0 && zero) {
                        zero = false;
                        flip = y[i] < 0;
                    }
                }
                if (zero) continue;
                if (flip)
                    for (auto& x : y) x = -x;
                if (seen.emplace(y, true).second) diffs.push_back(y);
            }
    }

    // smallest-box search, positive-leaning order within each coordinate
    auto value_at = [](int pos) {  // 0, 1, -1, 2, -2, ...
        return pos == 0 ? 0L : (pos % 2 ? (pos + 1) / 2 : -(pos / 2));
    };
    const long kMaxPos = 2001;  // coefficients up to +-1000
    std::vector<int> idx(s, 0);
    while (true) {
        std::vector<Integer> c(s);
        for (int i = 0; i < s; ++i) c[i] = value_at(idx[i]);
        bool nonzero = false;
        for (const auto& x : c)
            if (x != 0) nonzero = true;
        if (nonzero) {
            bool ok = true;
            for (const auto& y : diffs) {
                Integer dot = 0;
                for (int i = 0; i < s; ++i) dot += c[i] * y[i];
                if (dot == 0) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                IVec w(n, Integer(0));
                for (int j = 0; j < n; ++j)
                    for (int i = 0; i < s; ++i) w[j] += c[i] * t.weights[i][j];
                return w;
            }
        }
        // odometer over the value order, lexicographic in position space
        int pos = s - 1;
        while (pos >= 0 && idx[pos] == kMaxPos - 1) idx[pos--] = 0;
        if (pos < 0) throw Error("generic combination search exhausted");
        ++idx[pos];
    }
}

// ---- Poincare-Dulac normalization ---------------------------------------

struct PoincareDulacResult {
    CoordinateChangeJet change;      // tangent to the identity
    VectorFieldJet normalized;       // S + nu with nu resonant
    VectorFieldJet semisimple_part;  // the diagonal field S
};

namespace detail {

// s0-ad-weight of the monomial field x^beta d_j
inline Rational ad_weight(const std::vector<Rational>& s0, const Monomial& beta, int j) {
    Rational w = -s0[j];
    for (size_t v = 0; v < s0.size(); ++v) w += s0[v] * beta.exponent(static_cast<int>(v));
    return w;
}

struct GradedSplit {
    VectorFieldJet resonant;
    VectorFieldJet correction;  // nonresonant part divided by its ad-weight
    bool has_nonresonant = false;
};

inline GradedSplit split_graded(const VectorFieldJet& part, const std::vector<Rational>& s0,
                                int order) {
    int n = part.nvars();
    std::vector<Polynomial> res(n, Polynomial(n)), corr(n, Polynomial(n));
    bool any = false;
    for (int j = 0; j < n; ++j)
        for (const auto& [beta, c] : part.component(j).terms()) {
            Rational mu = ad_weight(s0, beta, j);
            if (mu == 0) {
                res[j] = res[j] + Polynomial::monomial(n, beta, c);
            } else {
                corr[j] = corr[j] + Polynomial::monomial(n, beta, c / mu);
                any = true;
            }
        }
    return {VectorFieldJet(std::move(res), order), VectorFieldJet(std::move(corr), order), any};
}

}  // namespace detail

// Brings delta to S + nu form by a tangent-to-identity change: S is the
// diagonal semisimple part of the linear term (required to lie in the span
// of the torus weights), and every monomial of nu has S-ad-weight zero.
// Corrections are time-1 flows, so the field transports by exp(ad_xi) and
// the accumulated change is exact at the truncation order.
inline PoincareDulacResult poincare_dulac(const VectorFieldJet& delta, const TorusData& t,
                                          int order) {
    int n = delta.nvars();
    if (!delta.in_delta())
        throw InvalidStateError("Poincare-Dulac input must vanish at the origin");
    QMatrix a = delta.linear_part();
    QMatrix s0_mat = jordan_chevalley(a).semisimple;
    std::vector<Rational> s0(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i != j && s0_mat(i, j) != 0)
                throw InvalidStateError(
                    "semisimple part of the linear term is not diagonal in these coordinates");
            if (i == j) s0[i] = s0_mat(i, i);
        }
    {
        // diagonal must lie in the Q-span of the torus weight rows
        std::vector<std::vector<Rational>> rows;
        for (int i = 0; i < t.rank; ++i) rows.push_back(t.weight_row_rational(i));
        if (!in_span(rows, s0))
            throw InvalidStateError("semisimple part is outside the torus weight span");
    }

    VectorFieldJet cur = delta.truncated_to(order);
    CoordinateChangeJet change = CoordinateChangeJet::identity(n, order);
    for (int e = 1; e <= order; ++e) {
        for (int guard = 0;; ++guard) {
            if (guard > 200) throw Error("Poincare-Dulac step did not terminate");
            auto split = detail::split_graded(cur.graded_part(e), s0, order);
            if (!split.has_nonresonant) break;
            VectorFieldJet xi = split.correction;
            cur = exp_ad_transport(cur, xi);
            change = compose_changes(change, flow_of(xi, order));
        }
    }

    VectorFieldJet s_field = VectorFieldJet::diagonal_field(s0, order);
    // every graded part of nu = cur - S must now be resonant
    VectorFieldJet nu = cur - s_field;
    for (int j = 0; j < n; ++j)
        for (const auto& [beta, c] : nu.component(j).terms())
            if (detail::ad_weight(s0, beta, j) != 0)
                throw Error("Poincare-Dulac output has a nonresonant term");
    return {std::move(change), std::move(cur), std::move(s_field)};
}

// ---- equivariant generator ----------------------------------------------

struct EquivariantPresentation {
    CoordinateChangeJet change;        // tangent to the identity
    Jet unit;                          // u with u(0) != 0
    Jet normalized;                    // g = u * (f o change), weight-pure
    std::vector<Integer> multidegrees; // lambda in Z^s
    IVec generic_weight;               // the w* used for the filtration
    VectorFieldJet normalized_field;   // S + nu from the Poincare-Dulac step
    VectorFieldJet semisimple_field;
    int lift_order = 0;
};

namespace detail {

// solve c * base == target mod m^{order+1} for a jet c of degree <= order
inline std::optional<Jet> jet_division(const Jet& target, const Jet& base, int order) {
    int n = base.nvars();
    std::vector<Monomial> cols = monomials_up_to_degree(n, order);
    std::map<std::uint64_t, int> col_of;
    for (size_t c = 0; c < cols.size(); ++c) col_of[cols[c].packed()] = static_cast<int>(c);
    std::vector<Monomial> rows = cols;  // equations indexed the same way

    Polynomial base_int = base.poly().scaled_primitive();
    // scale: base = s * base_int with rational s; c*base = target becomes
    // (c*s) * base_int = target; solve for c' = c*s then divide
    Rational s = 0;
    if (!base.poly().is_zero())
        s = base.poly().terms().front().second / base_int.terms().front().second;
    if (s == 0) return std::nullopt;

    SparseEliminator se(static_cast<int>(cols.size()));
    std::vector<std::vector<std::pair<int, Rational>>> mat_rows(rows.size());
    for (size_t c = 0; c < cols.size(); ++c)
        for (const auto& [tau, v] : base_int.terms()) {
            Monomial gamma = cols[c] * tau;
            if (gamma.degree() > order) continue;
            mat_rows[col_of.at(gamma.packed())].emplace_back(static_cast<int>(c), Rational(v));
        }
    for (size_t r = 0; r < rows.size(); ++r) {
        Rational rhs = target.poly().coeff(rows[r]);
        auto& row = mat_rows[r];
        if (rhs != 0) row.emplace_back(static_cast<int>(cols.size()), rhs);
        if (!row.empty()) se.add_row_rational(row);
    }
    se.eliminate();
    if (!se.consistent()) return std::nullopt;
    auto x = se.particular_solution();
    std::vector<Polynomial::Term> terms;
    for (size_t c = 0; c < cols.size(); ++c)
        if (x[c] != 0) terms.emplace_back(cols[c], x[c] / s);
    return Jet(Polynomial::from_terms(n, std::move(terms)), order);
}

inline std::string dump_weight_components(const std::map<long, Polynomial>& parts,
                                          const std::vector<std::string>& names) {
    std::ostringstream os;
    for (const auto& [mu, p] : parts) os << "  weight " << mu << ": " << p.to_string(names) << "\n";
    return os.str();
}

}  // namespace detail

// Produces g = u * (f o phi) whose support is concentrated in one joint
// weight lambda. The route: lift the generic combination w* to a
// logarithmic field with linear part diag(w*), Poincare-Dulac-normalize it
// (making its tail resonant), and transport f through the same change.
// The normalized field then acts on jets with semisimple part the diagonal
// w*-grading, so the ideal (f o phi) is weight-graded modulo truncation
// and exactly one weight component divides it with a unit quotient; that
// component is g and the quotient is u. An input for which no unit
// component exists contradicts the existence theorem and aborts with a
// diagnostic dump.
inline EquivariantPresentation make_equivariant(const Jet& f, const TorusData& t, int order) {
    int n = f.nvars();
    if (t.rank < 1) throw InvalidStateError("make_equivariant needs a torus of rank >= 1");
    if (f.is_zero() || f.constant_term() != 0)
        throw InvalidGermError("make_equivariant needs 0 != f in the maximal ideal");

    IVec wstar = generic_combination(t, order);
    std::vector<Rational> wstar_q(n);
    for (int j = 0; j < n; ++j) wstar_q[j] = Rational(wstar[j]);

    // lift w* to a logarithmic field with linear part exactly diag(w*)
    int lift_order = std::max(order, f.poly().degree());
    QMatrix target(n, n);
    for (int j = 0; j < n; ++j) target(j, j) = wstar_q[j];
    auto lifted = lift_with_linear_part(f.poly(), lift_order, target);
    if (!lifted)
        throw ObstructionError(
            "no logarithmic field with linear part diag(w*) at the working order",
            "w* = diag of the generic combination; the stabilized torus data disagrees with "
            "the jet system at order " +
                std::to_string(lift_order));

    PoincareDulacResult pd = poincare_dulac(lifted->first.truncated_to(order), t, order);

    Jet f2 = compose(f.truncated_to(order), pd.change);

    // split into w*-weight components, lowest filtration weight first
    std::vector<Integer> wstar_z(wstar.begin(), wstar.end());
    std::map<long, Polynomial> parts = f2.poly().weighted_components(wstar_z);

    for (const auto& [mu, part] : parts) {
        auto c = detail::jet_division(Jet(part, order), f2, order);
        if (!c || c->constant_term() == 0) continue;
        // found the unit component: normalize the leading coefficient to 1
        Jet g(part, order);
        Rational lead = g.poly().terms().front().second;
        g = g * (1 / lead);
        Jet u = *c * (1 / lead);

        EquivariantPresentation out{pd.change, u, g, {}, wstar, pd.normalized,
                                    pd.semisimple_part, lift_order};
        const Monomial& alpha0 = g.poly().terms().front().first;
        for (int i = 0; i < t.rank; ++i) {
            Integer l = 0;
            for (int j = 0; j < n; ++j) l += t.weights[i][j] * alpha0.exponent(j);
            out.multidegrees.push_back(l);
        }
        // exhaustive verification of the claimed invariants
        for (const auto& [beta, cc] : g.poly().terms())
            for (int i = 0; i < t.rank; ++i) {
                Integer l = 0;
                for (int j = 0; j < n; ++j) l += t.weights[i][j] * beta.exponent(j);
                if (l != out.multidegrees[i])
                    throw ObstructionError("normalized equation is not weight-pure",
                                           g.poly().to_string(default_variable_names(n)));
            }
        if (u * f2 != g)
            throw ObstructionError("unit reconstruction failed",
                                   "u*(f o phi) differs from g at the truncation order");
        if (!pd.change.tangent_to_identity())
            throw ObstructionError("normalizing change is not tangent to the identity", "");
        return out;
    }

    throw ObstructionError(
        "no weight component of f o phi divides it with a unit quotient",
        "weight components:\n" +
            detail::dump_weight_components(parts, default_variable_names(n)));
}

// Verifies that each supplied factor is concentrated in a single joint
// weight and that the factors multiply to the normalized equation up to a
// unit jet; returns the per-factor multidegrees.
inline std::vector<std::vector<Integer>> factor_multidegrees(const Jet& g,
                                                             const std::vector<Polynomial>& factors,
                                                             const TorusData& t) {
    int n = g.nvars();
    if (factors.empty()) return {};
    // duplicate factors mean a non-reduced product; report the culprit
    for (size_t i = 0; i < factors.size(); ++i)
        for (size_t j = i + 1; j < factors.size(); ++j) {
            if (factors[i].term_count() != factors[j].term_count()) continue;
            // proportional iff cross-coefficients agree
            const auto &a = factors[i].terms(), &b = factors[j].terms();
            bool prop = true;
            Rational ratio = 0;
            for (size_t k = 0; k < a.size() && prop; ++k) {
                if (a[k].first != b[k].first) prop = false;
                else if (ratio == 0) ratio = a[k].second / b[k].second;
                else if (a[k].second != ratio * b[k].second) prop = false;
            }
            if (prop)
                throw InvalidGermError(
                    "repeated factor '" + factors[i].to_string(default_variable_names(n)) +
                    "': the normalized equation must be reduced");
        }

    Polynomial prod = Polynomial::constant(n, 1);
    for (const auto& fct : factors) prod = prod.multiply(fct, g.order());
    auto v = detail::jet_division(g, Jet(prod, g.order()), g.order());
    if (!v || v->constant_term() == 0)
        throw FactorizationError("product of the factors does not match the normalized equation "
                                 "up to a unit");

    std::vector<std::vector<Integer>> out;
    std::vector<Integer> total(t.rank, Integer(0));
    for (const auto& fct : factors) {
        if (fct.is_zero()) throw FactorizationError("zero factor");
        std::vector<Integer> lambda(t.rank, Integer(0));
        bool first = true;
        for (const auto& [beta, c] : fct.terms()) {
            std::vector<Integer> l(t.rank, Integer(0));
            for (int i = 0; i < t.rank; ++i)
                for (int j = 0; j < n; ++j) l[i] += t.weights[i][j] * beta.exponent(j);
            if (first) {
                lambda = l;
                first = false;
            } else if (l != lambda) {
                throw NonEquivariantFactorError(
                    "factor '" + fct.to_string(default_variable_names(n)) +
                    "' is spread over several joint weights");
            }
        }
        for (int i = 0; i < t.rank; ++i) total[i] += lambda[i];
        out.push_back(std::move(lambda));
    }
    // sum rule: the unit quotient has weight zero
    std::vector<Integer> lg(t.rank, Integer(0));
    if (!g.poly().is_zero()) {
        const Monomial& alpha0 = g.poly().terms().front().first;
        for (int i = 0; i < t.rank; ++i)
            for (int j = 0; j < n; ++j) lg[i] += t.weights[i][j] * alpha0.exponent(j);
    }
    if (total != lg)
        throw FactorizationError("factor multidegrees do not sum to the multidegree of g");
    return out;
}

}  // namespace multihom
