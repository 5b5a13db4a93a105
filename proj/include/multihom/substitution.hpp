#pragma once

#include <map>
#include <vector>

#include "multihom/jet.hpp"
#include "multihom/qmatrix.hpp"

namespace multihom {

// n jets y_1(x),...,y_n(x) with zero constant terms and invertible linear
// part: an element of the jet automorphism group acting by substitution.
class CoordinateChangeJet {
  public:
    CoordinateChangeJet(std::vector<Jet> components, int order)
        : comp_(std::move(components)), order_(order) {
        if (comp_.empty()) throw InvalidChangeError("empty coordinate change");
        nvars_ = static_cast<int>(comp_.size());
        for (auto& c : comp_) {
            if (c.nvars() != nvars_)
                throw InvalidChangeError("component variable count mismatch");
            if (c.constant_term() != 0)
                throw InvalidChangeError("coordinate change component has a constant term");
            c = c.truncated_to(order_);
        }
        if (linear_part().det() == 0)
            throw InvalidChangeError("coordinate change has singular linear part");
    }

    static CoordinateChangeJet identity(int nvars, int order) {
        std::vector<Jet> comp;
        for (int i = 0; i < nvars; ++i) comp.push_back(Jet::variable(nvars, i, order));
        return CoordinateChangeJet(std::move(comp), order);
    }

    // substitution x |-> M x
    static CoordinateChangeJet linear(const QMatrix& m, int order) {
        if (!m.is_square()) throw InvalidChangeError("linear change must be square");
        int n = m.rows();
        std::vector<Jet> comp;
        for (int i = 0; i < n; ++i) {
            Polynomial p(n);
            for (int j = 0; j < n; ++j)
                p = p + Polynomial::variable(n, j) * m(i, j);
            comp.emplace_back(p, order);
        }
        return CoordinateChangeJet(std::move(comp), order);
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    const std::vector<Jet>& components() const { return comp_; }
    const Jet& component(int i) const { return comp_[i]; }

    // matrix L with y_i = sum_j L(i,j) x_j + higher order
    QMatrix linear_part() const {
        QMatrix l(nvars_, nvars_);
        for (int i = 0; i < nvars_; ++i)
            for (int j = 0; j < nvars_; ++j)
                l(i, j) = comp_[i].poly().coeff(Monomial::variable(j));
        return l;
    }

    bool tangent_to_identity() const { return linear_part() == QMatrix::identity(nvars_); }

    bool is_identity() const {
        for (int i = 0; i < nvars_; ++i)
            if (comp_[i].poly() != Polynomial::variable(nvars_, i)) return false;
        return true;
    }

    bool operator==(const CoordinateChangeJet& o) const {
        return order_ == o.order_ && comp_ == o.comp_;
    }

  private:
    std::vector<Jet> comp_;
    int nvars_;
    int order_;
};

namespace detail {

// Memoized monomial-power evaluation: value(alpha) = prod comp[i]^{alpha_i},
// built by peeling one variable at a time so every step multiplies by a
// single change component.
class SubstitutionCache {
  public:
    SubstitutionCache(const std::vector<Jet>& comp, int order)
        : comp_(comp), order_(order), nvars_(static_cast<int>(comp.size())) {
        cache_.emplace(Monomial::one().packed(),
                       Jet::constant(nvars_, 1, order_));
    }

    const Jet& get(const Monomial& m) {
        auto it = cache_.find(m.packed());
        if (it != cache_.end()) return it->second;
        int i = 0;
        while (!m.has_variable(i)) ++i;
        Jet v = get(m.divide_variable(i)) * comp_[i];
        auto [ins, fresh] = cache_.emplace(m.packed(), std::move(v));
        return ins->second;
    }

  private:
    const std::vector<Jet>& comp_;
    int order_;
    int nvars_;
    std::map<std::uint64_t, Jet> cache_;
};

}  // namespace detail

// f(y_1(x),...,y_n(x)), truncated at the minimum of the orders.
inline Jet compose(const Jet& f, const CoordinateChangeJet& change) {
    if (f.nvars() != change.nvars())
        throw DimensionError("compose: variable count mismatch");
    int order = std::min(f.order(), change.order());
    detail::SubstitutionCache cache(change.components(), order);
    Jet acc = Jet::zero(f.nvars(), order);
    for (const auto& [m, c] : f.poly().terms()) acc = acc + cache.get(m) * c;
    return acc;
}

// (a o b)(x) = a(b(x)) componentwise.
inline CoordinateChangeJet compose_changes(const CoordinateChangeJet& a,
                                           const CoordinateChangeJet& b) {
    if (a.nvars() != b.nvars()) throw DimensionError("compose_changes: variable count mismatch");
    int order = std::min(a.order(), b.order());
    detail::SubstitutionCache cache(b.components(), order);
    std::vector<Jet> comp;
    for (int i = 0; i < a.nvars(); ++i) {
        Jet acc = Jet::zero(a.nvars(), order);
        for (const auto& [m, c] : a.component(i).poly().terms()) acc = acc + cache.get(m) * c;
        comp.push_back(std::move(acc));
    }
    return CoordinateChangeJet(std::move(comp), order);
}

// Two-sided compositional inverse modulo the truncation order, built by
// killing the lowest-degree defect of psi o phi - id one degree at a time.
inline CoordinateChangeJet invert_change(const CoordinateChangeJet& phi) {
    int n = phi.nvars(), order = phi.order();
    QMatrix linv = phi.linear_part().inverse();
    CoordinateChangeJet psi = CoordinateChangeJet::linear(linv, order);
    CoordinateChangeJet linv_change = psi;
    for (int guard = 0; guard <= order + 2; ++guard) {
        CoordinateChangeJet err = compose_changes(psi, phi);
        int lowest = order + 1;
        std::vector<Polynomial> defect(n, Polynomial(n));
        for (int i = 0; i < n; ++i) {
            Polynomial d = err.component(i).poly() - Polynomial::variable(n, i);
            defect[i] = d;
            if (!d.is_zero()) lowest = std::min(lowest, d.valuation());
        }
        if (lowest > order) return psi;
        // subtract the degree-`lowest` defect, pushed back through linv
        std::vector<Jet> corr;
        for (int i = 0; i < n; ++i)
            corr.push_back(Jet(defect[i].graded_part(lowest), order));
        std::vector<Jet> comp;
        detail::SubstitutionCache cache(linv_change.components(), order);
        for (int i = 0; i < n; ++i) {
            Jet moved = Jet::zero(n, order);
            for (const auto& [m, c] : corr[i].poly().terms()) moved = moved + cache.get(m) * c;
            comp.push_back(psi.component(i) - moved);
        }
        psi = CoordinateChangeJet(std::move(comp), order);
    }
    throw Error("jet inversion did not terminate");
}

}  // namespace multihom
