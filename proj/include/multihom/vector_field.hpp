#pragma once

#include <string>
#include <vector>

#include "multihom/qmatrix.hpp"
#include "multihom/substitution.hpp"

namespace multihom {

// delta = sum a_i(x) d/dx_i with the coefficients a_i known modulo
// m^{order+1}. Binary operations use conservative order bookkeeping
// (minimum of the operand orders), which never overstates precision.
class VectorFieldJet {
  public:
    VectorFieldJet(std::vector<Polynomial> components, int order)
        : order_(order) {
        if (components.empty()) throw DimensionError("empty vector field");
        nvars_ = static_cast<int>(components.size());
        comp_.reserve(components.size());
        for (auto& c : components) {
            if (c.nvars() != nvars_)
                throw DimensionError("vector field component variable mismatch");
            comp_.push_back(c.truncated(order + 1));  // coefficient degrees <= order+1
        }
    }

    static VectorFieldJet zero(int nvars, int order) {
        return VectorFieldJet(std::vector<Polynomial>(nvars, Polynomial(nvars)), order);
    }

    // linear field with matrix A: a_j = sum_i A(i,j) x_i
    static VectorFieldJet from_linear_matrix(const QMatrix& a, int order) {
        int n = a.rows();
        std::vector<Polynomial> comp(n, Polynomial(n));
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                comp[j] = comp[j] + Polynomial::variable(n, i) * a(i, j);
        return VectorFieldJet(std::move(comp), order);
    }

    // diagonal field sum_j w_j x_j d_j
    static VectorFieldJet diagonal_field(const std::vector<Rational>& w, int order) {
        int n = static_cast<int>(w.size());
        std::vector<Polynomial> comp;
        for (int j = 0; j < n; ++j)
            comp.push_back(Polynomial::variable(n, j) * w[j]);
        return VectorFieldJet(std::move(comp), order);
    }

    int nvars() const { return nvars_; }
    int order() const { return order_; }
    const Polynomial& component(int i) const { return comp_[i]; }
    const std::vector<Polynomial>& components() const { return comp_; }

    bool is_zero() const {
        for (const auto& c : comp_)
            if (!c.is_zero()) return false;
        return true;
    }

    // coefficients in the maximal ideal: the field vanishes at the origin
    bool in_delta() const {
        for (const auto& c : comp_)
            if (c.constant_term() != 0) return false;
        return true;
    }

    VectorFieldJet truncated_to(int order) const {
        return VectorFieldJet(comp_, std::min(order, order_));
    }

    VectorFieldJet operator+(const VectorFieldJet& o) const {
        check_compatible(o);
        std::vector<Polynomial> comp;
        for (int i = 0; i < nvars_; ++i) comp.push_back(comp_[i] + o.comp_[i]);
        return VectorFieldJet(std::move(comp), std::min(order_, o.order_));
    }

    VectorFieldJet operator-(const VectorFieldJet& o) const {
        check_compatible(o);
        std::vector<Polynomial> comp;
        for (int i = 0; i < nvars_; ++i) comp.push_back(comp_[i] - o.comp_[i]);
        return VectorFieldJet(std::move(comp), std::min(order_, o.order_));
    }

    VectorFieldJet operator*(const Rational& c) const {
        std::vector<Polynomial> comp;
        for (int i = 0; i < nvars_; ++i) comp.push_back(comp_[i] * c);
        return VectorFieldJet(std::move(comp), order_);
    }

    bool operator==(const VectorFieldJet& o) const {
        return order_ == o.order_ && comp_ == o.comp_;
    }
    bool operator!=(const VectorFieldJet& o) const { return !(*this == o); }

    // delta(f) = sum a_i d_i f
    Jet apply(const Jet& f) const {
        if (f.nvars() != nvars_) throw DimensionError("apply: variable count mismatch");
        int order = std::min(order_, f.order());
        Polynomial acc(nvars_);
        for (int i = 0; i < nvars_; ++i)
            acc = acc + comp_[i].multiply(f.poly().partial_derivative(i), order);
        return Jet(acc, order);
    }

    // exact polynomial action, no truncation
    Polynomial apply_poly(const Polynomial& f) const {
        if (f.nvars() != nvars_) throw DimensionError("apply: variable count mismatch");
        Polynomial acc(nvars_);
        for (int i = 0; i < nvars_; ++i) acc = acc + comp_[i] * f.partial_derivative(i);
        return acc;
    }

    // [delta, eps], component j = delta(eps_j) - eps(delta_j); for fields
    // in Delta the result is valid at the common order
    VectorFieldJet bracket(const VectorFieldJet& o) const {
        check_compatible(o);
        int order = std::min(order_, o.order_);
        std::vector<Polynomial> comp;
        for (int j = 0; j < nvars_; ++j) {
            Polynomial pj(nvars_);
            for (int i = 0; i < nvars_; ++i)
                pj = pj + comp_[i].multiply(o.comp_[j].partial_derivative(i), order + 1) -
                     o.comp_[i].multiply(comp_[j].partial_derivative(i), order + 1);
            comp.push_back(std::move(pj));
        }
        return VectorFieldJet(std::move(comp), order);
    }

    // graded part delta_d: coefficients homogeneous of total degree d+1
    VectorFieldJet graded_part(int d) const {
        std::vector<Polynomial> comp;
        for (int i = 0; i < nvars_; ++i) comp.push_back(comp_[i].graded_part(d + 1));
        return VectorFieldJet(std::move(comp), order_);
    }

    int max_graded_degree() const {
        int deg = -1;
        for (const auto& c : comp_) deg = std::max(deg, c.degree());
        return deg - 1;
    }

    // matrix A of the degree-0 part: A(i,j) = coefficient of x_i in a_j
    QMatrix linear_part() const {
        QMatrix a(nvars_, nvars_);
        for (int j = 0; j < nvars_; ++j)
            for (int i = 0; i < nvars_; ++i)
                a(i, j) = comp_[j].coeff(Monomial::variable(i));
        return a;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        std::string s;
        for (int i = 0; i < nvars_; ++i) {
            if (comp_[i].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + comp_[i].to_string(names) + ")*d/d" + names[i];
        }
        return s.empty() ? "0" : s;
    }

  private:
    void check_compatible(const VectorFieldJet& o) const {
        if (nvars_ != o.nvars_) throw DimensionError("vector field variable count mismatch");
    }

    std::vector<Polynomial> comp_;
    int nvars_;
    int order_;
};

inline VectorFieldJet operator*(const Rational& c, const VectorFieldJet& v) { return v * c; }

// Canonical flat coordinates of a field with coefficient degrees bounded
// by max_deg: for each degree 1..max_deg, each monomial in canonical
// order, each component. Shared with the jet-system tail layout so that
// solver output and field coordinates agree bit for bit.
inline std::vector<Rational> field_coordinates(const VectorFieldJet& v, int max_deg) {
    std::vector<Rational> coords;
    for (int d = 1; d <= max_deg; ++d)
        for (const Monomial& m : monomials_of_degree(v.nvars(), d))
            for (int i = 0; i < v.nvars(); ++i)
                coords.push_back(v.component(i).coeff(m));
    return coords;
}

inline VectorFieldJet field_from_coordinates(int nvars, int max_deg,
                                             const std::vector<Rational>& coords, int order) {
    std::vector<std::vector<Polynomial::Term>> terms(nvars);
    size_t idx = 0;
    for (int d = 1; d <= max_deg; ++d)
        for (const Monomial& m : monomials_of_degree(nvars, d))
            for (int i = 0; i < nvars; ++i) {
                if (coords[idx] != 0) terms[i].emplace_back(m, coords[idx]);
                ++idx;
            }
    if (idx != coords.size()) throw DimensionError("coordinate vector length mismatch");
    std::vector<Polynomial> comp;
    for (int i = 0; i < nvars; ++i)
        comp.push_back(Polynomial::from_terms(nvars, std::move(terms[i])));
    return VectorFieldJet(std::move(comp), order);
}

// Pullback of delta under phi: the field eps with eps(g o phi) = (delta g) o phi.
// Componentwise eps_j = (delta phi_inv_j) o phi.
inline VectorFieldJet transport_pullback(const VectorFieldJet& delta,
                                         const CoordinateChangeJet& phi,
                                         const CoordinateChangeJet& phi_inv) {
    int order = std::min(delta.order(), std::min(phi.order(), phi_inv.order()));
    std::vector<Polynomial> comp;
    for (int j = 0; j < delta.nvars(); ++j) {
        Jet dj = delta.apply(Jet(phi_inv.component(j).poly(), order + 1));
        comp.push_back(compose(Jet(dj.poly(), order + 1), phi).poly());
    }
    return VectorFieldJet(std::move(comp), order);
}

// Time-1 flow of a field whose coefficients vanish to order >= 2: the
// exponential series terminates at the truncation order.
inline CoordinateChangeJet flow_of(const VectorFieldJet& xi, int order) {
    int n = xi.nvars();
    for (int i = 0; i < n; ++i)
        if (!xi.component(i).is_zero() && xi.component(i).valuation() < 2)
            throw InvalidChangeError("flow requires coefficients of order >= 2");
    std::vector<Jet> comp;
    for (int j = 0; j < n; ++j) {
        Jet acc = Jet::variable(n, j, order);
        Jet term = acc;
        Rational fact = 1;
        for (int k = 1; k <= order; ++k) {
            term = xi.apply(Jet(term.poly(), order));
            if (term.is_zero()) break;
            fact *= k;
            acc = acc + term * (1 / fact);
        }
        comp.push_back(std::move(acc));
    }
    return CoordinateChangeJet(std::move(comp), order);
}

// exp(ad_xi)(delta) = delta + [xi,delta] + [xi,[xi,delta]]/2! + ...,
// the pullback of delta under the time-1 flow of xi.
inline VectorFieldJet exp_ad_transport(const VectorFieldJet& delta, const VectorFieldJet& xi) {
    VectorFieldJet acc = delta;
    VectorFieldJet term = delta;
    Rational fact = 1;
    for (int k = 1; k <= delta.order() + 1; ++k) {
        term = xi.bracket(term);
        if (term.is_zero()) break;
        fact *= k;
        acc = acc + term * (1 / fact);
    }
    return acc;
}

}  // namespace multihom
