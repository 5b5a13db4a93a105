#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "multihom/polynomial.hpp"

namespace multihom {

// A polynomial truncated at total degree N, representing a class modulo
// m^{N+1}. Binary operations truncate to the minimum of the two orders,
// so every stated congruence stays honest.
class Jet {
  public:
    Jet() : poly_(0), order_(0) {}

    Jet(Polynomial p, int order) : poly_(p.truncated(order)), order_(check_order(order)) {}

    static Jet zero(int nvars, int order) { return Jet(Polynomial::zero(nvars), order); }

    static Jet constant(int nvars, const Rational& c, int order) {
        return Jet(Polynomial::constant(nvars, c), order);
    }

    static Jet variable(int nvars, int i, int order) {
        return Jet(Polynomial::variable(nvars, i), order);
    }

    const Polynomial& poly() const { return poly_; }
    int order() const { return order_; }
    int nvars() const { return poly_.nvars(); }
    bool is_zero() const { return poly_.is_zero(); }
    Rational constant_term() const { return poly_.constant_term(); }

    Jet truncated_to(int order) const { return Jet(poly_, std::min(order, order_)); }

    Jet operator+(const Jet& o) const {
        return Jet(poly_ + o.poly_, std::min(order_, o.order_));
    }
    Jet operator-(const Jet& o) const {
        return Jet(poly_ - o.poly_, std::min(order_, o.order_));
    }
    Jet operator-() const { return Jet(-poly_, order_); }

    Jet operator*(const Jet& o) const {
        int n = std::min(order_, o.order_);
        return Jet(poly_.multiply(o.poly_, n), n);
    }

    Jet operator*(const Rational& c) const { return Jet(poly_ * c, order_); }

    bool operator==(const Jet& o) const { return order_ == o.order_ && poly_ == o.poly_; }
    bool operator!=(const Jet& o) const { return !(*this == o); }

    // Multiplicative inverse to the jet order, by Newton iteration.
    Jet invert_unit() const {
        Rational c = constant_term();
        if (c == 0) throw NotAUnitError("jet has zero constant term, cannot invert");
        Jet w = Jet::constant(nvars(), 1 / c, order_);
        Jet two = Jet::constant(nvars(), 2, order_);
        int prec = 0;
        while (prec < order_) {
            prec = std::min(2 * prec + 1, order_);
            Polynomial ww = w.poly_.multiply(two.poly_ - poly_.multiply(w.poly_, prec), prec);
            w = Jet(ww, order_);
        }
        return w;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        return poly_.to_string(names);
    }

  private:
    static int check_order(int n) {
        if (n < 0) throw Error("negative jet order");
        return n;
    }

    Polynomial poly_;
    int order_;
};

inline Jet operator*(const Rational& c, const Jet& j) { return j * c; }

}  // namespace multihom
