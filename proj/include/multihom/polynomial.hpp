#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "multihom/monomial.hpp"
#include "multihom/rational.hpp"

namespace multihom {

// Sparse multivariate polynomial over Q. Terms are kept sorted in the
// canonical (graded lexicographic) order with no zero coefficients, so
// iteration order, printing and equality are deterministic.
class Polynomial {
  public:
    using Term = std::pair<Monomial, Rational>;

    explicit Polynomial(int nvars = 0) : nvars_(check_nvars(nvars)) {}

    static Polynomial zero(int nvars) { return Polynomial(nvars); }

    static Polynomial constant(int nvars, const Rational& c) {
        Polynomial p(nvars);
        if (c != 0) p.terms_.emplace_back(Monomial::one(), c);
        return p;
    }

    static Polynomial variable(int nvars, int i) {
        if (i < 0 || i >= nvars) throw DimensionError("variable index out of range");
        Polynomial p(nvars);
        p.terms_.emplace_back(Monomial::variable(i), Rational(1));
        return p;
    }

    static Polynomial monomial(int nvars, const Monomial& m, const Rational& c) {
        Polynomial p(nvars);
        if (c != 0) p.terms_.emplace_back(m, c);
        return p;
    }

    static Polynomial from_terms(int nvars, std::vector<Term> terms) {
        Polynomial p(nvars);
        std::sort(terms.begin(), terms.end(),
                  [](const Term& a, const Term& b) { return a.first < b.first; });
        for (auto& [m, c] : terms) {
            if (c == 0) continue;
            if (!p.terms_.empty() && p.terms_.back().first == m)
                p.terms_.back().second += c;
            else
                p.terms_.emplace_back(m, c);
            if (!p.terms_.empty() && p.terms_.back().second == 0) p.terms_.pop_back();
        }
        return p;
    }

    int nvars() const { return nvars_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    // max total degree; -1 for the zero polynomial
    int degree() const { return terms_.empty() ? -1 : terms_.back().first.degree(); }
    // min total degree (order of vanishing); -1 for the zero polynomial
    int valuation() const { return terms_.empty() ? -1 : terms_.front().first.degree(); }

    Rational coeff(const Monomial& m) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                                   [](const Term& t, const Monomial& mm) { return t.first < mm; });
        if (it != terms_.end() && it->first == m) return it->second;
        return Rational(0);
    }

    Rational constant_term() const { return coeff(Monomial::one()); }

    Polynomial operator-() const {
        Polynomial r(*this);
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    Polynomial operator+(const Polynomial& o) const {
        check_same_nvars(o);
        Polynomial r(nvars_);
        r.terms_.reserve(terms_.size() + o.terms_.size());
        auto ia = terms_.begin(), ib = o.terms_.begin();
        while (ia != terms_.end() || ib != o.terms_.end()) {
            if (ib == o.terms_.end() || (ia != terms_.end() && ia->first < ib->first)) {
                r.terms_.push_back(*ia++);
            } else if (ia == terms_.end() || ib->first < ia->first) {
                r.terms_.push_back(*ib++);
            } else {
                Rational c = ia->second + ib->second;
                if (c != 0) r.terms_.emplace_back(ia->first, c);
                ++ia, ++ib;
            }
        }
        return r;
    }

    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

    Polynomial operator*(const Polynomial& o) const { return multiply(o); }

    Polynomial operator*(const Rational& c) const {
        Polynomial r(nvars_);
        if (c == 0) return r;
        r.terms_ = terms_;
        for (auto& [m, v] : r.terms_) v *= c;
        return r;
    }

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    // Product with all result terms of total degree > cap dropped.
    // Integer-cleared accumulation: both operands are scaled to integer
    // coefficients once so the inner loop is pure mpz arithmetic.
    Polynomial multiply(const Polynomial& o, int degree_cap = std::numeric_limits<int>::max()) const {
        check_same_nvars(o);
        Polynomial r(nvars_);
        if (terms_.empty() || o.terms_.empty()) return r;

        Integer da = 1, db = 1;
        for (const auto& [m, c] : terms_) da = lcm(da, c.get_den());
        for (const auto& [m, c] : o.terms_) db = lcm(db, c.get_den());

        std::vector<Integer> na(terms_.size()), nb(o.terms_.size());
        for (size_t i = 0; i < terms_.size(); ++i)
            na[i] = terms_[i].second.get_num() * (da / terms_[i].second.get_den());
        for (size_t j = 0; j < o.terms_.size(); ++j)
            nb[j] = o.terms_[j].second.get_num() * (db / o.terms_[j].second.get_den());

        std::unordered_map<std::uint64_t, Integer> acc;
        acc.reserve(terms_.size() * 2 + o.terms_.size() * 2);
        Integer tmp;
        for (size_t i = 0; i < terms_.size(); ++i) {
            const Monomial& ma = terms_[i].first;
            int budget = degree_cap - ma.degree();
            for (size_t j = 0; j < o.terms_.size(); ++j) {
                const Monomial& mb = o.terms_[j].first;
                if (mb.degree() > budget) break;  // o sorted by ascending degree
                Monomial m = ma * mb;
                mpz_mul(tmp.get_mpz_t(), na[i].get_mpz_t(), nb[j].get_mpz_t());
                auto [it, fresh] = acc.emplace(m.packed(), tmp);
                if (!fresh) it->second += tmp;
            }
        }

        Integer den = da * db;
        std::vector<Term> terms;
        terms.reserve(acc.size());
        for (auto& [packed, num] : acc) {
            if (num == 0) continue;
            terms.emplace_back(Monomial::from_packed(packed), make_rational(num, den));
        }
        return from_terms(nvars_, std::move(terms));
    }

    Polynomial truncated(int max_degree) const {
        Polynomial r(nvars_);
        for (const auto& t : terms_) {
            if (t.first.degree() > max_degree) break;
            r.terms_.push_back(t);
        }
        return r;
    }

    // terms of total degree exactly d
    Polynomial graded_part(int d) const {
        Polynomial r(nvars_);
        for (const auto& t : terms_) {
            if (t.first.degree() > d) break;
            if (t.first.degree() == d) r.terms_.push_back(t);
        }
        return r;
    }

    Polynomial partial_derivative(int i) const {
        if (i < 0 || i >= nvars_) throw DimensionError("derivative index out of range");
        std::vector<Term> terms;
        terms.reserve(terms_.size());
        for (const auto& [m, c] : terms_) {
            int e = m.exponent(i);
            if (e == 0) continue;
            terms.emplace_back(m.divide_variable(i), c * e);
        }
        return from_terms(nvars_, std::move(terms));
    }

    // Splits p into weighted-homogeneous parts: key d collects exactly the
    // terms with <w, alpha> = d.
    std::map<long, Polynomial> weighted_components(const std::vector<Integer>& w) const {
        if (static_cast<int>(w.size()) != nvars_)
            throw DimensionError("weight vector length != nvars");
        std::map<long, Polynomial> parts;
        for (const auto& [m, c] : terms_) {
            Integer d = 0;
            for (int i = 0; i < nvars_; ++i) d += w[i] * m.exponent(i);
            long key = to_long(d);
            auto [it, fresh] = parts.try_emplace(key, Polynomial(nvars_));
            it->second.terms_.emplace_back(m, c);
        }
        return parts;
    }

    long weighted_degree_of(const Monomial& m, const std::vector<Integer>& w) const {
        Integer d = 0;
        for (int i = 0; i < nvars_; ++i) d += w[i] * m.exponent(i);
        return to_long(d);
    }

    Rational evaluate(const std::vector<Rational>& x) const {
        if (static_cast<int>(x.size()) != nvars_) throw DimensionError("point dimension != nvars");
        Rational acc = 0;
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (int i = 0; i < nvars_; ++i)
                for (int e = 0; e < m.exponent(i); ++e) t *= x[i];
            acc += t;
        }
        return acc;
    }

    // Integer-coefficient multiple with coprime coefficients and positive
    // lowest term; the zero polynomial stays zero.
    Polynomial scaled_primitive() const {
        if (terms_.empty()) return *this;
        Integer d = 1;
        for (const auto& [m, c] : terms_) d = lcm(d, c.get_den());
        std::vector<Integer> nums;
        nums.reserve(terms_.size());
        for (const auto& [m, c] : terms_) nums.push_back(c.get_num() * (d / c.get_den()));
        Integer g = content(nums);
        Polynomial r(nvars_);
        r.terms_.reserve(terms_.size());
        bool flip = nums.front() < 0;
        for (size_t i = 0; i < nums.size(); ++i) {
            Integer v = nums[i] / g;
            if (flip) v = -v;
            r.terms_.emplace_back(terms_[i].first, Rational(v));
        }
        return r;
    }

    std::string to_string(const std::vector<std::string>& names) const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            Rational a = c;
            if (s.empty()) {
                if (a < 0) {
                    s += "-";
                    a = -a;
                }
            } else {
                if (a < 0) {
                    s += " - ";
                    a = -a;
                } else {
                    s += " + ";
                }
            }
            std::string mono = m.to_string(names);
            if (mono == "1")
                s += a.get_str();
            else if (a == 1)
                s += mono;
            else
                s += a.get_str() + "*" + mono;
        }
        return s;
    }

  private:
    static int check_nvars(int n) {
        if (n < 0 || n > kMaxVars) throw DimensionError("variable count out of range (max 6)");
        return n;
    }

    void check_same_nvars(const Polynomial& o) const {
        if (nvars_ != o.nvars_) throw DimensionError("polynomials over different variable counts");
    }

    int nvars_;
    std::vector<Term> terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

// default variable names: x,y,z for up to three variables, else x1..xN
inline std::vector<std::string> default_variable_names(int nvars) {
    std::vector<std::string> names;
    if (nvars <= 3) {
        const char* xyz[] = {"x", "y", "z"};
        for (int i = 0; i < nvars; ++i) names.push_back(xyz[i]);
    } else {
        for (int i = 0; i < nvars; ++i) names.push_back("x" + std::to_string(i + 1));
    }
    return names;
}

}  // namespace multihom
