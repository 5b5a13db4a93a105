#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "multihom/errors.hpp"

namespace multihom {

// Hard caps from the CLI contract: at most 6 variables, truncation order
// at most 24. Exponents are stored packed in one 64-bit word, one byte
// per variable plus the total degree in the top byte, so monomial
// multiplication is a single integer addition and the graded-lex
// comparison is a single masked integer comparison.
inline constexpr int kMaxVars = 6;
inline constexpr int kMaxOrder = 24;

class Monomial {
  public:
    Monomial() : p_(0) {}

    static Monomial one() { return Monomial(); }

    static Monomial variable(int i) {
        Monomial m;
        m.p_ = (1ull << 56) | (1ull << shift(i));
        return m;
    }

    static Monomial from_packed(std::uint64_t p) {
        Monomial m;
        m.p_ = p;
        return m;
    }

    static Monomial from_exponents(const std::vector<int>& e) {
        if (e.size() > kMaxVars) throw DimensionError("too many variables (max 6)");
        Monomial m;
        std::uint64_t deg = 0;
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 0 || e[i] > 200) throw Error("exponent out of range");
            deg += static_cast<std::uint64_t>(e[i]);
            m.p_ |= static_cast<std::uint64_t>(e[i]) << shift(static_cast<int>(i));
        }
        if (deg > 200) throw Error("total degree out of range");
        m.p_ |= deg << 56;
        return m;
    }

    int degree() const { return static_cast<int>(p_ >> 56); }

    int exponent(int i) const { return static_cast<int>((p_ >> shift(i)) & 0xFFu); }

    std::vector<int> exponents(int nvars) const {
        std::vector<int> e(nvars);
        for (int i = 0; i < nvars; ++i) e[i] = exponent(i);
        return e;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial m;
        m.p_ = p_ + o.p_;
        return m;
    }

    bool divisible_by(const Monomial& o) const { return check_div(o); }

    Monomial operator/(const Monomial& o) const {
        if (!check_div(o)) throw Error("monomial division underflow");
        Monomial m;
        m.p_ = p_ - o.p_;
        return m;
    }

    // true if this / x_i exists
    bool has_variable(int i) const { return exponent(i) > 0; }

    Monomial divide_variable(int i) const {
        Monomial m;
        m.p_ = p_ - ((1ull << 56) | (1ull << shift(i)));
        return m;
    }

    bool is_one() const { return p_ == 0; }

    bool operator==(const Monomial& o) const { return p_ == o.p_; }
    bool operator!=(const Monomial& o) const { return p_ != o.p_; }

    // Canonical term order: graded lexicographic with x1 > x2 > ... > x6.
    // Flipping the exponent bytes turns "larger x1-exponent first" into a
    // plain unsigned comparison.
    bool operator<(const Monomial& o) const { return cmp_key() < o.cmp_key(); }
    bool operator>(const Monomial& o) const { return o < *this; }

    std::uint64_t packed() const { return p_; }
    std::uint64_t cmp_key() const { return p_ ^ 0x00FFFFFFFFFFFF00ull; }

    std::string to_string(const std::vector<std::string>& names) const {
        std::string s;
        for (size_t i = 0; i < names.size(); ++i) {
            int e = exponent(static_cast<int>(i));
            if (e == 0) continue;
            if (!s.empty()) s += "*";
            s += names[i];
            if (e > 1) s += "^" + std::to_string(e);
        }
        return s.empty() ? "1" : s;
    }

  private:
    static constexpr int shift(int i) { return 8 * (6 - i); }

    bool check_div(const Monomial& o) const {
        if (degree() < o.degree()) return false;
        for (int i = 0; i < kMaxVars; ++i)
            if (exponent(i) < o.exponent(i)) return false;
        return true;
    }

    std::uint64_t p_;
};

// All monomials in `nvars` variables of total degree exactly d, in
// canonical (ascending) term order.
inline std::vector<Monomial> monomials_of_degree(int nvars, int d) {
    std::vector<Monomial> out;
    std::vector<int> e(nvars, 0);
    // descending leading exponents produce canonical (ascending) term order
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == nvars - 1) {
            e[pos] = rem;
            out.push_back(Monomial::from_exponents(e));
            return;
        }
        for (int v = rem; v >= 0; --v) {
            e[pos] = v;
            self(self, pos + 1, rem - v);
        }
        e[pos] = 0;
    };
    if (nvars == 0) {
        if (d == 0) out.push_back(Monomial::one());
        return out;
    }
    rec(rec, 0, d);
    return out;
}

inline std::vector<Monomial> monomials_up_to_degree(int nvars, int d) {
    std::vector<Monomial> out;
    for (int k = 0; k <= d; ++k) {
        auto v = monomials_of_degree(nvars, k);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

}  // namespace multihom
