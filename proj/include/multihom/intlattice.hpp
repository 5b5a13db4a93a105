#pragma once

#include <algorithm>
#include <vector>

#include "multihom/rational.hpp"

namespace multihom {

using IVec = std::vector<Integer>;
using IMat = std::vector<IVec>;

namespace detail {

inline int last_nonzero(const IVec& v) {
    for (int j = static_cast<int>(v.size()) - 1; j >= 0; --j)
        if (v[j] != 0) return j;
    return -1;
}

}  // namespace detail

// Row-style Hermite normal form with pivots at the rightmost nonzero
// entries (lower-triangular flavor): pivots positive, entries of the other
// rows at a pivot column reduced into [0, pivot), rows ordered by
// ascending pivot column, zero rows dropped. Unique for a given lattice,
// and it reproduces the weight-matrix conventions used in the reports.
inline IMat hermite_basis(IMat rows) {
    if (rows.empty()) return {};
    int n = static_cast<int>(rows[0].size());
    for (const auto& r : rows)
        if (static_cast<int>(r.size()) != n) throw DimensionError("ragged lattice generators");

    std::vector<IVec> active = std::move(rows);
    std::vector<std::pair<int, IVec>> pivots;  // (pivot column, row)

    for (int c = n - 1; c >= 0; --c) {
        // gcd-out column c among active rows whose last nonzero entry is c
        std::vector<IVec> here, rest;
        for (auto& r : active) {
            int lz = detail::last_nonzero(r);
            if (lz == c)
                here.push_back(std::move(r));
            else if (lz >= 0)
                rest.push_back(std::move(r));
        }
        active = std::move(rest);
        if (here.empty()) continue;
        // repeatedly subtract to reach a single row with gcd at column c
        while (here.size() > 1) {
            std::sort(here.begin(), here.end(), [c](const IVec& a, const IVec& b) {
                Integer x = a[c] < 0 ? Integer(-a[c]) : a[c];
                Integer y = b[c] < 0 ? Integer(-b[c]) : b[c];
                return x < y;
            });
            const IVec& base = here[0];
            std::vector<IVec> next{base};
            for (size_t i = 1; i < here.size(); ++i) {
                IVec r = std::move(here[i]);
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), r[c].get_mpz_t(), base[c].get_mpz_t());
                for (int j = 0; j <= c; ++j) r[j] -= q * base[j];
                int lz = detail::last_nonzero(r);
                if (lz == c)
                    next.push_back(std::move(r));
                else if (lz >= 0)
                    active.push_back(std::move(r));
            }
            here = std::move(next);
        }
        IVec piv = std::move(here[0]);
        if (piv[c] < 0)
            for (auto& x : piv) x = -x;
        pivots.emplace_back(c, std::move(piv));
    }

    // Reduce the other rows' entries at each pivot column into [0, pivot).
    // Largest pivot first: a reduction only disturbs strictly smaller
    // columns, so previously fixed pivot columns stay reduced.
    std::sort(pivots.begin(), pivots.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t ii = pivots.size(); ii-- > 0;) {
        size_t i = ii;
        int c = pivots[i].first;
        const IVec& prow = pivots[i].second;
        for (size_t j = 0; j < pivots.size(); ++j) {
            if (j == i) continue;
            IVec& r = pivots[j].second;
            if (r[c] == 0) continue;
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), r[c].get_mpz_t(), prow[c].get_mpz_t());
            if (q == 0) continue;
            for (int t = 0; t <= c; ++t) r[t] -= q * prow[t];
        }
    }

    IMat basis;
    for (auto& [c, r] : pivots) basis.push_back(std::move(r));
    return basis;
}

struct SmithNormalForm {
    IMat u, d, v;  // u*m*v = d, u and v unimodular, d diagonal with d_i | d_{i+1}
    IMat v_inv;
    int rank = 0;
};

namespace detail {

inline IMat identity_imat(int n) {
    IMat m(n, IVec(n, Integer(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

}  // namespace detail

// Textbook Smith normal form with transform tracking; fine at these sizes.
inline SmithNormalForm smith_normal_form(IMat m) {
    int r = static_cast<int>(m.size());
    int c = r == 0 ? 0 : static_cast<int>(m[0].size());
    SmithNormalForm out;
    out.u = detail::identity_imat(r);
    out.v = detail::identity_imat(c);
    out.v_inv = detail::identity_imat(c);

    auto row_sub = [&](int i, int k, const Integer& q) {  // row_i -= q * row_k
        for (int j = 0; j < c; ++j) m[i][j] -= q * m[k][j];
        for (int j = 0; j < r; ++j) out.u[i][j] -= q * out.u[k][j];
    };
    auto col_sub = [&](int j, int k, const Integer& q) {  // col_j -= q * col_k
        for (int i = 0; i < r; ++i) m[i][j] -= q * m[i][k];
        for (int i = 0; i < c; ++i) out.v[i][j] -= q * out.v[i][k];
        for (int t = 0; t < c; ++t) out.v_inv[k][t] += q * out.v_inv[j][t];
    };
    auto row_swap = [&](int i, int k) {
        std::swap(m[i], m[k]);
        std::swap(out.u[i], out.u[k]);
    };
    auto col_swap = [&](int j, int k) {
        for (int i = 0; i < r; ++i) std::swap(m[i][j], m[i][k]);
        for (int i = 0; i < c; ++i) std::swap(out.v[i][j], out.v[i][k]);
        std::swap(out.v_inv[j], out.v_inv[k]);
    };
    auto row_negate = [&](int i) {
        for (int j = 0; j < c; ++j) m[i][j] = -m[i][j];
        for (int j = 0; j < r; ++j) out.u[i][j] = -out.u[i][j];
    };

    int t = 0;
    while (t < r && t < c) {
        // locate a minimal nonzero entry in the remaining block
        int bi = -1, bj = -1;
        for (int i = t; i < r; ++i)
            for (int j = t; j < c; ++j) {
                if (m[i][j] == 0) continue;
                if (bi < 0) {
                    bi = i, bj = j;
                    continue;
                }
                Integer x = m[i][j] < 0 ? Integer(-m[i][j]) : m[i][j];
                Integer y = m[bi][bj] < 0 ? Integer(-m[bi][bj]) : m[bi][bj];
                if (x < y) bi = i, bj = j;
            }
        if (bi < 0) break;
        row_swap(t, bi);
        col_swap(t, bj);
        if (m[t][t] < 0) row_negate(t);

        bool clean = true;
        for (int i = t + 1; i < r; ++i) {
            if (m[i][t] == 0) continue;
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), m[i][t].get_mpz_t(), m[t][t].get_mpz_t());
            row_sub(i, t, q);
            if (m[i][t] != 0) clean = false;
        }
        for (int j = t + 1; j < c; ++j) {
            if (m[t][j] == 0) continue;
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), m[t][j].get_mpz_t(), m[t][t].get_mpz_t());
            col_sub(j, t, q);
            if (m[t][j] != 0) clean = false;
        }
        if (!clean) continue;

        // enforce d_t | everything in the trailing block
        bool divides = true;
        for (int i = t + 1; i < r && divides; ++i)
            for (int j = t + 1; j < c && divides; ++j)
                if (m[i][j] % m[t][t] != 0) {
                    row_sub(t, i, Integer(-1));  // pull the offending row up
                    divides = false;
                }
        if (!divides) continue;
        ++t;
    }
    out.rank = t;
    out.d.assign(r, IVec(c, Integer(0)));
    for (int i = 0; i < t; ++i) out.d[i][i] = m[i][i];
    return out;
}

// A sublattice of Z^n with its canonical Hermite basis.
class IntegerLattice {
  public:
    IntegerLattice() : n_(0) {}

    static IntegerLattice from_generators(int n, const IMat& generators) {
        IntegerLattice l;
        l.n_ = n;
        for (const auto& g : generators)
            if (static_cast<int>(g.size()) != n) throw DimensionError("generator length mismatch");
        l.basis_ = hermite_basis(generators);
        return l;
    }

    int ambient_dimension() const { return n_; }
    int rank() const { return static_cast<int>(basis_.size()); }
    const IMat& basis() const { return basis_; }

    bool operator==(const IntegerLattice& o) const {
        if (n_ != o.n_) throw DimensionError("lattices in different ambient dimensions");
        return basis_ == o.basis_;
    }
    bool operator!=(const IntegerLattice& o) const { return !(*this == o); }

    // exact triangular solve against the Hermite basis
    bool contains(const IVec& v) const {
        if (static_cast<int>(v.size()) != n_) throw DimensionError("vector length mismatch");
        IVec w = v;
        for (auto it = basis_.rbegin(); it != basis_.rend(); ++it) {
            const IVec& b = *it;
            int p = detail::last_nonzero(b);
            if (w[p] == 0) continue;
            if (w[p] % b[p] != 0) return false;
            Integer q = w[p] / b[p];
            for (int j = 0; j <= p; ++j) w[j] -= q * b[j];
        }
        return detail::last_nonzero(w) < 0;
    }

  private:
    int n_;
    IMat basis_;
};

// Saturation (Q-span of the generators) intersect Z^n: the first s rows of
// V^-1 from the Smith normal form are a basis, since the rows of V^-1 are
// a Z-basis of Z^n adapted to the row space.
inline IntegerLattice saturate(int n, const IMat& generators) {
    if (generators.empty()) return IntegerLattice::from_generators(n, {});
    SmithNormalForm snf = smith_normal_form(generators);
    IMat rows;
    for (int i = 0; i < snf.rank; ++i) rows.push_back(snf.v_inv[i]);
    return IntegerLattice::from_generators(n, rows);
}

inline bool lattices_equal(const IntegerLattice& a, const IntegerLattice& b) { return a == b; }

}  // namespace multihom
