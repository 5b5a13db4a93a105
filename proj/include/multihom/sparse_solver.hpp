#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "multihom/qmatrix.hpp"

namespace multihom {

// Sparse exact Gaussian elimination over Z for the jet linear systems.
//
// Rows are integer-cleared and gcd-normalized after every combination.
// Each row lives in an int64 fast lane until a combination would overflow,
// then escalates to mpz. Columns are eliminated strictly left to right,
// so the set of pivot columns, the reduced constraints on a trailing
// column block, and free-variables-zero lifts are all canonical: no
// pivot-row tie break can change any returned value.
class SparseEliminator {
  public:
    // `ncols` data columns; column index `ncols` is the right-hand side.
    explicit SparseEliminator(int ncols) : ncols_(ncols) {}

    int ncols() const { return ncols_; }

    void add_row(std::vector<std::pair<int, Integer>> entries) {
        Row r;
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        bool fits = true;
        for (auto& [c, v] : entries) {
            if (v == 0) continue;
            r.cols.push_back(c);
            if (!v.fits_slong_p() || std::abs(v.get_si()) > kSmallMax) fits = false;
            r.big.push_back(v);
        }
        if (r.cols.empty()) return;
        if (fits) {
            r.small.reserve(r.big.size());
            for (auto& v : r.big) r.small.push_back(v.get_si());
            r.big.clear();
            r.is_big = false;
        } else {
            r.is_big = true;
        }
        normalize(r);
        rows_.push_back(std::move(r));
    }

    void add_row_rational(const std::vector<std::pair<int, Rational>>& entries) {
        Integer den = 1;
        for (const auto& [c, v] : entries) den = lcm(den, v.get_den());
        std::vector<std::pair<int, Integer>> cleared;
        cleared.reserve(entries.size());
        for (const auto& [c, v] : entries)
            cleared.emplace_back(c, Integer(v.get_num() * (den / v.get_den())));
        add_row(std::move(cleared));
    }

    // Forward elimination. Call once; further add_row calls are invalid.
    void eliminate() {
        // bucket rows by leading column
        std::vector<std::vector<int>> bucket(ncols_ + 2);
        for (size_t i = 0; i < rows_.size(); ++i) bucket[rows_[i].cols[0]].push_back(i);

        for (int c = 0; c <= ncols_; ++c) {
            auto& cand = bucket[c];
            if (cand.empty()) continue;
            // pivot choice: small lane, then sparser, then smaller id
            int piv = cand[0];
            for (int id : cand) {
                const Row& r = rows_[id];
                const Row& p = rows_[piv];
                if (id == piv) continue;
                auto key = [](const Row& x, int i) {
                    return std::make_tuple(x.is_big ? 1 : 0, x.cols.size(), i);
                };
                if (key(r, id) < key(p, piv)) piv = id;
            }
            for (int id : cand) {
                if (id == piv) continue;
                combine(rows_[id], rows_[piv], c);
                if (!rows_[id].cols.empty()) bucket[rows_[id].cols[0]].push_back(id);
            }
            if (c == ncols_) {
                inconsistent_ = true;  // pivot in the rhs column
            } else {
                echelon_.push_back(piv);
            }
            cand.clear();
            cand.shrink_to_fit();
        }
        eliminated_ = true;
    }

    bool consistent() const { return !inconsistent_; }

    std::vector<int> pivot_columns() const {
        std::vector<int> pcs;
        for (int id : echelon_) pcs.push_back(rows_[id].cols[0]);
        return pcs;
    }

    // Canonical basis of the kernel of the constraints induced on columns
    // [tail_start, ncols): the projection of the full kernel onto the tail
    // block. The system must be homogeneous.
    std::vector<std::vector<Rational>> tail_kernel(int tail_start) const {
        QMatrix m = tail_constraint_matrix(tail_start);
        if (m.rows() == 0) {
            // no constraints: full coordinate basis
            int nt = ncols_ - tail_start;
            std::vector<std::vector<Rational>> basis;
            for (int i = 0; i < nt; ++i) {
                std::vector<Rational> v(nt, Rational(0));
                v[i] = 1;
                basis.push_back(std::move(v));
            }
            return basis;
        }
        return m.nullspace();
    }

    // RREF of the constraints on the tail block (for canonical comparison).
    QMatrix tail_constraint_matrix(int tail_start) const {
        std::vector<std::vector<Rational>> rows;
        int nt = ncols_ - tail_start;
        for (int id : echelon_) {
            const Row& r = rows_[id];
            if (r.cols[0] < tail_start) continue;
            std::vector<Rational> dense(nt, Rational(0));
            for (size_t t = 0; t < r.cols.size(); ++t) {
                if (r.cols[t] >= ncols_) throw Error("tail constraints on augmented system");
                dense[r.cols[t] - tail_start] = r.value(t);
            }
            rows.push_back(std::move(dense));
        }
        if (rows.empty()) return QMatrix(0, nt);
        return QMatrix::from_rows(rows).rref().mat;
    }

    // Full solution with the given tail assignment, every other free
    // variable zero, and the rhs column honored iff use_rhs. The tail
    // assignment must satisfy the tail constraints.
    std::vector<Rational> lift(int tail_start, const std::vector<Rational>& tail_values,
                               bool use_rhs) const {
        std::vector<Rational> x(ncols_, Rational(0));
        for (int i = tail_start; i < ncols_; ++i) x[i] = tail_values[i - tail_start];
        for (auto it = echelon_.rbegin(); it != echelon_.rend(); ++it) {
            const Row& r = rows_[*it];
            int pc = r.cols[0];
            if (pc >= tail_start) {
                // constraint row: verify instead of solving
                Rational acc = 0;
                for (size_t t = 0; t < r.cols.size(); ++t) {
                    int c = r.cols[t];
                    if (c == ncols_) {
                        if (use_rhs) acc -= r.value(t);
                        continue;
                    }
                    acc += r.value(t) * x[c];
                }
                if (acc != 0) throw Error("lift: tail assignment violates constraints");
                continue;
            }
            Rational acc = 0;
            for (size_t t = 1; t < r.cols.size(); ++t) {
                int c = r.cols[t];
                if (c == ncols_) {
                    if (use_rhs) acc -= r.value(t);
                    continue;
                }
                acc += r.value(t) * x[c];
            }
            x[pc] = -acc / r.value(0);
        }
        return x;
    }

    // Particular solution of the augmented system, free variables zero.
    std::vector<Rational> particular_solution() const {
        if (inconsistent_) throw Error("inconsistent system");
        return lift(ncols_, {}, true);
    }

  private:
    static constexpr std::int64_t kSmallMax = (std::int64_t(1) << 62) - 1;

    struct Row {
        std::vector<int> cols;
        std::vector<std::int64_t> small;
        std::vector<Integer> big;
        bool is_big = false;

        Rational value(size_t t) const {
            return is_big ? Rational(big[t]) : Rational(static_cast<long>(small[t]));
        }
        Integer value_z(size_t t) const {
            return is_big ? big[t] : Integer(static_cast<long>(small[t]));
        }
    };

    // divide by content, make leading entry positive
    static void normalize(Row& r) {
        if (r.cols.empty()) return;
        if (!r.is_big) {
            std::uint64_t g = 0;
            for (auto v : r.small) g = std::gcd(g, static_cast<std::uint64_t>(v < 0 ? -v : v));
            if (g > 1)
                for (auto& v : r.small) v /= static_cast<std::int64_t>(g);
            if (r.small[0] < 0)
                for (auto& v : r.small) v = -v;
        } else {
            Integer g = 0;
            for (const auto& v : r.big) {
                mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
                if (g == 1) break;
            }
            if (g > 1)
                for (auto& v : r.big) v /= g;
            if (r.big[0] < 0)
                for (auto& v : r.big) v = -v;
            // demote when everything fits again
            bool fits = true;
            for (const auto& v : r.big)
                if (!v.fits_slong_p() || std::abs(v.get_si()) > kSmallMax) {
                    fits = false;
                    break;
                }
            if (fits) {
                r.small.clear();
                r.small.reserve(r.big.size());
                for (const auto& v : r.big) r.small.push_back(v.get_si());
                r.big.clear();
                r.is_big = false;
            }
        }
    }

    // r <- (p/g) * r - (q/g) * pivot, eliminating column c; then normalize.
    void combine(Row& r, const Row& pivot, int c) {
        if (!r.is_big && !pivot.is_big) {
            if (combine_small(r, pivot, c)) return;
            // overflow: escalate r and retry in the big lane
            escalate(r);
        }
        combine_big(r, pivot, c);
    }

    static void escalate(Row& r) {
        if (r.is_big) return;
        r.big.reserve(r.small.size());
        for (auto v : r.small) r.big.emplace_back(static_cast<long>(v));
        r.small.clear();
        r.is_big = true;
    }

    bool combine_small(Row& r, const Row& pivot, int c) {
        std::int64_t a = pivot.small[0];  // pivot leading value at column c
        std::int64_t b = r.small[0];
        std::int64_t g = std::gcd(std::uint64_t(a < 0 ? -a : a), std::uint64_t(b < 0 ? -b : b));
        std::int64_t p = a / g, q = b / g;
        std::vector<int> cols;
        std::vector<std::int64_t> vals;
        cols.reserve(r.cols.size() + pivot.cols.size());
        vals.reserve(r.cols.size() + pivot.cols.size());
        size_t i = 0, j = 0;
        while (i < r.cols.size() || j < pivot.cols.size()) {
            int cr = i < r.cols.size() ? r.cols[i] : ncols_ + 1;
            int cp = j < pivot.cols.size() ? pivot.cols[j] : ncols_ + 1;
            __int128 v;
            int col;
            if (cr < cp) {
                v = static_cast<__int128>(p) * r.small[i];
                col = cr;
                ++i;
            } else if (cp < cr) {
                v = -static_cast<__int128>(q) * pivot.small[j];
                col = cp;
                ++j;
            } else {
                v = static_cast<__int128>(p) * r.small[i] -
                    static_cast<__int128>(q) * pivot.small[j];
                col = cr;
                ++i;
                ++j;
            }
            if (v == 0) continue;
            if (v > kSmallMax || v < -kSmallMax) return false;
            cols.push_back(col);
            vals.push_back(static_cast<std::int64_t>(v));
        }
        r.cols = std::move(cols);
        r.small = std::move(vals);
        normalize(r);
        return true;
    }

    void combine_big(Row& r, const Row& pivot, int c) {
        Integer a = pivot.value_z(0), b = r.value_z(0);
        Integer g = gcd(a < 0 ? Integer(-a) : a, b < 0 ? Integer(-b) : b);
        Integer p = a / g, q = b / g;
        std::vector<int> cols;
        std::vector<Integer> vals;
        cols.reserve(r.cols.size() + pivot.cols.size());
        vals.reserve(r.cols.size() + pivot.cols.size());
        size_t i = 0, j = 0;
        Integer v;
        while (i < r.cols.size() || j < pivot.cols.size()) {
            int cr = i < r.cols.size() ? r.cols[i] : ncols_ + 1;
            int cp = j < pivot.cols.size() ? pivot.cols[j] : ncols_ + 1;
            int col;
            if (cr < cp) {
                v = p * r.value_z(i);
                col = cr;
                ++i;
            } else if (cp < cr) {
                v = -q * pivot.value_z(j);
                col = cp;
                ++j;
            } else {
                v = p * r.value_z(i) - q * pivot.value_z(j);
                col = cr;
                ++i;
                ++j;
            }
            if (v == 0) continue;
            cols.push_back(col);
            vals.push_back(v);
        }
        r.cols = std::move(cols);
        r.big = std::move(vals);
        r.small.clear();
        r.is_big = true;
        normalize(r);
    }

    int ncols_;
    std::vector<Row> rows_;
    std::vector<int> echelon_;  // row ids in pivot-column order
    bool eliminated_ = false;
    bool inconsistent_ = false;
};

}  // namespace multihom
