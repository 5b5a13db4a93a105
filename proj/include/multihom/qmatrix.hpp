#pragma once

#include <optional>
#include <string>
#include <vector>

#include "multihom/rational.hpp"

namespace multihom {

// Dense matrix over Q with exact arithmetic. Sized for the small systems
// in this library (ambient dimension <= 6, vectorized linear parts, ...);
// the large sparse jet systems live in sparse_solver.hpp.
class QMatrix {
  public:
    QMatrix() : rows_(0), cols_(0) {}
    QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(rows * cols, Rational(0)) {}

    static QMatrix identity(int n) {
        QMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static QMatrix from_rows(const std::vector<std::vector<Rational>>& rows) {
        if (rows.empty()) return QMatrix(0, 0);
        QMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
        for (int i = 0; i < m.rows_; ++i) {
            if (static_cast<int>(rows[i].size()) != m.cols_)
                throw DimensionError("ragged rows");
            for (int j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return a_[i * cols_ + j]; }
    const Rational& operator()(int i, int j) const { return a_[i * cols_ + j]; }

    bool operator==(const QMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const QMatrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (x != 0) return false;
        return true;
    }

    bool is_square() const { return rows_ == cols_; }

    QMatrix operator+(const QMatrix& o) const {
        check_same_shape(o);
        QMatrix r(*this);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
        return r;
    }

    QMatrix operator-(const QMatrix& o) const {
        check_same_shape(o);
        QMatrix r(*this);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] -= o.a_[i];
        return r;
    }

    QMatrix operator-() const {
        QMatrix r(*this);
        for (auto& x : r.a_) x = -x;
        return r;
    }

    QMatrix operator*(const QMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionError("matrix product shape mismatch");
        QMatrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Rational& v = (*this)(i, k);
                if (v == 0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += v * o(k, j);
            }
        return r;
    }

    QMatrix operator*(const Rational& c) const {
        QMatrix r(*this);
        for (auto& x : r.a_) x *= c;
        return r;
    }

    std::vector<Rational> apply(const std::vector<Rational>& v) const {
        if (static_cast<int>(v.size()) != cols_) throw DimensionError("vector length mismatch");
        std::vector<Rational> r(rows_, Rational(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * v[j];
        return r;
    }

    QMatrix transpose() const {
        QMatrix r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Rational trace() const {
        Rational t = 0;
        for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    QMatrix pow(int e) const {
        QMatrix r = identity(rows_), b = *this;
        while (e > 0) {
            if (e & 1) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    static QMatrix commutator(const QMatrix& a, const QMatrix& b) { return a * b - b * a; }

    std::vector<Rational> vectorize() const { return a_; }

    struct Rref;

    // Unique reduced row echelon form; pivot-row choice cannot affect it.
    Rref rref() const;
    int rank() const;

    // Canonical kernel basis from the reduced echelon form: each free
    // column contributes one vector with entry 1 there and the negated
    // echelon entries at the pivot coordinates.
    std::vector<std::vector<Rational>> nullspace() const;

    // Particular solution of Ax=b with all free variables set to zero;
    // nullopt when inconsistent.
    std::optional<std::vector<Rational>> solve(const std::vector<Rational>& b) const;

    Rational det() const {
        if (!is_square()) throw DimensionError("determinant of non-square matrix");
        QMatrix m(*this);
        Rational d = 1;
        eliminate_for_det(m, d);
        return d;
    }

    QMatrix inverse() const;

    std::string to_string() const {
        std::string s = "[";
        for (int i = 0; i < rows_; ++i) {
            s += i ? "; " : "";
            for (int j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).get_str();
        }
        return s + "]";
    }

  private:
    void check_same_shape(const QMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
    }

    static void eliminate_for_det(QMatrix& m, Rational& d) {
        int n = m.rows_;
        for (int c = 0; c < n; ++c) {
            int pivot = -1;
            for (int r = c; r < n; ++r)
                if (m(r, c) != 0) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) {
                d = 0;
                return;
            }
            if (pivot != c) {
                for (int j = 0; j < n; ++j) std::swap(m(pivot, j), m(c, j));
                d = -d;
            }
            d *= m(c, c);
            Rational inv = 1 / m(c, c);
            for (int r = c + 1; r < n; ++r) {
                if (m(r, c) == 0) continue;
                Rational f = m(r, c) * inv;
                for (int j = c; j < n; ++j) m(r, j) -= f * m(c, j);
            }
        }
    }

    int rows_, cols_;
    std::vector<Rational> a_;
};

struct QMatrix::Rref {
    QMatrix mat;
    std::vector<int> pivot_cols;
    int rank() const { return static_cast<int>(pivot_cols.size()); }
};

inline QMatrix::Rref QMatrix::rref() const {
    Rref res{*this, {}};
    QMatrix& m = res.mat;
    int pr = 0;
    for (int c = 0; c < cols_ && pr < rows_; ++c) {
        int pivot = -1;
        for (int r = pr; r < rows_; ++r)
            if (m(r, c) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != pr)
            for (int j = 0; j < cols_; ++j) std::swap(m(pivot, j), m(pr, j));
        Rational inv = 1 / m(pr, c);
        for (int j = c; j < cols_; ++j) m(pr, j) *= inv;
        for (int r = 0; r < rows_; ++r) {
            if (r == pr || m(r, c) == 0) continue;
            Rational f = m(r, c);
            for (int j = c; j < cols_; ++j) m(r, j) -= f * m(pr, j);
        }
        res.pivot_cols.push_back(c);
        ++pr;
    }
    return res;
}

inline int QMatrix::rank() const { return rref().rank(); }

inline std::vector<std::vector<Rational>> QMatrix::nullspace() const {
    Rref r = rref();
    std::vector<bool> is_pivot(cols_, false);
    for (int c : r.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(cols_, Rational(0));
        v[f] = 1;
        for (size_t p = 0; p < r.pivot_cols.size(); ++p)
            v[r.pivot_cols[p]] = -r.mat(static_cast<int>(p), f);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::optional<std::vector<Rational>> QMatrix::solve(const std::vector<Rational>& b) const {
    if (static_cast<int>(b.size()) != rows_) throw DimensionError("rhs length mismatch");
    QMatrix aug(rows_, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
        aug(i, cols_) = b[i];
    }
    Rref r = aug.rref();
    std::vector<Rational> x(cols_, Rational(0));
    for (size_t p = 0; p < r.pivot_cols.size(); ++p) {
        if (r.pivot_cols[p] == cols_) return std::nullopt;  // pivot in rhs column
        x[r.pivot_cols[p]] = r.mat(static_cast<int>(p), cols_);
    }
    return x;
}

inline QMatrix QMatrix::inverse() const {
    if (!is_square()) throw DimensionError("inverse of non-square matrix");
    QMatrix aug(rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
        aug(i, cols_ + i) = 1;
    }
    Rref r = aug.rref();
    if (r.rank() < rows_ || r.pivot_cols.back() >= cols_) throw Error("matrix is singular");
    QMatrix inv(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) inv(i, j) = r.mat(i, cols_ + j);
    return inv;
}

inline QMatrix operator*(const Rational& c, const QMatrix& m) { return m * c; }

// Canonical basis (RREF rows) of the span of the given vectors.
inline std::vector<std::vector<Rational>> canonical_span_basis(
    const std::vector<std::vector<Rational>>& vectors) {
    if (vectors.empty()) return {};
    QMatrix m = QMatrix::from_rows(vectors);
    auto r = m.rref();
    std::vector<std::vector<Rational>> basis;
    for (int i = 0; i < r.rank(); ++i) {
        std::vector<Rational> row(m.cols());
        for (int j = 0; j < m.cols(); ++j) row[j] = r.mat(i, j);
        basis.push_back(std::move(row));
    }
    return basis;
}

// Is v in the span of the basis vectors? Exact membership via solve.
inline bool in_span(const std::vector<std::vector<Rational>>& basis,
                    const std::vector<Rational>& v) {
    bool all_zero = true;
    for (const auto& x : v)
        if (x != 0) all_zero = false;
    if (all_zero) return true;
    if (basis.empty()) return false;
    QMatrix m = QMatrix::from_rows(basis).transpose();
    return m.solve(v).has_value();
}

}  // namespace multihom
