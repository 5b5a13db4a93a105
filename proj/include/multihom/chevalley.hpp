#pragma once

#include <algorithm>
#include <tuple>
#include <vector>

#include "multihom/qmatrix.hpp"

namespace multihom {

// Dense univariate polynomial over Q, coefficients low to high. Only used
// for characteristic/minimal polynomials of matrices of size <= 6.
struct UPoly {
    std::vector<Rational> c;

    UPoly() = default;
    explicit UPoly(std::vector<Rational> coeffs) : c(std::move(coeffs)) { normalize(); }

    static UPoly zero() { return UPoly(); }
    static UPoly one() { return UPoly({Rational(1)}); }

    void normalize() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }

    bool is_zero() const { return c.empty(); }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    Rational lead() const { return c.back(); }

    UPoly operator+(const UPoly& o) const {
        std::vector<Rational> r(std::max(c.size(), o.c.size()), Rational(0));
        for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
        return UPoly(std::move(r));
    }

    UPoly operator-(const UPoly& o) const {
        std::vector<Rational> r(std::max(c.size(), o.c.size()), Rational(0));
        for (size_t i = 0; i < c.size(); ++i) r[i] += c[i];
        for (size_t i = 0; i < o.c.size(); ++i) r[i] -= o.c[i];
        return UPoly(std::move(r));
    }

    UPoly operator*(const UPoly& o) const {
        if (is_zero() || o.is_zero()) return UPoly();
        std::vector<Rational> r(c.size() + o.c.size() - 1, Rational(0));
        for (size_t i = 0; i < c.size(); ++i)
            for (size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
        return UPoly(std::move(r));
    }

    UPoly operator*(const Rational& s) const {
        UPoly r(*this);
        for (auto& x : r.c) x *= s;
        r.normalize();
        return r;
    }

    UPoly derivative() const {
        if (c.size() <= 1) return UPoly();
        std::vector<Rational> r(c.size() - 1);
        for (size_t i = 1; i < c.size(); ++i) r[i - 1] = c[i] * static_cast<long>(i);
        return UPoly(std::move(r));
    }

    UPoly monic() const {
        if (is_zero()) return *this;
        return *this * (1 / lead());
    }

    std::pair<UPoly, UPoly> div_rem(const UPoly& d) const {
        if (d.is_zero()) throw Error("univariate division by zero");
        UPoly q, r = *this;
        q.c.assign(std::max<size_t>(1, c.size()), Rational(0));
        while (!r.is_zero() && r.degree() >= d.degree()) {
            int k = r.degree() - d.degree();
            Rational f = r.lead() / d.lead();
            q.c[k] += f;
            for (size_t i = 0; i < d.c.size(); ++i) r.c[k + i] -= f * d.c[i];
            r.normalize();
        }
        q.normalize();
        return {q, r};
    }

    Rational eval(const Rational& x) const {
        Rational acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    Integer eval_integer(const Integer& x) const {
        // requires integer coefficients
        Integer acc = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) {
            if (!is_integer(*it)) throw Error("eval_integer on non-integer polynomial");
            acc = acc * x + it->get_num();
        }
        return acc;
    }

    QMatrix eval_matrix(const QMatrix& a) const {
        int n = a.rows();
        QMatrix acc(n, n);
        for (auto it = c.rbegin(); it != c.rend(); ++it)
            acc = acc * a + QMatrix::identity(n) * (*it);
        return acc;
    }
};

inline UPoly upoly_gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        auto [q, r] = a.div_rem(b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// g = gcd(a,b) monic together with u,v such that u*a + v*b = g.
inline std::tuple<UPoly, UPoly, UPoly> upoly_extended_gcd(const UPoly& a, const UPoly& b) {
    UPoly r0 = a, r1 = b;
    UPoly u0 = UPoly::one(), u1 = UPoly::zero();
    UPoly v0 = UPoly::zero(), v1 = UPoly::one();
    while (!r1.is_zero()) {
        auto [q, r] = r0.div_rem(r1);
        UPoly u2 = u0 - q * u1, v2 = v0 - q * v1;
        r0 = std::move(r1);
        r1 = std::move(r);
        u0 = std::move(u1);
        u1 = std::move(u2);
        v0 = std::move(v1);
        v1 = std::move(v2);
    }
    if (r0.is_zero()) return {r0, u0, v0};
    Rational s = 1 / r0.lead();
    return {r0 * s, u0 * s, v0 * s};
}

inline UPoly squarefree_part(const UPoly& p) {
    if (p.degree() <= 1) return p.monic();
    UPoly g = upoly_gcd(p, p.derivative());
    return p.div_rem(g).first.monic();
}

inline bool is_squarefree(const UPoly& p) {
    return upoly_gcd(p, p.derivative()).degree() == 0;
}

// Characteristic polynomial by the Faddeev-LeVerrier recurrence; exact
// over Q and division-light for n <= 6.
inline UPoly char_poly(const QMatrix& a) {
    if (!a.is_square()) throw DimensionError("char_poly of non-square matrix");
    int n = a.rows();
    std::vector<Rational> coef(n + 1, Rational(0));
    coef[n] = 1;
    QMatrix m = QMatrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        m = a * m;
        Rational ck = -m.trace() / k;
        coef[n - k] = ck;
        m = m + QMatrix::identity(n) * ck;
    }
    return UPoly(std::move(coef));
}

// Monic minimal polynomial: first linear dependence among I, A, A^2, ...
inline UPoly minimal_poly(const QMatrix& a) {
    int n = a.rows();
    std::vector<std::vector<Rational>> powers;
    QMatrix p = QMatrix::identity(n);
    for (int k = 0; k <= n; ++k) {
        std::vector<Rational> v = p.vectorize();
        if (!powers.empty()) {
            QMatrix m = QMatrix::from_rows(powers).transpose();
            auto sol = m.solve(v);
            if (sol) {
                std::vector<Rational> coef(k + 1, Rational(0));
                for (int i = 0; i < k; ++i) coef[i] = -(*sol)[i];
                coef[k] = 1;
                return UPoly(std::move(coef));
            }
        }
        powers.push_back(std::move(v));
        p = p * a;
    }
    throw Error("minimal polynomial not found");  // unreachable by Cayley-Hamilton
}

struct ChevalleyPair {
    QMatrix semisimple;
    QMatrix nilpotent;
};

// Chevalley's Newton iteration on the squarefree part of the
// characteristic polynomial: no eigenvalues, no field extensions; total
// over Q.
inline ChevalleyPair jordan_chevalley(const QMatrix& a) {
    if (!a.is_square()) throw DimensionError("jordan_chevalley of non-square matrix");
    int n = a.rows();
    if (n == 0) return {a, a};
    UPoly p = squarefree_part(char_poly(a));
    auto [g, u, v] = upoly_extended_gcd(p, p.derivative());
    if (g.degree() != 0) throw Error("squarefree part not squarefree");  // cannot happen
    // v * p' == 1 mod p, so X <- X - p(X) v(X) squares the defect p(X)
    QMatrix x = a;
    for (int iter = 0; iter <= n + 1; ++iter) {
        QMatrix px = p.eval_matrix(x);
        if (px.is_zero()) break;
        x = x - px * v.eval_matrix(x);
    }
    if (!p.eval_matrix(x).is_zero()) throw Error("Jordan-Chevalley iteration failed");
    return {x, a - x};
}

inline bool is_nilpotent(const QMatrix& a) {
    if (!a.is_square()) throw DimensionError("nilpotency of non-square matrix");
    if (a.rows() == 0) return true;
    return a.pow(a.rows()).is_zero();
}

inline bool is_semisimple(const QMatrix& a) { return is_squarefree(minimal_poly(a)); }

struct RationalEigenData {
    // (eigenvalue, canonical eigenspace basis), eigenvalues ascending
    std::vector<std::pair<Rational, std::vector<std::vector<Rational>>>> spaces;
    bool complete;  // eigenspace dimensions sum to n
};

// All rational eigenvalues with exact eigenspaces. Scales to an integer
// matrix, whose monic integer characteristic polynomial can only have
// integer rational roots; candidates are divisors of the constant term
// within the Cauchy bound.
inline RationalEigenData rational_eigenvalues(const QMatrix& a) {
    if (!a.is_square()) throw DimensionError("eigenvalues of non-square matrix");
    int n = a.rows();
    RationalEigenData out{{}, n == 0};
    if (n == 0) return out;

    Integer d = 1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d = lcm(d, a(i, j).get_den());
    QMatrix b = a * Rational(d);
    UPoly chi = char_poly(b);

    // strip powers of t; 0 is an eigenvalue iff the constant term vanishes
    int strip = 0;
    while (strip <= chi.degree() && chi.c[strip] == 0) ++strip;
    std::vector<Integer> roots;
    if (strip > 0) roots.push_back(0);

    if (strip <= chi.degree()) {
        Integer c0 = chi.c[strip].get_num();
        Integer bound = 1;
        for (int i = strip; i <= chi.degree(); ++i) {
            Integer num = chi.c[i].get_num();
            if (num < 0) num = -num;
            if (num > bound) bound = num;
        }
        bound += 1;  // Cauchy bound for a monic polynomial
        for (const Integer& q : divisors_up_to(c0, bound)) {
            for (const Integer& cand : {q, Integer(-q)}) {
                if (chi.eval_integer(cand) == 0) roots.push_back(cand);
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());

    int total = 0;
    for (const Integer& mu : roots) {
        Rational lambda = make_rational(mu, d);
        QMatrix shifted = a - QMatrix::identity(n) * lambda;
        auto basis = shifted.nullspace();
        if (basis.empty()) continue;
        total += static_cast<int>(basis.size());
        out.spaces.emplace_back(lambda, std::move(basis));
    }
    out.complete = (total == n);
    return out;
}

struct SimultaneousDiagonalization {
    QMatrix p;                                  // columns = common eigenvectors
    std::vector<std::vector<Integer>> weights;  // per family member: scaled diagonal
    std::vector<std::vector<Rational>> diagonals;  // unscaled diagonals of P^-1 A_i P
};

// Simultaneously diagonalizes a commuting family over Q by refining common
// eigenspaces. Diagonals are scaled by one common positive rational to a
// jointly primitive integer matrix.
inline SimultaneousDiagonalization simultaneous_diagonalize(const std::vector<QMatrix>& family,
                                                            int n) {
    for (size_t i = 0; i < family.size(); ++i) {
        if (!family[i].is_square() || family[i].rows() != n)
            throw DimensionError("family member has wrong shape");
        for (size_t j = i + 1; j < family.size(); ++j)
            if (!QMatrix::commutator(family[i], family[j]).is_zero())
                throw CommutationError("family members do not commute");
    }

    struct Block {
        QMatrix basis;                 // n x d, columns span the block
        std::vector<Rational> tuple;   // eigenvalues seen so far
    };
    std::vector<Block> blocks{{QMatrix::identity(n), {}}};

    for (const QMatrix& mat : family) {
        std::vector<Block> next;
        for (const Block& blk : blocks) {
            int dim = blk.basis.cols();
            // restriction M with mat * V = V * M (blocks are invariant)
            QMatrix m(dim, dim);
            QMatrix av = mat * blk.basis;
            for (int j = 0; j < dim; ++j) {
                std::vector<Rational> col(n);
                for (int i = 0; i < n; ++i) col[i] = av(i, j);
                auto sol = blk.basis.solve(col);
                if (!sol) throw CommutationError("block not invariant under family");
                for (int i = 0; i < dim; ++i) m(i, j) = (*sol)[i];
            }
            RationalEigenData eig = rational_eigenvalues(m);
            if (!eig.complete)
                throw UnsupportedSpectrumError(
                    "family member is not diagonalizable over Q (irrational or defective "
                    "spectrum)");
            for (auto& [lambda, vecs] : eig.spaces) {
                QMatrix k(dim, static_cast<int>(vecs.size()));
                for (size_t j = 0; j < vecs.size(); ++j)
                    for (int i = 0; i < dim; ++i) k(i, static_cast<int>(j)) = vecs[j][i];
                Block nb{blk.basis * k, blk.tuple};
                nb.tuple.push_back(lambda);
                next.push_back(std::move(nb));
            }
        }
        blocks = std::move(next);
    }

    // Canonical block order: keep the original coordinate layout where the
    // family is already (block-)diagonal by sorting on the first coordinate
    // that meets the block, with the eigenvalue tuple (descending) breaking
    // ties between blocks living on the same leading coordinate.
    auto first_coordinate = [n](const Block& b) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < b.basis.cols(); ++j)
                if (b.basis(i, j) != 0) return i;
        return n;
    };
    std::stable_sort(blocks.begin(), blocks.end(), [&](const Block& a, const Block& b) {
        int fa = first_coordinate(a), fb = first_coordinate(b);
        if (fa != fb) return fa < fb;
        return a.tuple > b.tuple;
    });

    SimultaneousDiagonalization out;
    out.p = QMatrix(n, n);
    int col = 0;
    std::vector<int> block_of_col(n);
    for (const Block& blk : blocks) {
        for (int j = 0; j < blk.basis.cols(); ++j, ++col) {
            for (int i = 0; i < n; ++i) out.p(i, col) = blk.basis(i, j);
            block_of_col[col] = static_cast<int>(&blk - blocks.data());
        }
    }
    if (col != n) throw Error("eigenspace dimensions do not fill the space");

    // columns as primitive integer vectors with positive leading entry
    for (int j = 0; j < n; ++j) {
        std::vector<Rational> column(n);
        for (int i = 0; i < n; ++i) column[i] = out.p(i, j);
        Integer den = denominator_lcm(column);
        std::vector<Integer> nums(n);
        for (int i = 0; i < n; ++i)
            nums[i] = column[i].get_num() * (den / column[i].get_den());
        Integer g = content(nums);
        if (g == 0) throw Error("zero column in diagonalizing matrix");
        int lead = 0;
        while (nums[lead] == 0) ++lead;
        if (nums[lead] < 0) g = -g;
        for (int i = 0; i < n; ++i) out.p(i, j) = Rational(nums[i] / g);
    }

    out.diagonals.assign(family.size(), std::vector<Rational>(n, Rational(0)));
    for (size_t f = 0; f < family.size(); ++f)
        for (int j = 0; j < n; ++j)
            out.diagonals[f][j] = blocks[block_of_col[j]].tuple[f];

    // single common positive scale to a jointly primitive integer matrix
    std::vector<Rational> all;
    for (const auto& row : out.diagonals)
        for (const auto& x : row) all.push_back(x);
    Integer den = denominator_lcm(all);
    std::vector<Integer> nums;
    for (const auto& x : all) nums.push_back(x.get_num() * (den / x.get_den()));
    Integer g = content(nums);
    if (g == 0) g = 1;
    out.weights.assign(family.size(), std::vector<Integer>(n, Integer(0)));
    for (size_t f = 0; f < family.size(); ++f)
        for (int j = 0; j < n; ++j) {
            Rational scaled = out.diagonals[f][j] * Rational(den) / Rational(g);
            if (!is_integer(scaled)) throw Error("weight scaling failed");
            out.weights[f][j] = scaled.get_num();
        }
    return out;
}

}  // namespace multihom
