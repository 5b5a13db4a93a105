#include <catch2/catch_amalgamated.hpp>

#include "multihom/chevalley.hpp"
#include "multihom/logder.hpp"
#include "multihom/parser.hpp"
#include "multihom/prng.hpp"

using namespace multihom;

namespace {

Polynomial p2(const std::string& s) { return parse_polynomial(s + " + 0*x*y").poly; }
Polynomial p3(const std::string& s) { return parse_polynomial(s + " + 0*x*y*z").poly; }

QMatrix mat(const std::vector<std::vector<long>>& rows) {
    QMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

// Independent dense oracle: assemble the jet system directly from the
// definition as one dense matrix and read the level-0 projection from the
// full dense kernel. Shares nothing with the sparse engine or the column
// bookkeeping of logder.hpp.
std::vector<std::vector<Rational>> dense_level0_oracle(const Polynomial& f, int m) {
    int n = f.nvars();
    std::vector<std::pair<int, Monomial>> acols;  // (var, mono), deg 1..m+1
    for (int d = 1; d <= m + 1; ++d)
        for (const Monomial& mono : monomials_of_degree(n, d))
            for (int i = 0; i < n; ++i) acols.emplace_back(i, mono);
    std::vector<Monomial> hcols = monomials_up_to_degree(n, m);
    std::vector<Monomial> rows = monomials_up_to_degree(n, m);

    QMatrix sys(static_cast<int>(rows.size()), static_cast<int>(acols.size() + hcols.size()));
    for (size_t c = 0; c < acols.size(); ++c) {
        auto [i, beta] = acols[c];
        Polynomial contrib = Polynomial::monomial(n, beta, 1) * f.partial_derivative(i);
        for (size_t r = 0; r < rows.size(); ++r)
            sys(static_cast<int>(r), static_cast<int>(c)) = contrib.coeff(rows[r]);
    }
    for (size_t c = 0; c < hcols.size(); ++c) {
        Polynomial contrib = Polynomial::monomial(n, hcols[c], 1) * f;
        for (size_t r = 0; r < rows.size(); ++r)
            sys(static_cast<int>(r), static_cast<int>(acols.size() + c)) = -contrib.coeff(rows[r]);
    }
    // project the kernel onto the linear coefficient coordinates, as
    // vectorized matrices A(i,j) = coeff of x_i in a_j
    std::vector<std::vector<Rational>> projected;
    for (const auto& v : sys.nullspace()) {
        std::vector<Rational> lin(n * n, Rational(0));
        for (size_t c = 0; c < acols.size(); ++c) {
            auto [j, beta] = acols[c];
            if (beta.degree() != 1) continue;
            int i = 0;
            while (!beta.has_variable(i)) ++i;
            lin[i * n + j] = v[c];
        }
        projected.push_back(std::move(lin));
    }
    return canonical_span_basis(projected);
}

std::vector<std::vector<Rational>> level0_as_matrices_span(const JetLieAlgebra& l) {
    std::vector<std::vector<Rational>> vecs;
    for (const auto& b : l.basis) vecs.push_back(b.linear_part().vectorize());
    return canonical_span_basis(vecs);
}

}  // namespace

TEST_CASE("apply on desk examples") {
    Polynomial f = p2("x^2 + y^3");
    VectorFieldJet euler({p2("3*x"), p2("2*y")}, 6);
    CHECK(euler.apply(Jet(f, 6)) == Jet(p2("6*x^2 + 6*y^3"), 6));

    VectorFieldJet xdx({p2("x"), p2("0")}, 4);
    CHECK(xdx.apply(Jet(p2("x*y"), 4)) == Jet(p2("x*y"), 4));

    VectorFieldJet xdy({p2("0"), p2("x")}, 4);
    CHECK(xdy.apply(Jet(p2("x^2"), 4)).is_zero());
}

TEST_CASE("bracket on desk examples") {
    VectorFieldJet xdx({p2("x"), p2("0")}, 5);
    VectorFieldJet ydy({p2("0"), p2("y")}, 5);
    CHECK(xdx.bracket(ydy).is_zero());

    VectorFieldJet xdy({p2("0"), p2("x")}, 5);
    CHECK(xdx.bracket(xdy) == xdy);

    VectorFieldJet zero = VectorFieldJet::zero(2, 5);
    CHECK(zero.bracket(xdx).is_zero());
}

TEST_CASE("bracket compatibility with matrix commutators") {
    Prng rng(606);
    for (int trial = 0; trial < 50; ++trial) {
        int n = static_cast<int>(rng.range(2, 3));
        QMatrix a(n, n), b(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                a(i, j) = rng.range(-3, 3);
                b(i, j) = rng.range(-3, 3);
            }
        VectorFieldJet va = VectorFieldJet::from_linear_matrix(a, 4);
        VectorFieldJet vb = VectorFieldJet::from_linear_matrix(b, 4);
        CHECK(va.bracket(vb).linear_part() == QMatrix::commutator(a, b));
    }
}

TEST_CASE("log derivations of xy contain the coordinate Euler fields") {
    auto res = log_derivations_at(p2("x*y"), 0, 3);
    std::vector<std::vector<Rational>> vecs;
    for (const auto& b : res.basis) vecs.push_back(b.linear_part().vectorize());
    auto span = canonical_span_basis(vecs);
    REQUIRE(span.size() == 2);
    CHECK(in_span(span, mat({{1, 0}, {0, 0}}).vectorize()));
    CHECK(in_span(span, mat({{0, 0}, {0, 1}}).vectorize()));
    for (size_t i = 0; i < res.basis.size(); ++i)
        CHECK(satisfies_log_congruence(p2("x*y"), res.lifts[i], res.cofactors[i], res.m));
}

TEST_CASE("cusp linear parts span the Euler field and one nilpotent direction") {
    auto l = stabilized_log_derivations(p2("x^2 + y^3"), 0);
    CHECK(l.dim() == 2);
    CHECK(l.witness <= 4);
    auto span = level0_as_matrices_span(l);
    REQUIRE(span.size() == 2);
    CHECK(in_span(span, mat({{3, 0}, {0, 2}}).vectorize()));
    // the field 3y^2 dx - 2x dy has linear part -2 x dy
    CHECK(in_span(span, mat({{0, -2}, {0, 0}}).vectorize()));
    for (size_t i = 0; i < l.basis.size(); ++i) {
        CHECK(satisfies_log_congruence(l.f, l.lifts[i], l.cofactors[i], l.witness));
        CHECK(l.basis[i].in_delta());
    }
    // dims along the sweep are non-increasing
    for (size_t i = 1; i < l.dims_by_m.size(); ++i)
        CHECK(l.dims_by_m[i].second <= l.dims_by_m[i - 1].second);
}

TEST_CASE("xy stabilizes to the diagonal algebra") {
    auto l = stabilized_log_derivations(p2("x*y"), 0);
    CHECK(l.dim() == 2);
    auto span = level0_as_matrices_span(l);
    auto oracle = canonical_span_basis(
        {mat({{1, 0}, {0, 0}}).vectorize(), mat({{0, 0}, {0, 1}}).vectorize()});
    CHECK(span == oracle);
}

TEST_CASE("T-series level-0 parts are all nilpotent") {
    // Matching the x^2*y^2 part forces diagonal linear parts and the
    // x^5/y^5 coefficients then force them to vanish, so g_0 = 0 here and
    // the nilpotency statement holds with an empty basis.
    Polynomial f = p2("x^5 + y^5 + x^2*y^2");
    auto l = stabilized_log_derivations(f, 0);
    auto parts = linear_parts(l);
    for (const auto& a : parts) CHECK(is_nilpotent(a));
    // independent dense solve at fixed large m, then exact nilpotency
    auto oracle = dense_level0_oracle(f, 12);
    auto mine = level0_as_matrices_span(l);
    CHECK(mine == oracle);
    CHECK(oracle.empty());
    for (const auto& row : oracle) {
        QMatrix a(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a(i, j) = row[i * 2 + j];
        CHECK(is_nilpotent(a));
    }
}

TEST_CASE("level-0 projection agrees with the dense oracle") {
    for (const char* germ : {"x^2 + y^3", "x*y", "x^2 + 2*x*y^2 + y^4 + y^5"}) {
        Polynomial f = p2(germ);
        auto l = stabilized_log_derivations(f, 0);
        auto oracle = dense_level0_oracle(f, l.witness);
        CHECK(level0_as_matrices_span(l) == oracle);
    }
    Polynomial umb = p3("x^2 - y^2*z");
    auto lu = stabilized_log_derivations(umb, 0);
    auto oracle = dense_level0_oracle(umb, lu.witness);
    CHECK(level0_as_matrices_span(lu) == oracle);
}

TEST_CASE("invalid germs are rejected") {
    CHECK_THROWS_AS(log_derivations_at(p2("0*x"), 0, 3), InvalidGermError);
    CHECK_THROWS_AS(log_derivations_at(p2("1 + x"), 0, 3), InvalidGermError);
    CHECK_THROWS_AS(stabilized_log_derivations(p2("0*x"), 0), InvalidGermError);
}

TEST_CASE("constant-part solutions witness smooth factors") {
    // smooth germ x in two variables: d/dy is logarithmic with constant part
    auto c1 = constant_part_solutions(p2("x"));
    CHECK(!c1.empty());

    // x^2 in two variables is a product with a smooth factor
    auto c2 = constant_part_solutions(p2("x^2"));
    CHECK(!c2.empty());

    // the cusp has no logarithmic field with a constant part
    CHECK(constant_part_solutions(p2("x^2 + y^3")).empty());
    CHECK(constant_part_solutions(p3("x^2 - y^2*z")).empty());
}

TEST_CASE("pinned lift realizes a prescribed linear part") {
    Polynomial f = p2("x^2 + y^3");
    auto got = lift_with_linear_part(f, 8, mat({{3, 0}, {0, 2}}));
    REQUIRE(got.has_value());
    CHECK(got->first.linear_part() == mat({{3, 0}, {0, 2}}));
    CHECK(satisfies_log_congruence(f, got->first.components(), got->second, 8));

    // the identity is not a logarithmic linear part of the cusp
    CHECK(!lift_with_linear_part(f, 8, QMatrix::identity(2)).has_value());
}

TEST_CASE("stabilized bases satisfy their congruences at level 1") {
    Polynomial f = p3("x^2 - y^2*z");
    auto l = stabilized_log_derivations(f, 1);
    CHECK(l.dim() >= 2);
    for (size_t i = 0; i < l.basis.size(); ++i)
        CHECK(satisfies_log_congruence(f, l.lifts[i], l.cofactors[i], l.witness));
    // bracket closure was verified internally; spot-check one pair here
    if (l.dim() >= 2) {
        std::vector<std::vector<Rational>> coords;
        for (const auto& b : l.basis) coords.push_back(field_coordinates(b, l.level + 1));
        VectorFieldJet br = l.basis[0].bracket(l.basis[1]);
        CHECK(in_span(coords, field_coordinates(br, l.level + 1)));
    }
}

TEST_CASE("flows and transports are mutually consistent") {
    Prng rng(808);
    for (int trial = 0; trial < 20; ++trial) {
        int order = 6;
        // a correction field with coefficients of degree >= 2
        std::vector<Polynomial> comp;
        for (int i = 0; i < 2; ++i) {
            std::vector<Polynomial::Term> ts;
            for (int t = 0; t < 2; ++t) {
                std::vector<int> e{static_cast<int>(rng.range(0, 2)),
                                   static_cast<int>(rng.range(0, 2))};
                if (e[0] + e[1] < 2) e[0] += 2;
                ts.emplace_back(Monomial::from_exponents(e), Rational(rng.range(-2, 2)));
            }
            comp.push_back(Polynomial::from_terms(2, std::move(ts)));
        }
        VectorFieldJet xi(comp, order);
        CoordinateChangeJet phi = flow_of(xi, order);
        CHECK(phi.tangent_to_identity());
        CoordinateChangeJet phi_inv = invert_change(phi);
        // the flow of -xi is the inverse flow
        CHECK(phi_inv == flow_of(xi * Rational(-1), order));

        QMatrix a(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) a(i, j) = rng.range(-2, 2);
        VectorFieldJet delta = VectorFieldJet::from_linear_matrix(a, order);
        // exp(ad_xi) delta equals the composition-formula pullback
        VectorFieldJet via_series = exp_ad_transport(delta, xi);
        VectorFieldJet via_compose = transport_pullback(delta, phi, phi_inv);
        CHECK(via_series.truncated_to(order - 1) == via_compose.truncated_to(order - 1));
    }
}
