#include <catch2/catch_amalgamated.hpp>

#include "multihom/parser.hpp"
#include "multihom/torus.hpp"

using namespace multihom;

namespace {

Polynomial p2(const std::string& s) { return parse_polynomial(s + " + 0*x*y").poly; }

QMatrix mat(const std::vector<std::vector<long>>& rows) {
    QMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

std::vector<std::vector<Rational>> span_of(const std::vector<QMatrix>& ms) {
    std::vector<std::vector<Rational>> v;
    for (const auto& m : ms) v.push_back(m.vectorize());
    return canonical_span_basis(v);
}

IMat imat(const std::vector<std::vector<long>>& rows) {
    IMat m;
    for (const auto& r : rows) {
        IVec v;
        for (long x : r) v.emplace_back(x);
        m.push_back(std::move(v));
    }
    return m;
}

}  // namespace

TEST_CASE("maximal toral family of the cusp algebra") {
    std::vector<QMatrix> g0{mat({{3, 0}, {0, 2}}), mat({{0, 1}, {0, 0}})};
    auto family = maximal_toral_family(g0, 2, 7);
    REQUIRE(!family.empty());
    auto fam_span = span_of(family);
    auto expected = span_of({mat({{3, 0}, {0, 2}})});
    CHECK(fam_span == expected);
    for (const auto& s : family) CHECK(is_semisimple(s));
}

TEST_CASE("maximal toral family of the diagonal algebra") {
    std::vector<QMatrix> g0{mat({{1, 0}, {0, 0}}), mat({{0, 0}, {0, 1}})};
    auto family = maximal_toral_family(g0, 2, 7);
    CHECK(span_of(family) == span_of(g0));
}

TEST_CASE("all-nilpotent algebras give the empty family") {
    std::vector<QMatrix> g0{mat({{0, 1}, {0, 0}})};
    CHECK(maximal_toral_family(g0, 2, 7).empty());
    CHECK(maximal_toral_family({}, 2, 7).empty());
}

TEST_CASE("toral family rejects non-subalgebras") {
    // span{E12, E21} is not closed: [E12, E21] = diag(1, -1)
    std::vector<QMatrix> g0{mat({{0, 1}, {0, 0}}), mat({{0, 0}, {1, 0}})};
    CHECK_THROWS_AS(maximal_toral_family(g0, 2, 7), CommutationError);
}

TEST_CASE("integral weight data desk examples") {
    auto t1 = integral_weight_data({mat({{3, 0}, {0, 2}})}, 2);
    CHECK(t1.rank == 1);
    CHECK(t1.weights == imat({{3, 2}}));
    CHECK(t1.p == QMatrix::identity(2));

    // saturation divides out the common factor
    auto t2 = integral_weight_data({mat({{6, 0}, {0, 4}})}, 2);
    CHECK(t2.rank == 1);
    CHECK(t2.weights == imat({{3, 2}}));

    auto t0 = integral_weight_data({}, 3);
    CHECK(t0.rank == 0);
    CHECK(t0.weights.empty());
    CHECK(t0.p == QMatrix::identity(3));
}

TEST_CASE("check_maximality desk examples") {
    std::vector<QMatrix> cusp_g0{mat({{3, 0}, {0, 2}}), mat({{0, 1}, {0, 0}})};
    auto t = integral_weight_data(maximal_toral_family(cusp_g0, 2, 7), 2);
    CHECK(check_maximality(t, cusp_g0).pass);

    std::vector<QMatrix> xy_g0{mat({{1, 0}, {0, 0}}), mat({{0, 0}, {0, 1}})};
    auto txy = integral_weight_data(maximal_toral_family(xy_g0, 2, 7), 2);
    CHECK(check_maximality(txy, xy_g0).pass);

    // negative control: drop one row of the xy weight matrix
    TorusData truncated = txy;
    truncated.rank = 1;
    truncated.weights = imat({{1, 0}});
    auto rep = check_maximality(truncated, xy_g0);
    CHECK(!rep.pass);
    REQUIRE(!rep.witnesses.empty());
    bool found = false;
    for (const auto& w : rep.witnesses) {
        QMatrix s = jordan_chevalley(w).semisimple;
        if (s(1, 1) != 0) found = true;
    }
    CHECK(found);
}

TEST_CASE("nilpotent cone diagnostic") {
    std::vector<QMatrix> cusp_g0{mat({{3, 0}, {0, 2}}), mat({{0, 1}, {0, 0}})};
    auto t = integral_weight_data(maximal_toral_family(cusp_g0, 2, 7), 2);
    // the x dy direction has ad-weight 1 under diag(3,2), so n_0 is zero
    CHECK(nilpotent_cone_diagnostic(t, cusp_g0).empty());

    std::vector<QMatrix> xy_g0{mat({{1, 0}, {0, 0}}), mat({{0, 0}, {0, 1}})};
    auto txy = integral_weight_data(maximal_toral_family(xy_g0, 2, 7), 2);
    CHECK(nilpotent_cone_diagnostic(txy, xy_g0).empty());

    // with s = 0 the whole nilpotent algebra shows up
    auto t0 = integral_weight_data({}, 2);
    auto cone = nilpotent_cone_diagnostic(t0, {mat({{0, 1}, {0, 0}})});
    REQUIRE(cone.size() == 1);
    CHECK(is_nilpotent(cone[0]));
}

TEST_CASE("seed independence of the invariants") {
    std::vector<QMatrix> cusp_g0{mat({{3, 0}, {0, 2}}), mat({{0, 1}, {0, 0}})};
    auto base = integral_weight_data(maximal_toral_family(cusp_g0, 2, 1), 2);
    auto base_form = canonical_comparison_form(base, {});
    for (std::uint64_t seed = 2; seed <= 21; ++seed) {
        auto t = integral_weight_data(maximal_toral_family(cusp_g0, 2, seed), 2);
        CHECK(t.rank == base.rank);
        CHECK(canonical_comparison_form(t, {}) == base_form);
    }
}

TEST_CASE("determinism: identical seed gives identical data") {
    std::vector<QMatrix> g0{mat({{3, 0}, {0, 2}}), mat({{0, 1}, {0, 0}})};
    auto a = maximal_toral_family(g0, 2, 42);
    auto b = maximal_toral_family(g0, 2, 42);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("canonical comparison form is permutation invariant") {
    // reports keep the user's coordinate order; the comparison form
    // canonicalizes over coordinate permutations
    auto t1 = integral_weight_data({mat({{3, 0}, {0, 2}})}, 2);
    auto t2 = integral_weight_data({mat({{2, 0}, {0, 3}})}, 2);
    CHECK(t2.p == QMatrix::identity(2));
    CHECK(t1.weights == imat({{3, 2}}));
    CHECK(t2.weights == imat({{2, 3}}));
    CHECK(canonical_comparison_form(t1, {}) == canonical_comparison_form(t2, {}));

    // a genuinely skewed frame still canonicalizes to the same form
    QMatrix u = mat({{1, 1}, {0, 1}});
    auto t3 = integral_weight_data({u * mat({{3, 0}, {0, 2}}) * u.inverse()}, 2);
    CHECK(canonical_comparison_form(t3, {}) == canonical_comparison_form(t1, {}));
}

TEST_CASE("diagonalizing change transports fields to diagonal form") {
    // x^2 - y^2 carries the swap symmetry; the change takes it to x*y
    std::vector<QMatrix> family{QMatrix::identity(2), mat({{0, 1}, {1, 0}})};
    auto t = integral_weight_data(family, 2);
    CHECK(t.rank == 2);
    int order = 6;
    CoordinateChangeJet change = diagonalizing_change(t, order);
    Jet f(p2("x^2 - y^2"), order);
    Jet g = compose(f, change);
    // proportional to x*y
    Polynomial xy = p2("x*y");
    Rational c = g.poly().coeff(Monomial::from_exponents({1, 1}));
    CHECK(c != 0);
    CHECK(g.poly() == xy * c);
    // the swap field becomes diagonal
    VectorFieldJet swap_field = VectorFieldJet::from_linear_matrix(mat({{0, 1}, {1, 0}}), order);
    VectorFieldJet moved = transport_pullback(swap_field, change, invert_change(change));
    QMatrix lin = moved.linear_part();
    CHECK(lin(0, 1) == 0);
    CHECK(lin(1, 0) == 0);
}

TEST_CASE("weight decomposition of the cusp algebra") {
    Polynomial f = p2("x^2 + y^3");
    auto l = stabilized_log_derivations(f, 0);
    std::vector<QMatrix> g0 = linear_parts(l);
    auto t = integral_weight_data(maximal_toral_family(g0, 2, 7), 2);
    REQUIRE(t.rank == 1);
    auto dec = weight_decompose(l, t);
    CHECK(dec.estimated_r == 1);
    REQUIRE(dec.graded.size() == 2);
    bool saw_sigma = false, saw_weight_one = false;
    for (const auto& e : dec.graded) {
        if (e.in_sigma_span) {
            saw_sigma = true;
            CHECK(e.weight == IVec{0});
        } else {
            // the x dy direction has ad-weight 3 - 2 = 1
            CHECK(e.weight == IVec{1});
            saw_weight_one = true;
            // [sigma, v] = weight * v exactly
            VectorFieldJet sigma =
                VectorFieldJet::diagonal_field(t.weight_row_rational(0), l.level);
            CHECK(sigma.bracket(e.field) == e.field * Rational(1));
        }
    }
    CHECK(saw_sigma);
    CHECK(saw_weight_one);
}

TEST_CASE("positive weight witness") {
    auto cusp = integral_weight_data({mat({{3, 0}, {0, 2}})}, 2);
    auto w = positive_weight_witness(cusp, {Integer(6)});
    REQUIRE(w.has_value());
    CHECK(*w == IVec{3, 2});

    // mixed-sign-only lattice: no strictly positive vector
    auto mixed = integral_weight_data({mat({{1, 0}, {0, -1}})}, 2);
    CHECK(!positive_weight_witness(mixed, {Integer(1)}).has_value());

    // rank 0
    auto zero = integral_weight_data({}, 2);
    CHECK(!positive_weight_witness(zero, {}).has_value());
}

TEST_CASE("umbrella lattice admits a positive weight vector") {
    TorusData t;
    t.nvars = 3;
    t.rank = 2;
    t.weights = imat({{1, 1, 0}, {1, 0, 2}});
    t.lattice = saturate(3, t.weights);
    auto w = positive_weight_witness(t, {Integer(2), Integer(2)});
    REQUIRE(w.has_value());
    for (const auto& x : *w) CHECK(x > 0);
    CHECK(t.lattice.contains(*w));
}

TEST_CASE("nilpotency certificates for spans") {
    CHECK(all_span_elements_nilpotent({}, 2));
    CHECK(all_span_elements_nilpotent({mat({{0, 1}, {0, 0}})}, 2));
    // E12 and E21 span contains non-nilpotent combinations
    CHECK(!all_span_elements_nilpotent({mat({{0, 1}, {0, 0}}), mat({{0, 0}, {1, 0}})}, 2));
    // strictly upper triangular 3x3 span: all nilpotent
    QMatrix e12(3, 3), e13(3, 3), e23(3, 3);
    e12(0, 1) = 1;
    e13(0, 2) = 1;
    e23(1, 2) = 1;
    CHECK(all_span_elements_nilpotent({e12, e13, e23}, 3));
}
