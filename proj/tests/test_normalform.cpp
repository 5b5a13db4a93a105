#include <catch2/catch_amalgamated.hpp>

#include "multihom/normalform.hpp"
#include "multihom/parser.hpp"
#include "multihom/prng.hpp"

using namespace multihom;

namespace {

Polynomial p2(const std::string& s) { return parse_polynomial(s + " + 0*x*y").poly; }
Polynomial p3(const std::string& s) { return parse_polynomial(s + " + 0*x*y*z").poly; }

TorusData make_torus(const std::vector<std::vector<long>>& rows, int n) {
    TorusData t;
    t.nvars = n;
    t.rank = static_cast<int>(rows.size());
    for (const auto& r : rows) {
        IVec v;
        for (long x : r) v.emplace_back(x);
        t.weights.push_back(std::move(v));
    }
    t.lattice = saturate(n, t.weights);
    t.p = QMatrix::identity(n);
    return t;
}

IVec ivec(const std::vector<long>& r) {
    IVec v;
    for (long x : r) v.emplace_back(x);
    return v;
}

std::vector<Integer> izvec(const std::vector<long>& r) {
    std::vector<Integer> v;
    for (long x : r) v.emplace_back(x);
    return v;
}

// enumeration oracle for the generic-combination property
bool generic_property_holds(const TorusData& t, const IVec& wstar, int order) {
    int n = t.nvars;
    auto monos = monomials_up_to_degree(n, order + 1);
    for (const auto& a : monos)
        for (const auto& b : monos) {
            Integer ws = 0;
            IVec wv(t.rank, Integer(0));
            bool joint_zero = true;
            for (int j = 0; j < n; ++j) {
                long d = a.exponent(j) - b.exponent(j);
                ws += wstar[j] * d;
                for (int i = 0; i < t.rank; ++i) wv[i] += t.weights[i][j] * d;
            }
            for (const auto& x : wv)
                if (x != 0) joint_zero = false;
            if (ws == 0 && !joint_zero) return false;
        }
    return true;
}

}  // namespace

TEST_CASE("generic combination desk examples") {
    auto cusp = make_torus({{3, 2}}, 2);
    CHECK(generic_combination(cusp, 10) == ivec({3, 2}));

    // (1,-4) is the first valid combination in the search order; any w*
    // separating all weight collisions up to degree N+1 qualifies, and the
    // enumeration oracle certifies it
    auto grid = make_torus({{1, 0}, {0, 1}}, 2);
    IVec w = generic_combination(grid, 3);
    CHECK(w == ivec({1, -4}));
    CHECK(generic_property_holds(grid, w, 3));

    auto mixed = make_torus({{1, 1, 0}, {1, 0, 2}}, 3);
    IVec w3 = generic_combination(mixed, 4);
    CHECK(generic_property_holds(mixed, w3, 4));
}

TEST_CASE("poincare_dulac keeps an already-normal field") {
    auto t = make_torus({{3, 2}}, 2);
    VectorFieldJet euler({p2("3*x"), p2("2*y")}, 8);
    auto res = poincare_dulac(euler, t, 8);
    CHECK(res.change.is_identity());
    CHECK(res.normalized == euler.truncated_to(8));
    CHECK(res.semisimple_part == euler.truncated_to(8));
}

TEST_CASE("poincare_dulac removes one nonresonant term by hand") {
    // under diag(1,0): y^2 dx has ad-weight -1, so the single correction
    // xi = -(y^2 dx) with flow x -> x - y^2 normalizes the field
    auto t = make_torus({{1, 0}}, 2);
    VectorFieldJet delta({p2("x + y^2"), p2("0")}, 8);
    auto res = poincare_dulac(delta, t, 8);
    CHECK(res.normalized == VectorFieldJet({p2("x"), p2("0")}, 8));
    CHECK(res.change.component(0).poly() == p2("x - y^2"));
    CHECK(res.change.component(1).poly() == p2("y"));
    // push-forward correctness via the composition formula
    CoordinateChangeJet inv = invert_change(res.change);
    VectorFieldJet moved = transport_pullback(delta, res.change, inv);
    CHECK(moved.truncated_to(7) == res.normalized.truncated_to(7));
}

TEST_CASE("poincare_dulac keeps resonant tails and converges") {
    // y^2 dy is resonant under diag(1,0) and stays; the interaction with
    // the removed y^2 dx term lengthens the change beyond one step
    auto t = make_torus({{1, 0}}, 2);
    VectorFieldJet delta({p2("x + y^2"), p2("y^2")}, 8);
    auto res = poincare_dulac(delta, t, 8);
    CHECK(res.normalized == VectorFieldJet({p2("x"), p2("y^2")}, 8));
    CHECK(res.change.tangent_to_identity());
    CoordinateChangeJet inv = invert_change(res.change);
    VectorFieldJet moved = transport_pullback(delta, res.change, inv);
    CHECK(moved.truncated_to(7) == res.normalized.truncated_to(7));
}

TEST_CASE("poincare_dulac with nonresonant tail reduces to the linear part") {
    auto t = make_torus({{3, 2}}, 2);
    // all quadratic-coefficient terms below have nonzero (3,2)-ad-weight
    VectorFieldJet delta({p2("3*x + y^2"), p2("2*y + x^2")}, 9);
    auto res = poincare_dulac(delta, t, 9);
    CHECK(res.normalized == VectorFieldJet({p2("3*x"), p2("2*y")}, 9));
    CoordinateChangeJet inv = invert_change(res.change);
    VectorFieldJet moved = transport_pullback(delta, res.change, inv);
    CHECK(moved.truncated_to(8) == res.normalized.truncated_to(8));
    CHECK(res.change.tangent_to_identity());
}

TEST_CASE("poincare_dulac rejects off-span semisimple parts") {
    auto t = make_torus({{3, 2}}, 2);
    VectorFieldJet bad({p2("x"), p2("x + y")}, 6);  // semisimple part diag(1,1)
    CHECK_THROWS_AS(poincare_dulac(bad, t, 6), InvalidStateError);
}

TEST_CASE("make_equivariant on an already equivariant germ") {
    auto t = make_torus({{3, 2}}, 2);
    Jet f(p2("x^2 + y^3"), 10);
    auto eq = make_equivariant(f, t, 10);
    CHECK(eq.unit == Jet(p2("1"), 10));
    CHECK(eq.change.is_identity());
    CHECK(eq.normalized == f);
    CHECK(eq.multidegrees == izvec({6}));
}

TEST_CASE("make_equivariant uncovers the hidden cusp") {
    auto t = make_torus({{5, 2}}, 2);
    int order = 14;
    Jet f(p2("x^2 + 2*x*y^2 + y^4 + y^5"), order);
    auto eq = make_equivariant(f, t, order);
    CHECK(eq.normalized == Jet(p2("x^2 + y^5"), order));
    CHECK(eq.multidegrees == izvec({10}));
    // the emitted change is x -> x - y^2: composing with x -> x + y^2
    // gives the identity modulo the truncation order
    std::vector<Jet> plus{Jet(p2("x + y^2"), order), Jet(p2("y"), order)};
    CoordinateChangeJet expected_inverse(plus, order);
    CHECK(compose_changes(eq.change, expected_inverse) ==
          CoordinateChangeJet::identity(2, order));
    CHECK(compose_changes(expected_inverse, eq.change) ==
          CoordinateChangeJet::identity(2, order));
    // reconstruction: u^{-1} g = f o phi at the truncation order
    CHECK(eq.unit.invert_unit() * eq.normalized == compose(f, eq.change));
}

TEST_CASE("make_equivariant on the monomial torus") {
    auto t = make_torus({{1, 0}, {0, 1}}, 2);
    Jet f(p2("x*y"), 8);
    auto eq = make_equivariant(f, t, 8);
    CHECK(eq.normalized == Jet(p2("x*y"), 8));
    CHECK(eq.multidegrees == izvec({1, 1}));
}

TEST_CASE("round trip: equivariant germ, random tangent change, re-normalize") {
    Prng rng(2718);
    struct Case {
        Polynomial g0;
        TorusData t;
        std::vector<Integer> lambda;
    };
    std::vector<Case> cases{
        {p2("x^2 + y^3"), make_torus({{3, 2}}, 2), izvec({6})},
        {p2("x*y"), make_torus({{1, 0}, {0, 1}}, 2), izvec({1, 1})},
    };
    for (auto& cs : cases) {
        for (int trial = 0; trial < 5; ++trial) {
            int order = 12;
            // random tangent-to-identity polynomial change of degree <= 3
            std::vector<Jet> comp;
            for (int i = 0; i < 2; ++i) {
                Polynomial c = Polynomial::variable(2, i);
                for (int k = 0; k < 2; ++k) {
                    std::vector<int> e{static_cast<int>(rng.range(0, 3)),
                                       static_cast<int>(rng.range(0, 3))};
                    if (e[0] + e[1] < 2) e[0] += 2;
                    if (e[0] + e[1] > 3) continue;
                    c = c + Polynomial::monomial(2, Monomial::from_exponents(e),
                                                 Rational(rng.range(-2, 2)));
                }
                comp.emplace_back(c, order);
            }
            CoordinateChangeJet psi(comp, order);
            Jet f = compose(Jet(cs.g0, order), psi);
            auto eq = make_equivariant(f, cs.t, order);
            CHECK(eq.multidegrees == cs.lambda);
            // support-weight pattern: every monomial has the same joint weight
            for (const auto& [beta, c] : eq.normalized.poly().terms())
                for (int i = 0; i < cs.t.rank; ++i) {
                    Integer l = 0;
                    for (int j = 0; j < 2; ++j) l += cs.t.weights[i][j] * beta.exponent(j);
                    CHECK(l == cs.lambda[i]);
                }
            CHECK(eq.unit.invert_unit() * eq.normalized == compose(f, eq.change));
        }
    }
}

TEST_CASE("factor multidegrees desk examples") {
    auto grid = make_torus({{1, 0}, {0, 1}}, 2);
    Jet xy(p2("x*y"), 8);
    auto l = factor_multidegrees(xy, {p2("x"), p2("y")}, grid);
    REQUIRE(l.size() == 2);
    CHECK(l[0] == izvec({1, 0}));
    CHECK(l[1] == izvec({0, 1}));

    auto umb = make_torus({{1, 1, 0}, {1, 0, 2}}, 3);
    Jet w(p3("x^2 - y^2*z"), 8);
    auto lu = factor_multidegrees(w, {p3("x^2 - y^2*z")}, umb);
    REQUIRE(lu.size() == 1);
    CHECK(lu[0] == izvec({2, 2}));
}

TEST_CASE("factor multidegrees rejects bad factorizations") {
    auto grid = make_torus({{1, 0}, {0, 1}}, 2);
    Jet xy(p2("x*y"), 8);
    // duplicate factor
    CHECK_THROWS_AS(
        factor_multidegrees(Jet(p2("x^2*y^3"), 8),
                            {p2("x"), p2("x"), p2("y"), p2("y"), p2("y")}, grid),
        InvalidGermError);
    // product mismatch
    CHECK_THROWS_AS(factor_multidegrees(xy, {p2("x"), p2("x + y")}, grid), FactorizationError);
    // a factor spread over several weights (product matches up to a unit)
    CHECK_THROWS_AS(factor_multidegrees(xy, {p2("x + x*y"), p2("y")}, grid),
                    NonEquivariantFactorError);
}
