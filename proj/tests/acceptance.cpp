// Acceptance suite: runs every acceptance criterion at its stated bound and
// prints one pass/fail line each. All equality checks are exact rational
// arithmetic; the only tolerances are the wall-clock limits.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "multihom/report.hpp"

using namespace multihom;

namespace {

int failures = 0;

double run_timed(const std::string& name, double limit_seconds,
                 const std::function<void()>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
        body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = error.empty() && (limit_seconds <= 0 || secs < limit_seconds);
    if (!ok) ++failures;
    std::printf("%s %s (%.2fs%s)%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), secs,
                limit_seconds > 0 ? (", limit " + std::to_string((int)limit_seconds) + "s").c_str()
                                  : "",
                error.empty() ? "" : " error: ", error.c_str());
    return secs;
}

void require(bool cond, const std::string& what) {
    if (!cond) throw Error("check failed: " + what);
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

std::vector<Integer> izvec(const std::vector<long>& r) {
    std::vector<Integer> v;
    for (long x : r) v.emplace_back(x);
    return v;
}

Polynomial p2(const std::string& s) { return parse_polynomial(s + " + 0*x*y").poly; }

std::string cli_path;

std::string run_cli(const std::string& args, int& exit_code) {
    std::string out_file = "/tmp/multihom_acceptance_out.txt";
    std::string cmd = cli_path + " " + args + " > " + out_file + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::vector<std::string> corpus = {
    "x^2+y^3", "x*y", "x^2 - y^2*z", "x^5+y^5+x^2*y^2", "x^2+2*x*y^2+y^4+y^5"};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) cli_path = argv[1];

    run_timed("criterion 1: cusp end-to-end", 2.0, [] {
        AnalysisConfig cfg;
        auto rep = analyze("x^2+y^3", cfg);
        require(rep.torus.rank == 1, "s = 1");
        require(rep.torus.weights == imat({{3, 2}}), "canonical weights (3,2)");
        require(rep.torus.multidegrees == izvec({6}), "lambda = (6)");
        require(rep.normalized.poly() == p2("x^2 + y^3"), "normalized equation x^2+y^3");
        require(rep.quasihomogeneous, "quasihomogeneous flag");
        require(rep.diagnostics.dim_g0 == 2, "dim g0 = 2");
        require(rep.diagnostics.weight_table.size() == 1 &&
                    rep.diagnostics.weight_table[0].nilpotent_linear_part &&
                    rep.diagnostics.weight_table[0].weight == IVec{1},
                "one nilpotent weight-1 direction");
        require(rep.diagnostics.bracket_table == std::vector<IVec>{IVec{1}},
                "bracket table shows weight 1");
    });

    run_timed("criterion 2: monomial torus", 2.0, [] {
        AnalysisConfig cfg;
        auto rep = analyze("x*y", cfg);
        require(rep.torus.rank == 2, "s = 2");
        require(rep.torus.weights == imat({{1, 0}, {0, 1}}), "weight matrix = identity");
        require(rep.torus.lattice.contains(izvec({1, 0})) &&
                    rep.torus.lattice.contains(izvec({0, 1})),
                "lattice = Z^2");
        require(rep.torus.multidegrees == izvec({1, 1}), "lambda dual pattern (1,1)");
        require(rep.normalized.poly() == p2("x*y"), "g = xy");
    });

    run_timed("criterion 3: Whitney umbrella", 5.0, [] {
        AnalysisConfig cfg;
        cfg.factors = {parse_polynomial("x^2 - y^2*z").poly};
        auto rep = analyze("x^2 - y^2*z", cfg);
        require(rep.torus.rank == 2, "s = 2");
        // the saturated lattice is {w : 2 w1 = 2 w2 + w3} in Hermite form
        require(rep.torus.weights == imat({{1, 1, 0}, {1, 0, 2}}), "Hermite basis");
        for (const auto& w : rep.torus.weights)
            require(2 * w[0] == 2 * w[1] + w[2], "rows satisfy 2w1 = 2w2 + w3");
        auto relation_lattice = saturate(3, imat({{1, 1, 0}, {1, 0, 2}}));
        require(lattices_equal(rep.torus.lattice, relation_lattice), "lattice equality");
        require(rep.torus.multidegrees == izvec({2, 2}), "multidegrees (2,2)");
        require(rep.factor_data.size() == 1 && rep.factor_data[0].second == izvec({2, 2}),
                "single irreducible factor has multidegree (2,2)");
    });

    run_timed("criterion 4: non-multihomogeneous control at N = 14", 10.0, [] {
        AnalysisConfig cfg;
        cfg.truncation_order = 14;
        auto rep = analyze("x^5+y^5+x^2*y^2", cfg);
        require(rep.torus.rank == 0, "s = 0");
        require(rep.diagnostics.all_nilpotent_certified, "g0 certified nilpotent");
        require(rep.saito.evidence == "no", "saito evidence 'no'");
        int code = 0;
        std::string out;
        if (!cli_path.empty()) {
            out = run_cli("saito \"x^5+y^5+x^2*y^2\"", code);
            require(code == 0 && out.find("no") != std::string::npos, "CLI saito 'no'");
        }
    });

    run_timed("criterion 5: hidden quasihomogeneity", 5.0, [] {
        AnalysisConfig cfg;
        auto rep = analyze("x^2+2*x*y^2+y^4+y^5", cfg);
        require(rep.torus.rank == 1, "s = 1");
        require(rep.torus.weights == imat({{5, 2}}), "weights (5,2)");
        require(rep.torus.multidegrees == izvec({10}), "lambda = (10)");
        Polynomial g = rep.normalized.poly();
        require(g == p2("x^2 + y^5"), "normalized equation proportional to x^2+y^5");
        require(rep.presentation.has_value(), "presentation emitted");
        int order = rep.order;
        // the emitted change composes with x -> x + y^2 (the inverse of
        // x -> x - y^2) to the identity mod m^{N+1}
        std::vector<Jet> inv_comp{Jet(p2("x + y^2"), order), Jet(p2("y"), order)};
        CoordinateChangeJet inv(inv_comp, order);
        require(compose_changes(rep.presentation->change, inv) ==
                    CoordinateChangeJet::identity(2, order),
                "change o (x -> x + y^2) = id");
        require(compose_changes(inv, rep.presentation->change) ==
                    CoordinateChangeJet::identity(2, order),
                "(x -> x + y^2) o change = id");
    });

    run_timed("criterion 6: Lemma 4 stabilization", 30.0, [] {
        for (const auto& text : corpus) {
            Polynomial f = parse_polynomial(text).poly;
            auto l = stabilized_log_derivations(f, 0);
            for (size_t i = 1; i < l.dims_by_m.size(); ++i)
                require(l.dims_by_m[i].second <= l.dims_by_m[i - 1].second,
                        "dims non-increasing for " + text);
            // re-running with m_max = witness + 3 changes nothing
            auto l2 = stabilized_log_derivations(f, 0, {l.witness + 3});
            require(l2.witness == l.witness, "witness stable for " + text);
            require(l2.dim() == l.dim(), "dimension stable for " + text);
            for (int i = 0; i < l.dim(); ++i)
                require(l2.basis[i] == l.basis[i], "basis stable for " + text);
        }
    });

    for (const auto& text : corpus) {
        run_timed("criterion 7: Theorem 5 invariance for " + text, 60.0, [&text] {
            Polynomial f = parse_polynomial(text).poly;
            AnalysisConfig cfg;
            cfg.seed = 2024;
            auto rep = invariance_suite(f, default_variable_names(f.nvars()), cfg, 10);
            std::string notes;
            for (const auto& r : rep.results)
                if (!r.agreed) notes += " trial " + std::to_string(r.trial) + ": " + r.note;
            require(rep.failures == 0, "zero counterexamples;" + notes);
        });
    }

    run_timed("criterion 8a: Jordan-Chevalley property suite (100 cases)", 30.0, [] {
        Prng rng(881);
        for (int trial = 0; trial < 100; ++trial) {
            int n = static_cast<int>(rng.range(1, 5));
            QMatrix a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    Rational c(rng.range(-6, 6), rng.range(1, 3));
                    c.canonicalize();
                    a(i, j) = c;
                }
            auto [s, nil] = jordan_chevalley(a);
            require(s + nil == a, "S + N = A");
            require(QMatrix::commutator(s, nil).is_zero(), "SN = NS");
            require(nil.pow(n).is_zero(), "N^n = 0");
            require(is_squarefree(minimal_poly(s)), "squarefree minimal polynomial");
        }
    });

    run_timed("criterion 8b: SNF and saturation property suite (100 cases)", 30.0, [] {
        Prng rng(882);
        for (int trial = 0; trial < 100; ++trial) {
            int n = static_cast<int>(rng.range(1, 4));
            int g = static_cast<int>(rng.range(1, 3));
            IMat gens(g, IVec(n, Integer(0)));
            for (auto& row : gens)
                for (auto& x : row) x = rng.range(-5, 5);
            auto snf = smith_normal_form(gens);
            for (int i = 0; i + 1 < snf.rank; ++i) {
                require(snf.d[i][i] > 0, "positive invariant factors");
                require(snf.d[i + 1][i + 1] % snf.d[i][i] == 0, "divisibility chain");
            }
            auto sat = saturate(n, gens);
            require(saturate(n, sat.basis()) == sat, "saturation idempotent");
            for (const auto& row : gens) require(sat.contains(row), "generators inside");
        }
    });

    run_timed("criterion 8c: jet ring axioms (100 cases)", 30.0, [] {
        Prng rng(883);
        for (int trial = 0; trial < 100; ++trial) {
            int nvars = static_cast<int>(rng.range(1, 3));
            int order = static_cast<int>(rng.range(2, 6));
            auto rnd = [&]() {
                std::vector<Polynomial::Term> ts;
                for (int t = 0; t < 4; ++t) {
                    std::vector<int> e(nvars);
                    int budget = order;
                    for (int i = 0; i < nvars; ++i) {
                        e[i] = static_cast<int>(rng.range(0, budget));
                        budget -= e[i];
                    }
                    Rational c(rng.range(-9, 9), rng.range(1, 4));
                    c.canonicalize();
                    ts.emplace_back(Monomial::from_exponents(e), c);
                }
                return Jet(Polynomial::from_terms(nvars, std::move(ts)), order);
            };
            Jet a = rnd(), b = rnd(), c = rnd();
            require((a + b) + c == a + (b + c), "associativity of +");
            require(a * b == b * a, "commutativity");
            require(a * (b + c) == a * b + a * c, "distributivity");
            require((a * b) * c == a * (b * c), "associativity of *");
        }
    });

    run_timed("criterion 8d: bracket closure of computed algebras", 30.0, [] {
        for (const auto& text : corpus) {
            Polynomial f = parse_polynomial(text).poly;
            for (int k = 0; k <= 1; ++k) {
                auto l = stabilized_log_derivations(f, k);
                std::vector<std::vector<Rational>> coords;
                for (const auto& b : l.basis) coords.push_back(field_coordinates(b, k + 1));
                for (size_t i = 0; i < l.basis.size(); ++i)
                    for (size_t j = i + 1; j < l.basis.size(); ++j)
                        require(in_span(coords,
                                        field_coordinates(l.basis[i].bracket(l.basis[j]), k + 1)),
                                "bracket closure for " + text);
            }
        }
    });

    run_timed("criterion 8e: resonant-only Poincare-Dulac outputs", 30.0, [] {
        for (const auto& text : corpus) {
            AnalysisConfig cfg;
            auto rep = analyze(text, cfg);
            if (!rep.presentation) continue;
            const auto& eq = *rep.presentation;
            VectorFieldJet nu = eq.normalized_field - eq.semisimple_field;
            int n = nu.nvars();
            for (int j = 0; j < n; ++j)
                for (const auto& [beta, c] : nu.component(j).terms())
                    for (int i = 0; i < rep.torus.rank; ++i) {
                        Integer w = -rep.torus.weights[i][j];
                        for (int v = 0; v < n; ++v)
                            w += rep.torus.weights[i][v] * beta.exponent(v);
                        require(w == 0, "joint resonance of the normalized field for " + text);
                    }
        }
    });

    run_timed("criterion 8f: weight purity of every presentation (randomized)", 60.0, [] {
        // corpus presentations
        for (const auto& text : corpus) {
            AnalysisConfig cfg;
            auto rep = analyze(text, cfg);
            if (!rep.presentation) continue;
            const auto& g = rep.presentation->normalized.poly();
            for (const auto& [beta, c] : g.terms())
                for (int i = 0; i < rep.torus.rank; ++i) {
                    Integer l = 0;
                    for (int v = 0; v < g.nvars(); ++v)
                        l += rep.torus.weights[i][v] * beta.exponent(v);
                    require(l == rep.torus.multidegrees[i], "weight purity for " + text);
                }
            require(rep.presentation->unit.constant_term() != 0, "unit is a unit");
        }
        // randomized round trips through tangent-to-identity changes
        Prng rng(886);
        TorusData t;
        t.nvars = 2;
        t.rank = 1;
        t.weights = imat({{3, 2}});
        t.lattice = saturate(2, t.weights);
        t.p = QMatrix::identity(2);
        for (int trial = 0; trial < 10; ++trial) {
            int order = 12;
            std::vector<Jet> comp;
            for (int i = 0; i < 2; ++i) {
                Polynomial c = Polynomial::variable(2, i);
                std::vector<int> e{static_cast<int>(rng.range(0, 2)),
                                   static_cast<int>(rng.range(0, 2))};
                if (e[0] + e[1] < 2) e[0] += 2;
                c = c + Polynomial::monomial(2, Monomial::from_exponents(e),
                                             Rational(rng.range(-2, 2)));
                comp.emplace_back(c, order);
            }
            CoordinateChangeJet psi(comp, order);
            Jet f = compose(Jet(p2("x^2 + y^3"), order), psi);
            auto eq = make_equivariant(f, t, order);
            require(eq.multidegrees == izvec({6}), "round-trip lambda");
            for (const auto& [beta, c] : eq.normalized.poly().terms())
                require(3 * beta.exponent(0) + 2 * beta.exponent(1) == 6,
                        "round-trip weight purity");
        }
    });

    run_timed("criterion 9: byte-identical JSON across runs", 30.0, [] {
        if (cli_path.empty()) throw Error("CLI path not provided");
        int c1 = 0, c2 = 0, c3 = 0;
        std::string args = "analyze \"x^2 - y^2*z\" --seed 7 --format json";
        std::string a = run_cli(args, c1);
        std::string b = run_cli(args, c2);
        require(c1 == 0 && c2 == 0, "CLI runs succeed");
        require(!a.empty() && a == b, "identical bytes across runs");
        // thread-count environment must not change anything
        std::string c = run_cli(args, c3);
        setenv("OMP_NUM_THREADS", "4", 1);
        int c4 = 0;
        std::string d = run_cli(args, c4);
        unsetenv("OMP_NUM_THREADS");
        require(c == d, "identical bytes across thread counts");
        // the refusal contract
        int code = 0;
        run_cli("analyze \"x\"", code);
        require(code == 2, "refusal exits with code 2");
    });

    if (failures == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d acceptance criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
