#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "trekcalc/covariance.hpp"
#include "trekcalc/pc.hpp"
#include "trekcalc/treks.hpp"
#include "test_support.hpp"

using namespace trekcalc;
using namespace trekcalc::testsupport;

namespace {

Dag chain3() { return Dag({1, 2, 3}, {{1, 2}, {2, 3}}); }
Dag collider3() { return Dag({1, 2, 3}, {{1, 3}, {2, 3}}); }

ParamPoint point_from(const Dag& dag, const std::vector<Rat>& vals) {
    ParamPoint p;
    std::size_t k = 0;
    for (const auto& e : dag.edges()) p.edge.emplace(e, vals.at(k++));
    return p;
}

}  // namespace

TEST_CASE("covariance entries of the chain") {
    SymbolicSigma s(chain3(), OmegaMode::identity);
    CHECK(s.entry(1, 1) == Poly::one());
    CHECK(s.entry(1, 2) == parse_poly("a[1,2]"));
    CHECK(s.entry(1, 3) == parse_poly("a[1,2]*a[2,3]"));
    CHECK(s.entry(2, 2) == parse_poly("1 + a[1,2]^2"));
    CHECK(s.entry(3, 3) == parse_poly("1 + a[2,3]^2 + a[1,2]^2*a[2,3]^2"));
    CHECK(s.entry(3, 1) == s.entry(1, 3));
    SymbolicSigma sym(chain3(), OmegaMode::symbolic);
    CHECK(sym.entry(1, 1) == Poly(Var::omega(1)));
    CHECK(sym.entry(2, 2) == parse_poly("w[2] + a[1,2]^2*w[1]"));
    CHECK(sym.entry(1, 3) == parse_poly("a[1,2]*a[2,3]*w[1]"));
}

TEST_CASE("covariance entries of the collider and a lone vertex") {
    SymbolicSigma s(collider3(), OmegaMode::identity);
    CHECK(s.entry(1, 2) == Poly::zero());
    CHECK(s.entry(1, 3) == parse_poly("a[1,3]"));
    CHECK(s.entry(3, 3) == parse_poly("1 + a[1,3]^2 + a[2,3]^2"));
    SymbolicSigma lone(Dag({7}, {}), OmegaMode::identity);
    CHECK(lone.entry(7, 7) == Poly::one());
}

TEST_CASE("minors of the chain and collider") {
    SymbolicSigma s(chain3(), OmegaMode::identity);
    CHECK(s.minor_det({1, 2}, {2, 3}) == Poly::zero());
    CHECK(s.minor_det({}, {}) == Poly::one());
    CHECK(s.minor_det({2}, {2}) == parse_poly("1 + a[1,2]^2"));
    SymbolicSigma c(collider3(), OmegaMode::identity);
    CHECK(c.minor_det({1, 3}, {2, 3}) == parse_poly("- a[1,3]*a[2,3]"));
    CHECK_THROWS_AS(s.minor_det({1}, {2, 3}), std::invalid_argument);
}

TEST_CASE("minor rows and columns can be swapped for symmetric sigma") {
    Rng rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        Dag d = random_dag(rng, 5);
        SymbolicSigma s(d, OmegaMode::identity);
        std::vector<int> vs = d.vertices();
        auto I2 = subsets(vs, 2);
        const auto& I = I2[rng.uniform_int(I2.size())];
        const auto& J = I2[rng.uniform_int(I2.size())];
        CHECK(s.minor_det(I, J) == s.minor_det(J, I));
    }
}

TEST_CASE("minor order does not depend on how index sets are given") {
    SymbolicSigma s(complete_dag(4), OmegaMode::identity);
    CHECK(s.minor_det({3, 1}, {4, 2}) == s.minor_det({1, 3}, {2, 4}));
}

TEST_CASE("cofactor and fraction-free determinants agree") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        Dag d = random_dag(rng, 6, 2, 3);
        SymbolicSigma s(d, OmegaMode::identity);
        std::vector<int> vs = d.vertices();
        auto picks = subsets(vs, 4);
        const auto& I = picks[rng.uniform_int(picks.size())];
        const auto& J = picks[rng.uniform_int(picks.size())];
        std::vector<std::vector<Poly>> m(I.size(), std::vector<Poly>(J.size()));
        for (std::size_t r = 0; r < I.size(); ++r)
            for (std::size_t c = 0; c < J.size(); ++c) m[r][c] = s.entry(I[r], J[c]);
        CHECK(det_cofactor(m) == det_bareiss(m));
    }
}

TEST_CASE("the full determinant is 1 with unit variances") {
    // det(Sigma) = det(I-A)^-T det(I-A)^-1 = 1 when Omega = I.
    for (const auto& dag : all_labeled_dags(3)) {
        SymbolicSigma s(dag, OmegaMode::identity);
        CHECK(s.minor_det(dag.vertices(), dag.vertices()) == Poly::one());
    }
    SymbolicSigma s5(complete_dag(5), OmegaMode::identity);
    CHECK(s5.minor_det(s5.dag().vertices(), s5.dag().vertices()) == Poly::one());
}

TEST_CASE("evaluated sigma is positive definite at random rational points") {
    Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 2 + static_cast<int>(rng.uniform_int(3));
        Dag d = random_dag(rng, n, 2, 3);
        SymbolicSigma s(d, OmegaMode::identity);
        ParamPoint pt = random_point(rng, d);
        auto assign = pt.assignment();
        // All leading principal minors strictly positive.
        std::vector<int> head;
        for (int v = 1; v <= n; ++v) {
            head.push_back(v);
            CHECK(rat_sign(s.minor_det(head, head).evaluate(assign)) == 1);
        }
    }
}

TEST_CASE("numeric evaluation matches the symbolic entries") {
    Rng rng(5);
    Dag d = random_dag(rng, 5, 3, 4);
    SymbolicSigma s(d, OmegaMode::identity);
    ParamPoint pt = random_point(rng, d);
    auto mat = s.evaluate(pt);
    auto assign = pt.assignment();
    std::vector<int> vs = d.vertices();
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = 0; j < vs.size(); ++j)
            CHECK(mat[i][j] == s.entry(vs[i], vs[j]).evaluate(assign));
}

TEST_CASE("exact partial correlation on the pinned 5-vertex model") {
    Dag d({1, 2, 3, 4, 5},
          {{1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 5}, {4, 5}});
    ParamPoint pt = point_from(d, {Rat(-3), Rat(-2), Rat(8), Rat(10), Rat(2), Rat(0)});
    SymbolicSigma s(d, OmegaMode::identity);
    auto [r2a, sa] = partial_corr_exact(s, PcQuery{1, 2, {5}}, pt);
    CHECK(r2a == Rat(1024, 1189));
    CHECK(sa == 1);
    auto [r2b, sb] = partial_corr_exact(s, PcQuery{1, 2, {3, 4}}, pt);
    CHECK(r2b == Rat(88, 105));
    CHECK(sb == 1);
    CHECK(r2a > r2b);
}

TEST_CASE("exact partial correlation vanishes exactly on a collider") {
    SymbolicSigma s(collider3(), OmegaMode::identity);
    auto [r2, sg] = partial_corr_exact(s, PcQuery{1, 2, {}},
                                       point_from(collider3(), {Rat(2), Rat(3)}));
    CHECK(r2 == Rat(0));
    CHECK(sg == 0);
}

TEST_CASE("float partial correlation at reference points") {
    // Independent pair: exactly zero.
    std::vector<std::vector<double>> eye{{1.0, 0.0}, {0.0, 1.0}};
    CHECK(partial_corr_float(eye, {1, 2}, PcQuery{1, 2, {}}) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // Plain 2x2 correlation.
    std::vector<std::vector<double>> two{{2.0, 1.0}, {1.0, 4.0}};
    CHECK(partial_corr_float(two, {1, 2}, PcQuery{1, 2, {}}) ==
          doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-12));
    // Conditioning reproduces the exact rational answer.
    Dag d({1, 2, 3, 4, 5}, {{1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 5}, {4, 5}});
    ParamPoint pt = point_from(d, {Rat(-3), Rat(-2), Rat(8), Rat(10), Rat(2), Rat(0)});
    SymbolicSigma s(d, OmegaMode::identity);
    auto mat = sigma_at_point(s, pt);
    double r = partial_corr_float(mat, d.vertices(), PcQuery{1, 2, {5}});
    CHECK(r == doctest::Approx(std::sqrt(1024.0 / 1189.0)).epsilon(1e-12));
    double r2 = partial_corr_float(mat, d.vertices(), PcQuery{1, 2, {3, 4}});
    CHECK(r2 == doctest::Approx(std::sqrt(88.0 / 105.0)).epsilon(1e-12));
    // Perfect correlation stays finite; the denominator uses marginal
    // variances, not the (singular) joint determinant.
    std::vector<std::vector<double>> rank1{{1.0, 1.0}, {1.0, 1.0}};
    CHECK(partial_corr_float(rank1, {1, 2}, PcQuery{1, 2, {}}) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // A collapsed variance makes the denominator vanish.
    std::vector<std::vector<double>> degenerate{{0.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(partial_corr_float(degenerate, {1, 2}, PcQuery{1, 2, {}}),
                    std::invalid_argument);
}

TEST_CASE("the numerator polynomial vanishes exactly when d-separated") {
    // |corr| = 0 at generic points iff the defining minor is the zero
    // polynomial, which happens iff S d-separates the pair.
    for (const auto& dag : all_labeled_dags(3)) {
        SymbolicSigma s(dag, OmegaMode::identity);
        std::vector<int> vs = dag.vertices();
        for (std::size_t a = 0; a < vs.size(); ++a)
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                std::vector<int> rest;
                for (int v : vs)
                    if (v != vs[a] && v != vs[b]) rest.push_back(v);
                for (const auto& S : all_subsets(rest)) {
                    std::vector<int> I{vs[a]};
                    std::vector<int> J{vs[b]};
                    for (int v : S) {
                        I.push_back(v);
                        J.push_back(v);
                    }
                    bool zero = s.minor_det(I, J).is_zero();
                    CHECK(zero == d_separates(dag, PcQuery{vs[a], vs[b], S}));
                }
            }
    }
}

TEST_CASE("rescaling by a diagonal keeps unit-variance structure consistent") {
    Dag d = chain3();
    ParamPoint pt = point_from(d, {Rat(1, 2), Rat(3)});
    std::map<int, Rat> diag{{1, Rat(2)}, {2, Rat(1)}, {3, Rat(4)}};
    ParamPoint scaled = scale_by_diagonal(pt, diag);
    // a'_ij = a_ij d_j / d_i, omega'_m = d_m^2.
    CHECK(scaled.edge.at({1, 2}) == Rat(1, 4));
    CHECK(scaled.edge.at({2, 3}) == Rat(12));
    CHECK(scaled.omega.at(1) == Rat(4));
    CHECK(scaled.omega.at(2) == Rat(1));
    CHECK(scaled.omega.at(3) == Rat(16));
}

TEST_CASE("rescaling acts as a group and matches D * Sigma * D") {
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        Dag d = random_dag(rng, 4, 2, 3);
        ParamPoint pt = random_point(rng, d);
        std::map<int, Rat> d1, d2, d12;
        for (int v : d.vertices()) {
            Rat x = abs(random_rational(rng));
            Rat y = abs(random_rational(rng));
            d1[v] = x;
            d2[v] = y;
            d12[v] = x * y;
        }
        ParamPoint once = scale_by_diagonal(scale_by_diagonal(pt, d1), d2);
        ParamPoint twice = scale_by_diagonal(pt, d12);
        CHECK(once.edge == twice.edge);
        CHECK(once.omega == twice.omega);

        // Sigma(scaled) == D Sigma D entrywise.
        SymbolicSigma sym(d, OmegaMode::symbolic);
        ParamPoint scaled = scale_by_diagonal(pt, d1);
        auto orig = sym.evaluate(pt);  // omegas default to 1
        auto resc = sym.evaluate(scaled);
        std::vector<int> vs = d.vertices();
        for (std::size_t i = 0; i < vs.size(); ++i)
            for (std::size_t j = 0; j < vs.size(); ++j)
                CHECK(resc[i][j] == d1[vs[i]] * orig[i][j] * d1[vs[j]]);
    }
}

TEST_CASE("partial correlations are invariant under rescaling") {
    Rng rng(404);
    for (int trial = 0; trial < 25; ++trial) {
        Dag d = random_dag(rng, 4, 2, 3);
        std::vector<int> vs = d.vertices();
        ParamPoint pt = random_point(rng, d);
        std::map<int, Rat> diag;
        for (int v : vs) diag[v] = abs(random_rational(rng));
        ParamPoint scaled = scale_by_diagonal(pt, diag);
        SymbolicSigma sym(d, OmegaMode::symbolic);
        for (const auto& S : all_subsets({3, 4})) {
            auto [r0, s0] = partial_corr_exact(sym, PcQuery{1, 2, S}, pt);
            auto [r1, s1] = partial_corr_exact(sym, PcQuery{1, 2, S}, scaled);
            CHECK(r0 == r1);
            CHECK(s0 == s1);
        }
    }
}
