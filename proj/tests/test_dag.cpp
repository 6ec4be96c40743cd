#include <doctest.h>

#include <algorithm>

#include "trekcalc/dag.hpp"
#include "test_support.hpp"

using namespace trekcalc;
using namespace trekcalc::testsupport;

namespace {

Dag chain3() { return Dag({1, 2, 3}, {{1, 2}, {2, 3}}); }
Dag collider3() { return Dag({1, 2, 3}, {{1, 3}, {2, 3}}); }
Dag diamond() { return Dag({1, 2, 3, 4}, {{1, 2}, {1, 3}, {2, 4}, {3, 4}}); }

}  // namespace

TEST_CASE("dag construction validates its input") {
    CHECK_THROWS_WITH_AS(Dag({1, 2}, {{1, 2}, {2, 1}}), "cycle-detected",
                         std::invalid_argument);
    CHECK_THROWS_AS(Dag({1, 2, 3}, {{1, 2}, {2, 3}, {3, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Dag({1, 2}, {{1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(Dag({1, 2}, {{1, 2}, {1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(Dag({1, 2}, {{1, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(Dag({1, 1}, {}), std::invalid_argument);
}

TEST_CASE("topological sort is deterministic with order tie-break") {
    CHECK(topological_sort(chain3()) == std::vector<int>{1, 2, 3});
    CHECK(topological_sort(Dag({1, 2}, {})) == std::vector<int>{1, 2});
    // Declared order drives ties: 5 before 2 when both are ready.
    Dag d({5, 2, 9}, {{5, 9}, {2, 9}});
    CHECK(topological_sort(d) == std::vector<int>{5, 2, 9});
    // Edges must come before their heads even against declared order.
    Dag e({3, 1}, {{1, 3}});
    CHECK(topological_sort(e) == std::vector<int>{1, 3});
}

TEST_CASE("is_below is strict reachability") {
    Dag d = chain3();
    CHECK(is_below(d, 1, 3));
    CHECK(is_below(d, 1, 2));
    CHECK_FALSE(is_below(d, 3, 1));
    CHECK_FALSE(is_below(d, 1, 1));
    CHECK_FALSE(is_below(d, 2, 1));
    CHECK_THROWS_AS(is_below(d, 1, 7), std::invalid_argument);
}

TEST_CASE("path enumeration includes the length-0 path") {
    Dag d = chain3();
    auto p13 = enumerate_paths(d, 1, 3);
    REQUIRE(p13.size() == 1);
    CHECK(p13[0] == Path{1, 2, 3});
    auto p11 = enumerate_paths(d, 1, 1);
    REQUIRE(p11.size() == 1);
    CHECK(p11[0] == Path{1});
    CHECK(enumerate_paths(d, 3, 1).empty());

    auto p14 = enumerate_paths(diamond(), 1, 4);
    REQUIRE(p14.size() == 2);
    CHECK(std::find(p14.begin(), p14.end(), Path{1, 2, 4}) != p14.end());
    CHECK(std::find(p14.begin(), p14.end(), Path{1, 3, 4}) != p14.end());
}

TEST_CASE("every enumerated path walks real edges") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        Dag d = random_dag(rng, 6);
        for (int i : d.vertices())
            for (int j : d.vertices())
                for (const auto& p : enumerate_paths(d, i, j)) {
                    REQUIRE(p.front() == i);
                    REQUIRE(p.back() == j);
                    for (std::size_t k = 0; k + 1 < p.size(); ++k)
                        REQUIRE(d.has_edge(p[k], p[k + 1]));
                }
    }
}

TEST_CASE("d-separation matches the textbook examples") {
    CHECK(d_separates(chain3(), {1, 3, {2}}));
    CHECK_FALSE(d_separates(chain3(), {1, 3, {}}));
    CHECK(d_separates(collider3(), {1, 2, {}}));
    CHECK_FALSE(d_separates(collider3(), {1, 2, {3}}));
    // Conditioning on a collider's descendant also opens the path.
    Dag d({1, 2, 3, 4}, {{1, 3}, {2, 3}, {3, 4}});
    CHECK(d_separates(d, {1, 2, {}}));
    CHECK_FALSE(d_separates(d, {1, 2, {4}}));
    CHECK_FALSE(d_separates(d, {1, 2, {3, 4}}));
    // Fork: common cause blocked by conditioning on it.
    Dag fork({1, 2, 3}, {{3, 1}, {3, 2}});
    CHECK_FALSE(d_separates(fork, {1, 2, {}}));
    CHECK(d_separates(fork, {1, 2, {3}}));
}

TEST_CASE("query validation rejects malformed queries") {
    Dag d = chain3();
    PcQuery bad1{1, 1, {}};
    CHECK_THROWS_AS(d.validate_query(bad1), std::invalid_argument);
    PcQuery bad2{1, 2, {2}};
    CHECK_THROWS_AS(d.validate_query(bad2), std::invalid_argument);
    PcQuery bad3{1, 2, {3, 3}};
    CHECK_THROWS_AS(d.validate_query(bad3), std::invalid_argument);
    PcQuery bad4{1, 7, {}};
    CHECK_THROWS_AS(d.validate_query(bad4), std::invalid_argument);
    PcQuery ok{3, 1, {2}};
    CHECK_NOTHROW(d.validate_query(ok));
}

TEST_CASE("theorem condition checks the edge and the below-set edges") {
    Dag complete3 = complete_dag(3);
    CHECK(theorem_condition(complete3, {1, 2, {3}}));
    CHECK(theorem_condition(complete3, {1, 3, {2}}));
    CHECK_FALSE(theorem_condition(complete3, {2, 1, {}}));  // no edge 2->1
    CHECK_FALSE(theorem_condition(chain3(), {1, 2, {3}}));  // 3 below 2, no 1->3
    CHECK(theorem_condition(chain3(), {1, 2, {}}));
    CHECK(theorem_condition(Dag({1, 2}, {{1, 2}}), {1, 2, {}}));
    // s not below j0 needs no edge from i0.
    Dag d({1, 2, 3}, {{1, 2}});
    CHECK(theorem_condition(d, {1, 2, {3}}));
}

TEST_CASE("theorem condition for complete DAGs holds for every increasing query") {
    for (int n = 3; n <= 5; ++n) {
        Dag d = complete_dag(n);
        for (int i0 = 1; i0 <= n; ++i0)
            for (int j0 = i0 + 1; j0 <= n; ++j0) {
                std::vector<int> rest;
                for (int v = 1; v <= n; ++v)
                    if (v != i0 && v != j0) rest.push_back(v);
                for (const auto& s : all_subsets(rest))
                    CHECK(theorem_condition(d, {i0, j0, s}));
            }
    }
}

TEST_CASE("theorem condition is monotone under adding edges out of i0") {
    Rng rng(77);
    int confirmed = 0;
    for (int trial = 0; trial < 200; ++trial) {
        Dag d = random_dag(rng, 5);
        for (const auto& [i0, j0] : d.edges()) {
            std::vector<int> rest;
            for (int v : d.vertices())
                if (v != i0 && v != j0) rest.push_back(v);
            for (const auto& s : all_subsets(rest)) {
                if (!theorem_condition(d, {i0, j0, s})) continue;
                // Add any absent edge i0 -> v that keeps the graph acyclic.
                for (int v : d.vertices()) {
                    if (v == i0 || d.has_edge(i0, v) || is_below(d, v, i0)) continue;
                    auto edges = d.edges();
                    edges.push_back({i0, v});
                    Dag bigger(d.vertices(), edges);
                    CHECK(theorem_condition(bigger, {i0, j0, s}));
                    ++confirmed;
                }
            }
        }
    }
    CHECK(confirmed > 100);
}

TEST_CASE("labeled dag enumeration hits the known counts") {
    CHECK(all_labeled_dags(1).size() == 1);
    CHECK(all_labeled_dags(2).size() == 3);
    CHECK(all_labeled_dags(3).size() == 25);
}
