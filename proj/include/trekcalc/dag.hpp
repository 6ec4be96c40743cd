#pragma once

#include <map>
#include <vector>

namespace trekcalc {

// Vertices on a path / sequence of a directed walk.
using Path = std::vector<int>;

// Conditional-independence query: i0 vs j0 given the set s.
struct PcQuery {
    int i0 = 0;
    int j0 = 0;
    std::vector<int> s;  // sorted by the dag's vertex order, no duplicates
};

// Immutable DAG over integer vertex ids.  The order in which vertices are
// declared is the linear order on V; every sign convention, sort, and
// tie-break in this codebase refers to that order.
class Dag {
   public:
    Dag() = default;
    Dag(std::vector<int> vertices, std::vector<std::pair<int, int>> edges);

    const std::vector<int>& vertices() const { return vertices_; }
    // Sorted by (order(i), order(j)).
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }

    bool has_vertex(int v) const { return order_.count(v) != 0; }
    bool has_edge(int i, int j) const;
    // Position of v in the declared order; throws unknown-vertex.
    int order_index(int v) const;

    const std::vector<int>& parents(int v) const;
    const std::vector<int>& children(int v) const;

    // Sorts `vs` in place by the vertex order; throws on unknown ids.
    void sort_by_order(std::vector<int>& vs) const;

    // Validates i0 != j0, i0/j0 not in s; normalizes q.s to sorted order.
    void validate_query(PcQuery& q) const;

   private:
    std::vector<int> vertices_;
    std::vector<std::pair<int, int>> edges_;
    std::map<int, int> order_;
    std::vector<std::vector<int>> parents_, children_;  // indexed by order
};

// Every edge goes forward; ties broken by the vertex linear order.
std::vector<int> topological_sort(const Dag& dag);

// True iff a directed path of length >= 1 runs from i to j.
bool is_below(const Dag& dag, int i, int j);

// All directed paths from i to j; includes the length-0 path when i == j.
std::vector<Path> enumerate_paths(const Dag& dag, int i, int j);

// Standard d-separation of i0 and j0 by q.s.
bool d_separates(const Dag& dag, const PcQuery& q);

// i0 -> j0 is an edge, and i0 -> s for every s in S below j0.
bool theorem_condition(const Dag& dag, const PcQuery& q);

// Sorted-set helpers over vertex ids (sets ordered by dag vertex order).
std::vector<int> with_vertex(const Dag& dag, std::vector<int> set, int v);
std::vector<int> without_vertex(std::vector<int> set, int v);

}  // namespace trekcalc
