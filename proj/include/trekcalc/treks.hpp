#pragma once

#include <vector>

#include "trekcalc/dag.hpp"
#include "trekcalc/poly.hpp"

namespace trekcalc {

// A pair of directed paths from a common top: up ends at the source,
// down at the target.  Both stored top-first; either may have length 0.
struct Trek {
    Path up, down;

    int top() const { return up.front(); }
    int source() const { return up.back(); }
    int target() const { return down.back(); }
    bool operator==(const Trek& o) const = default;
};

// Treks sorted by source; sources/targets hit I/J bijectively.
struct TrekSystem {
    std::vector<Trek> treks;
    std::vector<int> sources;  // sorted by vertex order
    std::vector<int> targets;  // targets[k] = target of treks[k]

    std::vector<int> tops() const;
};

// Product of edge variables along both parts, times w[top] when symbolic.
Poly trek_weight(const Dag& dag, const Trek& t, OmegaMode mode);

// Up parts share a vertex, or down parts share a vertex (tops and
// endpoints belong to both respective parts).
bool has_sided_intersection(const Trek& t, const Trek& u);

// Parity of the crossing count of the induced bijection I -> J under the
// dag's vertex order.
int system_sign(const Dag& dag, const TrekSystem& ts);

// All treks from i to j, grouped by top.
std::vector<Trek> enumerate_treks(const Dag& dag, int i, int j);

// All trek systems I -> J, optionally only those free of pairwise sided
// intersections.  Exponential; intended for small graphs.
std::vector<TrekSystem> enumerate_trek_systems(const Dag& dag, std::vector<int> I,
                                               std::vector<int> J, bool require_no_sided);

// Sum of sgn(T)*w(T) over sided-intersection-free systems.  Asserts that
// equal-weight systems never carry opposite signs.
Poly expansion_det(const Dag& dag, std::vector<int> I, std::vector<int> J, OmegaMode mode);

// Tops of the (unique) sided-intersection-free system with the given
// identity-mode weight monomial.
std::vector<int> recover_tops(const Dag& dag, const Monomial& m, const std::vector<int>& I,
                              const std::vector<int>& J);

// Exchanges the down-part suffixes strictly below k.
std::pair<Trek, Trek> tail_swap(const Trek& t, const Trek& u, int k);

}  // namespace trekcalc
