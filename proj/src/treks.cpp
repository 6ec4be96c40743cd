#include "trekcalc/treks.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace trekcalc {

std::vector<int> TrekSystem::tops() const {
    std::vector<int> out;
    out.reserve(treks.size());
    for (const auto& t : treks) out.push_back(t.top());
    std::sort(out.begin(), out.end());
    return out;
}

Poly trek_weight(const Dag& dag, const Trek& t, OmegaMode mode) {
    Monomial m;
    auto walk = [&](const Path& p) {
        for (std::size_t k = 0; k + 1 < p.size(); ++k) {
            if (!dag.has_edge(p[k], p[k + 1]))
                throw std::invalid_argument("trek uses a non-edge");
            Var v = Var::edge(p[k], p[k + 1]);
            bool merged = false;
            for (auto& [w, e] : m.vars) {
                if (w == v) {
                    ++e;
                    merged = true;
                    break;
                }
            }
            if (!merged) m.vars.push_back({v, 1});
        }
    };
    walk(t.up);
    walk(t.down);
    if (mode == OmegaMode::symbolic) m.vars.push_back({Var::omega(t.top()), 1});
    std::sort(m.vars.begin(), m.vars.end());
    return Poly(m, Rat(1));
}

bool has_sided_intersection(const Trek& t, const Trek& u) {
    auto meets = [](const Path& a, const Path& b) {
        std::set<int> sa(a.begin(), a.end());
        for (int v : b)
            if (sa.count(v)) return true;
        return false;
    };
    return meets(t.up, u.up) || meets(t.down, u.down);
}

int system_sign(const Dag& dag, const TrekSystem& ts) {
    int crossings = 0;
    for (std::size_t a = 0; a < ts.treks.size(); ++a)
        for (std::size_t b = a + 1; b < ts.treks.size(); ++b)
            if (dag.order_index(ts.targets[a]) > dag.order_index(ts.targets[b])) ++crossings;
    return crossings % 2 == 0 ? 1 : -1;
}

std::vector<Trek> enumerate_treks(const Dag& dag, int i, int j) {
    std::vector<Trek> out;
    for (int m : dag.vertices()) {
        auto ups = enumerate_paths(dag, m, i);
        if (ups.empty()) continue;
        auto downs = enumerate_paths(dag, m, j);
        for (const auto& up : ups)
            for (const auto& down : downs) out.push_back({up, down});
    }
    return out;
}

namespace {

void assemble(const Dag& dag, const std::vector<int>& I, const std::vector<int>& targets,
              const std::map<std::pair<int, int>, std::vector<Trek>>& pool, bool no_sided,
              std::size_t k, std::vector<Trek>& chosen, std::vector<TrekSystem>& out) {
    if (k == I.size()) {
        out.push_back({chosen, I, targets});
        return;
    }
    auto it = pool.find({I[k], targets[k]});
    if (it == pool.end()) return;
    for (const auto& t : it->second) {
        if (no_sided) {
            bool clash = false;
            for (const auto& prev : chosen) {
                if (has_sided_intersection(prev, t)) {
                    clash = true;
                    break;
                }
            }
            if (clash) continue;
        }
        chosen.push_back(t);
        assemble(dag, I, targets, pool, no_sided, k + 1, chosen, out);
        chosen.pop_back();
    }
}

}  // namespace

std::vector<TrekSystem> enumerate_trek_systems(const Dag& dag, std::vector<int> I,
                                               std::vector<int> J, bool require_no_sided) {
    if (I.size() != J.size()) throw std::invalid_argument("size-mismatch");
    dag.sort_by_order(I);
    dag.sort_by_order(J);
    std::map<std::pair<int, int>, std::vector<Trek>> pool;
    for (int i : I)
        for (int j : J)
            if (!pool.count({i, j})) pool.emplace(std::pair(i, j), enumerate_treks(dag, i, j));
    std::vector<TrekSystem> out;
    // Walk bijections as permutations of J against the sorted I.
    std::vector<int> targets = J;
    std::sort(targets.begin(), targets.end(),
              [&](int a, int b) { return dag.order_index(a) < dag.order_index(b); });
    std::vector<int> perm(targets.size());
    for (std::size_t k = 0; k < perm.size(); ++k) perm[k] = static_cast<int>(k);
    do {
        std::vector<int> assigned(targets.size());
        for (std::size_t k = 0; k < perm.size(); ++k) assigned[k] = targets[perm[k]];
        std::vector<Trek> chosen;
        assemble(dag, I, assigned, pool, require_no_sided, 0, chosen, out);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

Poly expansion_det(const Dag& dag, std::vector<int> I, std::vector<int> J, OmegaMode mode) {
    if (I.size() != J.size()) throw std::invalid_argument("size-mismatch");
    auto systems = enumerate_trek_systems(dag, std::move(I), std::move(J), true);
    Poly total;
    std::map<Monomial, int> seen_sign;
    for (const auto& ts : systems) {
        int sg = system_sign(dag, ts);
        Poly w = Poly::one();
        for (const auto& t : ts.treks) w = w * trek_weight(dag, t, mode);
        const auto& mono = w.terms().begin()->first;
        auto [it, fresh] = seen_sign.emplace(mono, sg);
        if (!fresh && it->second != sg)
            throw std::logic_error("cancellation detected in trek-system expansion");
        total += w * Rat(sg);
    }
    return total;
}

std::vector<int> recover_tops(const Dag& dag, const Monomial& m, const std::vector<int>& I,
                              const std::vector<int>& J) {
    std::set<int> tails, heads;
    for (const auto& [v, e] : m.vars) {
        (void)e;
        if (v.kind == Var::Kind::edge) {
            tails.insert(v.a);
            heads.insert(v.b);
        }
    }
    std::set<int> both(I.begin(), I.end());
    std::set<int> out;
    for (int v : dag.vertices()) {
        if (tails.count(v) && !heads.count(v)) {
            out.insert(v);
        } else if (!tails.count(v) && !heads.count(v) && both.count(v) &&
                   std::find(J.begin(), J.end(), v) != J.end()) {
            out.insert(v);
        }
    }
    std::vector<int> sorted(out.begin(), out.end());
    dag.sort_by_order(sorted);
    return sorted;
}

std::pair<Trek, Trek> tail_swap(const Trek& t, const Trek& u, int k) {
    auto pos_of = [&](const Path& p) -> std::ptrdiff_t {
        auto it = std::find(p.begin(), p.end(), k);
        return it == p.end() ? -1 : it - p.begin();
    };
    std::ptrdiff_t pt = pos_of(t.down), pu = pos_of(u.down);
    if (pt < 0 || pu < 0) throw std::invalid_argument("k-not-on-both-down-parts");
    Trek t2 = t, u2 = u;
    t2.down.assign(t.down.begin(), t.down.begin() + pt + 1);
    t2.down.insert(t2.down.end(), u.down.begin() + pu + 1, u.down.end());
    u2.down.assign(u.down.begin(), u.down.begin() + pu + 1);
    u2.down.insert(u2.down.end(), t.down.begin() + pt + 1, t.down.end());
    return {t2, u2};
}

}  // namespace trekcalc
