#include "trekcalc/dag.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>

namespace trekcalc {

namespace {

std::string vid(int v) { return std::to_string(v); }

}  // namespace

Dag::Dag(std::vector<int> vertices, std::vector<std::pair<int, int>> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    for (std::size_t k = 0; k < vertices_.size(); ++k) {
        if (!order_.emplace(vertices_[k], static_cast<int>(k)).second)
            throw std::invalid_argument("duplicate-vertex: " + vid(vertices_[k]));
    }
    std::set<std::pair<int, int>> seen;
    for (const auto& [i, j] : edges_) {
        if (!has_vertex(i)) throw std::invalid_argument("unknown-vertex: " + vid(i));
        if (!has_vertex(j)) throw std::invalid_argument("unknown-vertex: " + vid(j));
        if (i == j) throw std::invalid_argument("self-loop: " + vid(i));
        if (!seen.insert({i, j}).second)
            throw std::invalid_argument("duplicate-edge: " + vid(i) + "->" + vid(j));
    }
    std::sort(edges_.begin(), edges_.end(), [&](const auto& a, const auto& b) {
        int ai = order_.at(a.first), aj = order_.at(a.second);
        int bi = order_.at(b.first), bj = order_.at(b.second);
        return std::pair(ai, aj) < std::pair(bi, bj);
    });
    parents_.resize(vertices_.size());
    children_.resize(vertices_.size());
    for (const auto& [i, j] : edges_) {
        children_[order_.at(i)].push_back(j);
        parents_[order_.at(j)].push_back(i);
    }
    topological_sort(*this);  // rejects cycles
}

bool Dag::has_edge(int i, int j) const {
    if (!has_vertex(i)) return false;
    const auto& ch = children_[order_.at(i)];
    return std::find(ch.begin(), ch.end(), j) != ch.end();
}

int Dag::order_index(int v) const {
    auto it = order_.find(v);
    if (it == order_.end()) throw std::invalid_argument("unknown-vertex: " + vid(v));
    return it->second;
}

const std::vector<int>& Dag::parents(int v) const { return parents_[order_index(v)]; }
const std::vector<int>& Dag::children(int v) const { return children_[order_index(v)]; }

void Dag::sort_by_order(std::vector<int>& vs) const {
    for (int v : vs) order_index(v);
    std::sort(vs.begin(), vs.end(),
              [&](int a, int b) { return order_.at(a) < order_.at(b); });
}

void Dag::validate_query(PcQuery& q) const {
    order_index(q.i0);
    order_index(q.j0);
    if (q.i0 == q.j0) throw std::invalid_argument("query endpoints coincide");
    sort_by_order(q.s);
    for (std::size_t k = 0; k + 1 < q.s.size(); ++k)
        if (q.s[k] == q.s[k + 1])
            throw std::invalid_argument("duplicate conditioning vertex: " + vid(q.s[k]));
    for (int s : q.s)
        if (s == q.i0 || s == q.j0)
            throw std::invalid_argument("conditioning set contains an endpoint");
}

std::vector<int> topological_sort(const Dag& dag) {
    const auto& vs = dag.vertices();
    std::vector<int> indeg(vs.size(), 0);
    for (const auto& [i, j] : dag.edges()) {
        (void)i;
        ++indeg[dag.order_index(j)];
    }
    // Min-heap on order index keeps ties deterministic.
    std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
    for (std::size_t k = 0; k < vs.size(); ++k)
        if (indeg[k] == 0) ready.push(static_cast<int>(k));
    std::vector<int> out;
    out.reserve(vs.size());
    while (!ready.empty()) {
        int k = ready.top();
        ready.pop();
        out.push_back(vs[k]);
        for (int c : dag.children(vs[k])) {
            int ci = dag.order_index(c);
            if (--indeg[ci] == 0) ready.push(ci);
        }
    }
    if (out.size() != vs.size()) throw std::invalid_argument("cycle-detected");
    return out;
}

bool is_below(const Dag& dag, int i, int j) {
    dag.order_index(j);
    std::vector<char> seen(dag.vertices().size(), 0);
    std::queue<int> bfs;
    for (int c : dag.children(i)) {
        int ci = dag.order_index(c);
        if (!seen[ci]) {
            seen[ci] = 1;
            bfs.push(c);
        }
    }
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        if (v == j) return true;
        for (int c : dag.children(v)) {
            int ci = dag.order_index(c);
            if (!seen[ci]) {
                seen[ci] = 1;
                bfs.push(c);
            }
        }
    }
    return false;
}

namespace {

void grow_paths(const Dag& dag, int at, int target, Path& cur, std::vector<Path>& out) {
    if (at == target) {
        out.push_back(cur);
        return;
    }
    for (int c : dag.children(at)) {
        cur.push_back(c);
        grow_paths(dag, c, target, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Path> enumerate_paths(const Dag& dag, int i, int j) {
    dag.order_index(i);
    dag.order_index(j);
    std::vector<Path> out;
    Path cur{i};
    grow_paths(dag, i, j, cur, out);
    return out;
}

bool d_separates(const Dag& dag, const PcQuery& q) {
    PcQuery qq = q;
    dag.validate_query(qq);
    // Lauritzen: ancestral closure of {i0, j0} + S, moralize, drop S, BFS.
    const std::size_t n = dag.vertices().size();
    std::vector<char> anc(n, 0);
    std::queue<int> bfs;
    auto mark = [&](int v) {
        int k = dag.order_index(v);
        if (!anc[k]) {
            anc[k] = 1;
            bfs.push(v);
        }
    };
    mark(qq.i0);
    mark(qq.j0);
    for (int s : qq.s) mark(s);
    while (!bfs.empty()) {
        int v = bfs.front();
        bfs.pop();
        for (int p : dag.parents(v)) mark(p);
    }
    // Moral graph restricted to ancestors: edges + co-parent links.
    std::vector<std::set<int>> adj(n);
    auto link = [&](int a, int b) {
        int ka = dag.order_index(a), kb = dag.order_index(b);
        adj[ka].insert(kb);
        adj[kb].insert(ka);
    };
    for (const auto& [i, j] : dag.edges()) {
        if (anc[dag.order_index(i)] && anc[dag.order_index(j)]) link(i, j);
    }
    for (int v : dag.vertices()) {
        if (!anc[dag.order_index(v)]) continue;
        const auto& ps = dag.parents(v);
        for (std::size_t a = 0; a < ps.size(); ++a)
            for (std::size_t b = a + 1; b < ps.size(); ++b)
                if (anc[dag.order_index(ps[a])] && anc[dag.order_index(ps[b])])
                    link(ps[a], ps[b]);
    }
    std::vector<char> blocked(n, 0);
    for (int s : qq.s) blocked[dag.order_index(s)] = 1;
    std::vector<char> seen(n, 0);
    std::queue<int> reach;
    int start = dag.order_index(qq.i0), goal = dag.order_index(qq.j0);
    seen[start] = 1;
    reach.push(start);
    while (!reach.empty()) {
        int k = reach.front();
        reach.pop();
        if (k == goal) return false;
        for (int c : adj[k]) {
            if (!seen[c] && !blocked[c]) {
                seen[c] = 1;
                reach.push(c);
            }
        }
    }
    return true;
}

bool theorem_condition(const Dag& dag, const PcQuery& q) {
    PcQuery qq = q;
    dag.validate_query(qq);
    if (!dag.has_edge(qq.i0, qq.j0)) return false;
    for (int s : qq.s)
        if (is_below(dag, qq.j0, s) && !dag.has_edge(qq.i0, s)) return false;
    return true;
}

std::vector<int> with_vertex(const Dag& dag, std::vector<int> set, int v) {
    set.push_back(v);
    dag.sort_by_order(set);
    return set;
}

std::vector<int> without_vertex(std::vector<int> set, int v) {
    set.erase(std::remove(set.begin(), set.end(), v), set.end());
    return set;
}

}  // namespace trekcalc
