#include "trekcalc/pc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "trekcalc/errors.hpp"
#include "trekcalc/rng.hpp"

namespace trekcalc {

std::vector<std::vector<double>> simulate_data(const Dag& dag, const ParamPoint& point,
                                               long n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample count must be positive");
    const auto& vs = dag.vertices();
    auto topo = topological_sort(dag);
    std::map<std::pair<int, int>, double> a;
    for (const auto& [e, v] : point.edge) a.emplace(e, rat_to_double(v));
    std::map<int, double> noise_scale;
    for (int v : vs) {
        auto it = point.omega.find(v);
        noise_scale[v] = it == point.omega.end() ? 1.0 : std::sqrt(rat_to_double(it->second));
    }
    Rng rng(seed);
    std::vector<std::vector<double>> data(n, std::vector<double>(vs.size(), 0.0));
    for (long r = 0; r < n; ++r) {
        auto& row = data[r];
        for (int v : topo) {
            double x = noise_scale[v] * rng.normal();
            for (int p : dag.parents(v)) x += a.at({p, v}) * row[dag.order_index(p)];
            row[dag.order_index(v)] = x;
        }
    }
    return data;
}

std::vector<std::vector<double>> sample_covariance(
    const std::vector<std::vector<double>>& data) {
    const long n = static_cast<long>(data.size());
    if (n < 2) throw std::invalid_argument("too-few-samples");
    const std::size_t p = data[0].size();
    std::vector<double> mean(p, 0.0);
    for (const auto& row : data)
        for (std::size_t c = 0; c < p; ++c) mean[c] += row[c];
    for (auto& m : mean) m /= static_cast<double>(n);
    std::vector<std::vector<double>> cov(p, std::vector<double>(p, 0.0));
    for (const auto& row : data)
        for (std::size_t i = 0; i < p; ++i)
            for (std::size_t j = i; j < p; ++j)
                cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) {
            cov[i][j] /= static_cast<double>(n - 1);
            cov[j][i] = cov[i][j];
        }
    return cov;
}

namespace {

void subsets_of_size(const std::vector<int>& pool, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    // Pool is sorted; combinations emerge in lexicographic order.
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (std::size_t t = start; t < pool.size(); ++t) {
            cur.push_back(pool[t]);
            rec(t + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

bool is_positive_definite(const std::vector<std::vector<double>>& cov) {
    // Cholesky without pivoting; clean failure on a non-PD matrix.
    const std::size_t p = cov.size();
    std::vector<std::vector<double>> l(p, std::vector<double>(p, 0.0));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = cov[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            if (i == j) {
                if (s <= 0.0) return false;
                l[i][i] = std::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    return true;
}

}  // namespace

PcState pc_edge_removal(const std::vector<std::vector<double>>& cov,
                        const std::vector<int>& vertices, double lambda,
                        PcHeuristic heuristic, int max_level) {
    const int p = static_cast<int>(vertices.size());
    if (!is_positive_definite(cov))
        throw std::invalid_argument("non-positive-definite-covariance");
    if (max_level < 0) max_level = std::max(0, p - 2);
    auto index_of = [&](int v) {
        return static_cast<int>(std::find(vertices.begin(), vertices.end(), v) -
                                vertices.begin());
    };
    PcState state;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) state.edges.push_back({vertices[i], vertices[j]});

    auto neighbors = [&](int v) {
        std::vector<int> out;
        for (const auto& [x, y] : state.edges) {
            if (x == v) out.push_back(y);
            if (y == v) out.push_back(x);
        }
        std::sort(out.begin(), out.end(),
                  [&](int a, int b) { return index_of(a) < index_of(b); });
        return out;
    };

    for (int level = 0; level <= max_level; ++level) {
        bool any_candidates = false;
        // Edges examined in lexicographic order of their endpoints' indices;
        // removals take effect immediately (classic PC sweep).
        std::size_t e = 0;
        while (e < state.edges.size()) {
            auto [i0, j0] = state.edges[e];
            std::vector<int> ni = neighbors(i0), nj = neighbors(j0);
            ni.erase(std::remove(ni.begin(), ni.end(), j0), ni.end());
            nj.erase(std::remove(nj.begin(), nj.end(), i0), nj.end());
            std::vector<std::vector<int>> cands;
            subsets_of_size(ni, level, cands);
            subsets_of_size(nj, level, cands);
            std::sort(cands.begin(), cands.end(),
                      [&](const std::vector<int>& a, const std::vector<int>& b) {
                          std::vector<int> ia, ib;
                          for (int v : a) ia.push_back(index_of(v));
                          for (int v : b) ib.push_back(index_of(v));
                          return ia < ib;
                      });
            cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
            if (heuristic == PcHeuristic::intersection_first) {
                std::set<int> si(ni.begin(), ni.end());
                std::stable_partition(cands.begin(), cands.end(),
                                      [&](const std::vector<int>& s) {
                                          for (int v : s) {
                                              if (!si.count(v)) return false;
                                              if (std::find(nj.begin(), nj.end(), v) ==
                                                  nj.end())
                                                  return false;
                                          }
                                          return true;
                                      });
            }
            if (!cands.empty()) any_candidates = true;
            bool removed = false;
            for (const auto& s : cands) {
                PcQuery q{i0, j0, s};
                double corr = partial_corr_float(cov, vertices, q);
                if (std::fabs(corr) <= lambda) {
                    state.log.push_back({i0, j0, s, corr, level});
                    state.edges.erase(state.edges.begin() + static_cast<std::ptrdiff_t>(e));
                    removed = true;
                    break;
                }
            }
            if (!removed) ++e;
        }
        if (!any_candidates) break;
    }
    return state;
}

namespace {

// Flattened polynomial for fast repeated double evaluation.
struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<std::pair<int, int>> powers;  // (edge index, exponent)
    };
    std::vector<Term> terms;

    double eval(const std::vector<double>& x) const {
        double total = 0.0;
        for (const auto& t : terms) {
            double v = t.coeff;
            for (const auto& [idx, e] : t.powers)
                for (int k = 0; k < e; ++k) v *= x[idx];
            total += v;
        }
        return total;
    }
};

CompiledPoly compile(const Poly& p, const std::map<Var, int>& var_index) {
    CompiledPoly out;
    for (const auto& [m, c] : p.terms()) {
        CompiledPoly::Term t;
        t.coeff = rat_to_double(c);
        for (const auto& [v, e] : m.vars) t.powers.push_back({var_index.at(v), e});
        out.terms.push_back(std::move(t));
    }
    return out;
}

}  // namespace

std::vector<TubeResult> tube_volume_mc_multi(const SymbolicSigma& sigma, const TubeQuery& tq,
                                             const std::vector<double>& lambdas) {
    if (tq.samples < 1) throw std::invalid_argument("samples must be positive");
    if (tq.workers < 1) throw std::invalid_argument("workers must be positive");
    if (tq.box_lo >= tq.box_hi) throw std::invalid_argument("empty sampling box");
    for (double l : lambdas)
        if (l <= 0) throw std::invalid_argument("lambda must be positive");
    const Dag& dag = sigma.dag();
    PcQuery q = tq.query;
    dag.validate_query(q);
    Poly f = sigma.minor_det(with_vertex(dag, q.s, q.i0), with_vertex(dag, q.s, q.j0));
    if (f.is_zero()) throw ConditionError("f-identically-zero");
    Poly di = sigma.minor_det(with_vertex(dag, q.s, q.i0), with_vertex(dag, q.s, q.i0));
    Poly dj = sigma.minor_det(with_vertex(dag, q.s, q.j0), with_vertex(dag, q.s, q.j0));
    std::map<Var, int> var_index;
    for (const auto& [i, j] : dag.edges())
        var_index.emplace(Var::edge(i, j), static_cast<int>(var_index.size()));
    CompiledPoly cf = compile(f, var_index), cdi = compile(di, var_index),
                 cdj = compile(dj, var_index);
    const int nvars = static_cast<int>(var_index.size());

    std::vector<long> hits(lambdas.size(), 0);
    long total = 0;
    for (int w = 0; w < tq.workers; ++w) {
        long quota = tq.samples / tq.workers + (w < tq.samples % tq.workers ? 1 : 0);
        Rng rng(tq.seed + static_cast<std::uint64_t>(w));
        std::vector<double> x(nvars);
        for (long s = 0; s < quota; ++s) {
            for (int v = 0; v < nvars; ++v)
                x[v] = tq.measure == TubeMeasure::uniform_box
                           ? rng.uniform(tq.box_lo, tq.box_hi)
                           : rng.normal();
            double fv = cf.eval(x);
            double bound = cdi.eval(x) * cdj.eval(x);
            for (std::size_t k = 0; k < lambdas.size(); ++k)
                if (fv * fv <= lambdas[k] * lambdas[k] * bound) ++hits[k];
            ++total;
        }
    }
    std::vector<TubeResult> out;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        double frac = static_cast<double>(hits[k]) / static_cast<double>(total);
        double se = std::sqrt(frac * (1.0 - frac) / static_cast<double>(total));
        out.push_back({frac, se, total});
    }
    return out;
}

TubeResult tube_volume_mc(const SymbolicSigma& sigma, const TubeQuery& tq) {
    return tube_volume_mc_multi(sigma, tq, {tq.lambda})[0];
}

std::vector<std::vector<double>> sigma_at_point(const SymbolicSigma& sigma,
                                                const ParamPoint& point) {
    auto exact = sigma.evaluate(point);
    std::vector<std::vector<double>> out(exact.size(), std::vector<double>(exact.size()));
    for (std::size_t i = 0; i < exact.size(); ++i)
        for (std::size_t j = 0; j < exact.size(); ++j) out[i][j] = rat_to_double(exact[i][j]);
    return out;
}

}  // namespace trekcalc
