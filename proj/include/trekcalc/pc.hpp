#pragma once

#include <cstdint>
#include <vector>

#include "trekcalc/covariance.hpp"
#include "trekcalc/dag.hpp"

namespace trekcalc {

enum class TubeMeasure { uniform_box, gaussian };

struct TubeQuery {
    PcQuery query;
    double lambda = 0.0;
    double box_lo = -2.0;
    double box_hi = 2.0;
    TubeMeasure measure = TubeMeasure::uniform_box;
    long samples = 0;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct TubeResult {
    double fraction = 0.0;
    double stderr_ = 0.0;
    long samples = 0;
};

struct RemovalRecord {
    int i = 0, j = 0;  // removed undirected edge
    std::vector<int> s;
    double corr = 0.0;
    int level = 0;
};

struct PcState {
    std::vector<std::pair<int, int>> edges;  // surviving, i before j in vertex order
    std::vector<RemovalRecord> log;
};

enum class PcHeuristic { standard, intersection_first };

// Rows are i.i.d. draws of the structural model, columns in vertex order.
// Bit-identical for a fixed seed.
std::vector<std::vector<double>> simulate_data(const Dag& dag, const ParamPoint& point,
                                               long n, std::uint64_t seed);

// Unbiased (n-1) estimator; throws too-few-samples when n < 2.
std::vector<std::vector<double>> sample_covariance(
    const std::vector<std::vector<double>>& data);

// PC edge-removal phase from the complete undirected graph.  Levelwise in
// |S|; candidate sets come from current neighborhoods of either endpoint;
// intersection_first tests S inside both neighborhoods before the rest.
// max_level < 0 means |V| - 2.
PcState pc_edge_removal(const std::vector<std::vector<double>>& cov,
                        const std::vector<int>& vertices, double lambda,
                        PcHeuristic heuristic, int max_level = -1);

// Monte Carlo mass of {|corr(i0,j0|S)| <= lambda} under the chosen measure
// on the edge parameters.  Deterministic per (seed, samples, workers).
TubeResult tube_volume_mc(const SymbolicSigma& sigma, const TubeQuery& tq);

// Same, evaluating several thresholds on one sample stream.
std::vector<TubeResult> tube_volume_mc_multi(const SymbolicSigma& sigma, const TubeQuery& tq,
                                             const std::vector<double>& lambdas);

// Sigma evaluated at the point, as doubles, rows/cols in vertex order.
std::vector<std::vector<double>> sigma_at_point(const SymbolicSigma& sigma,
                                                const ParamPoint& point);

}  // namespace trekcalc
