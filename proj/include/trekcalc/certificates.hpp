#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trekcalc/covariance.hpp"
#include "trekcalc/dag.hpp"
#include "trekcalc/poly.hpp"

namespace trekcalc {

struct LemmaReport {
    std::string lemma;
    PcQuery query;
    bool holds = false;
    // The two polynomials that failed to match, when violated.
    std::optional<std::pair<Poly, Poly>> witness;
    std::string detail;     // observed signs etc.
    int observed_sign = 0;  // the eps that made the lemma identity hold
};

// One summand of the certificate identity: sign * multiplier * df/d(var).
struct CertificateTerm {
    Var var;
    int sign = 1;
    Poly multiplier;
};

// Explicit polynomial identity witnessing that the principal minor
// det Sigma[S+i0,S+i0] lies in the ideal of partial derivatives of f,
// all computed on the pruned dag with identity error covariance.
struct Certificate {
    PcQuery query;
    Dag pruned;
    std::vector<std::pair<int, int>> removed_edges;
    Poly lhs;  // det Sigma[S+i0,S+i0]
    Poly f;    // det Sigma[S+i0,S+j0]
    std::vector<CertificateTerm> terms;
    std::vector<LemmaReport> reports;
    bool verified = false;

    std::string to_text() const;
};

// Drops every edge leaving a vertex of q.s.
Dag prune_outgoing_from_S(const Dag& dag, const PcQuery& q);

// No a[s,j] with s in S appears in f, and pruning leaves f unchanged.
LemmaReport check_lemma_sj(const Dag& dag, const PcQuery& q);

// Sum of edge-variable products over all directed paths j0 -> s.
Poly path_weight_poly(const Dag& dag, int j0, int s);

// On the pruned dag: a[i0,s] is at most linear in f with coefficient
// +/- det Sigma[S+i0, S+j0-s+i0].
LemmaReport check_lemma_i0s(const Dag& pruned, const PcQuery& q, int s);

// On the pruned dag: a[i0,j0] is at most linear in f with coefficient
// +/- (det Sigma[S+i0,S+i0] - g); returns g by direct filtered enumeration.
std::pair<LemmaReport, Poly> check_lemma_i0j0(const Dag& pruned, const PcQuery& q);

// g equals sum over s in S below j0 of
// sgn(pi_s) * det Sigma[S+i0, S+i0-s+j0] * p_{j0,s}.
LemmaReport check_lemma_id(const Dag& pruned, const PcQuery& q, const Poly& g);

// Assembles and verifies the full identity.  Throws ConditionError when the
// combinatorial hypothesis fails or f is identically zero.
Certificate certify_nonsingular(const Dag& dag, const PcQuery& q);

// (a, d) -> (a_ij d_j / d_i, omega_m = d_m^2).  Point must carry no omegas.
ParamPoint unequal_variance_forward(const Dag& dag, const ParamPoint& a,
                                    const std::map<int, Rat>& d);

// (a', omega) -> (a'_ij sqrt(omega_i)/sqrt(omega_j), d_m = sqrt(omega_m)).
// Exact path requires each omega to be the square of a rational.
std::pair<ParamPoint, std::map<int, Rat>> unequal_variance_inverse_exact(
    const Dag& dag, const ParamPoint& point);

std::pair<std::map<std::pair<int, int>, double>, std::map<int, double>>
unequal_variance_inverse_float(const Dag& dag,
                               const std::map<std::pair<int, int>, double>& edge,
                               const std::map<int, double>& omega);

}  // namespace trekcalc
