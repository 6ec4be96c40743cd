#pragma once

#include <map>
#include <utility>
#include <vector>

#include "trekcalc/dag.hpp"
#include "trekcalc/poly.hpp"

namespace trekcalc {

// Exact parameter assignment: one value per edge, optional error variances
// (absent omega map means the identity).
struct ParamPoint {
    std::map<std::pair<int, int>, Rat> edge;
    std::map<int, Rat> omega;

    std::map<Var, Rat> assignment() const;
};

// The covariance matrix of the linear structural model on a dag, held as
// exact polynomials in the edge weights (and error variances when symbolic).
class SymbolicSigma {
   public:
    SymbolicSigma(const Dag& dag, OmegaMode mode);

    const Dag& dag() const { return dag_; }
    OmegaMode mode() const { return mode_; }
    const Poly& entry(int i, int j) const;

    // Determinant of the submatrix with rows I and columns J, each sorted
    // by the vertex order.  Exact; cofactor for small sizes, fraction-free
    // elimination above that.
    Poly minor_det(std::vector<int> I, std::vector<int> J) const;

    // All entries evaluated at a point (omega defaults to 1 when absent).
    std::vector<std::vector<Rat>> evaluate(const ParamPoint& point) const;

   private:
    Dag dag_;
    OmegaMode mode_;
    std::vector<std::vector<Poly>> entries_;  // indexed by order index
};

SymbolicSigma build_sigma(const Dag& dag, OmegaMode mode);

// corr(i0,j0|S)^2 as an exact rational, plus the sign of the cross minor f
// at the point.  Squares avoid the square root.
std::pair<Rat, int> partial_corr_exact(const SymbolicSigma& sigma, const PcQuery& q,
                                       const ParamPoint& point);

// Same formula on an arbitrary covariance matrix in floating point,
// including sign.  `vertices` names the rows/cols of cov in order.
double partial_corr_float(const std::vector<std::vector<double>>& cov,
                          const std::vector<int>& vertices, const PcQuery& q);

// a'_{ij} = a_{ij} d_j / d_i, omega'_m = omega_m d_m^2 (omega_m = 1 when
// absent).  Vertices missing from d scale by 1.
ParamPoint scale_by_diagonal(const ParamPoint& point, const std::map<int, Rat>& d);

// Determinant helpers, exposed for cross-checking.
Poly det_cofactor(const std::vector<std::vector<Poly>>& m);
Poly det_bareiss(std::vector<std::vector<Poly>> m);
Rat det_rational(std::vector<std::vector<Rat>> m);
double det_double(std::vector<std::vector<double>> m);

}  // namespace trekcalc
