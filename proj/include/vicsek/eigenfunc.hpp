#pragma once

#include "vicsek/decimation.hpp"
#include "vicsek/vsgraph.hpp"

namespace vicsek {

/// Graph approximations for levels 0..max_level, built once and shared.
struct GraphHierarchy {
  VicsekParams params;
  std::vector<GraphApprox> graphs;

  GraphHierarchy(const VicsekParams& p, int max_level) : params(p) {
    graphs.reserve(size_t(max_level) + 1);
    for (int m = 0; m <= max_level; ++m) graphs.push_back(build_graph(p, m));
  }
  const GraphApprox& at(int m) const {
    if (m < 0 || m >= int(graphs.size()))
      throw std::invalid_argument("GraphHierarchy: level not built");
    return graphs[size_t(m)];
  }
  int max_level() const { return int(graphs.size()) - 1; }
};

/// One eigenfunction on V_M together with its exact norm and center value
/// (computed through the scaling products, not by sampling).
struct Eigenfunction {
  EigenvalueRecord record;
  int level = 0;
  FunctionOnGraph values;
  double norm_sq = 0.0;
  double center_value = 0.0;
};

/// A full eigenspace basis on V_M; columns of funcs are the members.
struct EigenBasis {
  EigenvalueRecord record;
  int level = 0;
  Mat funcs;
};

/// Cell-by-cell eigenfunction extension V_m -> V_{m+1} at the next graph
/// eigenvalue. Old vertex values are unchanged; new interior vertices satisfy
/// the lambda_next eigenvalue equation.
Vec extend_values(const DecimationSystem& sys, const GraphApprox& g_m,
                  const GraphApprox& g_next, const Vec& u, double lambda_next);

/// Basis of the eigenspace of a record on V_M: the 0-series record gives one
/// function (constant at birth, then extended); a 4/3-series record born at
/// level k starts from the sparse combinatorial basis of the per-k-cell
/// zero-sum space, dimension 2(4n-3)^k + 1. Not orthonormalized.
EigenBasis build_eigenfunctions(const DecimationSystem& sys, const EigenvalueRecord& rec,
                                int M, const GraphHierarchy& h);

/// Inner-product scaling factor N with <u,v>_m = N(lambda_m) <u,v>_{m-1} for
/// eigenfunctions sharing the eigenvalue sequence. Computed from the cell
/// extension matrix with the Gauss-Green cross-term elimination; valid for
/// every n.
double norm_factor(const DecimationSystem& sys, double lambda_m);

/// n=2 closed form of N (rational in lambda), for cross-checking.
double norm_factor_closed_form(double lambda_m);

/// Center-value scaling factor N' = (4-3*lambda)/(4-21*lambda+18*lambda^2)
/// for n=2; computed from central-cell column sums of the extension matrix
/// for general n.
double center_factor(const DecimationSystem& sys, double lambda_m);

/// Product of N(lambda_m) over levels m > from_level of the record's graph
/// eigenvalue sequence, truncated when the factors reach 1 to 1e-14.
double norm_tail_product(const DecimationSystem& sys, const EigenvalueRecord& rec,
                         int from_level);
double center_tail_product(const DecimationSystem& sys, const EigenvalueRecord& rec,
                           int from_level);

/// Exact fractal norm^2 and center value of a function built for `rec` and
/// extended through level M: level-M quantities times the remaining infinite
/// products.
struct NormCenter {
  double norm_sq;
  double center;
};
NormCenter fractal_norm_and_center(const DecimationSystem& sys, const EigenvalueRecord& rec,
                                   const GraphApprox& g, const Vec& u);

/// For a 0-series record: squared fractal norm of the extension of the
/// constant 1, and its center value at unit norm. Pure eigenvalue-sequence
/// computations, no vertex data.
double zero_series_norm_sq(const DecimationSystem& sys, const EigenvalueRecord& rec);
double zero_series_center_unit_norm(const DecimationSystem& sys, const EigenvalueRecord& rec);

/// Gram-Schmidt within one eigenspace followed by scaling to unit fractal
/// norm. Orthogonality at the build level persists at every level.
EigenBasis orthonormalize(const DecimationSystem& sys, const GraphApprox& g, EigenBasis basis);

/// The 0-series records of a spectrum table, in ascending value order.
std::vector<EigenvalueRecord> zero_series_records(const SpectrumTable& t);

/// The unit-norm eigenfunction spanning the boundary-projection complement
/// (E_lambda^{q_i})^perp for a 4/3-series record born at level m0 >= 1: its
/// restriction to V_{m0-1} satisfies the algebraic relation
/// (1 - R(4/3)) deg(x) u(x) = sum_{y~x} u(y) away from q_i.
Eigenfunction perp_function(const DecimationSystem& sys, const EigenvalueRecord& rec,
                            int corner, int M, const GraphHierarchy& h);

/// Diagonal interpolation data: the 0-series span Z_m restricted to one arm
/// of the diagonal, and the coefficient functions c_k with c_k(x_j) =
/// delta_jk on V_m.
struct DiagonalCoefficients {
  std::vector<int32_t> diag_vertices;  // x_0 (outer corner) inward
  std::vector<EigenvalueRecord> records;
  Mat zbasis;        // vertex count x dim, the 0-series basis on V_m
  Mat coefficients;  // vertex count x #D_m, column k is c_k
  int rank = 0;      // numerical rank of the diagonal restriction
};
DiagonalCoefficients diagonal_coefficients(const DecimationSystem& sys,
                                           const GraphHierarchy& h, int m);

/// Connected components of the off-diagonal vertex set, keyed by the
/// diagonal interval (x_{j+1}, x_j) of the given arm they attach to.
/// subtree[j] lists the vertices hanging off interval j; vertices attached
/// elsewhere are not listed.
std::vector<std::vector<int32_t>> diagonal_interval_subtrees(const GraphApprox& g, int arm);

}  // namespace vicsek
