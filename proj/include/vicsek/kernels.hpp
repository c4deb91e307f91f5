#pragma once

#include "vicsek/eigenfunc.hpp"

namespace vicsek {

/// A spectral field on V_M: values per vertex plus truncation info.
struct KernelField {
  VicsekParams params;
  int level = 0;
  double t = 0.0;
  Vec values;
  int depth = 0;          // spectral depth k of included eigenvalues
  double tail_bound = 0;  // estimate from the first excluded segment
};

/// Unit-norm 0-series eigenfunctions through a spectral depth, sampled on
/// V_M, with their center values. Records deeper than M appear by their V_M
/// restriction (exact vertex values; their oscillation lives below mesh
/// scale). Mean-value identities are exact only when M >= depth.
struct CenterKernelBasis {
  VicsekParams params;
  int level = 0;
  int depth = 0;
  std::vector<EigenvalueRecord> records;
  Mat funcs;    // V x J, unit fractal norm
  Vec centers;  // u_j(q0)
  double next_value = 0.0;  // first eigenvalue beyond the depth
  int64_t next_mult = 0;    // multiplicity-weighted size of the next segment
};
CenterKernelBasis center_kernel_basis(const DecimationSystem& sys, const GraphHierarchy& h,
                                      int M, int depth);

/// Center-sourced heat kernel h(t, q0, .) from the 0-series (the 4/3-series
/// vanishes at q0 exactly). `center` is h(t, q0, q0), `normalized` is
/// H(t, x) = h(t, q0, x)/h(t, q0, q0).
struct HeatField {
  KernelField h;
  double center = 0.0;
  Vec normalized;
};
HeatField heat_center(const CenterKernelBasis& basis, double t);
HeatField heat_center(const DecimationSystem& sys, const GraphHierarchy& h, double t,
                      int M, int depth);

/// Heat trace sum m(lambda) e^{-t lambda} over the full spectrum through
/// `depth`, with the log-periodic rescaling t^alpha * trace.
struct TraceSample {
  double t, trace, scaled;
};
std::vector<TraceSample> heat_trace(const DecimationSystem& sys, int depth,
                                    const std::vector<double>& ts);

/// t^alpha h(t,q0,q0) samples (0-series only, pure product path).
std::vector<TraceSample> center_heat_samples(const DecimationSystem& sys, int depth,
                                             const std::vector<double>& ts);

/// Least-squares fit of y ~ a + b sin(c log t + d): outer scan over the
/// frequency, inner linear solve.
struct SinusoidFit {
  double a, b, c, d, rms;
};
SinusoidFit fit_log_periodic(const std::vector<double>& ts, const std::vector<double>& ys);

/// Wave propagator W(t, q0, .) via 0-series terms sin(sqrt(lambda) t)/
/// sqrt(lambda); the lambda = 0 term contributes t.
KernelField wave_center(const CenterKernelBasis& basis, double t);
KernelField wave_center(const DecimationSystem& sys, const GraphHierarchy& h, double t,
                        int M, int depth);

/// 0-series projection kernel K_k(x, .) on V_M, plus its mean and absolute
/// integrals against mu.
struct ProjectionField {
  KernelField k;
  double integral = 0.0;      // int K(x,y) dmu(y)
  double abs_integral = 0.0;  // int |K(x,y)| dmu(y)
};
ProjectionField projection_kernel(const CenterKernelBasis& basis, int32_t x,
                                  const GraphApprox& g);

/// max over x in V_M of int |K_k(x,y)| dmu(y).
double max_abs_projection_integral(const CenterKernelBasis& basis, const GraphApprox& g);

/// Superlevel set {x : field(x) >= s} with its connected component count in
/// the graph.
struct LevelSetRegion {
  std::vector<int32_t> vertices;
  int components = 0;
};
LevelSetRegion level_set_region(const GraphApprox& g, const Vec& field, double s);

/// max{ |x| : |field(x)| >= eps }, geodesic distance to q0, optionally
/// restricted to the diagonal vertices. Returns 0 when the set is empty.
double abs_width(const GraphApprox& g, const Vec& field, double eps, bool diagonal_only);

}  // namespace vicsek
