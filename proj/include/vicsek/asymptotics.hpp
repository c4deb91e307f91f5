#pragma once

#include "vicsek/decimation.hpp"

namespace vicsek {

/// One sample of the eigenvalue counting function and Weyl ratio.
struct WeylSample {
  double x = 0.0;
  int64_t count = 0;   // N(x), with multiplicity
  double ratio = 0.0;  // N(x) / x^alpha
};

/// N and W = N/x^alpha on a grid. The grid must stay within the enumerated
/// range.
std::vector<WeylSample> counting_and_weyl(const SpectrumTable& table,
                                          const std::vector<double>& xs);

/// Normalized Weyl ratio sample: w_n(lambda_1 rho^s) approximated at the
/// deepest scaling the table supports.
double normalized_weyl(const SpectrumTable& table, const DecimationSystem& sys, double s);

/// The closed-form special values at the (2j-1)-th and 2j-th eigenvalues:
/// w(lambda_{2j-1}^-) = (4j-3)/lambda^alpha, w(lambda_{2j-1}) = (4j-1)/lambda^alpha,
/// w(lambda_{2j}) = 4j/lambda^alpha. Requires j <= n-1.
struct WeylSpecialValues {
  double lambda_2jm1, w_minus, w_at;
  double lambda_2j, w_2j;
};
WeylSpecialValues weyl_special_values(const DecimationSystem& sys, int j);

/// Plateau value of the normalized ratio near s = 0:
/// (above ? 3 : 1) / (lambda_1^alpha rho^(alpha s)).
double normalized_weyl_plateau(const DecimationSystem& sys, double s, bool above);

/// The tridiagonal arm reduction on the level-1 diagonal: E u = 3 lambda G u
/// with G depending on the series. The 0-series endpoint condition makes G
/// depend on lambda; that system is solved by scanning the determinant.
enum class ArmSeries { Zero, FourThirds, IntervalOdd, IntervalEven };
struct ArmSystem {
  Mat E, G;                     // G at lambda = 0 for the nonlinear case
  std::vector<double> lambdas;  // level-1 eigenvalues, ascending, pole removed
  Mat vectors;                  // columns match lambdas
};
ArmSystem arm_system(const VicsekParams& params, ArmSeries series);

/// Convergence of the j-th eigenvalue toward the crossed-lines limit
/// (4 pi^2 / 3)(j - 1/2)^2 for the 4/3-series and (4 pi^2 / 3)(j - 1)^2 for
/// the 0-series, over a list of n, with the log-log fitted order of the
/// error.
struct CrossLimitRow {
  int n;
  double lambda, limit, error;
};
struct CrossLimitCheck {
  std::vector<CrossLimitRow> rows;
  double fitted_order = 0.0;
};
CrossLimitCheck cross_limit_check(int j, Series series, const std::vector<int>& ns);

/// max over a t-grid of (psi_n(t) - t)/t^2 on (0, 1]; psi_n(t) >= t is
/// asserted along the way.
struct PsiBound {
  int n;
  double c;
};
std::vector<PsiBound> psi_bounds(const std::vector<int>& ns, int grid_points = 400);

}  // namespace vicsek
