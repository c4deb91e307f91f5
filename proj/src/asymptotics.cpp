#include "vicsek/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace vicsek {

std::vector<WeylSample> counting_and_weyl(const SpectrumTable& table,
                                          const std::vector<double>& xs) {
  const double top = table.records.back().value;
  const double alpha = table.params.alpha();
  std::vector<WeylSample> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (x > top * (1 + 1e-12))
      throw std::invalid_argument("counting_and_weyl: grid exceeds enumerated range");
    WeylSample s;
    s.x = x;
    s.count = table.count_leq(x);
    s.ratio = x > 0 ? double(s.count) / std::pow(x, alpha) : 0.0;
    out.push_back(s);
  }
  return out;
}

double normalized_weyl(const SpectrumTable& table, const DecimationSystem& sys, double s) {
  const double rho = sys.params().rho();
  const double lam1 = double(sys.psi(4.0L / 3.0L));
  const double top = table.records.back().value;
  // deepest k with lambda_1 rho^{s+k} inside the table
  const int k = int(std::floor(std::log(top / lam1) / std::log(rho) - s));
  if (k < 0) throw std::invalid_argument("normalized_weyl: table too shallow");
  const double x = lam1 * std::pow(rho, s + k);
  return double(table.count_leq(x)) / std::pow(x, table.params.alpha());
}

WeylSpecialValues weyl_special_values(const DecimationSystem& sys, int j) {
  const int n = sys.params().n;
  if (j < 1 || j > n - 1) throw std::invalid_argument("weyl_special_values: j <= n-1");
  const double rho = sys.params().rho();
  const double alpha = sys.params().alpha();
  WeylSpecialValues v;
  v.lambda_2jm1 = double(rho * sys.psi(sys.l_roots()[size_t(j - 1)]));
  v.w_minus = (4.0 * j - 3.0) / std::pow(v.lambda_2jm1, alpha);
  v.w_at = (4.0 * j - 1.0) / std::pow(v.lambda_2jm1, alpha);
  v.lambda_2j = double(rho * sys.psi(sys.h_roots()[size_t(j - 1)]));
  v.w_2j = (4.0 * j) / std::pow(v.lambda_2j, alpha);
  return v;
}

double normalized_weyl_plateau(const DecimationSystem& sys, double s, bool above) {
  const double alpha = sys.params().alpha();
  const double lam1 = double(sys.psi(4.0L / 3.0L));
  return (above ? 3.0 : 1.0) /
         (std::pow(lam1, alpha) * std::pow(std::pow(sys.params().rho(), alpha), s));
}

namespace {

Mat arm_E(int n, bool bump_first) {
  Mat E = Mat::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    E(k, k) = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    if (k > 0) E(k, k - 1) = -0.5;
    if (k + 1 < n) E(k, k + 1) = -0.5;
  }
  if (bump_first) E(0, 0) += 1.0;  // center condition for the sign-alternating case
  return E;
}

}  // namespace

ArmSystem arm_system(const VicsekParams& params, ArmSeries series) {
  const int n = params.n;
  ArmSystem out;
  const bool odd_like = series == ArmSeries::FourThirds || series == ArmSeries::IntervalOdd;
  out.E = arm_E(n, odd_like);
  out.G = Mat::Identity(n, n);
  out.G(n - 1, n - 1) = 0.5;

  if (series != ArmSeries::Zero) {
    // linear generalized symmetric-definite problem E u = 3 lambda G u
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(out.E, out.G);
    if (ges.info() != Eigen::Success) throw std::runtime_error("arm_system: solver failed");
    for (int i = 0; i < n; ++i) {
      const double lam = ges.eigenvalues()[i] / 3.0;
      // the symmetric elimination u(y)=u(z) has a pole at lambda = 2/3; the
      // alternating mode there does not lift to the graph
      if (odd_like && std::abs(lam - 2.0 / 3.0) < 1e-7) continue;
      out.lambdas.push_back(lam);
      out.vectors.conservativeResize(n, Eigen::Index(out.lambdas.size()));
      out.vectors.col(Eigen::Index(out.lambdas.size()) - 1) = ges.eigenvectors().col(i);
    }
    return out;
  }

  // 0-series: G_11 = (3 lambda - 3)/(3 lambda - 4) makes the problem
  // nonlinear; scan det(E - 3 lambda G(lambda)) for sign changes
  auto G_of = [&](double lam) {
    Mat G = out.G;
    G(0, 0) = (3 * lam - 3) / (3 * lam - 4);
    return G;
  };
  auto det_of = [&](double lam) { return Mat(out.E - 3 * lam * G_of(lam)).determinant(); };
  out.lambdas.push_back(0.0);  // the constant
  out.vectors = Mat::Ones(n, 1);
  const int grid = std::max(4000, 600 * n);
  const double hi_end = 4.0 / 3.0 - 1e-8;
  double prev_x = 1e-9, prev_d = det_of(prev_x);
  for (int i = 1; i <= grid; ++i) {
    const double x = 1e-9 + (hi_end - 1e-9) * double(i) / grid;
    const double d = det_of(x);
    if ((d > 0) != (prev_d > 0)) {
      double lo = prev_x, hi = x, flo = prev_d;
      for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = det_of(mid);
        if (fm == 0) {
          lo = hi = mid;
          break;
        }
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else
          hi = mid;
      }
      const double root = 0.5 * (lo + hi);
      if (std::abs(root - 2.0 / 3.0) > 1e-7) {  // same elimination pole
        out.lambdas.push_back(root);
        Eigen::JacobiSVD<Mat> svd(out.E - 3 * root * G_of(root), Eigen::ComputeFullV);
        out.vectors.conservativeResize(n, Eigen::Index(out.lambdas.size()));
        out.vectors.col(Eigen::Index(out.lambdas.size()) - 1) = svd.matrixV().col(n - 1);
      }
    }
    prev_x = x;
    prev_d = d;
  }
  return out;
}

CrossLimitCheck cross_limit_check(int j, Series series, const std::vector<int>& ns) {
  if (j < 1) throw std::invalid_argument("cross_limit_check: j >= 1");
  const double pi = std::numbers::pi;
  const double half = (series == Series::FourThirds) ? 0.5 : 1.0;
  CrossLimitCheck out;
  std::vector<double> lx, ly;
  for (int n : ns) {
    const VicsekParams p(n);
    const DecimationSystem sys(p);
    double lam;
    if (series == Series::FourThirds) {
      if (j > n - 1) throw std::invalid_argument("cross_limit_check: j too large for n");
      lam = double(p.rho() * sys.psi(sys.l_roots()[size_t(j - 1)]));
    } else {
      lam = (j == 1) ? 0.0 : double(p.rho() * sys.psi(sys.h_roots()[size_t(j - 2)]));
    }
    const double limit = 4 * pi * pi / 3.0 * (j - half) * (j - half);
    const double err = std::abs(lam - limit);
    out.rows.push_back({n, lam, limit, err});
    if (err > 0) {
      lx.push_back(std::log(double(n)));
      ly.push_back(std::log(err));
    }
  }
  if (lx.size() >= 2) {
    // least-squares slope of log err against log n
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double m = double(lx.size());
    out.fitted_order = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  }
  return out;
}

std::vector<PsiBound> psi_bounds(const std::vector<int>& ns, int grid_points) {
  std::vector<PsiBound> out;
  for (int n : ns) {
    const DecimationSystem sys(VicsekParams{n});
    double c = 0.0;
    for (int i = 1; i <= grid_points; ++i) {
      const long double t = (long double)i / grid_points;
      const long double v = sys.psi(t);
      if (v < t * (1 - 1e-12L))
        throw std::logic_error("psi_bounds: psi(t) < t");
      c = std::max(c, double((v - t) / (t * t)));
    }
    out.push_back({n, c});
  }
  return out;
}

}  // namespace vicsek
