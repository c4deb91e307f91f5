#include "vicsek/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace vicsek {

namespace {

// sin(sqrt(l) t)/sqrt(l), series branch against cancellation near 0
double wave_weight(double lambda, double t) {
  const double z = lambda * t * t;
  if (z < 1e-8) return t * (1.0 - z / 6.0 + z * z / 120.0);
  const double s = std::sqrt(lambda);
  return std::sin(s * t) / s;
}

Vec mu_weights(const GraphApprox& g) {
  const double wbase = 0.25 / (3.0 * std::pow(double(g.params.num_maps()), g.level));
  Vec w(g.vertex_count());
  for (int64_t i = 0; i < g.vertex_count(); ++i) w[i] = wbase * g.degree[size_t(i)];
  return w;
}

}  // namespace

CenterKernelBasis center_kernel_basis(const DecimationSystem& sys, const GraphHierarchy& h,
                                      int M, int depth) {
  const SpectrumTable table = enumerate_spectrum(sys, depth);
  CenterKernelBasis b;
  b.params = sys.params();
  b.level = M;
  b.depth = depth;
  b.records = zero_series_records(table);
  const GraphApprox& g = h.at(M);
  b.funcs = Mat(g.vertex_count(), Eigen::Index(b.records.size()));
  b.centers = Vec(Eigen::Index(b.records.size()));
  for (size_t j = 0; j < b.records.size(); ++j) {
    EigenBasis eb = build_eigenfunctions(sys, b.records[j], M, h);
    const auto nc = fractal_norm_and_center(sys, b.records[j], g, eb.funcs.col(0));
    b.funcs.col(Eigen::Index(j)) = eb.funcs.col(0) / std::sqrt(nc.norm_sq);
    b.centers[Eigen::Index(j)] = nc.center / std::sqrt(nc.norm_sq);
  }
  // first excluded segment, for tail estimates
  const SpectrumTable deeper = enumerate_spectrum(sys, depth + 1);
  const double last = table.records.back().value;
  for (const auto& r : deeper.records)
    if (r.value > last * (1 + 1e-12)) {
      if (b.next_value == 0) b.next_value = r.value;
      b.next_mult += r.multiplicity;
    }
  return b;
}

HeatField heat_center(const CenterKernelBasis& basis, double t) {
  if (!(t > 0)) throw std::invalid_argument("heat_center: t must be positive");
  HeatField out;
  out.h.params = basis.params;
  out.h.level = basis.level;
  out.h.t = t;
  out.h.depth = basis.depth;
  Vec w(basis.centers.size());
  for (Eigen::Index j = 0; j < w.size(); ++j)
    w[j] = std::exp(-t * basis.records[size_t(j)].value) * basis.centers[j];
  out.h.values = basis.funcs * w;
  out.center = basis.centers.dot(w);
  out.h.tail_bound = double(basis.next_mult) * std::exp(-t * basis.next_value);
  out.normalized = out.h.values / out.center;
  return out;
}

HeatField heat_center(const DecimationSystem& sys, const GraphHierarchy& h, double t,
                      int M, int depth) {
  return heat_center(center_kernel_basis(sys, h, M, depth), t);
}

std::vector<TraceSample> heat_trace(const DecimationSystem& sys, int depth,
                                    const std::vector<double>& ts) {
  const SpectrumTable table = enumerate_spectrum(sys, depth);
  const double alpha = sys.params().alpha();
  std::vector<TraceSample> out;
  out.reserve(ts.size());
  for (double t : ts) {
    if (!(t > 0)) throw std::invalid_argument("heat_trace: positive t grid required");
    double tr = 0.0;
    for (const auto& r : table.records) tr += double(r.multiplicity) * std::exp(-t * r.value);
    out.push_back({t, tr, std::pow(t, alpha) * tr});
  }
  return out;
}

std::vector<TraceSample> center_heat_samples(const DecimationSystem& sys, int depth,
                                             const std::vector<double>& ts) {
  const SpectrumTable table = enumerate_spectrum(sys, depth);
  const auto zrecs = zero_series_records(table);
  std::vector<double> c2(zrecs.size());
  for (size_t j = 0; j < zrecs.size(); ++j) {
    const double c = zero_series_center_unit_norm(sys, zrecs[j]);
    c2[j] = c * c;
  }
  const double alpha = sys.params().alpha();
  std::vector<TraceSample> out;
  for (double t : ts) {
    double v = 0.0;
    for (size_t j = 0; j < zrecs.size(); ++j) v += c2[j] * std::exp(-t * zrecs[j].value);
    out.push_back({t, v, std::pow(t, alpha) * v});
  }
  return out;
}

SinusoidFit fit_log_periodic(const std::vector<double>& ts, const std::vector<double>& ys) {
  if (ts.size() != ys.size() || ts.size() < 8)
    throw std::invalid_argument("fit_log_periodic: need matched samples");
  const Eigen::Index n = Eigen::Index(ts.size());
  Vec x(n), y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x[i] = std::log(ts[size_t(i)]);
    y[i] = ys[size_t(i)];
  }
  auto solve_at = [&](double c, double* a, double* p, double* q) {
    Mat B(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      B(i, 0) = 1.0;
      B(i, 1) = std::sin(c * x[i]);
      B(i, 2) = std::cos(c * x[i]);
    }
    Vec beta = (B.transpose() * B).ldlt().solve(B.transpose() * y);
    *a = beta[0];
    *p = beta[1];
    *q = beta[2];
    return (B * beta - y).squaredNorm();
  };
  double best_c = 0, best_sse = std::numeric_limits<double>::max();
  double a, p, q;
  for (double c = 0.5; c <= 5.0; c += 0.005) {
    const double sse = solve_at(c, &a, &p, &q);
    if (sse < best_sse) {
      best_sse = sse;
      best_c = c;
    }
  }
  double lo = best_c - 0.01, hi = best_c + 0.01;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
    if (solve_at(c1, &a, &p, &q) < solve_at(c2, &a, &p, &q))
      hi = c2;
    else
      lo = c1;
  }
  best_c = 0.5 * (lo + hi);
  best_sse = solve_at(best_c, &a, &p, &q);
  SinusoidFit fit;
  fit.a = a;
  fit.b = std::hypot(p, q);
  fit.c = best_c;
  fit.d = std::atan2(q, p);
  fit.rms = std::sqrt(best_sse / double(n));
  return fit;
}

KernelField wave_center(const CenterKernelBasis& basis, double t) {
  if (t < 0) throw std::invalid_argument("wave_center: t must be >= 0");
  KernelField out;
  out.params = basis.params;
  out.level = basis.level;
  out.t = t;
  out.depth = basis.depth;
  Vec w(basis.centers.size());
  for (Eigen::Index j = 0; j < w.size(); ++j)
    w[j] = wave_weight(basis.records[size_t(j)].value, t) * basis.centers[j];
  out.values = basis.funcs * w;
  out.tail_bound = basis.next_value > 0 ? double(basis.next_mult) / std::sqrt(basis.next_value) : 0;
  return out;
}

KernelField wave_center(const DecimationSystem& sys, const GraphHierarchy& h, double t,
                        int M, int depth) {
  return wave_center(center_kernel_basis(sys, h, M, depth), t);
}

ProjectionField projection_kernel(const CenterKernelBasis& basis, int32_t x,
                                  const GraphApprox& g) {
  if (g.level != basis.level)
    throw std::invalid_argument("projection_kernel: graph level mismatch");
  if (x < 0 || x >= g.vertex_count())
    throw std::invalid_argument("projection_kernel: bad vertex");
  ProjectionField out;
  out.k.params = basis.params;
  out.k.level = basis.level;
  out.k.depth = basis.depth;
  out.k.values = basis.funcs * basis.funcs.row(x).transpose();
  const Vec w = mu_weights(g);
  out.integral = w.dot(out.k.values);
  out.abs_integral = w.dot(out.k.values.cwiseAbs());
  return out;
}

double max_abs_projection_integral(const CenterKernelBasis& basis, const GraphApprox& g) {
  const Vec w = mu_weights(g);
  const int64_t nv = g.vertex_count();
  double best = 0.0;
  const Eigen::Index chunk = 256;
  for (Eigen::Index r0 = 0; r0 < nv; r0 += chunk) {
    const Eigen::Index rows = std::min<Eigen::Index>(chunk, nv - r0);
    const Mat K = basis.funcs.middleRows(r0, rows) * basis.funcs.transpose();
    for (Eigen::Index i = 0; i < rows; ++i)
      best = std::max(best, K.row(i).cwiseAbs().dot(w.transpose()));
  }
  return best;
}

LevelSetRegion level_set_region(const GraphApprox& g, const Vec& field, double s) {
  if (field.size() != g.vertex_count())
    throw std::invalid_argument("level_set_region: field size mismatch");
  LevelSetRegion out;
  std::vector<int8_t> in(size_t(g.vertex_count()), 0);
  for (int64_t i = 0; i < g.vertex_count(); ++i)
    if (field[i] >= s) {
      in[size_t(i)] = 1;
      out.vertices.push_back(int32_t(i));
    }
  std::vector<int8_t> seen(size_t(g.vertex_count()), 0);
  for (int32_t v0 : out.vertices) {
    if (seen[size_t(v0)]) continue;
    ++out.components;
    std::vector<int32_t> stack{v0};
    seen[size_t(v0)] = 1;
    while (!stack.empty()) {
      const int32_t v = stack.back();
      stack.pop_back();
      for (int64_t k = g.adj_offset[size_t(v)]; k < g.adj_offset[size_t(v) + 1]; ++k) {
        const int32_t u = g.adj[size_t(k)];
        if (in[size_t(u)] && !seen[size_t(u)]) {
          seen[size_t(u)] = 1;
          stack.push_back(u);
        }
      }
    }
  }
  return out;
}

double abs_width(const GraphApprox& g, const Vec& field, double eps, bool diagonal_only) {
  const Vec d = distances_to_center(g);
  double best = 0.0;
  for (int64_t i = 0; i < g.vertex_count(); ++i) {
    if (diagonal_only && g.vx[size_t(i)] != g.vy[size_t(i)] &&
        g.vx[size_t(i)] + g.vy[size_t(i)] != g.scale)
      continue;
    if (std::abs(field[i]) >= eps) best = std::max(best, d[i]);
  }
  return best;
}

}  // namespace vicsek
