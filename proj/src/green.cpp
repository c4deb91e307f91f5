#include "vicsek/green.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace vicsek {

namespace {

void validate_point(const SkeletonPoint& p) {
  if (p.arm < 1 || p.arm > 4) throw std::invalid_argument("skeleton point: arm in 1..4");
  if (p.s < 0 || p.s > 1) throw std::invalid_argument("skeleton point: s in [0, 1]");
  if (p.offset < 0) throw std::invalid_argument("skeleton point: offset >= 0");
  if ((p.s == 0.0 || p.s == 1.0) && p.offset > 0)
    throw std::invalid_argument("skeleton point: no tree hangs at s = 0 or s = 1");
}

// level of the diagonal cell whose center sits at arm coordinate s; trees
// attach only at these coordinates
int attachment_level(double s, int n, int depth = 1) {
  if (depth > 48)
    throw std::invalid_argument("skeleton point: s is not an attachment coordinate");
  const double u = s * (2 * n - 1);
  const double k = std::round(u / 2);
  if (k >= 1 && k <= n - 1 && std::abs(u - 2 * k) < 1e-9) return depth;
  if (u < 1) return attachment_level(u, n, depth + 1);
  const double cell = std::round((u + 1) / 2);  // arm cell index along the diagonal
  const double local = std::abs(u - 2 * std::min(cell, double(n - 1)));
  return attachment_level(local, n, depth + 1);
}

double common_path_length(const VicsekParams& params, const SkeletonPoint& x,
                          const SkeletonPoint& y) {
  if (x.offset == 0 || y.offset == 0) return 0.0;
  if (x.branch_path.empty() || y.branch_path.empty())
    throw std::invalid_argument("green_eval: equal-attachment case needs branch paths");
  size_t lcp = 0;
  while (lcp < x.branch_path.size() && lcp < y.branch_path.size() &&
         x.branch_path[lcp] == y.branch_path[lcp])
    ++lcp;
  double d;
  if (lcp == x.branch_path.size() || lcp == y.branch_path.size()) {
    // one path is a prefix of the other: they meet at the shallower point
    d = (lcp == x.branch_path.size()) ? x.offset : y.offset;
  } else {
    const int jz = attachment_level(x.s, params.n);
    d = 0.0;
    double seg = std::pow(double(params.contraction()), -jz);
    for (size_t i = 0; i < lcp; ++i) {
      seg /= params.contraction();
      d += seg;
    }
  }
  if (d > std::min(x.offset, y.offset) + 1e-12)
    throw std::invalid_argument("green_eval: inconsistent branch data for equal attachment");
  return d;
}

}  // namespace

double green_eval(const VicsekParams& params, const SkeletonPoint& x, const SkeletonPoint& y) {
  validate_point(x);
  validate_point(y);
  if (x.arm != y.arm) return (1 - x.s) * (1 - y.s) / 4;
  if (x.s < y.s) return (1 - y.s) * (3 * x.s + 1) / 4;
  if (x.s > y.s) return (1 - x.s) * (3 * y.s + 1) / 4;
  const double b = (1 - x.s) * (3 * x.s + 1) / 4;
  return b + common_path_length(params, x, y);
}

VertexSkeletonData vertex_skeleton_data(const GraphApprox& g) {
  const int64_t nv = g.vertex_count();
  const int64_t S = g.scale;
  VertexSkeletonData d;
  d.arm.resize(size_t(nv));
  d.s = Vec(nv);
  d.offset = Vec(nv);
  const Vec to_center = distances_to_center(g);
  std::array<std::vector<int32_t>, 4> corner_hops;
  for (int a = 0; a < 4; ++a) corner_hops[size_t(a)] = bfs_hops(g, {g.boundary_ids[size_t(a)]});
  for (int64_t i = 0; i < nv; ++i) {
    const int64_t x = g.vx[size_t(i)], y = g.vy[size_t(i)];
    int a;
    if (2 * x < S)
      a = (2 * y < S) ? 1 : 4;
    else
      a = (2 * y < S) ? 2 : 3;
    d.arm[size_t(i)] = a;
    const double dq = 2.0 * corner_hops[size_t(a - 1)][size_t(i)] / double(S);
    d.s[i] = (to_center[i] - dq + 1) / 2;
    d.offset[i] = (to_center[i] + dq - 1) / 2;
  }
  return d;
}

namespace {

Vec field_from_skeleton(const GraphApprox& g, const VertexSkeletonData& vd,
                        const SkeletonPoint& y,
                        const std::function<double(int64_t)>& equal_case) {
  const double close = 0.25 / double(g.scale);
  Vec out(g.vertex_count());
  for (int64_t i = 0; i < g.vertex_count(); ++i) {
    const double sv = vd.s[i];
    if (vd.arm[size_t(i)] != y.arm)
      out[i] = (1 - sv) * (1 - y.s) / 4;
    else if (sv < y.s - close)
      out[i] = (1 - y.s) * (3 * sv + 1) / 4;
    else if (sv > y.s + close)
      out[i] = (1 - sv) * (3 * y.s + 1) / 4;
    else
      out[i] = equal_case(i);
  }
  return out;
}

}  // namespace

FunctionOnGraph green_field(const GraphApprox& g, const SkeletonPoint& y) {
  validate_point(y);
  if (y.offset != 0)
    throw std::invalid_argument(
        "green_field: off-diagonal source must be given as a vertex (green_field_at_vertex)");
  const auto vd = vertex_skeleton_data(g);
  const double b = (1 - y.s) * (3 * y.s + 1) / 4;
  // everything at the source attachment hangs at z = y, so G is b there
  return {g.level, field_from_skeleton(g, vd, y, [&](int64_t) { return b; })};
}

FunctionOnGraph green_field_at_vertex(const GraphApprox& g, int32_t yv) {
  if (yv < 0 || yv >= g.vertex_count())
    throw std::invalid_argument("green_field_at_vertex: bad vertex");
  const auto vd = vertex_skeleton_data(g);
  SkeletonPoint y;
  y.arm = vd.arm[size_t(yv)];
  y.s = vd.s[yv];
  y.offset = vd.offset[yv];
  const double b = (1 - y.s) * (3 * y.s + 1) / 4;
  const auto hops = bfs_hops(g, {yv});
  const double unit = 2.0 / double(g.scale);
  return {g.level, field_from_skeleton(g, vd, y, [&](int64_t i) {
            // meeting point via the tree Gromov product at the attachment
            const double dg = unit * hops[size_t(i)];
            return b + (vd.offset[i] + y.offset - dg) / 2;
          })};
}

GreenVerification green_verify(double s, double t) {
  if (s <= 0 || s >= 1)
    throw std::domain_error("green_verify: s in (0, 1); the endpoints are degenerate");
  if (t < 0) throw std::invalid_argument("green_verify: t >= 0");
  GreenVerification v;
  v.a = (1 - s) / 4;
  v.b = (1 - s) * (3 * s + 1) / 4;
  v.c = v.b + t;
  v.residuals[0] = 3 * v.a + (v.a - v.b) / s;
  v.residuals[1] = (v.b - v.a) / s + v.b / (1 - s) - 1;
  v.residuals[2] = t > 0 ? (v.c - v.b) / t - 1 : 0.0;
  return v;
}

}  // namespace vicsek
