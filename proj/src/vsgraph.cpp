#include "vicsek/vsgraph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>

#include <Eigen/Eigenvalues>

namespace vicsek {

namespace {

int64_t env_budget(const char* name, int64_t fallback) {
  if (const char* s = std::getenv(name)) {
    char* end = nullptr;
    long long v = std::strtoll(s, &end, 10);
    if (end != s && v > 0) return v;
  }
  return fallback;
}

int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::pair<int, int> map_translation(const VicsekParams& p, int j) {
  const int n = p.n;
  if (j < 0 || j >= p.num_maps()) throw std::invalid_argument("map index out of range");
  if (j == 0) return {n - 1, n - 1};
  const int a = (j - 1) / (n - 1) + 1;  // arm 1..4
  const int k = (j - 1) % (n - 1) + 1;  // step outward 1..n-1
  switch (a) {
    case 1: return {n - 1 - k, n - 1 - k};
    case 2: return {n - 1 + k, n - 1 - k};
    case 3: return {n - 1 + k, n - 1 + k};
    default: return {n - 1 - k, n - 1 + k};
  }
}

GraphApprox build_graph(const VicsekParams& params, int m) {
  if (m < 0) throw std::invalid_argument("build_graph: level must be >= 0");
  const int nm = params.num_maps();
  const int c = params.contraction();

  const int64_t budget = env_budget("VICSEK_MAX_VERTICES", 8'000'000);
  // 3(4n-3)^m + 1 vertices
  {
    double count = 3.0 * std::pow(double(nm), m) + 1.0;
    if (count > double(budget))
      throw budget_error("build_graph: vertex count " + std::to_string(count) +
                         " exceeds budget " + std::to_string(budget));
  }

  GraphApprox g;
  g.params = params;
  g.level = m;
  g.scale = ipow(c, m);

  // Cell translations, word order (first letter outermost).
  std::vector<std::pair<int64_t, int64_t>> offsets{{0, 0}};
  for (int lvl = 0; lvl < m; ++lvl) {
    std::vector<std::pair<int64_t, int64_t>> next;
    next.reserve(offsets.size() * nm);
    for (const auto& o : offsets)
      for (int j = 0; j < nm; ++j) {
        auto t = map_translation(params, j);
        next.emplace_back(o.first * c + t.first, o.second * c + t.second);
      }
    offsets.swap(next);
  }

  static constexpr int64_t qx[4] = {0, 1, 1, 0};
  static constexpr int64_t qy[4] = {0, 0, 1, 1};

  const int64_t ncells = int64_t(offsets.size());
  g.cells.resize(ncells);
  g.index_of_coord.reserve(size_t(3 * ncells + 1));
  g.vx.reserve(size_t(3 * ncells + 1));
  g.vy.reserve(size_t(3 * ncells + 1));

  for (int64_t ci = 0; ci < ncells; ++ci) {
    Cell& cell = g.cells[size_t(ci)];
    cell.ox = offsets[size_t(ci)].first;
    cell.oy = offsets[size_t(ci)].second;
    for (int q = 0; q < 4; ++q) {
      const int64_t x = cell.ox + qx[q], y = cell.oy + qy[q];
      auto [it, inserted] = g.index_of_coord.try_emplace(g.key(x, y), int32_t(g.vx.size()));
      if (inserted) {
        g.vx.push_back(x);
        g.vy.push_back(y);
      }
      cell.corner[size_t(q)] = it->second;
    }
  }

  const int64_t nv = g.vertex_count();
  g.degree.assign(size_t(nv), 0);
  for (const Cell& cell : g.cells)
    for (int32_t v : cell.corner) g.degree[size_t(v)] += 3;

  g.adj_offset.assign(size_t(nv) + 1, 0);
  for (int64_t v = 0; v < nv; ++v) g.adj_offset[size_t(v) + 1] = g.adj_offset[size_t(v)] + g.degree[size_t(v)];
  g.adj.assign(size_t(g.adj_offset[size_t(nv)]), 0);
  {
    std::vector<int64_t> fill(g.adj_offset.begin(), g.adj_offset.end() - 1);
    for (const Cell& cell : g.cells)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          if (a == b) continue;
          g.adj[size_t(fill[size_t(cell.corner[size_t(a)])]++)] = cell.corner[size_t(b)];
        }
  }
  for (int64_t v = 0; v < nv; ++v)
    std::sort(g.adj.begin() + g.adj_offset[size_t(v)], g.adj.begin() + g.adj_offset[size_t(v) + 1]);

  g.boundary_ids = {g.vertex_at(0, 0), g.vertex_at(g.scale, 0),
                    g.vertex_at(g.scale, g.scale), g.vertex_at(0, g.scale)};
  g.central_ids = g.cells[0].corner;  // cell 0 is the all-zeros word
  return g;
}

static void check_level(const GraphApprox& g, const FunctionOnGraph& u, const char* op) {
  if (u.level != g.level || u.values.size() != g.vertex_count())
    throw std::invalid_argument(std::string(op) + ": function level/size mismatch");
}

double inner_product(const GraphApprox& g, const FunctionOnGraph& u,
                     const FunctionOnGraph& v) {
  check_level(g, u, "inner_product");
  check_level(g, v, "inner_product");
  const int64_t nv = g.vertex_count();
  double s = 0.0;
  for (int64_t i = 0; i < nv; ++i)
    s += g.degree[size_t(i)] * u.values[i] * v.values[i];
  const double w = 0.25 / (3.0 * std::pow(double(g.params.num_maps()), g.level));
  return w * s;
}

double graph_energy(const GraphApprox& g, const FunctionOnGraph& u) {
  check_level(g, u, "graph_energy");
  double e = 0.0;
  const int64_t nv = g.vertex_count();
  for (int64_t i = 0; i < nv; ++i)
    for (int64_t k = g.adj_offset[size_t(i)]; k < g.adj_offset[size_t(i) + 1]; ++k) {
      const int32_t j = g.adj[size_t(k)];
      if (j > i) {
        const double d = u.values[i] - u.values[j];
        e += d * d;
      }
    }
  return e;
}

double graph_energy_renormalized(const GraphApprox& g, const FunctionOnGraph& u) {
  return graph_energy(g, u) / std::pow(double(g.params.contraction()), g.level);
}

FunctionOnGraph laplacian_apply(const GraphApprox& g, const FunctionOnGraph& u) {
  check_level(g, u, "laplacian_apply");
  FunctionOnGraph out{g.level, Vec::Zero(g.vertex_count())};
  const int64_t nv = g.vertex_count();
  for (int64_t i = 0; i < nv; ++i) {
    double s = 0.0;
    for (int64_t k = g.adj_offset[size_t(i)]; k < g.adj_offset[size_t(i) + 1]; ++k)
      s += u.values[g.adj[size_t(k)]];
    out.values[i] = s / g.degree[size_t(i)] - u.values[i];
  }
  return out;
}

static Mat symmetrized_minus_laplacian(const GraphApprox& g) {
  const int64_t nv = g.vertex_count();
  const int64_t dense_budget = env_budget("VICSEK_DENSE_BUDGET", 2000);
  if (nv > dense_budget)
    throw budget_error("oracle: " + std::to_string(nv) + " vertices exceed dense budget " +
                       std::to_string(dense_budget));
  Mat M = Mat::Zero(nv, nv);
  for (int64_t i = 0; i < nv; ++i) {
    M(i, i) = 1.0;
    const double di = std::sqrt(double(g.degree[size_t(i)]));
    for (int64_t k = g.adj_offset[size_t(i)]; k < g.adj_offset[size_t(i) + 1]; ++k) {
      const int32_t j = g.adj[size_t(k)];
      M(i, j) -= 1.0 / (di * std::sqrt(double(g.degree[size_t(j)])));
    }
  }
  return M;
}

OracleEigen oracle_eigenpairs(const GraphApprox& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized_minus_laplacian(g));
  if (es.info() != Eigen::Success) throw std::runtime_error("oracle: eigensolver failed");
  OracleEigen out;
  out.values = es.eigenvalues();
  // undo the similarity: eigenfunctions of -Delta are D^{-1/2} w
  out.vectors = es.eigenvectors();
  const int64_t nv = g.vertex_count();
  for (int64_t i = 0; i < nv; ++i)
    out.vectors.row(i) /= std::sqrt(double(g.degree[size_t(i)]));
  return out;
}

std::vector<std::pair<double, int>> oracle_spectrum(const GraphApprox& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrized_minus_laplacian(g));
  if (es.info() != Eigen::Success) throw std::runtime_error("oracle: eigensolver failed");
  const Vec& ev = es.eigenvalues();
  std::vector<std::pair<double, int>> groups;
  for (int64_t i = 0; i < ev.size(); ++i) {
    const double v = std::abs(ev[i]) < 1e-12 ? 0.0 : ev[i];
    if (!groups.empty() && v - groups.back().first <= 1e-9 * std::max(1.0, std::abs(v)))
      ++groups.back().second;
    else
      groups.emplace_back(v, 1);
  }
  return groups;
}

std::vector<int32_t> diagonal_vertices(const GraphApprox& g, int arm) {
  if (arm < 0 || arm > 4) throw std::invalid_argument("diagonal_vertices: arm must be 0..4");
  const int64_t S = g.scale;
  std::vector<int32_t> out;
  const int64_t nv = g.vertex_count();
  for (int64_t i = 0; i < nv; ++i) {
    const int64_t x = g.vx[size_t(i)], y = g.vy[size_t(i)];
    bool take = false;
    switch (arm) {
      case 0: take = (x == y); break;
      case 1: take = (x == y && 2 * x < S); break;
      case 3: take = (x == y && 2 * x > S); break;
      case 2: take = (x + y == S && 2 * x > S); break;
      case 4: take = (x + y == S && 2 * x < S); break;
    }
    if (take) out.push_back(int32_t(i));
  }
  auto pos = [&](int32_t v) { return g.vx[size_t(v)]; };
  switch (arm) {
    case 0: std::sort(out.begin(), out.end(), [&](int a, int b) { return pos(a) < pos(b); }); break;
    case 1: std::sort(out.begin(), out.end(), [&](int a, int b) { return pos(a) < pos(b); }); break;
    case 3: std::sort(out.begin(), out.end(), [&](int a, int b) { return pos(a) > pos(b); }); break;
    case 2: std::sort(out.begin(), out.end(), [&](int a, int b) { return pos(a) > pos(b); }); break;
    case 4: std::sort(out.begin(), out.end(), [&](int a, int b) { return pos(a) < pos(b); }); break;
  }
  return out;
}

std::vector<int32_t> isometry_vertex_map(const GraphApprox& g,
                                         const std::array<int, 4>& perm) {
  {
    std::array<bool, 5> seen{};
    for (int a : perm) {
      if (a < 1 || a > 4 || seen[size_t(a)])
        throw std::invalid_argument("isometry: perm must be a permutation of 1..4");
      seen[size_t(a)] = true;
    }
  }
  const int64_t S = g.scale;
  auto rot = [&](int64_t& x, int64_t& y, int k) {
    for (int i = 0; i < k; ++i) {
      int64_t nx = S - y, ny = x;
      x = nx;
      y = ny;
    }
  };
  const int64_t nv = g.vertex_count();
  std::vector<int32_t> map(static_cast<size_t>(nv));
  for (int64_t i = 0; i < nv; ++i) {
    int64_t x = g.vx[size_t(i)], y = g.vy[size_t(i)];
    int a;  // arm by quadrant; q0 is never a vertex so ties cannot occur
    if (2 * x < S)
      a = (2 * y < S) ? 1 : 4;
    else
      a = (2 * y < S) ? 2 : 3;
    rot(x, y, ((perm[size_t(a - 1)] - a) % 4 + 4) % 4);
    map[size_t(i)] = g.vertex_at(x, y);
  }
  return map;
}

FunctionOnGraph apply_isometry(const GraphApprox& g, const std::array<int, 4>& perm,
                               const FunctionOnGraph& u) {
  check_level(g, u, "apply_isometry");
  auto map = isometry_vertex_map(g, perm);
  FunctionOnGraph out{g.level, Vec(g.vertex_count())};
  for (int64_t i = 0; i < g.vertex_count(); ++i) out.values[i] = u.values[map[size_t(i)]];
  return out;
}

std::vector<int32_t> bfs_hops(const GraphApprox& g, const std::vector<int32_t>& seeds) {
  std::vector<int32_t> hops(size_t(g.vertex_count()), -1);
  std::deque<int32_t> q;
  for (int32_t s : seeds) {
    hops[size_t(s)] = 0;
    q.push_back(s);
  }
  while (!q.empty()) {
    const int32_t v = q.front();
    q.pop_front();
    for (int64_t k = g.adj_offset[size_t(v)]; k < g.adj_offset[size_t(v) + 1]; ++k) {
      const int32_t w = g.adj[size_t(k)];
      if (hops[size_t(w)] < 0) {
        hops[size_t(w)] = hops[size_t(v)] + 1;
        q.push_back(w);
      }
    }
  }
  return hops;
}

double geodesic_distance(const GraphApprox& g, int32_t v, int32_t w) {
  const double unit = 2.0 / double(g.scale);  // one cell traversal
  if (v == kCenterPoint && w == kCenterPoint) return 0.0;
  if (v == kCenterPoint || w == kCenterPoint) {
    const int32_t x = (v == kCenterPoint) ? w : v;
    std::vector<int32_t> seeds(g.central_ids.begin(), g.central_ids.end());
    auto hops = bfs_hops(g, seeds);
    return 1.0 / double(g.scale) + unit * hops[size_t(x)];
  }
  auto hops = bfs_hops(g, {v});
  return unit * hops[size_t(w)];
}

Vec distances_to_center(const GraphApprox& g) {
  std::vector<int32_t> seeds(g.central_ids.begin(), g.central_ids.end());
  auto hops = bfs_hops(g, seeds);
  Vec d(g.vertex_count());
  for (int64_t i = 0; i < g.vertex_count(); ++i)
    d[i] = (1.0 + 2.0 * hops[size_t(i)]) / double(g.scale);
  return d;
}

}  // namespace vicsek
