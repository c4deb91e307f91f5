#include "vicsek/eigenfunc.hpp"

#include <algorithm>
#include <cmath>

namespace vicsek {

namespace {

// graph eigenvalue at every level >= birth, following the word then phi_1
std::vector<long double> eigenvalue_chain(const DecimationSystem& sys,
                                          const EigenvalueRecord& rec, int levels) {
  std::vector<long double> chain;
  chain.reserve(size_t(levels) + 1);
  long double v = (rec.series == Series::Zero) ? 0.0L : 4.0L / 3.0L;
  chain.push_back(v);
  for (int i = 0; i < levels; ++i) {
    const int j = size_t(i) < rec.word.size() ? rec.word[size_t(i)] : 1;
    v = sys.branch(j, v);
    chain.push_back(v);
  }
  return chain;
}

}  // namespace

Vec extend_values(const DecimationSystem& sys, const GraphApprox& g_m,
                  const GraphApprox& g_next, const Vec& u, double lambda_next) {
  if (u.size() != g_m.vertex_count())
    throw std::invalid_argument("extend_values: size mismatch");
  if (g_next.level != g_m.level + 1)
    throw std::invalid_argument("extend_values: graphs not consecutive");
  const Mat E = sys.extension_matrix(lambda_next);
  const GraphApprox& l1 = sys.level1_graph();
  const auto& rows = sys.extension_rows();
  const int64_t c = sys.params().contraction();

  Vec out(g_next.vertex_count());
  for (int64_t i = 0; i < g_m.vertex_count(); ++i)
    out[g_next.vertex_at(c * g_m.vx[size_t(i)], c * g_m.vy[size_t(i)])] = u[i];
  Eigen::Vector4d corners;
  for (const Cell& cell : g_m.cells) {
    for (int q = 0; q < 4; ++q) corners[q] = u[cell.corner[size_t(q)]];
    const Eigen::VectorXd vals = E * corners;
    for (size_t r = 0; r < rows.size(); ++r) {
      const int32_t lv = rows[r];
      out[g_next.vertex_at(cell.ox * c + l1.vx[size_t(lv)],
                           cell.oy * c + l1.vy[size_t(lv)])] = vals[Eigen::Index(r)];
    }
  }
  return out;
}

EigenBasis build_eigenfunctions(const DecimationSystem& sys, const EigenvalueRecord& rec,
                                int M, const GraphHierarchy& h) {
  // M below birth + word length yields the restriction to V_M, which only
  // sees the first M - birth branch letters
  const int birth = rec.birth_level;
  if (M < birth)
    throw std::invalid_argument("build_eigenfunctions: M below record birth level");
  const auto chain = eigenvalue_chain(sys, rec, M - birth);

  Mat start;
  if (rec.series == Series::Zero) {
    start = Mat::Ones(h.at(birth).vertex_count(), 1);
  } else {
    // basis of { per-cell corner sums = 0 } on V_birth. The cells form a
    // tree; eliminating, per cell, the junction shared with its parent (a
    // free corner for the root) makes the constraint system triangular in
    // post-order.
    const GraphApprox& g = h.at(birth);
    const int64_t nv = g.vertex_count();
    const size_t nc = g.cells.size();
    std::vector<std::array<int32_t, 2>> cells_of(size_t(nv), {-1, -1});
    for (size_t ci = 0; ci < nc; ++ci)
      for (int32_t v : g.cells[ci].corner)
        cells_of[size_t(v)][cells_of[size_t(v)][0] < 0 ? 0 : 1] = int32_t(ci);

    size_t root = 0;
    for (size_t ci = 0; ci < nc; ++ci)
      for (int32_t v : g.cells[ci].corner)
        if (v == g.boundary_ids[0]) root = ci;

    std::vector<int32_t> pivot(nc, -1), order;
    std::vector<int8_t> seen(nc, 0);
    order.reserve(nc);
    order.push_back(int32_t(root));
    seen[root] = 1;
    for (size_t qi = 0; qi < order.size(); ++qi) {
      const size_t c = size_t(order[qi]);
      for (int32_t v : g.cells[c].corner) {
        if (g.degree[size_t(v)] != 6) continue;
        const auto& pair = cells_of[size_t(v)];
        const size_t other = size_t(pair[0] == int32_t(c) ? pair[1] : pair[0]);
        if (!seen[other]) {
          seen[other] = 1;
          pivot[other] = v;  // junction toward the parent
          order.push_back(int32_t(other));
        }
      }
    }
    std::vector<int8_t> is_pivot(size_t(nv), 0);
    for (size_t ci = 0; ci < nc; ++ci)
      if (ci != root && pivot[ci] >= 0) is_pivot[size_t(pivot[ci])] = 1;
    for (int32_t v : g.cells[root].corner)
      if (g.degree[size_t(v)] == 3 && pivot[root] < 0) {
        pivot[root] = v;
        is_pivot[size_t(v)] = 1;
      }
    if (pivot[root] < 0) throw std::logic_error("build_eigenfunctions: no root pivot");

    std::vector<int32_t> free_ids;
    for (int64_t v = 0; v < nv; ++v)
      if (!is_pivot[size_t(v)]) free_ids.push_back(int32_t(v));
    if (int64_t(free_ids.size()) != rec.multiplicity)
      throw std::logic_error("build_eigenfunctions: basis dimension mismatch");

    start = Mat::Zero(nv, Eigen::Index(free_ids.size()));
    for (size_t k = 0; k < free_ids.size(); ++k) start(free_ids[k], Eigen::Index(k)) = 1.0;
    for (size_t qi = nc; qi-- > 0;) {  // children before parents
      const size_t c = size_t(order[qi]);
      const int32_t pv = pivot[c];
      for (Eigen::Index col = 0; col < start.cols(); ++col) {
        double s = 0;
        for (int32_t v : g.cells[c].corner)
          if (v != pv) s += start(v, col);
        start(pv, col) = -s;
      }
    }
  }

  for (int m = birth; m < M; ++m) {
    Mat next(h.at(m + 1).vertex_count(), start.cols());
    for (Eigen::Index c = 0; c < start.cols(); ++c)
      next.col(c) =
          extend_values(sys, h.at(m), h.at(m + 1), start.col(c), double(chain[size_t(m - birth + 1)]));
    start.swap(next);
  }
  return EigenBasis{rec, M, std::move(start)};
}

double norm_factor(const DecimationSystem& sys, double lambda_m) {
  const Mat E = sys.extension_matrix(lambda_m);
  const GraphApprox& l1 = sys.level1_graph();
  const auto& rows = sys.extension_rows();
  Vec w(E.rows());
  for (size_t r = 0; r < rows.size(); ++r)
    w[Eigen::Index(r)] = l1.degree[size_t(rows[r])] == 6 ? 2.0 : 1.0;
  const Mat Q = E.transpose() * w.asDiagonal() * E;
  const double lam_prev = double(sys.eval_R(lambda_m).first);
  // Q is S4-symmetric: alpha on the diagonal, beta off
  const double alpha = Q.diagonal().mean();
  const double beta = (Q.sum() - Q.diagonal().sum()) / 12.0;
  return (1.0 + alpha + 3.0 * beta * (1.0 - lam_prev)) / sys.params().num_maps();
}

double norm_factor_closed_form(double lm) {
  const double num = 20 - 143 * lm + 240 * lm * lm - 108 * lm * lm * lm;
  const double den = 4 - 29 * lm + 60 * lm * lm - 36 * lm * lm * lm;
  return num / (5.0 * den);
}

double center_factor(const DecimationSystem& sys, double lambda_m) {
  const Mat E = sys.extension_matrix(lambda_m);
  const GraphApprox& l1 = sys.level1_graph();
  const auto& rows = sys.extension_rows();
  double kappa = 0.0;
  for (size_t r = 0; r < rows.size(); ++r) {
    const int32_t v = rows[r];
    const bool central = v == l1.central_ids[0] || v == l1.central_ids[1] ||
                         v == l1.central_ids[2] || v == l1.central_ids[3];
    if (central) kappa += E.row(Eigen::Index(r)).sum();
  }
  return kappa / 4.0;
}

namespace {

double tail_product(const DecimationSystem& sys, const EigenvalueRecord& rec,
                    int from_level, bool center) {
  // continue the chain past the word with phi_1 until the factor is 1
  long double v = (rec.series == Series::Zero) ? 0.0L : 4.0L / 3.0L;
  int level = rec.birth_level;
  auto advance = [&]() {
    const size_t i = size_t(level - rec.birth_level);
    v = sys.branch(i < rec.word.size() ? rec.word[i] : 1, v);
    ++level;
  };
  while (level < from_level) advance();
  double prod = 1.0;
  for (int it = 0; it < 400; ++it) {
    advance();
    const double f = center ? center_factor(sys, double(v)) : norm_factor(sys, double(v));
    prod *= f;
    if (level > rec.birth_level + int(rec.word.size()) && std::abs(f - 1.0) < 1e-14)
      return prod;
  }
  throw std::runtime_error("tail_product: no convergence");
}

}  // namespace

double norm_tail_product(const DecimationSystem& sys, const EigenvalueRecord& rec,
                         int from_level) {
  return tail_product(sys, rec, from_level, false);
}
double center_tail_product(const DecimationSystem& sys, const EigenvalueRecord& rec,
                           int from_level) {
  return tail_product(sys, rec, from_level, true);
}

NormCenter fractal_norm_and_center(const DecimationSystem& sys, const EigenvalueRecord& rec,
                                   const GraphApprox& g, const Vec& u) {
  FunctionOnGraph f{g.level, u};
  const double here = inner_product(g, f, f);
  double mean = 0.0;
  for (int32_t c : g.central_ids) mean += u[c];
  mean /= 4.0;
  return {here * norm_tail_product(sys, rec, g.level),
          mean * center_tail_product(sys, rec, g.level)};
}

double zero_series_norm_sq(const DecimationSystem& sys, const EigenvalueRecord& rec) {
  // <1,1>_birth = 1 and every factor from the birth level on
  return norm_tail_product(sys, rec, rec.birth_level);
}

double zero_series_center_unit_norm(const DecimationSystem& sys, const EigenvalueRecord& rec) {
  if (rec.series != Series::Zero)
    throw std::invalid_argument("zero_series_center_unit_norm: not a 0-series record");
  return center_tail_product(sys, rec, 0) / std::sqrt(zero_series_norm_sq(sys, rec));
}

EigenBasis orthonormalize(const DecimationSystem& sys, const GraphApprox& g, EigenBasis basis) {
  if (g.level != basis.level)
    throw std::invalid_argument("orthonormalize: graph level mismatch");
  const double tail = norm_tail_product(sys, basis.record, basis.level);
  auto dot = [&](const Vec& a, const Vec& b) {
    FunctionOnGraph fa{g.level, a}, fb{g.level, b};
    return inner_product(g, fa, fb);
  };
  const Eigen::Index k = basis.funcs.cols();
  for (Eigen::Index i = 0; i < k; ++i) {
    Vec v = basis.funcs.col(i);
    for (Eigen::Index j = 0; j < i; ++j) {
      const Vec w = basis.funcs.col(j);
      v -= dot(v, w) / dot(w, w) * w;
    }
    const double nrm2 = dot(v, v) * tail;  // fractal norm^2
    if (!(nrm2 > 1e-300))
      throw std::runtime_error("orthonormalize: numerically singular Gram matrix");
    basis.funcs.col(i) = v / std::sqrt(nrm2);
  }
  return basis;
}

Eigenfunction perp_function(const DecimationSystem& sys, const EigenvalueRecord& rec,
                            int corner, int M, const GraphHierarchy& h) {
  if (rec.series != Series::FourThirds || rec.birth_level < 1)
    throw std::invalid_argument("perp_function: need a 4/3-series record born at level >= 1");
  if (corner < 1 || corner > 4) throw std::invalid_argument("perp_function: corner in 1..4");
  const int m0 = rec.birth_level;
  const GraphApprox& g0 = h.at(m0 - 1);
  const int64_t nv = g0.vertex_count();
  const double lam20 = double(sys.eval_R(4.0L / 3.0L).first);  // 20 for n = 2

  // ((1 - lam20) D - A) u = e_{q_corner}; the relation holds away from q_i,
  // the delta there fixes the scale
  Mat A = Mat::Zero(nv, nv);
  for (int64_t i = 0; i < nv; ++i) {
    A(i, i) = (1.0 - lam20) * g0.degree[size_t(i)];
    for (int64_t kk = g0.adj_offset[size_t(i)]; kk < g0.adj_offset[size_t(i) + 1]; ++kk)
      A(i, g0.adj[size_t(kk)]) -= 1.0;
  }
  Vec rhs = Vec::Zero(nv);
  rhs[g0.boundary_ids[size_t(corner - 1)]] = 1.0;
  Vec u = A.fullPivLu().solve(rhs);

  // extend into the eigenspace: 4/3 at the birth level, then the record word
  const auto chain = eigenvalue_chain(sys, rec, M - m0);
  Vec cur = extend_values(sys, g0, h.at(m0), u, 4.0 / 3.0);
  for (int m = m0; m < M; ++m)
    cur = extend_values(sys, h.at(m), h.at(m + 1), cur, double(chain[size_t(m - m0 + 1)]));

  const auto nc = fractal_norm_and_center(sys, rec, h.at(M), cur);
  cur /= std::sqrt(nc.norm_sq);
  const int32_t qM = h.at(M).boundary_ids[size_t(corner - 1)];
  if (cur[qM] < 0) cur = -cur;
  Eigenfunction out;
  out.record = rec;
  out.level = M;
  out.values = FunctionOnGraph{M, cur};
  const auto nc2 = fractal_norm_and_center(sys, rec, h.at(M), cur);
  out.norm_sq = nc2.norm_sq;
  out.center_value = nc2.center;
  return out;
}

std::vector<EigenvalueRecord> zero_series_records(const SpectrumTable& t) {
  std::vector<EigenvalueRecord> out;
  for (const auto& r : t.records)
    if (r.series == Series::Zero) out.push_back(r);
  return out;
}

DiagonalCoefficients diagonal_coefficients(const DecimationSystem& sys,
                                           const GraphHierarchy& h, int m) {
  if (sys.params().n != 2)
    throw std::invalid_argument("diagonal_coefficients: defined for n = 2");
  if (m > 4) throw budget_error("diagonal_coefficients: m <= 4");
  const GraphApprox& g = h.at(m);

  DiagonalCoefficients out;
  out.diag_vertices = diagonal_vertices(g, 3);
  const SpectrumTable table = enumerate_spectrum(sys, std::max(1, m));
  for (const auto& r : table.records)
    if (r.series == Series::Zero && r.birth_level + int(r.word.size()) <= m)
      out.records.push_back(r);

  const Eigen::Index dim = Eigen::Index(out.records.size());
  out.zbasis = Mat(g.vertex_count(), dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    EigenBasis b = build_eigenfunctions(sys, out.records[size_t(j)], m, h);
    out.zbasis.col(j) = b.funcs.col(0);
  }

  const Eigen::Index nd = Eigen::Index(out.diag_vertices.size());
  Mat restr(nd, dim);  // restriction to D_m
  for (Eigen::Index i = 0; i < nd; ++i)
    restr.row(i) = out.zbasis.row(out.diag_vertices[size_t(i)]);
  Eigen::ColPivHouseholderQR<Mat> qr(restr);
  out.rank = int(qr.rank());
  if (nd != dim || out.rank < int(dim))
    throw std::runtime_error(
        "diagonal_coefficients: singular diagonal restriction (dim Z_m != #D_m)");
  // c_k = Z * restr^{-1} e_k  =>  coefficient matrix Z * restr^{-1}
  out.coefficients = out.zbasis * qr.solve(Mat::Identity(nd, nd));
  return out;
}

std::vector<std::vector<int32_t>> diagonal_interval_subtrees(const GraphApprox& g, int arm) {
  const auto diag3 = diagonal_vertices(g, arm);
  const int64_t S = g.scale;
  const int64_t nv = g.vertex_count();
  std::vector<int8_t> on_diag(size_t(nv), 0);
  for (int64_t v = 0; v < nv; ++v)
    if (g.vx[size_t(v)] == g.vy[size_t(v)] || g.vx[size_t(v)] + g.vy[size_t(v)] == S)
      on_diag[size_t(v)] = 1;
  std::vector<int32_t> pos_in_arm(size_t(nv), -1);
  for (size_t i = 0; i < diag3.size(); ++i) pos_in_arm[size_t(diag3[i])] = int32_t(i);

  std::vector<std::vector<int32_t>> subtree(diag3.empty() ? 0 : diag3.size() - 1);
  std::vector<int8_t> seen(size_t(nv), 0);
  for (int64_t v0 = 0; v0 < nv; ++v0) {
    if (on_diag[size_t(v0)] || seen[size_t(v0)]) continue;
    std::vector<int32_t> comp{int32_t(v0)}, stack{int32_t(v0)};
    seen[size_t(v0)] = 1;
    std::vector<int32_t> touched;
    while (!stack.empty()) {
      const int32_t v = stack.back();
      stack.pop_back();
      for (int64_t k = g.adj_offset[size_t(v)]; k < g.adj_offset[size_t(v) + 1]; ++k) {
        const int32_t w = g.adj[size_t(k)];
        if (on_diag[size_t(w)]) {
          if (pos_in_arm[size_t(w)] >= 0) touched.push_back(pos_in_arm[size_t(w)]);
          continue;
        }
        if (!seen[size_t(w)]) {
          seen[size_t(w)] = 1;
          comp.push_back(w);
          stack.push_back(w);
        }
      }
    }
    if (touched.empty()) continue;
    const auto [mn, mx] = std::minmax_element(touched.begin(), touched.end());
    if (*mx == *mn + 1) {  // hangs between consecutive arm vertices
      auto& dst = subtree[size_t(*mn)];
      dst.insert(dst.end(), comp.begin(), comp.end());
    }
  }
  return subtree;
}

}  // namespace vicsek
