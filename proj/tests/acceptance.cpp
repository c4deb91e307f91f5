// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Also writes the figure-level CSV artifacts next to the binary
// under acceptance_artifacts/.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "vicsek/asymptotics.hpp"
#include "vicsek/decimation.hpp"
#include "vicsek/eigenfunc.hpp"
#include "vicsek/gaps.hpp"
#include "vicsek/green.hpp"
#include "vicsek/kernels.hpp"

using namespace vicsek;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  if (!ok) ++failures;
}

void note(const std::string& s) { std::printf("       note: %s\n", s.c_str()); }

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// -- criterion 1: decimation vs dense oracle ---------------------------------
void criterion1() {
  const auto t0 = Clock::now();
  bool ok = true;
  DecimationSystem sys{VicsekParams{2}};
  for (int m = 0; m <= 3; ++m) {
    const auto pred = predicted_graph_spectrum(sys, m);
    const auto orc = oracle_spectrum(build_graph(VicsekParams{2}, m));
    if (pred.size() != orc.size()) {
      ok = false;
      continue;
    }
    for (size_t i = 0; i < pred.size(); ++i) {
      ok &= std::abs(pred[i].first - orc[i].first) <= 1e-9;
      ok &= pred[i].second == orc[i].second;
    }
  }
  const double dt = elapsed(t0);
  ok &= dt < 60.0;
  report(1, ok, "oracle equivalence on Gamma_0..Gamma_3 (n=2), values 1e-9, exact "
                "multiplicities, " + std::to_string(dt) + "s");
}

// -- criterion 2: branch inversion ------------------------------------------
void criterion2() {
  bool ok = true;
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> U(0.0, 4.0 / 3.0);
  long double worst = 0;
  for (int n = 2; n <= 8; ++n) {
    DecimationSystem sys{VicsekParams{n}};
    for (int j = 1; j <= sys.num_branches(); ++j)
      for (int it = 0; it < 1000; ++it) {
        const long double mu = U(rng);
        const long double lam = sys.branch(j, mu);
        const long double res = std::abs(sys.eval_R(lam).first - mu) / std::max(1.0L, mu);
        worst = std::max(worst, res);
        ok &= res <= 1e-12;
      }
  }
  DecimationSystem sys2{VicsekParams{2}};
  ok &= std::abs(double(sys2.branch(1, 4.0L / 3.0L)) - 1.0 / 6) <= 1e-13;
  ok &= std::abs(double(sys2.branch(3, 0.0L)) - 5.0 / 6) <= 1e-13;
  report(2, ok, "R(phi_j(mu)) = mu at 1e-12 (1000 draws per branch, n <= 8; worst " +
                    std::to_string(double(worst)) + "), phi_1(4/3) = 1/6 and phi_3(0) = 5/6 "
                    "at 1e-13");
}

// -- criterion 3: spectrum structure -----------------------------------------
void criterion3() {
  bool ok = true;
  for (int n : {2, 3, 4}) {
    DecimationSystem sys{VicsekParams{n}};
    const SpectrumTable t = enumerate_spectrum(sys, 3);
    for (size_t i = 0; i < t.records.size(); ++i)
      ok &= (t.records[i].series == Series::Zero) == (i % 2 == 0);
    const size_t seg = size_t(4 * n - 2);
    ok &= (t.records.size() - size_t(2 * n)) % seg == 0;
    ok &= t.records[size_t(2 * n - 1)].series == Series::FourThirds &&
          t.records[size_t(2 * n - 1)].birth_level >= 1;
    for (size_t s0 = size_t(2 * n); s0 < t.records.size(); s0 += seg)
      for (size_t i = s0; i < s0 + seg; ++i) {
        const auto& r = t.records[i];
        if (r.series != Series::FourThirds) continue;
        if (i + 1 == s0 + seg)
          ok &= r.birth_level >= 1;
        else
          ok &= r.birth_level == 0 && r.multiplicity == 3;
      }
  }
  report(3, ok, "alternating series, initial segment 2n then segments of 4n-2 with "
                "multiplicity-3 interiors (n in {2,3,4}, depth 3)");
}

// -- criterion 4: inner-product scaling --------------------------------------
void criterion4() {
  bool ok = norm_factor_closed_form(0.0) == 1.0;
  VicsekParams p{2};
  DecimationSystem sys{p};
  GraphHierarchy h(p, 4);
  EigenvalueRecord lam1;
  for (const auto& r : enumerate_spectrum(sys, 1).records)
    if (r.series == Series::FourThirds && r.birth_level == 0) lam1 = r;
  const auto seq = graph_eigenvalue_sequence(sys, lam1, 4);
  for (int m = 1; m <= 4; ++m) {
    const EigenBasis bm = build_eigenfunctions(sys, lam1, m, h);
    const EigenBasis bm1 = build_eigenfunctions(sys, lam1, m - 1, h);
    const double N = norm_factor_closed_form(seq.values[size_t(m)]);
    for (int c = 0; c < 3; ++c) {
      FunctionOnGraph um{m, bm.funcs.col(c)}, um1{m - 1, bm1.funcs.col(c)};
      const double direct =
          inner_product(h.at(m), um, um) / inner_product(h.at(m - 1), um1, um1);
      ok &= std::abs(direct - N) <= 1e-9 * std::abs(N);
    }
  }
  report(4, ok, "direct <u,u>_m/<u,u>_{m-1} equals the adopted N(m) closed form at 1e-9 "
                "through level 4; N(0) = 1 exactly");
}

// -- criterion 5: center values and the boundary complement ------------------
void criterion5() {
  bool ok = true;
  VicsekParams p{2};
  DecimationSystem sys{p};
  GraphHierarchy h(p, 4);
  const SpectrumTable t = enumerate_spectrum(sys, 3);
  for (const auto& r : t.records) {
    if (r.series != Series::FourThirds) continue;
    const int M = std::min(4, std::max(r.birth_level + int(r.word.size()), r.birth_level + 1));
    const EigenBasis b = build_eigenfunctions(sys, r, M, h);
    for (Eigen::Index c = 0; c < b.funcs.cols(); ++c) {
      const auto nc = fractal_norm_and_center(sys, r, h.at(M), b.funcs.col(c));
      ok &= std::abs(nc.center) / std::sqrt(nc.norm_sq) <= 1e-10;
    }
  }
  // the perp function of a record born at level 1
  EigenvalueRecord born1;
  for (const auto& r : t.records)
    if (r.series == Series::FourThirds && r.birth_level == 1 && r.word.empty()) born1 = r;
  const Eigenfunction u0 = perp_function(sys, born1, 1, 2, h);
  const GraphApprox& g2 = h.at(2);
  static const int64_t qx[4] = {0, 1, 1, 0}, qy[4] = {0, 0, 1, 1};
  Vec v0(4);
  for (int q = 0; q < 4; ++q) v0[q] = u0.values.values[g2.vertex_at(qx[q] * 9, qy[q] * 9)];
  for (int x = 1; x < 4; ++x) {
    double nb = 0;
    for (int y = 0; y < 4; ++y)
      if (y != x) nb += v0[y];
    ok &= std::abs((1.0 - 20.0) * 3.0 * v0[x] - nb) <= 1e-10;
  }
  report(5, ok, "4/3-series center values vanish at 1e-10 (depth 3); the complement "
                "function satisfies the eigenvalue-20 relation at 1e-10");
}

// -- criterion 6: ratio gaps --------------------------------------------------
bool sweep_sound(const DecimationSystem& sys, const GapCertificate& cert, int depth) {
  const SpectrumTable t = enumerate_spectrum(sys, depth);
  const double lrho = std::log(sys.params().rho());
  std::vector<double> y;  // log values mod log rho, sorted
  for (const auto& r : t.records)
    if (r.value > 0) {
      double f = std::fmod(std::log(r.value), lrho);
      if (f < 0) f += lrho;
      y.push_back(f);
    }
  std::sort(y.begin(), y.end());
  auto count_in = [&](double lo, double hi) -> int64_t {  // circular window count of pairwise diffs
    int64_t hits = 0;
    for (double yi : y)
      for (double shift : {0.0, lrho}) {
        const double a = yi + lo - shift, b = yi + hi - shift;
        hits += std::upper_bound(y.begin(), y.end(), b) - std::lower_bound(y.begin(), y.end(), a);
      }
    return hits;
  };
  for (const auto& g : cert.gaps) {
    // shrink by a relative hair so covering-boundary ratios do not alias in
    const double lo = std::log(g.lo * (1 + 1e-9)), hi = std::log(g.hi * (1 - 1e-9));
    if (lo >= hi) continue;
    if (count_in(lo, hi) != 0) return false;
  }
  return true;
}

void criterion6() {
  const auto t0 = Clock::now();
  bool ok = true;
  auto gap_at = [](const GapCertificate& cert, double point) -> std::optional<Gap> {
    for (const auto& g : cert.gaps)
      if (g.lo <= point && point <= g.hi) return g;
    return std::nullopt;
  };
  {
    DecimationSystem sys{VicsekParams{2}};
    const auto c1 = ratio_gaps(sys, 1);
    const auto g1 = gap_at(c1, std::sqrt(15.0));
    ok &= g1 && g1->lo <= 3.5370 + 1e-3 && g1->hi >= 4.2409 - 1e-3;
    const auto c2 = ratio_gaps(sys, 2);
    const auto g2 = gap_at(c2, std::sqrt(15.0));
    ok &= g2 && std::abs(g2->lo - 3.2948) <= 1e-3 && std::abs(g2->hi - 4.5526) <= 1e-3;
    ok &= sweep_sound(sys, c1, 4) && sweep_sound(sys, c2, 4);
  }
  {
    DecimationSystem sys{VicsekParams{3}};
    const auto c = ratio_gaps(sys, 2);
    const auto g = gap_at(c, std::sqrt(45.0));
    ok &= g && std::abs(g->lo - 6.6952) <= 1e-3 && std::abs(g->hi - 6.7212) <= 1e-3;
    ok &= sweep_sound(sys, c, 4);
  }
  {
    DecimationSystem sys{VicsekParams{4}};
    const auto c = ratio_gaps(sys, 3);
    const auto g = gap_at(c, std::sqrt(91.0));
    ok &= g && std::abs(g->lo - 9.5357) <= 1e-3 && std::abs(g->hi - 9.5431) <= 1e-3;
    ok &= sweep_sound(sys, c, 4);
  }
  const double dt = elapsed(t0);
  ok &= dt < 300.0;
  report(6, ok, "reference ratio gaps reproduced at 1e-3 with depth-4 soundness sweeps, " +
                    std::to_string(dt) + "s");
}

// -- criterion 7: clustering table -------------------------------------------
void criterion7() {
  bool ok = true;
  const double ts[] = {0.9024, 0.8905, 0.8891, 0.8889, 0.8889, 0.8889, 0.8889, 0.8889};
  const double rps[] = {1.6314e1, 1.3999e2, 1.2355e3, 1.1079e4,
                        9.9655e4, 8.9682e5, 8.0713e6, 7.2641e7};
  for (int n = 2; n <= 9; ++n) {
    const auto c = clustering_certificate(DecimationSystem{VicsekParams{n}});
    char tb[32], rb[32];
    std::snprintf(tb, sizeof tb, "%.4f", c.t);
    std::snprintf(rb, sizeof rb, "%.5g", c.rprime);
    char te[32], re[32];
    std::snprintf(te, sizeof te, "%.4f", ts[n - 2]);
    std::snprintf(re, sizeof re, "%.5g", rps[n - 2]);
    ok &= std::string(tb) == te && std::string(rb) == re && c.certified;
  }
  report(7, ok, "largest fixed point and R'(t) match the reference table to printed "
                "precision for n = 2..9, all certified");
}

// -- criterion 8: kernel identities ------------------------------------------
void criterion8() {
  bool ok = true;
  VicsekParams p{2};
  DecimationSystem sys{p};
  GraphHierarchy h(p, 6);
  const auto basis6 = center_kernel_basis(sys, h, 6, 6);
  FunctionOnGraph one{6, Vec::Ones(h.at(6).vertex_count())};
  for (double t : {0.01, 0.1, 1.0}) {
    const auto hf = heat_center(basis6, t);
    FunctionOnGraph fh{6, hf.h.values};
    ok &= std::abs(inner_product(h.at(6), fh, one) - 1.0) <= 1e-5 + hf.h.tail_bound;
    const auto wf = wave_center(basis6, t);
    FunctionOnGraph fw{6, wf.values};
    ok &= std::abs(inner_product(h.at(6), fw, one) - t) <= 1e-5 + 1e-12 * wf.tail_bound;
  }
  const double table[] = {1.4476, 1.7336, 2.9958};
  for (int k = 1; k <= 3; ++k) {
    const int M = k + 2;
    const auto b = center_kernel_basis(sys, h, M, k);
    const auto pf = projection_kernel(b, h.at(M).boundary_ids[0], h.at(M));
    ok &= std::abs(pf.integral - 1.0) <= 1e-10;
    const double mx = max_abs_projection_integral(b, h.at(M));
    ok &= std::abs(mx - table[k - 1]) <= 0.02 * table[k - 1];
  }
  report(8, ok, "heat and wave means exact to 1e-5 + tail at depth 6; int K_k = 1 at "
                "1e-10; max int |K_k| matches (1.4476, 1.7336, 2.9958) within 2%");
}

// -- criterion 9: heat-trace log-periodic fit ---------------------------------
void criterion9() {
  DecimationSystem sys{VicsekParams{2}};
  const double lam_max = enumerate_spectrum(sys, 7).records.back().value;
  std::vector<double> ts, ys;
  const double tlo = 40.0 / lam_max;
  for (int i = 0; i < 400; ++i) ts.push_back(tlo * std::pow(15.0, 3.0 * i / 399.0));
  for (const auto& s : heat_trace(sys, 7, ts)) ys.push_back(s.scaled);
  const auto fit = fit_log_periodic(ts, ys);
  const bool ok = std::abs(fit.c - 2.33) <= 0.05 * 2.33 && std::abs(fit.a - 0.90) <= 0.10 * 0.90 &&
                  std::abs(fit.b - 0.045) <= 0.10 * 0.045;
  char buf[128];
  std::snprintf(buf, sizeof buf, "a=%.4f b=%.4f c=%.4f d=%.4f", fit.a, fit.b, fit.c, fit.d);
  report(9, ok, std::string("t^alpha trace fit at depth 7 (") + buf +
                    ") vs (.90, .045, 2.33) within (10%, 10%, 5%)");
}

// -- criterion 10: Weyl lemma identities --------------------------------------
void criterion10() {
  bool ok = true;
  for (int n : {2, 3}) {
    DecimationSystem sys{VicsekParams{n}};
    const SpectrumTable t = enumerate_spectrum(sys, 4);
    for (int j = 1; j <= n - 1; ++j) {
      const auto sv = weyl_special_values(sys, j);
      int64_t pw = 1;
      for (int k = 0; k <= 2; ++k) {
        ok &= t.count_leq(sv.lambda_2jm1 * std::pow(sys.params().rho(), k) * (1 + 1e-12)) ==
              (4 * j - 1) * pw + 1;
        pw *= 4 * n - 3;
      }
    }
    ok &= normalized_weyl_plateau(sys, 0, true) / normalized_weyl_plateau(sys, 0, false) == 3.0;
  }
  const double w32 = normalized_weyl_plateau(DecimationSystem{VicsekParams{32}}, 0, true);
  const double limit = 3 * std::sqrt(3.0) / std::numbers::pi;
  ok &= std::abs(w32 - limit) <= 0.05 * limit;
  report(10, ok, "N(rho^k lambda_{2j-1}) = (4j-1)(4n-3)^k + 1 exactly (n in {2,3}); "
                 "wtilde(0)/wtilde(0-) = 3; wtilde_32(0) within 5% of 3sqrt(3)/pi");
}

// -- criterion 11: cross convergence ------------------------------------------
void criterion11() {
  const auto cc = cross_limit_check(1, Series::FourThirds, {8, 16, 32, 64});
  bool decreasing = true;
  for (size_t i = 0; i + 1 < cc.rows.size(); ++i)
    decreasing &= cc.rows[i + 1].error < cc.rows[i].error;
  const bool order_ok = cc.fitted_order >= 2.5 && cc.fitted_order <= 3.5;

  bool arm_ok = true;
  for (int n = 2; n <= 16; ++n) {
    const VicsekParams p{n};
    DecimationSystem sys{p};
    const auto a43 = arm_system(p, ArmSeries::FourThirds);
    arm_ok &= int(a43.lambdas.size()) == n - 1;
    for (int j = 0; j < n - 1 && arm_ok; ++j)
      arm_ok &= std::abs(a43.lambdas[size_t(j)] - double(sys.l_roots()[size_t(j)])) <= 1e-9;
    const auto a0 = arm_system(p, ArmSeries::Zero);
    arm_ok &= int(a0.lambdas.size()) == n;
    for (int j = 0; j < n - 1 && arm_ok; ++j)
      arm_ok &= std::abs(a0.lambdas[size_t(j + 1)] - double(sys.h_roots()[size_t(j)])) <= 1e-9;
  }
  const bool ok = decreasing && order_ok && arm_ok;
  report(11, ok, "cross convergence: |lambda(n) - pi^2/3| decreasing (" +
                     std::string(decreasing ? "yes" : "no") + "), fitted order " +
                     std::to_string(cc.fitted_order) + " in [2.5, 3.5] (" +
                     std::string(order_ok ? "yes" : "no") + "); arm systems match "
                     "decimation at 1e-9 for n <= 16 (" + std::string(arm_ok ? "yes" : "no") +
                     ")");
  if (!order_ok) {
    note("the fractal eigenvalue error against pi^2/3 is first order in 1/n: the");
    note("prefactor rho_n psi_n(...) ~ (4n-3)/(2n-1) * pi^2/6 carries a -pi^2/(6(2n-1))");
    note("term, so the measured order sits near 1. The third-order rate belongs to the");
    note("level-1 comparison against the interval eigenvalues; that rate is verified in");
    note("the unit suite (h-roots vs the interval closed form, fitted order ~3.1).");
  }
}

// -- criterion 12: Green's function -------------------------------------------
void criterion12() {
  bool ok = true;
  for (int i = 1; i < 20; ++i)
    for (int k = 0; k < 20; ++k) {
      const auto v = green_verify(i / 20.0, k / 20.0);
      for (double r : v.residuals) ok &= std::abs(r) <= 1e-12;
    }
  const GraphApprox g4 = build_graph(VicsekParams{2}, 4);
  const SkeletonPoint y{3, 0.37, 0, {}};
  const FunctionOnGraph G = green_field(g4, y);
  for (int q = 0; q < 4; ++q) ok &= G.values[g4.boundary_ids[size_t(q)]] == 0.0;
  const auto vd = vertex_skeleton_data(g4);
  const FunctionOnGraph lap = laplacian_apply(g4, G);
  for (int64_t i = 0; i < g4.vertex_count(); ++i) {
    bool excluded = false;
    for (int q = 0; q < 4; ++q) excluded |= i == g4.boundary_ids[size_t(q)];
    excluded |= vd.arm[size_t(i)] == y.arm && std::abs(vd.s[i] - y.s) <= 2.0 / g4.scale;
    if (!excluded) ok &= std::abs(lap.values[i]) <= 1e-10;
  }
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  std::uniform_int_distribution<int> A(1, 4);
  for (int it = 0; it < 100; ++it) {
    const SkeletonPoint x{A(rng), U(rng), 0, {}}, z{A(rng), U(rng), 0, {}};
    ok &= std::abs(green_eval(VicsekParams{2}, x, z) - green_eval(VicsekParams{2}, z, x)) <=
          1e-12;
  }
  report(12, ok, "balance-equation residuals 1e-12 on a 20x20 grid; harmonic at 1e-10 off "
                 "the source cell on Gamma_4; boundary exactly 0; symmetric at 1e-12");
}

// -- criterion 13: diagonal restriction ---------------------------------------
void criterion13() {
  bool ok = true;
  VicsekParams p{2};
  DecimationSystem sys{p};
  GraphHierarchy h(p, 4);
  for (int m = 1; m <= 4; ++m) {
    const auto dc = diagonal_coefficients(sys, h, m);
    const int dim = (int(std::lround(std::pow(3.0, m))) + 1) / 2;
    ok &= int(dc.diag_vertices.size()) == dim && dc.rank == dim;
    if (m <= 3) {
      for (Eigen::Index c = 0; c < dc.zbasis.cols(); ++c) {
        Vec rec = Vec::Zero(dc.zbasis.rows());
        for (int k = 0; k < dim; ++k)
          rec += dc.coefficients.col(k) * dc.zbasis(dc.diag_vertices[size_t(k)], c);
        ok &= (rec - dc.zbasis.col(c)).cwiseAbs().maxCoeff() <=
              1e-9 * dc.zbasis.col(c).cwiseAbs().maxCoeff();
      }
    }
    if (m == 3) {
      for (Eigen::Index k = 0; k < dc.coefficients.cols(); ++k)
        for (Eigen::Index i = 0; i < dc.coefficients.rows(); ++i) {
          const double v = dc.coefficients(i, k);
          ok &= std::abs(v - std::round(v)) <= 1e-8 && std::abs(std::round(v)) <= 2.0;
        }
    }
  }
  report(13, ok, "dim Z_m = (3^m+1)/2 with exact rank (m <= 4); diagonal reconstruction at "
                 "1e-9 (m <= 3); c_k^(3) values lie in {0, +-1, +-2} at 1e-8");
}

// -- figure-level CSV artifacts ------------------------------------------------
void write_artifacts() {
  namespace fs = std::filesystem;
  const fs::path dir = "acceptance_artifacts";
  fs::create_directories(dir);
  VicsekParams p{2};
  DecimationSystem sys{p};
  GraphHierarchy h(p, 5);

  auto fmt = [](double x) {
    char b[40];
    std::snprintf(b, sizeof b, "%.12g", x);
    return std::string(b);
  };

  {  // heatballs on Gamma_4 for two times
    const auto basis = center_kernel_basis(sys, h, 4, 6);
    std::ofstream f(dir / "heatballs.csv");
    f << "t,s,size,components\n";
    for (double t : {0.01, 0.02, 0.005}) {
      const auto hf = heat_center(basis, t);
      const double mx = hf.h.values.maxCoeff(), mn = hf.h.values.minCoeff();
      for (int i = 1; i < 24; ++i) {
        const double s = mn + (mx - mn) * i / 24.0;
        const auto reg = level_set_region(h.at(4), hf.h.values, s);
        f << fmt(t) << "," << fmt(s) << "," << reg.vertices.size() << "," << reg.components
          << "\n";
      }
    }
  }
  {  // wave width curves
    const auto basis = center_kernel_basis(sys, h, 5, 6);
    std::ofstream f(dir / "wave_width.csv");
    f << "t,width_eps0.01,width_eps0.05,width_eps0.1\n";
    for (int i = 0; i <= 24; ++i) {
      const double t = 0.05 + (1.0 - 0.05) * i / 24.0;
      const auto wf = wave_center(basis, t);
      f << fmt(t);
      for (double e : {0.01, 0.05, 0.1}) f << "," << fmt(abs_width(h.at(5), wf.values, e, false));
      f << "\n";
    }
  }
  {  // projection kernel profile on the diagonal at the two-cell junction
    const auto basis = center_kernel_basis(sys, h, 5, 4);
    const GraphApprox& g = h.at(5);
    const int32_t x = g.vertex_at(g.scale / 3, g.scale / 3);  // junction of two 1-cells
    const auto pf = projection_kernel(basis, x, g);
    std::ofstream f(dir / "projection_diagonal.csv");
    f << "position,value\n";
    for (int32_t v : diagonal_vertices(g, 0))
      f << fmt(double(g.vx[size_t(v)]) / double(g.scale)) << "," << fmt(pf.k.values[v]) << "\n";
  }
  {  // Weyl ratio curve
    const SpectrumTable t = enumerate_spectrum(sys, 6);
    std::ofstream f(dir / "weyl_ratio.csv");
    f << "x,count,ratio\n";
    const double lam1 = t.records[1].value;
    for (int i = 0; i < 600; ++i) {
      const double x = lam1 * 0.5 * std::pow(t.records.back().value / (lam1 * 0.5), i / 599.0);
      const auto w = counting_and_weyl(t, {x})[0];
      f << fmt(w.x) << "," << w.count << "," << fmt(w.ratio) << "\n";
    }
  }
  std::printf("artifacts: heatballs.csv, wave_width.csv, projection_diagonal.csv, "
              "weyl_ratio.csv under %s/\n",
              dir.string().c_str());
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  criterion12();
  criterion13();
  write_artifacts();
  std::printf("acceptance: %d of 13 criteria passed in %.1fs\n", 13 - failures, elapsed(t0));
  return failures;
}
