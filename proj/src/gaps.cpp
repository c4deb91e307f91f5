#include "vicsek/gaps.hpp"

#include <algorithm>
#include <cmath>

namespace vicsek {

namespace {

constexpr double kSlack = 1e-9;

bool zero_seed_admissible(const std::vector<int>& w) {
  for (int j : w) {
    if (j == 1) continue;
    return j % 2 == 1;  // first letter acting on the seed 0 must be odd
  }
  return false;  // all ones: the value is 0 itself, excluded from ratios
}

bool fourthirds_seed_admissible(const std::vector<int>& w, int nb) {
  return !w.empty() && w[0] % 2 == 1 && w[0] != nb;
}

// covering pieces of one word, already psi-mapped
void word_pieces(const DecimationSystem& sys, const std::vector<int>& w, long double q,
                 std::vector<RatioInterval>& out) {
  const int nb = sys.num_branches();
  auto chain = [&](long double v) {
    for (int j : w) v = sys.branch(j, v);
    return v;
  };
  if (w.back() == 1) {
    if (zero_seed_admissible(w))
      out.push_back({double(sys.psi(chain(0.0L))), double(sys.psi(chain(0.0L))), w,
                     RatioInterval::Kind::SeedZero});
    if (fourthirds_seed_admissible(w, nb))
      out.push_back({double(sys.psi(chain(4.0L / 3.0L))), double(sys.psi(chain(4.0L / 3.0L))),
                     w, RatioInterval::Kind::SeedFourThirds});
    return;
  }
  const double e0 = double(sys.psi(chain(0.0L)));
  const double e1 = double(sys.psi(chain(q)));
  out.push_back({std::min(e0, e1), std::max(e0, e1), w, RatioInterval::Kind::BranchImage});
  if (fourthirds_seed_admissible(w, nb)) {
    const double v = double(sys.psi(chain(4.0L / 3.0L)));
    out.push_back({v, v, w, RatioInterval::Kind::SeedFourThirds});
  }
}

void check_word_budget(const DecimationSystem& sys, int ell) {
  if (ell < 1) throw std::invalid_argument("ratio gaps: ell >= 1");
  const double words = std::pow(double(sys.num_branches()), ell);
  if (words > 2e6)
    throw budget_error(
        "ratio gaps: (2n-1)^ell = " + std::to_string(words) +
        " exceeds budget; use gap_containing for a point-targeted search");
}

std::vector<std::pair<double, double>> merged_base_intervals(const DecimationSystem& sys,
                                                             int ell) {
  auto pieces = ratio_intervals(sys, ell);
  std::vector<std::pair<double, double>> iv;
  iv.reserve(pieces.size());
  for (const auto& p : pieces) iv.emplace_back(p.lo, p.hi);
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& [lo, hi] : iv) {
    if (!merged.empty() && lo <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, hi);
    } else
      merged.emplace_back(lo, hi);
  }
  return merged;
}

}  // namespace

std::vector<RatioInterval> ratio_intervals(const DecimationSystem& sys, int ell) {
  check_word_budget(sys, ell);
  const long double q = sys.fixed_points().q;
  std::vector<RatioInterval> out;
  std::vector<int> w(size_t(ell), 1);
  const int nb = sys.num_branches();
  while (true) {
    word_pieces(sys, w, q, out);
    int i = 0;  // odometer over words
    while (i < ell && w[size_t(i)] == nb) {
      w[size_t(i)] = 1;
      ++i;
    }
    if (i == ell) break;
    ++w[size_t(i)];
  }
  std::sort(out.begin(), out.end(),
            [](const RatioInterval& a, const RatioInterval& b) { return a.lo < b.lo; });
  return out;
}

GapCertificate ratio_gaps(const DecimationSystem& sys, int ell) {
  const double rho = sys.params().rho();
  const auto base = merged_base_intervals(sys, ell);

  // all rho^r [A_i/B_j, B_i/A_j] meeting [1, rho], outward slack applied
  std::vector<std::pair<double, double>> cover;
  int64_t count = 0;
  for (const auto& [ai, bi] : base)
    for (const auto& [aj, bj] : base) {
      const double r_lo = ai / bj, r_hi = bi / aj;
      const int rmin = int(std::floor(-std::log(r_hi) / std::log(rho)));
      const int rmax = int(std::ceil((std::log(rho) - std::log(r_lo)) / std::log(rho)));
      for (int r = rmin; r <= rmax; ++r) {
        const double s = std::pow(rho, r);
        const double lo = r_lo * s, hi = r_hi * s;
        if (hi < 1.0 || lo > rho) continue;
        cover.emplace_back(lo - kSlack, hi + kSlack);
        ++count;
      }
    }
  std::sort(cover.begin(), cover.end());

  GapCertificate cert;
  cert.n = sys.params().n;
  cert.ell = ell;
  cert.covering_interval_count = count;
  double reach = 1.0;
  for (const auto& [lo, hi] : cover) {
    if (lo > reach && reach < rho) {
      cert.gaps.push_back({reach, std::min(lo, rho)});
    }
    reach = std::max(reach, hi);
    if (reach >= rho) break;
  }
  if (reach < rho) cert.gaps.push_back({reach, rho});
  return cert;
}

std::optional<Gap> gap_containing(const DecimationSystem& sys, int ell, double point) {
  if (ell < 1) throw std::invalid_argument("gap_containing: ell >= 1");
  const double rho = sys.params().rho();
  if (point < 1.0 || point > rho)
    throw std::invalid_argument("gap_containing: point must lie in [1, rho]");

  const long double q = sys.fixed_points().q;
  const int nb = sys.num_branches();
  const double words = std::pow(double(nb), ell);
  const bool cache = words <= 200000;

  std::vector<std::pair<double, double>> outer_iv;
  if (cache) outer_iv = merged_base_intervals(sys, ell);

  double lo_edge = 1.0, hi_edge = rho;
  bool covered = false;
  auto feed = [&](double ai, double bi, double aj, double bj) {
    const double r_lo = ai / bj, r_hi = bi / aj;
    const int rmin = int(std::floor(-std::log(r_hi) / std::log(rho)));
    const int rmax = int(std::ceil((std::log(rho) - std::log(r_lo)) / std::log(rho)));
    for (int r = rmin; r <= rmax && !covered; ++r) {
      const double s = std::pow(rho, r);
      const double lo = r_lo * s - kSlack, hi = r_hi * s + kSlack;
      if (point >= lo && point <= hi) {
        covered = true;
        return;
      }
      if (hi < point) lo_edge = std::max(lo_edge, hi);
      if (lo > point) hi_edge = std::min(hi_edge, lo);
    }
  };

  if (cache) {
    for (const auto& [ai, bi] : outer_iv) {
      for (const auto& [aj, bj] : outer_iv) {
        feed(ai, bi, aj, bj);
        if (covered) return std::nullopt;
      }
    }
  } else {
    // word-pair stream: O(ell) state, intervals recomputed on the fly
    std::vector<int> wi(size_t(ell), 1);
    std::vector<RatioInterval> pi, pj;
    while (true) {
      pi.clear();
      word_pieces(sys, wi, q, pi);
      std::vector<int> wj(size_t(ell), 1);
      while (true) {
        pj.clear();
        word_pieces(sys, wj, q, pj);
        for (const auto& a : pi)
          for (const auto& b : pj) {
            feed(a.lo, a.hi, b.lo, b.hi);
            if (covered) return std::nullopt;
          }
        int k = 0;
        while (k < ell && wj[size_t(k)] == nb) {
          wj[size_t(k)] = 1;
          ++k;
        }
        if (k == ell) break;
        ++wj[size_t(k)];
      }
      int k = 0;
      while (k < ell && wi[size_t(k)] == nb) {
        wi[size_t(k)] = 1;
        ++k;
      }
      if (k == ell) break;
      ++wi[size_t(k)];
    }
  }
  if (covered || hi_edge <= lo_edge) return std::nullopt;
  return Gap{lo_edge, hi_edge};
}

ClusteringCertificate clustering_certificate(const DecimationSystem& sys) {
  const auto fp = sys.fixed_points();
  ClusteringCertificate c;
  c.t = double(fp.t_max);
  c.rprime = double(sys.eval_R(fp.t_max).second);
  c.rho = sys.params().rho();
  c.certified = std::abs(c.rprime) > c.rho;
  return c;
}

ClusterDemo cluster_demo(const DecimationSystem& sys, int count, double eps) {
  if (count < 1) throw std::invalid_argument("cluster_demo: count >= 1");
  if (!(eps > 0)) throw std::invalid_argument("cluster_demo: eps must be positive");
  if (!clustering_certificate(sys).certified)
    throw std::invalid_argument("cluster_demo: clustering not certified for this n");

  // distinct 0-series seeds at the shallowest level that provides them
  int m = 1;
  SpectrumTable table = enumerate_spectrum(sys, m);
  auto zcount = [&](const SpectrumTable& t) {
    int64_t c = 0;
    for (const auto& r : t.records)
      if (r.series == Series::Zero && r.value > 0) ++c;
    return c;
  };
  while (zcount(table) < count) table = enumerate_spectrum(sys, ++m);
  std::vector<EigenvalueRecord> seeds;
  for (const auto& r : table.records)
    if (r.series == Series::Zero && r.value > 0) {
      seeds.push_back(r);
      if (int(seeds.size()) == count) break;
    }

  const long double p = sys.fixed_points().p;
  const long double phi_slope = 1.0L / sys.eval_R(p).second;  // phi_top'(p)
  const int nb = sys.num_branches();
  const double lnrho = std::log(sys.params().rho());
  // psi'(p) by central difference; psi is smooth and increasing there
  const long double hstep = 1e-7L;
  const long double dpsi = (sys.psi(p + hstep) - sys.psi(p - hstep)) / (2 * hstep);
  const long double psi_p = sys.psi(p);

  std::vector<long double> delta(seeds.size());
  for (size_t i = 0; i < seeds.size(); ++i) {
    long double v = 0.0L;  // level-m graph eigenvalue of the seed
    for (size_t k = 0; k < seeds[i].word.size(); ++k) v = sys.branch(seeds[i].word[k], v);
    for (size_t k = seeds[i].word.size(); k < size_t(m); ++k) v = sys.branch(1, v);
    delta[i] = sys.branch(nb, v) - p;  // one application to enter the basin
  }
  int j1 = 1;
  ClusterDemo out;
  out.seed_level = m;
  for (;; ++j1) {
    const long double dmax = *std::max_element(delta.begin(), delta.end());
    const long double dmin = *std::min_element(delta.begin(), delta.end());
    const double log_spread =
        (m + j1) * lnrho + std::log(double(dpsi)) + std::log(double(dmax - dmin));
    out.spread = std::exp(log_spread);
    if (out.spread <= eps) {
      out.achieved = true;
      break;
    }
    if (dmax - dmin <= 64 * std::numeric_limits<long double>::denorm_min() || j1 > 100000) {
      out.achieved = false;  // deltas no longer separable
      break;
    }
    for (auto& d : delta)
      d = (std::abs(d) > 1e-12L) ? sys.branch(nb, p + d) - p : d * phi_slope;
  }
  out.iterations = j1;
  out.log10_scale = (m + j1) * lnrho / std::log(10.0);
  for (size_t i = 0; i < seeds.size(); ++i) {
    const double lg = (m + j1) * lnrho / std::log(10.0) +
                      std::log10(double(psi_p + dpsi * delta[i]));
    out.log10_values.push_back(lg);
    out.values.push_back(std::pow(10.0, lg));
    EigenvalueRecord r = seeds[i];
    r.word.resize(size_t(m), 1);
    for (int k = 0; k < j1; ++k) r.word.push_back(nb);
    r.value = out.values.back();
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace vicsek
