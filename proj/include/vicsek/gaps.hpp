#pragma once

#include <optional>

#include "vicsek/decimation.hpp"

namespace vicsek {

/// Closed interval of psi-mapped graph eigenvalue locations contributed by
/// one branch word; singletons have lo == hi.
struct RatioInterval {
  double lo = 0, hi = 0;
  std::vector<int> word;
  enum class Kind { BranchImage, SeedZero, SeedFourThirds } kind = Kind::BranchImage;
};

struct Gap {
  double lo = 0, hi = 0;
};

/// Certified ratio gaps in [1, rho]: every eigenvalue ratio, reduced by
/// powers of rho, lies in the covering union, so its complement is gap.
struct GapCertificate {
  int n = 0;
  int ell = 0;
  std::vector<Gap> gaps;
  int64_t covering_interval_count = 0;
};

/// Per-word covering pieces at word length ell: words ending in branch 1
/// contribute the two seed singletons (forbidden ones discarded); other
/// words contribute the interval phi_w([0, q]) plus the 4/3 singleton when
/// admissible. All values are mapped through psi_n.
std::vector<RatioInterval> ratio_intervals(const DecimationSystem& sys, int ell);

/// Full gap certificate at word length ell. Covering intervals get 1e-9
/// outward slack, so rounding can only shrink the claimed gaps.
GapCertificate ratio_gaps(const DecimationSystem& sys, int ell);

/// The maximal certified gap containing `point` in [1, rho], if any. Streams
/// word pairs with O(1) running state instead of materializing the scaled
/// covering set.
std::optional<Gap> gap_containing(const DecimationSystem& sys, int ell, double point);

/// The largest fixed point t of R with |R'(t)| compared against rho;
/// |R'(t)| > rho certifies eigenvalue clustering.
struct ClusteringCertificate {
  double t = 0, rprime = 0, rho = 0;
  bool certified = false;
};
ClusteringCertificate clustering_certificate(const DecimationSystem& sys);

/// `count` distinct eigenvalues within an interval of length <= eps,
/// produced by pushing distinct seeds through the top branch. Magnitudes
/// grow like rho^j, so values are reported in log form alongside best-effort
/// doubles.
struct ClusterDemo {
  bool achieved = false;
  int seed_level = 0;
  int iterations = 0;       // top-branch applications
  double spread = 0;        // certified interval length (maybe subnormal)
  double log10_scale = 0;   // log10 of the common magnitude
  std::vector<double> log10_values;
  std::vector<double> values;  // may overflow to inf
  std::vector<EigenvalueRecord> records;
};
ClusterDemo cluster_demo(const DecimationSystem& sys, int count, double eps);

}  // namespace vicsek
