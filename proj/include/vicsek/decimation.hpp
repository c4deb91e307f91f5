#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "vicsek/vsgraph.hpp"

namespace vicsek {

/// Eigenvalue family: continued from the initial eigenvalue 0 (simple,
/// symmetric) or from 4/3 (born at some level k with multiplicity
/// 2(4n-3)^k + 1).
enum class Series { Zero, FourThirds };

/// One eigenvalue of the fractal Laplacian, identified symbolically by
/// (series, birth_level, word); the word lists inverse-branch indices in
/// order of application, trailing 1s trimmed.
struct EigenvalueRecord {
  Series series = Series::Zero;
  int birth_level = 0;
  std::vector<int> word;
  double value = 0.0;
  int64_t multiplicity = 1;
};

bool record_key_less(const EigenvalueRecord& a, const EigenvalueRecord& b);
bool record_key_equal(const EigenvalueRecord& a, const EigenvalueRecord& b);

/// Ascending initial segment of the spectrum with cumulative multiplicities.
struct SpectrumTable {
  VicsekParams params;
  int depth = 0;
  std::vector<EigenvalueRecord> records;  // strictly increasing values
  std::vector<int64_t> cum_mult;          // cum_mult[i] = sum of mult through i

  /// Counting function N(x): eigenvalues <= x with multiplicity.
  int64_t count_leq(double x) const;
  int64_t total_multiplicity() const { return cum_mult.empty() ? 0 : cum_mult.back(); }
};

/// The spectral decimation system for one n: the polynomial R built from
/// Chebyshev recurrences, its inverse branches, forbidden values, and the
/// limit function psi. All scalar root work is done in long double.
class DecimationSystem {
 public:
  explicit DecimationSystem(const VicsekParams& params);

  const VicsekParams& params() const { return params_; }
  int num_branches() const { return 2 * params_.n - 1; }

  /// f_n, g_n, h_n, l_n and R as monomial coefficient lists (ascending),
  /// exact integers for small n.
  const std::vector<double>& f_coeffs() const { return f_; }
  const std::vector<double>& g_coeffs() const { return g_; }
  const std::vector<double>& h_coeffs() const { return h_; }
  const std::vector<double>& l_coeffs() const { return l_; }
  const std::vector<double>& R_coeffs() const { return R_; }

  /// R(lambda) and R'(lambda) via Chebyshev recurrences in 3*lambda - 1.
  std::pair<long double, long double> eval_R(long double lambda) const;

  /// f_n, g_n, h_n at lambda.
  long double eval_f(long double lambda) const;
  long double eval_g(long double lambda) const;
  long double eval_h(long double lambda) const;

  /// Critical points of R in (0, 4/3), ascending; branch j is monotone on
  /// [crit[j-2], crit[j-1]] (with 0 and 4/3 at the ends).
  const std::vector<long double>& critical_points() const { return crit_; }
  std::pair<long double, long double> branch_interval(int j) const;

  /// j-th inverse of R in increasing order, j = 1..2n-1. Throws
  /// std::domain_error when mu is outside the branch range.
  long double branch(int j, long double mu) const;

  /// psi_n(t) = lim rho^m phi_1^m(t), monotone increasing on [0, 4/3].
  long double psi(long double t) const;

  /// Decimation-forbidden values: {0, 4/3} together with the roots of f_n
  /// and g_n, ascending.
  const std::vector<double>& forbidden_set() const { return forbidden_; }
  bool is_forbidden(double lambda, double tol = 1e-9) const;

  /// Values singular for the eigenfunction extension: roots of f_n and g_n
  /// only (extension at 0 and 4/3 is regular).
  const std::vector<double>& extension_singular_set() const { return singular_; }

  /// Closed-form branch values: g-roots phi_{2j}(0) and l-roots
  /// phi_{2j-1}(4/3), j = 1..n-1.
  const std::vector<long double>& g_roots() const { return g_roots_; }
  const std::vector<long double>& h_roots() const { return h_roots_; }
  const std::vector<long double>& l_roots() const { return l_roots_; }
  const std::vector<long double>& f_roots() const { return f_roots_; }

  /// p: fixed point of phi_{2n-1} (= largest fixed point of R), and
  /// q = phi_{2n-1}(4/3) >= p.
  struct FixedPoints {
    long double p, q, t_max;
  };
  FixedPoints fixed_points() const;

  /// Maps the values of an eigenfunction on the 4 corners of a cell to the
  /// 12n-12 interior vertices created by one subdivision, at the given next
  /// eigenvalue. Rows follow `extension_rows()` order. Throws
  /// std::domain_error at extension-singular lambda.
  Mat extension_matrix(double lambda) const;
  Mat extension_matrix_assembled(double lambda) const;  // generic path, any n
  Mat extension_matrix_closed_form(double lambda) const;  // n = 2 only

  /// Interior vertex ids of the canonical level-1 graph, in extension row
  /// order, and that graph itself.
  const std::vector<int32_t>& extension_rows() const { return interior_ids_; }
  const GraphApprox& level1_graph() const { return level1_; }

 private:
  void build_coefficients();
  void build_roots_and_critical_points();
  long double root_bisect_newton(long double lo, long double hi,
                                 long double target, bool use_R) const;

  VicsekParams params_;
  std::vector<double> f_, g_, h_, l_, R_;
  std::vector<long double> crit_;
  std::vector<long double> g_roots_, h_roots_, l_roots_, f_roots_;
  std::vector<double> forbidden_, singular_;
  GraphApprox level1_;
  std::vector<int32_t> interior_ids_;
  mutable std::optional<FixedPoints> fixed_;
};

/// Initial segment {0} cup rho^k psi(Sigma_k) of the spectrum, with series,
/// birth level, word and multiplicity per record, strictly ascending.
SpectrumTable enumerate_spectrum(const DecimationSystem& sys, int depth);

/// Validation oracle: direct enumeration of all admissible words of length
/// <= depth, values through psi, then sorted. Same contract as
/// enumerate_spectrum.
SpectrumTable brute_enumerate(const DecimationSystem& sys, int depth);

/// Graph eigenvalues lambda_birth..lambda_M of a record: the seed, the
/// recorded branches, then phi_1 repeatedly. values[i] is level birth+i.
struct GraphEigenvalueSequence {
  int birth = 0;
  std::vector<double> values;
};
GraphEigenvalueSequence graph_eigenvalue_sequence(const DecimationSystem& sys,
                                                  const EigenvalueRecord& rec, int M);

/// Decimation-predicted spectrum of -Delta_m: level-m values of every record
/// alive at level m, with their multiplicities, merged at relative tolerance
/// 1e-9. Comparable directly against oracle_spectrum.
std::vector<std::pair<double, int64_t>> predicted_graph_spectrum(const DecimationSystem& sys,
                                                                 int m);

}  // namespace vicsek
