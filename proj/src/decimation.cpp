#include "vicsek/decimation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vicsek {

namespace {

constexpr long double kFourThirds = 4.0L / 3.0L;

// T_n, T_{n-1}, U_{n-1}, U_{n-2} and x-derivatives at x = 3*lambda - 1.
struct ChebVals {
  long double Tn, Tn1, Un1, Un2;
  long double dTn, dTn1, dUn1, dUn2;
};

ChebVals cheb_eval(int n, long double x) {
  long double T0 = 1, T1 = x, dT0 = 0, dT1 = 1;
  long double U0 = 1, U1 = 2 * x, dU0 = 0, dU1 = 2;
  for (int k = 1; k < n; ++k) {
    const long double T2 = 2 * x * T1 - T0;
    const long double dT2 = 2 * T1 + 2 * x * dT1 - dT0;
    T0 = T1; T1 = T2; dT0 = dT1; dT1 = dT2;
    if (k < n - 1) {
      const long double U2 = 2 * x * U1 - U0;
      const long double dU2 = 2 * U1 + 2 * x * dU1 - dU0;
      U0 = U1; U1 = U2; dU0 = dU1; dU1 = dU2;
    }
  }
  if (n == 1) return {T1, T0, U0, 0, dT1, dT0, dU0, 0};
  return {T1, T0, U1, U0, dT1, dT0, dU1, dU0};
}

// coefficient lists, ascending powers; construction runs in long double so
// the integer coefficients stay exact through n ~ 12
using LPoly = std::vector<long double>;

void poly_trim(LPoly& a) {
  while (a.size() > 1 && a.back() == 0.0L) a.pop_back();
}

LPoly poly_mul(const LPoly& a, const LPoly& b) {
  LPoly c(a.size() + b.size() - 1, 0.0L);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  poly_trim(c);
  return c;
}

LPoly poly_axpy(long double s, const LPoly& a, const LPoly& b) {
  LPoly c(std::max(a.size(), b.size()), 0.0L);
  for (size_t i = 0; i < a.size(); ++i) c[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] += s * b[i];
  poly_trim(c);
  return c;
}

// p(3*lambda - 1) for p given in x
LPoly compose_3lm1(const LPoly& p) {
  LPoly r{0.0L};
  const LPoly lin{-1.0L, 3.0L};
  for (size_t k = p.size(); k-- > 0;) {
    r = poly_mul(r, lin);
    r[0] += p[k];
  }
  poly_trim(r);
  return r;
}

LPoly poly_divide_exact(const LPoly& num, const LPoly& den, double* max_rel_remainder) {
  LPoly rem = num;
  const size_t dn = den.size() - 1;
  LPoly quot(num.size() - dn, 0.0L);
  for (size_t k = quot.size(); k-- > 0;) {
    const long double q = rem[k + dn] / den[dn];
    quot[k] = q;
    for (size_t i = 0; i <= dn; ++i) rem[k + i] -= q * den[i];
  }
  long double scale = 0, worst = 0;
  for (long double v : num) scale = std::max(scale, std::abs(v));
  for (size_t i = 0; i < dn; ++i) worst = std::max(worst, std::abs(rem[i]));
  if (max_rel_remainder) *max_rel_remainder = double(worst / std::max(1.0L, scale));
  return quot;
}

std::vector<double> to_double(const LPoly& p) {
  return std::vector<double>(p.begin(), p.end());
}

}  // namespace

bool record_key_less(const EigenvalueRecord& a, const EigenvalueRecord& b) {
  if (a.series != b.series) return a.series < b.series;
  if (a.birth_level != b.birth_level) return a.birth_level < b.birth_level;
  return a.word < b.word;
}

bool record_key_equal(const EigenvalueRecord& a, const EigenvalueRecord& b) {
  return a.series == b.series && a.birth_level == b.birth_level && a.word == b.word;
}

int64_t SpectrumTable::count_leq(double x) const {
  int64_t lo = 0, hi = int64_t(records.size());
  while (lo < hi) {  // first index with value > x
    const int64_t mid = (lo + hi) / 2;
    if (records[size_t(mid)].value <= x)
      lo = mid + 1;
    else
      hi = mid;
  }
  return lo == 0 ? 0 : cum_mult[size_t(lo - 1)];
}

DecimationSystem::DecimationSystem(const VicsekParams& params)
    : params_(params), level1_(build_graph(params, 1)) {
  build_coefficients();
  build_roots_and_critical_points();
  for (int64_t i = 0; i < level1_.vertex_count(); ++i) {
    const bool is_corner = i == level1_.boundary_ids[0] || i == level1_.boundary_ids[1] ||
                           i == level1_.boundary_ids[2] || i == level1_.boundary_ids[3];
    if (!is_corner) interior_ids_.push_back(int32_t(i));
  }
}

void DecimationSystem::build_coefficients() {
  const int n = params_.n;
  // T_k, U_k in x
  std::vector<LPoly> T{{1.0L}, {0.0L, 1.0L}}, U{{1.0L}, {0.0L, 2.0L}};
  for (int k = 2; k <= n; ++k) {
    T.push_back(poly_axpy(-1.0L, poly_mul({0.0L, 2.0L}, T[size_t(k - 1)]), T[size_t(k - 2)]));
    U.push_back(poly_axpy(-1.0L, poly_mul({0.0L, 2.0L}, U[size_t(k - 1)]), U[size_t(k - 2)]));
  }
  const LPoly f = compose_3lm1(poly_axpy(-3.0L, T[size_t(n)], T[size_t(n - 1)]));
  const LPoly g = compose_3lm1(poly_axpy(-1.0L, U[size_t(n - 1)], U[size_t(n - 2)]));
  const LPoly h = compose_3lm1(poly_axpy(-3.0L, U[size_t(n - 1)], U[size_t(n - 2)]));
  const LPoly R = poly_mul({0.0L, 1.0L}, poly_mul(g, h));

  LPoly num = R;
  for (long double& c : num) c *= 3.0L;
  num[0] -= 4.0L;
  double rel = 0.0;
  const LPoly l = poly_divide_exact(num, f, &rel);
  // exact integer arithmetic through n ~ 12; past n ~ 40 the monomial basis
  // itself loses all digits and only the recurrence evaluators are meaningful
  if (n <= 40 && rel > 1e-6)
    throw std::logic_error("DecimationSystem: (3R-4)/f_n has nonzero remainder");
  f_ = to_double(f);
  g_ = to_double(g);
  h_ = to_double(h);
  R_ = to_double(R);
  l_ = to_double(l);
}

std::pair<long double, long double> DecimationSystem::eval_R(long double lambda) const {
  const ChebVals c = cheb_eval(params_.n, 3 * lambda - 1);
  const long double g = c.Un1 - c.Un2, h = c.Un1 - 3 * c.Un2;
  const long double dg = 3 * (c.dUn1 - c.dUn2), dh = 3 * (c.dUn1 - 3 * c.dUn2);
  return {lambda * g * h, g * h + lambda * (dg * h + g * dh)};
}

long double DecimationSystem::eval_f(long double lambda) const {
  const ChebVals c = cheb_eval(params_.n, 3 * lambda - 1);
  return c.Tn - 3 * c.Tn1;
}
long double DecimationSystem::eval_g(long double lambda) const {
  const ChebVals c = cheb_eval(params_.n, 3 * lambda - 1);
  return c.Un1 - c.Un2;
}
long double DecimationSystem::eval_h(long double lambda) const {
  const ChebVals c = cheb_eval(params_.n, 3 * lambda - 1);
  return c.Un1 - 3 * c.Un2;
}

// Bisection on a sign change of R - target (use_R) or R' (for critical
// points), finished with bracket-guarded Newton.
long double DecimationSystem::root_bisect_newton(long double lo, long double hi,
                                                 long double target, bool use_R) const {
  auto fval = [&](long double x) -> std::pair<long double, long double> {
    auto [v, d] = eval_R(x);
    if (use_R) return {v - target, d};
    // derivative root: second derivative by central difference only as a
    // Newton helper; bisection carries correctness
    const long double h = 1e-9L * (1 + std::abs((double)x));
    auto [vp, dp] = eval_R(x + h);
    auto [vm, dm] = eval_R(x - h);
    (void)vp;
    (void)vm;
    return {d, (dp - dm) / (2 * h)};
  };
  auto [flo, dlo] = fval(lo);
  auto [fhi, dhi] = fval(hi);
  (void)dlo;
  (void)dhi;
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::domain_error("root_bisect_newton: no sign change in bracket");
  for (int it = 0; it < 70 && hi - lo > 1e-7L; ++it) {
    const long double mid = 0.5L * (lo + hi);
    auto [fm, dm] = fval(mid);
    (void)dm;
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else
      hi = mid;
  }
  long double x = 0.5L * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    auto [fx, dx] = fval(x);
    if (fx == 0) break;
    if ((fx > 0) == (flo > 0))
      lo = x;
    else
      hi = x;
    long double step = (dx != 0) ? fx / dx : 0;
    long double nx = x - step;
    if (!(nx > lo && nx < hi)) nx = 0.5L * (lo + hi);
    if (nx == x || hi - lo <= std::numeric_limits<long double>::epsilon() * std::abs(x) * 4)
      break;
    x = nx;
  }
  return x;
}

void DecimationSystem::build_roots_and_critical_points() {
  const int n = params_.n;
  const long double pi = std::numbers::pi_v<long double>;

  g_roots_.clear();
  l_roots_.clear();
  for (int j = 1; j <= n - 1; ++j) {
    g_roots_.push_back((1 - std::cos(2 * pi * j / (2 * n - 1))) / 3);
    l_roots_.push_back((1 - std::cos(pi * (2 * j - 1) / (2 * n - 1))) / 3);
  }

  // h-roots interlace the g-roots: h_j in (g_j, g_{j+1}), last in (g_{n-1}, 4/3)
  h_roots_.clear();
  for (int j = 1; j <= n - 1; ++j) {
    long double lo = g_roots_[size_t(j - 1)];
    long double hi = (j < n - 1) ? g_roots_[size_t(j)] : kFourThirds;
    long double flo = eval_h(lo), fhi = eval_h(hi);
    if ((flo > 0) == (fhi > 0))
      throw std::logic_error("h-root bracket failed");
    for (int it = 0; it < 130 && hi - lo > 0; ++it) {
      const long double mid = 0.5L * (lo + hi);
      const long double fm = eval_h(mid);
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
    h_roots_.push_back(0.5L * (lo + hi));
  }

  // zeros of R: 0, g-roots and h-roots interleaved ascending
  std::vector<long double> zeros{0.0L};
  for (int j = 0; j < n - 1; ++j) {
    zeros.push_back(g_roots_[size_t(j)]);
    zeros.push_back(h_roots_[size_t(j)]);
  }
  crit_.clear();
  for (size_t i = 0; i + 1 < zeros.size(); ++i)
    crit_.push_back(root_bisect_newton(zeros[i], zeros[i + 1], 0.0L, false));

  // f-roots: the 4/3-preimages on the even branches and the top branch
  f_roots_.clear();
  for (int j = 2; j <= 2 * n - 1; ++j)
    if (j % 2 == 0 || j == 2 * n - 1) f_roots_.push_back(branch(j, kFourThirds));

  forbidden_.clear();
  forbidden_.push_back(0.0);
  singular_.clear();
  for (long double r : g_roots_) {
    forbidden_.push_back(double(r));
    singular_.push_back(double(r));
  }
  for (long double r : f_roots_) {
    forbidden_.push_back(double(r));
    singular_.push_back(double(r));
  }
  forbidden_.push_back(double(kFourThirds));
  std::sort(forbidden_.begin(), forbidden_.end());
  std::sort(singular_.begin(), singular_.end());
}

std::pair<long double, long double> DecimationSystem::branch_interval(int j) const {
  const int nb = num_branches();
  if (j < 1 || j > nb) throw std::invalid_argument("branch index out of range");
  const long double lo = (j == 1) ? 0.0L : crit_[size_t(j - 2)];
  const long double hi = (j == nb) ? kFourThirds : crit_[size_t(j - 1)];
  return {lo, hi};
}

long double DecimationSystem::branch(int j, long double mu) const {
  auto [lo, hi] = branch_interval(j);
  if (!(mu >= -1e-15L && mu <= kFourThirds + 1e-15L))
    throw std::domain_error("branch: mu outside [0, 4/3]");
  auto [rlo, d1] = eval_R(lo);
  auto [rhi, d2] = eval_R(hi);
  (void)d1;
  (void)d2;
  const bool increasing = rlo < rhi;
  const long double rmin = std::min(rlo, rhi), rmax = std::max(rlo, rhi);
  const long double slack = 1e-12L * std::max(1.0L, std::abs(rmax));
  if (mu < rmin - slack || mu > rmax + slack)
    throw std::domain_error("branch: mu outside branch range");
  mu = std::clamp(mu, rmin, rmax);
  long double flo = rlo - mu;
  if (flo == 0) return lo;
  if (rhi - mu == 0) return hi;
  if (j == 1 && mu < 1e-4L) {
    // seed at mu/rho where R is essentially linear; a bisection midpoint
    // would sit orders of magnitude above the root and Newton's step would
    // cancel catastrophically
    long double x = mu / (long double)params_.rho();
    for (int it = 0; it < 30; ++it) {
      auto [rv, rd] = eval_R(x);
      const long double step = (rv - mu) / rd;
      x -= step;
      if (std::abs(step) <= std::numeric_limits<long double>::epsilon() * x) break;
    }
    return x;
  }
  // bisect, then bracket-guarded Newton to the floating-point floor
  long double a = lo, b = hi, fa = flo;
  for (int it = 0; it < 48 && b - a > 1e-8L; ++it) {
    const long double mid = 0.5L * (a + b);
    const long double fm = eval_R(mid).first - mu;
    if (fm == 0) return mid;
    if ((fm > 0) == (fa > 0)) {
      a = mid;
      fa = fm;
    } else
      b = mid;
  }
  long double x = 0.5L * (a + b);
  for (int it = 0; it < 60; ++it) {
    auto [rx, dx] = eval_R(x);
    const long double fx = rx - mu;
    if (fx == 0) return x;
    if ((fx > 0) == (fa > 0))
      a = x;
    else
      b = x;
    long double nx = (dx != 0) ? x - fx / dx : 0.5L * (a + b);
    if (!(nx > a && nx < b)) nx = 0.5L * (a + b);
    if (nx == x) break;
    x = nx;
  }
  // walk to the argmin of |R - mu| over neighboring representables; the
  // quantization step R' * ulp dominates the evaluation noise
  long double fbest = std::abs(eval_R(x).first - mu);
  for (int dir : {+1, -1}) {
    long double y = x;
    for (int it = 0; it < 32; ++it) {
      const long double ny = std::nextafterl(y, dir > 0 ? 2.0L : -1.0L);
      const long double fy = std::abs(eval_R(ny).first - mu);
      if (fy < fbest) {
        x = y = ny;
        fbest = fy;
      } else
        break;
    }
  }
  (void)increasing;
  return x;
}

long double DecimationSystem::psi(long double t) const {
  if (t < -1e-15L || t > kFourThirds + 1e-12L)
    throw std::domain_error("psi: t outside [0, 4/3]");
  if (t <= 0) return 0.0L;
  const long double rho = params_.rho();
  long double y = t, p = 1.0L, prev = t;
  for (int m = 1; m <= 200; ++m) {
    // phi_1 by Newton from y/rho, with the branch solver as fallback
    long double x = y / rho;
    bool ok = false;
    for (int it = 0; it < 24; ++it) {
      auto [rv, rd] = eval_R(x);
      const long double step = (rv - y) / rd;
      x -= step;
      if (std::abs(step) <= 2 * std::numeric_limits<long double>::epsilon() * std::abs(x)) {
        ok = x >= 0 && x <= crit_[0] * 1.0000001L;
        break;
      }
    }
    if (!ok) x = branch(1, y);
    y = x;
    p *= rho;
    const long double v = p * y;
    if (std::abs(v - prev) <= 1e-15L * std::abs(v)) return v;
    prev = v;
  }
  throw std::runtime_error("psi: no convergence after 200 iterations");
}

bool DecimationSystem::is_forbidden(double lambda, double tol) const {
  for (double v : forbidden_)
    if (std::abs(lambda - v) <= tol * std::max(1.0, std::abs(v))) return true;
  return false;
}

DecimationSystem::FixedPoints DecimationSystem::fixed_points() const {
  if (!fixed_) {
    // largest fixed point: R(t) - t changes sign on the top branch interval
    auto [lo, hi] = branch_interval(num_branches());
    long double a = lo, b = hi;
    long double fa = eval_R(a).first - a;
    for (int it = 0; it < 130 && b - a > 0; ++it) {
      const long double mid = 0.5L * (a + b);
      const long double fm = eval_R(mid).first - mid;
      if (fm == 0) {
        a = b = mid;
        break;
      }
      if ((fm > 0) == (fa > 0)) {
        a = mid;
        fa = fm;
      } else
        b = mid;
    }
    long double p = 0.5L * (a + b);
    for (int it = 0; it < 6; ++it) {
      auto [rv, rd] = eval_R(p);
      const long double nx = p - (rv - p) / (rd - 1);
      if (nx > lo && nx < hi) p = nx;
    }
    const long double q = branch(num_branches(), kFourThirds);
    if (q < p) throw std::logic_error("fixed_points: q < p");
    fixed_ = FixedPoints{p, q, p};
  }
  return *fixed_;
}

Mat DecimationSystem::extension_matrix_assembled(double lambda) const {
  for (double s : singular_)
    if (std::abs(lambda - s) <= 1e-12 * std::max(1.0, std::abs(s)))
      throw std::domain_error("extension_matrix: lambda is forbidden (singular at " +
                              std::to_string(s) + ")");
  const GraphApprox& g = level1_;
  const int ni = int(interior_ids_.size());
  std::vector<int32_t> pos(size_t(g.vertex_count()), -1);
  for (int i = 0; i < ni; ++i) pos[size_t(interior_ids_[size_t(i)])] = i;

  Mat A = Mat::Zero(ni, ni);
  Mat B = Mat::Zero(ni, 4);
  for (int i = 0; i < ni; ++i) {
    const int32_t v = interior_ids_[size_t(i)];
    A(i, i) = (1.0 - lambda) * g.degree[size_t(v)];
    for (int64_t k = g.adj_offset[size_t(v)]; k < g.adj_offset[size_t(v) + 1]; ++k) {
      const int32_t w = g.adj[size_t(k)];
      if (pos[size_t(w)] >= 0)
        A(i, pos[size_t(w)]) -= 1.0;
      else {
        for (int qb = 0; qb < 4; ++qb)
          if (g.boundary_ids[size_t(qb)] == w) B(i, qb) += 1.0;
      }
    }
  }
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible())
    throw std::domain_error("extension_matrix: singular interior system (forbidden lambda)");
  return lu.solve(B);
}

Mat DecimationSystem::extension_matrix_closed_form(double lambda) const {
  if (params_.n != 2)
    throw std::invalid_argument("closed-form extension matrix is n=2 only");
  for (double s : singular_)
    if (std::abs(lambda - s) <= 1e-12 * std::max(1.0, std::abs(s)))
      throw std::domain_error("extension_matrix: lambda is forbidden (singular at " +
                              std::to_string(s) + ")");
  const double a = 9 - 42 * lambda + 36 * lambda * lambda;
  const double b = 6 * (1 - 4 * lambda + 3 * lambda * lambda);
  const double c = 1;
  const double d = 2 - 3 * lambda;
  const double gamma =
      1.0 / (3 * (4 - 29 * lambda + 60 * lambda * lambda - 36 * lambda * lambda * lambda));
  const GraphApprox& g = level1_;
  Mat E(int(interior_ids_.size()), 4);
  for (size_t i = 0; i < interior_ids_.size(); ++i) {
    const int32_t v = interior_ids_[i];
    const bool junction = g.degree[size_t(v)] == 6;
    // the arm cell containing v: quadrant of the vertex
    const int64_t S = g.scale;
    const int64_t x = g.vx[size_t(v)], y = g.vy[size_t(v)];
    int arm;
    if (2 * x < S)
      arm = (2 * y < S) ? 1 : 4;
    else
      arm = (2 * y < S) ? 2 : 3;
    for (int qb = 0; qb < 4; ++qb) {
      const bool own = (qb + 1 == arm);
      E(int(i), qb) = gamma * (junction ? (own ? b : d) : (own ? a : c));
    }
  }
  return E;
}

Mat DecimationSystem::extension_matrix(double lambda) const {
  if (params_.n == 2) return extension_matrix_closed_form(lambda);
  return extension_matrix_assembled(lambda);
}

namespace {

struct SigmaElem {
  long double g_eig;
  Series series;
  int birth;
  std::vector<int> word;  // branches applied so far, innermost first
};

std::vector<int> trimmed(std::vector<int> w) {
  while (!w.empty() && w.back() == 1) w.pop_back();
  return w;
}

int64_t fourthirds_multiplicity(const VicsekParams& p, int birth) {
  int64_t m = 1;
  for (int i = 0; i < birth; ++i) m *= p.num_maps();
  return 2 * m + 1;
}

void check_depth_budget(const VicsekParams& p, int depth) {
  if (depth < 1) throw std::invalid_argument("spectrum depth must be >= 1");
  double count = std::pow(double(2 * p.n - 1), depth);
  if (count > 5e6)
    throw budget_error("spectrum enumeration: (2n-1)^depth = " + std::to_string(count) +
                       " exceeds budget");
}

SpectrumTable finalize_table(const DecimationSystem& sys, int depth,
                             std::vector<EigenvalueRecord> recs) {
  SpectrumTable t{sys.params(), depth, std::move(recs), {}};
  t.cum_mult.resize(t.records.size());
  int64_t c = 0;
  for (size_t i = 0; i < t.records.size(); ++i) {
    c += t.records[i].multiplicity;
    t.cum_mult[i] = c;
  }
  return t;
}

}  // namespace

SpectrumTable enumerate_spectrum(const DecimationSystem& sys, int depth) {
  check_depth_budget(sys.params(), depth);
  const int nb = sys.num_branches();
  const long double rho = sys.params().rho();

  std::vector<SigmaElem> sigma{{kFourThirds, Series::FourThirds, 0, {}}};
  for (int level = 1; level <= depth; ++level) {
    std::vector<SigmaElem> next;
    next.reserve(sigma.size() * size_t(nb) + 1);
    auto push = [&](int j, const SigmaElem& e) {
      SigmaElem ne{sys.branch(j, e.g_eig), e.series, e.birth, e.word};
      ne.word.push_back(j);
      next.push_back(std::move(ne));
    };
    // the level-(m-1) eigenvalue 0: the all-ones 0-series history
    SigmaElem zero_seed{0.0L, Series::Zero, 0, std::vector<int>(size_t(level - 1), 1)};
    for (int j = 1; j <= nb; ++j) {
      const bool odd = (j % 2 == 1);
      const bool top = (j == nb);
      if (odd && j > 1) push(j, zero_seed);  // phi_j(0), j odd >= 3
      if (odd) {
        for (const SigmaElem& e : sigma) {
          if (top && e.g_eig == kFourThirds) continue;  // phi_{2n-1}(4/3) forbidden
          push(j, e);
        }
      } else {
        for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) {
          if (it->g_eig == kFourThirds) continue;  // phi_even(4/3) forbidden
          push(j, *it);
        }
      }
    }
    next.push_back({kFourThirds, Series::FourThirds, level, {}});
    sigma.swap(next);
  }

  std::vector<EigenvalueRecord> recs;
  recs.reserve(sigma.size() + 1);
  recs.push_back({Series::Zero, 0, {}, 0.0, 1});
  for (const SigmaElem& e : sigma) {
    EigenvalueRecord r;
    r.series = e.series;
    r.birth_level = e.birth;
    r.word = trimmed(e.word);
    r.value = double(std::pow((long double)rho, depth) * sys.psi(e.g_eig));
    r.multiplicity = (e.series == Series::Zero)
                         ? 1
                         : fourthirds_multiplicity(sys.params(), e.birth);
    recs.push_back(std::move(r));
  }
  for (size_t i = 1; i < recs.size(); ++i)
    if (!(recs[i].value > recs[i - 1].value))
      throw std::logic_error("enumerate_spectrum: values not strictly increasing");
  return finalize_table(sys, depth, std::move(recs));
}

SpectrumTable brute_enumerate(const DecimationSystem& sys, int depth) {
  check_depth_budget(sys.params(), depth);
  const int nb = sys.num_branches();
  const long double rho = sys.params().rho();
  std::vector<EigenvalueRecord> recs;

  // all trimmed words of length <= len obeying the first-letter rule; the
  // first non-1 letter acts on the seed 0, everything later acts on interior
  // values and is unconstrained
  auto emit = [&](Series series, int birth, const std::vector<int>& word) {
    long double v = (series == Series::Zero) ? 0.0L : kFourThirds;
    for (int j : word) v = sys.branch(j, v);
    EigenvalueRecord r;
    r.series = series;
    r.birth_level = birth;
    r.word = word;
    r.value = double(std::pow((long double)rho, birth + int(word.size())) * sys.psi(v));
    r.multiplicity =
        (series == Series::Zero) ? 1 : fourthirds_multiplicity(sys.params(), birth);
    recs.push_back(std::move(r));
  };

  std::vector<int> word;
  auto rec_words = [&](auto&& self, Series series, int birth, int maxlen,
                       bool seen_non1) -> void {
    if (!word.empty() && word.back() != 1) emit(series, birth, word);
    if (int(word.size()) == maxlen) return;
    for (int j = 1; j <= nb; ++j) {
      if (!seen_non1) {
        // acting on the seed: rule out forbidden images
        if (series == Series::Zero && j != 1 && j % 2 == 0) continue;
        if (series == Series::FourThirds && (j % 2 == 0 || j == nb)) continue;
      }
      word.push_back(j);
      self(self, series, birth, maxlen, seen_non1 || (series == Series::FourThirds) || j != 1);
      word.pop_back();
    }
  };

  emit(Series::Zero, 0, {});  // the constant; psi(0) = 0
  recs.back().value = 0.0;
  rec_words(rec_words, Series::Zero, 0, depth, false);
  for (int b = 0; b <= depth; ++b) {
    emit(Series::FourThirds, b, {});
    rec_words(rec_words, Series::FourThirds, b, depth - b, false);
  }

  std::sort(recs.begin(), recs.end(),
            [](const EigenvalueRecord& a, const EigenvalueRecord& b) {
              if (a.value != b.value) return a.value < b.value;
              return record_key_less(a, b);
            });
  return finalize_table(sys, depth, std::move(recs));
}

std::vector<std::pair<double, int64_t>> predicted_graph_spectrum(const DecimationSystem& sys,
                                                                 int m) {
  const SpectrumTable table = enumerate_spectrum(sys, std::max(1, m));
  std::vector<std::pair<double, int64_t>> pred{{0.0, 1}};
  for (const auto& r : table.records) {
    if (r.birth_level + int(r.word.size()) > m) continue;
    if (r.series == Series::Zero && r.word.empty()) continue;  // the 0 record itself
    pred.emplace_back(graph_eigenvalue_sequence(sys, r, m).values.back(), r.multiplicity);
  }
  std::sort(pred.begin(), pred.end());
  std::vector<std::pair<double, int64_t>> merged;
  for (const auto& p : pred) {
    if (!merged.empty() &&
        p.first - merged.back().first <= 1e-9 * std::max(1.0, std::abs(p.first)))
      merged.back().second += p.second;
    else
      merged.push_back(p);
  }
  return merged;
}

GraphEigenvalueSequence graph_eigenvalue_sequence(const DecimationSystem& sys,
                                                  const EigenvalueRecord& rec, int M) {
  if (M < rec.birth_level + int(rec.word.size()))
    throw std::invalid_argument("graph_eigenvalue_sequence: M below birth + word length");
  GraphEigenvalueSequence out;
  out.birth = rec.birth_level;
  long double v = (rec.series == Series::Zero) ? 0.0L : kFourThirds;
  out.values.push_back(double(v));
  for (int level = rec.birth_level + 1; level <= M; ++level) {
    const size_t i = size_t(level - rec.birth_level - 1);
    const int j = i < rec.word.size() ? rec.word[i] : 1;
    v = sys.branch(j, v);
    out.values.push_back(double(v));
  }
  return out;
}

}  // namespace vicsek
