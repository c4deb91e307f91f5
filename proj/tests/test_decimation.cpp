#include <doctest.h>

#include <cmath>
#include <random>

#include "vicsek/decimation.hpp"

using namespace vicsek;

namespace {

// integer convolution oracle for the coefficient identities
std::vector<long long> iconv(const std::vector<long long>& a, const std::vector<long long>& b) {
  std::vector<long long> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

std::vector<long long> as_ints(const std::vector<double>& p) {
  std::vector<long long> out;
  for (double c : p) {
    REQUIRE(c == std::llround(c));
    out.push_back(std::llround(c));
  }
  return out;
}

}  // namespace

TEST_CASE("n=2 polynomials are the known integer coefficients") {
  DecimationSystem sys{VicsekParams{2}};
  CHECK(as_ints(sys.R_coeffs()) == std::vector<long long>{0, 15, -48, 36});
  CHECK(as_ints(sys.f_coeffs()) == std::vector<long long>{4, -21, 18});
  CHECK(as_ints(sys.g_coeffs()) == std::vector<long long>{-3, 6});
  CHECK(as_ints(sys.h_coeffs()) == std::vector<long long>{-5, 6});
  CHECK(as_ints(sys.l_coeffs()) == std::vector<long long>{-1, 6});
}

TEST_CASE("coefficient identities R = lambda g h and 3R - 4 = f l, exactly") {
  for (int n = 2; n <= 8; ++n) {
    DecimationSystem sys{VicsekParams{n}};
    const auto g = as_ints(sys.g_coeffs()), h = as_ints(sys.h_coeffs());
    const auto f = as_ints(sys.f_coeffs()), l = as_ints(sys.l_coeffs());
    auto gh = iconv(g, h);
    gh.insert(gh.begin(), 0);  // times lambda
    CHECK(gh == as_ints(sys.R_coeffs()));
    auto fl = iconv(f, l);
    auto R3 = as_ints(sys.R_coeffs());
    for (auto& c : R3) c *= 3;
    R3[0] -= 4;
    CHECK(fl == R3);
  }
}

TEST_CASE("eval_R values and derivative") {
  DecimationSystem sys{VicsekParams{2}};
  CHECK(double(sys.eval_R(0.0L).first) == 0.0);
  CHECK(double(sys.eval_R(4.0L / 3.0L).first) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK(double(sys.eval_R(0.9024L).second) == doctest::Approx(16.314).epsilon(5e-4));
  // recurrence evaluation agrees with the coefficient list on a grid
  for (int n : {3, 5}) {
    DecimationSystem s{VicsekParams{n}};
    const auto& R = s.R_coeffs();
    for (double x = 0.0; x <= 1.33; x += 0.07) {
      double horner = 0;
      for (size_t k = R.size(); k-- > 0;) horner = horner * x + R[k];
      CHECK(double(s.eval_R(x).first) == doctest::Approx(horner).epsilon(1e-8));
    }
  }
}

TEST_CASE("forbidden set") {
  DecimationSystem sys{VicsekParams{2}};
  const auto& f = sys.forbidden_set();
  REQUIRE(f.size() == 5);
  CHECK(f[0] == 0.0);
  CHECK(f[1] == doctest::Approx((7 - std::sqrt(17.0)) / 12).epsilon(1e-14));
  CHECK(f[2] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f[3] == doctest::Approx((7 + std::sqrt(17.0)) / 12).epsilon(1e-14));
  CHECK(f[4] == doctest::Approx(4.0 / 3).epsilon(1e-14));
  CHECK(sys.is_forbidden(0.5));
  CHECK(!sys.is_forbidden(1.0 / 6));
  // the extension-singular set drops 0 and 4/3
  CHECK(sys.extension_singular_set().size() == 3);
}

TEST_CASE("critical points separate alternating monotone branches") {
  for (int n : {2, 3, 6}) {
    DecimationSystem sys{VicsekParams{n}};
    REQUIRE(int(sys.critical_points().size()) == 2 * n - 2);
    for (int j = 1; j <= sys.num_branches(); ++j) {
      const auto [lo, hi] = sys.branch_interval(j);
      const bool increasing = (j % 2 == 1);
      for (int i = 0; i + 1 < 6; ++i) {
        const long double a = lo + (hi - lo) * i / 6.0L;
        const long double b = lo + (hi - lo) * (i + 1) / 6.0L;
        const long double d = sys.eval_R(b).first - sys.eval_R(a).first;
        CHECK((increasing ? d > 0 : d < 0));
      }
    }
  }
}

TEST_CASE("branch inversion") {
  DecimationSystem sys{VicsekParams{2}};
  CHECK(std::abs(double(sys.branch(1, 4.0L / 3.0L)) - 1.0 / 6) < 1e-13);
  CHECK(std::abs(double(sys.branch(3, 0.0L)) - 5.0 / 6) < 1e-13);
  // h_2(5/6) = 6*(5/6) - 5 = 0 confirms the target
  CHECK(6 * 5 - 5 * 6 == 0);
  // closed-form family at j=1: (1 + cos(2 pi (n-1)/(2n-1)))/3
  CHECK(double(sys.branch(1, 4.0L / 3.0L)) ==
        doctest::Approx((1 + std::cos(2 * M_PI / 3)) / 3).epsilon(1e-14));

  SUBCASE("R o phi_j = id at 1e-12") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> U(0.0, 4.0 / 3.0);
    for (int n : {2, 3, 5, 8}) {
      DecimationSystem s{VicsekParams{n}};
      for (int j = 1; j <= s.num_branches(); ++j)
        for (int it = 0; it < 250; ++it) {
          const long double mu = U(rng);
          const long double lam = s.branch(j, mu);
          CHECK(std::abs(double(s.eval_R(lam).first - mu)) <= 1e-12 * std::max(1.0L, mu));
        }
    }
  }
  SUBCASE("out-of-range mu") {
    CHECK_THROWS_AS((void)sys.branch(1, 1.5L), std::domain_error);
    CHECK_THROWS_AS((void)sys.branch(0, 0.5L), std::invalid_argument);
  }
}

TEST_CASE("psi") {
  DecimationSystem sys{VicsekParams{2}};
  CHECK(double(sys.psi(0.0L)) == 0.0);
  CHECK(double(sys.psi(1e-8L)) / 1e-8 == doctest::Approx(1.0).epsilon(1e-6));
  // monotone increasing on [0, 4/3]
  long double prev = -1;
  for (int i = 0; i <= 64; ++i) {
    const long double v = sys.psi(4.0L / 3.0L * i / 64);
    CHECK(v > prev);
    prev = v;
  }
  // psi_{n+1} >= psi_n on [0, 1]
  for (int n = 2; n < 12; ++n) {
    DecimationSystem a{VicsekParams{n}}, b{VicsekParams{n + 1}};
    for (double t = 0.05; t <= 1.0; t += 0.05)
      CHECK(double(b.psi(t)) >= double(a.psi(t)) * (1 - 1e-12));
  }
}

TEST_CASE("fixed points") {
  DecimationSystem sys{VicsekParams{2}};
  const auto fp = sys.fixed_points();
  CHECK(double(fp.t_max) == doctest::Approx((4 + std::sqrt(2.0)) / 6).epsilon(1e-13));
  CHECK(double(fp.q) == doctest::Approx((7 + std::sqrt(17.0)) / 12).epsilon(1e-13));
  CHECK(fp.p == fp.t_max);
  for (int n = 2; n <= 12; ++n) {
    const auto f = DecimationSystem{VicsekParams{n}}.fixed_points();
    CHECK(f.q >= f.p);
  }
  CHECK(double(DecimationSystem{VicsekParams{3}}.fixed_points().t_max) ==
        doctest::Approx(0.8905).epsilon(5e-5));
}

TEST_CASE("spectrum enumeration: initial segment, n=2, depth 1") {
  DecimationSystem sys{VicsekParams{2}};
  const SpectrumTable t = enumerate_spectrum(sys, 1);
  REQUIRE(t.records.size() == 4);  // length 2n
  CHECK(t.records[0].value == 0.0);
  CHECK(t.records[0].multiplicity == 1);
  CHECK(t.records[1].series == Series::FourThirds);
  CHECK(t.records[1].multiplicity == 3);
  CHECK(t.records[1].value == doctest::Approx(double(sys.psi(4.0L / 3.0L))).epsilon(1e-14));
  CHECK(t.records[2].series == Series::Zero);
  CHECK(t.records[2].value == doctest::Approx(15 * double(sys.psi(5.0L / 6.0L))).epsilon(1e-13));
  CHECK(t.records[3].series == Series::FourThirds);
  CHECK(t.records[3].birth_level == 1);
  CHECK(t.records[3].multiplicity == 11);
}

TEST_CASE("enumerate_spectrum agrees with the word-enumeration oracle") {
  for (auto [n, depth] : {std::pair{2, 1}, {2, 3}, {2, 4}, {3, 3}, {4, 2}}) {
    DecimationSystem sys{VicsekParams{n}};
    const SpectrumTable a = enumerate_spectrum(sys, depth);
    const SpectrumTable b = brute_enumerate(sys, depth);
    REQUIRE(a.records.size() == b.records.size());
    CHECK(a.total_multiplicity() == b.total_multiplicity());
    for (size_t i = 0; i < a.records.size(); ++i) {
      CHECK(record_key_equal(a.records[i], b.records[i]));
      CHECK(a.records[i].multiplicity == b.records[i].multiplicity);
      CHECK(a.records[i].value ==
            doctest::Approx(b.records[i].value).epsilon(1e-11));
    }
  }
}

TEST_CASE("brute enumeration respects rule admissibility") {
  DecimationSystem sys{VicsekParams{2}};
  const SpectrumTable t = brute_enumerate(sys, 3);
  bool has_word3 = false;
  for (const auto& r : t.records) {
    if (!r.word.empty()) CHECK(r.word.back() != 1);  // trimmed
    if (r.series == Series::Zero) {
      for (int w : r.word) {
        if (w == 1) continue;
        CHECK(w % 2 == 1);  // first non-1 odd
        break;
      }
      if (r.word == std::vector<int>{3}) {
        has_word3 = true;
        CHECK(r.value == doctest::Approx(15 * double(sys.psi(5.0L / 6.0L))).epsilon(1e-13));
      }
    } else if (!r.word.empty()) {
      CHECK(r.word[0] % 2 == 1);
      CHECK(r.word[0] != 3);
    }
  }
  CHECK(has_word3);
}

TEST_CASE("series alternate and segments have the stated structure") {
  for (int n : {2, 3, 4}) {
    DecimationSystem sys{VicsekParams{n}};
    const SpectrumTable t = enumerate_spectrum(sys, 3);
    for (size_t i = 0; i < t.records.size(); ++i)
      CHECK((t.records[i].series == Series::Zero) == (i % 2 == 0));
    // initial segment of 2n, then segments of 4n-2, each ending in the only
    // later-born 4/3 record
    const size_t seg = size_t(4 * n - 2);
    REQUIRE((t.records.size() - size_t(2 * n)) % seg == 0);
    for (size_t s0 = size_t(2 * n); s0 < t.records.size(); s0 += seg) {
      for (size_t i = s0; i < s0 + seg; ++i) {
        const auto& r = t.records[i];
        if (r.series == Series::FourThirds) {
          if (i + 1 == s0 + seg) {
            CHECK(r.birth_level >= 1);
          } else {
            CHECK(r.birth_level == 0);
            CHECK(r.multiplicity == 3);
          }
        }
      }
    }
    // last record of the initial segment as well
    CHECK(t.records[size_t(2 * n - 1)].birth_level >= 1);
  }
}

TEST_CASE("graph eigenvalue sequences") {
  DecimationSystem sys{VicsekParams{2}};
  const SpectrumTable t = enumerate_spectrum(sys, 2);
  for (const auto& r : t.records) {
    if (r.series == Series::Zero && r.word.empty()) {
      const auto seq = graph_eigenvalue_sequence(sys, r, 5);
      for (double v : seq.values) CHECK(v == 0.0);
    }
    if (r.series == Series::FourThirds && r.birth_level == 0 && r.word.empty()) {
      const auto seq = graph_eigenvalue_sequence(sys, r, 2);
      CHECK(seq.values[0] == doctest::Approx(4.0 / 3));
      CHECK(seq.values[1] == doctest::Approx(1.0 / 6).epsilon(1e-14));
    }
    // rho^M lambda_M converges to the record value
    const int M = r.birth_level + int(r.word.size()) + 40;
    const auto seq = graph_eigenvalue_sequence(sys, r, M);
    const double approx = std::pow(15.0, M) * seq.values.back();
    if (r.value > 0) CHECK(std::abs(approx - r.value) <= 1e-8 * r.value);
  }
  EigenvalueRecord rec = t.records[1];
  CHECK_THROWS_AS((void)graph_eigenvalue_sequence(sys, rec, rec.birth_level - 1),
                  std::invalid_argument);
}

TEST_CASE("extension matrix") {
  DecimationSystem sys{VicsekParams{2}};
  SUBCASE("explicit n=2 entries at lambda = 0") {
    const Mat E = sys.extension_matrix(0.0);
    REQUIRE(E.rows() == 12);
    REQUIRE(E.cols() == 4);
    CHECK((E.rowwise().sum() - Vec::Ones(12)).cwiseAbs().maxCoeff() < 1e-14);
    // every row is gamma*(a,c,c,c) or gamma*(b,d,d,d) up to column order
    int a_rows = 0, b_rows = 0;
    for (int i = 0; i < 12; ++i) {
      const double mx = E.row(i).maxCoeff();
      if (std::abs(mx - 9.0 / 12) < 1e-12) {
        ++a_rows;
        CHECK(E.row(i).minCoeff() == doctest::Approx(1.0 / 12));
      } else {
        ++b_rows;
        CHECK(mx == doctest::Approx(6.0 / 12));
        CHECK(E.row(i).minCoeff() == doctest::Approx(2.0 / 12));
      }
    }
    CHECK(a_rows == 8);
    CHECK(b_rows == 4);
  }
  SUBCASE("forbidden lambda") {
    CHECK_THROWS_AS((void)sys.extension_matrix(0.5), std::domain_error);
    CHECK_THROWS_AS((void)sys.extension_matrix((7 + std::sqrt(17.0)) / 12), std::domain_error);
  }
  SUBCASE("closed form vs assembled") {
    for (double lm : {0.0, 1.0 / 6, 0.3, 0.9}) {
      const Mat A = sys.extension_matrix_assembled(lm);
      const Mat B = sys.extension_matrix_closed_form(lm);
      CHECK((A - B).cwiseAbs().maxCoeff() < 1e-12);
    }
    // at 4/3 the interior Dirichlet problem has a kernel (the born
    // eigenfunctions); the closed form continues through it, the linear
    // system does not
    CHECK_THROWS_AS((void)sys.extension_matrix_assembled(4.0 / 3), std::domain_error);
    CHECK(sys.extension_matrix_closed_form(4.0 / 3).allFinite());
  }
  SUBCASE("constants extend to constants for every n") {
    for (int n : {3, 5}) {
      DecimationSystem s{VicsekParams{n}};
      const Mat E = s.extension_matrix(0.0);
      CHECK((E.rowwise().sum() - Vec::Ones(E.rows())).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("decimation-predicted spectra match the dense oracle") {
  for (auto [n, m] : {std::pair{2, 2}, {3, 1}, {4, 1}}) {
    DecimationSystem sys{VicsekParams{n}};
    const auto pred = predicted_graph_spectrum(sys, m);
    const auto orc = oracle_spectrum(build_graph(VicsekParams{n}, m));
    REQUIRE(pred.size() == orc.size());
    for (size_t i = 0; i < pred.size(); ++i) {
      CHECK(std::abs(pred[i].first - orc[i].first) < 1e-9);
      CHECK(pred[i].second == orc[i].second);
    }
  }
}

TEST_CASE("depth budget") {
  DecimationSystem sys{VicsekParams{4}};
  CHECK_THROWS_AS((void)enumerate_spectrum(sys, 20), budget_error);
  CHECK_THROWS_AS((void)enumerate_spectrum(sys, 0), std::invalid_argument);
}
