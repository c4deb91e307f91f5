// Command-line front end: spectral decimation computations on the Vicsek
// fractals with reproducible CSV/JSON output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vicsek/asymptotics.hpp"
#include "vicsek/decimation.hpp"
#include "vicsek/eigenfunc.hpp"
#include "vicsek/gaps.hpp"
#include "vicsek/green.hpp"
#include "vicsek/kernels.hpp"
#include "vicsek/vsgraph.hpp"

using json = nlohmann::ordered_json;
using namespace vicsek;

namespace {

constexpr int kSchemaVersion = 1;

// fixed 12-significant-digit formatting keeps byte-identical outputs
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) { return std::stod(fmt(x)); }

json jnum(double x) { return json(round12(x)); }

struct Output {
  std::string path;
  void write(const std::string& text) const {
    if (path.empty() || path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << text;
  }
  void write_json(const json& j) const { write(j.dump(2) + "\n"); }
};

std::string series_name(Series s) { return s == Series::Zero ? "0" : "4/3"; }

json record_json(const EigenvalueRecord& r) {
  json j;
  j["value"] = jnum(r.value);
  j["series"] = series_name(r.series);
  j["birth_level"] = r.birth_level;
  j["word"] = r.word;
  j["multiplicity"] = r.multiplicity;
  return j;
}

std::string word_str(const std::vector<int>& w) {
  std::string s;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(w[i]);
  }
  return s;
}

std::vector<int> parse_word(const std::string& s) {
  std::vector<int> w;
  if (s.empty()) return w;
  if (s.find('.') != std::string::npos || s.find('-') != std::string::npos) {
    std::string tok;
    std::stringstream ss(s);
    while (std::getline(ss, tok, s.find('.') != std::string::npos ? '.' : '-'))
      if (!tok.empty()) w.push_back(std::stoi(tok));
  } else {
    for (char c : s) {
      if (c < '0' || c > '9') throw std::invalid_argument("bad word digit: " + s);
      w.push_back(c - '0');
    }
  }
  return w;
}

// "F:0233,q:3" -> vertex of g; map word over 0..4n-4, corner over 1..4
int32_t parse_point_spec(const GraphApprox& g, const std::string& spec) {
  std::string fpart, qpart;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.rfind("F:", 0) == 0)
      fpart = tok.substr(2);
    else if (tok.rfind("q:", 0) == 0)
      qpart = tok.substr(2);
    else
      throw std::invalid_argument("bad point spec (want F:<word>,q:<corner>): " + spec);
  }
  if (qpart.empty()) throw std::invalid_argument("point spec needs q:<corner>");
  const int corner = std::stoi(qpart);
  if (corner < 1 || corner > 4) throw std::invalid_argument("corner index in 1..4");
  const auto word = parse_word(fpart);
  if (int(word.size()) > g.level)
    throw std::invalid_argument("point word longer than graph level");
  const int c = g.params.contraction();
  int64_t ox = 0, oy = 0;
  for (int j : word) {
    const auto t = map_translation(g.params, j);
    ox = ox * c + t.first;
    oy = oy * c + t.second;
  }
  int64_t scale = 1;
  for (int i = 0; i < g.level - int(word.size()); ++i) scale *= c;
  static constexpr int64_t qx[4] = {0, 1, 1, 0};
  static constexpr int64_t qy[4] = {0, 0, 1, 1};
  return g.vertex_at((ox + qx[corner - 1]) * scale, (oy + qy[corner - 1]) * scale);
}

SkeletonPoint parse_skeleton(const std::string& spec) {
  SkeletonPoint p;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.rfind("arm:", 0) == 0)
      p.arm = std::stoi(tok.substr(4));
    else if (tok.rfind("s:", 0) == 0)
      p.s = std::stod(tok.substr(2));
    else if (tok.rfind("off:", 0) == 0)
      p.offset = std::stod(tok.substr(4));
    else if (tok.rfind("path:", 0) == 0)
      p.branch_path = parse_word(tok.substr(5));
    else
      throw std::invalid_argument("bad skeleton point spec: " + spec);
  }
  return p;
}

std::string field_csv(const GraphApprox& g, const std::vector<std::pair<std::string, Vec>>& cols) {
  std::string s = "vertex_x,vertex_y";
  for (const auto& [name, v] : cols) s += "," + name;
  s += "\n";
  const double S = double(g.scale);
  for (int64_t i = 0; i < g.vertex_count(); ++i) {
    s += fmt(double(g.vx[size_t(i)]) / S) + "," + fmt(double(g.vy[size_t(i)]) / S);
    for (const auto& [name, v] : cols) s += "," + fmt(v[i]);
    s += "\n";
  }
  return s;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0 && hi > lo && points >= 2)) throw std::invalid_argument("bad grid");
  std::vector<double> out;
  for (int i = 0; i < points; ++i)
    out.push_back(lo * std::pow(hi / lo, double(i) / (points - 1)));
  return out;
}

json fit_json(const SinusoidFit& f) {
  json j;
  j["a"] = jnum(f.a);
  j["b"] = jnum(f.b);
  j["c"] = jnum(f.c);
  j["d"] = jnum(f.d);
  j["rms"] = jnum(f.rms);
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral decimation on the Vicsek fractals"};
  app.require_subcommand(1);
  app.footer(
      "Budgets: VICSEK_MAX_VERTICES (graph build, default 8e6) and\n"
      "VICSEK_DENSE_BUDGET (dense eigensolver, default 2000) override via the\n"
      "environment. Exit codes: 0 ok, 2 validation error, 3 budget exceeded.");

  int n = 2;
  std::string output, format = "json";
  app.add_option("--n", n, "family parameter n >= 2")->capture_default_str();
  app.add_option("--output,-o", output, "output path (default stdout)");
  app.add_option("--format", format, "csv or json")->capture_default_str();

  auto* sc_spectrum = app.add_subcommand("spectrum", "enumerate the eigenvalue table");
  int depth = 3;
  bool use_brute = false;
  sc_spectrum->add_option("--depth", depth, "enumeration depth k")->capture_default_str();
  sc_spectrum->add_flag("--brute", use_brute, "use the direct word-enumeration oracle");

  auto* sc_eig = app.add_subcommand("eigenfunction", "build an eigenspace basis on V_M");
  std::string series_s = "0", word_s;
  int birth = 0, level = 3;
  bool ortho = false;
  sc_eig->add_option("--series", series_s, "0 or 4/3")->capture_default_str();
  sc_eig->add_option("--birth", birth, "birth level (4/3-series)")->capture_default_str();
  sc_eig->add_option("--word", word_s, "branch word, e.g. 3-2 or 32");
  sc_eig->add_option("--level", level, "target level M")->capture_default_str();
  sc_eig->add_flag("--orthonormal", ortho, "orthonormalize to unit fractal norm");

  auto* sc_heat = app.add_subcommand("heat", "center-sourced heat kernel");
  std::string ts_s = "0.01";
  int M = 4, kdepth = 6;
  bool normalized = false, scaling_report = false;
  std::string balls_s;
  sc_heat->add_option("--t", ts_s, "comma-separated times")->capture_default_str();
  sc_heat->add_option("--level", M, "mesh level M")->capture_default_str();
  sc_heat->add_option("--depth", kdepth, "spectral depth k")->capture_default_str();
  sc_heat->add_flag("--normalized", normalized, "emit H(t,x) = h/h(t,q0,q0)");
  sc_heat->add_option("--balls", balls_s, "thresholds: emit heatball regions as JSON");
  sc_heat->add_flag("--scaling-report", scaling_report,
                    "report sup |H(t,x) - H(t/rho, F0 x)| over the diagonal");

  auto* sc_trace = app.add_subcommand("trace", "heat trace and log-periodic rescaling");
  double tmin = 1e-7, tmax = 1e-3;
  int points = 200;
  bool do_fit = false, center_trace = false;
  int trace_depth = 7;
  sc_trace->add_option("--depth", trace_depth, "spectral depth")->capture_default_str();
  sc_trace->add_option("--tmin", tmin, "")->capture_default_str();
  sc_trace->add_option("--tmax", tmax, "")->capture_default_str();
  sc_trace->add_option("--points", points, "")->capture_default_str();
  sc_trace->add_flag("--fit", do_fit, "fit a + b sin(c log t + d) (json only)");
  sc_trace->add_flag("--center", center_trace, "t^alpha h(t,q0,q0) instead of the trace");

  auto* sc_wave = app.add_subcommand("wave", "center-sourced wave propagator");
  std::string wts_s = "0.1", eps_s;
  int wM = 4, wdepth = 6;
  bool width_mode = false, diag_only = false, stability = false;
  double wtmin = 0.05, wtmax = 1.0;
  int wpoints = 20;
  sc_wave->add_option("--t", wts_s, "comma-separated times")->capture_default_str();
  sc_wave->add_option("--level", wM, "mesh level M")->capture_default_str();
  sc_wave->add_option("--depth", wdepth, "spectral depth k")->capture_default_str();
  sc_wave->add_flag("--width", width_mode, "emit width(t) for each --eps");
  sc_wave->add_option("--eps", eps_s, "width thresholds, comma separated");
  sc_wave->add_flag("--diagonal", diag_only, "restrict width to the diagonal");
  sc_wave->add_option("--tmin", wtmin, "width grid start")->capture_default_str();
  sc_wave->add_option("--tmax", wtmax, "width grid end")->capture_default_str();
  sc_wave->add_option("--points", wpoints, "width grid size")->capture_default_str();
  sc_wave->add_flag("--stability", stability, "L2 distances between depth m and m-1");

  auto* sc_proj = app.add_subcommand("project", "0-series projection kernel K_k(x,.)");
  std::string point_s;
  int pdepth = 2, pM = 4;
  long long pvertex = -1;
  bool max_abs = false;
  sc_proj->add_option("--depth", pdepth, "segment depth k")->capture_default_str();
  sc_proj->add_option("--level", pM, "mesh level M")->capture_default_str();
  sc_proj->add_option("--point", point_s, "source point, e.g. F:0233,q:3");
  sc_proj->add_option("--vertex", pvertex, "source vertex index");
  sc_proj->add_flag("--max-abs", max_abs, "emit max_x int |K_k(x,y)| dmu(y)");

  auto* sc_weyl = app.add_subcommand("weyl", "eigenvalue counting and Weyl ratios");
  int wy_depth = 4, wy_points = 400, special_j = 0;
  bool normalized_weyl_mode = false;
  sc_weyl->add_option("--depth", wy_depth, "")->capture_default_str();
  sc_weyl->add_option("--points", wy_points, "")->capture_default_str();
  sc_weyl->add_flag("--normalized", normalized_weyl_mode, "emit (s, wtilde) over one period");
  sc_weyl->add_option("--special", special_j, "emit the closed-form values at j");

  auto* sc_gaps = app.add_subcommand("gaps", "certified ratio gaps in [1, rho]");
  int ell = 1;
  double gpoint = -1;
  sc_gaps->add_option("--ell", ell, "word length")->capture_default_str();
  sc_gaps->add_option("--point", gpoint, "search only the gap containing this point");

  auto* sc_cluster = app.add_subcommand("cluster", "spectral clustering certificate");
  int ccount = 0;
  double ceps = 1e-3;
  sc_cluster->add_option("--count", ccount, "demo: produce this many clustered eigenvalues");
  sc_cluster->add_option("--eps", ceps, "demo interval length")->capture_default_str();

  auto* sc_green = app.add_subcommand("green", "closed-form Green's function");
  std::string y_s, x_s;
  int gM = 3;
  long long y_vertex = -1;
  int verify_grid = 0;
  sc_green->add_option("--level", gM, "mesh level for the field")->capture_default_str();
  sc_green->add_option("--y", y_s, "source, e.g. arm:1,s:0.5[,off:0.25[,path:1-2]]");
  sc_green->add_option("--y-vertex", y_vertex, "source as a vertex index");
  sc_green->add_option("--x", x_s, "evaluate G(x, y) only (json)");
  sc_green->add_option("--verify-grid", verify_grid,
                       "emit residuals of the defining equations on an NxN (s,t) grid");

  auto* sc_arm = app.add_subcommand("arm", "tridiagonal arm reduction on the level-1 diagonal");
  std::string arm_series = "fourthirds";
  bool with_vectors = false;
  sc_arm->add_option("--series", arm_series, "zero | fourthirds | interval-odd | interval-even")
      ->capture_default_str();
  sc_arm->add_flag("--vectors", with_vectors, "include eigenvectors");

  auto* sc_conv = app.add_subcommand("convergence", "limits toward the crossed lines");
  std::string ns_s = "8,16,32,64", conv_series = "4/3";
  int conv_j = 1, psi_grid = 0;
  sc_conv->add_option("--ns", ns_s, "comma-separated n list")->capture_default_str();
  sc_conv->add_option("--series", conv_series, "0 or 4/3")->capture_default_str();
  sc_conv->add_option("--j", conv_j, "eigenvalue index")->capture_default_str();
  sc_conv->add_option("--psi-bounds", psi_grid,
                      "emit max (psi(t)-t)/t^2 per n on a grid of this size instead");

  for (CLI::App* s : {sc_spectrum, sc_eig, sc_heat, sc_trace, sc_wave, sc_proj, sc_weyl,
                      sc_gaps, sc_cluster, sc_green, sc_arm, sc_conv})
    s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Output out{output};
  try {
    const VicsekParams params{n};

    if (*sc_spectrum) {
      DecimationSystem sys{params};
      const SpectrumTable t = use_brute ? brute_enumerate(sys, depth) : enumerate_spectrum(sys, depth);
      if (format == "csv") {
        std::string s = "value,series,birth_level,word,multiplicity\n";
        for (const auto& r : t.records)
          s += fmt(r.value) + "," + series_name(r.series) + "," + std::to_string(r.birth_level) +
               "," + word_str(r.word) + "," + std::to_string(r.multiplicity) + "\n";
        out.write(s);
      } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["n"] = n;
        j["depth"] = depth;
        j["records"] = json::array();
        for (const auto& r : t.records) j["records"].push_back(record_json(r));
        out.write_json(j);
      }
      return 0;
    }

    if (*sc_eig) {
      DecimationSystem sys{params};
      EigenvalueRecord rec;
      rec.series = (series_s == "0") ? Series::Zero : Series::FourThirds;
      rec.birth_level = birth;
      rec.word = parse_word(word_s);
      rec.multiplicity = 1;
      if (rec.series == Series::FourThirds) {
        int64_t m = 1;
        for (int i = 0; i < birth; ++i) m *= params.num_maps();
        rec.multiplicity = 2 * m + 1;
      }
      GraphHierarchy h(params, level);
      long double v = rec.series == Series::Zero ? 0.0L : 4.0L / 3.0L;
      for (int w : rec.word) v = sys.branch(w, v);
      rec.value =
          double(std::pow((long double)params.rho(), rec.birth_level + double(rec.word.size())) *
                 sys.psi(v));
      EigenBasis basis = build_eigenfunctions(sys, rec, level, h);
      if (ortho) basis = orthonormalize(sys, h.at(level), basis);
      if (format == "csv") {
        std::vector<std::pair<std::string, Vec>> cols;
        for (Eigen::Index c = 0; c < basis.funcs.cols(); ++c)
          cols.emplace_back("value" + std::to_string(c), basis.funcs.col(c));
        out.write(field_csv(h.at(level), cols));
      } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["record"] = record_json(rec);
        j["level"] = level;
        j["members"] = json::array();
        for (Eigen::Index c = 0; c < basis.funcs.cols(); ++c) {
          const auto nc = fractal_norm_and_center(sys, rec, h.at(level), basis.funcs.col(c));
          json m;
          m["norm_sq"] = jnum(nc.norm_sq);
          m["center_value"] = jnum(nc.center);
          m["values"] = json::array();
          for (int64_t i = 0; i < basis.funcs.rows(); ++i)
            m["values"].push_back(jnum(basis.funcs(i, c)));
          j["members"].push_back(std::move(m));
        }
        out.write_json(j);
      }
      return 0;
    }

    if (*sc_heat) {
      DecimationSystem sys{params};
      const auto ts = parse_list(ts_s);
      GraphHierarchy h(params, scaling_report ? M + 1 : M);
      const auto basis = center_kernel_basis(sys, h, scaling_report ? M + 1 : M, kdepth);
      if (scaling_report || !balls_s.empty() || format == "json") {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["n"] = n;
        j["level"] = M;
        j["depth"] = kdepth;
        j["fields"] = json::array();
        for (double t : ts) {
          const auto hf = heat_center(basis, t);
          json e;
          e["t"] = jnum(t);
          e["center"] = jnum(hf.center);
          e["tail_bound"] = jnum(hf.h.tail_bound);
          if (!balls_s.empty()) {
            e["heatballs"] = json::array();
            for (double s : parse_list(balls_s)) {
              const auto reg = level_set_region(h.at(hf.h.level), hf.h.values, s);
              json b;
              b["s"] = jnum(s);
              b["size"] = int64_t(reg.vertices.size());
              b["components"] = reg.components;
              e["heatballs"].push_back(std::move(b));
            }
          }
          if (scaling_report) {
            const auto& gM1 = h.at(M + 1);
            const auto& gM0 = h.at(M);
            const auto hf2 = heat_center(basis, t / params.rho());
            const auto diag = diagonal_vertices(gM0, 0);
            double sup = 0;
            const int c = params.contraction();
            for (int32_t vtx : diag) {
              const auto v1 = gM1.vertex_at(c * gM0.vx[size_t(vtx)], c * gM0.vy[size_t(vtx)]);
              const auto w1 = gM1.vertex_at(gM0.vx[size_t(vtx)] + gM0.scale,
                                            gM0.vy[size_t(vtx)] + gM0.scale);
              sup = std::max(sup, std::abs(hf.normalized[v1] - hf2.normalized[w1]));
            }
            e["scaling_sup_diag"] = jnum(sup);
          }
          if (format == "json") {
            e["values"] = json::array();
            for (int64_t i = 0; i < hf.h.values.size(); ++i)
              e["values"].push_back(jnum(normalized ? hf.normalized[i] : hf.h.values[i]));
          }
          j["fields"].push_back(std::move(e));
        }
        out.write_json(j);
      } else {
        std::vector<std::pair<std::string, Vec>> cols;
        for (double t : ts) {
          const auto hf = heat_center(basis, t);
          cols.emplace_back("t" + fmt(t), normalized ? hf.normalized : hf.h.values);
        }
        out.write(field_csv(h.at(M), cols));
      }
      return 0;
    }

    if (*sc_trace) {
      DecimationSystem sys{params};
      const auto ts = log_grid(tmin, tmax, points);
      const auto samples = center_trace ? center_heat_samples(sys, trace_depth, ts)
                                        : heat_trace(sys, trace_depth, ts);
      if (format == "csv") {
        std::string s = "t,trace,scaled\n";
        for (const auto& smp : samples)
          s += fmt(smp.t) + "," + fmt(smp.trace) + "," + fmt(smp.scaled) + "\n";
        out.write(s);
      } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["n"] = n;
        j["depth"] = trace_depth;
        j["samples"] = json::array();
        for (const auto& smp : samples)
          j["samples"].push_back(json::array({jnum(smp.t), jnum(smp.trace), jnum(smp.scaled)}));
        if (do_fit) {
          std::vector<double> ys;
          for (const auto& smp : samples) ys.push_back(smp.scaled);
          j["fit"] = fit_json(fit_log_periodic(ts, ys));
        }
        out.write_json(j);
      }
      return 0;
    }

    if (*sc_wave) {
      DecimationSystem sys{params};
      GraphHierarchy h(params, wM);
      if (width_mode) {
        const auto basis = center_kernel_basis(sys, h, wM, wdepth);
        const auto epss = eps_s.empty() ? std::vector<double>{0.01, 0.05, 0.1} : parse_list(eps_s);
        std::string s = "t";
        for (double e : epss) s += ",width_eps" + fmt(e);
        s += "\n";
        for (int i = 0; i < wpoints; ++i) {
          const double t = wtmin + (wtmax - wtmin) * i / std::max(1, wpoints - 1);
          const auto wf = wave_center(basis, t);
          s += fmt(t);
          for (double e : epss) s += "," + fmt(abs_width(h.at(wM), wf.values, e, diag_only));
          s += "\n";
        }
        out.write(s);
        return 0;
      }
      if (stability) {
        std::string s = "t,depth,l2_distance\n";
        const auto ts = parse_list(wts_s);
        std::vector<CenterKernelBasis> bases;
        for (int k = 1; k <= wdepth; ++k) bases.push_back(center_kernel_basis(sys, h, wM, k));
        for (double t : ts)
          for (int k = 2; k <= wdepth; ++k) {
            const auto wa = wave_center(bases[size_t(k - 1)], t);
            const auto wb = wave_center(bases[size_t(k - 2)], t);
            FunctionOnGraph d{wM, wa.values - wb.values};
            s += fmt(t) + "," + std::to_string(k) + "," +
                 fmt(std::sqrt(inner_product(h.at(wM), d, d))) + "\n";
          }
        out.write(s);
        return 0;
      }
      const auto basis = center_kernel_basis(sys, h, wM, wdepth);
      std::vector<std::pair<std::string, Vec>> cols;
      for (double t : parse_list(wts_s))
        cols.emplace_back("t" + fmt(t), wave_center(basis, t).values);
      out.write(field_csv(h.at(wM), cols));
      return 0;
    }

    if (*sc_proj) {
      DecimationSystem sys{params};
      GraphHierarchy h(params, pM);
      const auto basis = center_kernel_basis(sys, h, pM, pdepth);
      if (max_abs) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["depth"] = pdepth;
        j["level"] = pM;
        j["max_abs_integral"] = jnum(max_abs_projection_integral(basis, h.at(pM)));
        out.write_json(j);
        return 0;
      }
      const int32_t x =
          !point_s.empty() ? parse_point_spec(h.at(pM), point_s) : int32_t(pvertex);
      const auto pf = projection_kernel(basis, x, h.at(pM));
      if (format == "csv") {
        out.write(field_csv(h.at(pM), {{"value", pf.k.values}}));
      } else {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["depth"] = pdepth;
        j["level"] = pM;
        j["x"] = x;
        j["integral"] = jnum(pf.integral);
        j["abs_integral"] = jnum(pf.abs_integral);
        j["values"] = json::array();
        for (int64_t i = 0; i < pf.k.values.size(); ++i)
          j["values"].push_back(jnum(pf.k.values[i]));
        out.write_json(j);
      }
      return 0;
    }

    if (*sc_weyl) {
      DecimationSystem sys{params};
      if (special_j > 0) {
        const auto sv = weyl_special_values(sys, special_j);
        json j;
        j["schema_version"] = kSchemaVersion;
        j["n"] = n;
        j["j"] = special_j;
        j["lambda_2jm1"] = jnum(sv.lambda_2jm1);
        j["w_minus"] = jnum(sv.w_minus);
        j["w_at"] = jnum(sv.w_at);
        j["lambda_2j"] = jnum(sv.lambda_2j);
        j["w_2j"] = jnum(sv.w_2j);
        j["wtilde0_ratio"] =
            jnum(normalized_weyl_plateau(sys, 0, true) / normalized_weyl_plateau(sys, 0, false));
        out.write_json(j);
        return 0;
      }
      const SpectrumTable t = enumerate_spectrum(sys, wy_depth);
      if (normalized_weyl_mode) {
        std::string s = "s,wtilde\n";
        for (int i = 0; i < wy_points; ++i) {
          const double sv = double(i) / wy_points;
          s += fmt(sv) + "," + fmt(normalized_weyl(t, sys, sv)) + "\n";
        }
        out.write(s);
        return 0;
      }
      const double lam1 = t.records[1].value;
      const auto xs = log_grid(lam1 * 0.5, t.records.back().value, wy_points);
      std::string s = "x,count,ratio\n";
      for (const auto& w : counting_and_weyl(t, xs))
        s += fmt(w.x) + "," + std::to_string(w.count) + "," + fmt(w.ratio) + "\n";
      out.write(s);
      return 0;
    }

    if (*sc_gaps) {
      DecimationSystem sys{params};
      json j;
      j["schema_version"] = kSchemaVersion;
      j["n"] = n;
      j["ell"] = ell;
      if (gpoint > 0) {
        const auto g = gap_containing(sys, ell, gpoint);
        j["point"] = jnum(gpoint);
        j["gap"] = g ? json::array({jnum(g->lo), jnum(g->hi)}) : json();
      } else {
        const auto cert = ratio_gaps(sys, ell);
        j["gaps"] = json::array();
        for (const auto& g : cert.gaps)
          j["gaps"].push_back(json::array({jnum(g.lo), jnum(g.hi)}));
        j["covering_interval_count"] = cert.covering_interval_count;
      }
      out.write_json(j);
      return 0;
    }

    if (*sc_cluster) {
      DecimationSystem sys{params};
      const auto c = clustering_certificate(sys);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["n"] = n;
      j["t"] = jnum(c.t);
      j["rprime"] = jnum(c.rprime);
      j["rho"] = jnum(c.rho);
      j["certified"] = c.certified;
      if (ccount > 0) {
        const auto d = cluster_demo(sys, ccount, ceps);
        json dj;
        dj["achieved"] = d.achieved;
        dj["iterations"] = d.iterations;
        dj["spread"] = jnum(d.spread);
        dj["log10_values"] = json::array();
        for (double v : d.log10_values) dj["log10_values"].push_back(jnum(v));
        j["demo"] = std::move(dj);
      }
      out.write_json(j);
      return 0;
    }

    if (*sc_green) {
      if (verify_grid > 0) {
        json j;
        j["schema_version"] = kSchemaVersion;
        double worst = 0;
        for (int i = 1; i < verify_grid; ++i)
          for (int k = 0; k < verify_grid; ++k) {
            const auto v = green_verify(double(i) / verify_grid, double(k) / verify_grid);
            for (double r : v.residuals) worst = std::max(worst, std::abs(r));
          }
        j["grid"] = verify_grid;
        j["max_residual"] = jnum(worst);
        out.write_json(j);
        return 0;
      }
      if (!x_s.empty()) {
        json j;
        j["schema_version"] = kSchemaVersion;
        j["G"] = jnum(green_eval(params, parse_skeleton(x_s), parse_skeleton(y_s)));
        out.write_json(j);
        return 0;
      }
      const GraphApprox g = build_graph(params, gM);
      const FunctionOnGraph f = y_vertex >= 0 ? green_field_at_vertex(g, int32_t(y_vertex))
                                              : green_field(g, parse_skeleton(y_s));
      out.write(field_csv(g, {{"value", f.values}}));
      return 0;
    }

    if (*sc_arm) {
      ArmSeries s;
      if (arm_series == "zero")
        s = ArmSeries::Zero;
      else if (arm_series == "fourthirds")
        s = ArmSeries::FourThirds;
      else if (arm_series == "interval-odd")
        s = ArmSeries::IntervalOdd;
      else if (arm_series == "interval-even")
        s = ArmSeries::IntervalEven;
      else
        throw std::invalid_argument("unknown arm series: " + arm_series);
      const auto sysarm = arm_system(params, s);
      json j;
      j["schema_version"] = kSchemaVersion;
      j["n"] = n;
      j["series"] = arm_series;
      j["lambdas"] = json::array();
      for (double l : sysarm.lambdas) j["lambdas"].push_back(jnum(l));
      if (with_vectors) {
        j["vectors"] = json::array();
        for (Eigen::Index c = 0; c < sysarm.vectors.cols(); ++c) {
          json col = json::array();
          for (Eigen::Index r = 0; r < sysarm.vectors.rows(); ++r)
            col.push_back(jnum(sysarm.vectors(r, c)));
          j["vectors"].push_back(std::move(col));
        }
      }
      out.write_json(j);
      return 0;
    }

    if (*sc_conv) {
      json j;
      j["schema_version"] = kSchemaVersion;
      std::vector<int> ns;
      for (double v : parse_list(ns_s)) ns.push_back(int(v));
      if (psi_grid > 0) {
        j["psi_bounds"] = json::array();
        for (const auto& b : psi_bounds(ns, psi_grid)) {
          json e;
          e["n"] = b.n;
          e["c"] = jnum(b.c);
          j["psi_bounds"].push_back(std::move(e));
        }
        out.write_json(j);
        return 0;
      }
      const auto cc =
          cross_limit_check(conv_j, conv_series == "0" ? Series::Zero : Series::FourThirds, ns);
      j["j"] = conv_j;
      j["series"] = conv_series;
      j["rows"] = json::array();
      for (const auto& r : cc.rows) {
        json e;
        e["n"] = r.n;
        e["lambda"] = jnum(r.lambda);
        e["limit"] = jnum(r.limit);
        e["error"] = jnum(r.error);
        j["rows"].push_back(std::move(e));
      }
      j["fitted_order"] = jnum(cc.fitted_order);
      out.write_json(j);
      return 0;
    }

    throw std::invalid_argument("no subcommand");
  } catch (const budget_error& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
