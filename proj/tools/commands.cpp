#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "jetgeom/dynamics.hpp"
#include "jetgeom/geometry.hpp"
#include "jetgeom/model_config.hpp"
#include "jetgeom/models.hpp"
#include "jetgeom/riemann.hpp"
#include "writers.hpp"

namespace jetgeom::cli {

namespace {

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::optional<double> to_real(const std::string& raw) {
  const std::string s = trim(raw);
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Writes to a file opened in binary mode (LF line endings), or to stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::runtime_error("failed to write output");
  }

 private:
  std::ofstream file_;
};

LoadedModel load(const ModelOptions& opt) {
  if (opt.model.empty()) throw UsageError("--model is required");
  return load_model(opt.model, parse_params(opt.params));
}

Vector point_for(const VectorField& f, const std::string& text, const std::string& flag) {
  const std::vector<double> v = parse_reals(text, flag);
  if (v.size() != f.dimension()) {
    throw UsageError(flag + " has " + std::to_string(v.size()) + " values but the model has " +
                     std::to_string(f.dimension()) + " variables");
  }
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string describe(const VectorField& f, std::span<const double> x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ", ";
    s += f.variables()[i] + "=" + format_real(x[i]);
  }
  return s + ")";
}

// ---------------------------------------------------------------------------
// analyze

// Adding 0.0 turns negative zeros into zeros for display.
void print_matrix(std::ostream& out, const Matrix& m) {
  std::vector<std::string> cells;
  std::size_t width = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      cells.push_back(format_real(m(i, j) + 0.0));
      width = std::max(width, cells.back().size());
    }
  std::size_t c = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << ' ';
    for (Eigen::Index j = 0; j < m.cols(); ++j, ++c) out << ' ' << std::string(width - cells[c].size(), ' ') << cells[c];
    out << '\n';
  }
}

nlohmann::ordered_json matrix_json(const Matrix& m) {
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j) + 0.0);
    rows.push_back(std::move(row));
  }
  return rows;
}

constexpr const char* kCartanNote = "the generalized Cartan connection vanishes identically";
constexpr const char* kCurvatureNote = "its curvature vanishes identically";

void write_report_text(std::ostream& out, const LoadedModel& m, const GeometryReport& r) {
  const VectorField& f = m.field;
  const std::size_t n = f.dimension();
  out << "model     " << m.name << '\n';
  out << "point     " << describe(f, as_span(r.point)) << '\n';
  if (!f.parameters().empty()) {
    out << "params   ";
    for (const auto& [k, v] : f.parameters()) out << ' ' << k << '=' << format_real(v);
    out << '\n';
  }
  out << "\njacobian dX^i/dx^j\n";
  print_matrix(out, r.jacobian);
  out << "\nnonlinear connection N = -(J - J^T)/2\n";
  print_matrix(out, r.connection);
  out << "\nelectromagnetic form F = -N\n";
  print_matrix(out, r.em_form);
  out << "\ntorsion R[i][j][k] = dN[i][j]/dx^k";
  if (r.torsion.max_abs() == 0.0) out << " (all components zero)";
  out << '\n';
  for (std::size_t k = 0; k < n; ++k) {
    out << "  k = " << k + 1 << " (" << f.variables()[k] << ")\n";
    print_matrix(out, r.torsion.slice(k));
  }
  out << "\nyang_mills_energy     " << format_real(r.yang_mills) << '\n';
  out << "maxwell_residual_max  " << format_real(r.maxwell_residual_max) << '\n';
  out << "\nnote: " << kCartanNote << ",\n      " << kCurvatureNote << ".\n";
}

void write_report_json(std::ostream& out, const LoadedModel& m, const GeometryReport& r) {
  const VectorField& f = m.field;
  nlohmann::ordered_json doc;
  doc["model"] = m.name;
  doc["variables"] = f.variables();
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : f.parameters()) params[k] = v;
  doc["parameters"] = params;
  doc["point"] = std::vector<double>(r.point.data(), r.point.data() + r.point.size());
  doc["jacobian"] = matrix_json(r.jacobian);
  doc["connection"] = matrix_json(r.connection);
  doc["em_form"] = matrix_json(r.em_form);
  auto torsion = nlohmann::ordered_json::array();
  const std::size_t n = f.dimension();
  for (std::size_t i = 0; i < n; ++i) {
    auto plane = nlohmann::ordered_json::array();
    for (std::size_t j = 0; j < n; ++j) {
      auto line = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < n; ++k) line.push_back(r.torsion(i, j, k) + 0.0);
      plane.push_back(std::move(line));
    }
    torsion.push_back(std::move(plane));
  }
  doc["torsion"] = std::move(torsion);
  doc["yang_mills"] = r.yang_mills;
  doc["maxwell_residual_max"] = r.maxwell_residual_max;
  doc["notes"] = {kCartanNote, kCurvatureNote};
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// check

struct PropertyResult {
  std::string name;
  double worst = 0.0;
  bool failed = false;
  std::string detail;
};

class CheckSuite {
 public:
  CheckSuite(const LoadedModel& m, double tol) : m_(m), tol_(tol) {}

  PropertyResult& property(const std::string& name) {
    for (auto& p : results_)
      if (p.name == name) return p;
    results_.push_back(PropertyResult{name, 0.0, false, {}});
    return results_.back();
  }

  void observe(const std::string& name, double value, std::span<const double> x, const std::string& what) {
    PropertyResult& p = property(name);
    p.worst = std::max(p.worst, value);
    if (!p.failed && !(value <= tol_)) {
      p.failed = true;
      p.detail = "at " + describe(m_.field, x) + ": " + what;
    }
  }

  const std::vector<PropertyResult>& results() const { return results_; }

 private:
  const LoadedModel& m_;
  double tol_;
  std::vector<PropertyResult> results_;
};

std::vector<AxisRange> sample_box(const LoadedModel& m) {
  if (m.tbm) return {{0.5, 4.0}, {0.2, 2.0}, {-0.5, 0.5}};
  if (m.kaldor) return {{-3.0, 3.0}, {-3.0, 3.0}};
  return std::vector<AxisRange>(m.field.dimension(), AxisRange{-2.0, 2.0});
}

double rel_err(double a, double b) { return std::fabs(a - b) / (1.0 + std::max(std::fabs(a), std::fabs(b))); }

double max_rel_err(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) worst = std::max(worst, rel_err(a(i, j), b(i, j)));
  return worst;
}

std::string pair_text(const char* a, double va, const char* b, double vb) {
  return std::string(a) + "=" + format_real(va) + ", " + b + "=" + format_real(vb);
}

void check_point(CheckSuite& suite, const LoadedModel& m, const Vector& x, bool fault) {
  const VectorField& f = m.field;
  const std::size_t n = f.dimension();
  const auto xs = as_span(x);
  const Matrix N = nonlinear_connection(f, xs);
  const Matrix F = em_form(f, xs);
  const Tensor3 R = torsion(f, xs);
  const Tensor3 M = maxwell_residual(f, xs);

  double anti = 0.0, fn = 0.0, tor = 0.0;
  std::string anti_what, fn_what, tor_what;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const auto I = static_cast<Eigen::Index>(i), J = static_cast<Eigen::Index>(j);
      if (std::fabs(N(I, J) + N(J, I)) > anti) {
        anti = std::fabs(N(I, J) + N(J, I));
        anti_what = pair_text("N[i][j]", N(I, J), "N[j][i]", N(J, I));
      }
      if (std::fabs(F(I, J) + N(I, J)) > fn) {
        fn = std::fabs(F(I, J) + N(I, J));
        fn_what = pair_text("F", F(I, J), "N", N(I, J));
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (std::fabs(R(i, j, k) + R(j, i, k)) > tor) {
          tor = std::fabs(R(i, j, k) + R(j, i, k));
          tor_what = pair_text("R[i][j][k]", R(i, j, k), "R[j][i][k]", R(j, i, k));
        }
      }
    }
  suite.observe("connection-antisymmetry", anti, xs, anti_what);
  suite.observe("em-form-equals-minus-connection", fn, xs, fn_what);
  suite.observe("torsion-antisymmetry", tor, xs, tor_what);
  suite.observe("maxwell-identity", M.max_abs(), xs, "cyclic residual=" + format_real(M.max_abs()));

  std::optional<Matrix> oracle_N;
  std::optional<std::vector<Matrix>> oracle_R;
  std::optional<double> oracle_E;
  if (m.kaldor) {
    oracle_N = models::kaldor_connection_oracle(*m.kaldor, x(0), x(1));
    const Tensor3 T = models::kaldor_torsion_oracle(*m.kaldor, x(0), x(1));
    oracle_R = std::vector<Matrix>{T.slice(0), T.slice(1)};
    oracle_E = models::kaldor_energy_oracle(*m.kaldor, x(0), x(1));
  } else if (m.tbm) {
    oracle_N = models::tbm_connection_oracle(*m.tbm, x(0), x(1), x(2));
    std::vector<Matrix> slices;
    for (int s = 1; s <= 3; ++s) slices.push_back(models::tbm_torsion_oracle(*m.tbm, x(0), x(1), x(2), s));
    oracle_R = std::move(slices);
    oracle_E = models::tbm_energy_oracle(*m.tbm, x(0), x(1), x(2));
  }
  if (oracle_N) {
    // Test hook: a deliberately wrong hand-written matrix.
    if (fault) (*oracle_N)(0, 1) += 1e-3;
    const double e = max_rel_err(N, *oracle_N);
    suite.observe("oracle-connection", e, xs,
                  pair_text("pipeline N[1][2]", N(0, 1), "oracle N[1][2]", (*oracle_N)(0, 1)) +
                      ", relative error=" + format_real(e));
    double te = 0.0;
    for (std::size_t k = 0; k < n; ++k) te = std::max(te, max_rel_err(R.slice(k), (*oracle_R)[k]));
    suite.observe("oracle-torsion", te, xs, "relative error=" + format_real(te));
    const double E = yang_mills_energy(f, xs);
    const double ee = rel_err(E, *oracle_E);
    suite.observe("oracle-yang-mills", ee, xs, pair_text("pipeline", E, "oracle", *oracle_E));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Flag parsing

std::vector<double> parse_reals(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    auto v = to_real(part);
    if (!v) throw UsageError(flag + ": '" + trim(part) + "' is not a finite real number");
    out.push_back(*v);
  }
  return out;
}

Env parse_params(const std::vector<std::string>& assignments) {
  Env env;
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects name=value, got '" + a + "'");
    const std::string name = trim(std::string_view(a).substr(0, eq));
    if (!is_identifier(name)) throw UsageError("--param: '" + name + "' is not an identifier");
    auto v = to_real(a.substr(eq + 1));
    if (!v) throw UsageError("--param " + name + ": value is not a finite real number");
    env[name] = *v;
  }
  return env;
}

std::vector<AxisBound> parse_bounds(const std::string& text) {
  std::vector<AxisBound> out;
  for (const auto& axis : split(text, ',')) {
    const auto parts = split(axis, ':');
    if (parts.size() != 3) throw UsageError("--bounds: expected name:lo:hi, got '" + trim(axis) + "'");
    const std::string name = trim(parts[0]);
    auto lo = to_real(parts[1]);
    auto hi = to_real(parts[2]);
    if (!is_identifier(name) || !lo || !hi) throw UsageError("--bounds: malformed axis '" + trim(axis) + "'");
    if (!(*lo < *hi)) throw UsageError("--bounds: axis '" + name + "' needs lo < hi");
    out.push_back({name, {*lo, *hi}});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands

int run_analyze(const AnalyzeOptions& opt, std::ostream&) {
  const LoadedModel m = load(opt.model);
  const Vector x = point_for(m.field, opt.point, "--point");
  const GeometryReport r = report(m.field, as_span(x));
  Sink sink(opt.out);
  if (opt.json) {
    write_report_json(sink.stream(), m, r);
  } else {
    write_report_text(sink.stream(), m, r);
  }
  sink.finish();
  return kOk;
}

int run_flow(const FlowOptions& opt, std::ostream& err) {
  const LoadedModel m = load(opt.model);
  const Vector x0 = point_for(m.field, opt.from, "--from");
  const IntegratorConfig cfg{opt.t0, opt.t1, opt.dt};
  cfg.validate();
  try {
    const Trajectory traj = integrate_first_order(m.field, as_span(x0), cfg);
    const double residual = verify_prolongation(m.field, traj);
    Sink sink(opt.out);
    write_trajectory_csv(sink.stream(), traj);
    sink.stream() << "# max_el_residual=" << format_real(residual) << '\n';
    sink.finish();
    return kOk;
  } catch (const BlowUpError& e) {
    Sink sink(opt.out);
    write_trajectory_csv(sink.stream(), e.partial());
    sink.stream() << "# blow-up at t=" << format_real(e.time()) << '\n';
    sink.finish();
    err << "error: " << e.what() << '\n';
    return kBlowUp;
  }
}

int run_geodesic(const GeodesicOptions& opt, std::ostream& err) {
  const LoadedModel m = load(opt.model);
  const VectorField& f = m.field;
  const Vector x0 = point_for(f, opt.from, "--from");
  const Vector v0 = opt.v0.empty() ? f.value(as_span(x0)) : point_for(f, opt.v0, "--v0");
  const IntegratorConfig cfg{opt.t0, opt.t1, opt.dt};
  cfg.validate();

  std::optional<MetricField> metric;
  if (!opt.metric.empty()) {
    metric = build_metric(read_model_config(opt.metric));
    if (metric->variables() != f.variables()) {
      throw UsageError("metric variables do not match the model variables");
    }
  }
  AccelerationFn accel;
  if (metric) {
    accel = [&](std::span<const double> x, std::span<const double> v) {
      return geometric_dynamics_acceleration(*metric, f, x, v);
    };
  } else {
    accel = [&](std::span<const double> x, std::span<const double> v) { return prolonged_acceleration(f, x, v); };
  }

  try {
    const Trajectory traj = integrate_second_order(accel, as_span(x0), as_span(v0), cfg);
    const double residual = verify_prolongation(f, traj);
    Sink sink(opt.out);
    write_trajectory_csv(sink.stream(), traj);
    sink.stream() << "# max_el_residual=" << format_real(residual) << '\n';
    sink.finish();
    return kOk;
  } catch (const BlowUpError& e) {
    Sink sink(opt.out);
    write_trajectory_csv(sink.stream(), e.partial());
    sink.stream() << "# blow-up at t=" << format_real(e.time()) << '\n';
    sink.finish();
    err << "error: " << e.what() << '\n';
    return kBlowUp;
  } catch (const PathDomainError& e) {
    Sink sink(opt.out);
    write_trajectory_csv(sink.stream(), e.partial());
    sink.stream() << "# metric domain error at t=" << format_real(e.time()) << '\n';
    sink.finish();
    err << "error: " << e.what() << '\n';
    return kMetricDomain;
  }
}

int run_levelset(const LevelsetOptions& opt, std::ostream&) {
  const LoadedModel m = load(opt.model);
  const VectorField& f = m.field;
  const std::size_t n = f.dimension();
  if (n != 2 && n != 3) throw UsageError("level sets need a 2-D or 3-D model, got " + std::to_string(n) + "-D");
  if (opt.bounds.empty()) throw UsageError("--bounds is required");
  const auto axes = parse_bounds(opt.bounds);
  if (axes.size() != n) throw UsageError("--bounds must list one axis per model variable");
  std::vector<AxisRange> ranges;
  for (std::size_t a = 0; a < n; ++a) {
    if (axes[a].name != f.variables()[a]) {
      throw UsageError("--bounds axis " + std::to_string(a + 1) + " is '" + axes[a].name + "', expected '" +
                       f.variables()[a] + "'");
    }
    ranges.push_back(axes[a].range);
  }
  if (opt.res < 2) throw UsageError("--res must be at least 2");
  const std::string& format = opt.format;
  if (n == 2 && format != "csv" && format != "svg") throw UsageError("2-D level sets are written as csv or svg");
  if (n == 3 && format != "obj") throw UsageError("3-D level sets are written as obj");

  const double level = opt.paper_normalization ? opt.level / 4.0 : opt.level;
  const ScalarGrid grid = sample_energy(f, ranges, std::vector<std::size_t>(n, opt.res));
  Sink sink(opt.out);
  if (n == 2) {
    const LevelSet ls = extract_contour_2d(grid, level);
    if (format == "csv") {
      write_segments_csv(sink.stream(), ls);
    } else {
      write_segments_svg(sink.stream(), ls, {f.variables()[0], f.variables()[1], ranges[0], ranges[1]});
    }
  } else {
    write_mesh_obj(sink.stream(), extract_isosurface_3d(grid, level));
  }
  sink.finish();
  return kOk;
}

int run_check(const CheckOptions& opt, std::ostream& err) {
  const LoadedModel m = load(opt.model);
  const VectorField& f = m.field;
  if (opt.samples == 0) throw UsageError("--samples must be positive");
  if (!(opt.tol > 0.0) || !std::isfinite(opt.tol)) throw UsageError("--tol must be positive");
  const std::vector<AxisRange> box = sample_box(m);
  std::mt19937_64 rng(opt.seed);
  CheckSuite suite(m, opt.tol);

  std::optional<Vector> start;
  std::size_t accepted = 0, skipped = 0;
  for (std::size_t attempt = 0; accepted < opt.samples && attempt < 20 * opt.samples; ++attempt) {
    Vector x(static_cast<Eigen::Index>(f.dimension()));
    for (std::size_t i = 0; i < f.dimension(); ++i) {
      x(static_cast<Eigen::Index>(i)) = std::uniform_real_distribution<double>(box[i].lo, box[i].hi)(rng);
    }
    try {
      check_point(suite, m, x, opt.inject_oracle_fault);
    } catch (const EvalError&) {
      ++skipped;
      continue;
    }
    if (!start) start = x;
    ++accepted;
  }

  Sink sink(opt.out);
  std::ostream& out = sink.stream();
  if (accepted == 0) {
    out << "FAIL sampling: no sample point could be evaluated\n";
    sink.finish();
    err << "check failed: sampling\n";
    return kCheckFailed;
  }
  {
    const VanishingTensor c = cartan_connection(f), k = curvature(f);
    double worst = 0.0;
    for (double v : c.dense()) worst = std::max(worst, std::fabs(v));
    for (double v : k.dense()) worst = std::max(worst, std::fabs(v));
    suite.observe("cartan-and-curvature-vanish", worst, as_span(*start), "nonzero component");
  }
  {
    std::string what;
    double residual = 0.0;
    try {
      const Trajectory traj = integrate_first_order(f, as_span(*start), {0.0, 1.0, 0.01});
      residual = verify_prolongation(f, traj);
      what = "max residual=" + format_real(residual);
    } catch (const BlowUpError& e) {
      residual = INFINITY;
      what = e.what();
    }
    suite.observe("on-shell-el-residual", residual, as_span(*start), what);
  }

  out << "model " << m.name << ", " << accepted << " points, seed " << opt.seed << ", tol " << format_real(opt.tol);
  if (skipped) out << ", " << skipped << " points skipped (evaluation failed)";
  out << '\n';
  const PropertyResult* first_failure = nullptr;
  for (const auto& p : suite.results()) {
    if (p.failed) {
      out << "FAIL " << p.name << " " << p.detail << '\n';
      if (!first_failure) first_failure = &p;
    } else {
      out << "PASS " << p.name << " max=" << format_real(p.worst) << '\n';
    }
  }
  out << (first_failure ? "result: FAIL\n" : "result: PASS\n");
  sink.finish();
  if (first_failure) {
    err << "check failed: " << first_failure->name << " " << first_failure->detail << '\n';
    return kCheckFailed;
  }
  return kOk;
}

int run_guarded(const std::function<int()>& command, std::ostream& err) {
  try {
    return command();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const MetricDomainError& e) {
    err << "error: " << e.what() << '\n';
    return kMetricDomain;
  } catch (const EvalError& e) {
    err << "error: evaluation failed: " << e.what() << '\n';
    return kBlowUp;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace jetgeom::cli
