#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "jetgeom/expr.hpp"
#include "jetgeom/levelset.hpp"

namespace jetgeom::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kBlowUp = 3,
  kMetricDomain = 4,
};

/// Raised for malformed flag values; maps to kUsage.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ModelOptions {
  std::string model;
  std::vector<std::string> params;  // name=value
};

struct AnalyzeOptions {
  ModelOptions model;
  std::string point;
  bool json = false;
  std::string out;
};

struct FlowOptions {
  ModelOptions model;
  std::string from;
  double t0 = 0.0;
  double t1 = 10.0;
  double dt = 0.01;
  std::string out;
};

struct GeodesicOptions {
  ModelOptions model;
  std::string metric;
  std::string from;
  std::string v0;
  double t0 = 0.0;
  double t1 = 10.0;
  double dt = 0.01;
  std::string out;
};

struct LevelsetOptions {
  ModelOptions model;
  double level = 0.0;
  bool paper_normalization = false;
  std::string bounds;
  std::size_t res = 128;
  std::string format = "csv";
  std::string out;
};

struct CheckOptions {
  ModelOptions model;
  std::size_t samples = 100;
  std::uint64_t seed = 1;
  double tol = 1e-8;
  std::string out;
  bool inject_oracle_fault = false;
};

std::vector<double> parse_reals(const std::string& text, const std::string& flag);
Env parse_params(const std::vector<std::string>& assignments);

struct AxisBound {
  std::string name;
  AxisRange range;
};
std::vector<AxisBound> parse_bounds(const std::string& text);

// Each command writes its artifact to `out` (or stdout when empty) and
// diagnostics to `err`, and returns the process exit code. Library errors
// propagate; run_guarded maps them to exit codes.
int run_analyze(const AnalyzeOptions& opt, std::ostream& err);
int run_flow(const FlowOptions& opt, std::ostream& err);
int run_geodesic(const GeodesicOptions& opt, std::ostream& err);
int run_levelset(const LevelsetOptions& opt, std::ostream& err);
int run_check(const CheckOptions& opt, std::ostream& err);

int run_guarded(const std::function<int()>& command, std::ostream& err);

}  // namespace jetgeom::cli
