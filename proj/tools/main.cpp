#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace jetgeom::cli;

void add_model_flags(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("--model", m.model, "built-in model (kaldor, tbm) or path to a JSON model file")->required();
  cmd->add_option("--param", m.params, "override a parameter, name=value (repeatable)");
}

void add_interval_flags(CLI::App* cmd, double& t0, double& t1, double& dt) {
  cmd->add_option("--t0", t0, "start time")->capture_default_str();
  cmd->add_option("--t1", t1, "end time")->capture_default_str();
  cmd->add_option("--dt", dt, "RK4 step; the last step is shortened to end at t1")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jet-space geometry of autonomous ODE systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "jetgeom 0.1.0");
  app.footer(
      "Exit codes: 0 success, 1 property check failed, 2 usage or schema error,\n"
      "3 numerical blow-up or evaluation failure, 4 metric domain error.\n"
      "Points are comma-separated reals; write --from=-1,2 when the first is negative.");

  AnalyzeOptions analyze;
  auto* a = app.add_subcommand("analyze", "connection, torsion, EM form, Yang-Mills energy and Maxwell residual at a point");
  add_model_flags(a, analyze.model);
  a->add_option("--point", analyze.point, "state point, e.g. 0.5,1.0")->required();
  a->add_flag("--json", analyze.json, "write a JSON document instead of aligned text");
  a->add_option("--out", analyze.out, "output file (default stdout)");

  FlowOptions flow;
  auto* fl = app.add_subcommand("flow", "integrate a field line and write t,x..,v..,a.. as CSV");
  add_model_flags(fl, flow.model);
  fl->add_option("--from", flow.from, "initial state")->required();
  add_interval_flags(fl, flow.t0, flow.t1, flow.dt);
  fl->add_option("--out", flow.out, "output CSV file (default stdout)");

  GeodesicOptions geo;
  auto* g = app.add_subcommand(
      "geodesic",
      "integrate the second-order prolongation, or the geometric dynamics of a metric file, as CSV");
  add_model_flags(g, geo.model);
  g->add_option("--metric", geo.metric, "JSON file with variables and an n x n \"metric\" array");
  g->add_option("--from", geo.from, "initial state")->required();
  g->add_option("--v0", geo.v0, "initial velocity (default X(from), the on-shell start)");
  add_interval_flags(g, geo.t0, geo.t1, geo.dt);
  g->add_option("--out", geo.out, "output CSV file (default stdout)");

  LevelsetOptions ls;
  auto* l = app.add_subcommand("levelset", "extract the constant-energy set {EYM = C}");
  add_model_flags(l, ls.model);
  l->add_option("--level", ls.level, "energy level C")->required();
  l->add_flag("--paper-normalization", ls.paper_normalization,
              "read --level as 4C, the constant of the bracket^2 = 4C form, and extract EYM = level/4");
  l->add_option("--bounds", ls.bounds, "box per variable in model order, e.g. Y:-3:3,K:-3:3")->required();
  l->add_option("--res", ls.res, "lattice points per axis")->capture_default_str();
  l->add_option("--format", ls.format, "csv or svg for 2-D models, obj for 3-D models")
      ->check(CLI::IsMember({"csv", "svg", "obj"}))
      ->capture_default_str();
  l->add_option("--out", ls.out, "output file (default stdout)");

  CheckOptions check;
  auto* c = app.add_subcommand("check", "run the identity and oracle property suite at seeded random points");
  add_model_flags(c, check.model);
  c->add_option("--samples", check.samples, "number of sample points")->capture_default_str();
  c->add_option("--seed", check.seed, "random seed")->capture_default_str();
  c->add_option("--tol", check.tol, "tolerance for every property")->capture_default_str();
  c->add_option("--out", check.out, "report file (default stdout)");
  c->add_flag("--inject-oracle-fault", check.inject_oracle_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  auto run = [&]() -> int {
    if (*a) return run_analyze(analyze, std::cerr);
    if (*fl) return run_flow(flow, std::cerr);
    if (*g) return run_geodesic(geo, std::cerr);
    if (*l) return run_levelset(ls, std::cerr);
    return run_check(check, std::cerr);
  };
  return run_guarded(run, std::cerr);
}
