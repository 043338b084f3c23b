#include "amcf/dispatch.hpp"

#include "amcf/barriers.hpp"
#include "amcf/experiments.hpp"
#include "amcf/flow.hpp"
#include "amcf/grid.hpp"
#include "amcf/io.hpp"
#include "amcf/selfsimilar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

namespace amcf {

namespace fs = std::filesystem;

std::optional<Command> parse_command(std::string_view name) {
  if (name == "run") return Command::Run;
  if (name == "expander") return Command::Expander;
  if (name == "rescaled") return Command::Rescaled;
  if (name == "barrier-check") return Command::BarrierCheck;
  if (name == "oracle") return Command::Oracle;
  if (name == "suite") return Command::Suite;
  return std::nullopt;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
    case ErrorKind::Parse:
    case ErrorKind::Config:
    case ErrorKind::Domain:
      return exit_status::config;
    case ErrorKind::Singularity:
    case ErrorKind::Numerical:
    case ErrorKind::Convergence:
      return exit_status::numerical;
    case ErrorKind::Assertion:
      return exit_status::assertion;
  }
  return exit_status::numerical;
}

namespace {

double or_default(double threshold, double fallback) { return threshold > 0.0 ? threshold : fallback; }

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Config, "cannot write " + path.string());
  return out;
}

GridPtr make_grid(const RunConfig& c, const ConeSpec& cone) {
  const GridRecord& g = c.grid;
  if (g.boundary == "periodic") return share(GraphGrid::periodic(g.dim, g.h, g.period, -0.5 * g.period));
  if (g.boundary == "linear") {
    return share(GraphGrid::centered(g.dim, g.h, g.half_width, boundary::LinearExtrapolation{}));
  }
  return share(GraphGrid::centered(g.dim, g.h, g.half_width, boundary::ConeExtension{cone}));
}

GraphField initial_data(const RunConfig& c, const ConeSpec& cone, GridPtr grid) {
  GraphField u = make_cone_field(cone, std::move(grid));
  if (const auto p = make_perturbation(c)) {
    for (std::size_t k = 0; k < u.size(); ++k) {
      u.values[k] += evaluate(*p, u.grid->node(k), c.grid.dim);
    }
  }
  return u;
}

perturbation::VanishingBump vanishing(const RunConfig& c) {
  require(c.experiment.perturbation == "vanishing" || c.experiment.perturbation == "none",
          ErrorKind::Config, "this experiment takes a vanishing bump perturbation");
  if (c.experiment.perturbation == "none") return {0.0, c.experiment.width};
  return {c.experiment.amplitude, c.experiment.width};
}

ExperimentReport run_flow(const RunConfig& c, const fs::path& dir) {
  const ConeSpec cone = make_cone(c);
  const GraphField u0 = initial_data(c, cone, make_grid(c, cone));
  const auto traj = evolve(u0, make_flow_params(c), make_anisotropy(c), make_mobility(c));

  ExperimentReport report("flow");
  report.echo("cone", cone.name());
  report.echo("boundary", boundary_name(u0.grid->boundary()));
  {
    auto out = open_out(dir / "trajectory.csv");
    traj.write_csv(out);
    report.add_artifact("trajectory.csv");
  }
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%04zu.txt", k);
    auto out = open_out(dir / name);
    write_snapshot(out, traj.snapshots[k]);
    report.add_artifact(name);
  }
  const StepRecord& last = traj.records.back();
  report.note("final_time", last.t);
  report.note("steps", static_cast<double>(last.step));
  report.note("final_sup_speed", last.sup_speed);
  report.note("stationary", traj.stationary ? 1.0 : 0.0);
  report.note("area_drop", traj.records.front().area - last.area);
  report.note("dissipation", last.dissipation);
  report.check_le("lipschitz_excess", traj.lipschitz_excess, 1e-6);
  return report;
}

ExperimentReport run_expander(const RunConfig& c, const fs::path& dir) {
  const ConeSpec cone = make_cone(c);
  const auto phi = make_anisotropy(c);
  const auto psi = make_mobility(c);
  auto grid = share(GraphGrid::centered(c.grid.dim, c.grid.h, c.grid.half_width,
                                        boundary::ConeExtension{cone}));
  FlowParams params = make_flow_params(c);
  const auto e = compute_expander(cone, params, phi, psi, grid);
  {
    auto out = open_out(dir / "expander.txt");
    write_expander(out, e);
  }

  ExperimentReport report("expander");
  report.echo("cone", cone.name());
  report.echo("phi", phi.name());
  report.echo("psi", psi.name());
  report.echo("h", c.grid.h);
  report.echo("half_width", c.grid.half_width);
  report.echo("tol_stat", params.tol_stat);
  report.add_artifact("expander.txt");
  report.note("tau", e.tau);
  report.check_le("residual", e.residual, params.tol_stat);
  const double apex = e.profile.values[grid->node_at({0.0, 0.0})];
  report.note("apex", apex);

  FlowParams more = params;
  more.stop_at_stationarity = false;
  more.end_time = 1e300;
  more.max_steps = 100;
  double drift = 0.0;
  try {
    evolve_rescaled(e.profile, more, phi, psi, [&](const GraphField&, const StepRecord& r) {
      drift = std::max(drift, r.sup_speed);
    });
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::Convergence) throw;
  }
  report.check_le("fixed_point_drift", drift, 10.0 * params.tol_stat);

  const bool oracle = c.grid.dim == 1 && c.experiment.cone == "abs" &&
                      c.anisotropy.family == "euclidean" && c.mobility.family == "euclidean";
  if (oracle) {
    const double w0 = oracle_expander_ode(c.experiment.slope);
    report.note("ode_apex", w0);
    report.check_le("apex_vs_ode", std::abs(apex - w0), or_default(c.experiment.threshold, 1e-3));
  }
  report.merge(expander_far_field(e, cone).report);
  return report;
}

ExperimentReport run_rescaled(const RunConfig& c) {
  RescaledConvergenceSetup s;
  s.phi = make_anisotropy(c);
  s.psi = make_mobility(c);
  s.h = c.grid.h;
  s.half_width = c.grid.half_width;
  s.cfl = c.flow.cfl_factor;
  s.tau_end = c.flow.end_time;
  s.tol_stat = c.flow.tol_stat;
  s.threshold = or_default(c.experiment.threshold, s.threshold);
  auto p = make_perturbation(c);
  require(p.has_value(), ErrorKind::Config, "rescaled convergence needs a perturbation");
  return exp_rescaled_convergence(make_cone(c), *p, s);
}

ExperimentReport run_named(const RunConfig& c, const std::string& id, const fs::path& dir) {
  const auto phi = make_anisotropy(c);
  const auto psi = make_mobility(c);
  if (id == "flow") return run_flow(c, dir);
  if (id == "scaling") {
    ScalingSetup s;
    s.phi = phi;
    s.psi = psi;
    s.h = c.grid.h;
    s.half_width = c.grid.half_width;
    s.cfl = c.flow.cfl_factor;
    return scaling_check(make_cone(c), c.experiment.t1, c.experiment.t2, s).report;
  }
  if (id == "hyperplane") {
    HyperplaneSetup s;
    s.phi = phi;
    s.psi = psi;
    s.h = c.grid.h;
    s.period = c.grid.period;
    s.end_time = c.flow.end_time;
    s.cfl = c.flow.cfl_factor;
    return exp_hyperplane_stability(vanishing(c), s);
  }
  if (id == "meanconvex") {
    MeanConvexSetup s;
    s.phi = phi;
    s.psi = psi;
    s.h = c.grid.h;
    s.count = c.grid.count;
    s.end_time = c.flow.end_time;
    s.cfl = c.flow.cfl_factor;
    s.threshold = or_default(c.experiment.threshold, s.threshold);
    return exp_meanconvex_stability(make_cone(c), vanishing(c), s);
  }
  if (id == "expander") return run_expander(c, dir);
  if (id == "rescaled_convergence") return run_rescaled(c);
  if (id == "wulff") {
    WulffBarrierSetup s;
    s.phi = phi;
    s.psi = psi;
    s.radius = c.experiment.radius;
    s.h = c.grid.h;
    s.half_width = c.grid.half_width;
    s.end_time = c.flow.end_time;
    s.cfl = c.flow.cfl_factor;
    s.dim = c.grid.dim;
    if (c.flow.snapshot_dt > 0.0) s.snapshot_dt = c.flow.snapshot_dt;
    return wulff_barrier_check(s).report;
  }
  if (id == "comparison") {
    ComparisonSetup s;
    s.phi = phi;
    s.psi = psi;
    s.dim = c.grid.dim;
    s.count = c.grid.count;
    s.end_time = c.flow.end_time;
    s.cfl = c.flow.cfl_factor;
    s.pairs = static_cast<int>(c.experiment.pairs);
    if (c.seed) s.seed = *c.seed;
    return exp_random_comparison(s);
  }
  if (id == "grim_reaper") {
    GrimReaperSetup s;
    s.h = c.grid.h;
    s.end_time = c.flow.end_time;
    s.cfl = c.flow.cfl_factor;
    s.threshold = or_default(c.experiment.threshold, s.threshold);
    return oracle_grim_reaper(s);
  }
  if (id == "expander_ode") {
    ExperimentReport report("expander_ode");
    report.echo("slope", c.experiment.slope);
    report.note("w0", oracle_expander_ode(c.experiment.slope));
    return report;
  }
  fail(ErrorKind::Config, "unknown experiment '" + id + "'");
}

// Experiment ids each command accepts; the first is its default.
std::vector<std::string> accepted(Command command) {
  switch (command) {
    case Command::Run:
      return {"flow", "scaling", "hyperplane", "meanconvex"};
    case Command::Expander:
      return {"expander"};
    case Command::Rescaled:
      return {"rescaled_convergence"};
    case Command::BarrierCheck:
      return {"wulff", "comparison"};
    case Command::Oracle:
      return {"grim_reaper", "expander_ode"};
    case Command::Suite:
      return {};
  }
  return {};
}

// Acceptance-scale runs at each experiment's defaults.
std::vector<std::pair<std::string, ExperimentReport (*)(const RunConfig&)>> suite_jobs() {
  return {
      {"grim_reaper", [](const RunConfig&) { return oracle_grim_reaper(); }},
      {"scaling",
       [](const RunConfig&) { return scaling_check(ConeSpec::abs(1.0, 1), 1.0, 4.0, {}).report; }},
      {"comparison",
       [](const RunConfig& c) {
         ComparisonSetup s;
         if (c.seed) s.seed = *c.seed;
         return exp_random_comparison(s);
       }},
      {"wulff", [](const RunConfig&) { return wulff_barrier_check({}).report; }},
      {"rescaled_convergence",
       [](const RunConfig&) {
         return exp_rescaled_convergence(ConeSpec::abs(1.0, 1), perturbation::SublinearBump{});
       }},
      {"hyperplane",
       [](const RunConfig&) { return exp_hyperplane_stability(perturbation::VanishingBump{}); }},
      {"meanconvex",
       [](const RunConfig&) {
         return exp_meanconvex_stability(ConeSpec::abs(1.0, 2),
                                         perturbation::VanishingBump{0.5, 1.0});
       }},
  };
}

int finish(ExperimentReport& report, const fs::path& dir, std::ostream& log) {
  report.save(dir);
  report.write_text(log);
  return report.passed() ? exit_status::pass : exit_status::assertion;
}

}  // namespace

int dispatch(Command command, const RunConfig& config, std::ostream& log) {
  const fs::path dir = config.output_dir;
  try {
    fs::create_directories(dir);
    {
      auto out = open_out(dir / "config.ini");
      out << emit_config(config);
    }
    if (command == Command::Suite) {
      int status = exit_status::pass;
      for (const auto& [name, job] : suite_jobs()) {
        const fs::path sub = dir / name;
        try {
          fs::create_directories(sub);
          ExperimentReport r = job(config);
          if (finish(r, sub, log) != exit_status::pass && status == exit_status::pass) {
            status = exit_status::assertion;
          }
        } catch (const Error& e) {
          log << "experiment " << name << ": " << to_string(e.kind()) << " error: " << e.what()
              << "\n";
          if (status == exit_status::pass) status = exit_code(e.kind());
        }
      }
      return status;
    }
    const auto ids = accepted(command);
    const std::string id = config.experiment.id.empty() ? ids.front() : config.experiment.id;
    require(std::find(ids.begin(), ids.end(), id) != ids.end(), ErrorKind::Config,
            "experiment '" + id + "' does not belong to this command");
    ExperimentReport report = run_named(config, id, dir);
    return finish(report, dir, log);
  } catch (const Error& e) {
    log << to_string(e.kind()) << " error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
}

}  // namespace amcf
