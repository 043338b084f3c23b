#include "amcf/barriers.hpp"

#include "amcf/curvature.hpp"
#include "amcf/errors.hpp"
#include "amcf/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amcf {

namespace {

WulffRadii radii_from_speeds(double R, double t, int N, double s_min, double s_max) {
  require(R > 0.0, ErrorKind::Domain, "radius must be > 0");
  require(t >= 0.0, ErrorKind::Domain, "time must be >= 0");
  const double extinction = R * R / (2.0 * N * s_max);
  require(t <= extinction, ErrorKind::Domain,
          "t = " + format_double(t) + " is past the extinction time " + format_double(extinction));
  return {std::sqrt(std::max(0.0, R * R - 2.0 * s_max * N * t)),
          std::sqrt(R * R - 2.0 * s_min * N * t)};
}

}  // namespace

WulffRadii shrinking_wulff_radii(double R, double t, int N, const MobilityModel& psi) {
  return radii_from_speeds(R, t, N, psi.psi_min(), psi.psi_max());
}

WulffRadii shrinking_wulff_radii(double R, double t, int N, const MobilityModel& psi,
                                 const AnisotropyModel& phi) {
  const auto b = mobility_ratio_bounds(psi, phi);
  return radii_from_speeds(R, t, N, b.min, b.max);
}

void PeriodicBarrierSpec::validate() const {
  require(R > 0.0, ErrorKind::Config, "barrier R must be > 0");
  require(M > 0.0, ErrorKind::Config, "barrier M must be > 0");
  require(eps > 0.0 && eps < 0.5 * M, ErrorKind::Config, "barrier eps out of (0, M/2)");
}

double PeriodicBarrierSpec::operator()(double z) const {
  const double p = period();
  double s = std::fmod(z, p);
  if (s < 0.0) s += p;
  s = std::abs(s > 0.5 * p ? s - p : s);  // even, in [0, 4R]
  if (s <= R) return top();
  if (s >= 3.0 * R) return bottom();
  const double x = (s - R) / (2.0 * R);
  return top() - (top() - bottom()) * x * x * (3.0 - 2.0 * x);
}

GraphField periodic_barrier_profile(const PeriodicBarrierSpec& spec, GridPtr grid) {
  spec.validate();
  const auto* per = std::get_if<boundary::Periodic>(&grid->boundary());
  require(grid->dim() == 1 && per != nullptr, ErrorKind::Config,
          "periodic barrier needs a 1-D periodic grid");
  require(std::abs(per->period[0] - spec.period()) <= 1e-9 * spec.period(), ErrorKind::Config,
          "grid period " + format_double(per->period[0]) + " differs from 8R = " +
              format_double(spec.period()));
  return GraphField::from_function(std::move(grid), [&](const Point& x) { return spec(x[0]); });
}

ComparisonResult comparison_check(const Trajectory& lower, const Trajectory& upper, double tol) {
  require(lower.snapshots.size() == upper.snapshots.size(), ErrorKind::Usage,
          "trajectories have different snapshot counts");
  ComparisonResult out;
  out.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < lower.snapshots.size(); ++s) {
    const GraphField& a = lower.snapshots[s];
    const GraphField& b = upper.snapshots[s];
    require(a.grid->same_layout(*b.grid), ErrorKind::Usage, "trajectory grids differ");
    require(std::abs(a.time - b.time) <= 1e-12 * std::max(1.0, std::abs(a.time)), ErrorKind::Usage,
            "snapshot times differ at index " + std::to_string(s));
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double v = a.values[k] - b.values[k];
      if (v > out.max_violation) {
        out.max_violation = v;
        out.snapshot = s;
        out.node = k;
      }
    }
  }
  out.report.echo("snapshots", static_cast<double>(lower.snapshots.size()));
  out.report.check_le("max_violation", out.max_violation, tol);
  return out;
}

WulffBarrierResult wulff_barrier_check(const WulffBarrierSetup& s) {
  const int N = s.dim;
  const double R = s.radius;
  RatioBounds speeds{s.psi.psi_min(), s.psi.psi_max()};
  if (!s.mobility_extremes_only) speeds = mobility_ratio_bounds(s.psi, s.phi);
  const double extinction = R * R / (2.0 * N * speeds.max);
  require(s.end_time > 0.0 && s.end_time <= 0.25 * extinction * (1.0 + 1e-12), ErrorKind::Config,
          "end time must lie in (0, extinction/4 = " + format_double(0.25 * extinction) + "]");

  auto radius_at = [&](double t, double speed) { return std::sqrt(R * R - 2.0 * speed * N * t); };
  const double mid_speed = 0.5 * (speeds.min + speeds.max);
  const AnisotropyModel phi = s.phi;
  auto exact = [phi, radius_at, mid_speed](const Point& x, double t) {
    return wulff_cap_height(phi, radius_at(t, mid_speed), x);
  };
  auto grid = share(GraphGrid::centered(N, s.h, s.half_width, boundary::DirichletExact{exact}));

  WulffBarrierResult out;
  out.report.echo("phi", s.phi.name());
  out.report.echo("psi", s.psi.name());
  out.report.echo("N", static_cast<double>(N));
  out.report.echo("R", R);
  out.report.echo("h", s.h);
  out.report.echo("half_width", s.half_width);
  out.report.echo("T", s.end_time);
  out.report.echo("speed_min", speeds.min);
  out.report.echo("speed_max", speeds.max);
  out.report.echo("bounds", s.mobility_extremes_only ? "mobility" : "mobility/tension");

  FlowParams params;
  params.cfl_factor = s.cfl;
  params.end_time = s.end_time;
  params.snapshot_dt = s.snapshot_dt;
  params.stop_at_stationarity = false;
  const auto traj = evolve(wulff_lower_cap(s.phi, R, grid).field, params, s.phi, s.psi);

  const double tol = 5.0 * s.h * s.h;
  for (const auto& u : traj.snapshots) {
    const auto below = wulff_lower_cap(s.phi, radius_at(u.time, speeds.min), grid).field;
    const auto above = wulff_lower_cap(s.phi, radius_at(u.time, speeds.max), grid).field;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double lo = below.values[k] - u.values[k];
      const double hi = u.values[k] - above.values[k];
      out.below_violation = std::max(out.below_violation, lo);
      out.above_violation = std::max(out.above_violation, hi);
      if (out.first_violation_time < 0.0 && (lo > tol || hi > tol)) {
        out.first_violation_time = u.time;
        out.first_violation_node = k;
      }
    }
  }
  const std::size_t apex = grid->node_at({0.0, 0.0});
  out.apex = traj.final().values[apex];
  out.apex_reference = wulff_cap_height(s.phi, radius_at(s.end_time, mid_speed), {0.0, 0.0});

  out.report.check_le("below_violation", out.below_violation, tol);
  out.report.check_le("above_violation", out.above_violation, tol);
  out.report.note("apex", out.apex);
  out.report.note("apex_reference", out.apex_reference);
  out.report.note("first_violation_time", out.first_violation_time);
  out.report.note("first_violation_node", static_cast<double>(out.first_violation_node));
  // Caps steepen as they shrink, so the Lipschitz bound for entire graphs
  // does not apply here.
  out.report.note("lipschitz_excess", traj.lipschitz_excess);
  return out;
}

}  // namespace amcf
