#include "amcf/selfsimilar.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace amcf {

GraphField make_cone_field(const ConeSpec& cone, GridPtr grid) {
  require(cone.dimension() == grid->dim(), ErrorKind::Usage, "cone and grid dimensions differ");
  return GraphField::from_function(std::move(grid), [&](const Point& x) { return cone(x); });
}

namespace {

double apex_value(const GraphField& u) { return u.values[u.grid->node_at({0.0, 0.0})]; }

}  // namespace

ScalingResult scaling_check(const ConeSpec& cone, double t1, double t2, const ScalingSetup& setup) {
  require(t1 > 0.0 && t2 >= t1, ErrorKind::Usage, "scaling check needs 0 < t1 <= t2");
  const int dim = cone.dimension();
  const double reach = 8.0 * std::sqrt(t2 * setup.psi.psi_max());
  require(setup.half_width >= reach, ErrorKind::Config,
          "half width " + format_double(setup.half_width) + " is below 8 sqrt(t2 psi_max) = " +
              format_double(reach));

  ScalingResult out;
  out.report.echo("cone", cone.name());
  out.report.echo("phi", setup.phi.name());
  out.report.echo("psi", setup.psi.name());
  out.report.echo("N", static_cast<double>(dim));
  out.report.echo("h", setup.h);
  out.report.echo("half_width", setup.half_width);
  out.report.echo("cfl_factor", setup.cfl);
  out.report.echo("t1", t1);
  out.report.echo("t2", t2);
  out.exact_ratio = std::sqrt(t2 / t1);

  if (cone.is_flat()) {
    out.degenerate = true;
    out.ratio = std::nan("");
    out.report.note("degenerate", 1.0);
    out.report.note("u1", 0.0);
    out.report.note("u2", 0.0);
    return out;
  }

  auto grid = share(GraphGrid::centered(dim, setup.h, setup.half_width,
                                        boundary::ConeExtension{cone}));
  FlowParams params;
  params.cfl_factor = setup.cfl;
  params.end_time = t2;
  params.stop_at_stationarity = false;
  params.snapshot_times = setup.apex_times;
  params.snapshot_times.push_back(t1);
  const auto traj = evolve(make_cone_field(cone, grid), params, setup.phi, setup.psi);

  const GraphField* s1 = nullptr;
  for (const auto& s : traj.snapshots) {
    out.apex_series.emplace_back(s.time, apex_value(s));
    if (s.time == t1) s1 = &s;
  }
  require(s1 != nullptr, ErrorKind::Numerical, "no snapshot at t1");
  const GraphField& s2 = traj.final();
  out.u1 = apex_value(*s1);
  out.u2 = apex_value(s2);
  out.ratio = out.u2 / out.u1;
  out.degenerate = t1 == t2;
  out.lipschitz_excess = traj.lipschitz_excess;

  const double shrink = std::sqrt(t1 / t2);
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const Point x = grid->node(k);
    if (grid->radius(x) > 1.0) continue;
    const double image = out.exact_ratio * sample(*s1, {x[0] * shrink, x[1] * shrink});
    out.profile_error = std::max(out.profile_error, std::abs(s2.values[k] - image));
  }

  out.report.note("degenerate", out.degenerate ? 1.0 : 0.0);
  out.report.note("u1", out.u1);
  out.report.note("u2", out.u2);
  out.report.note("ratio", out.ratio);
  out.report.check_le("ratio_rel_error", std::abs(out.ratio / out.exact_ratio - 1.0), 0.02);
  out.report.note("profile_error", out.profile_error);
  out.report.check_le("lipschitz_excess", out.lipschitz_excess, 1e-6);
  return out;
}

double holder_constant(const std::vector<std::pair<double, double>>& series, double t_lo,
                       double t_hi) {
  double k = 0.0;
  for (std::size_t a = 0; a < series.size(); ++a) {
    for (std::size_t b = a + 1; b < series.size(); ++b) {
      const auto [t, ut] = series[a];
      const auto [s, us] = series[b];
      if (t < t_lo || t > t_hi || s < t_lo || s > t_hi || t == s) continue;
      k = std::max(k, std::abs(ut - us) / std::sqrt(std::abs(t - s)));
    }
  }
  return k;
}

ExpanderProfile compute_expander(const ConeSpec& cone, const FlowParams& params,
                                 const AnisotropyModel& phi, const MobilityModel& psi,
                                 GridPtr grid) {
  return compute_expander(make_cone_field(cone, std::move(grid)), params, phi, psi);
}

ExpanderProfile compute_expander(const GraphField& w0, const FlowParams& params,
                                 const AnisotropyModel& phi, const MobilityModel& psi) {
  require(std::holds_alternative<boundary::ConeExtension>(w0.grid->boundary()), ErrorKind::Usage,
          "expanders are computed on cone-extension grids");
  FlowParams p = params;
  p.stop_at_stationarity = true;
  std::vector<double> history;
  const auto traj = evolve_rescaled(w0, p, phi, psi, [&](const GraphField&, const StepRecord& r) {
    if (r.step % 1000 == 0) history.push_back(r.sup_speed);
  });
  if (!traj.stationary) {
    std::string tail;
    const std::size_t from = history.size() > 6 ? history.size() - 6 : 0;
    for (std::size_t k = from; k < history.size(); ++k) tail += " " + format_double(history[k]);
    fail(ErrorKind::Convergence, "rescaled flow not stationary by tau = " +
                                     format_double(p.end_time) + "; residual history (every 1000 steps):" +
                                     tail + " final " +
                                     format_double(traj.records.back().sup_speed));
  }
  return {traj.final(), traj.records.back().sup_speed, 1.0, traj.final().time,
          traj.records.back().step};
}

void write_expander(std::ostream& out, const ExpanderProfile& e) {
  write_snapshot(out, e.profile, {{"c", e.c}, {"residual", e.residual}});
}

FarFieldResult expander_far_field(const ExpanderProfile& profile, const ConeSpec& cone, int rings,
                                  double slack) {
  const GraphField& u = profile.profile;
  const GraphGrid& g = *u.grid;
  require(cone.dimension() == g.dim(), ErrorKind::Usage, "cone and grid dimensions differ");
  require(rings >= 2, ErrorKind::Usage, "need at least two rings");
  FarFieldResult out;
  out.report.echo("cone", cone.name());
  out.report.echo("rings", static_cast<double>(rings));
  out.report.echo("slack", slack);

  const double outer = g.inner_half_width();
  const int angles = g.dim() == 1 ? 2 : 720;
  for (int k = 1; k <= rings; ++k) {
    const double rho = outer * k / rings;
    double d = 0.0;
    for (int a = 0; a < angles; ++a) {
      const double th = 2.0 * std::numbers::pi * a / angles;
      const Point y = g.dim() == 1 ? Point{a == 0 ? rho : -rho, 0.0}
                                   : Point{rho * std::cos(th), rho * std::sin(th)};
      d = std::max(d, std::abs(sample(u, y) - cone(y)));
    }
    out.rho.push_back(rho);
    out.distance.push_back(d);
  }
  bool decreasing = true;
  double worst_rise = 0.0;
  for (std::size_t k = 1; k < out.rho.size(); ++k) {
    if (out.rho[k - 1] < 0.5 * outer) continue;
    const double rise = out.distance[k] - out.distance[k - 1];
    worst_rise = std::max(worst_rise, rise);
    if (rise > slack) decreasing = false;
  }
  out.min_above_cone = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < u.size(); ++k) {
    out.min_above_cone = std::min(out.min_above_cone, u.values[k] - cone(g.node(k)));
  }
  out.report.note("distance_inner", out.distance.front());
  out.report.note("distance_outer", out.distance.back());
  out.report.note("worst_outer_rise", worst_rise);
  out.report.flag("decreasing_outer_half", decreasing);
  out.report.note("min_profile_minus_cone", out.min_above_cone);
  return out;
}

GraphField backward_extend(const GraphField& u1, double c, double t) {
  require(c > 0.0, ErrorKind::Domain, "expansion constant c must be > 0");
  const double t0 = 1.0 - 1.0 / (2.0 * c);
  require(t > t0, ErrorKind::Domain,
          "t = " + format_double(t) + " is not after the cone time " + format_double(t0));
  const double lambda = std::sqrt(2.0 * c * (t - 1.0) + 1.0);
  std::vector<double> values(u1.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Point x = u1.grid->node(k);
    values[k] = lambda * sample(u1, {x[0] / lambda, x[1] / lambda});
  }
  return GraphField(u1.grid, std::move(values), t);
}

}  // namespace amcf
