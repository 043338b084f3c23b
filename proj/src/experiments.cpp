#include "amcf/experiments.hpp"

#include "amcf/barriers.hpp"
#include "amcf/curvature.hpp"
#include "amcf/errors.hpp"
#include "amcf/flow.hpp"
#include "amcf/grid.hpp"
#include "amcf/io.hpp"
#include "amcf/selfsimilar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace amcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Advances the fields together with step dt until `end`. `visit(step, dt)`
// sees every evaluated state; dt is the step about to be taken, 0 at the end.
template <class Visit>
void lockstep(std::vector<GraphField>& fields, std::vector<FlowIntegrator>& flows, double dt,
              double end, Visit&& visit) {
  for (long step = 0;; ++step) {
    for (std::size_t k = 0; k < fields.size(); ++k) flows[k].evaluate(fields[k]);
    const double t = fields.front().time;
    const bool done = end - t <= 1e-12 * std::max(1.0, std::abs(end));
    const double dk = done ? 0.0 : std::min(dt, end - t);
    visit(step, dk);
    if (done) return;
    const double next = dk == end - t ? end : t + dk;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      const double limit = flows[k].cfl_dt(0.5);
      require(dk <= limit * (1.0 + 1e-12), ErrorKind::Usage,
              "shared step " + format_double(dk) + " exceeds the c = 0.5 limit " +
                  format_double(limit) + " at step " + std::to_string(step));
      flows[k].apply(fields[k], dk, step + 1);
      fields[k].time = next;
    }
  }
}

std::vector<FlowIntegrator> integrators(std::size_t n, const GridPtr& grid,
                                        const AnisotropyModel& phi, const MobilityModel& psi,
                                        FlowKind kind) {
  std::vector<FlowIntegrator> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) out.emplace_back(grid, phi, psi, kind);
  return out;
}

std::vector<std::size_t> nodes_within(const GraphGrid& g, double radius) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.radius(g.node(k)) <= radius + 1e-12) out.push_back(k);
  }
  return out;
}

double sup_difference(const GraphField& a, const GraphField& b,
                      const std::vector<std::size_t>& nodes) {
  double d = 0.0;
  for (const auto k : nodes) d = std::max(d, std::abs(a.values[k] - b.values[k]));
  return d;
}

double sup_abs(const GraphField& u) {
  double m = 0.0;
  for (const double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

// Largest rise between consecutive samples with time >= from.
double max_rise(const std::vector<std::pair<double, double>>& series, double from) {
  double rise = -kInf;
  for (std::size_t k = 1; k < series.size(); ++k) {
    if (series[k - 1].first < from) continue;
    rise = std::max(rise, series[k].second - series[k - 1].second);
  }
  return rise == -kInf ? 0.0 : rise;
}

void check_dimensions(const AnisotropyModel& phi, const MobilityModel& psi, int dim) {
  require(phi.dimension() == dim + 1 && psi.dimension() == dim + 1, ErrorKind::Config,
          "anisotropy and mobility must live on R^" + std::to_string(dim + 1));
}

// phi and psi invariant under x -> -x, checked on the unit-sphere sample.
bool reflection_symmetric(const AnisotropyModel& phi, const MobilityModel& psi) {
  for (const Vec& p : sphere_samples(phi.dimension())) {
    Vec q = -p;
    q[q.size() - 1] = p[p.size() - 1];
    const double a = phi.value(p), b = psi.value(p);
    if (std::abs(a - phi.value(q)) > 1e-12 * a || std::abs(b - psi.value(q)) > 1e-12 * b) {
      return false;
    }
  }
  return true;
}

void echo_models(ExperimentReport& r, const AnisotropyModel& phi, const MobilityModel& psi) {
  r.echo("phi", phi.name());
  r.echo("psi", psi.name());
}

}  // namespace

ExperimentReport exp_rescaled_convergence(const ConeSpec& cone, const PerturbationSpec& perturbation,
                                          const RescaledConvergenceSetup& setup) {
  validate(perturbation);
  require(!std::holds_alternative<perturbation::VanishingBump>(perturbation), ErrorKind::Config,
          "rescaled convergence takes a sublinear bump or a bounded offset");
  const int dim = cone.dimension();
  check_dimensions(setup.phi, setup.psi, dim);
  require(setup.tau_end > 0.0 && setup.sample_dtau > 0.0, ErrorKind::Config,
          "tau_end and sample_dtau must be positive");
  const bool offset = std::holds_alternative<perturbation::BoundedOffset>(perturbation);

  ExperimentReport report("rescaled_convergence");
  report.echo("cone", cone.name());
  report.echo("perturbation", describe(perturbation));
  echo_models(report, setup.phi, setup.psi);
  report.echo("N", static_cast<double>(dim));
  report.echo("h", setup.h);
  report.echo("half_width", setup.half_width);
  report.echo("cfl_factor", setup.cfl);
  report.echo("tau_end", setup.tau_end);
  report.echo("sample_dtau", setup.sample_dtau);
  report.echo("threshold", setup.threshold);
  report.echo("tol_stat", setup.tol_stat);

  auto grid = share(GraphGrid::centered(dim, setup.h, setup.half_width,
                                        boundary::ConeExtension{cone}));
  const GraphField base = make_cone_field(cone, grid);
  GraphField perturbed = base;
  for (std::size_t k = 0; k < grid->size(); ++k) {
    perturbed.values[k] += evaluate(perturbation, grid->node(k), dim);
  }
  std::vector<GraphField> fields{perturbed, base};
  const double lip0 = std::max(lipschitz_constant(perturbed), lipschitz_constant(base));

  double reach = 0.0;
  for (int a = 0; a < dim; ++a) {
    reach += std::max(std::abs(grid->origin()[a]),
                      std::abs(grid->origin()[a] + setup.h * (grid->count(a) - 1)));
  }
  const double dt = std::min(uniform_cfl_dt(dim, setup.h, lip0, setup.phi, setup.psi, setup.cfl),
                             setup.cfl * setup.h / reach);
  report.echo("dt", dt);

  auto flows = integrators(2, grid, setup.phi, setup.psi, FlowKind::Rescaled);
  const auto inner = nodes_within(*grid, 1.0);
  std::vector<std::pair<double, double>> d_series;
  double next_sample = 0.0, lip_excess = 0.0;
  lockstep(fields, flows, dt, setup.tau_end, [&](long, double dk) {
    const double tau = fields[0].time;
    if (tau >= next_sample - 1e-12 || dk == 0.0) {
      d_series.emplace_back(tau, sup_difference(fields[0], fields[1], inner));
      lip_excess = std::max({lip_excess, lipschitz_constant(fields[0]) - lip0,
                             lipschitz_constant(fields[1]) - lip0});
      while (next_sample <= tau + 1e-12) next_sample += setup.sample_dtau;
    }
  });

  const double half = 0.5 * setup.tau_end;
  report.note("D_initial", d_series.front().second);
  report.check_le("D_max_rise_last_half", max_rise(d_series, half), 1e-12);
  const double d_final = d_series.back().second;
  report.check_le("D_final", d_final, setup.threshold);

  auto mid = std::find_if(d_series.begin(), d_series.end(),
                          [&](const auto& s) { return s.first >= half; });
  const bool vanished = mid->second == 0.0 || d_final == 0.0;
  const double rate = vanished ? std::nan("")
                               : std::log(mid->second / d_final) / (setup.tau_end - mid->first);
  report.note("decay_rate", rate);
  if (offset && !vanished) report.check_le("decay_rate_rel_error", std::abs(rate - 1.0), 0.1);

  FlowParams ep;
  ep.cfl_factor = setup.cfl;
  ep.tol_stat = setup.tol_stat;
  ep.end_time = std::max(60.0, setup.tau_end);
  const auto expander = compute_expander(cone, ep, setup.phi, setup.psi, grid);
  report.note("expander_residual", expander.residual);
  report.check_le("cone_run_vs_expander",
                  sup_difference(fields[1], expander.profile, nodes_within(*grid, kInf)),
                  10.0 * setup.tol_stat);
  report.check_le("lipschitz_excess", lip_excess, 1e-6);
  return report;
}

ExperimentReport exp_hyperplane_stability(const perturbation::VanishingBump& bump,
                                          const HyperplaneSetup& setup) {
  validate(bump);
  check_dimensions(setup.phi, setup.psi, 1);
  require(setup.period >= 8.0 * bump.width * (1.0 - 1e-12), ErrorKind::Config,
          "period " + format_double(setup.period) + " is below 8 bump widths");
  require(setup.barrier_margin > 0.0 && setup.barrier_margin < 0.5, ErrorKind::Config,
          "barrier margin must lie in (0, 1/2)");
  require(setup.end_time > 0.0 && setup.sample_dt > 0.0, ErrorKind::Config,
          "end_time and sample_dt must be positive");

  ExperimentReport report("hyperplane_stability");
  report.echo("perturbation", describe(bump));
  echo_models(report, setup.phi, setup.psi);
  report.echo("h", setup.h);
  report.echo("period", setup.period);
  report.echo("end_time", setup.end_time);
  report.echo("cfl_factor", setup.cfl);
  report.echo("barrier_margin", setup.barrier_margin);
  report.echo("sample_dt", setup.sample_dt);

  auto grid = share(GraphGrid::periodic(1, setup.h, setup.period, -0.5 * setup.period));
  const PerturbationSpec p = bump;
  const GraphField u0 = GraphField::from_function(
      grid, [&](const Point& x) { return evaluate(p, x, 1); });
  const double top = *std::max_element(u0.values.begin(), u0.values.end());
  PeriodicBarrierSpec spec;
  spec.R = setup.period / 8.0;
  spec.M = top > 0.0 ? top : 1.0;
  spec.eps = setup.barrier_margin * spec.M;
  const GraphField f0 = periodic_barrier_profile(spec, grid);
  report.echo("barrier_M", spec.M);
  report.echo("barrier_eps", spec.eps);

  bool ordered = true;
  for (std::size_t k = 0; k < u0.size(); ++k) ordered = ordered && u0.values[k] <= f0.values[k];
  report.flag("data_below_barrier", ordered);

  const bool symmetric = reflection_symmetric(setup.phi, setup.psi);
  std::vector<GraphField> fields{u0, f0};
  if (symmetric) {
    GraphField flipped = u0;
    for (double& v : flipped.values) v = -v;
    fields.push_back(std::move(flipped));
  }
  const double lip0 = std::max(lipschitz_constant(u0), lipschitz_constant(f0));
  const double dt = uniform_cfl_dt(1, setup.h, lip0, setup.phi, setup.psi, setup.cfl);
  const double slack = 5.0 * dt / uniform_cfl_dt(1, setup.h, lip0, setup.phi, setup.psi, 1.0);
  report.echo("dt", dt);

  auto flows = integrators(fields.size(), grid, setup.phi, setup.psi, FlowKind::Physical);
  const double m0 = sup_abs(u0);
  double m_prev = m0, m_rise = 0.0, dominate = -kInf, flip_gap = 0.0, lip_excess = 0.0;
  double time_to_tenth = std::nan("");
  struct Energy {
    double a0 = 0.0, cumulative = 0.0, excess = -kInf, violation = 0.0;
  };
  Energy energy[2];
  std::vector<std::pair<double, double>> m_series;
  double next_sample = 0.0;
  lockstep(fields, flows, dt, setup.end_time, [&](long step, double dk) {
    const double t = fields[0].time;
    const double m = sup_abs(fields[0]);
    m_rise = std::max(m_rise, m - m_prev);
    m_prev = m;
    if (std::isnan(time_to_tenth) && m < 0.1 * m0) time_to_tenth = t;
    if (ordered) {
      for (std::size_t k = 0; k < u0.size(); ++k) {
        dominate = std::max(dominate, fields[0].values[k] - fields[1].values[k]);
      }
    }
    if (symmetric) flip_gap = std::max(flip_gap, std::abs(m - sup_abs(fields[2])));
    for (int r = 0; r < 2; ++r) {
      Energy& e = energy[r];
      const double area = flows[r].area();
      if (step == 0) e.a0 = area;
      const double drop = e.a0 - area;
      e.excess = std::max(e.excess, e.cumulative - drop * (1.0 + slack));
      e.violation = std::max(e.violation, (e.cumulative - drop) / e.a0);
      e.cumulative += dk * flows[r].dissipation_rate();
    }
    if (t >= next_sample - 1e-12 || dk == 0.0) {
      m_series.emplace_back(t, m);
      lip_excess = std::max({lip_excess, lipschitz_constant(fields[0]) - lipschitz_constant(u0),
                             lipschitz_constant(fields[1]) - lipschitz_constant(f0)});
      while (next_sample <= t + 1e-12) next_sample += setup.sample_dt;
    }
  });

  report.note("M_initial", m0);
  report.note("M_final", m_prev);
  report.check_le("M_max_rise", m_rise, 1e-12);
  report.check_lt("M_final_over_initial", m0 > 0.0 ? m_prev / m0 : 0.0, 0.1);
  report.note("time_to_tenth", time_to_tenth);
  if (ordered) report.check_le("barrier_violation", dominate, 1e-10);
  if (symmetric) {
    report.check_le("sign_flip_M_gap", flip_gap, 1e-12);
  } else {
    report.note("sign_flip_skipped", 1.0);
  }
  const char* names[2] = {"bump", "barrier"};
  for (int r = 0; r < 2; ++r) {
    const std::string n = names[r];
    report.note(n + "_area_drop", energy[r].a0 - flows[r].area());
    report.note(n + "_dissipation", energy[r].cumulative);
    report.check_le(n + "_dissipation_excess", energy[r].excess, 0.0);
    report.check_le(n + "_dissipation_violation_rel", energy[r].violation, 0.01);
  }
  report.check_le("lipschitz_excess", lip_excess, 1e-6);
  return report;
}

ExperimentReport exp_meanconvex_stability(const ConeSpec& cone,
                                          const perturbation::VanishingBump& bump,
                                          const MeanConvexSetup& setup) {
  validate(bump);
  require(cone.dimension() == 2 && std::holds_alternative<cone::AbsCone>(cone.family()),
          ErrorKind::Config, "mean-convex stability runs on a 2-D rotationally symmetric cone");
  check_dimensions(setup.phi, setup.psi, 2);
  require(setup.end_time > setup.apex_from && setup.apex_from > 0.0, ErrorKind::Config,
          "need 0 < apex_from < end_time");

  ExperimentReport report("meanconvex_stability");
  report.echo("cone", cone.name());
  report.echo("perturbation", describe(bump));
  echo_models(report, setup.phi, setup.psi);
  report.echo("h", setup.h);
  report.echo("count", static_cast<double>(setup.count));
  report.echo("end_time", setup.end_time);
  report.echo("cfl_factor", setup.cfl);
  report.echo("sample_dt", setup.sample_dt);
  report.echo("apex_from", setup.apex_from);
  report.echo("precondition_radius", setup.precondition_radius);
  report.echo("threshold", setup.threshold);

  auto grid = share(GraphGrid::with_apex(2, setup.h, setup.count, boundary::ConeExtension{cone}));
  const GraphField base = make_cone_field(cone, grid);

  const GraphField curv = curvature_operator(base, setup.phi);
  const double outer = grid->inner_half_width() - 2.0 * setup.h;
  double worst = -kInf, at_one = std::nan("");
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const Point x = grid->node(k);
    const double r = grid->radius(x);
    if (r >= setup.precondition_radius && r <= outer) worst = std::max(worst, curv.values[k]);
    if (x[1] == 0.0 && std::abs(x[0] - 1.0) < 0.5 * setup.h) at_one = curv.values[k];
  }
  report.note("cone_curvature_at_r1", at_one);
  report.check_lt("cone_curvature_max", worst, 0.0);
  require(worst < 0.0, ErrorKind::Config,
          "cone is not mean convex for " + setup.phi.name() + ": curvature reaches " +
              format_double(worst) + " at radius >= " + format_double(setup.precondition_radius));

  const PerturbationSpec p = bump;
  GraphField perturbed = base;
  for (std::size_t k = 0; k < grid->size(); ++k) perturbed.values[k] += evaluate(p, grid->node(k), 2);
  std::vector<GraphField> fields{perturbed, base};
  const double lip0 = std::max(lipschitz_constant(perturbed), lipschitz_constant(base));
  const double dt = uniform_cfl_dt(2, setup.h, lip0, setup.phi, setup.psi, setup.cfl);
  report.echo("dt", dt);

  auto flows = integrators(2, grid, setup.phi, setup.psi, FlowKind::Physical);
  const auto inner = nodes_within(*grid, 1.0);
  const std::size_t apex = grid->node_at({0.0, 0.0});
  std::vector<double> cone_values(base.values);
  const double floor = -5.0 * setup.h * setup.h;
  double below = kInf, lip_excess = 0.0;
  std::vector<std::pair<double, double>> gap, apex_scaled;
  double next_sample = 0.0;
  lockstep(fields, flows, dt, setup.end_time, [&](long, double dk) {
    const double t = fields[0].time;
    for (std::size_t k = 0; k < grid->size(); ++k) {
      below = std::min(below, fields[1].values[k] - cone_values[k]);
    }
    if (t >= next_sample - 1e-12 || dk == 0.0) {
      gap.emplace_back(t, sup_difference(fields[0], fields[1], inner));
      if (t >= setup.apex_from - 1e-12) {
        apex_scaled.emplace_back(t, fields[1].values[apex] / std::sqrt(t));
      }
      lip_excess = std::max({lip_excess, lipschitz_constant(fields[0]) - lip0,
                             lipschitz_constant(fields[1]) - lip0});
      while (next_sample <= t + 1e-12) next_sample += setup.sample_dt;
    }
  });

  report.check_ge("cone_run_minus_cone_min", below, floor);
  double lo = kInf, hi = -kInf;
  for (const auto& [t, v] : apex_scaled) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  report.note("apex_over_sqrt_t", apex_scaled.back().second);
  report.check_le("apex_over_sqrt_t_spread", hi > 0.0 ? (hi - lo) / hi : kInf, 0.02);
  report.note("gap_initial", gap.front().second);
  report.check_le("gap_max_rise_last_half", max_rise(gap, 0.5 * setup.end_time), 1e-12);
  report.check_le("gap_final", gap.back().second, setup.threshold);
  report.check_le("lipschitz_excess", lip_excess, 1e-6);
  return report;
}

ExperimentReport oracle_grim_reaper(const GrimReaperSetup& setup) {
  require(setup.half_width > 0.0 && setup.half_width < 0.5 * std::numbers::pi - 2.0 * setup.h,
          ErrorKind::Config, "grim reaper domain must stay inside (-pi/2, pi/2)");
  ExperimentReport report("grim_reaper");
  report.echo("h", setup.h);
  report.echo("end_time", setup.end_time);
  report.echo("half_width", setup.half_width);
  report.echo("cfl_factor", setup.cfl);
  report.echo("threshold", setup.threshold);
  report.echo("min_order", setup.min_order);

  auto exact = [](const Point& x, double t) { return t - std::log(std::cos(x[0])); };
  const auto phi = AnisotropyModel::euclidean(2);
  const auto psi = MobilityModel::euclidean(2);
  double lip_excess = 0.0;
  auto error_at = [&](double h) {
    auto grid = share(GraphGrid::centered(1, h, setup.half_width, boundary::DirichletExact{exact}));
    FlowParams params;
    params.cfl_factor = setup.cfl;
    params.end_time = setup.end_time;
    params.stop_at_stationarity = false;
    const auto traj = evolve(GraphField::from_function(grid, [&](const Point& x) {
                               return exact(x, 0.0);
                             }),
                             params, phi, psi);
    lip_excess = std::max(lip_excess, traj.lipschitz_excess);
    const GraphField& u = traj.final();
    double e = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      e = std::max(e, std::abs(u.values[k] - exact(grid->node(k), u.time)));
    }
    return e;
  };
  const double coarse = error_at(2.0 * setup.h);
  const double fine = error_at(setup.h);
  report.note("error_coarse", coarse);
  report.check_le("error", fine, setup.threshold);
  report.check_ge("order", std::log2(coarse / fine), setup.min_order);
  report.note("lipschitz_excess", lip_excess);
  return report;
}

double oracle_expander_ode(double alpha, double tol) {
  require(alpha >= 0.0, ErrorKind::Domain, "cone slope must be nonnegative");
  require(tol > 0.0, ErrorKind::Usage, "tolerance must be positive");
  if (alpha == 0.0) return 0.0;

  constexpr double span = 10.0, dy = 1e-3;
  auto rhs = [](double y, double w, double p) { return (1.0 + p * p) * (w - y * p); };
  // w'(span) for w(0) = a, w'(0) = 0. The p equation stiffens like (1 + p^2) y
  // for overshooting shots, so the step shrinks to keep RK4 stable.
  auto shoot = [&](double a) {
    double y = 0.0, w = a, p = 0.0;
    while (y < span) {
      const double stiff = std::abs(2.0 * p * (w - y * p) - (1.0 + p * p) * y);
      const double step = std::min({dy, 1.0 / std::max(stiff, 1e-300), span - y});
      const double k1w = p, k1p = rhs(y, w, p);
      const double k2w = p + 0.5 * step * k1p;
      const double k2p = rhs(y + 0.5 * step, w + 0.5 * step * k1w, p + 0.5 * step * k1p);
      const double k3w = p + 0.5 * step * k2p;
      const double k3p = rhs(y + 0.5 * step, w + 0.5 * step * k2w, p + 0.5 * step * k2p);
      const double k4w = p + step * k3p;
      const double k4p = rhs(y + step, w + step * k3w, p + step * k3p);
      w += step / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
      p += step / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      y += step;
      if (!std::isfinite(p)) return kInf;
    }
    return p;
  };
  double lo = 0.0, hi = 2.0 * alpha + 1.0;
  if (!(shoot(hi) > alpha)) {
    fail(ErrorKind::Convergence, "shooting bracket [0, " + format_double(hi) +
                                     "] does not reach slope " + format_double(alpha));
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shoot(mid) > alpha ? hi : lo) = mid;
  }
  require(hi - lo <= tol, ErrorKind::Convergence,
          "shooting stalled at bracket width " + format_double(hi - lo));
  return 0.5 * (lo + hi);
}

namespace {

// Lipschitz-scaled sum of Fourier modes on the 2 pi torus.
struct Modes {
  std::vector<std::array<double, 4>> terms;  // amplitude, kx, ky, phase

  [[nodiscard]] double operator()(const Point& x) const {
    double v = 0.0;
    for (const auto& [a, kx, ky, ph] : terms) v += a * std::sin(kx * x[0] + ky * x[1] + ph);
    return v;
  }
  // Bound on every directional slope, hence on the discrete one.
  [[nodiscard]] double slope_bound() const {
    double s = 0.0;
    for (const auto& [a, kx, ky, ph] : terms) s += std::abs(a) * std::hypot(kx, ky);
    return s;
  }
  [[nodiscard]] double amplitude() const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t[0]);
    return s;
  }
};

Modes random_modes(std::mt19937_64& rng, int dim, double lipschitz) {
  std::uniform_int_distribution<int> count(1, 4), wave(-3, 3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Modes m;
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    double kx = wave(rng), ky = dim == 2 ? wave(rng) : 0.0;
    if (kx == 0.0 && ky == 0.0) kx = 1.0;
    m.terms.push_back({unit(rng), kx, ky, std::numbers::pi * unit(rng)});
  }
  const double scale = lipschitz / m.slope_bound();
  for (auto& t : m.terms) t[0] *= scale;
  return m;
}

}  // namespace

ExperimentReport exp_random_comparison(const ComparisonSetup& setup) {
  require(setup.dim == 1 || setup.dim == 2, ErrorKind::Config, "comparison runs in N = 1 or 2");
  check_dimensions(setup.phi, setup.psi, setup.dim);
  require(setup.pairs > 0, ErrorKind::Config, "need at least one pair");

  ExperimentReport report("comparison");
  echo_models(report, setup.phi, setup.psi);
  report.echo("N", static_cast<double>(setup.dim));
  report.echo("count", static_cast<double>(setup.count));
  report.echo("end_time", setup.end_time);
  report.echo("cfl_factor", setup.cfl);
  report.echo("pairs", static_cast<double>(setup.pairs));
  report.echo("seed", std::to_string(setup.seed));
  report.echo("tol", setup.tol);

  const double period = 2.0 * std::numbers::pi;
  const double h = period / setup.count;
  auto grid = share(GraphGrid::periodic(setup.dim, h, period, 0.0));
  const double dt = uniform_cfl_dt(setup.dim, h, 1.0, setup.phi, setup.psi, setup.cfl);
  report.echo("dt", dt);

  std::mt19937_64 rng(setup.seed);
  std::uniform_real_distribution<double> lip(0.1, 0.5), lift(0.0, 0.1);
  double worst = -kInf, lip_excess = 0.0;
  int worst_pair = -1, violations = 0;
  for (int pair = 0; pair < setup.pairs; ++pair) {
    const Modes base = random_modes(rng, setup.dim, lip(rng));
    const Modes gap = random_modes(rng, setup.dim, lip(rng));
    const double shift = gap.amplitude() + (pair % 4 == 0 ? 0.0 : lift(rng));
    GraphField u = GraphField::from_function(grid, base);
    GraphField v = GraphField::from_function(grid, [&](const Point& x) {
      return base(x) + gap(x) + shift;
    });
    const double lu = lipschitz_constant(u), lv = lipschitz_constant(v);
    std::vector<GraphField> fields{std::move(u), std::move(v)};
    auto flows = integrators(2, grid, setup.phi, setup.psi, FlowKind::Physical);
    double pair_worst = -kInf;
    lockstep(fields, flows, dt, setup.end_time, [&](long, double) {
      for (std::size_t k = 0; k < grid->size(); ++k) {
        pair_worst = std::max(pair_worst, fields[0].values[k] - fields[1].values[k]);
      }
      lip_excess = std::max({lip_excess, lipschitz_constant(fields[0]) - lu,
                             lipschitz_constant(fields[1]) - lv});
    });
    if (pair_worst > setup.tol) ++violations;
    if (pair_worst > worst) {
      worst = pair_worst;
      worst_pair = pair;
    }
  }
  report.note("worst_pair", worst_pair);
  report.check_le("max_violation", worst, setup.tol);
  report.check_le("violating_pairs", violations, 0.0);
  report.check_le("lipschitz_excess", lip_excess, 1e-6);
  return report;
}

}  // namespace amcf
