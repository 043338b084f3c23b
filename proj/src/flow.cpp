#include "amcf/flow.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"
#include "stencil.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <ostream>

namespace amcf {

void FlowParams::validate() const {
  require(cfl_factor > 0.0 && cfl_factor <= 0.5, ErrorKind::Config,
          "cfl_factor out of (0, 0.5]");
  require(end_time > 0.0 && std::isfinite(end_time), ErrorKind::Config, "end time must be > 0");
  require(snapshot_every >= 0, ErrorKind::Config, "snapshot_every must be >= 0");
  require(snapshot_dt >= 0.0, ErrorKind::Config, "snapshot_dt must be >= 0");
  require(tol_stat > 0.0, ErrorKind::Config, "tol_stat must be > 0");
  require(max_steps > 0, ErrorKind::Config, "max_steps must be > 0");
  if (fixed_dt) require(*fixed_dt > 0.0, ErrorKind::Config, "fixed dt must be > 0");
  for (double t : snapshot_times) {
    require(t >= 0.0 && std::isfinite(t), ErrorKind::Config, "snapshot times must be >= 0");
  }
}

void Trajectory::write_csv(std::ostream& out, bool rescaled) const {
  out << "step," << (rescaled ? "tau" : "t") << ",dt,sup_speed,lipschitz,area,dissipation\n";
  for (const auto& r : records) {
    out << r.step << ',' << format_double(r.t) << ',' << format_double(r.dt) << ','
        << format_double(r.sup_speed) << ',' << format_double(r.lipschitz) << ','
        << format_double(r.area) << ',' << format_double(r.dissipation) << '\n';
  }
}

// ---------------------------------------------------------------------------

struct FlowIntegrator::Impl {
  GridPtr grid;
  AnisotropyModel phi;
  MobilityModel psi;
  FlowKind kind;
  detail::FluxSweep sweep;
  std::vector<double> speed;
  double sup_speed = 0.0;
  double dissipation_rate = 0.0;
  double advection_max = 0.0;  // max over nodes of sum_a |y_a|
  std::array<std::vector<double>, 2> y;  // node coordinates, rescaled flow only

  Impl(GridPtr g, AnisotropyModel f, MobilityModel m, FlowKind k)
      : grid(std::move(g)), phi(std::move(f)), psi(std::move(m)), kind(k), sweep(*grid),
        speed(grid->size(), 0.0) {
    y[0].resize(grid->size());
    y[1].resize(grid->size());
    for (std::size_t n = 0; n < grid->size(); ++n) {
      const Point x = grid->node(n);
      y[0][n] = x[0];
      y[1][n] = x[1];
      advection_max = std::max(advection_max, std::abs(x[0]) + std::abs(x[1]));
    }
  }
};

FlowIntegrator::FlowIntegrator(GridPtr grid, AnisotropyModel phi, MobilityModel psi, FlowKind kind) {
  require(phi.dimension() == grid->dim() + 1 && psi.dimension() == grid->dim() + 1,
          ErrorKind::Usage, "anisotropy and mobility must live on R^(N+1)");
  if (kind == FlowKind::Rescaled) {
    const bool ok = std::holds_alternative<boundary::ConeExtension>(grid->boundary()) ||
                    std::holds_alternative<boundary::DirichletExact>(grid->boundary());
    require(ok, ErrorKind::Usage, "the rescaled flow needs a cone or Dirichlet boundary");
  }
  impl_ = std::make_unique<Impl>(std::move(grid), std::move(phi), std::move(psi), kind);
}

FlowIntegrator::~FlowIntegrator() = default;
FlowIntegrator::FlowIntegrator(FlowIntegrator&&) noexcept = default;
FlowIntegrator& FlowIntegrator::operator=(FlowIntegrator&&) noexcept = default;

FlowKind FlowIntegrator::kind() const { return impl_->kind; }
const std::vector<double>& FlowIntegrator::speed() const { return impl_->speed; }
double FlowIntegrator::sup_speed() const { return impl_->sup_speed; }
double FlowIntegrator::area() const { return impl_->sweep.area(); }
double FlowIntegrator::dissipation_rate() const { return impl_->dissipation_rate; }

void FlowIntegrator::evaluate(const GraphField& u) {
  Impl& m = *impl_;
  require(u.grid->same_layout(*m.grid), ErrorKind::Usage, "field and integrator grids differ");
  m.sweep.evaluate(u, m.phi, m.psi);
  const GraphGrid& g = *m.grid;
  const int dim = g.dim();
  const int nx = g.count(0), ny = dim == 2 ? g.count(1) : 1;
  const double h = g.h();
  const double inv_h = 1.0 / h;
  const auto& curv = m.sweep.curvature();
  const PaddedValues& p = m.sweep.padded();

  const bool euclid_psi = std::holds_alternative<norm::Euclidean>(m.psi.family());
  double sup = 0.0, diss = 0.0;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx + i;
      const Point grad = m.sweep.nodal_gradient(k);
      const double mob =
          euclid_psi ? std::sqrt(1.0 + grad[0] * grad[0] + grad[1] * grad[1])
                     : m.psi.lifted(std::span<const double>(grad.data(), dim));
      double v = -mob * curv[k];
      diss += mob * curv[k] * curv[k];
      if (m.kind == FlowKind::Rescaled) {
        const double y0 = m.y[0][k], y1 = m.y[1][k];
        const double c = p(i, j);
        double adv = y0 * (y0 > 0.0 ? p(i + 1, j) - c : c - p(i - 1, j));
        if (dim == 2) adv += y1 * (y1 > 0.0 ? p(i, j + 1) - c : c - p(i, j - 1));
        v += adv * inv_h - c;
      }
      m.speed[k] = v;
      sup = std::max(sup, std::abs(v));
    }
  }
  m.sup_speed = sup;
  m.dissipation_rate = diss * std::pow(h, dim);
}

double FlowIntegrator::cfl_dt(double c) const {
  const Impl& m = *impl_;
  const auto& bounds = m.sweep.bounds();
  const double h = m.grid->h();
  double dt = std::numeric_limits<double>::infinity();
  const double denom = m.grid->dim() * bounds.psi * bounds.lambda;
  if (denom > 0.0) dt = c * h * h / denom;
  if (m.kind == FlowKind::Rescaled && m.advection_max > 0.0) {
    dt = std::min(dt, c * h / m.advection_max);
  }
  return dt;
}

void FlowIntegrator::apply(GraphField& u, double dt, long step_index) const {
  const auto& v = impl_->speed;
  double check = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    u.values[k] += dt * v[k];
    check += u.values[k];
  }
  if (!std::isfinite(check)) {
    const auto bad = std::find_if(u.values.begin(), u.values.end(),
                                  [](double x) { return !std::isfinite(x); });
    const auto k = static_cast<std::size_t>(bad - u.values.begin());
    const auto [i, j] = u.grid->ij(std::min(k, u.values.size() - 1));
    fail(ErrorKind::Numerical, "non-finite value at step " + std::to_string(step_index) +
                                   ", node (" + std::to_string(i) + ", " + std::to_string(j) +
                                   "), dt " + format_double(dt));
  }
}

// ---------------------------------------------------------------------------

double cfl_dt(const GraphField& u, const AnisotropyModel& phi, const MobilityModel& psi,
              double c_cfl) {
  detail::FluxSweep sweep(*u.grid);
  sweep.load(u);
  const auto b = sweep.face_bounds(phi, psi);
  const double denom = u.grid->dim() * b.psi * b.lambda;
  if (denom <= 0.0) return std::numeric_limits<double>::infinity();
  return c_cfl * u.grid->h() * u.grid->h() / denom;
}

double uniform_cfl_dt(int dim, double h, double lipschitz, const AnisotropyModel& phi,
                      const MobilityModel& psi, double c_cfl) {
  const int samples = dim == 1 ? 401 : 61;
  double lambda = 0.0, mob = 0.0;
  double g[2] = {0.0, 0.0};
  for (int a = 0; a < samples; ++a) {
    for (int b = 0; b < (dim == 2 ? samples : 1); ++b) {
      g[0] = lipschitz * (2.0 * a / (samples - 1) - 1.0);
      g[1] = dim == 2 ? lipschitz * (2.0 * b / (samples - 1) - 1.0) : 0.0;
      const std::span<const double> s(g, dim);
      lambda = std::max(lambda, phi.lifted_lambda(s));
      mob = std::max(mob, psi.lifted(s));
    }
  }
  // Sampling can miss the box maximum by a hair; the margin absorbs it.
  return 0.999 * c_cfl * h * h / (dim * lambda * mob);
}

GraphField step_explicit(const GraphField& u, double dt, const AnisotropyModel& phi,
                         const MobilityModel& psi) {
  FlowIntegrator integ(u.grid, phi, psi);
  integ.evaluate(u);
  const double limit = integ.cfl_dt(0.5);
  require(dt > 0.0 && dt <= limit * (1.0 + 1e-12), ErrorKind::Usage,
          "dt " + format_double(dt) + " exceeds the CFL limit " + format_double(limit));
  GraphField out = u;
  integ.apply(out, dt, 1);
  out.time = u.time + dt;
  return out;
}

namespace {

Trajectory run(const GraphField& u0, const FlowParams& params, const AnisotropyModel& phi,
               const MobilityModel& psi, const StepObserver& observer, FlowKind kind) {
  params.validate();
  require(u0.all_finite(), ErrorKind::Numerical, "initial data has non-finite values");
  FlowIntegrator integ(u0.grid, phi, psi, kind);

  const double t0 = u0.time;
  const double t_end = params.end_time;
  require(t_end > t0, ErrorKind::Config, "end time must exceed the initial time");

  // Times at which a step must land exactly; those flagged true are stored.
  std::vector<double> targets;
  for (double t : params.snapshot_times) {
    if (t > t0 && t < t_end) targets.push_back(t);
  }
  if (params.snapshot_dt > 0.0) {
    for (long k = 1;; ++k) {
      const double t = t0 + k * params.snapshot_dt;
      if (t >= t_end * (1.0 - 1e-12)) break;
      targets.push_back(t);
    }
  }
  targets.push_back(t_end);
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  Trajectory traj;
  GraphField u = u0;
  traj.snapshots.push_back(u);
  const double lip0 = lipschitz_constant(u);
  std::size_t next = 0;
  long step = 0;
  double last_dt = 0.0;
  double dissipation = 0.0;

  for (;;) {
    integ.evaluate(u);
    StepRecord rec{step, u.time, last_dt, integ.sup_speed(), lipschitz_constant(u), integ.area(),
                   dissipation};
    traj.lipschitz_excess = std::max(traj.lipschitz_excess, rec.lipschitz - lip0);
    traj.records.push_back(rec);
    if (observer) observer(u, rec);

    if (next >= targets.size()) break;
    if (params.stop_at_stationarity && rec.sup_speed < params.tol_stat) {
      traj.stationary = true;
      break;
    }
    if (step >= params.max_steps) {
      fail(ErrorKind::Convergence, "step budget of " + std::to_string(params.max_steps) +
                                       " exhausted at t = " + format_double(u.time) +
                                       " with sup speed " + format_double(rec.sup_speed));
    }

    double dt;
    if (params.fixed_dt) {
      dt = *params.fixed_dt;
      const double limit = integ.cfl_dt(0.5);
      require(dt <= limit * (1.0 + 1e-12), ErrorKind::Usage,
              "fixed dt " + format_double(dt) + " exceeds the CFL limit " + format_double(limit) +
                  " at step " + std::to_string(step));
    } else {
      dt = integ.cfl_dt(params.cfl_factor);
    }
    const double gap = targets[next] - u.time;
    const bool hit = dt >= gap * (1.0 - 1e-9);
    if (hit) dt = gap;

    dissipation += dt * integ.dissipation_rate();
    ++step;
    integ.apply(u, dt, step);
    u.time = hit ? targets[next] : u.time + dt;
    last_dt = dt;

    bool stored = false;
    if (hit) {
      ++next;
      traj.snapshots.push_back(u);
      stored = true;
    }
    if (!stored && params.snapshot_every > 0 && step % params.snapshot_every == 0) {
      traj.snapshots.push_back(u);
    }
  }
  if (traj.snapshots.back().time != u.time) traj.snapshots.push_back(u);
  return traj;
}

}  // namespace

Trajectory evolve(const GraphField& u0, const FlowParams& params, const AnisotropyModel& phi,
                  const MobilityModel& psi, const StepObserver& observer) {
  return run(u0, params, phi, psi, observer, FlowKind::Physical);
}

Trajectory evolve_rescaled(const GraphField& w0, const FlowParams& params,
                           const AnisotropyModel& phi, const MobilityModel& psi,
                           const StepObserver& observer) {
  return run(w0, params, phi, psi, observer, FlowKind::Rescaled);
}

GraphField rescale_transform(const GraphField& u, GridPtr target) {
  require(u.time >= 0.0, ErrorKind::Domain, "rescaling needs t >= 0");
  require(target->dim() == u.grid->dim(), ErrorKind::Usage, "grid dimensions differ");
  const double tau = 0.5 * std::log(2.0 * u.time + 1.0);
  const double scale = std::exp(tau);
  const GraphGrid& src = *u.grid;
  const bool wrap = src.is_periodic();
  std::vector<double> values(target->size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const Point y = target->node(k);
    const Point x{y[0] * scale, y[1] * scale};
    if (!wrap) {
      for (int a = 0; a < src.dim(); ++a) {
        const double lo = src.origin()[a], hi = lo + src.h() * (src.count(a) - 1);
        const double slack = 1e-12 * (hi - lo);
        if (x[a] < lo - slack || x[a] > hi + slack) {
          fail(ErrorKind::Domain, "rescaled query x = " + format_double(x[a]) +
                                      " falls outside the physical grid");
        }
      }
    }
    values[k] = sample(u, x) / scale;
  }
  return GraphField(std::move(target), std::move(values), tau);
}

}  // namespace amcf
