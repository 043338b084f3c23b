#pragma once

#include "amcf/anisotropy.hpp"
#include "amcf/grid.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace amcf {

struct FlowParams {
  double cfl_factor = 0.25;
  double end_time = 1.0;  // t for the physical flow, tau for the rescaled one
  long snapshot_every = 0;   // 0 disables
  double snapshot_dt = 0.0;  // 0 disables
  std::vector<double> snapshot_times;
  double tol_stat = 1e-8;
  bool stop_at_stationarity = true;
  /// Replaces the per-step CFL step. Each step still checks it against the
  /// c = 0.5 stability limit.
  std::optional<double> fixed_dt;
  long max_steps = 20'000'000;

  /// Throws a config error on out-of-range values.
  void validate() const;
};

/// State after `step` steps. `dt` is the step that led here (0 for the
/// initial state); `sup_speed` is sup |u_t| at this state; `dissipation` is
/// the running sum of dt h^N sum u_t^2 / psi over earlier steps.
struct StepRecord {
  long step = 0;
  double t = 0.0;
  double dt = 0.0;
  double sup_speed = 0.0;
  double lipschitz = 0.0;
  double area = 0.0;
  double dissipation = 0.0;
};

struct Trajectory {
  std::vector<GraphField> snapshots;
  std::vector<StepRecord> records;
  bool stationary = false;
  /// max over t of lipschitz(t) - lipschitz(0).
  double lipschitz_excess = 0.0;
  [[nodiscard]] bool lipschitz_flagged() const { return lipschitz_excess > 1e-6; }

  [[nodiscard]] const GraphField& final() const { return snapshots.back(); }
  void write_csv(std::ostream& out, bool rescaled = false) const;
};

using StepObserver = std::function<void(const GraphField& u, const StepRecord& record)>;

enum class FlowKind { Physical, Rescaled };

/// Owns the scratch space for repeated explicit steps on one grid.
class FlowIntegrator {
 public:
  FlowIntegrator(GridPtr grid, AnisotropyModel phi, MobilityModel psi,
                 FlowKind kind = FlowKind::Physical);
  ~FlowIntegrator();
  FlowIntegrator(FlowIntegrator&&) noexcept;
  FlowIntegrator& operator=(FlowIntegrator&&) noexcept;

  /// Computes the speed u_t of `u` and the state diagnostics below.
  void evaluate(const GraphField& u);

  [[nodiscard]] const std::vector<double>& speed() const;
  [[nodiscard]] double sup_speed() const;
  [[nodiscard]] double area() const;
  /// h^N sum u_t^2 / psi(-G, 1) for the physical flow, the same functional of
  /// the curvature part alone for the rescaled one.
  [[nodiscard]] double dissipation_rate() const;
  /// CFL step of the evaluated state for factor c; +inf when nothing limits it.
  [[nodiscard]] double cfl_dt(double c) const;

  /// u += dt * speed of the last evaluated state. Throws a numerical error on
  /// non-finite output.
  void apply(GraphField& u, double dt, long step_index) const;

  [[nodiscard]] FlowKind kind() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// c h^2 / (N psi_max_loc Lambda) from face maxima over u.
double cfl_dt(const GraphField& u, const AnisotropyModel& phi, const MobilityModel& psi,
              double c_cfl);

/// CFL step valid for every field whose face slopes stay in the box
/// |g_a| <= lipschitz; used to give paired runs identical step sequences.
double uniform_cfl_dt(int dim, double h, double lipschitz, const AnisotropyModel& phi,
                      const MobilityModel& psi, double c_cfl);

/// One explicit Euler step. Throws a usage error when dt exceeds the c = 0.5
/// stability limit.
GraphField step_explicit(const GraphField& u, double dt, const AnisotropyModel& phi,
                         const MobilityModel& psi);

Trajectory evolve(const GraphField& u0, const FlowParams& params, const AnisotropyModel& phi,
                  const MobilityModel& psi, const StepObserver& observer = {});

/// Integrates w_tau = -w + y.grad w - psi(-grad w, 1) L[w] in the rescaled
/// variables (tau, y).
Trajectory evolve_rescaled(const GraphField& w0, const FlowParams& params,
                           const AnisotropyModel& phi, const MobilityModel& psi,
                           const StepObserver& observer = {});

/// tau = log(2t + 1) / 2 and w(y) = e^-tau u(y e^tau) on `target`.
GraphField rescale_transform(const GraphField& u, GridPtr target);

}  // namespace amcf
