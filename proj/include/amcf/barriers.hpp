#pragma once

#include "amcf/anisotropy.hpp"
#include "amcf/flow.hpp"
#include "amcf/grid.hpp"
#include "amcf/report.hpp"

namespace amcf {

struct WulffRadii {
  double lower = 0.0;
  double upper = 0.0;
};

/// sqrt(R^2 - 2 s_max N t) and sqrt(R^2 - 2 s_min N t) with s the mobility
/// extremes over the unit sphere. Throws a domain error past the extinction
/// time R^2 / (2 N s_max).
WulffRadii shrinking_wulff_radii(double R, double t, int N, const MobilityModel& psi);

/// Same with s the extremes of psi / phi, the speeds that actually bound a
/// homothetic Wulff shape when phi is not 1 on the unit sphere.
WulffRadii shrinking_wulff_radii(double R, double t, int N, const MobilityModel& psi,
                                 const AnisotropyModel& phi);

struct PeriodicBarrierSpec {
  double R = 1.0;
  double M = 1.0;    // sup level of the data the barrier dominates
  double eps = 0.2;  // margin, 0 < eps < M / 2

  [[nodiscard]] double period() const { return 8.0 * R; }
  [[nodiscard]] double midlevel() const { return 0.75 * M + 0.5 * eps; }
  [[nodiscard]] double top() const { return M + eps; }
  [[nodiscard]] double bottom() const { return 2.0 * midlevel() - top(); }
  void validate() const;
  /// Plateau top on [-R, R], cubic smoothstep descent to bottom on [R, 3R],
  /// bottom plateau on [3R, 5R], mirrored ascent, 8R-periodic.
  [[nodiscard]] double operator()(double z) const;
};

/// Throws a config error unless the grid is 1-D periodic with period 8R.
GraphField periodic_barrier_profile(const PeriodicBarrierSpec& spec, GridPtr grid);

struct ComparisonResult {
  ExperimentReport report{"comparison"};
  double max_violation = 0.0;  // max over snapshots and nodes of lower - upper
  std::size_t snapshot = 0;
  std::size_t node = 0;
};

/// Pass iff max (lower - upper) <= tol. Throws a usage error when grids or
/// snapshot times differ.
ComparisonResult comparison_check(const Trajectory& lower, const Trajectory& upper,
                                  double tol = 1e-10);

struct WulffBarrierSetup {
  AnisotropyModel phi = AnisotropyModel::euclidean(2);
  MobilityModel psi = MobilityModel::euclidean(2);
  double radius = 2.0;
  double h = 0.01;
  double half_width = 1.5;
  double end_time = 0.5;
  double cfl = 0.25;
  double snapshot_dt = 0.05;
  /// Use the mobility extremes alone for the radii, as in the isotropic
  /// statement; by default the psi / phi extremes are used.
  bool mobility_extremes_only = false;
  int dim = 1;
};

struct WulffBarrierResult {
  ExperimentReport report{"wulff_barrier"};
  double below_violation = 0.0;  // max of w_{R_upper(t)} - u
  double above_violation = 0.0;  // max of u - w_{R_lower(t)}
  double apex = 0.0;             // u(0, T)
  double apex_reference = 0.0;   // cap height at 0 for the mid radius at T
  double first_violation_time = -1.0;
  std::size_t first_violation_node = 0;
};

/// Evolves the lower cap of radius R with Dirichlet ghosts from the cap of the
/// mid radius and checks w_{R_upper(t)} - 5h^2 <= u <= w_{R_lower(t)} + 5h^2 at
/// every snapshot. Throws a config error unless T <= extinction / 4.
WulffBarrierResult wulff_barrier_check(const WulffBarrierSetup& setup);

}  // namespace amcf
