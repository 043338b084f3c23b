#pragma once

#include "amcf/anisotropy.hpp"
#include "amcf/cone.hpp"
#include "amcf/flow.hpp"
#include "amcf/grid.hpp"
#include "amcf/report.hpp"

#include <iosfwd>
#include <utility>
#include <vector>

namespace amcf {

GraphField make_cone_field(const ConeSpec& cone, GridPtr grid);

struct ScalingSetup {
  AnisotropyModel phi = AnisotropyModel::euclidean(2);
  MobilityModel psi = MobilityModel::euclidean(2);
  double h = 0.01;
  double half_width = 32.0;
  double cfl = 0.25;
  /// Extra times at which u(0, t) is recorded.
  std::vector<double> apex_times;
};

struct ScalingResult {
  ExperimentReport report{"scaling"};
  double u1 = 0.0;
  double u2 = 0.0;
  double ratio = 0.0;
  double exact_ratio = 1.0;
  double profile_error = 0.0;
  bool degenerate = false;
  std::vector<std::pair<double, double>> apex_series;  // (t, u(0, t))
  double lipschitz_excess = 0.0;
};

/// Evolves the cone on a centred grid with cone-extension ghosts and compares
/// u(., t2) against the homothetic image of u(., t1). Throws a config error
/// when half_width < 8 sqrt(t2 psi_max).
ScalingResult scaling_check(const ConeSpec& cone, double t1, double t2, const ScalingSetup& setup);

/// max over pairs of |u(0, t) - u(0, s)| / sqrt|t - s| with t, s in [t_lo, t_hi].
double holder_constant(const std::vector<std::pair<double, double>>& series, double t_lo,
                       double t_hi);

struct ExpanderProfile {
  GraphField profile;
  double residual = 0.0;
  double c = 1.0;
  double tau = 0.0;
  long steps = 0;
};

/// Long-time limit of the rescaled flow started from the cone. The grid must
/// carry cone-extension ghosts. Throws a convergence error, with the residual
/// history, when params.end_time passes before sup |w_tau| < tol_stat.
ExpanderProfile compute_expander(const ConeSpec& cone, const FlowParams& params,
                                 const AnisotropyModel& phi, const MobilityModel& psi,
                                 GridPtr grid);
/// Same, started from arbitrary data on a cone-extension grid.
ExpanderProfile compute_expander(const GraphField& w0, const FlowParams& params,
                                 const AnisotropyModel& phi, const MobilityModel& psi);

/// Snapshot with "c" and "residual" header lines.
void write_expander(std::ostream& out, const ExpanderProfile& e);

struct FarFieldResult {
  ExperimentReport report{"far_field"};
  std::vector<double> rho;
  std::vector<double> distance;  // max over |y| = rho of |profile - cone|
  double min_above_cone = 0.0;   // min over nodes of profile - cone
};

/// Distances on `rings` equispaced rings out to the inner half width. The
/// decrease test on the outer half tolerates `slack` per ring.
FarFieldResult expander_far_field(const ExpanderProfile& profile, const ConeSpec& cone,
                                  int rings = 16, double slack = 1e-7);

/// u(x, t) = lambda u1(x / lambda), lambda = sqrt(2 c (t - 1) + 1), on u1's
/// grid. Throws a domain error for t <= 1 - 1/(2c).
GraphField backward_extend(const GraphField& u1, double c, double t);

}  // namespace amcf
