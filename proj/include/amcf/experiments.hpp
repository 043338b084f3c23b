#pragma once

#include "amcf/anisotropy.hpp"
#include "amcf/cone.hpp"
#include "amcf/perturbation.hpp"
#include "amcf/report.hpp"

#include <cstdint>

namespace amcf {

struct RescaledConvergenceSetup {
  AnisotropyModel phi = AnisotropyModel::euclidean(2);
  MobilityModel psi = MobilityModel::euclidean(2);
  double h = 0.02;
  double half_width = 8.0;
  double cfl = 0.25;
  double tau_end = 12.0;
  double sample_dtau = 0.05;
  double threshold = 1e-2;  // bound on the final D
  double tol_stat = 1e-8;
};

/// Rescaled flows from cone + perturbation and from the cone, run in lockstep.
/// D(tau) = sup_{|y| <= 1} of their difference must decrease over the last
/// half and end below the threshold; the cone run must land on the expander.
/// A BoundedOffset perturbation also checks that D decays at rate 1 +- 10%.
ExperimentReport exp_rescaled_convergence(const ConeSpec& cone, const PerturbationSpec& perturbation,
                                          const RescaledConvergenceSetup& setup = {});

struct HyperplaneSetup {
  AnisotropyModel phi = AnisotropyModel::euclidean(2);
  MobilityModel psi = MobilityModel::euclidean(2);
  double h = 0.02;
  double period = 16.0;
  double end_time = 12.0;
  double cfl = 0.25;
  double barrier_margin = 0.2;  // eps as a fraction of sup u0
  double sample_dt = 0.05;
};

/// 1-D periodic evolution of a bump next to the matched periodic barrier and
/// the sign-flipped bump, all with one fixed step. Checks that M(t) = sup |u|
/// does not increase, M(T) < M(0) / 10, the barrier stays on top, and the
/// discrete area/dissipation balance of both the bump and barrier runs.
ExperimentReport exp_hyperplane_stability(const perturbation::VanishingBump& bump,
                                          const HyperplaneSetup& setup = {});

struct MeanConvexSetup {
  AnisotropyModel phi = AnisotropyModel::euclidean(3);
  MobilityModel psi = MobilityModel::euclidean(3);
  double h = 0.05;
  int count = 256;  // nodes per axis
  double end_time = 4.0;
  double cfl = 0.25;
  double sample_dt = 0.1;
  double apex_from = 1.0;  // start of the window for u(0, t) / sqrt(t)
  double precondition_radius = 0.5;
  double threshold = 2e-2;  // bound on the final local gap
};

/// 2-D cone flow and cone + bump flow with cone-extension ghosts. Throws a
/// config error when the discrete curvature of the cone is not negative away
/// from the apex.
ExperimentReport exp_meanconvex_stability(const ConeSpec& cone,
                                          const perturbation::VanishingBump& bump,
                                          const MeanConvexSetup& setup = {});

struct GrimReaperSetup {
  double h = 0.01;
  double end_time = 1.0;
  double half_width = 1.2;
  double cfl = 0.25;
  double threshold = 1e-3;
  double min_order = 1.9;
};

/// t - log cos x on |x| <= half_width with exact Dirichlet ghosts, at h and 2h.
ExperimentReport oracle_grim_reaper(const GrimReaperSetup& setup = {});

/// w(0) of the even solution of w'' = (1 + w'^2)(w - y w') with w'(+inf) =
/// alpha, by RK4 shooting on [0, 10] and bisection on w(0) to `tol`. Throws a
/// convergence error when the bracket does not straddle alpha.
double oracle_expander_ode(double alpha, double tol = 1e-12);

struct ComparisonSetup {
  AnisotropyModel phi = AnisotropyModel::euclidean(2);
  MobilityModel psi = MobilityModel::euclidean(2);
  int dim = 1;
  int count = 64;  // nodes per axis on a period of 2 pi
  double end_time = 0.5;
  double cfl = 0.25;
  int pairs = 100;
  std::uint64_t seed = 1;
  double tol = 1e-10;
};

/// Seeded random ordered pairs u0 <= v0 of trigonometric data with Lipschitz
/// constant at most 1, evolved with a shared fixed step; reports the largest
/// u - v over every step of every pair.
ExperimentReport exp_random_comparison(const ComparisonSetup& setup = {});

}  // namespace amcf
