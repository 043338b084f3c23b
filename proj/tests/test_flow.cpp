#include "amcf/cone.hpp"
#include "amcf/errors.hpp"
#include "amcf/flow.hpp"
#include "amcf/selfsimilar.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

using namespace amcf;

namespace {

GridPtr line(double h, double half_width, BoundaryPolicy bc = boundary::LinearExtrapolation{}) {
  return share(GraphGrid::centered(1, h, half_width, bc));
}

double grim_reaper(const Point& x, double t) { return t - std::log(std::cos(x[0])); }

}  // namespace

TEST(Cfl, FlatFieldSteps) {
  const auto e2 = AnisotropyModel::euclidean(2);
  const auto m2 = MobilityModel::euclidean(2);
  EXPECT_NEAR(cfl_dt(GraphField::zeros(line(0.01, 1.0)), e2, m2, 0.25), 2.5e-5, 1e-18);
  const auto sq = share(GraphGrid::centered(2, 0.02, 0.5, boundary::LinearExtrapolation{}));
  EXPECT_NEAR(cfl_dt(GraphField::zeros(sq), AnisotropyModel::euclidean(3),
                     MobilityModel::euclidean(3), 0.5),
              0.5 * 0.02 * 0.02 / 2.0, 1e-18);
}

TEST(Cfl, UnitSlopeDoublesTheStep) {
  // psi Lambda = sqrt(2) / (2 sqrt(2)) = 1/2 at slope 1.
  const auto e2 = AnisotropyModel::euclidean(2);
  const auto m2 = MobilityModel::euclidean(2);
  const auto u = GraphField::from_function(line(0.01, 1.0), [](const Point& x) { return x[0]; });
  EXPECT_NEAR(cfl_dt(u, e2, m2, 0.25), 5e-5, 1e-17);
  const double uniform = uniform_cfl_dt(1, 0.01, 1.0, e2, m2, 0.25);
  // The box bound pairs Lambda = 1 at slope 0 with psi = sqrt(2) at slope 1.
  EXPECT_LE(uniform, 2.5e-5 / std::sqrt(2.0));
  EXPECT_GT(uniform, 0.99 * 2.5e-5 / std::sqrt(2.0));
}

TEST(Cfl, StepAboveLimitIsRejected) {
  const auto e2 = AnisotropyModel::euclidean(2);
  const auto m2 = MobilityModel::euclidean(2);
  const auto u = GraphField::zeros(line(0.01, 1.0));
  try {
    (void)step_explicit(u, 1e-4, e2, m2);
    ADD_FAILURE() << "expected a usage error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Usage);
  }
}

TEST(FlowParams, Validation) {
  FlowParams p;
  p.cfl_factor = 0.9;
  EXPECT_THROW(p.validate(), Error);
  p.cfl_factor = 0.5;
  EXPECT_NO_THROW(p.validate());
  p.end_time = 0.0;
  EXPECT_THROW(p.validate(), Error);
}

TEST(Flow, AffineDataIsStationary) {
  const auto u0 = GraphField::from_function(line(0.02, 1.0), [](const Point& x) { return 0.5 * x[0] + 2.0; });
  FlowParams p;
  p.end_time = 1.0;
  const auto traj = evolve(u0, p, AnisotropyModel::euclidean(2), MobilityModel::euclidean(2));
  EXPECT_TRUE(traj.stationary);
  EXPECT_EQ(traj.records.size(), 1u);
  EXPECT_EQ(traj.final().values, u0.values);
}

TEST(Flow, ZeroDataStopsImmediately) {
  const auto grid = share(GraphGrid::periodic(2, 0.1, 1.0, 0.0));
  FlowParams p;
  p.end_time = 5.0;
  const auto traj = evolve(GraphField::zeros(grid), p, AnisotropyModel::power(4.0, 3),
                           MobilityModel::euclidean(3));
  EXPECT_TRUE(traj.stationary);
  EXPECT_EQ(traj.final().time, 0.0);
  EXPECT_EQ(traj.records.front().sup_speed, 0.0);
}

TEST(Flow, ConstantShiftCommutesWithFlow) {
  const auto grid = share(GraphGrid::periodic(1, 2.0 * std::numbers::pi / 128, 2.0 * std::numbers::pi, 0.0));
  const auto u0 = GraphField::from_function(grid, [](const Point& x) { return 0.4 * std::sin(x[0]); });
  auto v0 = u0;
  for (double& v : v0.values) v += 7.0;
  FlowParams p;
  p.end_time = 0.2;
  const auto phi = AnisotropyModel::power(4.0, 2);
  const auto psi = MobilityModel::euclidean(2);
  const auto a = evolve(u0, p, phi, psi);
  const auto b = evolve(v0, p, phi, psi);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t k = 0; k < u0.size(); ++k) {
    EXPECT_NEAR(b.final().values[k] - a.final().values[k], 7.0, 1e-12);
  }
}

TEST(Flow, GrimReaperSingleStepMovesAtUnitSpeed) {
  const auto grid = line(0.01, 1.0, boundary::DirichletExact{grim_reaper});
  const auto u0 = GraphField::from_function(grid, [](const Point& x) { return grim_reaper(x, 0.0); });
  const auto phi = AnisotropyModel::euclidean(2);
  const auto psi = MobilityModel::euclidean(2);
  const double dt = cfl_dt(u0, phi, psi, 0.25);
  const auto u1 = step_explicit(u0, dt, phi, psi);
  EXPECT_EQ(u1.time, dt);
  for (std::size_t k = 0; k < u0.size(); ++k) {
    EXPECT_NEAR((u1.values[k] - u0.values[k]) / dt, 1.0, 1e-3);
  }
}

TEST(Flow, SnapshotsLandOnRequestedTimes) {
  const auto grid = share(GraphGrid::periodic(1, 0.1, 2.0, 0.0));
  const auto u0 = GraphField::from_function(grid, [](const Point& x) { return 0.1 * std::sin(std::numbers::pi * x[0]); });
  FlowParams p;
  p.end_time = 0.3;
  p.snapshot_dt = 0.1;
  p.snapshot_times = {0.05};
  const auto traj = evolve(u0, p, AnisotropyModel::euclidean(2), MobilityModel::euclidean(2));
  std::vector<double> times;
  for (const auto& s : traj.snapshots) times.push_back(s.time);
  ASSERT_EQ(times.size(), 5u);
  EXPECT_EQ(times[0], 0.0);
  EXPECT_DOUBLE_EQ(times[1], 0.05);
  EXPECT_DOUBLE_EQ(times[2], 0.1);
  EXPECT_DOUBLE_EQ(times[3], 0.2);
  EXPECT_EQ(times[4], 0.3);
  std::ostringstream csv;
  traj.write_csv(csv);
  EXPECT_EQ(csv.str().rfind("step,t,dt,sup_speed,lipschitz,area,dissipation\n", 0), 0u);
}

TEST(Flow, NonFiniteDataIsANumericalError) {
  auto u0 = GraphField::zeros(line(0.1, 1.0));
  u0.values[3] = std::nan("");
  try {
    (void)evolve(u0, FlowParams{}, AnisotropyModel::euclidean(2), MobilityModel::euclidean(2));
    ADD_FAILURE() << "expected a numerical error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Numerical);
  }
}

TEST(FlowProperty, PeriodicFlowDoesNotRaiseMaximumOrLipschitz) {
  const auto grid = share(GraphGrid::periodic(1, 2.0 * std::numbers::pi / 64, 2.0 * std::numbers::pi, 0.0));
  const auto u0 = GraphField::from_function(grid, [](const Point& x) {
    return 0.3 * std::sin(x[0]) + 0.2 * std::cos(3.0 * x[0] + 1.0);
  });
  FlowParams p;
  p.end_time = 1.0;
  const double max0 = *std::max_element(u0.values.begin(), u0.values.end());
  const auto traj = evolve(u0, p, AnisotropyModel::power(4.0, 2), MobilityModel::euclidean(2),
                           [&](const GraphField& u, const StepRecord&) {
                             EXPECT_LE(*std::max_element(u.values.begin(), u.values.end()),
                                       max0 + 1e-14);
                           });
  EXPECT_LE(traj.lipschitz_excess, 1e-12);
  for (std::size_t k = 1; k < traj.records.size(); ++k) {
    EXPECT_GE(traj.records[k].dissipation, traj.records[k - 1].dissipation);
  }
}

TEST(Rescale, TauAndProfile) {
  const auto grid = line(0.05, 4.0, boundary::ConeExtension{ConeSpec::abs(1.0, 1)});
  auto u = GraphField::from_function(grid, [](const Point& x) { return std::abs(x[0]) + x[0] * x[0]; });
  const auto target = line(0.05, 2.0);
  const auto w0 = rescale_transform(u, target);
  EXPECT_EQ(w0.time, 0.0);
  for (std::size_t k = 0; k < w0.size(); ++k) {
    const double y = target->node(k)[0];
    EXPECT_NEAR(w0.values[k], std::abs(y) + y * y, 1e-14);
  }
  u.time = 1.5;
  const auto w = rescale_transform(u, target);
  EXPECT_NEAR(w.time, std::log(2.0), 1e-15);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double y = target->node(k)[0];
    EXPECT_NEAR(w.values[k], std::abs(y) + 2.0 * y * y, 1e-13);
  }
  u.time = -0.1;
  EXPECT_THROW((void)rescale_transform(u, target), Error);
}

TEST(Rescale, PhysicalAndRescaledRoutesAgree) {
  const ConeSpec cone = ConeSpec::abs(1.0, 1);
  const auto phi = AnisotropyModel::euclidean(2);
  const auto psi = MobilityModel::euclidean(2);
  const auto physical = line(0.025, 8.0, boundary::ConeExtension{cone});
  FlowParams p;
  p.end_time = 1.5;
  const auto u = evolve(make_cone_field(cone, physical), p, phi, psi).final();

  const auto rescaled = line(0.05, 3.0, boundary::ConeExtension{cone});
  FlowParams q;
  q.end_time = std::log(2.0);
  const auto w = evolve_rescaled(make_cone_field(cone, rescaled), q, phi, psi).final();
  const auto mapped = rescale_transform(u, rescaled);
  double err = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (std::abs(rescaled->node(k)[0]) <= 1.0) err = std::max(err, std::abs(w.values[k] - mapped.values[k]));
  }
  EXPECT_LT(err, 2e-2);
}

TEST(Rescale, ExpanderIsAFixedPoint) {
  const ConeSpec cone = ConeSpec::abs(1.0, 1);
  const auto phi = AnisotropyModel::euclidean(2);
  const auto psi = MobilityModel::euclidean(2);
  const auto grid = line(0.02, 4.0, boundary::ConeExtension{cone});
  FlowParams p;
  p.end_time = 60.0;
  p.tol_stat = 1e-8;
  const auto e = compute_expander(cone, p, phi, psi, grid);
  EXPECT_LT(e.residual, 1e-8);
  // Continue the rescaled flow: the profile must not move.
  FlowParams more;
  more.end_time = e.profile.time + 1.0;
  more.stop_at_stationarity = false;
  const auto drift = evolve_rescaled(e.profile, more, phi, psi).final();
  double change = 0.0;
  for (std::size_t k = 0; k < drift.size(); ++k) {
    change = std::max(change, std::abs(drift.values[k] - e.profile.values[k]));
  }
  EXPECT_LT(change, 1e-7);
  // Even, above the cone, and w(0) near the shooting value for slope 1.
  const int n = grid->count(0);
  for (int i = 0; i < n; ++i) {
    EXPECT_NEAR(e.profile.values[i], e.profile.values[n - 1 - i], 1e-10);
    EXPECT_GE(e.profile.values[i], cone(grid->node(i)) - 1e-10);
  }
  EXPECT_NEAR(e.profile.values[grid->node_at({0.0, 0.0})], 0.7385645418737248, 1e-2);
}
