#pragma once

#include "amcf/anisotropy.hpp"
#include "amcf/cone.hpp"
#include "amcf/experiments.hpp"
#include "amcf/flow.hpp"
#include "amcf/perturbation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace amcf {

/// {family, parameters} record for phi or psi. `matrix` is row-major with
/// (N+1)^2 entries and only used by the elliptic family.
struct NormRecord {
  std::string family = "euclidean";  // euclidean | power | elliptic
  double exponent = 4.0;
  std::vector<double> matrix;

  bool operator==(const NormRecord&) const = default;
};

struct GridRecord {
  int dim = 1;
  double h = 0.02;
  double half_width = 8.0;
  double period = 16.0;
  int count = 256;  // nodes per axis where a run takes a node count
  std::string boundary = "cone";  // cone | periodic | linear

  bool operator==(const GridRecord&) const = default;
};

struct FlowRecord {
  double cfl_factor = 0.25;
  double end_time = 1.0;  // T, or tau_end for rescaled runs
  long snapshot_every = 0;
  double snapshot_dt = 0.0;
  double tol_stat = 1e-8;

  bool operator==(const FlowRecord&) const = default;
};

struct ExperimentRecord {
  std::string id;  // empty selects the subcommand's default
  std::string cone = "abs";  // abs | max_affine
  double slope = 1.0;
  std::vector<double> slopes;  // max_affine slope vectors, N numbers each
  std::string perturbation = "none";  // none | sublinear | vanishing | offset
  double K = 1.0;
  double delta = 0.5;
  double width = 4.0;
  double amplitude = 1.0;
  double offset = 0.1;
  double t1 = 1.0;
  double t2 = 4.0;
  double radius = 2.0;
  long pairs = 100;
  double threshold = 0.0;  // 0 keeps the experiment's default

  bool operator==(const ExperimentRecord&) const = default;
};

struct RunConfig {
  NormRecord anisotropy;
  NormRecord mobility;
  GridRecord grid;
  FlowRecord flow;
  ExperimentRecord experiment;
  std::string output_dir = "out";
  std::optional<std::uint64_t> seed;

  bool operator==(const RunConfig&) const = default;
};

/// Parses the sectioned key = value schema documented in the README. Unknown
/// keys, missing required keys ([grid] N and h) and out-of-range values raise
/// parse errors naming the line and key.
RunConfig parse_config(const std::string& text);

/// Every key with its resolved value; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

/// Applies "section.key=value" on top of `text` before parsing.
RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides);

AnisotropyModel make_anisotropy(const RunConfig& config);
MobilityModel make_mobility(const RunConfig& config);
ConeSpec make_cone(const RunConfig& config);
/// Empty for perturbation = none.
std::optional<PerturbationSpec> make_perturbation(const RunConfig& config);
FlowParams make_flow_params(const RunConfig& config);

}  // namespace amcf
