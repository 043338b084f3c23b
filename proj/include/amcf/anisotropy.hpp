#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace amcf {

/// Vectors and matrices in R^{N+1}, N+1 <= 3. Storage is inline.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 3, 3>;

namespace norm {

struct Euclidean {};

/// (sum |p_i|^m)^(1/m). Large m is the smooth stand-in for the cube-like
/// crystalline tension.
struct PowerNorm {
  double exponent = 2.0;
};

/// sqrt(p^T A p) with A symmetric positive definite.
struct Elliptic {
  Mat matrix;
};

/// Black-box smooth norm. The callables must agree with each other; they are
/// only ever evaluated away from the origin.
struct UserSmooth {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
  bool even = false;  // value(-p) == value(p)
};

}  // namespace norm

using NormFamily =
    std::variant<norm::Euclidean, norm::PowerNorm, norm::Elliptic, norm::UserSmooth>;

/// Surface tension phi on R^{N+1}: positive, positively 1-homogeneous,
/// convex, C^2 away from the origin. Immutable once built.
class AnisotropyModel {
 public:
  AnisotropyModel(NormFamily family, int dimension);

  static AnisotropyModel euclidean(int dimension);
  static AnisotropyModel power(double exponent, int dimension);
  static AnisotropyModel elliptic(const Mat& matrix);

  [[nodiscard]] int dimension() const { return dim_; }
  [[nodiscard]] const NormFamily& family() const { return family_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] bool is_even() const;

  [[nodiscard]] double value(const Vec& p) const;
  [[nodiscard]] Vec gradient(const Vec& p) const;
  [[nodiscard]] Mat hessian(const Vec& p) const;
  /// phi^0(q) = sup { p.q : phi(p) <= 1 }.
  [[nodiscard]] double dual(const Vec& q) const;

  // Graph-lifted fast paths, evaluated at p = (-g, 1) for a slope g in R^N.
  // These never meet the singularity at the origin.

  /// Returns phi(-g, 1) and writes the first N components of grad phi(-g, 1).
  double lifted(std::span<const double> slope, std::span<double> grad_x) const;
  /// Largest eigenvalue of the x-block of hess phi(-g, 1).
  [[nodiscard]] double lifted_lambda(std::span<const double> slope) const;

 private:
  NormFamily family_;
  int dim_;
  Mat inverse_;  // Elliptic only
};

/// Mobility psi on R^{N+1}: positive, positively 1-homogeneous, continuous.
/// Convexity is not required. Extremes over the unit sphere are cached.
class MobilityModel {
 public:
  MobilityModel(NormFamily family, int dimension);

  static MobilityModel euclidean(int dimension);

  [[nodiscard]] int dimension() const { return dim_; }
  [[nodiscard]] const NormFamily& family() const { return family_; }
  [[nodiscard]] std::string name() const;

  [[nodiscard]] double value(const Vec& p) const;
  /// psi(-g, 1).
  [[nodiscard]] double lifted(std::span<const double> slope) const;

  [[nodiscard]] double psi_max() const { return psi_max_; }
  [[nodiscard]] double psi_min() const { return psi_min_; }

 private:
  NormFamily family_;
  int dim_;
  double psi_max_ = 0.0;
  double psi_min_ = 0.0;
};

/// Unit-sphere sample in R^dim: 3600 equispaced angles on the circle, a
/// 10^4-point Fibonacci lattice on the 2-sphere.
std::vector<Vec> sphere_samples(int dimension);

/// Extremes of psi/phi over the unit sphere. These are the speeds that bound
/// the shrinking rate of a Wulff shape; they reduce to psi_min/psi_max when
/// phi is Euclidean.
struct RatioBounds {
  double min = 0.0;
  double max = 0.0;
};
RatioBounds mobility_ratio_bounds(const MobilityModel& psi, const AnisotropyModel& phi);

}  // namespace amcf
