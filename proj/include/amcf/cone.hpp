#pragma once

#include "amcf/point.hpp"

#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace amcf {

namespace cone {

/// alpha |x|.
struct AbsCone {
  double slope = 1.0;
};

/// max_i a_i . x
struct MaxAffine {
  std::vector<Point> slopes;
};

/// |x| g(x/|x|) for a function g on the unit sphere of R^N.
struct RadialProfile {
  std::function<double(const Point& direction)> on_sphere;
};

}  // namespace cone

using ConeFamily = std::variant<cone::AbsCone, cone::MaxAffine, cone::RadialProfile>;

/// Positively 1-homogeneous Lipschitz function on R^N: the initial datum whose
/// flow is self-similar.
class ConeSpec {
 public:
  ConeSpec(ConeFamily family, int dimension);

  static ConeSpec abs(double slope, int dimension) { return {cone::AbsCone{slope}, dimension}; }

  [[nodiscard]] int dimension() const { return dim_; }
  [[nodiscard]] const ConeFamily& family() const { return family_; }
  [[nodiscard]] double operator()(const Point& x) const;
  [[nodiscard]] double lipschitz() const { return lipschitz_; }
  /// True when the cone is identically zero.
  [[nodiscard]] bool is_flat() const { return lipschitz_ == 0.0; }
  [[nodiscard]] std::string name() const;

 private:
  ConeFamily family_;
  int dim_;
  double lipschitz_ = 0.0;
};

}  // namespace amcf
