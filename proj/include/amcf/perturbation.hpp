#pragma once

#include "amcf/point.hpp"

#include <string>
#include <variant>

namespace amcf {

namespace perturbation {

/// K (1 + |x|)^(1 - delta) bump(x / width).
struct SublinearBump {
  double K = 1.0;
  double delta = 0.5;
  double width = 4.0;
};

/// amplitude * bump(x / width).
struct VanishingBump {
  double amplitude = 1.0;
  double width = 2.0;
};

struct BoundedOffset {
  double m = 0.1;
};

}  // namespace perturbation

using PerturbationSpec = std::variant<perturbation::SublinearBump, perturbation::VanishingBump,
                                      perturbation::BoundedOffset>;

/// cos^2(pi s) for |s| <= 1/2, zero outside: C^{1,1} with support diameter 1,
/// so `width` is the diameter of the perturbation's support.
double bump_profile(double s);

/// Throws a config error on out-of-range parameters.
void validate(const PerturbationSpec& p);

double evaluate(const PerturbationSpec& p, const Point& x, int dim);

std::string describe(const PerturbationSpec& p);

}  // namespace amcf
