#include "amcf/perturbation.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"

#include <cmath>
#include <numbers>

namespace amcf {

double bump_profile(double s) {
  if (std::abs(s) >= 0.5) return 0.0;
  const double c = std::cos(std::numbers::pi * s);
  return c * c;
}

void validate(const PerturbationSpec& p) {
  if (const auto* s = std::get_if<perturbation::SublinearBump>(&p)) {
    require(s->K >= 0.0, ErrorKind::Config, "K must be >= 0");
    require(s->delta > 0.0 && s->delta < 1.0, ErrorKind::Config, "delta out of (0,1)");
    require(s->width > 0.0, ErrorKind::Config, "width must be > 0");
  } else if (const auto* v = std::get_if<perturbation::VanishingBump>(&p)) {
    require(std::isfinite(v->amplitude), ErrorKind::Config, "amplitude must be finite");
    require(v->width > 0.0, ErrorKind::Config, "width must be > 0");
  } else {
    require(std::isfinite(std::get<perturbation::BoundedOffset>(p).m), ErrorKind::Config,
            "offset must be finite");
  }
}

double evaluate(const PerturbationSpec& p, const Point& x, int dim) {
  const double r = dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
  if (const auto* s = std::get_if<perturbation::SublinearBump>(&p)) {
    return s->K * std::pow(1.0 + r, 1.0 - s->delta) * bump_profile(r / s->width);
  }
  if (const auto* v = std::get_if<perturbation::VanishingBump>(&p)) {
    return v->amplitude * bump_profile(r / v->width);
  }
  return std::get<perturbation::BoundedOffset>(p).m;
}

std::string describe(const PerturbationSpec& p) {
  if (const auto* s = std::get_if<perturbation::SublinearBump>(&p)) {
    return "sublinear(K=" + format_double(s->K) + ",delta=" + format_double(s->delta) +
           ",width=" + format_double(s->width) + ")";
  }
  if (const auto* v = std::get_if<perturbation::VanishingBump>(&p)) {
    return "bump(amplitude=" + format_double(v->amplitude) + ",width=" + format_double(v->width) +
           ")";
  }
  return "offset(" + format_double(std::get<perturbation::BoundedOffset>(p).m) + ")";
}

}  // namespace amcf
