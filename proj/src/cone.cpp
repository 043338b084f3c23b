#include "amcf/cone.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace amcf {

namespace {

double radial_eval(const cone::RadialProfile& f, int dim, const Point& x) {
  const double r = dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
  if (r == 0.0) return 0.0;
  return r * f.on_sphere(Point{x[0] / r, dim == 1 ? 0.0 : x[1] / r});
}

}  // namespace

ConeSpec::ConeSpec(ConeFamily family, int dimension) : family_(std::move(family)), dim_(dimension) {
  require(dim_ == 1 || dim_ == 2, ErrorKind::Usage, "cones are defined on R^1 or R^2");
  if (const auto* a = std::get_if<cone::AbsCone>(&family_)) {
    require(a->slope >= 0.0, ErrorKind::Usage, "abs cone slope must be >= 0");
    lipschitz_ = a->slope;
  } else if (const auto* m = std::get_if<cone::MaxAffine>(&family_)) {
    require(!m->slopes.empty(), ErrorKind::Usage, "max-affine cone needs at least one slope");
    for (const auto& a : m->slopes) {
      lipschitz_ = std::max(lipschitz_, dim_ == 1 ? std::abs(a[0]) : std::hypot(a[0], a[1]));
    }
  } else {
    const auto& rp = std::get<cone::RadialProfile>(family_);
    require(static_cast<bool>(rp.on_sphere), ErrorKind::Usage, "radial cone needs a profile");
    if (dim_ == 1) {
      lipschitz_ = std::max(std::abs(rp.on_sphere({1.0, 0.0})), std::abs(rp.on_sphere({-1.0, 0.0})));
    } else {
      // |grad| on the unit circle by central differences; the gradient is
      // 0-homogeneous so the circle suffices.
      constexpr int kSamples = 3600;
      constexpr double kStep = 1e-6;
      for (int k = 0; k < kSamples; ++k) {
        const double th = 2.0 * std::numbers::pi * k / kSamples;
        const Point x{std::cos(th), std::sin(th)};
        const double gx = (radial_eval(rp, 2, {x[0] + kStep, x[1]}) -
                           radial_eval(rp, 2, {x[0] - kStep, x[1]})) / (2 * kStep);
        const double gy = (radial_eval(rp, 2, {x[0], x[1] + kStep}) -
                           radial_eval(rp, 2, {x[0], x[1] - kStep})) / (2 * kStep);
        lipschitz_ = std::max(lipschitz_, std::hypot(gx, gy));
      }
    }
  }
}

double ConeSpec::operator()(const Point& x) const {
  if (const auto* a = std::get_if<cone::AbsCone>(&family_)) {
    return a->slope * (dim_ == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]));
  }
  if (const auto* m = std::get_if<cone::MaxAffine>(&family_)) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& a : m->slopes) {
      best = std::max(best, a[0] * x[0] + (dim_ == 2 ? a[1] * x[1] : 0.0));
    }
    return best;
  }
  return radial_eval(std::get<cone::RadialProfile>(family_), dim_, x);
}

std::string ConeSpec::name() const {
  std::ostringstream out;
  if (const auto* a = std::get_if<cone::AbsCone>(&family_)) {
    out << "abs(" << format_double(a->slope) << ")";
  } else if (const auto* m = std::get_if<cone::MaxAffine>(&family_)) {
    out << "maxaffine(";
    for (std::size_t i = 0; i < m->slopes.size(); ++i) {
      out << (i ? ";" : "") << format_double(m->slopes[i][0]);
      if (dim_ == 2) out << "," << format_double(m->slopes[i][1]);
    }
    out << ")";
  } else {
    out << "radial";
  }
  return out.str();
}

}  // namespace amcf
