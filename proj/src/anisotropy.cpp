#include "amcf/anisotropy.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace amcf {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return "usage";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Config: return "config";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Assertion: return "assertion";
  }
  return "unknown";
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_dimension(const Vec& p, int dim) {
  if (p.size() != dim) {
    std::ostringstream msg;
    msg << "vector of dimension " << p.size() << " passed to a model on R^" << dim;
    fail(ErrorKind::Usage, msg.str());
  }
}

void validate_family(const NormFamily& family, int dim, bool need_derivatives) {
  require(dim == 2 || dim == 3, ErrorKind::Usage, "norm models live on R^2 or R^3");
  std::visit(overloaded{
                 [](const norm::Euclidean&) {},
                 [](const norm::PowerNorm& f) {
                   require(f.exponent > 1.0 && std::isfinite(f.exponent), ErrorKind::Usage,
                           "power norm exponent must be > 1");
                 },
                 [dim](const norm::Elliptic& f) {
                   require(f.matrix.rows() == dim && f.matrix.cols() == dim, ErrorKind::Usage,
                           "elliptic matrix must be (N+1)x(N+1)");
                   require((f.matrix - f.matrix.transpose()).cwiseAbs().maxCoeff() <=
                               1e-12 * f.matrix.cwiseAbs().maxCoeff(),
                           ErrorKind::Usage, "elliptic matrix must be symmetric");
                   Eigen::LLT<Mat> llt(f.matrix);
                   require(llt.info() == Eigen::Success, ErrorKind::Usage,
                           "elliptic matrix must be positive definite");
                 },
                 [need_derivatives](const norm::UserSmooth& f) {
                   require(static_cast<bool>(f.value), ErrorKind::Usage,
                           "user norm needs a value callable");
                   if (need_derivatives) {
                     require(f.gradient && f.hessian, ErrorKind::Usage,
                             "user anisotropy needs gradient and hessian callables");
                   }
                 },
             },
             family);
}

double family_value(const NormFamily& family, const Vec& p) {
  return std::visit(overloaded{
                        [&](const norm::Euclidean&) { return p.norm(); },
                        [&](const norm::PowerNorm& f) {
                          const double scale = p.cwiseAbs().maxCoeff();
                          if (scale == 0.0) return 0.0;
                          double s = 0.0;
                          for (int i = 0; i < p.size(); ++i) {
                            s += std::pow(std::abs(p[i]) / scale, f.exponent);
                          }
                          return scale * std::pow(s, 1.0 / f.exponent);
                        },
                        [&](const norm::Elliptic& f) {
                          return std::sqrt(std::max(0.0, p.dot(f.matrix * p)));
                        },
                        [&](const norm::UserSmooth& f) { return f.value(p); },
                    },
                    family);
}

// Largest eigenvalue of the leading n x n block, n in {1, 2}.
double largest_eigenvalue(const Mat& m, int n) {
  if (n == 1) return m(0, 0);
  const double a = m(0, 0), b = 0.5 * (m(0, 1) + m(1, 0)), c = m(1, 1);
  return 0.5 * (a + c) + std::hypot(0.5 * (a - c), b);
}

}  // namespace

std::vector<Vec> sphere_samples(int dimension) {
  std::vector<Vec> out;
  if (dimension == 2) {
    constexpr int kAngles = 3600;
    out.reserve(kAngles);
    for (int k = 0; k < kAngles; ++k) {
      const double theta = 2.0 * std::numbers::pi * k / kAngles;
      Vec v(2);
      v << std::cos(theta), std::sin(theta);
      out.push_back(v);
    }
  } else if (dimension == 3) {
    constexpr int kPoints = 10000;
    out.reserve(kPoints);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < kPoints; ++k) {
      const double z = 1.0 - 2.0 * (k + 0.5) / kPoints;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double theta = golden * k;
      Vec v(3);
      v << r * std::cos(theta), r * std::sin(theta), z;
      out.push_back(v);
    }
  } else {
    fail(ErrorKind::Usage, "sphere samples exist for R^2 and R^3 only");
  }
  return out;
}

// ---------------------------------------------------------------------------
// AnisotropyModel

AnisotropyModel::AnisotropyModel(NormFamily family, int dimension)
    : family_(std::move(family)), dim_(dimension) {
  validate_family(family_, dim_, true);
  if (const auto* e = std::get_if<norm::Elliptic>(&family_)) {
    inverse_ = e->matrix.inverse();
  }
}

AnisotropyModel AnisotropyModel::euclidean(int dimension) {
  return AnisotropyModel(norm::Euclidean{}, dimension);
}

AnisotropyModel AnisotropyModel::power(double exponent, int dimension) {
  return AnisotropyModel(norm::PowerNorm{exponent}, dimension);
}

AnisotropyModel AnisotropyModel::elliptic(const Mat& matrix) {
  return AnisotropyModel(norm::Elliptic{matrix}, static_cast<int>(matrix.rows()));
}

std::string AnisotropyModel::name() const {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const norm::Euclidean&) { out << "euclidean"; },
                 [&](const norm::PowerNorm& f) { out << "power(" << format_double(f.exponent) << ")"; },
                 [&](const norm::Elliptic& f) {
                   out << "elliptic(";
                   for (int i = 0; i < f.matrix.rows(); ++i) {
                     for (int j = 0; j < f.matrix.cols(); ++j) {
                       out << (i + j > 0 ? "," : "") << format_double(f.matrix(i, j));
                     }
                   }
                   out << ")";
                 },
                 [&](const norm::UserSmooth&) { out << "user"; },
             },
             family_);
  return out.str();
}

bool AnisotropyModel::is_even() const {
  if (const auto* u = std::get_if<norm::UserSmooth>(&family_)) return u->even;
  return true;
}

double AnisotropyModel::value(const Vec& p) const {
  check_dimension(p, dim_);
  return family_value(family_, p);
}

Vec AnisotropyModel::gradient(const Vec& p) const {
  check_dimension(p, dim_);
  const double phi = family_value(family_, p);
  require(phi > 0.0, ErrorKind::Singularity, "gradient of phi is undefined at the origin");
  return std::visit(overloaded{
                        [&](const norm::Euclidean&) -> Vec { return p / phi; },
                        [&](const norm::PowerNorm& f) -> Vec {
                          Vec g(p.size());
                          for (int i = 0; i < p.size(); ++i) {
                            const double r = std::abs(p[i]) / phi;
                            g[i] = std::copysign(std::pow(r, f.exponent - 1.0), p[i]);
                            if (p[i] == 0.0) g[i] = 0.0;
                          }
                          return g;
                        },
                        [&](const norm::Elliptic& f) -> Vec { return f.matrix * p / phi; },
                        [&](const norm::UserSmooth& f) -> Vec { return f.gradient(p); },
                    },
                    family_);
}

Mat AnisotropyModel::hessian(const Vec& p) const {
  check_dimension(p, dim_);
  const double phi = family_value(family_, p);
  require(phi > 0.0, ErrorKind::Singularity, "hessian of phi is undefined at the origin");
  const Vec g = gradient(p);
  return std::visit(
      overloaded{
          [&](const norm::Euclidean&) -> Mat {
            return (Mat::Identity(dim_, dim_) - g * g.transpose()) / phi;
          },
          [&](const norm::PowerNorm& f) -> Mat {
            Mat h = -g * g.transpose();
            for (int i = 0; i < dim_; ++i) {
              if (p[i] == 0.0 && f.exponent < 2.0) {
                fail(ErrorKind::Singularity,
                     "power norm with exponent < 2 has no hessian on coordinate planes");
              }
              h(i, i) += std::pow(std::abs(p[i]) / phi, f.exponent - 2.0);
            }
            return (f.exponent - 1.0) / phi * h;
          },
          [&](const norm::Elliptic& f) -> Mat { return (f.matrix - g * g.transpose()) / phi; },
          [&](const norm::UserSmooth& f) -> Mat { return f.hessian(p); },
      },
      family_);
}

namespace {

// Maximize d.q / phi(d) over unit directions d: the sup of p.q over {phi = 1}.
double sampled_dual(const NormFamily& family, int dim, const Vec& q) {
  if (q.isZero(0.0)) return 0.0;
  auto objective = [&](const Vec& d) { return d.dot(q) / family_value(family, d); };
  const auto samples = sphere_samples(dim);
  Vec best = samples.front();
  double best_value = objective(best);
  for (const auto& d : samples) {
    const double v = objective(d);
    if (v > best_value) {
      best_value = v;
      best = d;
    }
  }
  if (dim == 2) {
    // golden-section refinement in the angle around the best sample
    const double theta0 = std::atan2(best[1], best[0]);
    const double width = 2.0 * std::numbers::pi / 3600.0;
    auto f = [&](double theta) {
      Vec d(2);
      d << std::cos(theta), std::sin(theta);
      return objective(d);
    };
    double a = theta0 - width, b = theta0 + width;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a), e = a + inv_phi * (b - a);
    double fc = f(c), fe = f(e);
    for (int it = 0; it < 80; ++it) {
      if (fc > fe) {
        b = e;
        e = c;
        fe = fc;
        c = b - inv_phi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = e;
        fc = fe;
        e = a + inv_phi * (b - a);
        fe = f(e);
      }
    }
    return std::max(best_value, f(0.5 * (a + b)));
  }
  // pattern search on the 2-sphere
  double step = 0.05;
  while (step > 1e-10) {
    Vec t1 = best.unitOrthogonal();
    Vec t2 = best.head<3>().cross(t1.head<3>());
    bool improved = false;
    for (const Vec& dir : {Vec(t1), Vec(-t1), Vec(t2), Vec(-t2)}) {
      Vec trial = (best + step * dir).normalized();
      const double v = objective(trial);
      if (v > best_value) {
        best_value = v;
        best = trial;
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return best_value;
}

}  // namespace

double AnisotropyModel::dual(const Vec& q) const {
  check_dimension(q, dim_);
  return std::visit(overloaded{
                        [&](const norm::Euclidean&) { return q.norm(); },
                        [&](const norm::PowerNorm& f) {
                          const double conj = f.exponent / (f.exponent - 1.0);
                          return family_value(NormFamily(norm::PowerNorm{conj}), q);
                        },
                        [&](const norm::Elliptic&) {
                          return std::sqrt(std::max(0.0, q.dot(inverse_ * q)));
                        },
                        [&](const norm::UserSmooth&) { return sampled_dual(family_, dim_, q); },
                    },
                    family_);
}

double AnisotropyModel::lifted(std::span<const double> slope, std::span<double> grad_x) const {
  const int n = dim_ - 1;
  if (const auto* pw = std::get_if<norm::PowerNorm>(&family_)) {
    const double m = pw->exponent;
    double s = 1.0;
    for (int i = 0; i < n; ++i) s += std::pow(std::abs(slope[i]), m);
    const double phi = std::pow(s, 1.0 / m);
    for (int i = 0; i < n; ++i) {
      grad_x[i] = -std::copysign(std::pow(std::abs(slope[i]) / phi, m - 1.0), slope[i]);
      if (slope[i] == 0.0) grad_x[i] = 0.0;
    }
    return phi;
  }
  if (std::holds_alternative<norm::Euclidean>(family_)) {
    double s = 1.0;
    for (int i = 0; i < n; ++i) s += slope[i] * slope[i];
    const double phi = std::sqrt(s);
    for (int i = 0; i < n; ++i) grad_x[i] = -slope[i] / phi;
    return phi;
  }
  Vec p(dim_);
  for (int i = 0; i < n; ++i) p[i] = -slope[i];
  p[n] = 1.0;
  if (const auto* el = std::get_if<norm::Elliptic>(&family_)) {
    const Vec ap = el->matrix * p;
    const double phi = std::sqrt(p.dot(ap));
    for (int i = 0; i < n; ++i) grad_x[i] = ap[i] / phi;
    return phi;
  }
  const auto& user = std::get<norm::UserSmooth>(family_);
  const Vec g = user.gradient(p);
  for (int i = 0; i < n; ++i) grad_x[i] = g[i];
  return user.value(p);
}

double AnisotropyModel::lifted_lambda(std::span<const double> slope) const {
  const int n = dim_ - 1;
  if (std::holds_alternative<norm::Euclidean>(family_)) {
    double s = 1.0;
    for (int i = 0; i < n; ++i) s += slope[i] * slope[i];
    // eigenvalues of the x-block are 1/|p| (transverse to g) and 1/|p|^3
    return n == 1 ? 1.0 / (s * std::sqrt(s)) : 1.0 / std::sqrt(s);
  }
  Vec p(dim_);
  for (int i = 0; i < n; ++i) p[i] = -slope[i];
  p[n] = 1.0;
  const Mat h = hessian(p);
  return largest_eigenvalue(h, n);
}

// ---------------------------------------------------------------------------
// MobilityModel

MobilityModel::MobilityModel(NormFamily family, int dimension)
    : family_(std::move(family)), dim_(dimension) {
  validate_family(family_, dim_, false);
  psi_max_ = 0.0;
  psi_min_ = std::numeric_limits<double>::infinity();
  for (const auto& nu : sphere_samples(dim_)) {
    const double v = family_value(family_, nu);
    psi_max_ = std::max(psi_max_, v);
    psi_min_ = std::min(psi_min_, v);
  }
  require(psi_min_ > 0.0, ErrorKind::Usage, "mobility must be positive away from the origin");
}

MobilityModel MobilityModel::euclidean(int dimension) {
  return MobilityModel(norm::Euclidean{}, dimension);
}

std::string MobilityModel::name() const {
  // Reuse the anisotropy naming; mobility families are the same set.
  if (std::holds_alternative<norm::UserSmooth>(family_)) return "user";
  return AnisotropyModel(family_, dim_).name();
}

double MobilityModel::value(const Vec& p) const {
  check_dimension(p, dim_);
  return family_value(family_, p);
}

double MobilityModel::lifted(std::span<const double> slope) const {
  const int n = dim_ - 1;
  if (std::holds_alternative<norm::Euclidean>(family_)) {
    double s = 1.0;
    for (int i = 0; i < n; ++i) s += slope[i] * slope[i];
    return std::sqrt(s);
  }
  Vec p(dim_);
  for (int i = 0; i < n; ++i) p[i] = -slope[i];
  p[n] = 1.0;
  return family_value(family_, p);
}

RatioBounds mobility_ratio_bounds(const MobilityModel& psi, const AnisotropyModel& phi) {
  require(psi.dimension() == phi.dimension(), ErrorKind::Usage,
          "mobility and anisotropy dimensions differ");
  RatioBounds out{std::numeric_limits<double>::infinity(), 0.0};
  for (const auto& nu : sphere_samples(phi.dimension())) {
    const double r = psi.value(nu) / phi.value(nu);
    out.min = std::min(out.min, r);
    out.max = std::max(out.max, r);
  }
  return out;
}

}  // namespace amcf
