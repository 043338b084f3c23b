#include "amcf/curvature.hpp"

#include "amcf/errors.hpp"
#include "amcf/io.hpp"
#include "stencil.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace amcf {

namespace detail {

FluxSweep::FluxSweep(const GraphGrid& grid)
    : grid_(&grid),
      dim_(grid.dim()),
      nx_(grid.count(0)),
      ny_(grid.dim() == 2 ? grid.count(1) : 1),
      inv_h_(1.0 / grid.h()),
      pad_(grid),
      flux_x_(static_cast<std::size_t>(nx_ + 1) * ny_),
      normal_x_(flux_x_.size()),
      curv_(grid.size()) {
  grad_[0].assign(grid.size(), 0.0);
  grad_[1].assign(grid.size(), 0.0);
  if (grid.dim() == 2) {
    flux_y_.resize(static_cast<std::size_t>(nx_) * (ny_ + 1));
    normal_y_.resize(flux_y_.size());
  }
}

namespace {

// Tension kernels: return phi(-g, 1), write the normal flux components and,
// when asked, the largest eigenvalue of the x-block of the Hessian.
template <int Dim>
struct EuclideanTension {
  double operator()(const double* g, double* flux, double* lambda) const {
    double s = 1.0;
    for (int a = 0; a < Dim; ++a) s += g[a] * g[a];
    const double r = std::sqrt(s);
    const double inv = 1.0 / r;
    for (int a = 0; a < Dim; ++a) flux[a] = -g[a] * inv;
    if (lambda) *lambda = Dim == 1 ? inv / s : inv;
    return r;
  }
};

template <int Dim>
struct GenericTension {
  const AnisotropyModel* phi;
  double operator()(const double* g, double* flux, double* lambda) const {
    const std::span<const double> slope(g, Dim);
    const double value = phi->lifted(slope, {flux, Dim});
    if (lambda) *lambda = phi->lifted_lambda(slope);
    return value;
  }
};

template <int Dim>
struct EuclideanMobility {
  double operator()(const double* g) const {
    double s = 1.0;
    for (int a = 0; a < Dim; ++a) s += g[a] * g[a];
    return std::sqrt(s);
  }
};

template <int Dim>
struct GenericMobility {
  const MobilityModel* psi;
  double operator()(const double* g) const { return psi->lifted({g, Dim}); }
};

}  // namespace

template <int Dim, class Tension, class Mobility>
void FluxSweep::sweep(const Tension& tension, const Mobility* mobility) {
  const bool wrap = grid_->is_periodic();
  const double h = grid_->h();
  double flux[2] = {0.0, 0.0};
  double lambda = 0.0;
  double* want_lambda = mobility ? &lambda : nullptr;
  double sum_phi = 0.0;
  FaceBounds b;

  auto face = [&](const Point& g, int axis, std::size_t f, bool real) {
    const double value = tension(g.data(), flux, want_lambda);
    if (axis == 0) {
      flux_x_[f] = flux[0];
      normal_x_[f] = g[0];
    } else {
      flux_y_[f] = flux[1];
      normal_y_[f] = g[1];
    }
    if (real) sum_phi += value;
    if (mobility) {
      b.lambda = std::max(b.lambda, lambda);
      b.psi = std::max(b.psi, (*mobility)(g.data()));
    }
  };

  for (int j = 0; j < ny_; ++j) {
    const std::size_t row = static_cast<std::size_t>(j) * (nx_ + 1);
    for (int i = -1; i < nx_; ++i) {
      face(face_slope(0, i, j), 0, row + (i + 1), i >= 0 && (i < nx_ - 1 || wrap));
    }
  }
  if constexpr (Dim == 2) {
    for (int j = -1; j < ny_; ++j) {
      const std::size_t row = static_cast<std::size_t>(j + 1) * nx_;
      for (int i = 0; i < nx_; ++i) {
        face(face_slope(1, i, j), 1, row + i, j >= 0 && (j < ny_ - 1 || wrap));
      }
    }
  }
  area_ = Dim == 1 ? h * sum_phi : 0.5 * h * h * sum_phi;
  if (mobility) bounds_ = b;

  for (int j = 0; j < ny_; ++j) {
    const std::size_t fx = static_cast<std::size_t>(j) * (nx_ + 1);
    for (int i = 0; i < nx_; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * nx_ + i;
      double div = flux_x_[fx + i + 1] - flux_x_[fx + i];
      grad_[0][k] = 0.5 * (normal_x_[fx + i + 1] + normal_x_[fx + i]);
      if constexpr (Dim == 2) {
        const std::size_t above = k + nx_;
        div += flux_y_[above] - flux_y_[k];
        grad_[1][k] = 0.5 * (normal_y_[above] + normal_y_[k]);
      }
      curv_[k] = div * inv_h_;
    }
  }
}

void FluxSweep::evaluate(const GraphField& u, const AnisotropyModel& phi) {
  apply_boundary(u, pad_);
  const bool euclid = std::holds_alternative<norm::Euclidean>(phi.family());
  const EuclideanMobility<1>* none1 = nullptr;
  const EuclideanMobility<2>* none2 = nullptr;
  if (grid_->dim() == 1) {
    euclid ? sweep<1>(EuclideanTension<1>{}, none1) : sweep<1>(GenericTension<1>{&phi}, none1);
  } else {
    euclid ? sweep<2>(EuclideanTension<2>{}, none2) : sweep<2>(GenericTension<2>{&phi}, none2);
  }
}

void FluxSweep::evaluate(const GraphField& u, const AnisotropyModel& phi,
                         const MobilityModel& psi) {
  apply_boundary(u, pad_);
  const bool euclid = std::holds_alternative<norm::Euclidean>(phi.family());
  const bool euclid_psi = std::holds_alternative<norm::Euclidean>(psi.family());
  auto run = [&](auto dim_tag) {
    constexpr int D = decltype(dim_tag)::value;
    const EuclideanMobility<D> em;
    const GenericMobility<D> gm{&psi};
    if (euclid && euclid_psi) {
      sweep<D>(EuclideanTension<D>{}, &em);
    } else if (euclid) {
      sweep<D>(EuclideanTension<D>{}, &gm);
    } else if (euclid_psi) {
      sweep<D>(GenericTension<D>{&phi}, &em);
    } else {
      sweep<D>(GenericTension<D>{&phi}, &gm);
    }
  };
  if (grid_->dim() == 1) {
    run(std::integral_constant<int, 1>{});
  } else {
    run(std::integral_constant<int, 2>{});
  }
}

FaceBounds FluxSweep::face_bounds(const AnisotropyModel& phi, const MobilityModel& psi) const {
  const int dim = grid_->dim();
  FaceBounds out;
  auto visit = [&](const Point& g) {
    const std::span<const double> s(g.data(), dim);
    out.lambda = std::max(out.lambda, phi.lifted_lambda(s));
    out.psi = std::max(out.psi, psi.lifted(s));
  };
  for (int j = 0; j < ny_; ++j) {
    for (int i = -1; i < nx_; ++i) visit(face_slope(0, i, j));
  }
  if (dim == 2) {
    for (int j = -1; j < ny_; ++j) {
      for (int i = 0; i < nx_; ++i) visit(face_slope(1, i, j));
    }
  }
  return out;
}

}  // namespace detail

FaceGradients::FaceGradients(int dim, std::array<int, 2> counts) : dim_(dim), counts_(counts) {
  if (dim_ == 1) counts_[1] = 1;
  data_[0].resize(static_cast<std::size_t>(counts_[0] + 1) * counts_[1]);
  if (dim_ == 2) data_[1].resize(static_cast<std::size_t>(counts_[0]) * (counts_[1] + 1));
}

FaceGradients gradient_faces(const GraphField& u) {
  const GraphGrid& g = *u.grid;
  detail::FluxSweep sweep(g);
  sweep.load(u);
  FaceGradients out(g.dim(), g.counts());
  const int nx = g.count(0), ny = g.dim() == 2 ? g.count(1) : 1;
  for (int j = 0; j < ny; ++j) {
    for (int i = -1; i < nx; ++i) out.at(0, i, j) = sweep.face_slope(0, i, j);
  }
  if (g.dim() == 2) {
    for (int j = -1; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) out.at(1, i, j) = sweep.face_slope(1, i, j);
    }
  }
  return out;
}

GraphField curvature_operator(const GraphField& u, const AnisotropyModel& phi) {
  require(phi.dimension() == u.grid->dim() + 1, ErrorKind::Usage,
          "anisotropy must live on R^(N+1) for an N-dimensional grid");
  detail::FluxSweep sweep(*u.grid);
  sweep.evaluate(u, phi);
  return GraphField(u.grid, sweep.curvature(), u.time);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kInvGolden = 0.6180339887498949;

double dual_at(const AnisotropyModel& phi, const Point& x, double z) {
  Vec q(phi.dimension());
  for (int a = 0; a + 1 < phi.dimension(); ++a) q[a] = x[a];
  q[phi.dimension() - 1] = z;
  return phi.dual(q);
}

}  // namespace

double wulff_cap_height(const AnisotropyModel& phi, double radius, const Point& x) {
  require(radius > 0.0, ErrorKind::Domain, "Wulff radius must be positive");
  const int n = phi.dimension();
  Vec up = Vec::Zero(n), down = Vec::Zero(n);
  up[n - 1] = 1.0;
  down[n - 1] = -1.0;
  // phi0(x, z) >= |z| phi0(0, +-1) - phi0(-x, 0), which bounds the sublevel set.
  const double vertical = std::min(phi.dual(up), phi.dual(down));
  const double bound = 1.05 * (radius + dual_at(phi, {-x[0], -x[1]}, 0.0)) / vertical;

  auto f = [&](double z) { return dual_at(phi, x, z); };

  double a = -bound, b = bound;
  double c = b - kInvGolden * (b - a), d = a + kInvGolden * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && b - a > 1e-15 * bound; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGolden * (b - a);
      fd = f(d);
    }
  }
  const double zmin = fc <= fd ? c : d;
  if (std::min(fc, fd) > radius) {
    fail(ErrorKind::Domain, "point (" + format_double(x[0]) + ", " + format_double(x[1]) +
                                ") lies outside the projection of the Wulff shape of radius " +
                                format_double(radius));
  }

  double lo = -bound, hi = zmin;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > radius ? lo : hi) = mid;
  }
  return hi;
}

WulffCap wulff_lower_cap(const AnisotropyModel& phi, double radius, GridPtr base) {
  require(phi.dimension() == base->dim() + 1, ErrorKind::Usage,
          "anisotropy must live on R^(N+1) for an N-dimensional grid");
  std::vector<double> values(base->size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    try {
      values[k] = wulff_cap_height(phi, radius, base->node(k));
    } catch (const Error& e) {
      const auto [i, j] = base->ij(k);
      fail(e.kind(), "node (" + std::to_string(i) + ", " + std::to_string(j) + "): " + e.what());
    }
  }
  return {radius, GraphField(std::move(base), std::move(values))};
}

}  // namespace amcf
