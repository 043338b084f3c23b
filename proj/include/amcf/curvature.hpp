#pragma once

#include "amcf/anisotropy.hpp"
#include "amcf/grid.hpp"

#include <array>
#include <vector>

namespace amcf {

/// Face gradients of a nodal field. Face (axis 0, i, j) joins nodes (i, j) and
/// (i + 1, j) for i in [-1, nx - 1]; face (axis 1, i, j) joins (i, j) and
/// (i, j + 1) for j in [-1, ny - 1]. Ghost faces use the boundary policy.
class FaceGradients {
 public:
  FaceGradients(int dim, std::array<int, 2> counts);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] const Point& at(int axis, int i, int j = 0) const {
    return data_[axis][offset(axis, i, j)];
  }
  Point& at(int axis, int i, int j = 0) { return data_[axis][offset(axis, i, j)]; }

 private:
  [[nodiscard]] std::size_t offset(int axis, int i, int j) const {
    if (axis == 0) {
      return static_cast<std::size_t>(j) * static_cast<std::size_t>(counts_[0] + 1) +
             static_cast<std::size_t>(i + 1);
    }
    return static_cast<std::size_t>(j + 1) * static_cast<std::size_t>(counts_[0]) +
           static_cast<std::size_t>(i);
  }
  int dim_;
  std::array<int, 2> counts_;
  std::array<std::vector<Point>, 2> data_;
};

FaceGradients gradient_faces(const GraphField& u);

/// Nodal div(grad_x phi(-grad u, 1)) in conservative face-flux form.
GraphField curvature_operator(const GraphField& u, const AnisotropyModel& phi);

struct WulffCap {
  double radius;
  GraphField field;
};

/// min { z : phi0(x, z) <= radius }. Throws a domain error when x lies outside
/// the projection of radius * W.
double wulff_cap_height(const AnisotropyModel& phi, double radius, const Point& x);

/// Lower boundary of radius * W sampled at every node of `base`.
WulffCap wulff_lower_cap(const AnisotropyModel& phi, double radius, GridPtr base);

}  // namespace amcf
