#pragma once

// Face-flux sweep shared by the curvature operator and the time steppers.

#include "amcf/anisotropy.hpp"
#include "amcf/grid.hpp"

#include <array>
#include <vector>

namespace amcf::detail {

struct FaceBounds {
  double lambda = 0.0;  // max largest eigenvalue of the x-block of hess phi(-g, 1)
  double psi = 0.0;     // max psi(-g, 1)
};

class FluxSweep {
 public:
  explicit FluxSweep(const GraphGrid& grid);

  /// Fills ghosts from u's boundary policy, then the face fluxes, the nodal
  /// curvature L[u], the centered nodal gradient and the discrete area.
  void evaluate(const GraphField& u, const AnisotropyModel& phi);
  /// Same, and also collects the face maxima returned by bounds().
  void evaluate(const GraphField& u, const AnisotropyModel& phi, const MobilityModel& psi);
  /// Ghost fill only; enough for face_slope and face_bounds.
  void load(const GraphField& u) { apply_boundary(u, pad_); }

  [[nodiscard]] const std::vector<double>& curvature() const { return curv_; }
  [[nodiscard]] Point nodal_gradient(std::size_t k) const { return {grad_[0][k], grad_[1][k]}; }
  /// h^N-weighted face quadrature of phi(-g, 1) over real faces.
  [[nodiscard]] double area() const { return area_; }
  [[nodiscard]] const PaddedValues& padded() const { return pad_; }

  /// Maxima over all faces (ghost faces included) of the last evaluated field.
  [[nodiscard]] FaceBounds face_bounds(const AnisotropyModel& phi, const MobilityModel& psi) const;
  /// Face maxima gathered by the three-argument evaluate.
  [[nodiscard]] const FaceBounds& bounds() const { return bounds_; }

  /// Slope vector on a face of the last evaluated field.
  [[nodiscard]] Point face_slope(int axis, int i, int j) const {
    const PaddedValues& p = pad_;
    if (dim_ == 1) return {(p(i + 1) - p(i)) * inv_h_, 0.0};
    if (axis == 0) {
      return {(p(i + 1, j) - p(i, j)) * inv_h_,
              (p(i, j + 1) - p(i, j - 1) + p(i + 1, j + 1) - p(i + 1, j - 1)) * 0.25 * inv_h_};
    }
    return {(p(i + 1, j) - p(i - 1, j) + p(i + 1, j + 1) - p(i - 1, j + 1)) * 0.25 * inv_h_,
            (p(i, j + 1) - p(i, j)) * inv_h_};
  }

 private:
  const GraphGrid* grid_;
  int dim_;
  int nx_, ny_;
  double inv_h_;
  PaddedValues pad_;
  std::vector<double> flux_x_, flux_y_;  // normal flux per face
  std::vector<double> normal_x_, normal_y_;  // normal gradient per face
  std::vector<double> curv_;
  std::array<std::vector<double>, 2> grad_;
  double area_ = 0.0;
  FaceBounds bounds_;

  template <int Dim, class Tension, class Mobility>
  void sweep(const Tension& tension, const Mobility* mobility);
};

}  // namespace amcf::detail
