#pragma once

#include "amcf/cone.hpp"
#include "amcf/point.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace amcf {

namespace boundary {

struct Periodic {
  Point period{0.0, 0.0};
};

/// Ghosts follow the cone plus the offset u - cone measured at the nearest
/// edge node.
struct ConeExtension {
  ConeSpec cone;
};

/// Ghosts are evaluated from a closed form u(x, t).
struct DirichletExact {
  std::function<double(const Point&, double)> exact;
};

struct LinearExtrapolation {};

}  // namespace boundary

using BoundaryPolicy = std::variant<boundary::Periodic, boundary::ConeExtension,
                                    boundary::DirichletExact, boundary::LinearExtrapolation>;

std::string boundary_name(const BoundaryPolicy& policy);

/// Uniform Cartesian grid on R^N, N in {1, 2}, with one ghost layer supplied
/// by the boundary policy. Node (i, j) sits at origin + h (i, j).
class GraphGrid {
 public:
  GraphGrid(int dim, double h, std::array<int, 2> counts, Point origin, BoundaryPolicy policy);

  /// Nodes on [-half_width, half_width]^N, origin included.
  static GraphGrid centered(int dim, double h, double half_width, BoundaryPolicy policy);
  /// `count` nodes per axis starting at -(count/2) h, so x = 0 is a node.
  static GraphGrid with_apex(int dim, double h, int count, BoundaryPolicy policy);
  /// Periodic grid with `period / h` nodes per axis starting at `start`.
  static GraphGrid periodic(int dim, double h, double period, double start);

  [[nodiscard]] int dim() const { return dim_; }
  [[nodiscard]] double h() const { return h_; }
  [[nodiscard]] int count(int axis) const { return counts_[axis]; }
  [[nodiscard]] std::array<int, 2> counts() const { return counts_; }
  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(counts_[0]) * static_cast<std::size_t>(counts_[1]);
  }
  [[nodiscard]] const Point& origin() const { return origin_; }
  [[nodiscard]] const BoundaryPolicy& boundary() const { return policy_; }
  [[nodiscard]] bool is_periodic() const {
    return std::holds_alternative<boundary::Periodic>(policy_);
  }

  [[nodiscard]] std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(counts_[0]) +
           static_cast<std::size_t>(i);
  }
  [[nodiscard]] std::pair<int, int> ij(std::size_t k) const {
    return {static_cast<int>(k % counts_[0]), static_cast<int>(k / counts_[0])};
  }
  /// Coordinates of (possibly ghost) node (i, j).
  [[nodiscard]] Point coord(int i, int j = 0) const {
    return {origin_[0] + h_ * i, dim_ == 2 ? origin_[1] + h_ * j : 0.0};
  }
  [[nodiscard]] Point node(std::size_t k) const {
    const auto [i, j] = ij(k);
    return coord(i, j);
  }
  /// Euclidean norm of a base point.
  [[nodiscard]] double radius(const Point& x) const {
    return dim_ == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
  }
  /// Index of the node at x; throws a usage error if x is not a node.
  [[nodiscard]] std::size_t node_at(const Point& x) const;
  /// Largest r such that the ball of radius r about 0 fits in the node box.
  [[nodiscard]] double inner_half_width() const;

  /// Same dimension, spacing, counts and origin. Boundary policies are not
  /// compared.
  [[nodiscard]] bool same_layout(const GraphGrid& other) const;

  [[nodiscard]] GraphGrid with_boundary(BoundaryPolicy policy) const;

 private:
  int dim_;
  double h_;
  std::array<int, 2> counts_;
  Point origin_;
  BoundaryPolicy policy_;
};

using GridPtr = std::shared_ptr<const GraphGrid>;

inline GridPtr share(GraphGrid grid) { return std::make_shared<const GraphGrid>(std::move(grid)); }

/// Nodal heights u(x, t) on a grid.
struct GraphField {
  GridPtr grid;
  std::vector<double> values;
  double time = 0.0;

  GraphField(GridPtr g, std::vector<double> v, double t = 0.0);

  static GraphField zeros(GridPtr g, double t = 0.0);
  static GraphField from_function(GridPtr g, const std::function<double(const Point&)>& f,
                                  double t = 0.0);

  [[nodiscard]] double at(int i, int j = 0) const { return values[grid->index(i, j)]; }
  [[nodiscard]] std::size_t size() const { return values.size(); }
  [[nodiscard]] bool all_finite() const;
};

/// Max over axes and node-to-node faces of |forward difference| / h.
/// Periodic grids include the wrap-around faces.
double lipschitz_constant(const GraphField& u);

/// Values with one ghost layer. Index range is [-1, n] on every active axis.
class PaddedValues {
 public:
  PaddedValues() = default;
  explicit PaddedValues(const GraphGrid& grid);

  [[nodiscard]] double operator()(int i, int j = 0) const { return data_[offset(i, j)]; }
  double& operator()(int i, int j = 0) { return data_[offset(i, j)]; }
  [[nodiscard]] int stride() const { return stride_; }
  [[nodiscard]] const double* row(int j) const { return data_.data() + offset(0, j); }

 private:
  [[nodiscard]] std::size_t offset(int i, int j) const {
    return static_cast<std::size_t>(j + pad_j_) * static_cast<std::size_t>(stride_) +
           static_cast<std::size_t>(i + 1);
  }
  int stride_ = 0;
  int pad_j_ = 0;
  std::vector<double> data_;
};

/// Fill `out` with u and the ghost layer dictated by the grid's policy.
void apply_boundary(const GraphField& u, PaddedValues& out);
PaddedValues apply_boundary(const GraphField& u);

/// Value at an arbitrary base point: (bi)linear interpolation inside the node
/// box, the boundary policy's continuation outside it.
double sample(const GraphField& u, const Point& x);

/// Plain-text snapshot: header lines "N", "h", "shape", "t", any extra
/// key/value lines, then node values in row-major order.
void write_snapshot(std::ostream& out, const GraphField& u,
                    const std::vector<std::pair<std::string, double>>& extra = {});

struct SnapshotData {
  int dim = 1;
  double h = 0.0;
  std::array<int, 2> shape{1, 1};
  double time = 0.0;
  std::vector<std::pair<std::string, double>> extra;
  std::vector<double> values;
};

SnapshotData read_snapshot(std::istream& in);

}  // namespace amcf
