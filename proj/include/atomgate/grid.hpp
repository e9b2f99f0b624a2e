#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

namespace atomgate {

enum class Coordinate { x = 0, y = 1, z = 2 };

/// One periodic sampling direction: points at min + i * spacing, max excluded.
struct Axis {
  Coordinate coordinate = Coordinate::x;
  double min = 0.0;
  double max = 1.0;
  Eigen::Index points = 2;

  double spacing() const { return (max - min) / static_cast<double>(points); }
  double at(Eigen::Index i) const { return min + static_cast<double>(i) * spacing(); }
  double length() const { return max - min; }

  bool operator==(const Axis&) const = default;
};

/// Uniform Cartesian grid of dimension 1-3 embedded in (x, y, z).
///
/// Coordinates without an axis are pinned to the corresponding entry of
/// `anchor`. Storage is row-major: the last axis varies fastest, matching
/// FFTW's multi-dimensional layout.
class Grid {
 public:
  explicit Grid(std::vector<Axis> axes,
                const Eigen::Vector3d& anchor = Eigen::Vector3d::Zero());

  int dimension() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }
  const std::vector<Axis>& axes() const { return axes_; }
  const Eigen::Vector3d& anchor() const { return anchor_; }

  Eigen::Index size() const { return size_; }
  double cell_volume() const;

  /// Index of the axis carrying `c`, or -1 if `c` is pinned.
  int axis_index(Coordinate c) const;

  std::array<Eigen::Index, 3> unflatten(Eigen::Index flat) const;
  Eigen::Vector3d position(Eigen::Index flat) const;

  /// Value of coordinate `c` at every grid point, flat order.
  Eigen::ArrayXd coordinate_values(Coordinate c) const;

  /// Same extents with `factor` times as many points per axis.
  Grid refined(int factor) const;

  bool operator==(const Grid& other) const {
    return axes_ == other.axes_ && anchor_ == other.anchor_;
  }

 private:
  std::vector<Axis> axes_;
  Eigen::Vector3d anchor_;
  Eigen::Index size_ = 0;
};

}  // namespace atomgate
