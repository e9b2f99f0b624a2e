#include "atomgate/grid.hpp"

#include <cmath>

#include "atomgate/errors.hpp"

namespace atomgate {

Grid::Grid(std::vector<Axis> axes, const Eigen::Vector3d& anchor)
    : axes_(std::move(axes)), anchor_(anchor) {
  if (axes_.empty() || axes_.size() > 3) {
    throw InvalidParameter("grid dimension must be 1, 2 or 3");
  }
  size_ = 1;
  std::array<bool, 3> seen{};
  for (const Axis& a : axes_) {
    if (a.points < 2) throw InvalidParameter("grid axis needs at least 2 points");
    if (!(a.max > a.min) || !std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw InvalidParameter("grid axis extent must satisfy min < max");
    }
    auto& s = seen[static_cast<std::size_t>(a.coordinate)];
    if (s) throw InvalidParameter("grid coordinate used by two axes");
    s = true;
    size_ *= a.points;
  }
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (const Axis& a : axes_) v *= a.spacing();
  return v;
}

int Grid::axis_index(Coordinate c) const {
  for (int i = 0; i < dimension(); ++i) {
    if (axes_[static_cast<std::size_t>(i)].coordinate == c) return i;
  }
  return -1;
}

std::array<Eigen::Index, 3> Grid::unflatten(Eigen::Index flat) const {
  std::array<Eigen::Index, 3> idx{0, 0, 0};
  for (int i = dimension() - 1; i >= 0; --i) {
    const Eigen::Index n = axes_[static_cast<std::size_t>(i)].points;
    idx[static_cast<std::size_t>(i)] = flat % n;
    flat /= n;
  }
  return idx;
}

Eigen::Vector3d Grid::position(Eigen::Index flat) const {
  Eigen::Vector3d r = anchor_;
  const auto idx = unflatten(flat);
  for (int i = 0; i < dimension(); ++i) {
    const Axis& a = axes_[static_cast<std::size_t>(i)];
    r[static_cast<int>(a.coordinate)] = a.at(idx[static_cast<std::size_t>(i)]);
  }
  return r;
}

Eigen::ArrayXd Grid::coordinate_values(Coordinate c) const {
  const int ai = axis_index(c);
  if (ai < 0) return Eigen::ArrayXd::Constant(size_, anchor_[static_cast<int>(c)]);
  Eigen::Index inner = 1;
  for (int i = ai + 1; i < dimension(); ++i) inner *= axes_[static_cast<std::size_t>(i)].points;
  const Axis& a = axes_[static_cast<std::size_t>(ai)];
  Eigen::ArrayXd out(size_);
  for (Eigen::Index k = 0; k < size_; ++k) out[k] = a.at((k / inner) % a.points);
  return out;
}

Grid Grid::refined(int factor) const {
  if (factor < 1) throw InvalidParameter("refinement factor must be >= 1");
  std::vector<Axis> axes = axes_;
  for (Axis& a : axes) a.points *= factor;
  return Grid(std::move(axes), anchor_);
}

}  // namespace atomgate
