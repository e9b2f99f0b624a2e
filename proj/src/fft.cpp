#include "atomgate/fft.hpp"

#include "atomgate/errors.hpp"

#include <fftw3.h>

#include <mutex>
#include <numbers>

namespace atomgate {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FourierTransform::FourierTransform(const Grid& grid)
    : buffer_(Eigen::ArrayXcd::Zero(grid.size())), size_(grid.size()) {
  std::vector<int> dims;
  for (const Axis& a : grid.axes()) dims.push_back(static_cast<int>(a.points));
  auto* data = reinterpret_cast<fftw_complex*>(buffer_.data());
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), data, data,
                                FFTW_FORWARD, FFTW_ESTIMATE);
  backward_plan_ = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), data, data,
                                 FFTW_BACKWARD, FFTW_ESTIMATE);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

// Eigen move-assignment may swap the buffer's storage, so execute on the
// current pointer rather than the one the plan was made with. Eigen's
// allocations share FFTW's 16-byte SIMD alignment.
void FourierTransform::forward() {
  if (buffer_.size() != size_) throw IncompatibleGrid("transform buffer was resized");
  auto* data = reinterpret_cast<fftw_complex*>(buffer_.data());
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), data, data);
}

void FourierTransform::backward() {
  if (buffer_.size() != size_) throw IncompatibleGrid("transform buffer was resized");
  auto* data = reinterpret_cast<fftw_complex*>(buffer_.data());
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), data, data);
}

Eigen::ArrayXd squared_wavenumbers(const Grid& grid) {
  Eigen::ArrayXd k2 = Eigen::ArrayXd::Zero(grid.size());
  Eigen::Index inner = grid.size();
  for (const Axis& a : grid.axes()) {
    inner /= a.points;
    const double dk = 2.0 * std::numbers::pi / a.length();
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const Eigen::Index bin = (i / inner) % a.points;
      const Eigen::Index m = bin <= a.points / 2 ? bin : bin - a.points;
      const double kk = dk * static_cast<double>(m);
      k2[i] += kk * kk;
    }
  }
  return k2;
}

}  // namespace atomgate
