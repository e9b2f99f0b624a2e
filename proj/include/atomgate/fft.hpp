#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "atomgate/grid.hpp"

namespace atomgate {

/// In-place complex DFT over a grid's shape, owning its buffer and FFTW
/// plans. Plans use FFTW_ESTIMATE so results are reproducible run to run.
class FourierTransform {
 public:
  explicit FourierTransform(const Grid& grid);
  ~FourierTransform();
  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;

  Eigen::ArrayXcd& buffer() { return buffer_; }
  const Eigen::ArrayXcd& buffer() const { return buffer_; }

  /// Unnormalized forward (e^{-ikx}) and backward transforms of buffer().
  void forward();
  void backward();

 private:
  Eigen::ArrayXcd buffer_;
  Eigen::Index size_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

/// Angular wavenumbers of a grid's DFT bins, squared and summed over axes.
Eigen::ArrayXd squared_wavenumbers(const Grid& grid);

}  // namespace atomgate
