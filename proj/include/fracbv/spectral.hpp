#pragma once

#include <complex>
#include <functional>

#include "fracbv/grid.hpp"

namespace fracbv {

struct SpectralConfig {
  /// Zero-padding multiple per axis for fields with compact support.
  int padding_factor = 4;
  /// Treat the grid as one period (no padding, period N h).
  bool periodic = false;
};

/// Frequency information handed to a multiplier: xi per axis and whether
/// the index sits on the Nyquist line of that axis.
struct Frequency {
  std::array<double, 2> xi{0.0, 0.0};
  std::array<bool, 2> nyquist{false, false};
  double norm() const { return std::hypot(xi[0], xi[1]); }
};

using Multiplier = std::function<std::complex<double>(const Frequency&)>;

/// Zero-padded (or periodic) transform of grid values. Holds the FFT
/// twiddle cache, so a plan must not be shared between threads.
class SpectralPlan {
 public:
  SpectralPlan(const Grid& grid, const SpectralConfig& config);

  const Grid& grid() const { return grid_; }
  Index rows() const { return m_[0]; }
  Index cols() const { return m_[1]; }

  Eigen::MatrixXcd forward(const Vector& values) const;
  Eigen::MatrixXcd forward_complex(const Eigen::VectorXcd& values) const;
  /// Real part of the inverse transform restricted to the grid nodes.
  Vector inverse(Eigen::MatrixXcd spectrum) const;
  Eigen::VectorXcd inverse_complex(Eigen::MatrixXcd spectrum) const;

  /// Spectra of a and b from the spectrum of a + i b, for real a and b.
  std::array<Eigen::MatrixXcd, 2> split(const Eigen::MatrixXcd& packed) const;
  /// Real part of the inverse transform over the whole padded lattice.
  Eigen::MatrixXd inverse_padded(Eigen::MatrixXcd spectrum) const;
  /// Multiplier tabulated on the padded frequency lattice.
  Eigen::MatrixXcd tabulate(const Multiplier& symbol) const;

 private:
  Grid grid_;
  std::array<Index, 2> n_{1, 1};
  std::array<Index, 2> m_{1, 1};
};

/// Applies a Fourier multiplier to grid values and returns the real part on
/// the original nodes.
Vector apply_multiplier(const Grid& grid, const Vector& values, const Multiplier& symbol,
                        const SpectralConfig& config);

/// Linear (non-circular) convolution sum_j kernel(i - j) values_j on the grid,
/// with the kernel given on offsets in [-(N_k - 1), N_k - 1] per axis.
class OffsetConvolution {
 public:
  OffsetConvolution(const Grid& grid, const std::function<double(Index, Index)>& kernel);
  Vector apply(const Vector& values) const;
  /// Same kernel reflected: sum_j kernel(j - i) values_j.
  Vector apply_transpose(const Vector& values) const;

 private:
  Vector run(const Vector& values, bool transpose) const;
  Index n0_, n1_, m0_, m1_;
  int dim_;
  Eigen::MatrixXcd kernel_hat_;
};

}  // namespace fracbv
