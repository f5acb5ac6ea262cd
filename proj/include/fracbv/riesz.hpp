#pragma once

#include <optional>

#include "fracbv/grid.hpp"
#include "fracbv/spectral.hpp"

namespace fracbv {

enum class RieszBackend { spectral, quadrature, adjoint };

struct RieszKernelConstants {
  double alpha = 0.5;
  int dim = 1;
  double c1 = 0.0;  ///< fractional Laplacian
  double c2 = 0.0;  ///< gradient
  double c3 = 0.0;  ///< divergence, always equal to c2
  /// Relative L2 mismatch of the quadrature against the spectral reference.
  double residual = 0.0;
  /// True when the closed forms failed validation and c1, c2 were refitted.
  bool refitted = false;
};

/// Standard closed forms for the singular-integral constants.
RieszKernelConstants closed_form_constants(double alpha, int dim);

/// Closed forms validated on a Gaussian (1D: [-16,16] with 2048 nodes);
/// refitted by least squares if the mismatch exceeds 1e-3.
/// Throws CalibrationFailure if the mismatch stays above 1e-2.
RieszKernelConstants calibrate_constants(double alpha, int dim = 1);

struct RieszOptions {
  RieszBackend backend = RieszBackend::spectral;
  SpectralConfig spectral{};
  /// Gradient whose negative transpose defines the `adjoint` divergence.
  RieszBackend adjoint_of = RieszBackend::spectral;
  /// Lattice-sum correction of the local quadrature error (isotropic grids).
  bool lattice_correction = true;
  std::optional<RieszKernelConstants> constants;
};

/// Discrete D^alpha on one grid, built once and applied many times.
///
/// `divergence` is the negative transpose of `apply` under the node inner
/// product, so <F, D g> + <Div F, g> = 0 up to round-off.
class RieszGradientOperator {
 public:
  RieszGradientOperator(const Grid& grid, double alpha, const RieszOptions& options = {});

  const Grid& grid() const { return grid_; }
  double alpha() const { return alpha_; }
  RieszBackend backend() const { return backend_; }

  /// One column per component.
  Eigen::MatrixXd apply(const Vector& f) const;
  /// -D^T F.
  Vector divergence(const Eigen::MatrixXd& F) const;
  /// Bound on sum_i |(D e_j)_i| over all j: the L1 Lipschitz constant of
  /// f -> sum_i w |(D f)_i|.
  double l1_bound() const;
  /// Direct discretization of the divergence integral (no transpose).
  Vector divergence_direct(const Eigen::MatrixXd& F) const;

 private:
  enum class Mode { centered, spectral, quadrature };
  Vector centered(const Vector& f, int axis, bool transpose) const;

  Grid grid_;
  double alpha_;
  RieszBackend backend_;
  Mode mode_;
  bool periodic_;
  std::optional<SpectralPlan> plan_;
  std::vector<Eigen::MatrixXcd> symbols_;
  std::vector<OffsetConvolution> kernels_;
  std::vector<Vector> diagonal_;
  double c2_ = 0.0;
  double lattice_ = 0.0;
  double kernel_l1_ = 0.0;
};

/// F^{-1}(|xi|^s F f) for any real s; the zero mode maps to 0.
ScalarField spectral_power(const ScalarField& f, double s, const SpectralConfig& config = {});

ScalarField riesz_potential(const ScalarField& f, double alpha, const SpectralConfig& config = {});
ScalarField frac_laplacian(const ScalarField& f, double alpha, const RieszOptions& options = {});
RieszVectorField riesz_gradient(const ScalarField& f, double alpha, const RieszOptions& options = {});
ScalarField riesz_divergence(const RieszVectorField& F, double alpha, const RieszOptions& options = {});

struct ExteriorIntegral {
  /// int over the complement of the cell box of |x - y|^{-n-alpha} dy
  double scalar = 0.0;
  /// int over the same set of (x - y) |x - y|^{-n-alpha-1} dy
  Point vector = Point::Zero();
};

ExteriorIntegral exterior_integral(const Grid& grid, const Point& x, double alpha);

}  // namespace fracbv
