#pragma once

#include <limits>

#include "fracbv/grid.hpp"

namespace fracbv {

/// How the singular pair kernel |x - y|^{-n-alpha} is sampled.
enum class PairQuadrature {
  point,         ///< value at the node separation
  cell_average,  ///< exact average over the two node cells
};

struct GagliardoOptions {
  PairQuadrature quadrature = PairQuadrature::cell_average;
  /// Minimum-image separations on a periodic grid.
  bool periodic = false;
};

/// Kernel values per node offset, shared by all pair operators.
class GagliardoKernel {
 public:
  GagliardoKernel(const Grid& grid, double alpha, const GagliardoOptions& options = {});

  double alpha() const { return alpha_; }
  /// Approximation of |x_i - x_j|^{-n-alpha} for the offset i - j.
  double kernel(Index o0, Index o1 = 0) const;
  /// |x_i - x_j| for the offset (minimum image when periodic).
  double distance(Index o0, Index o1 = 0) const;
  /// Pair weight making d^alpha and -div_alpha transposes: h^{2n} K |x|^alpha.
  double pair_measure(Index o0, Index o1 = 0) const;
  double kernel_between(const Grid& grid, Index i, Index j) const;

 private:
  std::array<Index, 2> wrap(Index o0, Index o1) const;

  int dim_;
  double alpha_;
  bool periodic_;
  std::array<Index, 2> n_{1, 1};
  std::array<double, 2> h_{1.0, 1.0};
  Eigen::MatrixXd table_;  // (2 n0 - 1) x (2 n1 - 1), offset + (n - 1)
};

/// Pair fields are stored densely; larger grids go through the offset-sum
/// routines (seminorm, perimeter) instead.
constexpr Index kMaxPairNodes = 2304;

/// Real function on ordered node pairs. The diagonal, pairs with an endpoint
/// outside the support and pairs farther apart than the truncation radius
/// are forced to 0 on construction.
class NonlocalField {
 public:
  NonlocalField(Grid grid, Eigen::MatrixXd values, Mask support,
                double truncation_radius = std::numeric_limits<double>::infinity());

  static NonlocalField zeros(const Grid& grid, const Mask& support);

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& values() const { return values_; }
  const Mask& support() const { return support_; }
  double truncation_radius() const { return radius_; }
  double operator()(Index i, Index j) const { return values_(i, j); }

  bool is_antisymmetric(double tol = 0.0) const;
  NonlocalField antisymmetric_part() const;
  NonlocalField with_values(Eigen::MatrixXd values) const;
  double sup_norm() const { return values_.size() ? values_.cwiseAbs().maxCoeff() : 0.0; }

 private:
  Grid grid_;
  Eigen::MatrixXd values_;
  Mask support_;
  double radius_;
};

/// (f_i - f_j) / |x_i - x_j|^alpha on pairs inside the mask of f.
NonlocalField gag_gradient(const ScalarField& f, double alpha, const GagliardoOptions& options = {});

/// -sum_j h^n (F_ij - F_ji) K_ij.
ScalarField gag_divergence(const NonlocalField& F, double alpha, const GagliardoOptions& options = {});
ScalarField gag_divergence(const NonlocalField& F, const GagliardoKernel& kernel);

/// sum_{i != j} mu_ij F_ij G_ij with mu the pair measure of the kernel.
double pair_inner(const NonlocalField& F, const NonlocalField& G, const GagliardoKernel& kernel);

/// (sum_{i != j} h^{2n} |F_ij|^q / |x_i - x_j|^n)^{1/q}.
double pair_lq_norm(const NonlocalField& F, double q);

/// sum_{j != i} h^n F_ij G_ij / |x_i - x_j|^n.
ScalarField field_dot(const NonlocalField& F, const NonlocalField& G);

/// (f_i + f_j) / 2 * F_ij.
NonlocalField scalar_field_product(const ScalarField& f, const NonlocalField& F);

/// sum over ordered pairs in the mask of h^{2n} |f_i - f_j| K_ij.
double gagliardo_seminorm(const ScalarField& f, const Mask& omega, double alpha,
                          const GagliardoOptions& options = {});

struct PerimeterResult {
  double truncated = 0.0;  ///< seminorm of the indicator over the grid box
  double tail = 0.0;       ///< analytic estimate of the pairs leaving the box
  double total() const { return truncated + tail; }
  bool truncation_warning = false;
};

/// Fractional perimeter of the node set E. The warning flag is raised when
/// tail exceeds tail_bound times the total.
PerimeterResult frac_perimeter(const Grid& grid, const Mask& E, double alpha,
                               const GagliardoOptions& options = {}, double tail_bound = 0.05);

struct CompositionResult {
  double residual = 0.0;
  double constant = 0.0;
};

/// Best c for -c div_alpha(d^alpha f) against the spectral |D|^{2 alpha} f on a
/// periodic grid, with the relative L2 residual at that c.
CompositionResult gag_composition_check(const ScalarField& f, double alpha,
                                        PairQuadrature quadrature = PairQuadrature::point);

}  // namespace fracbv
