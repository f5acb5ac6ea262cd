#pragma once

#include <optional>
#include <vector>

#include "fracbv/domain.hpp"
#include "fracbv/gagliardo.hpp"
#include "fracbv/riesz.hpp"

namespace fracbv {

/// Standard bump exp(-1 / (1 - |z|^2)) scaled to radius eps.
class Mollifier {
 public:
  Mollifier(double eps, int dim);
  double eps() const { return eps_; }
  int dim() const { return dim_; }
  /// Unnormalized profile at z.
  double profile(const Point& z) const;

 private:
  double eps_;
  int dim_;
};

/// Discrete convolution weights over node offsets; nonnegative, summing to 1.
struct StencilWeights {
  std::vector<std::array<Index, 2>> offsets;
  std::vector<double> weights;
  Index reach = 0;  ///< largest |offset| on any axis
};

/// Samples of the mollifier at the nodes, renormalized. Needs eps >= 2h.
StencilWeights sampled_weights(const Grid& grid, double eps);
/// Mollifier applied to the multilinear interpolant and resampled; valid for
/// any eps > 0 including scales below the spacing.
StencilWeights interpolant_weights(const Grid& grid, double eps);

/// sum_o w_o f(x + o h), values beyond the box read as 0.
Vector convolve(const Grid& grid, const Vector& values, const StencilWeights& w);

/// Mask dilated by the stencil reach (nodes a stencil can reach from the mask).
Mask dilate(const Grid& grid, const Mask& mask, const StencilWeights& w);

ScalarField mollify(const ScalarField& f, double eps);
ScalarField mollify_interpolant(const ScalarField& f, double eps);
RieszVectorField mollify(const RieszVectorField& F, const StencilWeights& w);

/// (eta * Phi)(x, y) = sum_o w_o Phi(x + o h, y + o h). The support of Phi
/// must stay eps away from the box faces.
NonlocalField pair_mollify(const NonlocalField& Phi, double eps);
NonlocalField pair_mollify(const NonlocalField& Phi, const StencilWeights& w);

/// zeta = 1 on |x - c| < m, 0 on |x - c| > 2m, clamped smoothstep between.
struct Cutoff {
  double m;
  Point center = Point::Zero();
  double operator()(const Point& x) const;
};

RieszVectorField apply_cutoff(const RieszVectorField& F, const Cutoff& zeta);

/// Phi(c + (x - c) / rho, c + (y - c) / rho) through the interpolant in both slots.
NonlocalField scale_pair_field(const NonlocalField& Phi, double rho, const Point& center);

struct PipelineOptions {
  double alpha = 0.5;
  double q = 2.0;
  RieszOptions riesz{RieszBackend::adjoint, {}, RieszBackend::spectral, true, std::nullopt};
  GagliardoOptions gagliardo{};
  /// delta = fraction * D; must stay below 1/100.
  double delta_fraction = 1.0 / 200.0;
  /// Fixed scaling factor; when absent rho is bisected toward 1.
  std::optional<double> rho;
  /// Fixed mollification scale (0 skips the stage).
  std::optional<double> delta;
  double rho_start_offset = 0.5;
  int max_bisections = 40;
};

struct PipelineReport {
  double cutoff_radius = 0.0;
  double rho = 1.0;
  double separation = 0.0;
  double delta = 0.0;
  double cutoff_distance = 0.0;
  double scaling_distance = 0.0;
  double mollification_distance = 0.0;
  double total_distance = 0.0;
  double sup_norm = 0.0;
};

struct RieszPipelineResult {
  RieszVectorField theta;
  PipelineReport report;
};

struct GagliardoPipelineResult {
  NonlocalField theta;
  PipelineReport report;
};

/// (||F||_{L^q}^q + ||Div F||_{L^q(Omega)}^q)^{1/q}.
double riesz_x_norm(const RieszVectorField& F, const Mask& omega, const PipelineOptions& options);
/// Pair L^q norm plus ||div F||_{L^q(Omega)} in the same q-sum.
double gagliardo_x_norm(const NonlocalField& F, const Mask& omega, const PipelineOptions& options);

/// Cutoff, outward scaling, mollification. Throws ResolutionFailure when the
/// X-distance stays above eps_target.
RieszPipelineResult density_pipeline_riesz(const RieszVectorField& Phi, double beta, const ConvexDomain& omega,
                                           double eps_target, const PipelineOptions& options = {});

/// Antisymmetrization, inward scaling, pair mollification.
GagliardoPipelineResult density_pipeline_gagliardo(const NonlocalField& Phi, double beta,
                                                   const ConvexDomain& omega, double eps_target,
                                                   const PipelineOptions& options = {});

struct RecoveryTrace {
  std::vector<double> eps;
  std::vector<double> values;  ///< var of the mollified field on G
  double reference = 0.0;      ///< var of f on Omega
  bool bounded = true;         ///< every value <= reference * 1.01
};

/// f_eps = eta_eps * (chi_Omega f), measured on G. Every node within eps of G
/// must lie in Omega.
RecoveryTrace recovery_sequence(const ScalarField& f, const Mask& omega, const Mask& G,
                                const std::vector<double>& eps, double alpha,
                                const GagliardoOptions& options = {});

}  // namespace fracbv
