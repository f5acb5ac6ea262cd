#pragma once

#include <optional>
#include <vector>

#include "fracbv/gagliardo.hpp"
#include "fracbv/riesz.hpp"

namespace fracbv {

enum class VariationMethod { dual_closed_form, gradient_l1, seminorm };
enum class Variant { riesz, gagliardo };

struct VariationResult {
  double value = 0.0;
  VariationMethod method = VariationMethod::dual_closed_form;
  /// Maximizing test field; absent for gagliardo grids above the dense pair limit.
  std::optional<RieszVectorField> riesz_certificate;
  std::optional<NonlocalField> gagliardo_certificate;
};

/// Options with the exact-adjoint divergence used by every duality routine.
RieszOptions adjoint_riesz_options(RieszBackend gradient = RieszBackend::spectral);

/// sum_i w |(D^alpha f)_i| with certificate -D^alpha f / |D^alpha f|.
VariationResult var_riesz(const ScalarField& f, double alpha, const RieszOptions& options = adjoint_riesz_options());

/// Discrete seminorm on omega with certificate -sign(f_i - f_j).
VariationResult var_gagliardo(const ScalarField& f, const Mask& omega, double alpha,
                              const GagliardoOptions& options = {});

/// <f, Div Phi> (riesz) and <f, div Phi> (gagliardo), the pairings certificates reproduce.
double riesz_pairing(const ScalarField& f, const RieszVectorField& Phi, double alpha,
                     const RieszOptions& options = adjoint_riesz_options());
double gagliardo_pairing(const ScalarField& f, const NonlocalField& Phi, double alpha,
                         const GagliardoOptions& options = {});

struct EquivalenceReport {
  double residual = 0.0;  ///< |var - seminorm| / max(1, seminorm)
  double seminorm = 0.0;
  std::vector<double> eps;
  std::vector<double> mollified;  ///< seminorm of the mollified field on the shrunk domain
  bool bracketed = true;          ///< mollified values <= seminorm * 1.01
};

/// Compares the dual variation with the seminorm and, when eps is nonempty,
/// runs the mollification route on omega shrunk by the largest eps.
EquivalenceReport theorem_equivalence_check(const ScalarField& f, const Mask& omega, double alpha,
                                            const std::vector<double>& eps = {},
                                            const GagliardoOptions& options = {});

struct LscReport {
  bool passed = false;
  double value = 0.0;        ///< functional at the limit
  double bound = 0.0;        ///< min_k (F(f_k) + L d_k)
  double lipschitz = 0.0;    ///< L1 Lipschitz constant of the discrete functional
  std::vector<double> distances;
  std::vector<double> values;
};

struct LscOptions {
  double alpha = 0.5;
  double convergence_tol = 1e-8;
  RieszOptions riesz = adjoint_riesz_options();
  GagliardoOptions gagliardo{};
};

/// Lower semicontinuity along f_k -> f in L1. Throws InvalidArgument when the
/// L1 distances increase or the last one exceeds the tolerance.
LscReport lsc_check(const std::vector<ScalarField>& sequence, const ScalarField& f, Variant functional,
                    const LscOptions& options = {});

/// Exponent used by the embedding study.
double embedding_exponent(int dim, double alpha);

/// ||f||_{L^p} / (||f||_{L^1} + variation).
double embedding_check(const ScalarField& f, double alpha, Variant variant);

}  // namespace fracbv
