#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracbv/domain.hpp"
#include "fracbv/gagliardo.hpp"
#include "fracbv/riesz.hpp"
#include "fracbv/variation.hpp"

namespace fracbv {

struct DenoiseProblem {
  DenoiseProblem(ScalarField noisy_field, ConvexDomain omega)
      : noisy(std::move(noisy_field)), domain(std::move(omega)) {}

  Variant variant = Variant::gagliardo;
  double alpha = 0.5;
  double beta = 0.1;   ///< regularization weight
  double gamma = 1.0;  ///< fidelity weight
  double p = 2.0;
  ScalarField noisy;   ///< u_N on the image grid
  ConvexDomain domain;
  /// Extra cells around the image grid carrying the Riesz dual variable.
  Index riesz_margin = 8;
  RieszOptions riesz = adjoint_riesz_options();
  GagliardoOptions gagliardo{};

  double q() const { return p / (p - 1.0); }
  /// p inside (1, n / (n - alpha)).
  bool p_admissible() const;
  void validate() const;
};

/// Riesz: vector field on the padded box; gagliardo: pair field on Omega x Omega.
struct DualVariable {
  std::optional<RieszVectorField> riesz;
  std::optional<NonlocalField> gagliardo;
};

struct TraceRow {
  int k = 0;
  double primal = 0.0;
  double predual = 0.0;
  double gap = 0.0;
  double vi_residual = 0.0;
  double step = 0.0;
};

struct SolveReport {
  int iterations = 0;
  double primal_energy = 0.0;
  double predual_energy = 0.0;
  double duality_gap = 0.0;
  double vi_residual = 0.0;
  /// Fixed-point residual of the projected-gradient map at the returned iterate.
  double recovery_residual = 0.0;
  double step_size = 0.0;
  double operator_norm_estimate = 0.0;
  bool converged = false;
  std::string sign_convention = "u = u_N + |Div Phi|^(q-2) Div Phi";
  std::vector<TraceRow> trace;
};

struct SolveOptions {
  double tol = 1e-6;
  int max_iter = 5000;
  bool accelerate = true;
  /// Gap evaluation (and trace row) every this many iterations.
  int check_every = 5;
  std::uint64_t seed = 12345;
};

/// Grid carrying the Riesz dual variable.
Grid riesz_dual_grid(const DenoiseProblem& prob);

DualVariable zero_dual(const DenoiseProblem& prob);
bool is_feasible(const DualVariable& phi, double beta);

double primal_energy(const ScalarField& u, const DenoiseProblem& prob);
/// +infinity for infeasible phi.
double predual_energy(const DualVariable& phi, const DenoiseProblem& prob);
DualVariable project_feasible(const DualVariable& phi, double beta);
ScalarField recover_primal(const DualVariable& phi, const DenoiseProblem& prob);
double vi_residual(const DualVariable& phi, const ScalarField& u, const DenoiseProblem& prob);

struct PredualSolution {
  DualVariable phi;
  SolveReport report;
};

PredualSolution solve_predual(const DenoiseProblem& prob, const SolveOptions& options = {});

struct ReferenceSolution {
  ScalarField u;
  int iterations = 0;
  double gap = 0.0;
  bool converged = false;
};

/// Accelerated primal-dual iteration on the saddle form (p = 2 only).
ReferenceSolution solve_primal_reference(const DenoiseProblem& prob, double tol, int max_iter = 200000);

struct SignCalibration {
  double plus_energy = 0.0;   ///< primal energy of u_N + Div Phi
  double minus_energy = 0.0;  ///< primal energy of u_N - Div Phi
  bool plus_wins() const { return plus_energy <= minus_energy; }
};

/// Solves a small instance and compares both sign choices of the recovery formula.
SignCalibration calibrate_sign_convention(Variant variant);

}  // namespace fracbv
