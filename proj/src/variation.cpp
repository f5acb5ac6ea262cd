#include "fracbv/variation.hpp"

#include <cmath>

#include "fracbv/approx.hpp"
#include "fracbv/error.hpp"

namespace fracbv {

RieszOptions adjoint_riesz_options(RieszBackend gradient) {
  RieszOptions o;
  o.backend = RieszBackend::adjoint;
  o.adjoint_of = gradient;
  return o;
}

VariationResult var_riesz(const ScalarField& f, double alpha, const RieszOptions& options) {
  if (!f.vanishes_off_mask()) throw InvalidArgument("var_riesz: f must vanish outside its mask");
  const RieszGradientOperator op(f.grid(), alpha, options);
  const Eigen::MatrixXd d = op.apply(f.values());
  const Vector norms = d.rowwise().norm();
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(d.rows(), d.cols());
  for (Index i = 0; i < d.rows(); ++i) {
    if (norms[i] > 0.0) phi.row(i) = -d.row(i) / norms[i];
  }
  VariationResult r;
  r.value = f.grid().cell_volume() * norms.sum();
  r.method = VariationMethod::dual_closed_form;
  r.riesz_certificate = RieszVectorField(f.grid(), std::move(phi));
  return r;
}

VariationResult var_gagliardo(const ScalarField& f, const Mask& omega, double alpha, const GagliardoOptions& options) {
  VariationResult r;
  r.value = gagliardo_seminorm(f, omega, alpha, options);
  r.method = VariationMethod::seminorm;
  const Grid& g = f.grid();
  if (g.size() <= kMaxPairNodes) {
    const Index n = g.size();
    Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        const double d = f[i] - f[j];
        phi(i, j) = d > 0.0 ? -1.0 : (d < 0.0 ? 1.0 : 0.0);
      }
    }
    r.gagliardo_certificate = NonlocalField(g, std::move(phi), omega);
    r.value = gagliardo_pairing(f, *r.gagliardo_certificate, alpha, options);
    r.method = VariationMethod::dual_closed_form;
  }
  return r;
}

double riesz_pairing(const ScalarField& f, const RieszVectorField& Phi, double alpha, const RieszOptions& options) {
  const RieszGradientOperator op(f.grid(), alpha, options);
  return f.grid().cell_volume() * f.values().dot(op.divergence(Phi.components()));
}

double gagliardo_pairing(const ScalarField& f, const NonlocalField& Phi, double alpha, const GagliardoOptions& options) {
  return f.grid().cell_volume() * f.values().dot(gag_divergence(Phi, alpha, options).values());
}

EquivalenceReport theorem_equivalence_check(const ScalarField& f, const Mask& omega, double alpha,
                                            const std::vector<double>& eps, const GagliardoOptions& options) {
  EquivalenceReport r;
  r.seminorm = gagliardo_seminorm(f, omega, alpha, options);
  const double var = var_gagliardo(f, omega, alpha, options).value;
  r.residual = std::abs(var - r.seminorm) / std::max(1.0, r.seminorm);
  if (eps.empty()) return r;
  // G: nodes of omega whose largest-eps neighbourhood stays inside omega
  const double largest = *std::max_element(eps.begin(), eps.end());
  const StencilWeights reach = sampled_weights(f.grid(), largest);
  Mask outside = Mask::Constant(omega.size(), false);
  for (Index i = 0; i < omega.size(); ++i) outside[i] = !omega[i];
  const Mask near_outside = dilate(f.grid(), outside, reach);
  Mask G(omega.size());
  for (Index i = 0; i < omega.size(); ++i) {
    const auto idx = f.grid().multi_index(i);
    bool interior = true;
    for (int k = 0; k < f.grid().dim(); ++k) {
      interior = interior && idx[k] >= reach.reach && idx[k] + reach.reach < f.grid().points(k);
    }
    G[i] = omega[i] && !near_outside[i] && interior;
  }
  const RecoveryTrace trace = recovery_sequence(f, omega, G, eps, alpha, options);
  r.eps = trace.eps;
  r.mollified = trace.values;
  r.bracketed = trace.bounded;
  return r;
}

namespace {

double functional_value(const ScalarField& f, Variant v, const LscOptions& o) {
  if (v == Variant::riesz) return var_riesz(f, o.alpha, o.riesz).value;
  return gagliardo_seminorm(f, f.mask(), o.alpha, o.gagliardo);
}

// Largest L1 -> value ratio: max over unit node masses of the discrete functional.
double l1_lipschitz(const ScalarField& f, Variant v, const LscOptions& o) {
  const Grid& g = f.grid();
  const double w = g.cell_volume();
  if (v == Variant::gagliardo) {
    const GagliardoKernel kernel(g, o.alpha, o.gagliardo);
    double best = 0.0;
    for (Index i = 0; i < g.size(); ++i) {
      if (!f.mask()[i]) continue;
      const auto a = g.multi_index(i);
      double row = 0.0;
      for (Index j = 0; j < g.size(); ++j) {
        if (j == i || !f.mask()[j]) continue;
        const auto b = g.multi_index(j);
        row += kernel.kernel(a[0] - b[0], a[1] - b[1]);
      }
      best = std::max(best, 2.0 * w * row);
    }
    return best;
  }
  return RieszGradientOperator(g, o.alpha, o.riesz).l1_bound();
}

}  // namespace

LscReport lsc_check(const std::vector<ScalarField>& sequence, const ScalarField& f, Variant functional,
                    const LscOptions& options) {
  if (sequence.empty()) throw InvalidArgument("lsc_check: empty sequence");
  LscReport r;
  double previous = INFINITY;
  for (const ScalarField& fk : sequence) {
    if (!(fk.grid() == f.grid())) throw InvalidArgument("lsc_check: grid mismatch");
    const double d = f.grid().cell_volume() * (fk.values() - f.values()).cwiseAbs().sum();
    if (d > previous * (1.0 + 1e-12) + 1e-15) throw InvalidArgument("lsc_check: L1 distances increase");
    previous = d;
    r.distances.push_back(d);
  }
  if (r.distances.back() > options.convergence_tol) {
    throw InvalidArgument("lsc_check: sequence does not reach the limit in L1");
  }
  r.value = functional_value(f, functional, options);
  r.lipschitz = l1_lipschitz(f, functional, options);
  r.bound = INFINITY;
  double scale = std::max(1.0, r.value);
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    const double v = functional_value(sequence[k], functional, options);
    r.values.push_back(v);
    scale = std::max(scale, v);
    r.bound = std::min(r.bound, v + r.lipschitz * r.distances[k]);
  }
  r.passed = r.value <= r.bound + 1e-8 * scale;
  return r;
}

double embedding_exponent(int dim, double alpha) {
  if (dim == 2) return 2.0 / (2.0 - alpha);
  return std::min(2.0, 1.0 / (1.0 - alpha) - 0.1);
}

double embedding_check(const ScalarField& f, double alpha, Variant variant) {
  const double p = embedding_exponent(f.grid().dim(), alpha);
  const double num = lp_norm(f, p, full_mask(f.grid()));
  if (num == 0.0) return 0.0;
  const double l1 = lp_norm(f, 1.0, full_mask(f.grid()));
  const double var = variant == Variant::riesz ? var_riesz(f, alpha).value
                                               : gagliardo_seminorm(f, f.mask(), alpha);
  return num / (l1 + var);
}

}  // namespace fracbv
