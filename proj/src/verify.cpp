#include "fracbv/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "fracbv/approx.hpp"
#include "fracbv/denoise.hpp"
#include "fracbv/domain.hpp"
#include "fracbv/variation.hpp"

namespace fracbv {

namespace {

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

CheckOutcome riesz_adjointness(const Grid& g, std::mt19937_64& rng, const std::string& name) {
  const RieszOptions opt = adjoint_riesz_options();
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const ScalarField f(g, random_vector(g.size(), rng));
    Eigen::MatrixXd c(g.size(), g.dim());
    for (int k = 0; k < g.dim(); ++k) c.col(k) = random_vector(g.size(), rng);
    const RieszVectorField F(g, c);
    const double a = inner(F, riesz_gradient(f, 0.5, opt));
    const double b = inner(riesz_divergence(F, 0.5, opt), f);
    worst = std::max(worst, std::abs(a + b) / std::max(std::abs(a), 1e-300));
  }
  return {name, worst <= 1e-12, fmt("max relative defect %.3g", worst)};
}

CheckOutcome gagliardo_adjointness(const Grid& g, std::mt19937_64& rng, const std::string& name) {
  const GagliardoKernel kernel(g, 0.5);
  const Mask all = full_mask(g);
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    const ScalarField f(g, random_vector(g.size(), rng));
    Eigen::MatrixXd m(g.size(), g.size());
    for (Index j = 0; j < m.cols(); ++j) m.col(j) = random_vector(g.size(), rng);
    const NonlocalField F = NonlocalField(g, m - m.transpose(), all);
    const double a = pair_inner(F, gag_gradient(f, 0.5), kernel);
    const double b = inner(gag_divergence(F, kernel), f);
    worst = std::max(worst, std::abs(a + b) / std::max(std::abs(a), 1e-300));
  }
  return {name, worst <= 1e-12, fmt("max relative defect %.3g", worst)};
}

CheckOutcome duality(Variant v, std::mt19937_64& rng) {
  const Grid g = make_grid({{0.0, 1.0}, {0.0, 1.0}}, {16, 16});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector vals(g.size());
  for (auto& x : vals) x = u(rng);
  DenoiseProblem prob(ScalarField(g, vals), ConvexDomain::rectangle(Point(-1e-9, -1e-9), Point(1 + 1e-9, 1 + 1e-9)));
  prob.variant = v;
  prob.beta = 0.1;
  const PredualSolution sol = solve_predual(prob, SolveOptions{});
  const SolveReport& r = sol.report;
  const double rel = r.duality_gap / (1.0 + std::abs(r.primal_energy));
  const bool ok = r.converged && rel <= 1e-6 && rel >= -1e-8 && is_feasible(sol.phi, prob.beta);
  return {std::string("duality_gap_") + (v == Variant::riesz ? "riesz" : "gagliardo"), ok,
          fmt("relative gap %.3g after %.0f iterations", rel, r.iterations)};
}

CheckOutcome equivalence() {
  const Grid g = make_grid({{-2.0, 2.0}}, {161});
  const ScalarField f = ScalarField::sample(g, [](const Point& x) { return x.x() >= 0.0 && x.x() <= 1.0 ? 1.0 : 0.0; });
  const Mask all = full_mask(g);
  const double var = var_gagliardo(f, all, 0.5).value;
  const double semi = gagliardo_seminorm(f, all, 0.5);
  const double res = std::abs(var - semi) / std::max(1.0, semi);
  return {"seminorm_identity", res <= 1e-12, fmt("|var - seminorm| = %.3g", res)};
}

CheckOutcome pipelines(std::mt19937_64& rng) {
  const Grid g = make_grid({{-2.0, 2.0}, {-2.0, 2.0}}, {49, 49});
  const ConvexDomain omega = ConvexDomain::rectangle(Point(-0.5, -0.5), Point(0.5, 0.5));
  const double beta = 1.0;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double a = u(rng), b = u(rng);
  Eigen::MatrixXd c(g.size(), 2);
  for (Index i = 0; i < g.size(); ++i) {
    const Point x = g.node(i);
    const double env = std::exp(-x.squaredNorm() / 0.1);
    c(i, 0) = 0.6 * env * std::cos(2.0 * x.x() + a);
    c(i, 1) = 0.6 * env * std::sin(3.0 * x.y() + b);
  }
  const RieszVectorField Phi(g, c);
  const auto rr = density_pipeline_riesz(Phi, beta, omega, 5e-2);
  const bool rok = rr.report.sup_norm <= beta + 1e-12 && rr.report.total_distance <= 5e-2;
  return {"density_pipeline_riesz", rok,
          fmt("distance %.3g, sup %.6g", rr.report.total_distance, rr.report.sup_norm)};
}

CheckOutcome pipeline_gagliardo() {
  const Grid g = make_grid({{-1.0, 1.0}, {-1.0, 1.0}}, {21, 21});
  const ConvexDomain omega = ConvexDomain::rectangle(Point(-0.55, -0.55), Point(0.55, 0.55));
  const Mask m = omega.mask(g);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(g.size(), g.size());
  for (Index j = 0; j < g.size(); ++j) {
    for (Index i = 0; i < g.size(); ++i) v(i, j) = 0.8 * std::sin(g.node(i).x() - g.node(j).x());
  }
  const NonlocalField Phi(g, v, m);
  const double beta = 1.0;
  const auto gr = density_pipeline_gagliardo(Phi, beta, omega, 5e-2);
  const bool ok = gr.report.sup_norm <= beta + 1e-12 && gr.report.total_distance <= 5e-2 &&
                  gr.theta.is_antisymmetric(1e-14);
  return {"density_pipeline_gagliardo", ok,
          fmt("distance %.3g, sup %.6g", gr.report.total_distance, gr.report.sup_norm)};
}

CheckOutcome appendix() {
  const ConvexDomain sq = ConvexDomain::rectangle(Point(-1.0, -1.0), Point(1.0, 1.0));
  const double l1 = radial_function(sq, Point(1.0, 0.0));
  const double l2 = radial_function(sq, Point(1.0, 1.0).normalized());
  const double sep = separation(sq, 1.0, 1.5).distance;
  const double err = std::max({std::abs(l1 - 1.0), std::abs(l2 - std::sqrt(2.0))});
  const bool ok = err <= 1e-12 && std::abs(sep - 0.5) <= 1e-3;
  return {"star_shaped_domain", ok, fmt("lambda error %.3g, separation %.6f", err, sep)};
}

}  // namespace

std::vector<CheckOutcome> run_invariant_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckOutcome> out;
  const auto guarded = [&](const std::string& name, const std::function<CheckOutcome()>& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back({name, false, e.what()});
    }
  };
  const Grid g1 = make_grid({{0.0, 1.0}}, {64});
  const Grid g2 = make_grid({{0.0, 1.0}, {0.0, 1.0}}, {16, 16});
  guarded("riesz_adjointness_1d", [&] { return riesz_adjointness(g1, rng, "riesz_adjointness_1d"); });
  guarded("riesz_adjointness_2d", [&] { return riesz_adjointness(g2, rng, "riesz_adjointness_2d"); });
  guarded("gagliardo_adjointness_1d", [&] { return gagliardo_adjointness(g1, rng, "gagliardo_adjointness_1d"); });
  guarded("gagliardo_adjointness_2d", [&] { return gagliardo_adjointness(g2, rng, "gagliardo_adjointness_2d"); });
  guarded("duality_gap_riesz", [&] { return duality(Variant::riesz, rng); });
  guarded("duality_gap_gagliardo", [&] { return duality(Variant::gagliardo, rng); });
  guarded("seminorm_identity", equivalence);
  guarded("density_pipeline_riesz", [&] { return pipelines(rng); });
  guarded("density_pipeline_gagliardo", pipeline_gagliardo);
  guarded("star_shaped_domain", appendix);
  return out;
}

}  // namespace fracbv
