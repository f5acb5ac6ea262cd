#include <doctest.h>

#include <cmath>

#include "fracbv/approx.hpp"
#include "fracbv/error.hpp"
#include "support.hpp"

using namespace fracbv;
using namespace fracbv::testing;

TEST_CASE("mollifier profile") {
  const Mollifier m(0.5, 2);
  CHECK(m.profile(Point::Zero()) == doctest::Approx(std::exp(-1.0)));
  CHECK(m.profile(Point(0.5, 0.0)) == 0.0);
  CHECK(m.profile(Point(0.4, 0.4)) == 0.0);
  CHECK(m.profile(Point(0.25, 0.0)) == doctest::Approx(std::exp(-1.0 / 0.75)));
}

TEST_CASE("stencil weights are a symmetric probability") {
  for (const Grid& g : {make_grid({{0.0, 1.0}}, {101}), make_grid({{0.0, 1.0}, {0.0, 1.0}}, {41, 41})}) {
    for (double eps : {0.003, 0.02, 0.1}) {
      const double h = g.spacing(0);
      const bool fine = eps >= 2.0 * h;
      const StencilWeights w = fine ? sampled_weights(g, eps) : interpolant_weights(g, eps);
      double s = 0.0;
      for (double x : w.weights) {
        CHECK(x >= 0.0);
        s += x;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
      for (std::size_t a = 0; a < w.offsets.size(); ++a) {
        for (std::size_t b = 0; b < w.offsets.size(); ++b) {
          if (w.offsets[b][0] == -w.offsets[a][0] && w.offsets[b][1] == -w.offsets[a][1])
            CHECK(w.weights[b] == doctest::Approx(w.weights[a]).epsilon(1e-13));
        }
      }
    }
  }
  CHECK_THROWS_AS(sampled_weights(make_grid({{0.0, 1.0}}, {101}), 0.015), InvalidArgument);
}

TEST_CASE("tiny scales reduce to the identity") {
  // the interpolant has slope jumps of at most 4 / h at the nodes
  const Grid g = make_grid({{0.0, 1.0}}, {51});
  Rng rng(61);
  const Vector v = random_values(g.size(), rng);
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    const StencilWeights w = interpolant_weights(g, eps);
    CHECK((convolve(g, v, w) - v).cwiseAbs().maxCoeff() <= 4.0 * eps / g.spacing(0));
  }
}

TEST_CASE("convolution reproduces affine functions away from the faces") {
  const Grid g = make_grid({{0.0, 1.0}, {0.0, 1.0}}, {41, 41});
  const StencilWeights w = sampled_weights(g, 0.1);
  Vector v(g.size());
  for (Index i = 0; i < g.size(); ++i) v[i] = 0.3 + 2.0 * g.node(i).x() - g.node(i).y();
  const Vector c = convolve(g, v, w);
  for (Index i = 0; i < g.size(); ++i) {
    const auto m = g.multi_index(i);
    if (m[0] >= w.reach && m[1] >= w.reach && m[0] < 41 - w.reach && m[1] < 41 - w.reach)
      CHECK(c[i] == doctest::Approx(v[i]).epsilon(1e-12).scale(1.0));
  }
  Mask one = Mask::Constant(g.size(), false);
  one[g.flat_index(20, 20)] = true;
  const Mask d = dilate(g, one, w);
  CHECK(d[g.flat_index(20, 20)]);
  CHECK(d.count() >= static_cast<Index>(w.offsets.size()));
}

TEST_CASE("cutoff shape") {
  const Cutoff z{1.0, Point(0.5, 0.0)};
  CHECK(z(Point(0.5, 0.0)) == 1.0);
  CHECK(z(Point(1.4, 0.0)) == 1.0);
  CHECK(z(Point(2.6, 0.0)) == 0.0);
  double last = 1.0;
  for (double r = 1.0; r <= 2.0; r += 0.05) {
    const double v = z(Point(0.5 + r, 0.0));
    CHECK(v <= last + 1e-15);
    last = v;
  }
}

TEST_CASE("pair mollification keeps antisymmetry and the unit scaling is the identity") {
  Rng rng(62);
  const Grid g = make_grid({{-1.0, 1.0}}, {41});
  const ConvexDomain omega = ConvexDomain::interval(-0.4, 0.4);
  const NonlocalField Phi = random_pair_field(g, rng, omega.mask(g));
  const NonlocalField m = pair_mollify(Phi, 0.15);
  CHECK(m.is_antisymmetric(1e-14));
  CHECK(m.sup_norm() <= Phi.sup_norm() * (1.0 + 1e-12));
  const NonlocalField s = scale_pair_field(Phi, 1.0, Point::Zero());
  CHECK((s.values() - Phi.values()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("X norm against a direct evaluation") {
  Rng rng(63);
  const Grid g = make_grid({{-1.0, 1.0}}, {48});
  const RieszVectorField F = random_vector_field(g, rng);
  const Mask omega = ConvexDomain::interval(-0.5, 0.5).mask(g);
  PipelineOptions o;
  o.q = 3.0;
  const RieszGradientOperator op(g, o.alpha, o.riesz);
  const Vector d = op.divergence(F.components());
  double s = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    s += g.cell_volume() * std::pow(std::abs(F.components()(i, 0)), 3.0);
    if (omega[i]) s += g.cell_volume() * std::pow(std::abs(d[i]), 3.0);
  }
  CHECK(riesz_x_norm(F, omega, o) == doctest::Approx(std::cbrt(s)).epsilon(1e-12));
}

TEST_CASE("1D pipelines stay feasible and close") {
  const Grid g = make_grid({{-3.0, 3.0}}, {241});
  const ConvexDomain omega = ConvexDomain::interval(-0.5, 0.5);
  Eigen::MatrixXd c(g.size(), 1);
  for (Index i = 0; i < g.size(); ++i) c(i, 0) = 0.7 * std::exp(-g.node(i).squaredNorm() / 0.2) * std::cos(3.0 * g.node(i).x());
  const auto r = density_pipeline_riesz(RieszVectorField(g, c), 1.0, omega, 5e-2);
  CHECK(r.report.sup_norm <= 1.0 + 1e-12);
  CHECK(r.report.total_distance <= 5e-2);
  CHECK(r.report.rho > 1.0);
  CHECK_THROWS_AS(density_pipeline_riesz(RieszVectorField(g, c), 1.0, omega, 1e-12), ResolutionFailure);

  const Grid gg = make_grid({{-1.0, 1.0}}, {41});
  Eigen::MatrixXd v(gg.size(), gg.size());
  for (Index j = 0; j < gg.size(); ++j)
    for (Index i = 0; i < gg.size(); ++i) v(i, j) = 0.8 * std::sin(gg.node(i).x() - gg.node(j).x());
  const NonlocalField Phi(gg, v, omega.mask(gg));
  const auto q = density_pipeline_gagliardo(Phi, 1.0, omega, 5e-2);
  CHECK(q.theta.is_antisymmetric(1e-14));
  CHECK(q.report.sup_norm <= 1.0 + 1e-12);
  CHECK(q.report.total_distance <= 5e-2);
  CHECK(q.report.rho < 1.0);
}

TEST_CASE("recovery sequence stays below the reference") {
  const Grid g = make_grid({{-1.0, 1.0}}, {201});
  const Mask omega = ConvexDomain::interval(-0.8, 0.8).mask(g);
  const Mask G = ConvexDomain::interval(-0.5, 0.5).mask(g);
  const ScalarField f = ScalarField::sample(g, [](const Point& x) { return std::sin(4.0 * x.x()) + (x.x() > 0.1 ? 1.0 : 0.0); });
  const RecoveryTrace t = recovery_sequence(f, omega, G, {0.2, 0.1, 0.05, 0.02}, 0.5);
  CHECK(t.bounded);
  for (double v : t.values) CHECK(v <= t.reference * 1.01);
  CHECK(t.values.back() >= 0.5 * t.reference);
  CHECK_THROWS_AS(recovery_sequence(f, omega, G, {0.5}, 0.5), InvalidArgument);
}
