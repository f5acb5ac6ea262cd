#include <doctest.h>

#include <cmath>

#include "fracbv/special.hpp"

using namespace fracbv;

TEST_CASE("zeta values") {
  CHECK(riemann_zeta(2.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-14));
  CHECK(riemann_zeta(4.0) == doctest::Approx(std::pow(M_PI, 4) / 90.0).epsilon(1e-14));
  CHECK(riemann_zeta(1.5) == doctest::Approx(2.612375348685488).epsilon(1e-13));
  CHECK(hurwitz_zeta(3.0, 1.0) == doctest::Approx(riemann_zeta(3.0)).epsilon(1e-14));
  // zeta(s, 1/2) = (2^s - 1) zeta(s)
  CHECK(hurwitz_zeta(2.5, 0.5) == doctest::Approx((std::pow(2.0, 2.5) - 1.0) * riemann_zeta(2.5)).epsilon(1e-13));
}

TEST_CASE("Dirichlet beta") {
  CHECK(dirichlet_beta(1.0) == doctest::Approx(M_PI / 4.0).epsilon(1e-13));
  CHECK(dirichlet_beta(2.0) == doctest::Approx(0.915965594177219015).epsilon(1e-14));
  CHECK(dirichlet_beta(3.0) == doctest::Approx(std::pow(M_PI, 3) / 32.0).epsilon(1e-14));
}

TEST_CASE("lattice sums against direct summation") {
  CHECK(lattice_zeta(1, 3.0) == doctest::Approx(2.0 * riemann_zeta(3.0)).epsilon(1e-14));
  // sum over Z^2 \ 0 of |m|^-s: direct sum to radius R plus the integral tail 2 pi R^(2-s) / (s - 2)
  const double s = 4.5;
  const int R = 400;
  double direct = 0.0;
  for (int a = -R; a <= R; ++a) {
    for (int b = -R; b <= R; ++b) {
      const double r2 = double(a) * a + double(b) * b;
      if (r2 == 0.0 || r2 > double(R) * R) continue;
      direct += std::pow(r2, -0.5 * s);
    }
  }
  direct += 2.0 * M_PI * std::pow(R, 2.0 - s) / (s - 2.0);
  CHECK(lattice_zeta(2, s) == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  for (int order : {2, 5, 12, 20}) {
    const GaussRule& r = gauss_legendre(order);
    REQUIRE(r.nodes.size() == std::size_t(order));
    for (int deg = 0; deg < 2 * order; ++deg) {
      double sum = 0.0;
      for (int i = 0; i < order; ++i) sum += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(sum == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}
