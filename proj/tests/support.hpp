#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "fracbv/gagliardo.hpp"
#include "fracbv/grid.hpp"

namespace fracbv::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

inline Vector random_values(Index n, Rng& rng, double a = -1.0, double b = 1.0) {
  Vector v(n);
  for (auto& x : v) x = uniform(rng, a, b);
  return v;
}

inline ScalarField random_field(const Grid& g, Rng& rng) { return ScalarField(g, random_values(g.size(), rng)); }

inline RieszVectorField random_vector_field(const Grid& g, Rng& rng) {
  Eigen::MatrixXd c(g.size(), g.dim());
  for (int k = 0; k < g.dim(); ++k) c.col(k) = random_values(g.size(), rng);
  return RieszVectorField(g, c);
}

inline NonlocalField random_pair_field(const Grid& g, Rng& rng, const Mask& support) {
  Eigen::MatrixXd m(g.size(), g.size());
  for (Index j = 0; j < m.cols(); ++j) m.col(j) = random_values(g.size(), rng);
  return NonlocalField(g, m - m.transpose(), support);
}

/// Sum of a few Gaussians with random centers, widths and heights inside [lo, hi].
inline std::function<double(const Point&)> random_bump(Rng& rng, int dim, double lo, double hi, int count = 3) {
  struct B {
    Point c;
    double w, a;
  };
  std::vector<B> bumps;
  for (int k = 0; k < count; ++k) {
    Point c(uniform(rng, lo + 0.3 * (hi - lo), hi - 0.3 * (hi - lo)),
            dim == 2 ? uniform(rng, lo + 0.3 * (hi - lo), hi - 0.3 * (hi - lo)) : 0.0);
    bumps.push_back({c, uniform(rng, 0.05, 0.12) * (hi - lo), uniform(rng, 0.2, 1.0)});
  }
  return [bumps](const Point& x) {
    double s = 0.0;
    for (const B& b : bumps) s += b.a * std::exp(-(x - b.c).squaredNorm() / (b.w * b.w));
    return s;
  };
}

/// Adaptive Gauss-Kronrod 7/15 on [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12,
                        int depth = 0) {
  static const double xk[8] = {0.991455371120812639, 0.949107912342758525, 0.864864423359769073,
                               0.741531185599394440, 0.586087235467691130, 0.405845151377397167,
                               0.207784955007898468, 0.0};
  static const double wk[8] = {0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
                               0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
                               0.204432940075298892, 0.209482141084727828};
  static const double wg[4] = {0.129484966168869693, 0.279705391489276668, 0.381830050505118945,
                               0.417959183673469388};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double k = wk[7] * f(c), g = wg[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double s = f(c - h * xk[i]) + f(c + h * xk[i]);
    k += wk[i] * s;
    if (i % 2 == 1) g += wg[i / 2] * s;
  }
  k *= h;
  g *= h;
  if (std::abs(k - g) <= tol || depth > 40) return k;
  return integrate(f, a, c, 0.5 * tol, depth + 1) + integrate(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace fracbv::testing
