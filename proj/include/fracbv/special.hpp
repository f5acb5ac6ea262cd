#pragma once

#include <vector>

namespace fracbv {

/// Hurwitz zeta sum_{k>=0} (k + a)^{-s}, analytically continued to all s != 1.
double hurwitz_zeta(double s, double a);
double riemann_zeta(double s);
/// Dirichlet beta sum_{k>=0} (-1)^k (2k + 1)^{-s}.
double dirichlet_beta(double s);

/// sum over nonzero m in Z^n of |m|^{-s}, continued analytically (n = 1, 2).
double lattice_zeta(int n, double s);

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1].
const GaussRule& gauss_legendre(int order);

}  // namespace fracbv
