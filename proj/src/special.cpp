#include "fracbv/special.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fracbv/error.hpp"

namespace fracbv {

namespace {

constexpr int kHead = 24;

// Euler-Maclaurin with the tail starting at k = kHead, minus the pole term.
double hurwitz_regular(double s, double a) {
  constexpr int n = kHead;
  static constexpr std::array<double, 10> bernoulli{
      1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30, 5.0 / 66,
      -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798, -174611.0 / 330};
  double sum = 0.0;
  for (int k = 0; k < n; ++k) sum += std::pow(k + a, -s);
  const double x = n + a;
  sum += 0.5 * std::pow(x, -s);
  double rising = s;  // s (s+1) ... (s+2j-2)
  double factorial = 2.0;
  double power = std::pow(x, -s - 1.0);
  for (std::size_t j = 1; j <= bernoulli.size(); ++j) {
    sum += bernoulli[j - 1] / factorial * rising * power;
    rising *= (s + 2.0 * j - 1.0) * (s + 2.0 * j);
    factorial *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    power /= x * x;
  }
  return sum;
}

}  // namespace

double hurwitz_zeta(double s, double a) {
  if (s == 1.0) throw InvalidArgument("hurwitz_zeta: pole at s = 1");
  if (!(a > 0.0)) throw InvalidArgument("hurwitz_zeta: need a > 0");
  return hurwitz_regular(s, a) + std::pow(kHead + a, 1.0 - s) / (s - 1.0);
}

double riemann_zeta(double s) { return hurwitz_zeta(s, 1.0); }

double dirichlet_beta(double s) {
  // pole terms cancel: (x1^t - x2^t) / (-t) with t = 1 - s
  const double t = 1.0 - s, x1 = kHead + 0.25, x2 = kHead + 0.75;
  const double poles = t == 0.0 ? std::log(x2 / x1) : -std::pow(x2, t) * std::expm1(t * std::log(x1 / x2)) / t;
  return std::pow(4.0, -s) * (hurwitz_regular(s, 0.25) - hurwitz_regular(s, 0.75) + poles);
}

double lattice_zeta(int n, double s) {
  if (n == 1) return 2.0 * riemann_zeta(s);
  if (n == 2) return 4.0 * riemann_zeta(0.5 * s) * dirichlet_beta(0.5 * s);
  throw InvalidArgument("lattice_zeta: dimension must be 1 or 2");
}

const GaussRule& gauss_legendre(int order) {
  static std::mutex lock;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> guard(lock);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 1) throw InvalidArgument("gauss_legendre: order must be positive");
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

}  // namespace fracbv
