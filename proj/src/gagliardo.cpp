#include "fracbv/gagliardo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracbv/error.hpp"
#include "fracbv/riesz.hpp"
#include "fracbv/special.hpp"

namespace fracbv {

namespace {

constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("gagliardo: alpha must be positive");
  if (!(alpha < 1.0)) throw Unsupported("gagliardo: alpha = 1 is excluded");
}

// Average of |x - y|^{-1-alpha} over two cells of width h at offset m.
double cell_average_1d(Index m, double h, double alpha) {
  auto G = [alpha](double r) { return -std::pow(std::abs(r), 1.0 - alpha) / (alpha * (1.0 - alpha)); };
  const double mm = static_cast<double>(std::abs(m));
  if (mm > 64) {
    const double g = std::pow(mm * h, -1.0 - alpha);
    return g * (1.0 + (1.0 + alpha) * (2.0 + alpha) / (12.0 * mm * mm));
  }
  return (G((mm + 1) * h) + G((mm - 1) * h) - 2.0 * G(mm * h)) / (h * h);
}

// int_0^inf T(r d) r^{-1-alpha} dr for the tent T centred at m (cell units).
double ray_integral(double c0, double c1, double m0, double m1, double alpha) {
  std::vector<double> cuts{0.0};
  auto add = [&](double c, double m) {
    if (c == 0.0) return;
    for (double u : {-1.0, 0.0, 1.0}) {
      const double r = (m + u) / c;
      if (r > 0.0) cuts.push_back(r);
    }
  };
  add(c0, m0);
  add(c1, m1);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double r1 = cuts[k], r2 = cuts[k + 1];
    if (r2 <= r1) continue;
    const double mid = 0.5 * (r1 + r2);
    const double u0 = mid * c0 - m0, u1 = mid * c1 - m1;
    if (std::abs(u0) >= 1.0 || std::abs(u1) >= 1.0) continue;
    // 1 - s u(r) = (1 + s m) - s c r
    const double s0 = u0 < 0.0 ? -1.0 : 1.0;
    const double s1 = u1 < 0.0 ? -1.0 : 1.0;
    const double a0 = 1.0 + s0 * m0, b0 = -s0 * c0;
    const double a1 = 1.0 + s1 * m1, b1 = -s1 * c1;
    const double A = a0 * a1, B = a0 * b1 + a1 * b0, C = b0 * b1;
    double part = B * (std::pow(r2, 1.0 - alpha) - std::pow(r1, 1.0 - alpha)) / (1.0 - alpha) +
                  C * (std::pow(r2, 2.0 - alpha) - std::pow(r1, 2.0 - alpha)) / (2.0 - alpha);
    if (r1 > 0.0) part += A * (std::pow(r1, -alpha) - std::pow(r2, -alpha)) / alpha;
    sum += part;
  }
  return sum;
}

// Average of |x - y|^{-2-alpha} over two h0 x h1 cells at offset m.
double cell_average_2d(Index m0, Index m1, double h0, double h1, double alpha) {
  const double z0 = m0 * h0, z1 = m1 * h1;
  if (std::max(std::abs(m0), std::abs(m1)) > 16) {
    const double r2 = z0 * z0 + z1 * z1;
    const double s = 2.0 + alpha;
    const double g = std::pow(r2, -0.5 * s);
    // second moments of the tent are h_k^2 / 6 per axis
    const double d00 = s * (s + 2.0) * z0 * z0 / (r2 * r2) - s / r2;
    const double d11 = s * (s + 2.0) * z1 * z1 / (r2 * r2) - s / r2;
    return g * (1.0 + (h0 * h0 * d00 + h1 * h1 * d11) / 12.0);
  }
  std::vector<double> angles{0.0, 0.5 * kPi, kPi, 1.5 * kPi, 2.0 * kPi};
  for (int a = -1; a <= 1; ++a) {
    for (int b = -1; b <= 1; ++b) {
      const double x = (m0 + a) * h0, y = (m1 + b) * h1;
      if (x == 0.0 && y == 0.0) continue;
      double t = std::atan2(y, x);
      if (t < 0.0) t += 2.0 * kPi;
      angles.push_back(t);
    }
  }
  std::sort(angles.begin(), angles.end());
  const GaussRule& rule = gauss_legendre(20);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < angles.size(); ++k) {
    const double mid = 0.5 * (angles[k] + angles[k + 1]);
    const double half = 0.5 * (angles[k + 1] - angles[k]);
    if (half <= 1e-15) continue;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = mid + half * rule.nodes[q];
      sum += half * rule.weights[q] *
             ray_integral(std::cos(t) / h0, std::sin(t) / h1, static_cast<double>(m0), static_cast<double>(m1), alpha);
    }
  }
  return sum / (h0 * h1);
}

}  // namespace

GagliardoKernel::GagliardoKernel(const Grid& grid, double alpha, const GagliardoOptions& options)
    : dim_(grid.dim()), alpha_(alpha), periodic_(options.periodic) {
  check_alpha(alpha);
  for (int k = 0; k < dim_; ++k) {
    n_[k] = grid.points(k);
    h_[k] = grid.spacing(k);
  }
  table_.resize(2 * n_[0] - 1, 2 * n_[1] - 1);
  for (Index o1 = -(n_[1] - 1); o1 <= n_[1] - 1; ++o1) {
    for (Index o0 = -(n_[0] - 1); o0 <= n_[0] - 1; ++o0) {
      double v = 0.0;
      if (o0 != 0 || o1 != 0) {
        const double r = std::hypot(o0 * h_[0], o1 * h_[1]);
        if (options.quadrature == PairQuadrature::point) {
          v = std::pow(r, -dim_ - alpha);
        } else if (dim_ == 1) {
          v = cell_average_1d(o0, h_[0], alpha);
        } else if (o1 <= 0 && o0 <= 0) {
          v = cell_average_2d(o0, o1, h_[0], h_[1], alpha);
        } else {
          v = -1.0;  // filled from the mirrored quadrant
        }
      }
      table_(o0 + n_[0] - 1, o1 + n_[1] - 1) = v;
    }
  }
  if (dim_ == 2 && options.quadrature == PairQuadrature::cell_average) {
    for (Index o1 = -(n_[1] - 1); o1 <= n_[1] - 1; ++o1) {
      for (Index o0 = -(n_[0] - 1); o0 <= n_[0] - 1; ++o0) {
        if (o0 <= 0 && o1 <= 0) continue;
        table_(o0 + n_[0] - 1, o1 + n_[1] - 1) = table_(-std::abs(o0) + n_[0] - 1, -std::abs(o1) + n_[1] - 1);
      }
    }
  }
}

std::array<Index, 2> GagliardoKernel::wrap(Index o0, Index o1) const {
  std::array<Index, 2> o{o0, o1};
  if (periodic_) {
    for (int k = 0; k < dim_; ++k) {
      const Index n = n_[k];
      o[k] = ((o[k] % n) + n) % n;
      if (2 * o[k] > n) o[k] -= n;
    }
  }
  return o;
}

double GagliardoKernel::kernel(Index o0, Index o1) const {
  const auto o = wrap(o0, o1);
  return table_(o[0] + n_[0] - 1, o[1] + n_[1] - 1);
}

double GagliardoKernel::distance(Index o0, Index o1) const {
  const auto o = wrap(o0, o1);
  return std::hypot(o[0] * h_[0], o[1] * h_[1]);
}

double GagliardoKernel::pair_measure(Index o0, Index o1) const {
  const double w = dim_ == 1 ? h_[0] : h_[0] * h_[1];
  return w * w * kernel(o0, o1) * std::pow(distance(o0, o1), alpha_);
}

double GagliardoKernel::kernel_between(const Grid& grid, Index i, Index j) const {
  const auto a = grid.multi_index(i);
  const auto b = grid.multi_index(j);
  return kernel(a[0] - b[0], a[1] - b[1]);
}

NonlocalField::NonlocalField(Grid grid, Eigen::MatrixXd values, Mask support, double truncation_radius)
    : grid_(std::move(grid)), values_(std::move(values)), support_(std::move(support)), radius_(truncation_radius) {
  const Index n = grid_.size();
  if (n > kMaxPairNodes) {
    throw InvalidArgument("nonlocal field: " + std::to_string(n) + " nodes exceed the dense pair limit of " +
                          std::to_string(kMaxPairNodes));
  }
  if (values_.rows() != n || values_.cols() != n || support_.size() != n) {
    throw InvalidArgument("nonlocal field: shape does not match grid");
  }
  if (!values_.allFinite()) throw InvalidArgument("nonlocal field: non-finite value");
  if (!(radius_ > 0.0)) throw InvalidArgument("nonlocal field: truncation radius must be positive");
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j || !support_[i] || !support_[j] ||
          (std::isfinite(radius_) && (grid_.node(i) - grid_.node(j)).norm() > radius_)) {
        values_(i, j) = 0.0;
      }
    }
  }
}

NonlocalField NonlocalField::zeros(const Grid& grid, const Mask& support) {
  return NonlocalField(grid, Eigen::MatrixXd::Zero(grid.size(), grid.size()), support);
}

bool NonlocalField::is_antisymmetric(double tol) const {
  return (values_ + values_.transpose()).cwiseAbs().maxCoeff() <= tol;
}

NonlocalField NonlocalField::antisymmetric_part() const {
  return with_values(0.5 * (values_ - values_.transpose()));
}

NonlocalField NonlocalField::with_values(Eigen::MatrixXd values) const {
  return NonlocalField(grid_, std::move(values), support_, radius_);
}

NonlocalField gag_gradient(const ScalarField& f, double alpha, const GagliardoOptions& options) {
  check_alpha(alpha);
  const Grid& g = f.grid();
  const GagliardoKernel kernel(g, alpha, options);
  const Index n = g.size();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const auto b = g.multi_index(j);
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      const auto a = g.multi_index(i);
      v(i, j) = (f[i] - f[j]) / std::pow(kernel.distance(a[0] - b[0], a[1] - b[1]), alpha);
    }
  }
  return NonlocalField(g, std::move(v), f.mask());
}

ScalarField gag_divergence(const NonlocalField& F, const GagliardoKernel& kernel) {
  const Grid& g = F.grid();
  const Index n = g.size();
  const double w = g.cell_volume();
  Vector out = Vector::Zero(n);
  const Eigen::MatrixXd& v = F.values();
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      out[i] -= w * (v(i, j) - v(j, i)) * kernel.kernel_between(g, i, j);
    }
  }
  return ScalarField(g, std::move(out));
}

ScalarField gag_divergence(const NonlocalField& F, double alpha, const GagliardoOptions& options) {
  check_alpha(alpha);
  return gag_divergence(F, GagliardoKernel(F.grid(), alpha, options));
}

double pair_inner(const NonlocalField& F, const NonlocalField& G, const GagliardoKernel& kernel) {
  if (!(F.grid() == G.grid())) throw InvalidArgument("pair_inner: grid mismatch");
  const Grid& g = F.grid();
  double sum = 0.0;
  for (Index j = 0; j < g.size(); ++j) {
    const auto b = g.multi_index(j);
    for (Index i = 0; i < g.size(); ++i) {
      if (i == j) continue;
      const auto a = g.multi_index(i);
      sum += kernel.pair_measure(a[0] - b[0], a[1] - b[1]) * F(i, j) * G(i, j);
    }
  }
  return sum;
}

double pair_lq_norm(const NonlocalField& F, double q) {
  const Grid& g = F.grid();
  const double w2 = g.cell_volume() * g.cell_volume();
  double sum = 0.0, sup = 0.0;
  for (Index j = 0; j < g.size(); ++j) {
    for (Index i = 0; i < g.size(); ++i) {
      if (i == j || F(i, j) == 0.0) continue;
      const double a = std::abs(F(i, j));
      sup = std::max(sup, a);
      sum += w2 * std::pow(a, q) * std::pow((g.node(i) - g.node(j)).norm(), -g.dim());
    }
  }
  return std::isinf(q) ? sup : std::pow(sum, 1.0 / q);
}

ScalarField field_dot(const NonlocalField& F, const NonlocalField& G) {
  if (!(F.grid() == G.grid())) throw InvalidArgument("field_dot: grid mismatch");
  const Grid& g = F.grid();
  const double w = g.cell_volume();
  Vector out = Vector::Zero(g.size());
  for (Index j = 0; j < g.size(); ++j) {
    for (Index i = 0; i < g.size(); ++i) {
      if (i == j) continue;
      out[i] += w * F(i, j) * G(i, j) * std::pow((g.node(i) - g.node(j)).norm(), -g.dim());
    }
  }
  return ScalarField(g, std::move(out));
}

NonlocalField scalar_field_product(const ScalarField& f, const NonlocalField& F) {
  if (!(f.grid() == F.grid())) throw InvalidArgument("scalar_field_product: grid mismatch");
  const Index n = f.grid().size();
  Eigen::MatrixXd v(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) v(i, j) = 0.5 * (f[i] + f[j]) * F(i, j);
  }
  return F.with_values(std::move(v));
}

double gagliardo_seminorm(const ScalarField& f, const Mask& omega, double alpha, const GagliardoOptions& options) {
  check_alpha(alpha);
  const Grid& g = f.grid();
  if (omega.size() != g.size()) throw InvalidArgument("seminorm: mask size mismatch");
  const GagliardoKernel kernel(g, alpha, options);
  std::vector<Index> nodes;
  for (Index i = 0; i < g.size(); ++i) {
    if (omega[i]) nodes.push_back(i);
  }
  const double w2 = g.cell_volume() * g.cell_volume();
  double sum = 0.0;
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    const Index i = nodes[p];
    const auto a = g.multi_index(i);
    double row = 0.0;
    for (std::size_t q = p + 1; q < nodes.size(); ++q) {
      const Index j = nodes[q];
      const double d = f[i] - f[j];
      if (d == 0.0) continue;
      const auto b = g.multi_index(j);
      row += std::abs(d) * kernel.kernel(a[0] - b[0], a[1] - b[1]);
    }
    sum += row;
  }
  return 2.0 * w2 * sum;
}

PerimeterResult frac_perimeter(const Grid& grid, const Mask& E, double alpha, const GagliardoOptions& options,
                               double tail_bound) {
  if (E.size() != grid.size()) throw InvalidArgument("perimeter: mask size mismatch");
  PerimeterResult r;
  const ScalarField chi(grid, E.cast<double>().matrix());
  r.truncated = gagliardo_seminorm(chi, full_mask(grid), alpha, options);
  for (Index i = 0; i < grid.size(); ++i) {
    if (E[i]) r.tail += 2.0 * grid.cell_volume() * exterior_integral(grid, grid.node(i), alpha).scalar;
  }
  r.truncation_warning = r.tail > tail_bound * r.total();
  return r;
}

CompositionResult gag_composition_check(const ScalarField& f, double alpha, PairQuadrature quadrature) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw InvalidArgument("composition check: alpha must lie in (0, 1/2)");
  const Grid& g = f.grid();
  GagliardoOptions options;
  options.quadrature = quadrature;
  options.periodic = true;
  const GagliardoKernel kernel(g, alpha, options);
  const double w = g.cell_volume();
  // div_alpha(d^alpha f)_i = -2 sum_j h^n (f_i - f_j) K_ij / |x_ij|^alpha
  Vector lhs = Vector::Zero(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    const auto a = g.multi_index(i);
    for (Index j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      const auto b = g.multi_index(j);
      const Index o0 = a[0] - b[0], o1 = a[1] - b[1];
      lhs[i] -= 2.0 * w * (f[i] - f[j]) * kernel.kernel(o0, o1) * std::pow(kernel.distance(o0, o1), -alpha);
    }
  }
  SpectralConfig periodic;
  periodic.periodic = true;
  const Vector rhs = spectral_power(f, 2.0 * alpha, periodic).values();
  CompositionResult r;
  const double ll = lhs.squaredNorm();
  if (ll == 0.0 || rhs.norm() == 0.0) return r;
  r.constant = -lhs.dot(rhs) / ll;
  r.residual = (-r.constant * lhs - rhs).norm() / rhs.norm();
  return r;
}

}  // namespace fracbv
