#include "fracbv/riesz.hpp"

#include <cmath>
#include <numbers>

#include "fracbv/error.hpp"
#include "fracbv/special.hpp"

namespace fracbv {

namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("riesz: alpha must lie in (0, 1]");
}

// int over [a, b] of g on pieces graded geometrically toward +-pi/2.
template <class Fn>
double graded_angle_integral(double a, double b, const Fn& g) {
  std::vector<double> cuts{a, b};
  for (int k = 1; k <= 48; ++k) {
    const double t = 0.5 * kPi * (1.0 - std::ldexp(1.0, -k));
    if (t > a && t < b) cuts.push_back(t);
    if (-t > a && -t < b) cuts.push_back(-t);
  }
  std::sort(cuts.begin(), cuts.end());
  const GaussRule& rule = gauss_legendre(10);
  double sum = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
    const double half = 0.5 * (cuts[p + 1] - cuts[p]);
    if (half <= 0.0) continue;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) sum += half * rule.weights[q] * g(mid + half * rule.nodes[q]);
  }
  return sum;
}

Vector discrete_laplacian(const Grid& grid, const Vector& f) {
  Vector out = Vector::Zero(f.size());
  for (Index i = 0; i < grid.size(); ++i) {
    const auto idx = grid.multi_index(i);
    for (int k = 0; k < grid.dim(); ++k) {
      const double h2 = grid.spacing(k) * grid.spacing(k);
      auto at = [&](Index shift) {
        auto j = idx;
        j[k] += shift;
        if (j[k] < 0 || j[k] >= grid.points(k)) return 0.0;
        return f[grid.flat_index(j[0], j[1])];
      };
      out[i] += (at(1) - 2.0 * f[i] + at(-1)) / h2;
    }
  }
  return out;
}

}  // namespace

RieszKernelConstants closed_form_constants(double alpha, int dim) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("constants: alpha must lie in (0, 1)");
  if (dim != 1 && dim != 2) throw InvalidArgument("constants: dimension must be 1 or 2");
  const double n = dim;
  RieszKernelConstants c;
  c.alpha = alpha;
  c.dim = dim;
  c.c1 = std::pow(2.0, alpha) * std::tgamma(0.5 * (n + alpha)) /
         (std::pow(kPi, 0.5 * n) * std::abs(std::tgamma(-0.5 * alpha)));
  c.c2 = (n - 1.0 + alpha) * std::tgamma(0.5 * (n - 1.0 + alpha)) /
         (std::pow(kPi, 0.5 * n) * std::pow(2.0, 1.0 - alpha) * std::tgamma(0.5 * (1.0 - alpha)));
  c.c3 = c.c2;
  return c;
}

ExteriorIntegral exterior_integral(const Grid& grid, const Point& x, double alpha) {
  ExteriorIntegral out;
  if (grid.dim() == 1) {
    const Interval box = grid.cell_extent(0);
    const double left = std::pow(x.x() - box.lo, -alpha) / alpha;
    const double right = std::pow(box.hi - x.x(), -alpha) / alpha;
    out.scalar = left + right;
    out.vector = Point(left - right, 0.0);
    return out;
  }
  const Interval bx = grid.cell_extent(0);
  const Interval by = grid.cell_extent(1);
  struct Wall {
    double distance, normal_angle, t_lo, t_hi;  // tangential extent relative to the foot point
  };
  const Wall walls[4] = {
      {bx.hi - x.x(), 0.0, by.lo - x.y(), by.hi - x.y()},
      {by.hi - x.y(), 0.5 * kPi, -(bx.hi - x.x()), -(bx.lo - x.x())},
      {x.x() - bx.lo, kPi, -(by.hi - x.y()), -(by.lo - x.y())},
      {x.y() - by.lo, 1.5 * kPi, bx.lo - x.x(), bx.hi - x.x()},
  };
  for (const Wall& w : walls) {
    const double a = std::atan2(w.t_lo, w.distance);
    const double b = std::atan2(w.t_hi, w.distance);
    const double scale = std::pow(w.distance, -alpha) / alpha;
    out.scalar += scale * graded_angle_integral(a, b, [&](double phi) { return std::pow(std::cos(phi), alpha); });
    const double cx = graded_angle_integral(
        a, b, [&](double phi) { return std::pow(std::cos(phi), alpha) * std::cos(w.normal_angle + phi); });
    const double cy = graded_angle_integral(
        a, b, [&](double phi) { return std::pow(std::cos(phi), alpha) * std::sin(w.normal_angle + phi); });
    out.vector -= scale * Point(cx, cy);
  }
  return out;
}

RieszGradientOperator::RieszGradientOperator(const Grid& grid, double alpha, const RieszOptions& options)
    : grid_(grid), alpha_(alpha), backend_(options.backend), periodic_(options.spectral.periodic) {
  check_alpha(alpha);
  RieszBackend effective = options.backend == RieszBackend::adjoint ? options.adjoint_of : options.backend;
  if (effective == RieszBackend::adjoint) effective = RieszBackend::spectral;
  const int n = grid.dim();
  if (alpha == 1.0) {
    mode_ = Mode::centered;
    return;
  }
  if (effective == RieszBackend::spectral) {
    mode_ = Mode::spectral;
    plan_.emplace(grid, options.spectral);
    for (int k = 0; k < n; ++k) {
      symbols_.push_back(plan_->tabulate([k, alpha](const Frequency& f) {
        const double r = f.norm();
        if (r == 0.0 || f.nyquist[k]) return Complex(0.0, 0.0);
        return Complex(0.0, f.xi[k] * std::pow(r, alpha - 1.0));
      }));
    }
    return;
  }
  if (periodic_) throw Unsupported("riesz: the quadrature backend needs an aperiodic grid");
  mode_ = Mode::quadrature;
  const RieszKernelConstants c = options.constants ? *options.constants : closed_form_constants(alpha, n);
  c2_ = c.c2;
  const double w = grid.cell_volume();
  const double h0 = grid.spacing(0);
  const double h1 = n == 2 ? grid.spacing(1) : 0.0;
  const Vector ones = Vector::Ones(grid.size());
  for (int k = 0; k < n; ++k) {
    auto kernel = [=](Index o0, Index o1) {
      if (o0 == 0 && o1 == 0) return 0.0;
      const Point z(o0 * h0, o1 * h1);
      return w * z[k] * std::pow(z.norm(), -n - alpha - 1.0);
    };
    kernels_.emplace_back(grid, kernel);
    double l1 = 0.0;
    const Index r1 = n == 2 ? grid.points(1) - 1 : 0;
    for (Index o1 = -r1; o1 <= r1; ++o1) {
      for (Index o0 = -(grid.points(0) - 1); o0 <= grid.points(0) - 1; ++o0) l1 += std::abs(kernel(o0, o1));
    }
    kernel_l1_ = std::max(kernel_l1_, l1);
    Vector diag = kernels_.back().apply(ones);
    for (Index i = 0; i < grid.size(); ++i) diag[i] += exterior_integral(grid, grid.node(i), alpha).vector[k];
    diagonal_.push_back(std::move(diag));
  }
  if (options.lattice_correction && grid.isotropic()) {
    lattice_ = c2_ * std::pow(h0, 1.0 - alpha) * lattice_zeta(n, n + alpha - 1.0) / n;
  }
}

Vector RieszGradientOperator::centered(const Vector& f, int axis, bool transpose) const {
  Vector out(f.size());
  const double inv = 1.0 / (2.0 * grid_.spacing(axis));
  const Index len = grid_.points(axis);
  for (Index i = 0; i < grid_.size(); ++i) {
    auto idx = grid_.multi_index(i);
    auto at = [&](Index shift) {
      auto j = idx;
      j[axis] += shift;
      if (periodic_) {
        j[axis] = (j[axis] % len + len) % len;
      } else if (j[axis] < 0 || j[axis] >= len) {
        return 0.0;
      }
      return f[grid_.flat_index(j[0], j[1])];
    };
    out[i] = transpose ? (at(-1) - at(1)) * inv : (at(1) - at(-1)) * inv;
  }
  return out;
}

Eigen::MatrixXd RieszGradientOperator::apply(const Vector& f) const {
  if (f.size() != grid_.size()) throw InvalidArgument("riesz gradient: size mismatch");
  Eigen::MatrixXd out(grid_.size(), grid_.dim());
  switch (mode_) {
    case Mode::centered:
      for (int k = 0; k < grid_.dim(); ++k) out.col(k) = centered(f, k, false);
      break;
    case Mode::spectral: {
      const Eigen::MatrixXcd fh = plan_->forward(f);
      if (grid_.dim() == 1) {
        out.col(0) = plan_->inverse(fh.cwiseProduct(symbols_[0]));
        break;
      }
      // both components are real: one inverse transform carries the pair
      const Eigen::VectorXcd z = plan_->inverse_complex(
          fh.cwiseProduct(symbols_[0]) + std::complex<double>(0.0, 1.0) * fh.cwiseProduct(symbols_[1]));
      out.col(0) = z.real();
      out.col(1) = z.imag();
      break;
    }
    case Mode::quadrature:
      for (int k = 0; k < grid_.dim(); ++k) {
        Vector col = c2_ * (diagonal_[k].cwiseProduct(f) - kernels_[k].apply(f));
        if (lattice_ != 0.0) col -= lattice_ * centered(f, k, false);
        out.col(k) = col;
      }
      break;
  }
  return out;
}

Vector RieszGradientOperator::divergence(const Eigen::MatrixXd& F) const {
  if (F.rows() != grid_.size() || F.cols() != grid_.dim()) throw InvalidArgument("riesz divergence: shape mismatch");
  if (mode_ == Mode::spectral) {
    if (grid_.dim() == 1) return plan_->inverse(-plan_->forward(F.col(0)).cwiseProduct(symbols_[0].conjugate()));
    const Eigen::VectorXcd packed = F.col(0).cast<std::complex<double>>() + std::complex<double>(0.0, 1.0) * F.col(1).cast<std::complex<double>>();
    const auto parts = plan_->split(plan_->forward_complex(packed));
    return plan_->inverse(-(parts[0].cwiseProduct(symbols_[0].conjugate()) + parts[1].cwiseProduct(symbols_[1].conjugate())));
  }
  Vector out = Vector::Zero(grid_.size());
  for (int k = 0; k < grid_.dim(); ++k) {
    const Vector g = F.col(k);
    switch (mode_) {
      case Mode::centered:
        out -= centered(g, k, true);
        break;
      case Mode::spectral:
        out -= plan_->inverse(plan_->forward(g).cwiseProduct(symbols_[k].conjugate()));
        break;
      case Mode::quadrature: {
        Vector t = c2_ * (diagonal_[k].cwiseProduct(g) - kernels_[k].apply_transpose(g));
        if (lattice_ != 0.0) t -= lattice_ * centered(g, k, true);
        out -= t;
        break;
      }
    }
  }
  return out;
}

double RieszGradientOperator::l1_bound() const {
  double centered_part = 0.0;
  for (int k = 0; k < grid_.dim(); ++k) centered_part += 1.0 / grid_.spacing(k);
  switch (mode_) {
    case Mode::centered:
      return centered_part;
    case Mode::spectral: {
      Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(plan_->rows(), plan_->cols());
      for (const auto& s : symbols_) sq += plan_->inverse_padded(s).cwiseAbs2();
      return sq.cwiseSqrt().sum();
    }
    case Mode::quadrature: {
      double diag = 0.0;
      for (const auto& d : diagonal_) diag = std::max(diag, d.cwiseAbs().maxCoeff());
      return grid_.dim() * c2_ * (diag + kernel_l1_) + std::abs(lattice_) * centered_part;
    }
  }
  return 0.0;
}

Vector RieszGradientOperator::divergence_direct(const Eigen::MatrixXd& F) const {
  if (mode_ != Mode::quadrature) return divergence(F);
  if (F.rows() != grid_.size() || F.cols() != grid_.dim()) throw InvalidArgument("riesz divergence: shape mismatch");
  Vector out = Vector::Zero(grid_.size());
  for (int k = 0; k < grid_.dim(); ++k) {
    const Vector g = F.col(k);
    out += c2_ * (diagonal_[k].cwiseProduct(g) - kernels_[k].apply(g));
    if (lattice_ != 0.0) out -= lattice_ * centered(g, k, false);
  }
  return out;
}

ScalarField spectral_power(const ScalarField& f, double s, const SpectralConfig& config) {
  const Vector v = apply_multiplier(
      f.grid(), f.values(),
      [s](const Frequency& fr) {
        const double r = fr.norm();
        return r == 0.0 ? Complex(0.0, 0.0) : Complex(std::pow(r, s), 0.0);
      },
      config);
  return f.with_values(v);
}

ScalarField riesz_potential(const ScalarField& f, double alpha, const SpectralConfig& config) {
  if (!(alpha > 0.0 && alpha < f.grid().dim())) throw InvalidArgument("riesz potential: alpha must lie in (0, n)");
  return spectral_power(f, -alpha, config);
}

ScalarField frac_laplacian(const ScalarField& f, double alpha, const RieszOptions& options) {
  check_alpha(alpha);
  RieszBackend backend = options.backend == RieszBackend::adjoint ? options.adjoint_of : options.backend;
  if (backend != RieszBackend::quadrature) return spectral_power(f, alpha, options.spectral);
  if (alpha == 1.0) throw Unsupported("riesz: quadrature fractional Laplacian needs alpha < 1");
  if (options.spectral.periodic) throw Unsupported("riesz: the quadrature backend needs an aperiodic grid");
  const Grid& grid = f.grid();
  const int n = grid.dim();
  const RieszKernelConstants c = options.constants ? *options.constants : closed_form_constants(alpha, n);
  const double w = grid.cell_volume();
  const double h0 = grid.spacing(0);
  const double h1 = n == 2 ? grid.spacing(1) : 0.0;
  const OffsetConvolution kernel(grid, [=](Index o0, Index o1) {
    if (o0 == 0 && o1 == 0) return 0.0;
    return w * std::pow(std::hypot(o0 * h0, o1 * h1), -n - alpha);
  });
  Vector diag = kernel.apply(Vector::Ones(grid.size()));
  for (Index i = 0; i < grid.size(); ++i) diag[i] += exterior_integral(grid, grid.node(i), alpha).scalar;
  Vector out = c.c1 * (diag.cwiseProduct(f.values()) - kernel.apply(f.values()));
  if (options.lattice_correction && grid.isotropic()) {
    out += c.c1 * std::pow(h0, 2.0 - alpha) * lattice_zeta(n, n + alpha - 2.0) / (2.0 * n) *
           discrete_laplacian(grid, f.values());
  }
  return f.with_values(out);
}

RieszVectorField riesz_gradient(const ScalarField& f, double alpha, const RieszOptions& options) {
  const RieszGradientOperator op(f.grid(), alpha, options);
  return RieszVectorField(f.grid(), op.apply(f.values()));
}

ScalarField riesz_divergence(const RieszVectorField& F, double alpha, const RieszOptions& options) {
  const RieszGradientOperator op(F.grid(), alpha, options);
  const Vector v = options.backend == RieszBackend::adjoint ? op.divergence(F.components())
                                                             : op.divergence_direct(F.components());
  return ScalarField(F.grid(), v);
}

RieszKernelConstants calibrate_constants(double alpha, int dim) {
  RieszKernelConstants c = closed_form_constants(alpha, dim);
  const Grid grid = dim == 1 ? make_grid({{-16.0, 16.0}}, {2048}) : make_grid({{-8.0, 8.0}, {-8.0, 8.0}}, {128, 128});
  const ScalarField g = ScalarField::sample(grid, [](const Point& x) { return std::exp(-0.5 * x.squaredNorm()); });
  RieszOptions spectral;
  spectral.spectral.padding_factor = dim == 1 ? 256 : 16;
  RieszOptions quad = spectral;
  quad.backend = RieszBackend::quadrature;
  quad.constants = c;

  auto fit = [](const Vector& q, const Vector& s, double& scale) {
    const double r = (q - s).norm() / s.norm();
    if (r > 1e-3) {
      scale = q.dot(s) / q.dot(q);
      return (scale * q - s).norm() / s.norm();
    }
    scale = 1.0;
    return r;
  };
  const Vector ls = frac_laplacian(g, alpha, spectral).values();
  const Vector lq = frac_laplacian(g, alpha, quad).values();
  double s1 = 1.0;
  const double r1 = fit(lq, ls, s1);
  const Eigen::MatrixXd gs = riesz_gradient(g, alpha, spectral).components();
  const Eigen::MatrixXd gq = riesz_gradient(g, alpha, quad).components();
  double s2 = 1.0;
  const Eigen::Map<const Vector> gsv(gs.data(), gs.size());
  const Eigen::Map<const Vector> gqv(gq.data(), gq.size());
  const double r2 = fit(gqv, gsv, s2);
  c.c1 *= s1;
  c.c2 *= s2;
  c.c3 = c.c2;
  c.refitted = s1 != 1.0 || s2 != 1.0;
  c.residual = std::max(r1, r2);
  if (c.residual > 1e-2) {
    throw CalibrationFailure("riesz constants: residual " + std::to_string(c.residual) + " above 1e-2");
  }
  return c;
}

}  // namespace fracbv
