#include "fracbv/denoise.hpp"

#include <cmath>
#include <random>

#include "fracbv/error.hpp"

namespace fracbv {

namespace {

using Matrix = Eigen::MatrixXd;

// Normalized problem (gamma = 1) on the compact list of Omega nodes.
class Model {
 public:
  explicit Model(const DenoiseProblem& prob) : prob_(prob), grid_(prob.noisy.grid()) {
    prob.validate();
    const Mask om = prob.domain.mask(grid_);
    for (Index i = 0; i < grid_.size(); ++i) {
      if (om[i]) nodes_.push_back(i);
    }
    if (nodes_.empty()) throw InvalidArgument("denoise: domain contains no grid nodes");
    w_ = grid_.cell_volume();
    un_.resize(size());
    for (Index a = 0; a < size(); ++a) un_[a] = prob.noisy[nodes_[a]];
    if (prob.variant == Variant::riesz) {
      dual_grid_.emplace(riesz_dual_grid(prob));
      op_.emplace(*dual_grid_, prob.alpha, prob.riesz);
      const Index m = prob.riesz_margin;
      for (Index i : nodes_) {
        const auto idx = grid_.multi_index(i);
        embed_.push_back(dual_grid_->flat_index(idx[0] + m, grid_.dim() == 2 ? idx[1] + m : 0));
      }
    } else {
      if (grid_.size() > kMaxPairNodes) {
        throw InvalidArgument("denoise: gagliardo grids are limited to " + std::to_string(kMaxPairNodes) + " nodes");
      }
      const GagliardoKernel kernel(grid_, prob.alpha, prob.gagliardo);
      const Index n = size();
      // tables over the offset box, shared by every pair with that offset
      const Index r0 = grid_.points(0) - 1, r1 = grid_.points(1) - 1;
      const Index span0 = 2 * r0 + 1;
      const Index cells = span0 * (2 * r1 + 1);
      Vector tk(cells), tr(cells), tm(cells);
      for (Index o1 = -r1; o1 <= r1; ++o1) {
        for (Index o0 = -r0; o0 <= r0; ++o0) {
          const Index c = (o0 + r0) + span0 * (o1 + r1);
          if (o0 == 0 && o1 == 0) {
            tk[c] = tr[c] = tm[c] = 0.0;
            continue;
          }
          tk[c] = kernel.kernel(o0, o1);
          tr[c] = std::pow(kernel.distance(o0, o1), -prob.alpha);
          tm[c] = kernel.pair_measure(o0, o1);
        }
      }
      K_.resize(n, n);
      R_.resize(n, n);
      mu_.resize(n, n);
      for (Index b = 0; b < n; ++b) {
        const auto jb = grid_.multi_index(nodes_[b]);
        for (Index a = 0; a < n; ++a) {
          const auto ia = grid_.multi_index(nodes_[a]);
          const Index c = (ia[0] - jb[0] + r0) + span0 * (ia[1] - jb[1] + r1);
          K_(a, b) = tk[c];
          R_(a, b) = tr[c];
          mu_(a, b) = tm[c];
        }
      }
    }
  }

  Index size() const { return static_cast<Index>(nodes_.size()); }
  const Vector& noisy() const { return un_; }
  double w() const { return w_; }
  bool riesz() const { return prob_.variant == Variant::riesz; }

  Matrix zero() const {
    return riesz() ? Matrix::Zero(dual_grid_->size(), dual_grid_->dim()) : Matrix::Zero(size(), size());
  }

  // Div restricted to Omega.
  Vector div(const Matrix& phi) const {
    if (riesz()) {
      const Vector full = op_->divergence(phi);
      Vector out(size());
      for (Index a = 0; a < size(); ++a) out[a] = full[embed_[a]];
      return out;
    }
    const Matrix m = phi.cwiseProduct(K_);
    const Vector ones = Vector::Ones(size());
    return -w_ * (m * ones - m.transpose() * ones);
  }

  // Gradient of the zero extension of g; the negative adjoint of div.
  Matrix grad(const Vector& g) const {
    if (riesz()) {
      Vector full = Vector::Zero(dual_grid_->size());
      for (Index a = 0; a < size(); ++a) full[embed_[a]] = g[a];
      return op_->apply(full);
    }
    Matrix out(size(), size());
    for (Index b = 0; b < size(); ++b) out.col(b) = (g.array() - g[b]) * R_.col(b).array();
    return out;
  }

  double dual_inner(const Matrix& a, const Matrix& b) const {
    if (riesz()) return dual_grid_->cell_volume() * a.cwiseProduct(b).sum();
    return a.cwiseProduct(b).cwiseProduct(mu_).sum();
  }

  double node_inner(const Vector& a, const Vector& b) const { return w_ * a.dot(b); }

  // sup over feasible psi of <grad u, psi> per unit bound.
  double variation(const Vector& u) const {
    const Matrix d = grad(u);
    if (riesz()) return dual_grid_->cell_volume() * d.rowwise().norm().sum();
    return d.cwiseAbs().cwiseProduct(mu_).sum();
  }

  double sup(const Matrix& phi) const {
    if (phi.size() == 0) return 0.0;
    return riesz() ? phi.rowwise().norm().maxCoeff() : phi.cwiseAbs().maxCoeff();
  }

  Matrix project(Matrix phi, double bound) const {
    if (riesz()) {
      for (Index i = 0; i < phi.rows(); ++i) {
        const double r = phi.row(i).norm();
        if (r > bound) phi.row(i) *= bound > 0.0 ? bound / r : 0.0;
      }
      return phi;
    }
    return phi.cwiseMax(-bound).cwiseMin(bound);
  }

  double q() const { return prob_.q(); }
  double p() const { return prob_.p; }

  Vector duality_map(const Vector& v) const {
    if (q() == 2.0) return v;
    return v.unaryExpr([this](double x) { return x == 0.0 ? 0.0 : std::pow(std::abs(x), q() - 2.0) * x; });
  }

  double lq_power(const Vector& v, double e) const { return w_ * v.array().abs().pow(e).sum(); }

  // Normalized predual: (1/q)||Div psi||^q + <u_N, Div psi>.
  double predual(const Matrix& psi) const {
    const Vector v = div(psi);
    return lq_power(v, q()) / q() + node_inner(un_, v);
  }

  Matrix predual_gradient(const Matrix& psi) const { return -grad(duality_map(div(psi)) + un_); }

  Vector recover(const Matrix& psi) const { return un_ + duality_map(div(psi)); }

  double primal(const Vector& u, double bound) const {
    return lq_power(u - un_, p()) / p() + bound * variation(u);
  }

  double vi(const Matrix& psi, const Vector& u, double bound) const {
    return std::max(0.0, bound * variation(u) - dual_inner(grad(u), psi));
  }

  double power_iteration(std::uint64_t seed, int steps) const {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix v = zero();
    for (Index j = 0; j < v.cols(); ++j) {
      for (Index i = 0; i < v.rows(); ++i) v(i, j) = normal(rng);
    }
    if (!riesz()) v = 0.5 * (v - v.transpose());
    double lambda = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double nv = std::sqrt(dual_inner(v, v));
      if (nv == 0.0) return 0.0;
      v /= nv;
      const Matrix av = -grad(div(v));
      const double next = dual_inner(v, av);
      v = av;
      if (k > 0 && std::abs(next - lambda) <= 1e-8 * std::abs(next)) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    return lambda;
  }

  ScalarField to_field(const Vector& u) const {
    Vector full = Vector::Zero(grid_.size());
    Mask mask = Mask::Constant(grid_.size(), false);
    for (Index a = 0; a < size(); ++a) {
      full[nodes_[a]] = u[a];
      mask[nodes_[a]] = true;
    }
    return ScalarField(grid_, std::move(full), std::move(mask));
  }

  Vector from_field(const ScalarField& u) const {
    if (!(u.grid() == grid_)) throw InvalidArgument("denoise: field grid differs from the problem grid");
    Vector out(size());
    for (Index a = 0; a < size(); ++a) out[a] = u[nodes_[a]];
    return out;
  }

  DualVariable to_dual(const Matrix& phi) const {
    DualVariable d;
    if (riesz()) {
      d.riesz = RieszVectorField(*dual_grid_, phi);
      return d;
    }
    const Index n = grid_.size();
    Matrix full = Matrix::Zero(n, n);
    for (Index b = 0; b < size(); ++b) {
      for (Index a = 0; a < size(); ++a) full(nodes_[a], nodes_[b]) = phi(a, b);
    }
    d.gagliardo = NonlocalField(grid_, std::move(full), prob_.domain.mask(grid_));
    return d;
  }

  Matrix from_dual(const DualVariable& d) const {
    if (riesz()) {
      if (!d.riesz || !(d.riesz->grid() == *dual_grid_)) throw InvalidArgument("denoise: riesz dual variable expected");
      return d.riesz->components();
    }
    if (!d.gagliardo || !(d.gagliardo->grid() == grid_)) {
      throw InvalidArgument("denoise: gagliardo dual variable expected");
    }
    Matrix out(size(), size());
    for (Index b = 0; b < size(); ++b) {
      for (Index a = 0; a < size(); ++a) out(a, b) = (*d.gagliardo)(nodes_[a], nodes_[b]);
    }
    return out;
  }

 private:
  const DenoiseProblem& prob_;
  Grid grid_;
  std::vector<Index> nodes_;
  double w_ = 1.0;
  Vector un_;
  std::optional<Grid> dual_grid_;
  std::optional<RieszGradientOperator> op_;
  std::vector<Index> embed_;
  Matrix K_, R_, mu_;
};

}  // namespace

bool DenoiseProblem::p_admissible() const {
  const double n = noisy.grid().dim();
  return p > 1.0 && p < n / (n - alpha);
}

void DenoiseProblem::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("denoise: alpha must lie in (0, 1)");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("denoise: beta must be nonnegative");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("denoise: gamma must be positive");
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("denoise: p must exceed 1");
  if (domain.dim() != noisy.grid().dim()) throw InvalidArgument("denoise: domain and grid dimensions differ");
  if (riesz_margin < 0) throw InvalidArgument("denoise: negative margin");
}

Grid riesz_dual_grid(const DenoiseProblem& prob) {
  const Grid& g = prob.noisy.grid();
  const Index m = prob.riesz_margin;
  std::vector<Interval> box;
  std::vector<Index> points;
  for (int k = 0; k < g.dim(); ++k) {
    box.push_back({g.lower(k) - m * g.spacing(k), g.upper(k) + m * g.spacing(k)});
    points.push_back(g.points(k) + 2 * m);
  }
  return make_grid(box, points);
}

DualVariable zero_dual(const DenoiseProblem& prob) {
  const Model model(prob);
  return model.to_dual(model.zero());
}

bool is_feasible(const DualVariable& phi, double beta) {
  const double limit = beta + 1e-12;
  if (phi.riesz && phi.riesz->sup_norm() > limit) return false;
  if (phi.gagliardo && phi.gagliardo->sup_norm() > limit) return false;
  return true;
}

double primal_energy(const ScalarField& u, const DenoiseProblem& prob) {
  const Model model(prob);
  return prob.gamma * model.primal(model.from_field(u), prob.beta / prob.gamma);
}

double predual_energy(const DualVariable& phi, const DenoiseProblem& prob) {
  if (!is_feasible(phi, prob.beta)) return INFINITY;
  const Model model(prob);
  return prob.gamma * model.predual(model.from_dual(phi) / prob.gamma);
}

DualVariable project_feasible(const DualVariable& phi, double beta) {
  DualVariable out = phi;
  if (phi.riesz) {
    Matrix c = phi.riesz->components();
    for (Index i = 0; i < c.rows(); ++i) {
      const double r = c.row(i).norm();
      if (r > beta) c.row(i) *= beta > 0.0 ? beta / r : 0.0;
    }
    out.riesz = RieszVectorField(phi.riesz->grid(), std::move(c));
  }
  if (phi.gagliardo) {
    out.gagliardo = phi.gagliardo->with_values(phi.gagliardo->values().cwiseMax(-beta).cwiseMin(beta));
  }
  return out;
}

ScalarField recover_primal(const DualVariable& phi, const DenoiseProblem& prob) {
  const Model model(prob);
  return model.to_field(model.recover(model.from_dual(phi) / prob.gamma));
}

double vi_residual(const DualVariable& phi, const ScalarField& u, const DenoiseProblem& prob) {
  const Model model(prob);
  return model.vi(model.from_dual(phi), model.from_field(u), prob.beta);
}

PredualSolution solve_predual(const DenoiseProblem& prob, const SolveOptions& options) {
  const Model model(prob);
  const double bound = prob.beta / prob.gamma;
  const double gamma = prob.gamma;
  SolveReport report;
  Matrix psi = model.zero();

  auto record = [&](int k, const Matrix& x, double step) {
    const Vector u = model.recover(x);
    TraceRow row;
    row.k = k;
    row.primal = gamma * model.primal(u, bound);
    row.predual = gamma * model.predual(x);
    row.gap = row.primal + row.predual;
    row.vi_residual = gamma * model.vi(x, u, bound);
    row.step = step;
    report.trace.push_back(row);
    return row;
  };
  auto done = [&](const TraceRow& row) { return row.gap <= options.tol * (1.0 + std::abs(row.primal)); };

  const double L = model.power_iteration(options.seed, 50);
  report.operator_norm_estimate = std::sqrt(std::max(L, 0.0));
  // Power iteration approaches the top eigenvalue from below.
  const double Lsafe = 1.02 * L;
  double step = Lsafe > 0.0 ? 1.0 / Lsafe : 1.0;
  report.step_size = step;

  TraceRow last = record(0, psi, step);
  if (bound == 0.0 || L == 0.0) {
    report.converged = true;
  }
  const bool quadratic = model.q() == 2.0;
  Matrix prev = psi, y = psi;
  double t = 1.0;
  int k = 0;
  while (!report.converged && k < options.max_iter) {
    ++k;
    if (quadratic) {
      const Matrix next = model.project(y - step * model.predual_gradient(y), bound);
      if (options.accelerate) {
        // adaptive restart keeps the momentum pointing downhill
        if (model.dual_inner(y - next, next - psi) > 0.0) t = 1.0;
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = next + ((t - 1.0) / t_next) * (next - psi);
        t = t_next;
      } else {
        y = next;
      }
      prev = psi;
      psi = next;
    } else {
      // The q-power objective has no global gradient Lipschitz constant:
      // backtrack on the quadratic upper model.
      const Matrix g = model.predual_gradient(psi);
      const double f0 = model.predual(psi);
      double s = std::min(2.0 * step, 1e12);
      Matrix next;
      for (int bt = 0; bt < 60; ++bt) {
        next = model.project(psi - s * g, bound);
        const Matrix d = next - psi;
        if (model.predual(next) <= f0 + model.dual_inner(g, d) + model.dual_inner(d, d) / (2.0 * s) + 1e-15 * std::abs(f0)) break;
        s *= 0.5;
      }
      step = s;
      prev = psi;
      psi = next;
    }
    if (k % options.check_every == 0 || k == options.max_iter) {
      last = record(k, psi, step);
      if (done(last)) report.converged = true;
    }
  }
  if (report.trace.back().k != k) last = record(k, psi, step);
  report.converged = report.converged || done(last);
  report.iterations = k;
  report.primal_energy = last.primal;
  report.predual_energy = last.predual;
  report.duality_gap = last.gap;
  report.vi_residual = last.vi_residual;
  report.step_size = step;
  {
    const double s = quadratic ? report.step_size : step;
    const Matrix fp = psi - model.project(psi - s * model.predual_gradient(psi), bound);
    report.recovery_residual = gamma * std::sqrt(model.dual_inner(fp, fp)) / s;
  }
  return {model.to_dual(gamma * psi), report};
}

ReferenceSolution solve_primal_reference(const DenoiseProblem& prob, double tol, int max_iter) {
  if (prob.p != 2.0) throw Unsupported("reference solver: p = 2 only");
  const Model model(prob);
  const double bound = prob.beta / prob.gamma;
  ReferenceSolution out{model.to_field(model.noisy())};
  if (bound == 0.0) {
    out.converged = true;
    return out;
  }
  // K u = grad(u), K^T phi = -div(phi).
  const double L = 1.02 * model.power_iteration(99, 50);
  const double tau0 = 10.0 / std::sqrt(L), sigma0 = 0.1 / std::sqrt(L);
  double tau = tau0, sigma = sigma0;
  Vector u = model.noisy(), ubar = u;
  Matrix phi = model.zero();
  double anchor = INFINITY;
  for (int k = 1; k <= max_iter; ++k) {
    phi = model.project(phi + sigma * model.grad(ubar), bound);
    const Vector next = (u + tau * model.div(phi) + tau * model.noisy()) / (1.0 + tau);
    // fidelity is 1-strongly convex
    const double theta = 1.0 / std::sqrt(1.0 + 2.0 * tau);
    tau *= theta;
    sigma /= theta;
    ubar = next + theta * (next - u);
    u = next;
    if (k % 10 == 0 || k == max_iter) {
      const double primal = model.primal(u, bound);
      out.gap = primal + model.predual(phi);
      out.iterations = k;
      if (out.gap <= tol * (1.0 + std::abs(primal))) {
        out.converged = true;
        break;
      }
      // restart the step schedule once the gap has contracted enough
      if (out.gap <= 0.2 * anchor) {
        tau = tau0;
        sigma = sigma0;
        ubar = u;
        anchor = out.gap;
      } else if (!std::isfinite(anchor)) {
        anchor = out.gap;
      }
    }
  }
  out.gap *= prob.gamma;
  out.u = model.to_field(u);
  return out;
}

SignCalibration calibrate_sign_convention(Variant variant) {
  const Grid g = make_grid({{0.0, 1.0}}, {24});
  const ScalarField noisy = ScalarField::sample(g, [](const Point& x) {
    return (x.x() > 0.3 && x.x() < 0.7 ? 1.0 : 0.0) + 0.1 * std::sin(40.0 * x.x());
  });
  DenoiseProblem prob(noisy, ConvexDomain::interval(-1e-9, 1.0 + 1e-9));
  prob.variant = variant;
  prob.beta = 0.05;
  SolveOptions o;
  o.tol = 1e-9;
  o.max_iter = 20000;
  const PredualSolution sol = solve_predual(prob, o);
  const ScalarField plus = recover_primal(sol.phi, prob);
  Vector minus = 2.0 * noisy.values() - plus.values();
  SignCalibration c;
  c.plus_energy = primal_energy(plus, prob);
  c.minus_energy = primal_energy(ScalarField(g, minus), prob);
  return c;
}

}  // namespace fracbv
