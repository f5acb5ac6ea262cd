#include "fracbv/approx.hpp"

#include <cmath>

#include "fracbv/error.hpp"
#include "fracbv/special.hpp"

namespace fracbv {

namespace {

double max_spacing(const Grid& g) { return g.dim() == 1 ? g.spacing(0) : std::max(g.spacing(0), g.spacing(1)); }

bool shifted(const Grid& g, Index i, const std::array<Index, 2>& o, Index& out) {
  auto idx = g.multi_index(i);
  for (int k = 0; k < g.dim(); ++k) {
    idx[k] += o[k];
    if (idx[k] < 0 || idx[k] >= g.points(k)) return false;
  }
  out = g.flat_index(idx[0], idx[1]);
  return true;
}

StencilWeights normalized(StencilWeights w) {
  double total = 0.0;
  for (double v : w.weights) total += v;
  if (!(total > 0.0)) throw InvalidArgument("mollifier: no mass on the grid");
  StencilWeights out;
  for (std::size_t k = 0; k < w.weights.size(); ++k) {
    if (w.weights[k] <= 0.0) continue;
    out.offsets.push_back(w.offsets[k]);
    out.weights.push_back(w.weights[k] / total);
    out.reach = std::max({out.reach, std::abs(w.offsets[k][0]), std::abs(w.offsets[k][1])});
  }
  return out;
}

struct Tap {
  Index node;
  double weight;
};

// Multilinear interpolation taps at x; empty outside the box.
std::vector<Tap> interpolation_taps(const Grid& grid, const Point& x) {
  std::array<Index, 2> base{0, 0};
  std::array<double, 2> frac{0.0, 0.0};
  for (int k = 0; k < grid.dim(); ++k) {
    const double t = (x[k] - grid.lower(k)) / grid.spacing(k);
    const double last = static_cast<double>(grid.points(k) - 1);
    if (t < -1e-12 || t > last + 1e-12) return {};
    const double tc = std::clamp(t, 0.0, last);
    Index b = std::min(static_cast<Index>(std::floor(tc)), grid.points(k) - 2);
    base[k] = b;
    frac[k] = tc - static_cast<double>(b);
  }
  std::vector<Tap> taps;
  const int corners = grid.dim() == 1 ? 2 : 4;
  for (int c = 0; c < corners; ++c) {
    const Index a0 = c & 1, a1 = (c >> 1) & 1;
    double w = a0 ? frac[0] : 1.0 - frac[0];
    if (grid.dim() == 2) w *= a1 ? frac[1] : 1.0 - frac[1];
    if (w > 0.0) taps.push_back({grid.flat_index(base[0] + a0, base[1] + a1), w});
  }
  return taps;
}

}  // namespace

Mollifier::Mollifier(double eps, int dim) : eps_(eps), dim_(dim) {
  if (!(eps > 0.0)) throw InvalidArgument("mollifier: eps must be positive");
}

double Mollifier::profile(const Point& z) const {
  const double r2 = z.squaredNorm() / (eps_ * eps_);
  return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0;
}

StencilWeights sampled_weights(const Grid& grid, double eps) {
  if (!(eps >= 2.0 * max_spacing(grid) * (1.0 - 1e-12))) {
    throw InvalidArgument("mollify: eps must be at least twice the grid spacing");
  }
  const Mollifier eta(eps, grid.dim());
  StencilWeights w;
  const Index r0 = static_cast<Index>(std::ceil(eps / grid.spacing(0)));
  const Index r1 = grid.dim() == 2 ? static_cast<Index>(std::ceil(eps / grid.spacing(1))) : 0;
  for (Index o1 = -r1; o1 <= r1; ++o1) {
    for (Index o0 = -r0; o0 <= r0; ++o0) {
      const Point z(o0 * grid.spacing(0), grid.dim() == 2 ? o1 * grid.spacing(1) : 0.0);
      w.offsets.push_back({o0, o1});
      w.weights.push_back(eta.profile(z));
    }
  }
  return normalized(std::move(w));
}

StencilWeights interpolant_weights(const Grid& grid, double eps) {
  const Mollifier eta(eps, grid.dim());
  const GaussRule& rule = gauss_legendre(12);
  const int dim = grid.dim();
  std::array<double, 2> h{grid.spacing(0), dim == 2 ? grid.spacing(1) : 1.0};
  std::array<Index, 2> reach{static_cast<Index>(std::ceil(eps / h[0])) + 1,
                             dim == 2 ? static_cast<Index>(std::ceil(eps / h[1])) + 1 : 0};
  // pieces of [-eps, eps] on which hat(z - o h) is linear
  auto pieces = [&](Index o, double hk) {
    std::vector<double> cuts;
    for (double c : {(o - 1) * hk, o * hk, (o + 1) * hk}) cuts.push_back(std::clamp(c, -eps, eps));
    return cuts;
  };
  StencilWeights w;
  for (Index o1 = -reach[1]; o1 <= reach[1]; ++o1) {
    for (Index o0 = -reach[0]; o0 <= reach[0]; ++o0) {
      const auto c0 = pieces(o0, h[0]);
      const auto c1 = dim == 2 ? pieces(o1, h[1]) : std::vector<double>{0.0, 0.0, 0.0};
      double sum = 0.0;
      for (int p0 = 0; p0 < 2; ++p0) {
        const double m0 = 0.5 * (c0[p0] + c0[p0 + 1]), s0 = 0.5 * (c0[p0 + 1] - c0[p0]);
        if (s0 <= 0.0) continue;
        for (int p1 = 0; p1 < (dim == 2 ? 2 : 1); ++p1) {
          const double m1 = dim == 2 ? 0.5 * (c1[p1] + c1[p1 + 1]) : 0.0;
          const double s1 = dim == 2 ? 0.5 * (c1[p1 + 1] - c1[p1]) : 1.0;
          if (s1 <= 0.0) continue;
          for (std::size_t a = 0; a < rule.nodes.size(); ++a) {
            const double z0 = m0 + s0 * rule.nodes[a];
            const double t0 = std::max(0.0, 1.0 - std::abs(z0 - o0 * h[0]) / h[0]);
            if (dim == 1) {
              sum += s0 * rule.weights[a] * t0 * eta.profile(Point(z0, 0.0));
              continue;
            }
            for (std::size_t b = 0; b < rule.nodes.size(); ++b) {
              const double z1 = m1 + s1 * rule.nodes[b];
              const double t1 = std::max(0.0, 1.0 - std::abs(z1 - o1 * h[1]) / h[1]);
              sum += s0 * s1 * rule.weights[a] * rule.weights[b] * t0 * t1 * eta.profile(Point(z0, z1));
            }
          }
        }
      }
      w.offsets.push_back({o0, o1});
      w.weights.push_back(sum);
    }
  }
  return normalized(std::move(w));
}

Vector convolve(const Grid& grid, const Vector& values, const StencilWeights& w) {
  if (values.size() != grid.size()) throw InvalidArgument("convolve: size mismatch");
  Vector out = Vector::Zero(grid.size());
  for (Index i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < w.offsets.size(); ++k) {
      Index j;
      if (shifted(grid, i, w.offsets[k], j)) s += w.weights[k] * values[j];
    }
    out[i] = s;
  }
  return out;
}

Mask dilate(const Grid& grid, const Mask& mask, const StencilWeights& w) {
  Mask out = Mask::Constant(grid.size(), false);
  for (Index i = 0; i < grid.size(); ++i) {
    for (const auto& o : w.offsets) {
      Index j;
      if (shifted(grid, i, o, j) && mask[j]) {
        out[i] = true;
        break;
      }
    }
  }
  return out;
}

ScalarField mollify(const ScalarField& f, double eps) {
  const StencilWeights w = sampled_weights(f.grid(), eps);
  return ScalarField(f.grid(), convolve(f.grid(), f.values(), w), dilate(f.grid(), f.mask(), w));
}

ScalarField mollify_interpolant(const ScalarField& f, double eps) {
  const StencilWeights w = interpolant_weights(f.grid(), eps);
  return ScalarField(f.grid(), convolve(f.grid(), f.values(), w), dilate(f.grid(), f.mask(), w));
}

RieszVectorField mollify(const RieszVectorField& F, const StencilWeights& w) {
  Eigen::MatrixXd out(F.components().rows(), F.components().cols());
  for (int k = 0; k < F.grid().dim(); ++k) out.col(k) = convolve(F.grid(), F.components().col(k), w);
  return RieszVectorField(F.grid(), std::move(out));
}

NonlocalField pair_mollify(const NonlocalField& Phi, double eps) {
  return pair_mollify(Phi, sampled_weights(Phi.grid(), eps));
}

NonlocalField pair_mollify(const NonlocalField& Phi, const StencilWeights& w) {
  const Grid& g = Phi.grid();
  const Index n = g.size();
  for (Index i = 0; i < n; ++i) {
    if (!Phi.support()[i]) continue;
    const auto idx = g.multi_index(i);
    for (int k = 0; k < g.dim(); ++k) {
      if (idx[k] - w.reach < 0 || idx[k] + w.reach >= g.points(k)) {
        throw InvalidArgument("pair_mollify: support too close to the box edge");
      }
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd& v = Phi.values();
  std::vector<Index> shift(n);
  for (std::size_t k = 0; k < w.offsets.size(); ++k) {
    for (Index i = 0; i < n; ++i) {
      if (!shifted(g, i, w.offsets[k], shift[i])) shift[i] = -1;
    }
    const double wk = w.weights[k];
    for (Index j = 0; j < n; ++j) {
      if (shift[j] < 0) continue;
      for (Index i = 0; i < n; ++i) {
        if (shift[i] >= 0) out(i, j) += wk * v(shift[i], shift[j]);
      }
    }
  }
  return NonlocalField(g, std::move(out), dilate(g, Phi.support(), w), Phi.truncation_radius());
}

double Cutoff::operator()(const Point& x) const {
  const double t = std::clamp(((x - center).norm() - m) / m, 0.0, 1.0);
  return 1.0 - t * t * (3.0 - 2.0 * t);
}

RieszVectorField apply_cutoff(const RieszVectorField& F, const Cutoff& zeta) {
  Eigen::MatrixXd out = F.components();
  for (Index i = 0; i < out.rows(); ++i) out.row(i) *= zeta(F.grid().node(i));
  return RieszVectorField(F.grid(), std::move(out));
}

NonlocalField scale_pair_field(const NonlocalField& Phi, double rho, const Point& center) {
  if (!(rho > 0.0)) throw InvalidArgument("scale_pair_field: rho must be positive");
  const Grid& g = Phi.grid();
  const Index n = g.size();
  std::vector<std::vector<Tap>> taps(n);
  Mask support = Mask::Constant(n, false);
  for (Index i = 0; i < n; ++i) {
    taps[i] = interpolation_taps(g, center + (g.node(i) - center) / rho);
    for (const Tap& t : taps[i]) support[i] = support[i] || Phi.support()[t.node];
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd& v = Phi.values();
  for (Index j = 0; j < n; ++j) {
    if (!support[j]) continue;
    for (Index i = 0; i < n; ++i) {
      if (!support[i] || i == j) continue;
      double s = 0.0;
      for (const Tap& a : taps[i]) {
        for (const Tap& b : taps[j]) s += a.weight * b.weight * v(a.node, b.node);
      }
      out(i, j) = s;
    }
  }
  return NonlocalField(g, std::move(out), support, Phi.truncation_radius());
}

namespace {

double lq_sum(const Vector& a, const Mask& over, double w, double q) {
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) {
    if (over[i]) s += w * std::pow(std::abs(a[i]), q);
  }
  return s;
}

double riesz_x(const RieszVectorField& F, const Mask& omega, const RieszGradientOperator& op, double q) {
  const double w = F.grid().cell_volume();
  const double field = lq_sum(F.pointwise_norm(), full_mask(F.grid()), w, q);
  const double div = lq_sum(op.divergence(F.components()), omega, w, q);
  return std::pow(field + div, 1.0 / q);
}

double gagliardo_x(const NonlocalField& F, const Mask& omega, const GagliardoKernel& kernel, double q) {
  const double field = std::pow(pair_lq_norm(F, q), q);
  const double div = lq_sum(gag_divergence(F, kernel).values(), omega, F.grid().cell_volume(), q);
  return std::pow(field + div, 1.0 / q);
}

void check_delta(const PipelineOptions& options) {
  if (!(options.delta_fraction > 0.0 && options.delta_fraction < 0.01)) {
    throw InvalidArgument("pipeline: delta must stay below D/100");
  }
}

}  // namespace

double riesz_x_norm(const RieszVectorField& F, const Mask& omega, const PipelineOptions& options) {
  const RieszGradientOperator op(F.grid(), options.alpha, options.riesz);
  return riesz_x(F, omega, op, options.q);
}

double gagliardo_x_norm(const NonlocalField& F, const Mask& omega, const PipelineOptions& options) {
  const GagliardoKernel kernel(F.grid(), options.alpha, options.gagliardo);
  return gagliardo_x(F, omega, kernel, options.q);
}

RieszPipelineResult density_pipeline_riesz(const RieszVectorField& Phi, double beta, const ConvexDomain& omega,
                                           double eps_target, const PipelineOptions& options) {
  check_delta(options);
  const Grid& g = Phi.grid();
  if (omega.dim() != g.dim()) throw InvalidArgument("pipeline: domain and grid dimensions differ");
  if (Phi.sup_norm() > beta * (1.0 + 1e-12)) throw InvalidArgument("pipeline: input exceeds the bound beta");
  const Mask om = omega.mask(g);
  const Point c = omega.center();
  const RieszGradientOperator op(g, options.alpha, options.riesz);
  auto X = [&](const RieszVectorField& a, const RieszVectorField& b) {
    return riesz_x(RieszVectorField(g, a.components() - b.components()), om, op, options.q);
  };

  PipelineReport r;
  double room = INFINITY;
  for (int k = 0; k < g.dim(); ++k) room = std::min({room, c[k] - g.lower(k), g.upper(k) - c[k]});
  r.cutoff_radius = 0.5 * room;
  const RieszVectorField cut = apply_cutoff(Phi, Cutoff{r.cutoff_radius, c});
  r.cutoff_distance = X(cut, Phi);

  double offset = options.rho ? *options.rho - 1.0 : options.rho_start_offset;
  if (offset < 0.0) throw InvalidArgument("pipeline: the Riesz scaling needs rho >= 1");
  RieszVectorField scaled = scale_field(cut, 1.0 + offset, c);
  r.scaling_distance = X(scaled, cut);
  for (int it = 0; !options.rho && it < options.max_bisections && r.scaling_distance > eps_target / 3.0; ++it) {
    offset *= 0.5;
    scaled = scale_field(cut, 1.0 + offset, c);
    r.scaling_distance = X(scaled, cut);
  }
  r.rho = 1.0 + offset;
  r.separation = r.rho > 1.0 ? separation(omega, 1.0, r.rho).distance : 0.0;
  r.delta = options.delta ? *options.delta : options.delta_fraction * r.separation;
  if (r.delta > 0.0 && !(r.delta < r.separation / 100.0)) throw InvalidArgument("pipeline: delta must stay below D/100");
  RieszVectorField theta = r.delta > 0.0 ? mollify(scaled, interpolant_weights(g, r.delta)) : scaled;
  r.mollification_distance = X(theta, scaled);
  r.total_distance = X(theta, Phi);
  r.sup_norm = theta.sup_norm();
  if (r.total_distance > eps_target) {
    throw ResolutionFailure("riesz pipeline: X-distance " + std::to_string(r.total_distance) + " above target",
                            r.total_distance);
  }
  return {std::move(theta), r};
}

GagliardoPipelineResult density_pipeline_gagliardo(const NonlocalField& Phi, double beta,
                                                   const ConvexDomain& omega, double eps_target,
                                                   const PipelineOptions& options) {
  check_delta(options);
  const Grid& g = Phi.grid();
  if (omega.dim() != g.dim()) throw InvalidArgument("pipeline: domain and grid dimensions differ");
  if (Phi.sup_norm() > beta * (1.0 + 1e-12)) throw InvalidArgument("pipeline: input exceeds the bound beta");
  const Mask om = omega.mask(g);
  const Point c = omega.center();
  const GagliardoKernel kernel(g, options.alpha, options.gagliardo);
  auto X = [&](const NonlocalField& a, const NonlocalField& b) {
    return gagliardo_x(NonlocalField(g, a.values() - b.values(), full_mask(g)), om, kernel, options.q);
  };
  auto inside = [&](const NonlocalField& F) { return NonlocalField(g, F.values(), F.support() && om); };

  PipelineReport r;
  const NonlocalField anti = Phi.antisymmetric_part();
  r.cutoff_distance = X(anti, Phi);

  double offset = options.rho ? 1.0 - *options.rho : options.rho_start_offset;
  if (offset < 0.0 || offset >= 1.0) throw InvalidArgument("pipeline: the Gagliardo scaling needs 0 < rho <= 1");
  auto scale = [&](double off) { return off > 0.0 ? inside(scale_pair_field(anti, 1.0 - off, c)) : anti; };
  NonlocalField scaled = scale(offset);
  r.scaling_distance = X(scaled, anti);
  for (int it = 0; !options.rho && it < options.max_bisections && r.scaling_distance > eps_target / 3.0; ++it) {
    offset *= 0.5;
    scaled = scale(offset);
    r.scaling_distance = X(scaled, anti);
  }
  r.rho = 1.0 - offset;
  r.separation = r.rho < 1.0 ? separation(omega, r.rho, 1.0).distance : 0.0;
  r.delta = options.delta ? *options.delta : options.delta_fraction * r.separation;
  if (r.delta > 0.0 && !(r.delta < r.separation / 100.0)) throw InvalidArgument("pipeline: delta must stay below D/100");
  NonlocalField theta = r.delta > 0.0 ? inside(pair_mollify(scaled, interpolant_weights(g, r.delta))) : scaled;
  // interpolation rounds (i, j) and (j, i) differently
  theta = theta.antisymmetric_part();
  r.mollification_distance = X(theta, scaled);
  r.total_distance = X(theta, Phi);
  r.sup_norm = theta.sup_norm();
  if (r.total_distance > eps_target) {
    throw ResolutionFailure("gagliardo pipeline: X-distance " + std::to_string(r.total_distance) + " above target",
                            r.total_distance);
  }
  return {std::move(theta), r};
}

RecoveryTrace recovery_sequence(const ScalarField& f, const Mask& omega, const Mask& G,
                                const std::vector<double>& eps, double alpha, const GagliardoOptions& options) {
  const Grid& g = f.grid();
  if (omega.size() != g.size() || G.size() != g.size()) throw InvalidArgument("recovery: mask size mismatch");
  const Vector restricted = omega.select(f.values().array(), 0.0).matrix();
  RecoveryTrace trace;
  trace.reference = gagliardo_seminorm(f, omega, alpha, options);
  for (double e : eps) {
    const StencilWeights w = sampled_weights(g, e);
    for (Index i = 0; i < g.size(); ++i) {
      if (!G[i]) continue;
      for (const auto& o : w.offsets) {
        Index j;
        if (!shifted(g, i, o, j) || !omega[j]) {
          throw InvalidArgument("recovery: the eps-neighbourhood of G leaves Omega");
        }
      }
    }
    const ScalarField fe(g, convolve(g, restricted, w));
    const double v = gagliardo_seminorm(fe, G, alpha, options);
    trace.eps.push_back(e);
    trace.values.push_back(v);
    if (v > trace.reference * 1.01) trace.bounded = false;
  }
  return trace;
}

}  // namespace fracbv
