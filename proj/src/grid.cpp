#include "fracbv/grid.hpp"

#include <cmath>

#include "fracbv/error.hpp"

namespace fracbv {

Grid::Grid(const std::vector<Interval>& box, const std::vector<Index>& points) {
  if (box.empty() || box.size() > 2 || box.size() != points.size()) {
    throw InvalidArgument("grid: dimension must be 1 or 2 with one point count per axis");
  }
  dim_ = static_cast<int>(box.size());
  for (int k = 0; k < dim_; ++k) {
    if (!(box[k].hi > box[k].lo) || !std::isfinite(box[k].lo) || !std::isfinite(box[k].hi)) {
      throw InvalidArgument("grid: degenerate interval on axis " + std::to_string(k));
    }
    if (points[k] < 2) {
      throw InvalidArgument("grid: need at least 2 points on axis " + std::to_string(k));
    }
    lo_[k] = box[k].lo;
    hi_[k] = box[k].hi;
    n_[k] = points[k];
    h_[k] = (box[k].hi - box[k].lo) / static_cast<double>(points[k] - 1);
  }
}

Point Grid::node(Index i) const {
  const auto [i0, i1] = multi_index(i);
  return {lo_[0] + static_cast<double>(i0) * h_[0],
          dim_ == 2 ? lo_[1] + static_cast<double>(i1) * h_[1] : 0.0};
}

bool operator==(const Grid& a, const Grid& b) {
  if (a.dim_ != b.dim_) return false;
  for (int k = 0; k < a.dim_; ++k) {
    if (a.n_[k] != b.n_[k]) return false;
    const double tol = 1e-12 * std::max(1.0, std::abs(a.hi_[k] - a.lo_[k]));
    if (std::abs(a.lo_[k] - b.lo_[k]) > tol || std::abs(a.hi_[k] - b.hi_[k]) > tol) return false;
  }
  return true;
}

Grid make_grid(const std::vector<Interval>& box, const std::vector<Index>& points) {
  return Grid(box, points);
}

Grid make_periodic_grid(const std::vector<Interval>& period_box, const std::vector<Index>& points) {
  std::vector<Interval> box = period_box;
  for (std::size_t k = 0; k < box.size() && k < points.size(); ++k) {
    if (points[k] < 2) throw InvalidArgument("periodic grid: need at least 2 points per axis");
    const double period = box[k].hi - box[k].lo;
    box[k].hi = box[k].lo + period * static_cast<double>(points[k] - 1) / static_cast<double>(points[k]);
  }
  return Grid(box, points);
}

Mask full_mask(const Grid& grid) { return Mask::Constant(grid.size(), true); }

ScalarField::ScalarField(Grid grid, Vector values)
    : ScalarField(grid, std::move(values), full_mask(grid)) {}

ScalarField::ScalarField(Grid grid, Vector values, Mask mask)
    : grid_(std::move(grid)), values_(std::move(values)), mask_(std::move(mask)) {
  if (values_.size() != grid_.size() || mask_.size() != grid_.size()) {
    throw InvalidArgument("scalar field: value/mask size does not match grid");
  }
  if (!values_.allFinite()) throw InvalidArgument("scalar field: non-finite value");
}

ScalarField ScalarField::zeros(const Grid& grid) { return ScalarField(grid, Vector::Zero(grid.size())); }

ScalarField ScalarField::sample(const Grid& grid, const std::function<double(const Point&)>& fn) {
  Vector v(grid.size());
  for (Index i = 0; i < grid.size(); ++i) v[i] = fn(grid.node(i));
  return ScalarField(grid, std::move(v));
}

bool ScalarField::vanishes_off_mask() const {
  for (Index i = 0; i < values_.size(); ++i) {
    if (!mask_[i] && values_[i] != 0.0) return false;
  }
  return true;
}

RieszVectorField::RieszVectorField(Grid grid, Eigen::MatrixXd components)
    : grid_(std::move(grid)), components_(std::move(components)) {
  if (components_.rows() != grid_.size() || components_.cols() != grid_.dim()) {
    throw InvalidArgument("vector field: expected one row per node and one column per axis");
  }
  if (!components_.allFinite()) throw InvalidArgument("vector field: non-finite value");
}

RieszVectorField RieszVectorField::zeros(const Grid& grid) {
  return RieszVectorField(grid, Eigen::MatrixXd::Zero(grid.size(), grid.dim()));
}

double RieszVectorField::sup_norm() const {
  return components_.size() == 0 ? 0.0 : pointwise_norm().maxCoeff();
}

namespace {

double weighted_lp(const Eigen::ArrayXd& abs_values, double w, double p) {
  if (std::isinf(p)) return abs_values.size() ? abs_values.maxCoeff() : 0.0;
  return std::pow(w * abs_values.pow(p).sum(), 1.0 / p);
}

}  // namespace

double lp_norm(const ScalarField& f, double p) { return lp_norm(f, p, f.mask()); }

double lp_norm(const ScalarField& f, double p, const Mask& over) {
  const Eigen::ArrayXd a = over.select(f.values().array().abs(), 0.0);
  return weighted_lp(a, f.grid().cell_volume(), p);
}

double lp_norm(const RieszVectorField& f, double p) {
  return weighted_lp(f.pointwise_norm().array(), f.grid().cell_volume(), p);
}

double sup_norm(const ScalarField& f) { return lp_norm(f, INFINITY); }

double inner(const ScalarField& f, const ScalarField& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("inner: grid mismatch");
  return f.grid().cell_volume() * f.values().dot(g.values());
}

double inner(const RieszVectorField& f, const RieszVectorField& g) {
  if (!(f.grid() == g.grid())) throw InvalidArgument("inner: grid mismatch");
  return f.grid().cell_volume() * (f.components().array() * g.components().array()).sum();
}

ScalarField extend_by_zero(const ScalarField& f, const Grid& target) {
  const Grid& src = f.grid();
  if (src.dim() != target.dim()) throw InvalidArgument("extend_by_zero: dimension mismatch");
  std::array<Index, 2> offset{0, 0};
  for (int k = 0; k < src.dim(); ++k) {
    const double h = src.spacing(k);
    if (std::abs(target.spacing(k) - h) > 1e-10 * h) {
      throw InvalidArgument("extend_by_zero: spacing mismatch on axis " + std::to_string(k));
    }
    const double shift = (src.lower(k) - target.lower(k)) / h;
    const double rounded = std::round(shift);
    if (std::abs(shift - rounded) > 1e-8) {
      throw InvalidArgument("extend_by_zero: nodes not aligned on axis " + std::to_string(k));
    }
    offset[k] = static_cast<Index>(rounded);
    if (offset[k] < 0 || offset[k] + src.points(k) > target.points(k)) {
      throw InvalidArgument("extend_by_zero: target box does not contain the source box");
    }
  }
  Vector values = Vector::Zero(target.size());
  Mask mask = Mask::Constant(target.size(), false);
  for (Index i = 0; i < src.size(); ++i) {
    const auto [i0, i1] = src.multi_index(i);
    const Index t = target.flat_index(i0 + offset[0], i1 + offset[1]);
    values[t] = f.mask()[i] ? f[i] : 0.0;
    mask[t] = f.mask()[i];
  }
  return ScalarField(target, std::move(values), std::move(mask));
}

double interpolate(const Grid& grid, const Vector& values, const Point& x) {
  std::array<Index, 2> base{0, 0};
  std::array<double, 2> frac{0.0, 0.0};
  for (int k = 0; k < grid.dim(); ++k) {
    const double t = (x[k] - grid.lower(k)) / grid.spacing(k);
    const double last = static_cast<double>(grid.points(k) - 1);
    if (t < -1e-12 || t > last + 1e-12) return 0.0;
    const double tc = std::clamp(t, 0.0, last);
    Index b = static_cast<Index>(std::floor(tc));
    if (b >= grid.points(k) - 1) b = grid.points(k) - 2;
    base[k] = b;
    frac[k] = tc - static_cast<double>(b);
  }
  if (grid.dim() == 1) {
    return (1.0 - frac[0]) * values[base[0]] + frac[0] * values[base[0] + 1];
  }
  const double v00 = values[grid.flat_index(base[0], base[1])];
  const double v10 = values[grid.flat_index(base[0] + 1, base[1])];
  const double v01 = values[grid.flat_index(base[0], base[1] + 1)];
  const double v11 = values[grid.flat_index(base[0] + 1, base[1] + 1)];
  return (1.0 - frac[1]) * ((1.0 - frac[0]) * v00 + frac[0] * v10) +
         frac[1] * ((1.0 - frac[0]) * v01 + frac[0] * v11);
}

ScalarField scale_field(const ScalarField& f, double rho, const Point& center) {
  if (!(rho > 0.0)) throw InvalidArgument("scale_field: rho must be positive");
  const Grid& g = f.grid();
  Vector out(g.size());
  Vector mask_values = f.mask().cast<double>();
  Mask mask(g.size());
  for (Index i = 0; i < g.size(); ++i) {
    const Point x = center + (g.node(i) - center) / rho;
    out[i] = interpolate(g, f.values(), x);
    mask[i] = interpolate(g, mask_values, x) >= 0.5;
  }
  return ScalarField(g, std::move(out), std::move(mask));
}

RieszVectorField scale_field(const RieszVectorField& f, double rho, const Point& center) {
  if (!(rho > 0.0)) throw InvalidArgument("scale_field: rho must be positive");
  const Grid& g = f.grid();
  Eigen::MatrixXd out(g.size(), g.dim());
  for (int k = 0; k < g.dim(); ++k) {
    const Vector col = f.components().col(k);
    for (Index i = 0; i < g.size(); ++i) out(i, k) = interpolate(g, col, center + (g.node(i) - center) / rho);
  }
  return RieszVectorField(g, std::move(out));
}

}  // namespace fracbv
