#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace fracbv {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Point = Eigen::Vector2d;
using Mask = Eigen::Array<bool, Eigen::Dynamic, 1>;

struct Interval {
  double lo;
  double hi;
};

/// Uniform tensor-product grid in one or two dimensions.
///
/// Nodes sit at lo_k + i h_k with h_k = (hi_k - lo_k) / (N_k - 1). Flat node
/// indices run lexicographically with axis 0 fastest. In 1D the second
/// coordinate of every node is 0.
class Grid {
 public:
  Grid(const std::vector<Interval>& box, const std::vector<Index>& points);

  int dim() const { return dim_; }
  Index points(int axis) const { return n_[axis]; }
  double spacing(int axis) const { return h_[axis]; }
  double lower(int axis) const { return lo_[axis]; }
  double upper(int axis) const { return hi_[axis]; }
  Index size() const { return n_[0] * n_[1]; }

  /// Product of the spacings; the node quadrature weight.
  double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }

  Point node(Index i) const;
  std::array<Index, 2> multi_index(Index i) const { return {i % n_[0], i / n_[0]}; }
  Index flat_index(Index i0, Index i1 = 0) const { return i0 + n_[0] * i1; }

  /// Box covered by the node cells, i.e. [lo - h/2, hi + h/2] per axis.
  Interval cell_extent(int axis) const { return {lo_[axis] - 0.5 * h_[axis], hi_[axis] + 0.5 * h_[axis]}; }

  bool isotropic() const { return dim_ == 1 || std::abs(h_[0] - h_[1]) <= 1e-12 * h_[0]; }

  friend bool operator==(const Grid& a, const Grid& b);

 private:
  int dim_;
  std::array<double, 2> lo_{0.0, 0.0};
  std::array<double, 2> hi_{0.0, 0.0};
  std::array<double, 2> h_{1.0, 1.0};
  std::array<Index, 2> n_{1, 1};
};

Grid make_grid(const std::vector<Interval>& box, const std::vector<Index>& points);

/// Grid whose nodes sample one period [lo, lo + period) without the endpoint.
Grid make_periodic_grid(const std::vector<Interval>& period_box, const std::vector<Index>& points);

/// Real-valued grid function with a domain mask.
class ScalarField {
 public:
  ScalarField(Grid grid, Vector values);
  ScalarField(Grid grid, Vector values, Mask mask);

  static ScalarField zeros(const Grid& grid);
  static ScalarField sample(const Grid& grid, const std::function<double(const Point&)>& fn);

  const Grid& grid() const { return grid_; }
  const Vector& values() const { return values_; }
  const Mask& mask() const { return mask_; }
  double operator[](Index i) const { return values_[i]; }

  ScalarField with_values(Vector values) const { return ScalarField(grid_, std::move(values), mask_); }
  ScalarField with_mask(Mask mask) const { return ScalarField(grid_, values_, std::move(mask)); }

  /// True when every node outside the mask carries the value 0.
  bool vanishes_off_mask() const;

 private:
  Grid grid_;
  Vector values_;
  Mask mask_;
};

/// Grid vector field with one column per spatial component.
class RieszVectorField {
 public:
  RieszVectorField(Grid grid, Eigen::MatrixXd components);

  static RieszVectorField zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  const Eigen::MatrixXd& components() const { return components_; }
  Eigen::VectorXd component(int k) const { return components_.col(k); }

  /// Pointwise Euclidean norm.
  Vector pointwise_norm() const { return components_.rowwise().norm(); }
  double sup_norm() const;

 private:
  Grid grid_;
  Eigen::MatrixXd components_;
};

Mask full_mask(const Grid& grid);

/// (sum_i w |f_i|^p)^{1/p} over masked nodes, w the cell volume.
double lp_norm(const ScalarField& f, double p);
double lp_norm(const ScalarField& f, double p, const Mask& over);
double lp_norm(const RieszVectorField& f, double p);
double sup_norm(const ScalarField& f);

double inner(const ScalarField& f, const ScalarField& g);
double inner(const RieszVectorField& f, const RieszVectorField& g);

/// Copies f onto a larger grid sharing its spacing and node alignment.
ScalarField extend_by_zero(const ScalarField& f, const Grid& target);

/// Multilinear interpolation of grid values at an arbitrary point; 0 outside the box.
double interpolate(const Grid& grid, const Vector& values, const Point& x);

/// f_rho(x) = f(c + (x - c) / rho) sampled on the same grid.
ScalarField scale_field(const ScalarField& f, double rho, const Point& center = Point::Zero());
RieszVectorField scale_field(const RieszVectorField& f, double rho, const Point& center = Point::Zero());

}  // namespace fracbv
