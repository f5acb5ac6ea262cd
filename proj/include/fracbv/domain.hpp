#pragma once

#include <string>
#include <vector>

#include "fracbv/grid.hpp"

namespace fracbv {

enum class DomainKind { interval, rectangle, polygon };

/// Open convex set with a distinguished interior point.
///
/// Intervals keep their endpoints in the x coordinate of two vertices;
/// rectangles and polygons are stored as counterclockwise vertex loops.
/// Star-shaped but non-convex sets (a disk with an attached sector, a slit
/// disk) are not representable: the radial function is only continuous for
/// convex sets and the duality layer relies on that.
class ConvexDomain {
 public:
  static ConvexDomain interval(double a, double b);
  static ConvexDomain interval(double a, double b, double center);
  static ConvexDomain rectangle(const Point& lo, const Point& hi);
  static ConvexDomain rectangle(const Point& lo, const Point& hi, const Point& center);
  static ConvexDomain polygon(std::vector<Point> ccw_vertices);
  static ConvexDomain polygon(std::vector<Point> ccw_vertices, const Point& center);
  static ConvexDomain regular_polygon(int sides, double circumradius, const Point& center = Point::Zero());

  DomainKind kind() const { return kind_; }
  int dim() const { return kind_ == DomainKind::interval ? 1 : 2; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const Point& center() const { return center_; }

  /// Strict membership (open set); `tol` shrinks the set by that margin.
  bool contains(const Point& x, double tol = 0.0) const;
  /// Closed membership, used to rasterize onto grids.
  bool contains_closed(const Point& x, double tol = 1e-12) const;

  /// Nodes of `grid` lying in the closed domain.
  Mask mask(const Grid& grid) const;

  /// Same set translated so that the center is the origin.
  ConvexDomain recentered() const;

  /// Largest distance from the center to the boundary along any direction.
  double max_radius() const;

 private:
  ConvexDomain(DomainKind kind, std::vector<Point> vertices, Point center);
  void validate() const;

  DomainKind kind_;
  std::vector<Point> vertices_;
  Point center_;
};

/// lambda(d) = sup{ r >= 0 : center + r d in domain } for a unit direction d.
double radial_function(const ConvexDomain& domain, const Point& direction);

/// center + rho (domain - center).
ConvexDomain scale_domain(const ConvexDomain& domain, double rho);

struct SeparationResult {
  double distance;
  /// Change of the estimate during the last refinement pass.
  double refinement_residual;
};

/// dist(domain_{rho1}, complement of domain_{rho2}) by angular sampling of both
/// boundaries (4096 base directions) followed by three local bisection passes.
SeparationResult separation(const ConvexDomain& domain, double rho1, double rho2);

/// Plain-text domain description: `kind=...`, `vertices=x0,y0;x1,y1;...`, `center=cx,cy`.
ConvexDomain parse_domain(const std::string& text);
std::string format_domain(const ConvexDomain& domain);
ConvexDomain read_domain_file(const std::string& path);

}  // namespace fracbv
