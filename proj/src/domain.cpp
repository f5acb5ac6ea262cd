#include "fracbv/domain.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fracbv/error.hpp"

namespace fracbv {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("domain file: not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidArgument("domain file: trailing characters in '" + s + "'");
  return v;
}

}  // namespace

ConvexDomain::ConvexDomain(DomainKind kind, std::vector<Point> vertices, Point center)
    : kind_(kind), vertices_(std::move(vertices)), center_(std::move(center)) {
  validate();
}

void ConvexDomain::validate() const {
  if (kind_ == DomainKind::interval) {
    if (!(vertices_[1].x() > vertices_[0].x())) throw InvalidArgument("interval: need a < b");
  } else {
    const std::size_t n = vertices_.size();
    if (n < 3) throw InvalidArgument("polygon: need at least 3 vertices");
    for (std::size_t k = 0; k < n; ++k) {
      const Point e1 = vertices_[(k + 1) % n] - vertices_[k];
      const Point e2 = vertices_[(k + 2) % n] - vertices_[(k + 1) % n];
      if (!(cross(e1, e2) > 0.0)) {
        throw InvalidArgument("polygon: vertices must form a strictly convex counterclockwise loop");
      }
    }
  }
  if (!contains(center_)) throw InvalidArgument("domain: center must lie strictly inside");
}

ConvexDomain ConvexDomain::interval(double a, double b) { return interval(a, b, 0.5 * (a + b)); }

ConvexDomain ConvexDomain::interval(double a, double b, double center) {
  return ConvexDomain(DomainKind::interval, {Point(a, 0.0), Point(b, 0.0)}, Point(center, 0.0));
}

ConvexDomain ConvexDomain::rectangle(const Point& lo, const Point& hi) {
  return rectangle(lo, hi, 0.5 * (lo + hi));
}

ConvexDomain ConvexDomain::rectangle(const Point& lo, const Point& hi, const Point& center) {
  if (!(hi.x() > lo.x()) || !(hi.y() > lo.y())) throw InvalidArgument("rectangle: degenerate corners");
  return ConvexDomain(DomainKind::rectangle,
                      {lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())}, center);
}

ConvexDomain ConvexDomain::polygon(std::vector<Point> ccw_vertices) {
  if (ccw_vertices.empty()) throw InvalidArgument("polygon: no vertices");
  Point c = Point::Zero();
  for (const auto& v : ccw_vertices) c += v;
  c /= static_cast<double>(ccw_vertices.size());
  return polygon(std::move(ccw_vertices), c);
}

ConvexDomain ConvexDomain::polygon(std::vector<Point> ccw_vertices, const Point& center) {
  return ConvexDomain(DomainKind::polygon, std::move(ccw_vertices), center);
}

ConvexDomain ConvexDomain::regular_polygon(int sides, double circumradius, const Point& center) {
  if (sides < 3 || !(circumradius > 0.0)) throw InvalidArgument("regular polygon: bad parameters");
  std::vector<Point> v;
  for (int k = 0; k < sides; ++k) {
    const double t = 2.0 * std::numbers::pi * k / sides;
    v.push_back(center + circumradius * Point(std::cos(t), std::sin(t)));
  }
  return polygon(std::move(v), center);
}

bool ConvexDomain::contains(const Point& x, double tol) const {
  if (kind_ == DomainKind::interval) {
    return x.x() > vertices_[0].x() + tol && x.x() < vertices_[1].x() - tol;
  }
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point e = vertices_[(k + 1) % n] - vertices_[k];
    if (!(cross(e, x - vertices_[k]) > tol * e.norm())) return false;
  }
  return true;
}

bool ConvexDomain::contains_closed(const Point& x, double tol) const {
  if (kind_ == DomainKind::interval) {
    return x.x() >= vertices_[0].x() - tol && x.x() <= vertices_[1].x() + tol;
  }
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point e = vertices_[(k + 1) % n] - vertices_[k];
    if (cross(e, x - vertices_[k]) < -tol * e.norm()) return false;
  }
  return true;
}

Mask ConvexDomain::mask(const Grid& grid) const {
  if (grid.dim() != dim()) throw InvalidArgument("domain mask: dimension mismatch");
  Mask m(grid.size());
  for (Index i = 0; i < grid.size(); ++i) m[i] = contains_closed(grid.node(i));
  return m;
}

ConvexDomain ConvexDomain::recentered() const {
  std::vector<Point> v = vertices_;
  for (auto& p : v) p -= center_;
  if (kind_ == DomainKind::interval) {
    for (auto& p : v) p.y() = 0.0;
  }
  return ConvexDomain(kind_, std::move(v), Point::Zero());
}

double ConvexDomain::max_radius() const {
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, (v - center_).norm());
  return r;
}

double radial_function(const ConvexDomain& domain, const Point& direction) {
  if (std::abs(direction.norm() - 1.0) > 1e-12) throw InvalidArgument("radial_function: direction is not a unit vector");
  const Point& c = domain.center();
  const auto& v = domain.vertices();
  if (domain.kind() == DomainKind::interval) {
    if (direction.y() != 0.0) throw InvalidArgument("radial_function: 1D direction must be +-1");
    return direction.x() > 0.0 ? v[1].x() - c.x() : c.x() - v[0].x();
  }
  double lambda = INFINITY;
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point e = v[(k + 1) % n] - v[k];
    const Point normal = Point(e.y(), -e.x()) / e.norm();
    const double speed = normal.dot(direction);
    if (speed > 0.0) lambda = std::min(lambda, normal.dot(v[k] - c) / speed);
  }
  return lambda;
}

ConvexDomain scale_domain(const ConvexDomain& domain, double rho) {
  if (!(rho > 0.0)) throw InvalidArgument("scale_domain: rho must be positive");
  const Point& c = domain.center();
  if (domain.kind() == DomainKind::interval) {
    const auto& v = domain.vertices();
    return ConvexDomain::interval(c.x() + rho * (v[0].x() - c.x()), c.x() + rho * (v[1].x() - c.x()), c.x());
  }
  std::vector<Point> v = domain.vertices();
  for (auto& p : v) p = c + rho * (p - c);
  if (domain.kind() == DomainKind::rectangle) return ConvexDomain::rectangle(v[0], v[2], c);
  return ConvexDomain::polygon(std::move(v), c);
}

SeparationResult separation(const ConvexDomain& domain, double rho1, double rho2) {
  if (!(rho1 > 0.0) || !(rho1 < rho2)) throw InvalidArgument("separation: need 0 < rho1 < rho2");
  if (domain.kind() == DomainKind::interval) {
    const double right = radial_function(domain, Point(1.0, 0.0));
    const double left = radial_function(domain, Point(-1.0, 0.0));
    // Boundary points of the scaled intervals relative to the center.
    const double inner[2] = {rho1 * right, -rho1 * left};
    const double outer[2] = {rho2 * right, -rho2 * left};
    double best = INFINITY;
    for (double a : inner) {
      for (double b : outer) best = std::min(best, std::abs(a - b));
    }
    return {best, 0.0};
  }

  constexpr int kDirections = 4096;
  constexpr int kRefinements = 3;
  const auto boundary = [&](double rho, double theta) {
    const Point d(std::cos(theta), std::sin(theta));
    return Point(rho * radial_function(domain, d) * d);
  };
  const double step = 2.0 * std::numbers::pi / kDirections;
  std::vector<Point> inner(kDirections), outer(kDirections);
  for (int i = 0; i < kDirections; ++i) {
    inner[i] = boundary(rho1, i * step);
    outer[i] = boundary(rho2, i * step);
  }
  double best2 = INFINITY;
  int bi = 0, bj = 0;
  for (int i = 0; i < kDirections; ++i) {
    for (int j = 0; j < kDirections; ++j) {
      const double d2 = (inner[i] - outer[j]).squaredNorm();
      if (d2 < best2) {
        best2 = d2;
        bi = i;
        bj = j;
      }
    }
  }
  double t1 = bi * step, t2 = bj * step;
  double best = std::sqrt(best2);
  double residual = 0.0;
  double s = step;
  for (int r = 0; r < kRefinements; ++r) {
    s *= 0.5;
    const double previous = best;
    double n1 = t1, n2 = t2;
    for (int a = -1; a <= 1; ++a) {
      for (int b = -1; b <= 1; ++b) {
        const double d = (boundary(rho1, t1 + a * s) - boundary(rho2, t2 + b * s)).norm();
        if (d < best) {
          best = d;
          n1 = t1 + a * s;
          n2 = t2 + b * s;
        }
      }
    }
    t1 = n1;
    t2 = n2;
    residual = previous - best;
  }
  return {best, residual};
}

ConvexDomain parse_domain(const std::string& text) {
  std::string kind;
  std::vector<Point> vertices;
  bool have_vertices = false;
  bool have_center = false;
  Point center = Point::Zero();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InvalidArgument("domain file line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "kind") {
      kind = value;
    } else if (key == "vertices") {
      have_vertices = true;
      for (const auto& item : split(value, ';')) {
        const auto coords = split(item, ',');
        if (coords.empty() || coords.size() > 2) throw InvalidArgument("domain file: bad vertex '" + item + "'");
        vertices.emplace_back(parse_number(coords[0]), coords.size() == 2 ? parse_number(coords[1]) : 0.0);
      }
    } else if (key == "center") {
      have_center = true;
      const auto coords = split(value, ',');
      if (coords.empty() || coords.size() > 2) throw InvalidArgument("domain file: bad center '" + value + "'");
      center = Point(parse_number(coords[0]), coords.size() == 2 ? parse_number(coords[1]) : 0.0);
    } else {
      throw InvalidArgument("domain file: unknown key '" + key + "'");
    }
  }
  if (!have_vertices) throw InvalidArgument("domain file: missing vertices");
  if (kind == "interval") {
    if (vertices.size() != 2) throw InvalidArgument("domain file: interval needs two endpoints");
    return have_center ? ConvexDomain::interval(vertices[0].x(), vertices[1].x(), center.x())
                       : ConvexDomain::interval(vertices[0].x(), vertices[1].x());
  }
  if (kind == "rect") {
    if (vertices.size() != 2) throw InvalidArgument("domain file: rect needs lower and upper corners");
    return have_center ? ConvexDomain::rectangle(vertices[0], vertices[1], center)
                       : ConvexDomain::rectangle(vertices[0], vertices[1]);
  }
  if (kind == "polygon") {
    return have_center ? ConvexDomain::polygon(vertices, center) : ConvexDomain::polygon(vertices);
  }
  throw InvalidArgument("domain file: kind must be interval, rect or polygon");
}

std::string format_domain(const ConvexDomain& domain) {
  std::ostringstream out;
  out.precision(17);
  const auto& v = domain.vertices();
  const Point& c = domain.center();
  switch (domain.kind()) {
    case DomainKind::interval:
      out << "kind=interval\nvertices=" << v[0].x() << ";" << v[1].x() << "\ncenter=" << c.x() << "\n";
      break;
    case DomainKind::rectangle:
      out << "kind=rect\nvertices=" << v[0].x() << "," << v[0].y() << ";" << v[2].x() << "," << v[2].y()
          << "\ncenter=" << c.x() << "," << c.y() << "\n";
      break;
    case DomainKind::polygon:
      out << "kind=polygon\nvertices=";
      for (std::size_t k = 0; k < v.size(); ++k) out << (k ? ";" : "") << v[k].x() << "," << v[k].y();
      out << "\ncenter=" << c.x() << "," << c.y() << "\n";
      break;
  }
  return out.str();
}

ConvexDomain read_domain_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open domain file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_domain(ss.str());
}

}  // namespace fracbv
