#include "rbfmix/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rbfmix/errors.hpp"
#include "rbfmix/spatial_hash.hpp"

namespace rbfmix {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double segment_distance(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

int orientation(const Point& a, const Point& b, const Point& c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) &&
         std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

Polygon::Polygon(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw ConfigError("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    if (!vertices_[i].allFinite()) throw ConfigError("polygon vertex is not finite");
    if ((vertices_[i] - vertices_[(i + 1) % n]).norm() == 0.0)
      throw ConfigError("polygon has repeated consecutive vertices");
  }
  double twice_area = 0.0;
  for (std::size_t i = 0; i < n; ++i) twice_area += cross(vertices_[i], vertices_[(i + 1) % n]);
  if (!(twice_area > 0.0)) throw ConfigError("polygon must be counter-clockwise with positive area");
  area_ = 0.5 * twice_area;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(vertices_[i], vertices_[(i + 1) % n], vertices_[j], vertices_[(j + 1) % n]))
        throw ConfigError("polygon is self-intersecting");
    }
  }

  double s = 0.0;
  edges_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Edge e;
    e.a = vertices_[i];
    e.b = vertices_[(i + 1) % n];
    e.length = (e.b - e.a).norm();
    e.s_start = s;
    e.tangent = (e.b - e.a) / e.length;
    e.normal = Point(e.tangent.y(), -e.tangent.x());
    s += e.length;
    edges_.push_back(e);
  }
  perimeter_ = s;
}

Polygon Polygon::unit_square() {
  return Polygon({Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)});
}

Polygon Polygon::l_shape() {
  return Polygon({Point(0, 0), Point(1, 0), Point(1, 0.5), Point(0.5, 0.5), Point(0.5, 1), Point(0, 1)});
}

Polygon Polygon::from_preset(std::string_view name) {
  if (name == "unit_square") return unit_square();
  if (name == "l_shape") return l_shape();
  throw ConfigError("unknown polygon preset '" + std::string(name) + "'");
}

double Polygon::diameter() const {
  double d = 0.0;
  for (const auto& a : vertices_)
    for (const auto& b : vertices_) d = std::max(d, (a - b).norm());
  return d;
}

double Polygon::shortest_edge() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : edges_) m = std::min(m, e.length);
  return m;
}

BoundingBox Polygon::bounding_box() const {
  BoundingBox box{vertices_.front(), vertices_.front()};
  for (const auto& v : vertices_) {
    box.lo = box.lo.cwiseMin(v);
    box.hi = box.hi.cwiseMax(v);
  }
  return box;
}

bool Polygon::is_unit_square() const {
  if (vertices_.size() != 4) return false;
  const Polygon ref = unit_square();
  for (std::size_t shift = 0; shift < 4; ++shift) {
    bool same = true;
    for (std::size_t i = 0; i < 4 && same; ++i)
      same = (vertices_[(i + shift) % 4] - ref.vertices_[i]).norm() <= kPointInPolygonTolerance;
    if (same) return true;
  }
  return false;
}

double Polygon::distance_to_boundary(const Point& p) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& e : edges_) d = std::min(d, segment_distance(p, e.a, e.b));
  return d;
}

bool Polygon::contains(const Point& p, double tol) const {
  if (distance_to_boundary(p) <= tol) return true;
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point& a = vertices_[i];
    const Point& b = vertices_[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x_cross = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x_cross) inside = !inside;
    }
  }
  return inside;
}

BoundaryPoint Polygon::point_at(double s) const {
  if (s < -kPointInPolygonTolerance || s > perimeter_ + kPointInPolygonTolerance)
    throw std::domain_error("arc length outside [0, perimeter]");
  s = std::clamp(s, 0.0, perimeter_);
  std::size_t i = 0;
  while (i + 1 < edges_.size() && s >= edges_[i + 1].s_start) ++i;
  const Edge& e = edges_[i];
  const double local = std::clamp(s - e.s_start, 0.0, e.length);
  return BoundaryPoint{e.a + local * e.tangent, s, i, e.normal};
}

double separation_distance(std::span<const Point> points) {
  if (points.size() < 2) return std::numeric_limits<double>::infinity();
  // Grid binning with a cell matched to the average spacing keeps this near-linear.
  BoundingBox box{points.front(), points.front()};
  for (const auto& p : points) {
    box.lo = box.lo.cwiseMin(p);
    box.hi = box.hi.cwiseMax(p);
  }
  const double extent = std::max({box.width(), box.height(), 1e-300});
  const double cell = extent / std::sqrt(static_cast<double>(points.size()));
  const SpatialHash hash(points, cell);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    double radius = cell;
    for (;;) {
      bool found = false;
      for (std::size_t j : hash.within_closed(points[i], radius)) {
        if (j == i) continue;
        found = true;
        best = std::min(best, (points[i] - points[j]).norm());
      }
      if (found) break;
      radius *= 2.0;
    }
  }
  return 0.5 * best;
}

CenterSet generate_grid_centers(const Polygon& polygon, int n_per_side) {
  if (!polygon.is_unit_square())
    throw ConfigError("tensor-grid centers require the unit_square preset; use generate_interior_centers");
  if (n_per_side < 2) throw ConfigError("n_per_side must be at least 2");
  const double spacing = 1.0 / (n_per_side - 1);
  CenterSet set;
  set.points.reserve(static_cast<std::size_t>(n_per_side) * n_per_side);
  for (int i = 0; i < n_per_side; ++i)
    for (int j = 0; j < n_per_side; ++j)
      set.points.emplace_back(i * spacing, j * spacing);
  // Exact values for a tensor grid: the farthest points are cell centers.
  set.fill_distance = spacing * std::sqrt(2.0) / 2.0;
  set.separation = spacing / 2.0;
  set.grid_spacing = spacing;
  return set;
}

CenterSet generate_interior_centers(const Polygon& polygon, double target_spacing) {
  if (!(target_spacing > 0.0)) throw ConfigError("target spacing must be positive");
  if (!(target_spacing < polygon.diameter()))
    throw ConfigError("target spacing must be smaller than the polygon diameter");
  const BoundingBox box = polygon.bounding_box();
  const int nx = static_cast<int>(std::floor(box.width() / target_spacing + 1e-9)) + 1;
  const int ny = static_cast<int>(std::floor(box.height() / target_spacing + 1e-9)) + 1;
  CenterSet set;
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const Point p(box.lo.x() + i * target_spacing, box.lo.y() + j * target_spacing);
      if (polygon.contains(p)) set.points.push_back(p);
    }
  }
  if (set.points.empty()) throw ConfigError("no grid point of the requested spacing lies in the polygon");
  set.separation = separation_distance(set.points);
  set.fill_distance = fill_distance(set.points, polygon);
  const bool full_grid = polygon.is_unit_square() && nx == ny &&
                         std::abs((nx - 1) * target_spacing - 1.0) < 1e-9;
  if (full_grid) set.grid_spacing = target_spacing;
  return set;
}

std::vector<Point> probe_grid(const Polygon& polygon, int probe_resolution) {
  if (probe_resolution < 1) throw std::invalid_argument("probe resolution must be positive");
  const BoundingBox box = polygon.bounding_box();
  const int nx = std::max(1, static_cast<int>(std::ceil(box.width() * probe_resolution - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(box.height() * probe_resolution - 1e-9)));
  const bool rectangle = polygon.vertices().size() == 4 &&
                         std::abs(polygon.area() - box.width() * box.height()) < 1e-14;
  std::vector<Point> probes;
  probes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int i = 0; i <= nx; ++i) {
    for (int j = 0; j <= ny; ++j) {
      const Point p(box.lo.x() + box.width() * i / nx, box.lo.y() + box.height() * j / ny);
      if (rectangle || polygon.contains(p)) probes.push_back(p);
    }
  }
  return probes;
}

double fill_distance(std::span<const Point> centers, const Polygon& polygon, int probe_resolution) {
  if (centers.empty()) throw std::invalid_argument("fill_distance needs at least one center");
  const std::vector<Point> probes = probe_grid(polygon, probe_resolution);
  const BoundingBox box = polygon.bounding_box();
  const double cell = std::max(box.width(), box.height()) / std::sqrt(static_cast<double>(centers.size()));
  const SpatialHash hash(centers, cell);
  double h = 0.0;
  for (const auto& p : probes) h = std::max(h, (centers[hash.nearest(p)] - p).norm());
  return h;
}

BoundaryMesh::BoundaryMesh(const Polygon& polygon, std::vector<BoundaryElement> elements)
    : elements_(std::move(elements)), perimeter_(polygon.perimeter()) {
  if (elements_.empty()) throw ConfigError("boundary mesh needs at least one element");
  double total = 0.0;
  mesh_size_ = 0.0;
  min_length_ = std::numeric_limits<double>::infinity();
  double expected_start = 0.0;
  for (const auto& el : elements_) {
    const double len = el.length();
    if (!(len > 0.0)) throw ConfigError("boundary element with non-positive length");
    if (std::abs(el.s_start - expected_start) > 1e-12 * std::max(1.0, perimeter_))
      throw ConfigError("boundary elements must be contiguous and ordered");
    expected_start = el.s_end;
    total += len;
    mesh_size_ = std::max(mesh_size_, len);
    min_length_ = std::min(min_length_, len);
  }
  if (std::abs(total - perimeter_) > 1e-12 * perimeter_)
    throw ConfigError("boundary elements do not cover the boundary");
}

std::size_t BoundaryMesh::locate(double s) const {
  if (s < -kPointInPolygonTolerance || s > perimeter_ + kPointInPolygonTolerance)
    throw std::domain_error("arc length outside [0, perimeter]");
  auto it = std::upper_bound(elements_.begin(), elements_.end(), s,
                             [](double v, const BoundaryElement& el) { return v < el.s_start; });
  const std::size_t idx = it == elements_.begin() ? 0 : static_cast<std::size_t>(it - elements_.begin()) - 1;
  return std::min(idx, elements_.size() - 1);
}

BoundaryPoint BoundaryMesh::point_at(std::size_t e, double t) const {
  const BoundaryElement& el = elements_.at(e);
  return BoundaryPoint{el.a + t * (el.b - el.a), el.s_start + t * el.length(), el.edge, el.normal};
}

BoundaryMesh partition_boundary_counts(const Polygon& polygon, std::span<const int> per_edge) {
  if (per_edge.size() != polygon.num_edges()) throw ConfigError("one element count per edge required");
  std::vector<BoundaryElement> elements;
  for (std::size_t i = 0; i < polygon.num_edges(); ++i) {
    const Edge& e = polygon.edge(i);
    const int n = per_edge[i];
    if (n < 1) throw ConfigError("each edge needs at least one boundary element");
    for (int m = 0; m < n; ++m) {
      BoundaryElement el;
      el.edge = i;
      const double t0 = static_cast<double>(m) / n;
      const double t1 = static_cast<double>(m + 1) / n;
      el.edge_offset = t0 * e.length;
      el.s_start = e.s_start + el.edge_offset;
      el.s_end = (m + 1 == n) ? e.s_start + e.length : e.s_start + t1 * e.length;
      el.a = e.a + t0 * (e.b - e.a);
      el.b = (m + 1 == n) ? e.b : Point(e.a + t1 * (e.b - e.a));
      el.normal = e.normal;
      elements.push_back(el);
    }
  }
  // Keep the closing arc length identical to the polygon's perimeter.
  elements.back().s_end = polygon.perimeter();
  return BoundaryMesh(polygon, std::move(elements));
}

BoundaryMesh partition_boundary(const Polygon& polygon, double target_k) {
  if (!(target_k > 0.0)) throw ConfigError("target_k must be positive");
  if (target_k > polygon.shortest_edge() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "target_k = " << target_k << " exceeds the shortest edge (" << polygon.shortest_edge()
        << "); elements may not straddle vertices";
    throw ConfigError(msg.str());
  }
  std::vector<int> counts;
  for (const auto& e : polygon.edges())
    counts.push_back(std::max(1, static_cast<int>(std::ceil(e.length / target_k - 1e-9))));
  return partition_boundary_counts(polygon, counts);
}

}  // namespace rbfmix
