#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace rbfmix {

using Point = Eigen::Vector2d;

inline constexpr double kPointInPolygonTolerance = 1e-12;
inline constexpr int kDefaultProbeResolution = 512;

struct BoundingBox {
  Point lo;
  Point hi;

  double width() const { return hi.x() - lo.x(); }
  double height() const { return hi.y() - lo.y(); }
  double diagonal() const { return (hi - lo).norm(); }
};

/// Straight edge of a polygon, carrying its arc-length offset along Γ.
struct Edge {
  Point a;
  Point b;
  double length = 0.0;
  double s_start = 0.0;
  Point tangent;  // unit, a -> b
  Point normal;   // unit, outward for CCW polygons
};

/// A point on Γ with its arc-length coordinate and outward normal.
struct BoundaryPoint {
  Point x;
  double s = 0.0;
  std::size_t edge = 0;
  Point normal;
};

/// Closed, simple, counter-clockwise polygon in the plane.
class Polygon {
 public:
  /// Throws ConfigError if the vertex list is degenerate, clockwise or
  /// self-intersecting.
  explicit Polygon(std::vector<Point> vertices);

  static Polygon unit_square();
  /// (0,0)-(1,0)-(1,0.5)-(0.5,0.5)-(0.5,1)-(0,1)
  static Polygon l_shape();
  static Polygon from_preset(std::string_view name);

  const std::vector<Point>& vertices() const { return vertices_; }
  std::size_t num_edges() const { return edges_.size(); }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  const std::vector<Edge>& edges() const { return edges_; }

  double perimeter() const { return perimeter_; }
  double area() const { return area_; }
  double diameter() const;
  double shortest_edge() const;
  BoundingBox bounding_box() const;
  bool is_unit_square() const;

  /// Closed containment: points within `tol` of Γ count as inside.
  bool contains(const Point& p, double tol = kPointInPolygonTolerance) const;
  double distance_to_boundary(const Point& p) const;

  /// Point at arc length s ∈ [0, perimeter]; the last edge owns s = perimeter.
  BoundaryPoint point_at(double s) const;

 private:
  std::vector<Point> vertices_;
  std::vector<Edge> edges_;
  double perimeter_ = 0.0;
  double area_ = 0.0;
};

/// Quasi-uniform node set X with fill distance h_X and separation q_X.
struct CenterSet {
  std::vector<Point> points;
  double fill_distance = 0.0;
  double separation = 0.0;
  /// Spacing of the generating tensor grid, when the set is a full grid.
  std::optional<double> grid_spacing;

  std::size_t size() const { return points.size(); }
};

/// Half of the minimal pairwise distance; +inf for fewer than two points.
double separation_distance(std::span<const Point> points);

/// Tensor grid of n_per_side² nodes on the closed unit square.
CenterSet generate_grid_centers(const Polygon& polygon, int n_per_side);

/// Axis-aligned grid of the given spacing clipped to the closed polygon.
CenterSet generate_interior_centers(const Polygon& polygon, double target_spacing);

/// Probe-grid approximation of sup_{x∈Ω} min_j |x - x_j|. The probe grid has
/// `probe_resolution` intervals per unit length and includes the bounding box
/// corners, so the error is at most one probe-cell diagonal.
double fill_distance(std::span<const Point> centers, const Polygon& polygon,
                     int probe_resolution = kDefaultProbeResolution);

/// Probe nodes used by fill_distance (restricted to the closed polygon).
std::vector<Point> probe_grid(const Polygon& polygon, int probe_resolution);

struct BoundaryElement {
  std::size_t edge = 0;
  double s_start = 0.0;
  double s_end = 0.0;
  Point a;
  Point b;
  Point normal;
  /// Arc length of the element start measured from its edge's first vertex.
  double edge_offset = 0.0;

  double length() const { return s_end - s_start; }
};

/// Partition T_k of Γ into straight elements that never straddle a vertex.
class BoundaryMesh {
 public:
  BoundaryMesh(const Polygon& polygon, std::vector<BoundaryElement> elements);

  const std::vector<BoundaryElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  const BoundaryElement& element(std::size_t i) const { return elements_.at(i); }
  double mesh_size() const { return mesh_size_; }
  double min_element_length() const { return min_length_; }
  double perimeter() const { return perimeter_; }

  /// Owning element of arc length s, using half-open [start, end) intervals;
  /// the last element also owns the closing point s = perimeter.
  std::size_t locate(double s) const;
  /// Point with local coordinate t ∈ [0,1] on element e.
  BoundaryPoint point_at(std::size_t e, double t) const;

 private:
  std::vector<BoundaryElement> elements_;
  double mesh_size_ = 0.0;
  double min_length_ = 0.0;
  double perimeter_ = 0.0;
};

/// Splits each edge into ceil(length / target_k) equal elements.
BoundaryMesh partition_boundary(const Polygon& polygon, double target_k);

/// Splits each edge into exactly `per_edge[i]` equal elements.
BoundaryMesh partition_boundary_counts(const Polygon& polygon,
                                       std::span<const int> per_edge);

}  // namespace rbfmix
