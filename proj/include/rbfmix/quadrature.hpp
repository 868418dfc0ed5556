#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "rbfmix/geometry.hpp"

namespace rbfmix {

inline constexpr int kDefaultPointsPerCell = 5;
inline constexpr int kDefaultBoundaryPoints = 16;

/// Gauss-Legendre rule on [0, 1].
struct QuadRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  int order() const { return static_cast<int>(nodes.size()); }
  static QuadRule1D gauss_legendre(int n);
};

/// Axis-aligned integration cell and the slice of nodes it owns.
struct QuadCell {
  BoundingBox box;
  std::size_t first = 0;
  std::size_t count = 0;
};

/// Tensor Gauss rule on a cell grid over the polygon's bounding box.
///
/// Cells entirely inside the polygon carry a full tensor rule; cells cut by Γ
/// are split three times per direction and keep the sub-cells whose midpoint
/// is inside. For rectangles the cover is exact.
class DomainQuadrature {
 public:
  DomainQuadrature(const Polygon& polygon, double target_cell_size,
                   int points_per_dim = kDefaultPointsPerCell);

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<QuadCell>& cells() const { return cells_; }
  std::size_t size() const { return nodes_.size(); }
  double cell_size() const { return cell_size_; }
  int points_per_dim() const { return points_per_dim_; }

 private:
  std::vector<Point> nodes_;
  std::vector<double> weights_;
  std::vector<QuadCell> cells_;
  double cell_size_ = 0.0;
  int points_per_dim_ = 0;
};

/// Cell size for the "auto" rule min(h_X, r) / 2. When the centers form a grid
/// of spacing s, the size is shrunk to s / m so cell corners fall on centers.
double auto_cell_size(double fill_distance, double r, std::optional<double> grid_spacing);

/// Weighted sum over all nodes; NumericalError on a non-finite integrand value.
double integrate_domain(const DomainQuadrature& quad, const std::function<double(const Point&)>& f);

/// Indices of nodes with |x - center| <= radius, ascending.
std::vector<std::size_t> restrict_support(const DomainQuadrature& quad, const Point& center, double radius);

/// ∫_Γ f(s) ds with `rule` on every element of `mesh`.
double integrate_boundary(const QuadRule1D& rule, const BoundaryMesh& mesh,
                          const std::function<double(double)>& f);

struct BoundaryNode {
  BoundaryPoint point;
  double weight = 0.0;
  std::size_t element = 0;
  double t = 0.0;  // local coordinate on the element
};

/// Composite Gauss rule on Γ. Each element is cut into segments of length at
/// most `max_segment`, with breakpoints at multiples of `max_segment` measured
/// from the edge's first vertex so that kernel kinks at boundary centers of a
/// matching grid land on segment ends.
class BoundaryQuadrature {
 public:
  BoundaryQuadrature(const BoundaryMesh& mesh, const QuadRule1D& rule,
                     double max_segment = std::numeric_limits<double>::infinity());

  const std::vector<BoundaryNode>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<BoundaryNode> nodes_;
};

double integrate_boundary(const BoundaryQuadrature& quad, const std::function<double(const BoundaryNode&)>& f);

}  // namespace rbfmix
