#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbfmix/geometry.hpp"

namespace rbfmix {

/// Uniform bucket grid over a fixed point set for fixed-radius queries.
///
/// Points are binned by counting sort into cells of (at least) the requested
/// size; each query scans the cells overlapping the query box. Results of
/// within() are sorted by point index so callers see a deterministic order.
class SpatialHash {
 public:
  SpatialHash(std::span<const Point> points, double cell_size);

  /// Indices j with |points[j] - q| < radius, ascending.
  std::vector<std::size_t> within(const Point& q, double radius) const;

  /// Same as within() but with a closed ball (|points[j] - q| <= radius).
  std::vector<std::size_t> within_closed(const Point& q, double radius) const;

  /// Index of a nearest point (smallest index on ties).
  std::size_t nearest(const Point& q) const;

  std::size_t size() const { return points_.size(); }
  double cell_size() const { return cell_; }

 private:
  template <class Accept>
  std::vector<std::size_t> collect(const Point& q, double radius, Accept accept) const;

  int cell_x(double x) const;
  int cell_y(double y) const;

  std::vector<Point> points_;
  Point origin_;
  double cell_ = 1.0;
  int nx_ = 1;
  int ny_ = 1;
  std::vector<std::size_t> offsets_;  // CSR offsets, size nx*ny + 1
  std::vector<std::size_t> members_;
};

}  // namespace rbfmix
