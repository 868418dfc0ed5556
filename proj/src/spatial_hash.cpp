#include "rbfmix/spatial_hash.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rbfmix {

namespace {
constexpr double kMaxCells = 1 << 22;
}

SpatialHash::SpatialHash(std::span<const Point> points, double cell_size)
    : points_(points.begin(), points.end()) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("SpatialHash: cell size must be positive");
  if (points_.empty()) {
    origin_ = Point::Zero();
    offsets_.assign(2, 0);
    return;
  }
  Point lo = points_.front();
  Point hi = points_.front();
  for (const auto& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  origin_ = lo;
  cell_ = cell_size;
  const double wx = hi.x() - lo.x();
  const double wy = hi.y() - lo.y();
  // Enlarge cells rather than allocate an absurd number of empty buckets.
  while ((std::floor(wx / cell_) + 1.0) * (std::floor(wy / cell_) + 1.0) > kMaxCells) cell_ *= 2.0;
  nx_ = static_cast<int>(std::floor(wx / cell_)) + 1;
  ny_ = static_cast<int>(std::floor(wy / cell_)) + 1;

  const std::size_t ncells = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  offsets_.assign(ncells + 1, 0);
  std::vector<std::size_t> cell_of(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    cell_of[i] = static_cast<std::size_t>(cell_y(points_[i].y())) * nx_ + cell_x(points_[i].x());
    ++offsets_[cell_of[i] + 1];
  }
  for (std::size_t c = 0; c < ncells; ++c) offsets_[c + 1] += offsets_[c];
  members_.resize(points_.size());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < points_.size(); ++i) members_[fill[cell_of[i]]++] = i;
}

int SpatialHash::cell_x(double x) const {
  return std::clamp(static_cast<int>(std::floor((x - origin_.x()) / cell_)), 0, nx_ - 1);
}

int SpatialHash::cell_y(double y) const {
  return std::clamp(static_cast<int>(std::floor((y - origin_.y()) / cell_)), 0, ny_ - 1);
}

template <class Accept>
std::vector<std::size_t> SpatialHash::collect(const Point& q, double radius, Accept accept) const {
  std::vector<std::size_t> out;
  if (points_.empty() || !(radius >= 0.0)) return out;
  const int x0 = cell_x(q.x() - radius);
  const int x1 = cell_x(q.x() + radius);
  const int y0 = cell_y(q.y() - radius);
  const int y1 = cell_y(q.y() + radius);
  for (int cy = y0; cy <= y1; ++cy) {
    for (int cx = x0; cx <= x1; ++cx) {
      const std::size_t c = static_cast<std::size_t>(cy) * nx_ + cx;
      for (std::size_t m = offsets_[c]; m < offsets_[c + 1]; ++m) {
        const std::size_t j = members_[m];
        if (accept((points_[j] - q).squaredNorm())) out.push_back(j);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> SpatialHash::within(const Point& q, double radius) const {
  const double r2 = radius * radius;
  return collect(q, radius, [r2](double d2) { return d2 < r2; });
}

std::vector<std::size_t> SpatialHash::within_closed(const Point& q, double radius) const {
  const double r2 = radius * radius;
  return collect(q, radius, [r2](double d2) { return d2 <= r2; });
}

std::size_t SpatialHash::nearest(const Point& q) const {
  if (points_.empty()) throw std::logic_error("SpatialHash::nearest on empty set");
  const int qx = cell_x(q.x());
  const int qy = cell_y(q.y());
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  const int max_ring = std::max(nx_, ny_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    // Every point in ring `ring` is at least (ring - 1) cells away from q.
    const double bound = (ring - 1) * cell_;
    if (ring > 0 && bound > 0.0 && bound * bound > best) break;
    for (int cy = qy - ring; cy <= qy + ring; ++cy) {
      if (cy < 0 || cy >= ny_) continue;
      const bool edge_row = (cy == qy - ring || cy == qy + ring);
      for (int cx = qx - ring; cx <= qx + ring; ++cx) {
        if (cx < 0 || cx >= nx_) continue;
        if (!edge_row && cx != qx - ring && cx != qx + ring) continue;
        const std::size_t c = static_cast<std::size_t>(cy) * nx_ + cx;
        for (std::size_t m = offsets_[c]; m < offsets_[c + 1]; ++m) {
          const std::size_t j = members_[m];
          const double d2 = (points_[j] - q).squaredNorm();
          if (d2 < best || (d2 == best && j < best_index)) {
            best = d2;
            best_index = j;
          }
        }
      }
    }
  }
  return best_index;
}

}  // namespace rbfmix
