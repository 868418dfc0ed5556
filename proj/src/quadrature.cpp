#include "rbfmix/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rbfmix/errors.hpp"

namespace rbfmix {

QuadRule1D QuadRule1D::gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  QuadRule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; the roots are
  // symmetric, so only half of them are computed.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1]; x is the i-th largest root.
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.5;
  return rule;
}

namespace {

// Liang-Barsky clip: does the segment meet the open box?
bool segment_meets_open_box(const Point& a, const Point& b, const BoundingBox& box) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Point d = b - a;
  const double p[4] = {-d.x(), d.x(), -d.y(), d.y()};
  const double q[4] = {a.x() - box.lo.x(), box.hi.x() - a.x(), a.y() - box.lo.y(), box.hi.y() - a.y()};
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] <= 0.0) return false;
    } else {
      const double t = q[i] / p[i];
      if (p[i] < 0.0) t0 = std::max(t0, t);
      else t1 = std::min(t1, t);
      if (t0 >= t1) return false;
    }
  }
  return true;
}

void add_tensor_rule(const QuadRule1D& rule, const BoundingBox& box, std::vector<Point>& nodes,
                     std::vector<double>& weights) {
  const double wx = box.width();
  const double wy = box.height();
  for (int i = 0; i < rule.order(); ++i) {
    for (int j = 0; j < rule.order(); ++j) {
      nodes.emplace_back(box.lo.x() + wx * rule.nodes[i], box.lo.y() + wy * rule.nodes[j]);
      weights.push_back(wx * wy * rule.weights[i] * rule.weights[j]);
    }
  }
}

}  // namespace

DomainQuadrature::DomainQuadrature(const Polygon& polygon, double target_cell_size, int points_per_dim)
    : points_per_dim_(points_per_dim) {
  if (!(target_cell_size > 0.0)) throw ConfigError("quadrature cell size must be positive");
  if (points_per_dim < 1) throw ConfigError("quad_points_per_cell must be positive");
  const QuadRule1D rule = QuadRule1D::gauss_legendre(points_per_dim);
  const BoundingBox box = polygon.bounding_box();
  const int nx = std::max(1, static_cast<int>(std::ceil(box.width() / target_cell_size - 1e-9)));
  const int ny = std::max(1, static_cast<int>(std::ceil(box.height() / target_cell_size - 1e-9)));
  cell_size_ = std::max(box.width() / nx, box.height() / ny);
  constexpr int kSubdivisions = 8;  // three bisection levels

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      BoundingBox cell{Point(box.lo.x() + box.width() * i / nx, box.lo.y() + box.height() * j / ny),
                       Point(box.lo.x() + box.width() * (i + 1) / nx, box.lo.y() + box.height() * (j + 1) / ny)};
      QuadCell qc{cell, nodes_.size(), 0};
      bool cut = false;
      for (const auto& e : polygon.edges()) {
        if (segment_meets_open_box(e.a, e.b, cell)) {
          cut = true;
          break;
        }
      }
      if (!cut) {
        if (polygon.contains(0.5 * (cell.lo + cell.hi))) add_tensor_rule(rule, cell, nodes_, weights_);
      } else {
        for (int sj = 0; sj < kSubdivisions; ++sj) {
          for (int si = 0; si < kSubdivisions; ++si) {
            const BoundingBox sub{
                Point(cell.lo.x() + cell.width() * si / kSubdivisions, cell.lo.y() + cell.height() * sj / kSubdivisions),
                Point(cell.lo.x() + cell.width() * (si + 1) / kSubdivisions,
                      cell.lo.y() + cell.height() * (sj + 1) / kSubdivisions)};
            if (polygon.contains(0.5 * (sub.lo + sub.hi))) add_tensor_rule(rule, sub, nodes_, weights_);
          }
        }
      }
      qc.count = nodes_.size() - qc.first;
      if (qc.count > 0) cells_.push_back(qc);
    }
  }
}

double auto_cell_size(double fill_distance, double r, std::optional<double> grid_spacing) {
  const double target = 0.5 * std::min(fill_distance, r);
  if (!grid_spacing) return target;
  const double s = *grid_spacing;
  const double m = std::max(1.0, std::ceil(s / target - 1e-9));
  return s / m;
}

double integrate_domain(const DomainQuadrature& quad, const std::function<double(const Point&)>& f) {
  double sum = 0.0;
  const auto& nodes = quad.nodes();
  const auto& weights = quad.weights();
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const double v = f(nodes[q]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "non-finite integrand at (" << nodes[q].x() << ", " << nodes[q].y() << ")";
      throw NumericalError(msg.str());
    }
    sum += weights[q] * v;
  }
  return sum;
}

std::vector<std::size_t> restrict_support(const DomainQuadrature& quad, const Point& center, double radius) {
  std::vector<std::size_t> out;
  const double r2 = radius * radius;
  for (const auto& cell : quad.cells()) {
    const Point nearest = center.cwiseMax(cell.box.lo).cwiseMin(cell.box.hi);
    if ((nearest - center).squaredNorm() > r2) continue;
    for (std::size_t q = cell.first; q < cell.first + cell.count; ++q)
      if ((quad.nodes()[q] - center).squaredNorm() <= r2) out.push_back(q);
  }
  return out;
}

double integrate_boundary(const QuadRule1D& rule, const BoundaryMesh& mesh, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (const auto& el : mesh.elements()) {
    double local = 0.0;
    for (int q = 0; q < rule.order(); ++q) {
      const double s = el.s_start + rule.nodes[q] * el.length();
      const double v = f(s);
      if (!std::isfinite(v)) throw NumericalError("non-finite boundary integrand at s = " + std::to_string(s));
      local += rule.weights[q] * v;
    }
    sum += local * el.length();
  }
  return sum;
}

BoundaryQuadrature::BoundaryQuadrature(const BoundaryMesh& mesh, const QuadRule1D& rule, double max_segment) {
  if (!(max_segment > 0.0)) throw ConfigError("boundary segment length must be positive");
  for (std::size_t e = 0; e < mesh.size(); ++e) {
    const BoundaryElement& el = mesh.element(e);
    const double len = el.length();
    std::vector<double> breaks{0.0};
    if (std::isfinite(max_segment)) {
      // Breakpoints at multiples of max_segment along the edge.
      const double end = el.edge_offset + len - 1e-9 * max_segment;
      for (auto m = static_cast<long>(std::ceil(el.edge_offset / max_segment + 1e-9));; ++m) {
        const double a = m * max_segment;
        if (a >= end) break;
        breaks.push_back((a - el.edge_offset) / len);
      }
    }
    breaks.push_back(1.0);
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const double t0 = breaks[b];
      const double t1 = breaks[b + 1];
      if (t1 - t0 <= 1e-14) continue;
      for (int q = 0; q < rule.order(); ++q) {
        const double t = t0 + (t1 - t0) * rule.nodes[q];
        nodes_.push_back(BoundaryNode{mesh.point_at(e, t), rule.weights[q] * (t1 - t0) * len, e, t});
      }
    }
  }
}

double integrate_boundary(const BoundaryQuadrature& quad, const std::function<double(const BoundaryNode&)>& f) {
  double sum = 0.0;
  for (const auto& node : quad.nodes()) {
    const double v = f(node);
    if (!std::isfinite(v)) throw NumericalError("non-finite boundary integrand at s = " + std::to_string(node.point.s));
    sum += node.weight * v;
  }
  return sum;
}

}  // namespace rbfmix
