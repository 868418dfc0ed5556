#include "rbfmix/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "rbfmix/errors.hpp"
#include "rbfmix/spatial_hash.hpp"

namespace rbfmix {

std::string to_json(const ParameterRecord& p) {
  std::ostringstream os;
  os << std::setprecision(17) << "{\"N\": " << p.N << ", \"M\": " << p.M << ", \"kappa\": " << p.kappa
     << ", \"h_X\": " << p.h_X << ", \"k\": " << p.k << ", \"r\": " << p.r << ", \"tau\": " << p.tau
     << ", \"p\": " << p.p << "}";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const ParameterRecord& p) {
  return os << "N=" << p.N << " M=" << p.M << " h_X=" << p.h_X << " k=" << p.k << " r=" << p.r
            << " tau=" << p.tau << " p=" << p.p << " kappa=" << p.kappa;
}

ParameterRecord Discretization::parameters(double kappa) const {
  ParameterRecord p;
  p.N = centers->size();
  p.M = space->dim();
  p.h_X = centers->fill_distance;
  p.k = space->mesh().mesh_size();
  p.r = kernel.scale();
  p.tau = kernel.tau();
  p.p = space->degree();
  p.kappa = kappa;
  return p;
}

std::vector<std::pair<std::size_t, std::size_t>> neighbor_pairs(std::span<const Point> points, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("neighbor radius must be positive");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  const SpatialHash hash(points, radius);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j : hash.within(points[i], radius))
      if (j >= i) pairs.emplace_back(i, j);
  return pairs;
}

namespace {

double box_distance(const Point& p, const BoundingBox& box) {
  return (p.cwiseMax(box.lo).cwiseMin(box.hi) - p).norm();
}

/// Centers whose open support ball meets the cell.
std::vector<std::size_t> centers_touching(const SpatialHash& hash, const std::vector<Point>& points,
                                          const BoundingBox& box, double r) {
  const Point mid = 0.5 * (box.lo + box.hi);
  std::vector<std::size_t> out = hash.within(mid, r + 0.5 * box.diagonal() + 1e-12);
  std::erase_if(out, [&](std::size_t i) { return box_distance(points[i], box) >= r; });
  return out;
}

void check_finite(double v, std::size_t i, std::size_t j, const char* block) {
  if (!std::isfinite(v)) {
    std::ostringstream msg;
    msg << "non-finite entry in " << block << " at (" << i << ", " << j << ")";
    throw NumericalError(msg.str());
  }
}

}  // namespace

SparseMatrix assemble_A(const CenterSet& centers, const WendlandKernel& kernel, double kappa,
                        const DomainQuadrature& quad) {
  if (kappa < 0.0) throw ConfigError("kappa must be nonnegative");
  const auto& pts = centers.points;
  const std::size_t n = pts.size();
  const double r = kernel.scale();

  // Upper-triangular sparsity pattern in CSR form.
  const auto pairs = neighbor_pairs(pts, 2.0 * r);
  std::vector<std::size_t> row_start(n + 1, 0);
  for (const auto& [i, j] : pairs) ++row_start[i + 1];
  for (std::size_t i = 0; i < n; ++i) row_start[i + 1] += row_start[i];
  std::vector<std::size_t> cols(pairs.size());
  for (std::size_t m = 0; m < pairs.size(); ++m) cols[m] = pairs[m].second;  // pairs are row-sorted
  std::vector<double> vals(pairs.size(), 0.0);

  const SpatialHash hash(pts, r);
  Eigen::MatrixXd gx, gy, phi;
  Eigen::VectorXd w;
  for (const auto& cell : quad.cells()) {
    const auto local = centers_touching(hash, pts, cell.box, r);
    if (local.empty()) continue;
    const auto nq = static_cast<Eigen::Index>(cell.count);
    const auto m = static_cast<Eigen::Index>(local.size());
    gx.resize(nq, m);
    gy.resize(nq, m);
    w.resize(nq);
    if (kappa > 0.0) phi.resize(nq, m);
    for (Eigen::Index q = 0; q < nq; ++q) {
      const Point& x = quad.nodes()[cell.first + q];
      w[q] = quad.weights()[cell.first + q];
      for (Eigen::Index a = 0; a < m; ++a) {
        const Eigen::Vector2d g = kernel.grad(x, pts[local[a]]);
        gx(q, a) = g.x();
        gy(q, a) = g.y();
        if (kappa > 0.0) phi(q, a) = kernel.eval(x, pts[local[a]]);
      }
    }
    Eigen::MatrixXd block = gx.transpose() * w.asDiagonal() * gx;
    block.noalias() += gy.transpose() * w.asDiagonal() * gy;
    if (kappa > 0.0) block.noalias() += kappa * (phi.transpose() * w.asDiagonal() * phi);

    for (Eigen::Index a = 0; a < m; ++a) {
      const std::size_t i = local[a];
      const auto first = cols.begin() + static_cast<std::ptrdiff_t>(row_start[i]);
      const auto last = cols.begin() + static_cast<std::ptrdiff_t>(row_start[i + 1]);
      for (Eigen::Index b = a; b < m; ++b) {  // local is ascending, so local[b] >= i
        const auto it = std::lower_bound(first, last, local[b]);
        if (it == last || *it != local[b]) continue;  // disjoint supports
        vals[static_cast<std::size_t>(it - cols.begin())] += block(a, b);
      }
    }
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * pairs.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t m = row_start[i]; m < row_start[i + 1]; ++m) {
      const std::size_t j = cols[m];
      check_finite(vals[m], i, j, "A");
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), vals[m]);
      if (j != i) triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), vals[m]);
    }
  }
  SparseMatrix A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  A.setFromTriplets(triplets.begin(), triplets.end());
  return A;
}

SparseMatrix assemble_B(const CenterSet& centers, const WendlandKernel& kernel, const MultiplierSpace& space,
                        const BoundaryQuadrature& quad) {
  const auto& pts = centers.points;
  const double r = kernel.scale();
  const int p = space.degree();
  const SpatialHash hash(pts, r);
  std::map<std::pair<std::size_t, std::size_t>, double> entries;
  std::vector<double> legendre(p + 1);
  for (const auto& node : quad.nodes()) {
    for (int i = 0; i <= p; ++i) legendre[i] = shifted_legendre(i, node.t);
    const std::size_t base = node.element * static_cast<std::size_t>(p + 1);
    for (std::size_t c : hash.within(node.point.x, r)) {
      const double v = node.weight * kernel.eval(node.point.x, pts[c]);
      for (int i = 0; i <= p; ++i) entries[{c, base + i}] += v * legendre[i];
    }
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(entries.size());
  for (const auto& [key, v] : entries) {
    check_finite(v, key.first, key.second, "B");
    triplets.emplace_back(static_cast<int>(key.first), static_cast<int>(key.second), v);
  }
  SparseMatrix B(static_cast<Eigen::Index>(pts.size()), static_cast<Eigen::Index>(space.dim()));
  B.setFromTriplets(triplets.begin(), triplets.end());
  return B;
}

Eigen::VectorXd assemble_F(const CenterSet& centers, const WendlandKernel& kernel, const DomainFunction& f,
                           const DomainQuadrature& quad) {
  const auto& pts = centers.points;
  const double r = kernel.scale();
  const SpatialHash hash(pts, r);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pts.size()));
  std::vector<double> fv;
  for (const auto& cell : quad.cells()) {
    const auto local = centers_touching(hash, pts, cell.box, r);
    if (local.empty()) continue;
    fv.resize(cell.count);
    for (std::size_t q = 0; q < cell.count; ++q) {
      const Point& x = quad.nodes()[cell.first + q];
      fv[q] = f(x);
      if (!std::isfinite(fv[q])) {
        std::ostringstream msg;
        msg << "non-finite source term at (" << x.x() << ", " << x.y() << ")";
        throw NumericalError(msg.str());
      }
    }
    for (std::size_t i : local) {
      double sum = 0.0;
      for (std::size_t q = 0; q < cell.count; ++q)
        sum += quad.weights()[cell.first + q] * fv[q] * kernel.eval(quad.nodes()[cell.first + q], pts[i]);
      F[static_cast<Eigen::Index>(i)] += sum;
    }
  }
  return F;
}

Eigen::VectorXd assemble_G(const MultiplierSpace& space, const BoundaryFunction& g, const BoundaryQuadrature& quad) {
  const int p = space.degree();
  Eigen::VectorXd G = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.dim()));
  for (const auto& node : quad.nodes()) {
    const double gv = g(node.point);
    if (!std::isfinite(gv)) throw NumericalError("non-finite boundary data at s = " + std::to_string(node.point.s));
    const std::size_t base = node.element * static_cast<std::size_t>(p + 1);
    for (int i = 0; i <= p; ++i)
      G[static_cast<Eigen::Index>(base + i)] += node.weight * gv * shifted_legendre(i, node.t);
  }
  return G;
}

SaddleSystem assemble_system(const Discretization& disc, double kappa, const DomainFunction& f,
                             const BoundaryFunction& g, const DomainQuadrature& quad,
                             const BoundaryQuadrature& boundary_quad) {
  SaddleSystem sys{disc, {}, {}, {}, {}, kappa, disc.parameters(kappa)};
  sys.A = assemble_A(*disc.centers, disc.kernel, kappa, quad);
  sys.B = assemble_B(*disc.centers, disc.kernel, *disc.space, boundary_quad);
  sys.F = assemble_F(*disc.centers, disc.kernel, f, quad);
  sys.G = assemble_G(*disc.space, g, boundary_quad);
  return sys;
}

void write_system(std::ostream& os, const SaddleSystem& system) {
  os << to_json(system.params) << '\n' << std::setprecision(17);
  auto dump = [&os](const char* name, const SparseMatrix& m) {
    os << name << ' ' << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
    for (Eigen::Index i = 0; i < m.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(m, i); it; ++it) os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
  };
  dump("A", system.A);
  dump("B", system.B);
  os << "F " << system.F.size() << '\n';
  for (Eigen::Index i = 0; i < system.F.size(); ++i) os << i << ' ' << system.F[i] << '\n';
  os << "G " << system.G.size() << '\n';
  for (Eigen::Index i = 0; i < system.G.size(); ++i) os << i << ' ' << system.G[i] << '\n';
}

}  // namespace rbfmix
