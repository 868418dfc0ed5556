#include "rbfmix/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "rbfmix/errors.hpp"
#include "rbfmix/spatial_hash.hpp"

namespace rbfmix {

namespace {
constexpr double kInterpolationFloor = 1e-12;
}

ExactSolution exact_solution(std::string_view name) {
  ExactSolution ex;
  ex.name = std::string(name);
  if (name == "quadratic") {
    ex.u = [](const Point& x) { return x.x() * x.x() + x.y() * x.y(); };
    ex.grad_u = [](const Point& x) { return Eigen::Vector2d(2.0 * x.x(), 2.0 * x.y()); };
    ex.f = [](const Point&) { return -4.0; };
    return ex;
  }
  if (name == "trig") {
    constexpr double pi = std::numbers::pi;
    const double sh = std::sinh(pi);
    ex.u = [sh](const Point& x) { return std::sin(pi * x.x()) * std::sinh(pi * x.y()) / sh; };
    ex.grad_u = [sh](const Point& x) {
      return Eigen::Vector2d(pi * std::cos(pi * x.x()) * std::sinh(pi * x.y()) / sh,
                             pi * std::sin(pi * x.x()) * std::cosh(pi * x.y()) / sh);
    };
    ex.f = [](const Point&) { return 0.0; };
    return ex;
  }
  throw ConfigError("unknown exact solution '" + std::string(name) + "' (expected quadratic or trig)");
}

ConsistencyReport check_consistency(const ExactSolution& exact, const std::vector<Point>& points, double h) {
  ConsistencyReport rep;
  const Point ex(h, 0.0);
  const Point ey(0.0, h);
  for (const auto& x : points) {
    const double u0 = exact.u(x);
    const double lap =
        (exact.u(x + ex) + exact.u(x - ex) + exact.u(x + ey) + exact.u(x - ey) - 4.0 * u0) / (h * h);
    rep.max_pde_residual = std::max(rep.max_pde_residual, std::abs(-lap + exact.kappa * u0 - exact.f(x)));
    const Eigen::Vector2d fd((exact.u(x + ex) - exact.u(x - ex)) / (2.0 * h),
                             (exact.u(x + ey) - exact.u(x - ey)) / (2.0 * h));
    rep.max_gradient_error = std::max(rep.max_gradient_error, (fd - exact.grad_u(x)).cwiseAbs().maxCoeff());
  }
  return rep;
}

double h1_error(const MixedSolution& solution, const ExactSolution& exact, const DomainQuadrature& quad) {
  double sum = 0.0;
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Point& x = quad.nodes()[q];
    const double du = exact.u(x) - solution.evaluate_u(x);
    const Eigen::Vector2d dg = exact.grad_u(x) - solution.evaluate_grad_u(x);
    sum += quad.weights()[q] * (du * du + dg.squaredNorm());
  }
  return std::sqrt(sum);
}

double l2_boundary_error(const MixedSolution& solution, const ExactSolution& exact, const BoundaryQuadrature& quad) {
  const auto& space = *solution.discretization().space;
  const int p = space.degree();
  double sum = 0.0;
  for (const auto& node : quad.nodes()) {
    // Evaluate on the node's own element so element ends never switch owners.
    double lk = 0.0;
    for (int i = 0; i <= p; ++i)
      lk += solution.lambda_coeffs()[static_cast<Eigen::Index>(node.element * (p + 1) + i)] *
            shifted_legendre(i, node.t);
    const double d = exact.lambda(node.point) - lk;
    sum += node.weight * d * d;
  }
  return std::sqrt(sum);
}

void ConvergenceRecord::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.h_X > b.h_X; });
}

void ConvergenceRecord::write_csv(std::ostream& os) const {
  os << kConvergenceCsvHeader << '\n' << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.N << ',' << r.M << ',' << r.h_X << ',' << r.k << ',' << r.r << ',' << r.tau << ',' << r.p << ','
       << r.h1_error << ',' << r.l2_lambda_error << ',' << r.cond_estimate << ',' << r.runtime_s << '\n';
  }
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs matching samples");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::domain_error("log-log fit needs positive values");
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw std::domain_error("log-log fit needs distinct parameter values");
  return (n * sxy - sx * sy) / denom;
}

double fit_rate(const ConvergenceRecord& record, ErrorColumn column, RateParameter parameter, std::size_t window) {
  if (record.rows.size() < 3) throw std::invalid_argument("rate fit needs at least three rows");
  window = std::clamp<std::size_t>(window, 3, record.rows.size());
  ConvergenceRecord sorted = record;
  sorted.sort_rows();
  std::vector<double> xs, ys;
  for (std::size_t i = sorted.rows.size() - window; i < sorted.rows.size(); ++i) {
    const auto& row = sorted.rows[i];
    xs.push_back(parameter == RateParameter::FillDistance ? row.h_X : row.k);
    ys.push_back(column == ErrorColumn::H1 ? row.h1_error : row.l2_lambda_error);
  }
  return loglog_slope(xs, ys);
}

NativeInterpolant interpolate_native(const std::function<double(const Point&)>& v, const CenterSet& centers,
                                     const WendlandKernel& kernel) {
  const auto& pts = centers.points;
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : neighbor_pairs(pts, kernel.scale())) {
    const double kij = kernel.eval(pts[i], pts[j]);
    K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = kij;
    K(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = kij;
  }
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) rhs[i] = v(pts[static_cast<std::size_t>(i)]);

  const Eigen::LLT<Eigen::MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "native-space interpolation matrix is not numerically positive definite (q_X/r = "
        << centers.separation / kernel.scale() << ")";
    throw ConditioningError(msg.str());
  }
  NativeInterpolant out;
  out.coeffs = llt.solve(rhs);
  out.coeffs += llt.solve(rhs - K * out.coeffs);
  out.max_center_residual = n > 0 ? (K * out.coeffs - rhs).cwiseAbs().maxCoeff() : 0.0;
  if (!out.coeffs.allFinite()) throw ConditioningError("native-space interpolation produced non-finite values");
  return out;
}

InterpolationStudy interpolation_rate_study(const std::function<double(const Point&)>& v, Smoothness family,
                                            double r, const std::vector<int>& n_per_side, int points_per_cell) {
  const Polygon square = Polygon::unit_square();
  const WendlandKernel kernel(family, r);
  InterpolationStudy study;
  for (int n : n_per_side) {
    const CenterSet centers = generate_grid_centers(square, n);
    const NativeInterpolant interp = interpolate_native(v, centers, kernel);
    const DomainQuadrature quad(square, auto_cell_size(centers.fill_distance, r, centers.grid_spacing),
                                points_per_cell);
    const SpatialHash hash(centers.points, r);
    double sum = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Point& x = quad.nodes()[q];
      double iv = 0.0;
      for (std::size_t j : hash.within(x, r))
        iv += interp.coeffs[static_cast<Eigen::Index>(j)] * kernel.eval(x, centers.points[j]);
      const double d = v(x) - iv;
      sum += quad.weights()[q] * d * d;
    }
    study.rows.push_back({n, centers.size(), centers.fill_distance, r, kernel.tau(), std::sqrt(sum),
                          interp.max_center_residual});
  }
  std::stable_sort(study.rows.begin(), study.rows.end(), [](const auto& a, const auto& b) { return a.h_X > b.h_X; });
  study.at_precision_floor =
      !study.rows.empty() &&
      std::all_of(study.rows.begin(), study.rows.end(), [](const auto& row) { return row.l2_error < kInterpolationFloor; });
  if (study.rows.size() >= 3 && !study.at_precision_floor) {
    std::vector<double> xs, ys;
    for (std::size_t i = study.rows.size() - 3; i < study.rows.size(); ++i) {
      xs.push_back(study.rows[i].h_X);
      ys.push_back(study.rows[i].l2_error);
    }
    study.rate = loglog_slope(xs, ys);
  } else {
    study.rate = std::numeric_limits<double>::quiet_NaN();
  }
  return study;
}

double estimate_infsup(const Eigen::MatrixXd& B, const Eigen::MatrixXd& h1_gram, const Eigen::MatrixXd& weight) {
  if (h1_gram.rows() != B.rows() || h1_gram.cols() != B.rows() || weight.rows() != B.cols() ||
      weight.cols() != B.cols())
    throw std::invalid_argument("estimate_infsup: dimension mismatch");
  const Eigen::LLT<Eigen::MatrixXd> g1(h1_gram);
  if (g1.info() != Eigen::Success) throw ConditioningError("H1 Gram matrix is not positive definite");
  const Eigen::LLT<Eigen::MatrixXd> w(weight);
  if (w.info() != Eigen::Success) throw ConditioningError("multiplier weight matrix is not positive definite");
  // S = Bᵀ G₁⁻¹ B = Yᵀ Y with Y = L⁻¹ B.
  const Eigen::MatrixXd Y = g1.matrixL().solve(B);
  Eigen::MatrixXd S = Y.transpose() * Y;
  S = 0.5 * (S + S.transpose());
  const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(S, weight, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("inf-sup eigenvalue solve failed");
  const double lmin = eig.eigenvalues().minCoeff();
  return std::sqrt(std::max(0.0, lmin));
}

Eigen::MatrixXd infsup_multiplier_weight(const MultiplierSpace& space) {
  return (space.mesh().mesh_size() * space.gram_diagonal()).asDiagonal();
}

}  // namespace rbfmix
