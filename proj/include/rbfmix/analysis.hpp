#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rbfmix/assembly.hpp"
#include "rbfmix/solver.hpp"

namespace rbfmix {

/// Manufactured solution of -Δu + κu = f in Ω, u = g on Γ, with λ = ∇u·n.
struct ExactSolution {
  std::string name;
  std::function<double(const Point&)> u;
  std::function<Eigen::Vector2d(const Point&)> grad_u;
  std::function<double(const Point&)> f;
  double kappa = 0.0;
  /// Sobolev regularity index of u on the domains we ship (1 < δ <= 2).
  double delta = 2.0;

  double g(const BoundaryPoint& b) const { return u(b.x); }
  double lambda(const BoundaryPoint& b) const { return grad_u(b.x).dot(b.normal); }
};

/// "quadratic": u = x₁² + x₂², f = -4.
/// "trig": u = sin(πx₁) sinh(πx₂) / sinh(π), f = 0.
ExactSolution exact_solution(std::string_view name);

/// Largest deviation of f from -Δu + κu (five-point stencil with step h) and
/// of grad_u from central differences of u, over the given points.
struct ConsistencyReport {
  double max_pde_residual = 0.0;
  double max_gradient_error = 0.0;
};
ConsistencyReport check_consistency(const ExactSolution& exact, const std::vector<Point>& points, double h = 1e-4);

/// (∫_Ω |u - u_X|² + |∇u - ∇u_X|²)^{1/2}.
double h1_error(const MixedSolution& solution, const ExactSolution& exact, const DomainQuadrature& quad);
/// (∫_Γ (λ - λ_k)²)^{1/2}.
double l2_boundary_error(const MixedSolution& solution, const ExactSolution& exact, const BoundaryQuadrature& quad);

struct ConvergenceRow {
  std::size_t N = 0;
  std::size_t M = 0;
  double h_X = 0.0;
  double k = 0.0;
  double r = 0.0;
  double tau = 0.0;
  int p = 0;
  double h1_error = 0.0;
  double l2_lambda_error = 0.0;
  double cond_estimate = 0.0;
  double runtime_s = 0.0;
};

enum class ErrorColumn { H1, L2Lambda };
enum class RateParameter { FillDistance, MeshSize };

/// Rows of a refinement study plus any rows that failed.
struct ConvergenceRecord {
  std::vector<ConvergenceRow> rows;
  std::vector<std::string> failures;

  /// Orders rows by h_X descending (coarse to fine).
  void sort_rows();
  /// "N,M,h_X,k,r,tau,p,h1_error,l2_lambda_error,cond_estimate,runtime_s"
  void write_csv(std::ostream& os) const;
};

inline constexpr std::string_view kConvergenceCsvHeader =
    "N,M,h_X,k,r,tau,p,h1_error,l2_lambda_error,cond_estimate,runtime_s";

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Slope over the last `window` rows (sorted coarse to fine). Needs at least
/// three rows and positive errors (std::domain_error otherwise).
double fit_rate(const ConvergenceRecord& record, ErrorColumn column, RateParameter parameter, std::size_t window = 3);

/// Coefficients of the native-space interpolant I_X v and the largest
/// absolute mismatch at the centers.
struct NativeInterpolant {
  Eigen::VectorXd coeffs;
  double max_center_residual = 0.0;
};

/// Solves Σ_j c_j Φ_r(x_i - x_j) = v(x_i) by Cholesky; ConditioningError when
/// the factorization breaks down.
NativeInterpolant interpolate_native(const std::function<double(const Point&)>& v, const CenterSet& centers,
                                     const WendlandKernel& kernel);

struct InterpolationRow {
  int n_per_side = 0;
  std::size_t N = 0;
  double h_X = 0.0;
  double r = 0.0;
  double tau = 0.0;
  double l2_error = 0.0;
  double max_center_residual = 0.0;
};

struct InterpolationStudy {
  std::vector<InterpolationRow> rows;
  /// L₂(Ω) rate against h_X over the finest three grids; NaN with fewer rows.
  double rate = 0.0;
  /// Set when all errors sit at the quadrature/rounding floor (rate meaningless).
  bool at_precision_floor = false;
};

/// Interpolates v on unit-square tensor grids with a fixed kernel scale and
/// measures ‖v - I_X v‖_{L₂(Ω)} with `points_per_cell`-point tensor Gauss on
/// cells of size auto_cell_size(h_X, r).
InterpolationStudy interpolation_rate_study(const std::function<double(const Point&)>& v, Smoothness family,
                                            double r, const std::vector<int>& n_per_side,
                                            int points_per_cell = kDefaultPointsPerCell);

/// Discrete inf-sup constant
///   β = min_μ max_v vᵀBμ / (‖v‖_{G₁} ‖μ‖_W),
/// the square root of the smallest eigenvalue of Bᵀ G₁⁻¹ B μ = β² W μ.
/// ConditioningError if G₁ or W is not positive definite.
double estimate_infsup(const Eigen::MatrixXd& B, const Eigen::MatrixXd& h1_gram, const Eigen::MatrixXd& weight);

/// k · diag(∫_Γ μ_j²): the mesh-weighted L₂(Γ) Gram used as the H^{-1/2}(Γ)
/// surrogate.
Eigen::MatrixXd infsup_multiplier_weight(const MultiplierSpace& space);

}  // namespace rbfmix
