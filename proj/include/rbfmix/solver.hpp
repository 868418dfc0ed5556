#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include <Eigen/Core>

#include "rbfmix/assembly.hpp"
#include "rbfmix/errors.hpp"
#include "rbfmix/spatial_hash.hpp"

namespace rbfmix {

/// The saddle-point matrix is numerically singular (stability condition
/// violated or redundant multiplier space).
class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(const std::string& what, ParameterRecord params)
      : NumericalError(what), params_(params) {}
  const ParameterRecord& parameters() const { return params_; }

 private:
  ParameterRecord params_;
};

inline constexpr double kPivotTolerance = 1e-14;

/// Galerkin pair (u_X, λ_k) with evaluation helpers.
///
/// The block system a(u,v) + b(v,m) = F(v) yields a multiplier m = -∂u/∂n, so
/// λ_k (the approximation of the outward normal derivative) is stored as -m.
/// multiplier_coeffs() returns the raw block unknowns.
class MixedSolution {
 public:
  MixedSolution(Discretization disc, Eigen::VectorXd u_coeffs, Eigen::VectorXd lambda_coeffs,
                double residual_norm = 0.0, double cond_estimate = 0.0);

  const Discretization& discretization() const { return disc_; }
  const Eigen::VectorXd& u_coeffs() const { return u_; }
  /// Coefficients of λ_k ≈ ∂u/∂n in the multiplier basis.
  const Eigen::VectorXd& lambda_coeffs() const { return lambda_; }
  /// Unknowns of the block system, equal to -lambda_coeffs().
  Eigen::VectorXd multiplier_coeffs() const { return -lambda_; }
  /// Scaled block residual ‖[Au + Bλ - F; Bᵀu - G]‖ / (‖F‖ + ‖G‖ + 1).
  double residual_norm() const { return residual_norm_; }
  /// 1-norm condition estimate of the saddle-point matrix.
  double cond_estimate() const { return cond_estimate_; }

  double evaluate_u(const Point& x) const;
  Eigen::Vector2d evaluate_grad_u(const Point& x) const;
  double evaluate_lambda(double s) const;

 private:
  Discretization disc_;
  Eigen::VectorXd u_;
  Eigen::VectorXd lambda_;
  double residual_norm_;
  double cond_estimate_;
  std::shared_ptr<const SpatialHash> hash_;
};

/// Dense LU with partial pivoting of the full (N+M)×(N+M) indefinite matrix.
/// Throws SingularSystemError when a pivot falls below 1e-14·max|entry|.
MixedSolution solve(const SaddleSystem& system);

/// Text dump: parameter record, geometry, kernel, multiplier mesh and both
/// coefficient vectors (17 significant digits); read_solution restores it.
void write_solution(std::ostream& os, const MixedSolution& solution, const ParameterRecord& params);
MixedSolution read_solution(std::istream& is);

}  // namespace rbfmix
