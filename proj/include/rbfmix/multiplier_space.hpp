#pragma once

#include <cstddef>
#include <functional>
#include <memory>

#include <Eigen/Core>

#include "rbfmix/geometry.hpp"

namespace rbfmix {

using BoundaryFunction = std::function<double(const BoundaryPoint&)>;

/// Shifted Legendre polynomial P_n(2t - 1) on [0, 1]; ∫₀¹ P_m P_n = δ_mn / (2n + 1).
double shifted_legendre(int n, double t);

/// Discontinuous piecewise polynomials of degree p on a boundary mesh (Λ_k).
/// Global index = element * (p + 1) + local degree.
class MultiplierSpace {
 public:
  static constexpr int kMaxDegree = 3;

  MultiplierSpace(std::shared_ptr<const BoundaryMesh> mesh, int degree);

  const BoundaryMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const BoundaryMesh> mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  std::size_t dim() const { return mesh_->size() * static_cast<std::size_t>(degree_ + 1); }
  std::size_t element_of_index(std::size_t index) const { return index / (degree_ + 1); }
  int local_degree(std::size_t index) const { return static_cast<int>(index % (degree_ + 1)); }

  /// Throws std::out_of_range for a bad index.
  double eval_basis(std::size_t index, double s) const;
  /// Σ_j c_j μ_j(s).
  double eval(const Eigen::VectorXd& coeffs, double s) const;

  /// ∫_Γ μ_j² ds = |T| / (2i + 1); the Gram matrix is diagonal.
  Eigen::VectorXd gram_diagonal() const;

  /// Best L₂(Γ) approximation of g, element by element with a quad_order-point
  /// Gauss rule; quad_order must be at least p + 1.
  Eigen::VectorXd project_l2(const BoundaryFunction& g, int quad_order) const;

 private:
  std::shared_ptr<const BoundaryMesh> mesh_;
  int degree_;
};

}  // namespace rbfmix
