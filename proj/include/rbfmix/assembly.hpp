#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "rbfmix/geometry.hpp"
#include "rbfmix/kernels.hpp"
#include "rbfmix/multiplier_space.hpp"
#include "rbfmix/quadrature.hpp"

namespace rbfmix {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using DomainFunction = std::function<double(const Point&)>;

/// Discretization parameters reported alongside every system and solve.
struct ParameterRecord {
  std::size_t N = 0;
  std::size_t M = 0;
  double h_X = 0.0;
  double k = 0.0;
  double r = 0.0;
  double tau = 0.0;
  int p = 0;
  double kappa = 0.0;
};

std::ostream& operator<<(std::ostream& os, const ParameterRecord& params);
/// One-line JSON object with N, M, kappa, h_X, k, r, tau, p.
std::string to_json(const ParameterRecord& params);

/// Trial space H_{X,r} plus multiplier space Λ_k on a polygon.
struct Discretization {
  std::shared_ptr<const Polygon> polygon;
  std::shared_ptr<const CenterSet> centers;
  WendlandKernel kernel;
  std::shared_ptr<const MultiplierSpace> space;

  ParameterRecord parameters(double kappa) const;
};

/// Block system [[A, B], [Bᵀ, 0]] [u; λ] = [F; G].
struct SaddleSystem {
  Discretization disc;
  SparseMatrix A;
  SparseMatrix B;
  Eigen::VectorXd F;
  Eigen::VectorXd G;
  double kappa = 0.0;
  ParameterRecord params;
};

/// Unordered pairs (i, j), i <= j, with |x_i - x_j| < radius, sorted.
std::vector<std::pair<std::size_t, std::size_t>> neighbor_pairs(std::span<const Point> points, double radius);

/// A_ij = ∫_Ω ∇Φ_i·∇Φ_j + κ Φ_i Φ_j. Only pairs with |x_i - x_j| < 2r are
/// stored; the upper triangle is integrated and mirrored.
SparseMatrix assemble_A(const CenterSet& centers, const WendlandKernel& kernel, double kappa,
                        const DomainQuadrature& quad);

/// B_ij = ∫_Γ Φ_i μ_j ds.
SparseMatrix assemble_B(const CenterSet& centers, const WendlandKernel& kernel, const MultiplierSpace& space,
                        const BoundaryQuadrature& quad);

Eigen::VectorXd assemble_F(const CenterSet& centers, const WendlandKernel& kernel, const DomainFunction& f,
                           const DomainQuadrature& quad);

Eigen::VectorXd assemble_G(const MultiplierSpace& space, const BoundaryFunction& g, const BoundaryQuadrature& quad);

SaddleSystem assemble_system(const Discretization& disc, double kappa, const DomainFunction& f,
                             const BoundaryFunction& g, const DomainQuadrature& quad,
                             const BoundaryQuadrature& boundary_quad);

/// Coordinate dump: a JSON header line, then "A", "B" blocks of "i j value"
/// lines and "F", "G" blocks of "i value" lines, 17 significant digits.
void write_system(std::ostream& os, const SaddleSystem& system);

}  // namespace rbfmix
