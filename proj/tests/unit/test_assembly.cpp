#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "cases.hpp"
#include "oracles.hpp"
#include "rbfmix/assembly.hpp"
#include "rbfmix/errors.hpp"

namespace rbfmix {
namespace {

constexpr double kPi = std::numbers::pi;

using testing::Case;
using testing::grid_case;
using testing::single_center;

TEST(Assembly, SingleInteriorCenterMatchesClosedForm) {
  // ∫|∇Φ_r|² = 2π r⁻⁴ ∫₀¹ φ'(ρ)² ρ dρ = 2π r⁻⁴ · 10/21 for C2; mass 2π r⁻² · 7/198.
  const double r = 0.2;
  const WendlandKernel k(Smoothness::C2, r);
  const CenterSet cs = single_center(Point(0.5, 0.5));
  const DomainQuadrature quad(Polygon::unit_square(), 0.0125);
  const double stiff = 2 * kPi * (10.0 / 21.0) / std::pow(r, 4);
  const double mass = 2 * kPi * (7.0 / 198.0) / (r * r);
  const SparseMatrix A0 = assemble_A(cs, k, 0.0, quad);
  const SparseMatrix A3 = assemble_A(cs, k, 3.0, quad);
  EXPECT_NEAR(A0.coeff(0, 0), stiff, 1e-8 * stiff);
  EXPECT_NEAR(A3.coeff(0, 0), stiff + 3.0 * mass, 1e-8 * stiff);

  const DomainQuadrature fine(Polygon::unit_square(), 0.00125);
  EXPECT_NEAR(A0.coeff(0, 0), oracle::dense_A(cs, k, 0.0, fine)(0, 0), 1e-8 * stiff);
}

TEST(Assembly, C0SingleCenterClosedForm) {
  const double r = 0.2;
  const WendlandKernel k(Smoothness::C0, r);
  const CenterSet cs = single_center(Point(0.5, 0.5));
  const DomainQuadrature quad(Polygon::unit_square(), 0.0125);
  const double stiff = 2 * kPi * (1.0 / 3.0) / std::pow(r, 4);
  EXPECT_NEAR(assemble_A(cs, k, 0.0, quad).coeff(0, 0), stiff, 1e-4 * stiff);
}

TEST(Assembly, SparseMatchesDenseOnSameRule) {
  for (Smoothness s : {Smoothness::C0, Smoothness::C2}) {
    const Case c = grid_case(5, 0.3, s, 3);
    const SparseMatrix A = assemble_A(*c.disc.centers, c.disc.kernel, 0.7, *c.quad);
    const Eigen::MatrixXd ref = oracle::dense_A(*c.disc.centers, c.disc.kernel, 0.7, *c.quad);
    EXPECT_LT(oracle::relative_max_diff(Eigen::MatrixXd(A), ref), 1e-13);
    const SparseMatrix B = assemble_B(*c.disc.centers, c.disc.kernel, *c.disc.space, *c.bquad);
    const Eigen::MatrixXd refB = oracle::dense_B(*c.disc.centers, c.disc.kernel, *c.disc.space, *c.bquad);
    EXPECT_LT(oracle::relative_max_diff(Eigen::MatrixXd(B), refB), 1e-13);
  }
}

TEST(Assembly, BMatchesDenseOnRefinedBoundaryRule) {
  const Case c = grid_case(5, 0.3, Smoothness::C2, 3);
  const Case fine = grid_case(5, 0.3, Smoothness::C2, 3, 0, 10);
  const SparseMatrix B = assemble_B(*c.disc.centers, c.disc.kernel, *c.disc.space, *c.bquad);
  const Eigen::MatrixXd refB = oracle::dense_B(*c.disc.centers, c.disc.kernel, *c.disc.space, *fine.bquad);
  EXPECT_LT(oracle::relative_max_diff(Eigen::MatrixXd(B), refB), 1e-8);
}

TEST(Assembly, KappaEntersOnlyThroughMass) {
  const Case c = grid_case(7, 0.3, Smoothness::C2, 2);
  const Eigen::MatrixXd A0 = assemble_A(*c.disc.centers, c.disc.kernel, 0.0, *c.quad);
  const Eigen::MatrixXd A1 = assemble_A(*c.disc.centers, c.disc.kernel, 1.0, *c.quad);
  const Eigen::MatrixXd A2 = assemble_A(*c.disc.centers, c.disc.kernel, 2.0, *c.quad);
  EXPECT_LT(oracle::relative_max_diff(A2 - A0, 2.0 * (A1 - A0)), 1e-12);
  EXPECT_THROW(assemble_A(*c.disc.centers, c.disc.kernel, -1.0, *c.quad), ConfigError);
}

TEST(Assembly, ASymmetricPositiveSemidefiniteAndBanded) {
  const Case c = grid_case(9, 0.2, Smoothness::C2, 3);
  const SparseMatrix A = assemble_A(*c.disc.centers, c.disc.kernel, 0.0, *c.quad);
  const Eigen::MatrixXd D(A);
  EXPECT_EQ((D - D.transpose()).cwiseAbs().maxCoeff(), 0.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(D);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-12 * eig.eigenvalues().maxCoeff());
  const auto& pts = c.disc.centers->points;
  for (int i = 0; i < A.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(A, i); it; ++it)
      EXPECT_LT((pts[i] - pts[it.col()]).norm(), 2 * 0.2);
}

TEST(Assembly, NeighborPairsMatchAllPairs) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(300);
  for (auto& p : pts) p = Point(u(rng), u(rng));
  const double radius = 0.13;
  std::vector<std::pair<std::size_t, std::size_t>> ref;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i; j < pts.size(); ++j)
      if ((pts[i] - pts[j]).norm() < radius) ref.emplace_back(i, j);
  EXPECT_EQ(neighbor_pairs(pts, radius), ref);
  EXPECT_THROW(neighbor_pairs(pts, 0.0), std::invalid_argument);
}

TEST(Assembly, BRowsVanishAwayFromBoundary) {
  const Case c = grid_case(9, 0.2, Smoothness::C2, 3);
  const Eigen::MatrixXd B = assemble_B(*c.disc.centers, c.disc.kernel, *c.disc.space, *c.bquad);
  const auto& pts = c.disc.centers->points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = Polygon::unit_square().distance_to_boundary(pts[i]);
    if (d >= 0.2) EXPECT_EQ(B.row(i).cwiseAbs().maxCoeff(), 0.0) << i;
  }
}

TEST(Assembly, BRowSumIsBoundaryIntegralOfKernel) {
  // With p = 0 the basis sums to one, so Σ_j B_ij = ∫_Γ Φ_i = 2/(3r) for a
  // C2 center sitting on an edge away from corners.
  const double r = 0.2;
  auto poly = std::make_shared<const Polygon>(Polygon::unit_square());
  auto mesh = std::make_shared<const BoundaryMesh>(partition_boundary_counts(*poly, std::vector<int>{5, 5, 5, 5}));
  const MultiplierSpace space(mesh, 0);
  const BoundaryQuadrature bq(*mesh, QuadRule1D::gauss_legendre(16), 0.05);
  const CenterSet cs = single_center(Point(0.5, 0.0));
  const Eigen::MatrixXd B = assemble_B(cs, WendlandKernel(Smoothness::C2, r), space, bq);
  EXPECT_NEAR(B.row(0).sum(), 2.0 / (3.0 * r), 1e-12);
  // Element [0.4, 0.6] on the bottom edge: ∫_{-0.1}^{0.1} Φ_r(t) dt.
  const QuadRule1D g = QuadRule1D::gauss_legendre(40);
  double ref = 0.0;
  for (int q = 0; q < g.order(); ++q) {
    const double t = 0.1 * g.nodes[q];
    ref += 2 * 0.1 * g.weights[q] * (1 - t / r) * (1 - t / r) * (1 - t / r) * (1 - t / r) * (4 * t / r + 1) / (r * r);
  }
  EXPECT_NEAR(B(0, 2), ref, 1e-12);
}

TEST(Assembly, BHasFullColumnRank) {
  for (int degree : {0, 1}) {
    const Case c = grid_case(9, 0.2, Smoothness::C2, 2, degree);
    const Eigen::MatrixXd B = assemble_B(*c.disc.centers, c.disc.kernel, *c.disc.space, *c.bquad);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
    EXPECT_GT(svd.singularValues().minCoeff(), 1e-8 * svd.singularValues().maxCoeff()) << degree;
  }
}

TEST(Assembly, LoadVectors) {
  const double r = 0.2;
  const WendlandKernel k(Smoothness::C2, r);
  const CenterSet cs = single_center(Point(0.5, 0.5));
  const DomainQuadrature quad(Polygon::unit_square(), 0.05);
  const Eigen::VectorXd F = assemble_F(cs, k, [](const Point&) { return -4.0; }, quad);
  EXPECT_NEAR(F(0), -4.0 * kPi / 7.0, 1e-7);
  const DomainQuadrature fine(Polygon::unit_square(), 0.005);
  EXPECT_NEAR(assemble_F(cs, k, [](const Point&) { return -4.0; }, fine)(0), -4.0 * kPi / 7.0, 1e-10);

  auto poly = std::make_shared<const Polygon>(Polygon::unit_square());
  auto mesh = std::make_shared<const BoundaryMesh>(partition_boundary_counts(*poly, std::vector<int>{1, 2, 3, 4}));
  const BoundaryQuadrature bq(*mesh, QuadRule1D::gauss_legendre(16));
  const MultiplierSpace p0(mesh, 0), p1(mesh, 1);
  const Eigen::VectorXd G0 = assemble_G(p0, [](const BoundaryPoint&) { return 1.0; }, bq);
  for (std::size_t e = 0; e < mesh->size(); ++e) EXPECT_NEAR(G0(e), mesh->element(e).length(), 1e-14);
  const Eigen::VectorXd G1 = assemble_G(p1, [](const BoundaryPoint&) { return 1.0; }, bq);
  for (std::size_t j = 0; j < p1.dim(); ++j)
    EXPECT_NEAR(G1(j), p1.local_degree(j) == 0 ? mesh->element(p1.element_of_index(j)).length() : 0.0, 1e-14);
}

TEST(Assembly, SystemIsLinearInData) {
  const Case c = grid_case(5, 0.3, Smoothness::C2, 2);
  auto f = [](const Point& x) { return x.x() - 2 * x.y(); };
  auto g = [](const BoundaryPoint& b) { return b.x.squaredNorm(); };
  const SaddleSystem s1 = assemble_system(c.disc, 0.0, f, g, *c.quad, *c.bquad);
  const SaddleSystem s3 = assemble_system(
      c.disc, 0.0, [&](const Point& x) { return 3 * f(x); }, [&](const BoundaryPoint& b) { return 3 * g(b); },
      *c.quad, *c.bquad);
  EXPECT_LT((s3.F - 3 * s1.F).norm(), 1e-12 * s3.F.norm());
  EXPECT_LT((s3.G - 3 * s1.G).norm(), 1e-12 * s3.G.norm());
  EXPECT_EQ(s1.params.N, 25u);
  EXPECT_EQ(s1.params.M, 8u);
  EXPECT_DOUBLE_EQ(s1.params.k, 0.5);
  EXPECT_DOUBLE_EQ(s1.params.tau, 2.5);
}

TEST(Assembly, DumpFormat) {
  const Case c = grid_case(5, 0.3, Smoothness::C2, 2);
  const SaddleSystem s = assemble_system(
      c.disc, 0.0, [](const Point&) { return -4.0; }, [](const BoundaryPoint& b) { return b.x.squaredNorm(); },
      *c.quad, *c.bquad);
  std::ostringstream os;
  write_system(os, s);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line.front(), '{');
  EXPECT_NE(line.find("\"N\": 25"), std::string::npos);
  EXPECT_NE(line.find("\"M\": 8"), std::string::npos);

  std::string tag;
  std::size_t rows = 0, cols = 0, nnz = 0;
  is >> tag >> rows >> cols >> nnz;
  EXPECT_EQ(tag, "A");
  EXPECT_EQ(rows, 25u);
  EXPECT_EQ(nnz, static_cast<std::size_t>(s.A.nonZeros()));
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(25, 25);
  for (std::size_t t = 0; t < nnz; ++t) {
    std::size_t i, j;
    double v;
    is >> i >> j >> v;
    A(i, j) = v;
  }
  EXPECT_EQ((A - Eigen::MatrixXd(s.A)).cwiseAbs().maxCoeff(), 0.0);
  is >> tag >> rows >> cols >> nnz;
  EXPECT_EQ(tag, "B");
  EXPECT_EQ(cols, 8u);
}

}  // namespace
}  // namespace rbfmix
