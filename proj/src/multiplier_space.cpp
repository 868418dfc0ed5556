#include "rbfmix/multiplier_space.hpp"

#include <stdexcept>
#include <string>

#include "rbfmix/errors.hpp"
#include "rbfmix/quadrature.hpp"

namespace rbfmix {

double shifted_legendre(int n, double t) {
  const double x = 2.0 * t - 1.0;
  if (n == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + 1.0) * x * p - k * p_prev) / (k + 1.0);
    p_prev = p;
    p = next;
  }
  return p;
}

MultiplierSpace::MultiplierSpace(std::shared_ptr<const BoundaryMesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  if (!mesh_) throw std::invalid_argument("MultiplierSpace needs a boundary mesh");
  if (degree < 0 || degree > kMaxDegree)
    throw ConfigError("multiplier degree must be in [0, " + std::to_string(kMaxDegree) + "]");
}

double MultiplierSpace::eval_basis(std::size_t index, double s) const {
  if (index >= dim()) throw std::out_of_range("multiplier basis index out of range");
  const std::size_t e = element_of_index(index);
  if (mesh_->locate(s) != e) return 0.0;
  const BoundaryElement& el = mesh_->element(e);
  const double t = (s - el.s_start) / el.length();
  return shifted_legendre(local_degree(index), t);
}

double MultiplierSpace::eval(const Eigen::VectorXd& coeffs, double s) const {
  if (static_cast<std::size_t>(coeffs.size()) != dim())
    throw std::invalid_argument("multiplier coefficient vector has wrong length");
  const std::size_t e = mesh_->locate(s);
  const BoundaryElement& el = mesh_->element(e);
  const double t = (s - el.s_start) / el.length();
  double v = 0.0;
  for (int i = 0; i <= degree_; ++i) v += coeffs[e * (degree_ + 1) + i] * shifted_legendre(i, t);
  return v;
}

Eigen::VectorXd MultiplierSpace::gram_diagonal() const {
  Eigen::VectorXd d(dim());
  for (std::size_t j = 0; j < dim(); ++j)
    d[j] = mesh_->element(element_of_index(j)).length() / (2.0 * local_degree(j) + 1.0);
  return d;
}

Eigen::VectorXd MultiplierSpace::project_l2(const BoundaryFunction& g, int quad_order) const {
  if (quad_order < degree_ + 1) throw std::invalid_argument("projection quadrature order must be at least p + 1");
  const QuadRule1D rule = QuadRule1D::gauss_legendre(quad_order);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim());
  for (std::size_t e = 0; e < mesh_->size(); ++e) {
    for (int q = 0; q < rule.order(); ++q) {
      const double gv = g(mesh_->point_at(e, rule.nodes[q]));
      for (int i = 0; i <= degree_; ++i)
        c[e * (degree_ + 1) + i] += rule.weights[q] * gv * shifted_legendre(i, rule.nodes[q]);
    }
    for (int i = 0; i <= degree_; ++i) c[e * (degree_ + 1) + i] *= 2.0 * i + 1.0;
  }
  return c;
}

}  // namespace rbfmix
