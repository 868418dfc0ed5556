#include "rbfmix/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "rbfmix/errors.hpp"

namespace rbfmix {

WendlandKernel::WendlandKernel(Smoothness smoothness, double scale)
    : smoothness_(smoothness), scale_(scale), inv_r2_(1.0 / (scale * scale)) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("kernel scale r must be positive");
}

WendlandKernel WendlandKernel::from_name(std::string_view name, double scale) {
  if (name == "wendland_c0") return WendlandKernel(Smoothness::C0, scale);
  if (name == "wendland_c2") return WendlandKernel(Smoothness::C2, scale);
  throw ConfigError("unknown kernel '" + std::string(name) + "' (expected wendland_c0 or wendland_c2)");
}

std::string WendlandKernel::name() const {
  return smoothness_ == Smoothness::C0 ? "wendland_c0" : "wendland_c2";
}

double WendlandKernel::eval_univariate(double rho) const {
  if (rho < 0.0) throw std::domain_error("kernel radius argument must be nonnegative");
  if (rho >= 1.0) return 0.0;
  const double u = 1.0 - rho;
  if (smoothness_ == Smoothness::C0) return u * u;
  const double u2 = u * u;
  return u2 * u2 * (4.0 * rho + 1.0);
}

double WendlandKernel::derivative_univariate(double rho) const {
  if (rho < 0.0) throw std::domain_error("kernel radius argument must be nonnegative");
  if (rho >= 1.0) return 0.0;
  const double u = 1.0 - rho;
  if (smoothness_ == Smoothness::C0) return -2.0 * u;
  return -20.0 * rho * u * u * u;
}

double WendlandKernel::eval(const Point& x, const Point& center) const {
  const double rho = (x - center).norm() / scale_;
  if (rho >= 1.0) return 0.0;
  const double u = 1.0 - rho;
  if (smoothness_ == Smoothness::C0) return inv_r2_ * u * u;
  const double u2 = u * u;
  return inv_r2_ * u2 * u2 * (4.0 * rho + 1.0);
}

Eigen::Vector2d WendlandKernel::grad(const Point& x, const Point& center) const {
  const Eigen::Vector2d d = x - center;
  const double dist = d.norm();
  const double rho = dist / scale_;
  if (rho >= 1.0 || dist == 0.0) return Eigen::Vector2d::Zero();
  const double u = 1.0 - rho;
  if (smoothness_ == Smoothness::C0) {
    // r^{-3} φ'(ρ) d/|d| with φ'(ρ) = -2(1-ρ)
    return (-2.0 * u * inv_r2_ / (scale_ * dist)) * d;
  }
  // φ'(ρ)/ρ = -20(1-ρ)³, so the gradient is r^{-4} (-20)(1-ρ)³ d.
  return (-20.0 * u * u * u * inv_r2_ * inv_r2_) * d;
}

}  // namespace rbfmix
