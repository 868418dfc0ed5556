#pragma once

#include <string>
#include <string_view>

#include "rbfmix/geometry.hpp"

namespace rbfmix {

/// Wendland family member; C0 ↔ τ = 1.5 and C2 ↔ τ = 2.5 in two dimensions.
enum class Smoothness { C0, C2 };

/// Scaled compactly supported kernel Φ_r(x) = r^{-2} φ(|x| / r), supported on
/// the closed ball of radius r.
///
///   C0: φ(ρ) = (1 - ρ)²₊
///   C2: φ(ρ) = (1 - ρ)⁴₊ (4ρ + 1)
class WendlandKernel {
 public:
  WendlandKernel(Smoothness smoothness, double scale);

  /// "wendland_c0" or "wendland_c2"; anything else is a ConfigError.
  static WendlandKernel from_name(std::string_view name, double scale);

  Smoothness smoothness() const { return smoothness_; }
  double scale() const { return scale_; }
  double support_radius() const { return scale_; }
  /// Fourier decay exponent of the native space.
  double tau() const { return smoothness_ == Smoothness::C0 ? 1.5 : 2.5; }
  std::string name() const;

  /// Unscaled φ(ρ); throws std::domain_error for ρ < 0.
  double eval_univariate(double rho) const;
  /// φ'(ρ) for ρ ≥ 0 (one-sided at ρ = 0 for C0).
  double derivative_univariate(double rho) const;

  double eval(const Point& x, const Point& center) const;
  /// ∇Φ_r(x - center); zero at the center and outside the support.
  Eigen::Vector2d grad(const Point& x, const Point& center) const;

 private:
  Smoothness smoothness_;
  double scale_;
  double inv_r2_;
};

}  // namespace rbfmix
