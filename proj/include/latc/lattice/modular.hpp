#pragma once

#include <cmath>
#include <string>

#include "latc/lattice/basis.hpp"

namespace latc {

/// z = x + iy in the closed fundamental domain
/// F = { |x| ≤ ½, x² + y² ≥ 1 } of SL₂(ℤ) acting on the upper half plane.
class ModularPoint {
 public:
  static constexpr double boundary_slack = 1e-12;

  ModularPoint(double x, double y) : x_(x), y_(y) {
    if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw DomainError("modular point needs finite x and y > 0, got (" + std::to_string(x) + ", " + std::to_string(y) + ")");
    if (std::abs(x) > 0.5 + boundary_slack || x * x + y * y < 1.0 - boundary_slack)
      throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(y) + ") lies outside the fundamental domain");
  }

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  /// |z|
  double r() const noexcept { return std::hypot(x_, y_); }

 private:
  double x_;
  double y_;
};

/// The unimodular lattice y^{-1/2}·⟨1, z⟩, basis columns (y^{-½}, 0) and
/// (x·y^{-½}, y^{½}). Its minima are y^{-½} and y^{-½}·|z|.
inline LatticeBasis modular_point_to_lattice(const ModularPoint& z) {
  const double s = 1.0 / std::sqrt(z.y());
  Matrix g(2, 2);
  g << s, z.x() * s, 0.0, z.y() * s;
  return LatticeBasis(std::move(g));
}

}  // namespace latc
