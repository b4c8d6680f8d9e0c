#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>

#include "latc/errors.hpp"

namespace latc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

/// |det| must exceed this times (largest column norm)^d.
inline constexpr double rank_tolerance = 1e-12;
inline constexpr double reconstruction_tolerance = 1e-10;

/// A full-rank lattice g·ℤ^d, stored as the d×d matrix g whose columns are
/// the basis vectors. Immutable once constructed.
class LatticeBasis {
 public:
  explicit LatticeBasis(Matrix columns) : g_(std::move(columns)) {
    if (g_.rows() != g_.cols()) throw ValidationError("basis must be square, got " + std::to_string(g_.rows()) + "x" + std::to_string(g_.cols()));
    if (g_.rows() < 2) throw ValidationError("basis dimension must be >= 2");
    if (!g_.allFinite()) throw ValidationError("basis has non-finite entries");
    const double scale = g_.colwise().norm().maxCoeff();
    det_ = g_.determinant();
    if (!(std::abs(det_) > rank_tolerance * std::pow(scale, static_cast<double>(dim()))))
      throw RankDeficientError("basis columns are linearly dependent (|det| = " + std::to_string(std::abs(det_)) + ")");
  }

  static LatticeBasis identity(int d) { return LatticeBasis(Matrix::Identity(d, d)); }

  int dim() const noexcept { return static_cast<int>(g_.rows()); }
  const Matrix& matrix() const noexcept { return g_; }
  Vector column(int i) const { return g_.col(i); }
  double determinant() const noexcept { return det_; }

  double covolume() const noexcept { return std::abs(det_); }

  /// Same lattice shape rescaled to covolume 1.
  LatticeBasis unimodularize() const { return scaled(std::pow(covolume(), -1.0 / dim())); }

  LatticeBasis scaled(double c) const { return LatticeBasis(c * g_); }

  /// k·g, e.g. a rotation of the lattice.
  LatticeBasis left_multiplied(const Matrix& k) const { return LatticeBasis(k * g_); }

  /// g·U; for unimodular integer U this is the same lattice.
  LatticeBasis change_of_basis(const IntMatrix& u) const { return LatticeBasis(g_ * u.cast<double>()); }

  /// Negates the last column if det < 0 so the basis lies in GL_d^+.
  LatticeBasis orient_positive() const {
    if (det_ > 0) return *this;
    Matrix g = g_;
    g.col(dim() - 1) *= -1.0;
    return LatticeBasis(std::move(g));
  }

 private:
  Matrix g_;
  double det_ = 0.0;
};

inline double covolume(const LatticeBasis& b) { return b.covolume(); }

}  // namespace latc
