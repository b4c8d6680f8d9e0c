#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "latc/lattice/basis.hpp"

namespace latc {

/// Gram–Schmidt data of the columns of a basis: b*_i and μ_ij = ⟨b_i, b*_j⟩/‖b*_j‖².
struct GramSchmidt {
  Matrix orthogonal;  // columns b*_i
  Matrix mu;          // lower triangular, unit diagonal
  Vector sq_norms;    // ‖b*_i‖²

  explicit GramSchmidt(const Matrix& b) : orthogonal(b), mu(Matrix::Identity(b.cols(), b.cols())), sq_norms(b.cols()) {
    const auto d = b.cols();
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        mu(i, j) = b.col(i).dot(orthogonal.col(j)) / sq_norms(j);
        orthogonal.col(i) -= mu(i, j) * orthogonal.col(j);
      }
      sq_norms(i) = orthogonal.col(i).squaredNorm();
    }
  }
};

struct LllResult {
  Matrix basis;         // reduced columns, = input · transform
  IntMatrix transform;  // unimodular
};

/// Floating-point LLL on the columns of `b` with Lovász parameter `delta`.
/// Gram–Schmidt is recomputed after each change; this targets d ≤ 5.
inline LllResult lll_reduce(const Matrix& input, double delta = 0.99) {
  const auto d = input.cols();
  LllResult out{input, IntMatrix::Identity(d, d)};
  Matrix& b = out.basis;
  IntMatrix& u = out.transform;

  Eigen::Index k = 1;
  for (int guard = 0; k < d && guard < 100'000; ++guard) {
    GramSchmidt gs(b);
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const double q = std::round(gs.mu(k, j));
      if (q == 0.0) continue;
      b.col(k) -= q * b.col(j);
      u.col(k) -= static_cast<long long>(q) * u.col(j);
      gs = GramSchmidt(b);
    }
    const double m = gs.mu(k, k - 1);
    if (gs.sq_norms(k) >= (delta - m * m) * gs.sq_norms(k - 1)) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      u.col(k).swap(u.col(k - 1));
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
  return out;
}

/// All nonzero integer vectors x with ‖b·x‖² ≤ radius_sq (Fincke–Pohst).
/// Both x and −x are reported.
inline std::vector<IntVector> enumerate_short_vectors(const Matrix& b, double radius_sq) {
  const int d = static_cast<int>(b.cols());
  const GramSchmidt gs(b);
  std::vector<IntVector> found;
  IntVector x = IntVector::Zero(d);

  auto recurse = [&](auto&& self, int level, double partial) -> void {
    double center = 0.0;
    for (int j = level + 1; j < d; ++j) center -= gs.mu(j, level) * static_cast<double>(x(j));
    const double budget = radius_sq - partial;
    if (budget < 0) return;
    const double half_width = std::sqrt(budget / gs.sq_norms(level));
    const auto lo = static_cast<long long>(std::ceil(center - half_width));
    const auto hi = static_cast<long long>(std::floor(center + half_width));
    for (long long xi = lo; xi <= hi; ++xi) {
      x(level) = xi;
      const double off = static_cast<double>(xi) - center;
      const double next = partial + off * off * gs.sq_norms(level);
      if (next > radius_sq) continue;
      if (level == 0) {
        if (!x.isZero()) found.push_back(x);
      } else {
        self(self, level - 1, next);
      }
    }
    x(level) = 0;
  };
  recurse(recurse, d - 1, 0.0);
  return found;
}

}  // namespace latc
