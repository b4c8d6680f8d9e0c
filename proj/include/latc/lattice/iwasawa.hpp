#pragma once

#include <cmath>

#include "latc/lattice/basis.hpp"

namespace latc {

/// g = k·a·n with k ∈ SO_d, a positive diagonal and n upper unitriangular.
struct IwasawaFactors {
  Matrix k;
  Vector a;
  Matrix n;

  Matrix reconstruct() const { return k * a.asDiagonal() * n; }
};

// Gram–Schmidt on the columns in index order: a_1 is the length of the first
// column and n_{ij} = ⟨g_j, e*_i⟩ / a_i.
inline IwasawaFactors iwasawa(const LatticeBasis& g) {
  if (g.determinant() <= 0.0)
    throw DomainError("iwasawa needs det g > 0 (k must be a rotation); use orient_positive()");
  const int d = g.dim();
  Eigen::HouseholderQR<Matrix> qr(g.matrix());
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < d; ++i) {
    if (r(i, i) < 0) {
      r.row(i) *= -1.0;
      q.col(i) *= -1.0;
    }
  }
  IwasawaFactors f;
  f.k = std::move(q);
  f.a = r.diagonal();
  f.n = f.a.cwiseInverse().asDiagonal() * r;
  return f;
}

/// Membership in the Siegel set K·A_t·N_u: a_i ≤ t·a_{i+1} and |n_ij| ≤ u.
inline bool in_siegel_set(const IwasawaFactors& f, double t, double u) {
  const auto d = f.a.size();
  for (Eigen::Index i = 0; i + 1 < d; ++i)
    if (f.a(i) > t * f.a(i + 1)) return false;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j)
      if (std::abs(f.n(i, j)) > u) return false;
  return true;
}

}  // namespace latc
