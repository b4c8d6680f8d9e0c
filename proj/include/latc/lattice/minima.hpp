#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "latc/lattice/basis.hpp"
#include "latc/lattice/gauss.hpp"
#include "latc/lattice/lll.hpp"

namespace latc {

/// Largest dimension for which exact minima are computed.
inline constexpr int max_minima_dim = 5;

/// λ_1 ≤ … ≤ λ_d together with witnesses: column i of `witnesses` is a lattice
/// vector of length λ_i, column i of `coefficients` its integer coordinates
/// in the basis the minima were computed from.
struct SuccessiveMinima {
  std::vector<double> values;
  Matrix witnesses;
  IntMatrix coefficients;

  int dim() const noexcept { return static_cast<int>(values.size()); }
};

/// Per-axis Ising couplings, all strictly positive.
class BondWeights {
 public:
  explicit BondWeights(std::vector<double> j) : j_(std::move(j)) {
    if (j_.empty()) throw ValidationError("bond weights must be non-empty");
    for (std::size_t k = 0; k < j_.size(); ++k)
      if (!(j_[k] > 0.0) || !std::isfinite(j_[k]))
        throw DomainError("bond weight J[" + std::to_string(k) + "] must be positive and finite, got " + std::to_string(j_[k]));
  }
  BondWeights(std::initializer_list<double> j) : BondWeights(std::vector<double>(j)) {}

  int dim() const noexcept { return static_cast<int>(j_.size()); }
  double operator[](std::size_t k) const { return j_[k]; }
  const std::vector<double>& values() const noexcept { return j_; }

  friend bool operator==(const BondWeights&, const BondWeights&) = default;

 private:
  std::vector<double> j_;
};

namespace detail {

// Independence test for a candidate against already chosen vectors.
inline bool extends_rank(const Matrix& chosen, int count, const Vector& v) {
  if (count == 0) return v.norm() > 0;
  Matrix m(v.size(), count + 1);
  m.leftCols(count) = chosen.leftCols(count);
  m.col(count) = v;
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  qr.setThreshold(1e-9);
  return qr.rank() == count + 1;
}

struct Candidate {
  IntVector coeff;  // in the caller's basis
  Vector v;
  double sq_norm;
};

// Short vectors of the lattice sorted by length, ties (relative 1e-12) broken
// by lexicographic order of the coefficient vector.
inline std::vector<Candidate> sorted_short_vectors(const LatticeBasis& basis, double radius_sq) {
  const auto lll = lll_reduce(basis.matrix());
  std::vector<Candidate> cands;
  for (const IntVector& x : enumerate_short_vectors(lll.basis, radius_sq)) {
    Candidate c;
    c.coeff = lll.transform * x;
    c.v = basis.matrix() * c.coeff.cast<double>();
    c.sq_norm = c.v.squaredNorm();
    cands.push_back(std::move(c));
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.sq_norm < b.sq_norm; });
  auto lex_less = [](const Candidate& a, const Candidate& b) {
    return std::lexicographical_compare(a.coeff.data(), a.coeff.data() + a.coeff.size(), b.coeff.data(), b.coeff.data() + b.coeff.size());
  };
  for (std::size_t i = 0; i < cands.size();) {
    std::size_t j = i + 1;
    while (j < cands.size() && cands[j].sq_norm <= cands[i].sq_norm * (1 + 1e-12)) ++j;
    std::sort(cands.begin() + static_cast<long>(i), cands.begin() + static_cast<long>(j), lex_less);
    i = j;
  }
  return cands;
}

inline double lll_radius_sq(const LatticeBasis& basis) {
  const auto lll = lll_reduce(basis.matrix());
  return lll.basis.colwise().squaredNorm().maxCoeff() * (1 + 1e-9);
}

inline SuccessiveMinima minima_2d(const LatticeBasis& basis) {
  const Matrix& g = basis.matrix();
  const auto r = gauss_reduce(Vec2<double>{g(0, 0), g(1, 0)}, Vec2<double>{g(0, 1), g(1, 1)});
  SuccessiveMinima m;
  m.values = {std::sqrt(dot(r.v1, r.v1)), std::sqrt(dot(r.v2, r.v2))};
  m.witnesses.resize(2, 2);
  m.witnesses << r.v1.x, r.v2.x, r.v1.y, r.v2.y;
  m.coefficients.resize(2, 2);
  m.coefficients << r.transform[0][0], r.transform[1][0], r.transform[0][1], r.transform[1][1];
  return m;
}

// Bareiss fraction-free determinant of a small integer matrix.
inline long long int_determinant(IntMatrix a) {
  const auto n = a.rows();
  long long sign = 1, prev = 1;
  for (Eigen::Index k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      Eigen::Index p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.row(k).swap(a.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// True iff the integer columns of `c` (d × k) extend to a basis of ℤ^d,
// i.e. the gcd of all k×k minors is 1.
inline bool is_primitive(const IntMatrix& c) {
  const int d = static_cast<int>(c.rows());
  const int k = static_cast<int>(c.cols());
  std::vector<int> rows(k);
  std::iota(rows.begin(), rows.end(), 0);
  long long g = 0;
  while (true) {
    IntMatrix minor(k, k);
    for (int i = 0; i < k; ++i) minor.row(i) = c.row(rows[i]);
    g = std::gcd(g, std::abs(int_determinant(minor)));
    if (g == 1) return true;
    int i = k - 1;
    while (i >= 0 && rows[i] == d - k + i) --i;
    if (i < 0) break;
    ++rows[i];
    for (int j = i + 1; j < k; ++j) rows[j] = rows[j - 1] + 1;
  }
  return g == 1;
}

}  // namespace detail

/// Exact Euclidean successive minima. d = 2 goes through Gauss reduction;
/// 3 ≤ d ≤ 5 uses LLL (δ = 0.99) and enumerates every vector inside the
/// largest LLL basis length, which bounds λ_d.
inline SuccessiveMinima successive_minima(const LatticeBasis& basis) {
  const int d = basis.dim();
  if (d > max_minima_dim) throw UnsupportedError("successive minima supported for d <= " + std::to_string(max_minima_dim) + ", got d = " + std::to_string(d));
  if (d == 2) return detail::minima_2d(basis);

  const auto cands = detail::sorted_short_vectors(basis, detail::lll_radius_sq(basis));
  SuccessiveMinima m;
  m.witnesses.resize(d, d);
  m.coefficients.resize(d, d);
  int picked = 0;
  for (const auto& c : cands) {
    if (picked == d) break;
    if (!detail::extends_rank(m.witnesses, picked, c.v)) continue;
    m.values.push_back(std::sqrt(c.sq_norm));
    m.witnesses.col(picked) = c.v;
    m.coefficients.col(picked) = c.coeff;
    ++picked;
  }
  if (picked != d) throw ConvergenceError("enumeration found only " + std::to_string(picked) + " independent vectors");
  return m;
}

/// Greedy Minkowski-reduced basis: v_i is a shortest vector such that
/// v_1…v_i extends to a basis. Satisfies λ_i ≤ ‖v_i‖ ≤ 2^{i−1}λ_i.
inline LatticeBasis minkowski_reduce(const LatticeBasis& basis) {
  const int d = basis.dim();
  if (d > max_minima_dim) throw UnsupportedError("minkowski_reduce supported for d <= " + std::to_string(max_minima_dim));
  if (d == 2) return gauss_reduce(basis);
  double radius_sq = detail::lll_radius_sq(basis);
  for (int attempt = 0; attempt < 8; ++attempt, radius_sq *= 4) {
    const auto cands = detail::sorted_short_vectors(basis, radius_sq);
    IntMatrix chosen(d, 0);
    Matrix out(d, d);
    for (const auto& c : cands) {
      if (chosen.cols() == d) break;
      IntMatrix trial(d, chosen.cols() + 1);
      trial.leftCols(chosen.cols()) = chosen;
      trial.col(chosen.cols()) = c.coeff;
      if (!detail::is_primitive(trial)) continue;
      out.col(chosen.cols()) = c.v;
      chosen = std::move(trial);
    }
    if (chosen.cols() == d) return LatticeBasis(std::move(out));
  }
  throw ConvergenceError("minkowski_reduce: no extendable vectors found");
}

inline BondWeights bond_weights(const SuccessiveMinima& minima) {
  std::vector<double> j;
  j.reserve(minima.values.size());
  for (double l : minima.values) j.push_back(1.0 / l);
  return BondWeights(std::move(j));
}

}  // namespace latc
