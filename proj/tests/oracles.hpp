#pragma once

// Independent reference computations used only by the tests. None of these
// call into the routines they check.

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

struct Minima2 {
  double lambda1, lambda2;
};

// Successive minima of the lattice spanned by columns (a, b) by scanning all
// coefficient pairs in [−box, box]².
inline Minima2 box_minima_2d(std::array<double, 2> a, std::array<double, 2> b, int box) {
  double best1 = INFINITY;
  std::array<double, 2> v1{};
  for (int m = -box; m <= box; ++m)
    for (int n = -box; n <= box; ++n) {
      if (!m && !n) continue;
      const double x = m * a[0] + n * b[0], y = m * a[1] + n * b[1];
      const double q = x * x + y * y;
      if (q < best1) {
        best1 = q;
        v1 = {x, y};
      }
    }
  double best2 = INFINITY;
  for (int m = -box; m <= box; ++m)
    for (int n = -box; n <= box; ++n) {
      const double x = m * a[0] + n * b[0], y = m * a[1] + n * b[1];
      const double cross = v1[0] * y - v1[1] * x;
      if (std::abs(cross) <= 1e-9 * (std::abs(v1[0]) + std::abs(v1[1])) * (std::abs(x) + std::abs(y))) continue;
      best2 = std::min(best2, x * x + y * y);
    }
  return {std::sqrt(best1), std::sqrt(best2)};
}

// Same oracle with exact integer arithmetic; returns squared minima.
inline std::pair<long long, long long> box_minima_2d_int(std::array<long long, 2> a, std::array<long long, 2> b, int box) {
  long long best1 = -1;
  std::array<long long, 2> v1{};
  for (int m = -box; m <= box; ++m)
    for (int n = -box; n <= box; ++n) {
      if (!m && !n) continue;
      const long long x = m * a[0] + n * b[0], y = m * a[1] + n * b[1];
      const long long q = x * x + y * y;
      if (best1 < 0 || q < best1) {
        best1 = q;
        v1 = {x, y};
      }
    }
  long long best2 = -1;
  for (int m = -box; m <= box; ++m)
    for (int n = -box; n <= box; ++n) {
      const long long x = m * a[0] + n * b[0], y = m * a[1] + n * b[1];
      if (v1[0] * y - v1[1] * x == 0) continue;
      const long long q = x * x + y * y;
      if (best2 < 0 || q < best2) best2 = q;
    }
  return {best1, best2};
}

// Successive minima in any dimension d ≤ 3 over a coefficient box: sort all
// box vectors by length and pick greedily while the rank grows (rank by
// integer-coefficient elimination is exact for the coefficient vectors).
inline std::vector<double> box_minima(const std::vector<std::vector<double>>& cols, int box) {
  const int d = static_cast<int>(cols.size());
  std::vector<std::pair<double, std::vector<long long>>> vecs;
  std::vector<long long> c(d, -box);
  while (true) {
    if (std::any_of(c.begin(), c.end(), [](long long v) { return v != 0; })) {
      double q = 0;
      for (int i = 0; i < d; ++i) {
        double s = 0;
        for (int k = 0; k < d; ++k) s += c[k] * cols[k][i];
        q += s * s;
      }
      vecs.emplace_back(q, c);
    }
    int k = 0;
    while (k < d && ++c[k] > box) c[k++] = -box;
    if (k == d) break;
  }
  std::sort(vecs.begin(), vecs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::vector<double>> chosen;
  std::vector<double> out;
  auto rank_of = [&](std::vector<std::vector<double>> rows) {
    int r = 0;
    for (int col = 0; col < d && r < static_cast<int>(rows.size()); ++col) {
      int piv = -1;
      for (int i = r; i < static_cast<int>(rows.size()); ++i)
        if (std::abs(rows[i][col]) > 1e-9) piv = i;
      if (piv < 0) continue;
      std::swap(rows[r], rows[piv]);
      for (int i = 0; i < static_cast<int>(rows.size()); ++i)
        if (i != r) {
          const double f = rows[i][col] / rows[r][col];
          for (int k = 0; k < d; ++k) rows[i][k] -= f * rows[r][k];
        }
      ++r;
    }
    return r;
  };
  for (const auto& [q, coef] : vecs) {
    auto trial = chosen;
    trial.emplace_back(coef.begin(), coef.end());
    if (rank_of(trial) == static_cast<int>(trial.size())) {
      chosen = std::move(trial);
      out.push_back(std::sqrt(q));
      if (static_cast<int>(out.size()) == d) break;
    }
  }
  return out;
}

// Row-style Hermite normal forms of determinant n in dimension d: upper
// triangular, positive diagonal with product n, and every entry above a
// diagonal entry reduced into [0, that entry). Each index-n sublattice of ℤ^d
// is the row span of exactly one of them.
inline std::vector<std::vector<std::vector<long long>>> hnf_of_determinant(long long n, int d) {
  std::vector<std::vector<std::vector<long long>>> out;
  std::vector<long long> diag(d, 1);
  auto with_diag = [&] {
    std::vector<std::pair<int, int>> free;
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < j; ++i) free.emplace_back(i, j);
    std::vector<long long> val(free.size(), 0);
    while (true) {
      std::vector<std::vector<long long>> h(d, std::vector<long long>(d, 0));
      for (int i = 0; i < d; ++i) h[i][i] = diag[i];
      for (std::size_t f = 0; f < free.size(); ++f) h[free[f].first][free[f].second] = val[f];
      out.push_back(h);
      std::size_t f = 0;
      while (f < free.size() && ++val[f] >= diag[free[f].second]) val[f++] = 0;
      if (f == free.size()) break;
    }
  };
  auto split = [&](auto&& self, int pos, long long rest) -> void {
    if (pos == d - 1) {
      diag[pos] = rest;
      with_diag();
      return;
    }
    for (long long a = 1; a <= rest; ++a)
      if (rest % a == 0) {
        diag[pos] = a;
        self(self, pos + 1, rest / a);
      }
  };
  split(split, 0, n);
  return out;
}

// The functional ℤ^d → 𝔽_p, normalized to leading coefficient 1, that
// vanishes on every given row; found by brute force. Empty if none does.
inline std::vector<long long> annihilating_functional(const std::vector<std::vector<long long>>& rows, long long p) {
  const int d = static_cast<int>(rows.front().size());
  std::vector<long long> f(d, 0);
  while (true) {
    int lead = -1;
    for (int i = 0; i < d; ++i)
      if (f[i]) {
        lead = i;
        break;
      }
    if (lead >= 0 && f[lead] == 1) {
      bool kills = true;
      for (const auto& r : rows) {
        long long s = 0;
        for (int i = 0; i < d; ++i) s += f[i] * (((r[i] % p) + p) % p);
        if (s % p) {
          kills = false;
          break;
        }
      }
      if (kills) return f;
    }
    int k = 0;
    while (k < d && ++f[k] == p) f[k++] = 0;
    if (k == d) break;
  }
  return {};
}

// Independent count of index-p subgroups of ℤ^d: they correspond to the
// kernels of nonzero functionals ℤ^d → ℤ/p up to scaling, i.e. points of
// projective space over 𝔽_p. Counted by brute force over functionals.
inline long long count_index_p_by_functionals(long long p, int d) {
  std::set<std::vector<long long>> normalized;
  std::vector<long long> f(d, 0);
  while (true) {
    int lead = -1;
    for (int i = 0; i < d; ++i)
      if (f[i]) {
        lead = i;
        break;
      }
    if (lead >= 0) {
      long long inv = 1;
      while (inv * f[lead] % p != 1) ++inv;
      std::vector<long long> g(d);
      for (int i = 0; i < d; ++i) g[i] = f[i] * inv % p;
      normalized.insert(g);
    }
    int k = 0;
    while (k < d && ++f[k] == p) f[k++] = 0;
    if (k == d) break;
  }
  return static_cast<long long>(normalized.size());
}

// Exact Gibbs distribution of the periodic Ising model on the given box,
// E = −Σ_i Σ_k J_k σ_i σ_{i+e_k}, states indexed with bit s of the index
// giving the spin at linear site s (axis 0 fastest); bit set ⇒ spin −1.
inline std::vector<double> gibbs_distribution(const std::vector<int>& dims, const std::vector<double>& j, double beta) {
  std::size_t n = 1;
  for (int e : dims) n *= static_cast<std::size_t>(e);
  const std::size_t states = std::size_t{1} << n;
  std::vector<double> w(states);
  for (std::size_t s = 0; s < states; ++s) {
    double e = 0;
    for (std::size_t site = 0; site < n; ++site) {
      std::vector<int> c(dims.size());
      std::size_t rest = site;
      for (std::size_t a = 0; a < dims.size(); ++a) {
        c[a] = static_cast<int>(rest % dims[a]);
        rest /= dims[a];
      }
      const int si = (s >> site) & 1 ? -1 : 1;
      for (std::size_t a = 0; a < dims.size(); ++a) {
        auto nc = c;
        nc[a] = (nc[a] + 1) % dims[a];
        std::size_t idx = 0, stride = 1;
        for (std::size_t b = 0; b < dims.size(); ++b) {
          idx += nc[b] * stride;
          stride *= dims[b];
        }
        const int sj = (s >> idx) & 1 ? -1 : 1;
        e -= j[a] * si * sj;
      }
    }
    w[s] = std::exp(-beta * e);
  }
  const double z = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= z;
  return w;
}

struct ChiSquare {
  double statistic;
  int dof;
  double p_value;
};

// Pearson χ² of observed counts against expected probabilities; adjacent
// bins (in order of increasing expectation) are pooled until each holds at
// least 5 expected counts.
inline ChiSquare chi_square(const std::vector<long long>& observed, const std::vector<double>& probs) {
  const double total = static_cast<double>(std::accumulate(observed.begin(), observed.end(), 0LL));
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return probs[a] < probs[b]; });
  std::vector<std::pair<double, double>> bins;  // (observed, expected)
  double o = 0, e = 0;
  for (auto i : order) {
    o += static_cast<double>(observed[i]);
    e += probs[i] * total;
    if (e >= 5) {
      bins.emplace_back(o, e);
      o = e = 0;
    }
  }
  if (e > 0) {
    if (bins.empty())
      bins.emplace_back(o, e);
    else {
      bins.back().first += o;
      bins.back().second += e;
    }
  }
  double stat = 0;
  for (auto [ob, ex] : bins) stat += (ob - ex) * (ob - ex) / ex;
  const int dof = static_cast<int>(bins.size()) - 1;
  return {stat, dof, dof > 0 ? boost::math::gamma_q(dof / 2.0, stat / 2.0) : 1.0};
}

// Onsager's condition evaluated directly, for residual checks.
inline double onsager_residual(double j1, double j2, double t) { return std::sinh(2 * j1 / t) * std::sinh(2 * j2 / t) - 1.0; }

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace oracle
