#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ranges>
#include <string>
#include <vector>

#include "latc/lattice/gauss.hpp"
#include "latc/lattice/minima.hpp"
#include "latc/onsager.hpp"
#include "latc/parallel.hpp"
#include "latc/quadrature.hpp"
#include "latc/summation.hpp"

namespace latc {

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  for (b %= m; e; e >>= 1) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller–Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s && witness; ++i) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) witness = false;
    }
    if (witness) return false;
  }
  return true;
}

class HeckePrime {
 public:
  HeckePrime(std::uint64_t p, int d) : p_(p), d_(d) {
    if (d < 2) throw ValidationError("Hecke dimension must be >= 2, got " + std::to_string(d));
    if (!is_prime(p)) throw ValidationError("Hecke index " + std::to_string(p) + " is not prime");
    // (p^d − 1)/(p − 1) = 1 + p + … + p^{d−1}
    std::uint64_t block = 1;
    for (int k = 0; k < d; ++k) {
      block_sizes_.push_back(block);
      if (count_ > std::numeric_limits<std::uint64_t>::max() - block) throw ValidationError("Hecke neighbor count overflows 64 bits");
      count_ += block;
      if (k + 1 < d) {
        if (block > std::numeric_limits<std::uint64_t>::max() / p) throw ValidationError("Hecke neighbor count overflows 64 bits");
        block *= p;
      }
    }
  }

  std::uint64_t p() const noexcept { return p_; }
  int dim() const noexcept { return d_; }
  std::uint64_t neighbor_count() const noexcept { return count_; }
  /// Number of neighbors whose p sits at diagonal position k: p^k.
  std::uint64_t block_size(int k) const { return block_sizes_.at(static_cast<std::size_t>(k)); }

 private:
  std::uint64_t p_;
  int d_;
  std::uint64_t count_ = 0;
  std::vector<std::uint64_t> block_sizes_;
};

/// Upper-triangular integer matrix in row Hermite normal form with a single
/// diagonal entry p at position `pivot`; rows above the pivot carry offsets
/// i_j ∈ [0, p) in the pivot column. Its ROWS generate an index-p
/// sublattice of ℤ^d.
struct NeighborMatrix {
  IntMatrix entries;
  int pivot = 0;
  std::vector<long long> offsets;  // i_1 … i_pivot

  long long p() const { return entries(pivot, pivot); }
};

/// The neighbor at position `index` of the canonical order: by pivot
/// position, then lexicographic in (i_1, …, i_pivot).
inline NeighborMatrix neighbor_at(const HeckePrime& hp, std::uint64_t index) {
  if (index >= hp.neighbor_count()) throw ValidationError("neighbor index out of range");
  const int d = hp.dim();
  int k = 0;
  while (index >= hp.block_size(k)) {
    index -= hp.block_size(k);
    ++k;
  }
  NeighborMatrix n;
  n.entries = IntMatrix::Identity(d, d);
  n.pivot = k;
  n.entries(k, k) = static_cast<long long>(hp.p());
  n.offsets.assign(static_cast<std::size_t>(k), 0);
  for (int j = k - 1; j >= 0; --j) {
    n.offsets[static_cast<std::size_t>(j)] = static_cast<long long>(index % hp.p());
    index /= hp.p();
  }
  for (int j = 0; j < k; ++j) n.entries(j, k) = n.offsets[static_cast<std::size_t>(j)];
  return n;
}

/// Lazy stream over all (p^d − 1)/(p − 1) neighbors.
inline auto enumerate_neighbors(const HeckePrime& hp) {
  return std::views::iota(std::uint64_t{0}, hp.neighbor_count()) |
         std::views::transform([hp](std::uint64_t i) { return neighbor_at(hp, i); });
}

/// The neighbor as a unimodular basis: rows of n, as columns, over p^{1/d}.
inline LatticeBasis neighbor_lattice(const NeighborMatrix& n) {
  const auto d = n.entries.rows();
  const double scale = std::pow(static_cast<double>(n.p()), -1.0 / static_cast<double>(d));
  return LatticeBasis(scale * n.entries.transpose().cast<double>());
}

/// Estimator of T_c for a unimodular lattice; d = 2 defaults to Onsager.
using TcEstimator = std::function<double(const LatticeBasis&)>;

struct HeckeOptions {
  unsigned workers = 1;
  std::uint64_t chunk = 1u << 14;
};

/// One row of the optional inspection dump.
struct HeckeSample {
  std::uint64_t index;
  NeighborMatrix matrix;
  std::vector<double> minima;
  double tc;
};

namespace detail {

struct HeckeAccumulator {
  CompensatedSum sum;
  double min_lambda1 = std::numeric_limits<double>::infinity();
  double max_lambda1 = 0.0;

  void merge(const HeckeAccumulator& o) {
    sum.merge(o.sum);
    min_lambda1 = std::min(min_lambda1, o.min_lambda1);
    max_lambda1 = std::max(max_lambda1, o.max_lambda1);
  }
};

struct Sample2d {
  double lambda1, lambda2, tc;
};

// Exact integer reduction of the neighbor rows, then Onsager.
inline Sample2d sample_2d(std::uint64_t p, std::uint64_t index) {
  const auto pl = static_cast<long long>(p);
  Vec2<long long> a, b;
  if (index == 0) {
    a = {pl, 0};
    b = {0, 1};
  } else {
    a = {1, static_cast<long long>(index - 1)};
    b = {0, pl};
  }
  const auto r = gauss_reduce(a, b);
  const double s = 1.0 / std::sqrt(static_cast<double>(p));
  const double l1 = std::sqrt(static_cast<double>(dot(r.v1, r.v1))) * s;
  const double l2 = std::sqrt(static_cast<double>(dot(r.v2, r.v2))) * s;
  return {l1, l2, reduced_tc(l2 / l1) / l1};
}

}  // namespace detail

/// μ_p-average of T_c^{p_order} over the p-Hecke neighbors of ℤ^d, streamed
/// in fixed chunks and merged pairwise so the result is independent of the
/// worker count. d ≥ 3 needs an explicit estimator.
inline MomentEstimate hecke_moment(const HeckePrime& hp, double p_order, const TcEstimator& estimator = {},
                                   const HeckeOptions& opt = {}) {
  if (!(p_order > 0)) throw ValidationError("moment order must be positive, got " + std::to_string(p_order));
  if (hp.dim() != 2 && !estimator)
    throw UnsupportedError("Hecke moments for d = " + std::to_string(hp.dim()) + " need a user-supplied T_c estimator");
  if (opt.chunk == 0) throw ValidationError("chunk size must be positive");

  const std::uint64_t count = hp.neighbor_count();
  const std::uint64_t n_chunks = (count + opt.chunk - 1) / opt.chunk;
  auto parts = parallel_chunks<detail::HeckeAccumulator>(n_chunks, opt.workers, [&](std::size_t c) {
    detail::HeckeAccumulator acc;
    const std::uint64_t begin = c * opt.chunk, end = std::min(count, begin + opt.chunk);
    for (std::uint64_t i = begin; i < end; ++i) {
      double l1, tc;
      if (!estimator) {
        const auto s = detail::sample_2d(hp.p(), i);
        l1 = s.lambda1;
        tc = s.tc;
      } else {
        const auto basis = neighbor_lattice(neighbor_at(hp, i));
        l1 = successive_minima(basis).values.front();
        tc = estimator(basis);
      }
      acc.sum.add(std::pow(tc, p_order));
      acc.min_lambda1 = std::min(acc.min_lambda1, l1);
      acc.max_lambda1 = std::max(acc.max_lambda1, l1);
    }
    return acc;
  });
  const auto total = tree_merge(std::move(parts));

  MomentEstimate est;
  est.p = p_order;
  est.value = total.sum.value() / static_cast<double>(count);
  est.bulk_value = est.value;
  est.tail_value = 0.0;
  est.method = MomentMethod::hecke;
  est.diagnostics = io::Json{{"prime", hp.p()},
                             {"dim", hp.dim()},
                             {"neighbor_count", count},
                             {"min_lambda1", total.min_lambda1},
                             {"max_lambda1", total.max_lambda1}};
  return est;
}

/// First `row_cap` neighbors with their minima and T_c, in stream order.
inline std::vector<HeckeSample> hecke_samples(const HeckePrime& hp, std::uint64_t row_cap, const TcEstimator& estimator = {}) {
  if (hp.dim() != 2 && !estimator)
    throw UnsupportedError("Hecke samples for d = " + std::to_string(hp.dim()) + " need a user-supplied T_c estimator");
  std::vector<HeckeSample> rows;
  const std::uint64_t n = std::min(row_cap, hp.neighbor_count());
  for (std::uint64_t i = 0; i < n; ++i) {
    auto m = neighbor_at(hp, i);
    const auto basis = neighbor_lattice(m);
    const auto minima = successive_minima(basis);
    const double tc = estimator ? estimator(basis) : tc_of_lattice(basis).value;
    rows.push_back({i, std::move(m), minima.values, tc});
  }
  return rows;
}

}  // namespace latc
