#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "latc/ising/rng.hpp"
#include "latc/lattice/minima.hpp"

namespace latc::ising {

enum class Start { ordered, random };

/// Ising spins on a periodic box with extents n_1 × … × n_d (d ∈ {2, 3}) and
/// per-axis couplings J_k, at h = 0:
///   E(σ) = −Σ_i Σ_k J_k σ_i σ_{i+e_k}.
/// Extents must be even so the two checkerboard colours do not touch.
/// The energy is tracked through integer bond sums S_k = Σ_i σ_i σ_{i+e_k}.
class SpinLattice {
 public:
  SpinLattice(std::vector<int> dims, BondWeights j, double beta, Start start = Start::ordered, std::uint64_t seed = 0)
      : dims_(std::move(dims)), j_(std::move(j)), beta_(beta) {
    const int d = dim();
    if (d < 2 || d > 3) throw UnsupportedError("Ising simulation supports d = 2 or 3, got d = " + std::to_string(d));
    if (j_.dim() != d) throw ValidationError("bond weights have " + std::to_string(j_.dim()) + " entries for a " + std::to_string(d) + "-dimensional lattice");
    for (int n : dims_)
      if (n < 2 || n % 2) throw ValidationError("lattice extents must be even and >= 2, got " + std::to_string(n));
    if (!(beta >= 0) || !std::isfinite(beta)) throw DomainError("beta must be finite and >= 0");

    n_sites_ = std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
    build_neighbors();
    spins_.assign(n_sites_, 1);
    if (start == Start::random) {
      const CounterRng rng(seed, 0x5eed);
      for (std::size_t i = 0; i < n_sites_; ++i) spins_[i] = rng.bits(i) & 1 ? 1 : -1;
    }
    recompute();
    set_beta(beta);
  }

  int dim() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return n_sites_; }
  const BondWeights& couplings() const noexcept { return j_; }
  double beta() const noexcept { return beta_; }
  const std::vector<std::int8_t>& spins() const noexcept { return spins_; }
  std::int8_t spin(std::size_t i) const { return spins_[i]; }

  void set_spin(std::size_t i, std::int8_t s) {
    spins_.at(i) = s >= 0 ? 1 : -1;
    recompute();
  }

  void set_beta(double beta) {
    beta_ = beta;
    // key = Σ_k 3^k·(σ n_k + 2)/2 with n_k ∈ {−2, 0, 2}; ΔE = 2 Σ_k J_k σ n_k
    const int keys = dim() == 2 ? 9 : 27;
    for (int key = 0; key < keys; ++key) {
      double de = 0.0;
      for (int k = 0, rest = key; k < dim(); ++k, rest /= 3) de += 2.0 * j_[k] * (2.0 * (rest % 3) - 2.0);
      accept_[key] = de <= 0 ? 1.0 : std::exp(-beta_ * de);
    }
  }

  /// One checkerboard sweep: every even site, then every odd site, each
  /// flipped with probability min(1, exp(−βΔE)). Site i in sweep t draws
  /// counter t·|Λ| + i.
  void sweep(const CounterRng& rng, std::uint64_t sweep_index) {
    const int d = dim();
    const std::uint64_t base = sweep_index * n_sites_;
    for (const auto& colour : parity_) {
      for (std::uint32_t i : colour) {
        const std::int8_t s = spins_[i];
        const std::uint32_t* nb = &neighbors_[static_cast<std::size_t>(i) * 2 * d];
        int key = 0;
        std::array<int, 3> local{};
        for (int k = 0, w = 1; k < d; ++k, w *= 3) {
          local[k] = s * (spins_[nb[2 * k]] + spins_[nb[2 * k + 1]]);
          key += w * ((local[k] + 2) / 2);
        }
        if (rng.uniform(base + i) < accept_[key]) {
          spins_[i] = static_cast<std::int8_t>(-s);
          magnetization_ -= 2 * s;
          for (int k = 0; k < d; ++k) bond_sums_[k] -= 2 * local[k];
        }
      }
    }
  }

  /// E(σ) from the tracked bond sums.
  double energy() const noexcept {
    double e = 0.0;
    for (int k = 0; k < dim(); ++k) e -= j_[k] * static_cast<double>(bond_sums_[k]);
    return e;
  }

  /// E(σ) recomputed from scratch.
  double recompute_energy() const {
    double e = 0.0;
    const int d = dim();
    for (std::size_t i = 0; i < n_sites_; ++i)
      for (int k = 0; k < d; ++k) e -= j_[k] * spins_[i] * spins_[neighbors_[i * 2 * d + 2 * k]];
    return e;
  }

  double magnetization_density() const noexcept { return static_cast<double>(magnetization_) / static_cast<double>(n_sites_); }
  double energy_density() const noexcept { return energy() / static_cast<double>(n_sites_); }

  /// Mixed-radix index, axis 0 fastest.
  std::size_t index(const std::vector<int>& coord) const {
    std::size_t idx = 0;
    for (int k = dim() - 1; k >= 0; --k) idx = idx * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(coord[k]);
    return idx;
  }

 private:
  void build_neighbors() {
    const int d = dim();
    neighbors_.resize(n_sites_ * 2 * d);
    parity_[0].clear();
    parity_[1].clear();
    std::vector<int> c(d, 0);
    for (std::size_t i = 0; i < n_sites_; ++i) {
      int par = 0;
      for (int k = 0; k < d; ++k) {
        par += c[k];
        auto shifted = c;
        shifted[k] = (c[k] + 1) % dims_[k];
        neighbors_[i * 2 * d + 2 * k] = static_cast<std::uint32_t>(index(shifted));
        shifted[k] = (c[k] + dims_[k] - 1) % dims_[k];
        neighbors_[i * 2 * d + 2 * k + 1] = static_cast<std::uint32_t>(index(shifted));
      }
      parity_[par % 2].push_back(static_cast<std::uint32_t>(i));
      for (int k = 0; k < d && ++c[k] == dims_[k]; ++k) c[k] = 0;
    }
  }

  void recompute() {
    const int d = dim();
    magnetization_ = 0;
    bond_sums_.fill(0);
    for (std::size_t i = 0; i < n_sites_; ++i) {
      magnetization_ += spins_[i];
      for (int k = 0; k < d; ++k) bond_sums_[k] += spins_[i] * spins_[neighbors_[i * 2 * d + 2 * k]];
    }
  }

  std::vector<int> dims_;
  BondWeights j_;
  double beta_;
  std::size_t n_sites_ = 0;
  std::vector<std::int8_t> spins_;
  std::vector<std::uint32_t> neighbors_;  // per site: (+e_0, −e_0, +e_1, −e_1, …)
  std::array<std::vector<std::uint32_t>, 2> parity_;
  std::array<double, 27> accept_{};
  std::array<long long, 3> bond_sums_{};
  long long magnetization_ = 0;
};

/// Value-semantics form of SpinLattice::sweep.
inline SpinLattice checkerboard_sweep(SpinLattice lattice, const CounterRng& rng, std::uint64_t sweep_index) {
  lattice.sweep(rng, sweep_index);
  return lattice;
}

}  // namespace latc::ising
