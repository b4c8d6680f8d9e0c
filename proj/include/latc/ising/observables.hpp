#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <ostream>
#include <span>
#include <vector>

#include "latc/errors.hpp"
#include "latc/summation.hpp"

namespace latc::ising {

/// Measurements of one Markov chain: magnetization and energy densities
/// with the sweep index each sample was taken at.
struct ObservableSeries {
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> sweeps;
  std::vector<double> m;
  std::vector<double> energy;

  std::size_t size() const noexcept { return m.size(); }

  void push(std::uint64_t sweep, double mag, double e) {
    sweeps.push_back(sweep);
    m.push_back(mag);
    energy.push_back(e);
  }

  friend bool operator==(const ObservableSeries&, const ObservableSeries&) = default;
};

inline void write_series_csv(std::ostream& os, const ObservableSeries& s) {
  char buf[96];
  os << "sweep,m,energy\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n", static_cast<unsigned long long>(s.sweeps[i]), s.m[i], s.energy[i]);
    os << buf;
  }
}

inline constexpr std::size_t binder_min_samples = 1000;

/// U₄ = 1 − ⟨m⁴⟩ / (3⟨m²⟩²).
inline double binder_cumulant(std::span<const double> m, std::size_t min_samples = binder_min_samples) {
  if (m.size() < min_samples)
    throw EstimationError("Binder cumulant needs at least " + std::to_string(min_samples) + " samples, got " + std::to_string(m.size()), min_samples);
  CompensatedSum m2, m4;
  for (double x : m) {
    const double x2 = x * x;
    m2.add(x2);
    m4.add(x2 * x2);
  }
  const double n = static_cast<double>(m.size());
  const double a = m2.value() / n, b = m4.value() / n;
  if (a == 0.0) throw EstimationError("Binder cumulant undefined for <m^2> = 0", min_samples);
  return 1.0 - b / (3.0 * a * a);
}

inline double binder_cumulant(const ObservableSeries& s, std::size_t min_samples = binder_min_samples) {
  return binder_cumulant(std::span<const double>(s.m), min_samples);
}

/// Integrated autocorrelation time τ_int = ½ + Σ_{t ≥ 1} ρ(t), summed up
/// to Sokal's self-consistent window W ≥ c·τ_int(W). A constant series
/// gives ½.
inline double integrated_autocorrelation(std::span<const double> x, double window_c = 6.0) {
  const std::size_t n = x.size();
  if (n < 4) return 0.5;
  CompensatedSum mean_acc;
  for (double v : x) mean_acc.add(v);
  const double mean = mean_acc.value() / static_cast<double>(n);
  std::vector<double> c(x.begin(), x.end());
  for (double& v : c) v -= mean;
  auto autocov = [&](std::size_t t) {
    CompensatedSum s;
    for (std::size_t i = 0; i + t < n; ++i) s.add(c[i] * c[i + t]);
    return s.value() / static_cast<double>(n - t);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0)) return 0.5;
  double tau = 0.5;
  for (std::size_t t = 1; t < n / 2; ++t) {
    tau += autocov(t) / c0;
    if (static_cast<double>(t) >= window_c * tau) break;
  }
  return std::max(tau, 0.5);
}

}  // namespace latc::ising
