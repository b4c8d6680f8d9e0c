#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "latc/ising/observables.hpp"
#include "latc/ising/spin_lattice.hpp"
#include "latc/onsager.hpp"
#include "latc/parallel.hpp"

namespace latc::ising {

/// Equilibration and measurement plan for one replica.
struct McSchedule {
  std::uint64_t min_discard = 10'000;
  double discard_tau_factor = 50.0;
  std::uint64_t max_discard = 2'000'000;
  std::size_t samples = 2000;
  Start start = Start::random;
};

struct ReplicaResult {
  ObservableSeries series;
  double tau = 0.5;  // of m², from the equilibration run
  std::uint64_t discarded = 0;
  std::uint64_t thin = 1;
};

/// Equilibrate for max(min_discard, 50·τ̂) sweeps, with τ̂ the integrated
/// autocorrelation time of m² re-estimated on the second half of the run
/// so far, then record one sample every ⌈τ̂⌉ sweeps.
inline ReplicaResult run_replica(const std::vector<int>& dims, const BondWeights& j, double temperature, std::uint64_t seed,
                                 const McSchedule& sched) {
  if (!(temperature > 0)) throw DomainError("temperature must be positive");
  SpinLattice lat(dims, j, 1.0 / temperature, sched.start, seed);
  const CounterRng rng(seed);
  ReplicaResult out;
  out.series.seed = seed;

  std::vector<double> m2;
  std::uint64_t t = 0;
  auto advance_to = [&](std::uint64_t target) {
    for (; t < target; ++t) {
      lat.sweep(rng, t);
      const double m = lat.magnetization_density();
      m2.push_back(m * m);
    }
  };
  auto tau_now = [&] {
    std::span<const double> half(m2.data() + m2.size() / 2, m2.size() - m2.size() / 2);
    return integrated_autocorrelation(half);
  };

  advance_to(std::max<std::uint64_t>(sched.min_discard, 1));
  double tau = tau_now();
  while (static_cast<double>(t) < sched.discard_tau_factor * tau && t < sched.max_discard) {
    advance_to(std::min(sched.max_discard, std::max(t * 2, static_cast<std::uint64_t>(sched.discard_tau_factor * tau))));
    tau = tau_now();
  }
  out.tau = tau;
  out.discarded = t;
  out.thin = static_cast<std::uint64_t>(std::ceil(tau));

  for (std::size_t s = 0; s < sched.samples; ++s) {
    for (std::uint64_t k = 0; k < out.thin; ++k, ++t) lat.sweep(rng, t);
    out.series.push(t, lat.magnetization_density(), lat.energy_density());
  }
  return out;
}

/// Extents for a rectangular window adapted to anisotropic couplings: the
/// axis with coupling J_k gets n·min(8, round(J_k / J_min)) sites, so
/// strongly coupled (long-correlated) directions are longer.
inline std::vector<int> anisotropic_window(const BondWeights& j, int n) {
  if (n < 2 || n % 2) throw ValidationError("base window size must be even and >= 2");
  const double jmin = *std::min_element(j.values().begin(), j.values().end());
  std::vector<int> dims;
  for (double jk : j.values()) dims.push_back(n * static_cast<int>(std::clamp(std::round(jk / jmin), 1.0, 8.0)));
  return dims;
}

struct BinderCurve {
  std::vector<int> dims;
  std::vector<double> u4;
  std::vector<double> tau;
  std::vector<std::uint64_t> discarded;
};

struct McEstimate {
  CriticalTemperature tc;
  std::vector<double> temperatures;
  std::vector<BinderCurve> curves;
  std::vector<std::vector<ObservableSeries>> series;  // [size][temperature]
};

namespace detail {

inline std::size_t site_count(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int e : dims) n *= static_cast<std::size_t>(e);
  return n;
}

inline std::string describe_curves(const std::vector<double>& temps, const std::vector<BinderCurve>& curves) {
  std::ostringstream os;
  for (const auto& c : curves) {
    os << "size";
    for (int e : c.dims) os << ' ' << e;
    os << ':';
    for (std::size_t i = 0; i < temps.size(); ++i) os << " T=" << temps[i] << " U4=" << c.u4[i] << ';';
    os << '\n';
  }
  return os.str();
}

}  // namespace detail

/// Linear-interpolated temperature where U4(large) − U4(small) first turns
/// from positive to non-positive along `temps`.
inline std::optional<double> binder_crossing(const std::vector<double>& temps, const std::vector<double>& small, const std::vector<double>& large) {
  for (std::size_t i = 0; i + 1 < temps.size(); ++i) {
    const double a = large[i] - small[i], b = large[i + 1] - small[i + 1];
    if (a > 0 && b <= 0) return temps[i] + (temps[i + 1] - temps[i]) * a / (a - b);
  }
  return std::nullopt;
}

/// Binder-cumulant crossing of the two largest windows over a temperature
/// grid. Replicas are seeded from (seed, size, temperature) and run
/// concurrently; the outcome does not depend on the worker count.
inline McEstimate estimate_tc_mc(const BondWeights& j, const std::vector<std::vector<int>>& sizes, const std::vector<double>& temps,
                                 const McSchedule& sched, std::uint64_t seed, unsigned workers = 1) {
  if (j.dim() < 2 || j.dim() > 3) throw UnsupportedError("Monte Carlo T_c estimation supports d = 2 or 3");
  if (sizes.size() < 2) throw ValidationError("need at least two lattice sizes for a Binder crossing");
  if (temps.size() < 2 || !std::is_sorted(temps.begin(), temps.end())) throw ValidationError("temperature grid must have >= 2 ascending points");
  for (const auto& s : sizes)
    if (static_cast<int>(s.size()) != j.dim()) throw ValidationError("lattice size rank does not match the number of couplings");

  const std::size_t nt = temps.size();
  auto results = parallel_chunks<ReplicaResult>(sizes.size() * nt, workers, [&](std::size_t idx) {
    const std::size_t si = idx / nt, ti = idx % nt;
    const std::uint64_t replica_seed = CounterRng(seed, si).bits(ti);
    return run_replica(sizes[si], j, temps[ti], replica_seed, sched);
  });

  McEstimate est;
  est.temperatures = temps;
  est.series.resize(sizes.size());
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    BinderCurve c{sizes[si], {}, {}, {}};
    for (std::size_t ti = 0; ti < nt; ++ti) {
      auto& r = results[si * nt + ti];
      c.u4.push_back(binder_cumulant(r.series));
      c.tau.push_back(r.tau);
      c.discarded.push_back(r.discarded);
      est.series[si].push_back(std::move(r.series));
    }
    est.curves.push_back(std::move(c));
  }

  std::vector<std::size_t> order(sizes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return detail::site_count(sizes[a]) < detail::site_count(sizes[b]); });
  const auto& small = est.curves[order[order.size() - 2]].u4;
  const auto& large = est.curves[order.back()].u4;
  const auto cross = binder_crossing(temps, small, large);
  if (!cross) throw RangeError("no Binder crossing in [" + std::to_string(temps.front()) + ", " + std::to_string(temps.back()) + "]", detail::describe_curves(temps, est.curves));
  est.tc = {*cross, TcMethod::monte_carlo, 0.0};
  return est;
}

}  // namespace latc::ising
