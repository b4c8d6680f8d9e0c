#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <string_view>

#include "latc/lattice/minima.hpp"

namespace latc {

enum class TcMethod { onsager_exact, asymptotic, monte_carlo };

inline std::string_view to_string(TcMethod m) {
  switch (m) {
    case TcMethod::onsager_exact: return "onsager_exact";
    case TcMethod::asymptotic: return "asymptotic";
    case TcMethod::monte_carlo: return "monte_carlo";
  }
  return "?";
}

inline TcMethod tc_method_from_string(std::string_view s) {
  if (s == "onsager_exact") return TcMethod::onsager_exact;
  if (s == "asymptotic") return TcMethod::asymptotic;
  if (s == "monte_carlo") return TcMethod::monte_carlo;
  throw ValidationError("unknown critical temperature method '" + std::string(s) + "'");
}

struct CriticalTemperature {
  double value = 0.0;
  TcMethod method = TcMethod::onsager_exact;
  /// |sinh(2J₁/T)·sinh(2J₂/T) − 1| for onsager_exact, otherwise 0.
  double residual = 0.0;
};

inline constexpr double default_tc_tolerance = 1e-12;

/// Mean-field temperature 2·Σ_k J_k (coordination-weighted sum of the
/// couplings, each bond counted once in H). Upper bound for T_c in every d.
inline double mean_field_bound(const BondWeights& j) {
  return 2.0 * std::accumulate(j.values().begin(), j.values().end(), 0.0);
}

namespace detail {

// log(sinh z) for z > 0 without overflow.
inline double log_sinh(double z) {
  if (z > 20.0) return z - std::log(2.0) + std::log1p(-std::exp(-2.0 * z));
  return std::log(std::sinh(z));
}

inline double coth(double z) { return z > 20.0 ? 1.0 : 1.0 / std::tanh(z); }

// log of sinh(2J₁/T)·sinh(2J₂/T); strictly decreasing in T, zero at T_c.
struct OnsagerLog {
  double j1, j2;

  double value(double t) const { return log_sinh(2 * j1 / t) + log_sinh(2 * j2 / t); }
  double derivative(double t) const {
    const double z1 = 2 * j1 / t, z2 = 2 * j2 / t;
    return -(z1 * coth(z1) + z2 * coth(z2)) / t;
  }
};

}  // namespace detail

/// Root of Onsager's criticality condition sinh(2J₁/T)·sinh(2J₂/T) = 1.
/// The condition is evaluated as a sum of log-sinh terms so deep
/// anisotropies do not overflow. Bisection on (0, T*] narrows the bracket
/// to 1e-3·T*, then Newton polishes, falling back to bisection whenever a
/// step leaves the bracket.
inline CriticalTemperature solve_tc_2d(const BondWeights& j, double tol = default_tc_tolerance) {
  if (j.dim() != 2) throw UnsupportedError("Onsager solution needs d = 2, got d = " + std::to_string(j.dim()));
  if (!(tol > 0)) throw DomainError("tolerance must be positive");
  const detail::OnsagerLog f{j[0], j[1]};
  const double t_star = mean_field_bound(j);

  double lo = 1e-12 * t_star, hi = t_star;
  while (f.value(lo) <= 0) {
    lo *= 1e-3;
    if (lo < 1e-300) throw ConvergenceError("cannot bracket Onsager root below T*");
  }
  if (f.value(hi) >= 0) throw ConvergenceError("Onsager condition not negative at the mean-field bound");

  auto residual = [&](double t) { return std::abs(std::expm1(f.value(t))); };

  while (hi - lo > 1e-3 * t_star) {
    const double mid = 0.5 * (lo + hi);
    (f.value(mid) > 0 ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = f.value(t);
    if (std::abs(std::expm1(g)) < tol) return {t, TcMethod::onsager_exact, residual(t)};
    (g > 0 ? lo : hi) = t;
    double next = t - g / f.derivative(t);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t) break;
    t = next;
  }
  if (residual(t) < tol) return {t, TcMethod::onsager_exact, residual(t)};
  throw ConvergenceError("Onsager solve did not reach residual " + std::to_string(tol) + " (got " + std::to_string(residual(t)) + ")");
}

/// Two-term cusp expansion of T_c(1, 1/r): (2/log r)·(1 + log log r / log r).
/// Comes from β·e^{2β} = r, the r → ∞ limit of Onsager's condition.
inline CriticalTemperature asymptotic_tc(double r) {
  if (!(r > std::exp(1.0))) throw DomainError("asymptotic_tc needs r > e, got " + std::to_string(r));
  const double l = std::log(r);
  return {2.0 / l * (1.0 + std::log(l) / l), TcMethod::asymptotic, 0.0};
}

/// Same limit without expanding: β solves 2β + log β = log r exactly
/// (β = W(2r)/2), returned as T = 1/β. Takes log r so it works for r far
/// beyond double range.
inline double cusp_balance_tc(double log_r) {
  if (!(log_r > 0)) throw DomainError("cusp_balance_tc needs log r > 0");
  // Newton in t = log β on the convex increasing 2e^t + t − log r, started
  // to the right of the root.
  double t = std::log(std::max(log_r / 2.0, 1.0)) + 1.0;
  for (int it = 0; it < 100; ++it) {
    const double e = std::exp(t);
    const double h = 2 * e + t - log_r;
    const double step = h / (2 * e + 1);
    t -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(t))) break;
  }
  return std::exp(-t);
}

/// T_c of a unimodular 2-lattice with J_k = 1/λ_k, via homogeneity:
/// T_c(1/λ₁, 1/λ₂) = T_c(1, λ₁/λ₂)/λ₁.
inline CriticalTemperature tc_of_lattice(const LatticeBasis& basis, double tol = default_tc_tolerance) {
  if (basis.dim() != 2) throw UnsupportedError("tc_of_lattice needs d = 2, got d = " + std::to_string(basis.dim()));
  if (std::abs(basis.covolume() - 1.0) > 1e-9)
    throw DomainError("tc_of_lattice needs a unimodular basis, covolume = " + std::to_string(basis.covolume()));
  const auto m = successive_minima(basis);
  auto t = solve_tc_2d(BondWeights{1.0, m.values[0] / m.values[1]}, tol);
  t.value /= m.values[0];
  return t;
}

/// T_c(1, 1/r) for r ≥ 1, the one-parameter family the quadrature needs.
inline double reduced_tc(double r, double tol = default_tc_tolerance) { return solve_tc_2d(BondWeights{1.0, 1.0 / r}, tol).value; }

}  // namespace latc
