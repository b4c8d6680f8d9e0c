#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "latc/io/json_writer.hpp"
#include "latc/lattice/modular.hpp"
#include "latc/onsager.hpp"
#include "latc/parallel.hpp"
#include "latc/summation.hpp"

namespace latc {

enum class TailMode { asymptotic, truncate };
/// Approximation of T_c(1, 1/r) used inside the cusp.
enum class CuspModel { balance, two_term };
enum class MomentMethod { quadrature, hecke, mc };

inline std::string_view to_string(TailMode m) { return m == TailMode::asymptotic ? "asymptotic" : "truncate"; }
inline std::string_view to_string(CuspModel m) { return m == CuspModel::balance ? "balance" : "two_term"; }
inline std::string_view to_string(MomentMethod m) {
  switch (m) {
    case MomentMethod::quadrature: return "quadrature";
    case MomentMethod::hecke: return "hecke";
    case MomentMethod::mc: return "mc";
  }
  return "?";
}

inline MomentMethod moment_method_from_string(std::string_view s) {
  if (s == "quadrature") return MomentMethod::quadrature;
  if (s == "hecke") return MomentMethod::hecke;
  if (s == "mc") return MomentMethod::mc;
  throw ValidationError("unknown moment method '" + std::string(s) + "'");
}

struct QuadratureSpec {
  double p = 1.0;
  double r0 = 1e3;
  int n_cells = 1024;
  TailMode tail = TailMode::asymptotic;
  CuspModel cusp = CuspModel::balance;
  unsigned workers = 1;

  void validate() const {
    if (!(p > 0)) throw ValidationError("moment order p must be positive, got " + std::to_string(p));
    if (!(r0 >= 2)) throw ValidationError("cusp cutoff r0 must be >= 2, got " + std::to_string(r0));
    if (n_cells < 8) throw ValidationError("n_cells must be >= 8, got " + std::to_string(n_cells));
    if (cusp == CuspModel::two_term && tail == TailMode::asymptotic && !(r0 > std::exp(1.0)))
      throw ValidationError("two_term cusp model needs r0 > e");
  }
};

struct MomentEstimate {
  double p = 0.0;
  double value = 0.0;
  double bulk_value = 0.0;
  double tail_value = 0.0;
  MomentMethod method = MomentMethod::quadrature;
  io::Json diagnostics = io::Json::object();
};

/// 1/area(F).
inline constexpr double fundamental_domain_normalization = 3.0 / std::numbers::pi;

/// (y^{1/2}·T_c(1, 1/r))^p / y² at z = x + iy: T_c^p of the lattice of z
/// against the hyperbolic area element.
inline double integrand(const ModularPoint& z, double p) {
  const double t = std::sqrt(z.y()) * reduced_tc(z.r());
  return std::pow(t, p) / (z.y() * z.y());
}

/// One midpoint cell of the bulk grid, for plotting.
struct QuadratureCell {
  double x, u, r, y, tc, weight;
};

namespace detail {

// Midpoint grid on (x, u) ∈ [−½, ½] × (1/r0, 1] with u = 1/r. In these
// coordinates F₀ = {|z| < r0} ∩ F is the whole rectangle and
// dx dy / y² = dx du / (y³ u³).
struct BulkGrid {
  double hx, hu, u0;
  int n;

  explicit BulkGrid(const QuadratureSpec& s) : hx(1.0 / s.n_cells), hu((1.0 - 1.0 / s.r0) / s.n_cells), u0(1.0 / s.r0), n(s.n_cells) {}
  double x(int i) const { return -0.5 + hx * (i + 0.5); }
  double u(int j) const { return u0 + hu * (j + 0.5); }
};

// Sum over one u-row; T_c depends on r alone so it is solved once per row.
inline CompensatedSum bulk_row(const QuadratureSpec& s, const BulkGrid& grid, int j, int i_begin, int i_end,
                               const std::function<void(const QuadratureCell&)>* sink = nullptr) {
  const double u = grid.u(j);
  const double r = 1.0 / u;
  const double tc = reduced_tc(r);
  CompensatedSum row;
  for (int i = i_begin; i < i_end; ++i) {
    const double x = grid.x(i);
    const double y = std::sqrt(r * r - x * x);
    const double w = std::pow(std::sqrt(y) * tc, s.p) / (y * y) / (y * u * u * u);
    if (sink) (*sink)({x, u, r, y, tc, w});
    row.add(w);
  }
  return row;
}

}  // namespace detail

/// (3/π)·∬_{F₀} integrand, extended midpoint rule on the (x, 1/r) grid.
/// With `fold_x` only x ≥ 0 is summed and doubled (the integrand is even in x).
inline double bulk_moment(const QuadratureSpec& spec, bool fold_x = false) {
  spec.validate();
  const detail::BulkGrid grid(spec);
  const int i_begin = fold_x ? spec.n_cells / 2 : 0;
  if (fold_x && spec.n_cells % 2) throw ValidationError("fold_x needs an even n_cells");
  auto rows = parallel_chunks<CompensatedSum>(static_cast<std::size_t>(spec.n_cells), spec.workers, [&](std::size_t j) {
    return detail::bulk_row(spec, grid, static_cast<int>(j), i_begin, spec.n_cells);
  });
  const double total = tree_merge(std::move(rows)).value() * (fold_x ? 2.0 : 1.0);
  return fundamental_domain_normalization * total * grid.hx * grid.hu;
}

/// Visits every bulk cell in row order (single-threaded; for CSV dumps).
inline void for_each_bulk_cell(const QuadratureSpec& spec, const std::function<void(const QuadratureCell&)>& sink) {
  spec.validate();
  const detail::BulkGrid grid(spec);
  for (int j = 0; j < spec.n_cells; ++j) detail::bulk_row(spec, grid, j, 0, spec.n_cells, &sink);
}

struct TailResult {
  double value = 0.0;
  bool converged = true;
  /// (log R, ∫_{r0 ≤ |z| ≤ R}) after each panel.
  std::vector<std::pair<double, double>> partials;
  double log_r_end = 0.0;
};

/// Tail schedule. Panels first double R (divergence probe), then double log R.
struct TailSchedule {
  int r_doublings = 40;
  double log_r_max = 1e7;
  double relative_stop = 1e-6;
  double growth_ratio = 1.05;
  int growth_streak = 3;
};

/// Density of the cusp integral per d(log r) at s = log r:
/// (3/π)·T(r)^p·r^{p/2−1}·∫_{−½}^{½} (1 − x²/r²)^{(p/2−3)/2} dx.
inline double tail_density(double s, double p, CuspModel cusp) {
  const double t = cusp == CuspModel::balance ? cusp_balance_tc(s) : 2.0 / s * (1.0 + std::log(s) / s);
  const double inv_r2 = std::exp(-2.0 * s);
  const double q = (p / 2.0 - 3.0) / 2.0;
  // even in x: integrate [0, ½] and double
  const double shape = 2.0 * boost::math::quadrature::gauss<double, 10>::integrate(
                                 [&](double x) { return std::pow(1.0 - x * x * inv_r2, q); }, 0.0, 0.5);
  return fundamental_domain_normalization * std::pow(t, p) * std::exp((p / 2.0 - 1.0) * s) * shape;
}

/// (3/π)·∬_{F∖F₀} (y^{1/2}·T_cusp(r))^p dx dy / y². Stops once the latest
/// log-doubling panel, which bounds the remaining mass for p ≤ 2, drops below
/// `relative_stop` of the running total. Flags divergence when the panel
/// increments grow by more than `growth_ratio` for `growth_streak`
/// consecutive doublings, or when log R reaches `log_r_max` first.
inline TailResult tail_moment(const QuadratureSpec& spec, const TailSchedule& sched = {}) {
  spec.validate();
  TailResult out;
  if (spec.tail == TailMode::truncate) return out;

  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto density = [&](double s) { return tail_density(s, spec.p, spec.cusp); };

  CompensatedSum total;
  double prev_increment = -1.0;
  int streak = 0;
  double s = std::log(spec.r0);

  auto panel = [&](double a, double b) -> bool {
    const double inc = Kronrod::integrate(density, a, b, 8, 1e-12);
    if (!std::isfinite(inc)) {
      out.converged = false;
      return false;
    }
    total.add(inc);
    out.partials.emplace_back(b, total.value());
    streak = (prev_increment > 0 && inc > sched.growth_ratio * prev_increment) ? streak + 1 : 0;
    prev_increment = inc;
    if (streak >= sched.growth_streak) {
      out.converged = false;
      return false;
    }
    return true;
  };

  for (int k = 0; k < sched.r_doublings; ++k, s += std::log(2.0))
    if (!panel(s, s + std::log(2.0))) break;

  if (out.converged) {
    prev_increment = -1.0;
    streak = 0;
    bool stopped = false;
    while (s < sched.log_r_max) {
      const double before = total.value();
      if (!panel(s, 2 * s)) break;
      s *= 2;
      if (total.value() - before < sched.relative_stop * total.value()) {
        stopped = true;
        break;
      }
    }
    if (out.converged && !stopped) out.converged = false;
  }
  out.value = total.value();
  out.log_r_end = out.partials.empty() ? s : out.partials.back().first;
  return out;
}

/// Bulk plus cusp tail with diagnostics. Throws DivergenceError when the
/// tail does not settle (expected for p > 2).
inline MomentEstimate moment(const QuadratureSpec& spec, const TailSchedule& sched = {}) {
  spec.validate();
  const TailResult tail = tail_moment(spec, sched);
  if (!tail.converged)
    throw DivergenceError("cusp tail integral of T_c^" + std::to_string(spec.p) + " does not converge", tail.partials);
  MomentEstimate est;
  est.p = spec.p;
  est.bulk_value = bulk_moment(spec);
  est.tail_value = tail.value;
  est.value = est.bulk_value + est.tail_value;
  est.method = MomentMethod::quadrature;
  io::Json partials = io::Json::array();
  for (const auto& [log_r, v] : tail.partials) partials.push_back(io::Json::array({log_r, v}));
  est.diagnostics = io::Json{{"r0", spec.r0},
                             {"n_cells", spec.n_cells},
                             {"tail", to_string(spec.tail)},
                             {"cusp_model", to_string(spec.cusp)},
                             {"tail_log_r_end", tail.log_r_end},
                             {"tail_partials", std::move(partials)}};
  return est;
}

}  // namespace latc
