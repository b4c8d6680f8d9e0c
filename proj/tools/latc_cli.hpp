#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "latc/latc.hpp"

namespace latc::cli {

using io::Json;

/// Fully resolved configuration of one invocation. Echoed as "manifest" in
/// every output and accepted back by `latc replay`.
struct RunConfig {
  std::string command;
  Json params = Json::object();
  std::string format = "json";
  std::uint64_t seed = 0;
  unsigned workers = 1;

  Json to_json() const {
    return Json{{"command", command}, {"format", format}, {"seed", seed}, {"workers", workers}, {"params", params}};
  }

  static RunConfig from_json(const Json& j) {
    const Json& m = j.contains("manifest") ? j["manifest"] : j;
    try {
      RunConfig c;
      c.command = m.at("command").get<std::string>();
      c.format = m.value("format", std::string("json"));
      c.seed = m.value("seed", std::uint64_t{0});
      c.workers = m.value("workers", 1u);
      c.params = m.at("params");
      return c;
    } catch (const Json::exception& e) {
      throw ValidationError(std::string("manifest: ") + e.what());
    }
  }
};

enum ExitCode : int { ok = 0, validation_failure = 2, numerical_failure = 3 };

inline int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case Error::Kind::convergence:
    case Error::Kind::divergence:
    case Error::Kind::range:
    case Error::Kind::estimation:
      return numerical_failure;
    default:
      return validation_failure;
  }
}

namespace detail {

inline std::string csv_manifest_line(const RunConfig& cfg) { return "# manifest: " + io::dump(cfg.to_json(), 0) + "\n"; }

inline void emit(std::ostream& out, const RunConfig& cfg, Json body) {
  body["manifest"] = cfg.to_json();
  out << io::dump(body) << '\n';
}

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T param(const RunConfig& cfg, const char* name) {
  if (!cfg.params.contains(name)) throw ValidationError(std::string("missing parameter '") + name + "'");
  try {
    return cfg.params[name].get<T>();
  } catch (const Json::exception&) {
    throw ValidationError(std::string("parameter '") + name + "' has the wrong type");
  }
}

inline std::string opt_string(const RunConfig& cfg, const char* name) {
  return cfg.params.contains(name) && cfg.params[name].is_string() ? cfg.params[name].get<std::string>() : std::string();
}

inline int run_minima(const RunConfig& cfg, std::ostream& out) {
  const auto basis = io::basis_from_json(cfg.params.at("basis"));
  const auto m = successive_minima(basis);
  const auto j = bond_weights(m);
  if (cfg.format == "csv") {
    out << csv_manifest_line(cfg) << "k,lambda,J\n";
    for (int k = 0; k < m.dim(); ++k) out << k + 1 << ',' << fmt(m.values[k]) << ',' << fmt(j[k]) << '\n';
    return ok;
  }
  Json body = io::to_json(m);
  body["bond_weights"] = io::to_json(j);
  emit(out, cfg, std::move(body));
  return ok;
}

inline int run_tc(const RunConfig& cfg, std::ostream& out) {
  const double tol = cfg.params.value("tol", default_tc_tolerance);
  CriticalTemperature t;
  std::vector<double> jv;
  if (cfg.params.contains("basis")) {
    const auto basis = io::basis_from_json(cfg.params["basis"]);
    t = tc_of_lattice(basis, tol);
    jv = bond_weights(successive_minima(basis)).values();
  } else {
    const BondWeights j(param<std::vector<double>>(cfg, "J"));
    if (j.dim() != 2) throw ValidationError("parameter 'J' must hold exactly two couplings for the exact solver");
    t = solve_tc_2d(j, tol);
    jv = j.values();
  }
  if (cfg.format == "csv") {
    out << csv_manifest_line(cfg) << "value,method,residual\n" << fmt(t.value) << ',' << to_string(t.method) << ',' << fmt(t.residual) << '\n';
    return ok;
  }
  Json body = io::to_json(t);
  body["J"] = jv;
  body["mean_field_bound"] = mean_field_bound(BondWeights(jv));
  emit(out, cfg, std::move(body));
  return ok;
}

inline TailMode tail_from(const std::string& s) {
  if (s == "asymptotic") return TailMode::asymptotic;
  if (s == "truncate") return TailMode::truncate;
  throw ValidationError("parameter 'tail' must be asymptotic or truncate, got '" + s + "'");
}

inline CuspModel cusp_from(const std::string& s) {
  if (s == "balance") return CuspModel::balance;
  if (s == "two_term") return CuspModel::two_term;
  throw ValidationError("parameter 'cusp' must be balance or two_term, got '" + s + "'");
}

inline QuadratureSpec quadrature_spec(const RunConfig& cfg) {
  QuadratureSpec s;
  s.p = param<double>(cfg, "p");
  s.r0 = cfg.params.value("r0", s.r0);
  s.n_cells = cfg.params.value("cells", s.n_cells);
  s.tail = tail_from(cfg.params.value("tail", std::string("asymptotic")));
  s.cusp = cusp_from(cfg.params.value("cusp", std::string("balance")));
  s.workers = cfg.workers;
  s.validate();
  return s;
}

inline void write_moment_csv(std::ostream& out, const RunConfig& cfg, const MomentEstimate& m) {
  out << csv_manifest_line(cfg) << "p,value,bulk_value,tail_value,method\n"
      << fmt(m.p) << ',' << fmt(m.value) << ',' << fmt(m.bulk_value) << ',' << fmt(m.tail_value) << ',' << to_string(m.method) << '\n';
}

inline int run_moments(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const QuadratureSpec spec = quadrature_spec(cfg);
  MomentEstimate m;
  try {
    m = moment(spec);
  } catch (const DivergenceError& e) {
    Json partials = Json::array();
    for (const auto& [log_r, v] : e.partials()) {
      err << "tail partial: log R = " << fmt(log_r) << "  I(R) = " << fmt(v) << '\n';
      partials.push_back(Json::array({log_r, v}));
    }
    Json body{{"error", "divergence"}, {"message", e.what()}, {"p", spec.p}, {"tail_partials", std::move(partials)}};
    emit(out, cfg, std::move(body));
    return numerical_failure;
  }
  if (const auto path = opt_string(cfg, "cells_csv"); !path.empty()) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write cells_csv '" + path + "'");
    f << "x,u,r,y,tc,weight\n";
    for_each_bulk_cell(spec, [&](const QuadratureCell& c) {
      f << fmt(c.x) << ',' << fmt(c.u) << ',' << fmt(c.r) << ',' << fmt(c.y) << ',' << fmt(c.tc) << ',' << fmt(c.weight) << '\n';
    });
  }
  if (cfg.format == "csv") {
    write_moment_csv(out, cfg, m);
    return ok;
  }
  emit(out, cfg, io::to_json(m));
  return ok;
}

inline int run_hecke(const RunConfig& cfg, std::ostream& out) {
  const HeckePrime hp(param<std::uint64_t>(cfg, "prime"), cfg.params.value("dim", 2));
  const double q = cfg.params.value("p_order", 1.0);
  const auto m = hecke_moment(hp, q, {}, HeckeOptions{cfg.workers});
  if (const auto path = opt_string(cfg, "samples_csv"); !path.empty()) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write samples_csv '" + path + "'");
    f << "index";
    for (int k = 1; k < hp.dim(); ++k) f << ",i" << k;
    for (int k = 1; k <= hp.dim(); ++k) f << ",lambda" << k;
    f << ",tc\n";
    for (const auto& row : hecke_samples(hp, cfg.params.value("row_cap", std::uint64_t{1000}))) {
      f << row.index;
      for (int k = 0; k + 1 < hp.dim(); ++k) f << ',' << (k < static_cast<int>(row.matrix.offsets.size()) ? std::to_string(row.matrix.offsets[k]) : "");
      for (double l : row.minima) f << ',' << fmt(l);
      f << ',' << fmt(row.tc) << '\n';
    }
  }
  if (cfg.format == "csv") {
    write_moment_csv(out, cfg, m);
    return ok;
  }
  emit(out, cfg, io::to_json(m));
  return ok;
}

inline int run_mc(const RunConfig& cfg, std::ostream& out) {
  const BondWeights j(param<std::vector<double>>(cfg, "J"));
  const auto sizes = param<std::vector<std::vector<int>>>(cfg, "sizes");
  const double tmin = param<double>(cfg, "tmin"), tmax = param<double>(cfg, "tmax");
  const int steps = param<int>(cfg, "steps");
  if (steps < 2) throw ValidationError("parameter 'steps' must be >= 2");
  if (!(tmin > 0 && tmax > tmin)) throw ValidationError("parameters 'tmin'/'tmax' must satisfy 0 < tmin < tmax");
  std::vector<double> temps;
  for (int i = 0; i < steps; ++i) temps.push_back(tmin + (tmax - tmin) * i / (steps - 1));
  ising::McSchedule sched;
  sched.samples = cfg.params.value("samples", sched.samples);
  sched.min_discard = cfg.params.value("min_discard", sched.min_discard);

  const auto est = ising::estimate_tc_mc(j, sizes, temps, sched, cfg.seed, cfg.workers);

  if (const auto dir = opt_string(cfg, "series_dir"); !dir.empty()) {
    std::filesystem::create_directories(dir);
    Json betas = Json::array();
    for (double t : temps) betas.push_back(1.0 / t);
    for (std::size_t si = 0; si < sizes.size(); ++si)
      for (std::size_t ti = 0; ti < temps.size(); ++ti) {
        const std::string stem = dir + "/series_s" + std::to_string(si) + "_t" + std::to_string(ti);
        std::ofstream csv(stem + ".csv");
        ising::write_series_csv(csv, est.series[si][ti]);
        std::ofstream man(stem + ".json");
        man << io::dump(Json{{"dims", sizes[si]},
                             {"J", j.values()},
                             {"beta_grid", betas},
                             {"temperature", temps[ti]},
                             {"seed", est.series[si][ti].seed},
                             {"tau", est.curves[si].tau[ti]},
                             {"discarded", est.curves[si].discarded[ti]}})
            << '\n';
      }
  }

  if (cfg.format == "csv") {
    out << csv_manifest_line(cfg) << "T";
    for (std::size_t si = 0; si < sizes.size(); ++si) out << ",U4_size" << si;
    out << '\n';
    for (std::size_t ti = 0; ti < temps.size(); ++ti) {
      out << fmt(temps[ti]);
      for (const auto& c : est.curves) out << ',' << fmt(c.u4[ti]);
      out << '\n';
    }
    out << "# tc," << fmt(est.tc.value) << '\n';
    return ok;
  }
  Json body = io::to_json(est.tc);
  body["temperatures"] = temps;
  Json curves = Json::array();
  for (const auto& c : est.curves) curves.push_back(Json{{"dims", c.dims}, {"u4", c.u4}, {"tau", c.tau}, {"discarded", c.discarded}});
  body["curves"] = std::move(curves);
  body["onsager_reference"] = j.dim() == 2 ? Json(solve_tc_2d(j).value) : Json(nullptr);
  emit(out, cfg, std::move(body));
  return ok;
}

inline int count_inversions(const std::vector<double>& dev) {
  int inv = 0;
  for (std::size_t i = 0; i + 1 < dev.size(); ++i)
    if (dev[i + 1] > dev[i]) ++inv;
  return inv;
}

inline int run_sweep(const RunConfig& cfg, std::ostream& out) {
  const auto primes = param<std::vector<std::uint64_t>>(cfg, "primes");
  const double q = cfg.params.value("p_order", 1.0);
  QuadratureSpec spec;
  spec.p = q;
  spec.r0 = cfg.params.value("r0", spec.r0);
  spec.n_cells = cfg.params.value("cells", spec.n_cells);
  spec.workers = cfg.workers;
  const double reference = moment(spec).value;
  Json rows = Json::array();
  std::vector<double> dev;
  for (auto p : primes) {
    const auto m = hecke_moment(HeckePrime(p, 2), q, {}, HeckeOptions{cfg.workers});
    dev.push_back(std::abs(m.value - reference));
    rows.push_back(Json{{"prime", p}, {"estimate", m.value}, {"deviation", dev.back()}, {"rate_bound", std::pow(static_cast<double>(p), -1.0 / 8.0)}});
  }
  if (cfg.format == "csv") {
    out << csv_manifest_line(cfg) << "prime,estimate,deviation\n";
    for (const auto& r : rows) out << r["prime"].get<std::uint64_t>() << ',' << fmt(r["estimate"].get<double>()) << ',' << fmt(r["deviation"].get<double>()) << '\n';
    return ok;
  }
  emit(out, cfg, Json{{"reference", reference}, {"p_order", q}, {"rows", std::move(rows)}, {"inversions", count_inversions(dev)}});
  return ok;
}

}  // namespace detail

/// Executes a resolved configuration, writing the result to `out`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw ValidationError("format must be json or csv, got '" + cfg.format + "'");
    if (cfg.command == "minima") return detail::run_minima(cfg, out);
    if (cfg.command == "tc") return detail::run_tc(cfg, out);
    if (cfg.command == "moments") return detail::run_moments(cfg, out, err);
    if (cfg.command == "hecke") return detail::run_hecke(cfg, out);
    if (cfg.command == "mc") return detail::run_mc(cfg, out);
    if (cfg.command == "sweep") return detail::run_sweep(cfg, out);
    throw ValidationError("unknown command '" + cfg.command + "'");
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n' << e.detail();
    return exit_code_for(e);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const Json::exception& e) {
    err << "error: malformed parameters: " << e.what() << '\n';
    return validation_failure;
  }
}

namespace detail {

inline std::vector<std::vector<int>> parse_sizes(const std::string& text, const BondWeights& j, bool auto_aspect) {
  std::vector<std::vector<int>> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::vector<int> dims;
    std::stringstream is(item);
    std::string part;
    try {
      while (std::getline(is, part, 'x')) dims.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw ValidationError("--sizes: cannot parse '" + item + "'");
    }
    if (dims.size() == 1) {
      const bool isotropic = std::all_of(j.values().begin(), j.values().end(), [&](double v) { return v == j[0]; });
      dims = auto_aspect && !isotropic ? ising::anisotropic_window(j, dims[0]) : std::vector<int>(static_cast<std::size_t>(j.dim()), dims[0]);
    }
    if (static_cast<int>(dims.size()) != j.dim()) throw ValidationError("--sizes: '" + item + "' does not have " + std::to_string(j.dim()) + " extents");
    sizes.push_back(std::move(dims));
  }
  if (sizes.empty()) throw ValidationError("--sizes: empty");
  return sizes;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace detail

/// Parses argv, runs, and returns the process exit code.
inline int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"latc: Ising critical temperatures of random lattices"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string output, format = "json", manifest_path;
  std::uint64_t seed = 0;
  unsigned workers = default_workers();
  app.add_option("-o,--output", output, "write the result to this file instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--workers", workers, "worker threads (env LATC_WORKERS)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "RNG seed for Monte Carlo");

  RunConfig cfg;

  auto* minima = app.add_subcommand("minima", "successive minima of a basis file (CSV or JSON)");
  std::string basis_file;
  minima->add_option("basis", basis_file)->required();

  auto* tc = app.add_subcommand("tc", "critical temperature of a 2D basis file or of couplings J1 J2");
  std::vector<std::string> tc_args;
  double tol = default_tc_tolerance;
  tc->add_option("args", tc_args, "<basis-file> | <J1> <J2>")->required()->expected(1, 2);
  tc->add_option("--tol", tol, "residual tolerance")->check(CLI::PositiveNumber);

  auto* moments = app.add_subcommand("moments", "quadrature moment m2(T_c^p) over the modular surface");
  double p = 1.0, r0 = 1e3;
  int cells = 1024;
  std::string tail = "asymptotic", cusp = "balance", cells_csv;
  moments->add_option("--p", p, "moment order")->required();
  moments->add_option("--r0", r0, "cusp cutoff radius");
  moments->add_option("--cells", cells, "midpoint cells per axis");
  moments->add_option("--tail", tail)->check(CLI::IsMember({"asymptotic", "truncate"}));
  moments->add_option("--cusp", cusp, "cusp model for T_c")->check(CLI::IsMember({"balance", "two_term"}));
  moments->add_option("--cells-csv", cells_csv, "dump per-cell integrand values");

  auto* hecke = app.add_subcommand("hecke", "Hecke-point moment of T_c^q");
  std::uint64_t prime = 0, row_cap = 1000;
  double p_order = 1.0;
  int dim = 2;
  std::string samples_csv;
  hecke->add_option("--prime", prime)->required();
  hecke->add_option("--p-order", p_order);
  hecke->add_option("--dim", dim);
  hecke->add_option("--samples-csv", samples_csv, "dump (offsets, minima, T_c) rows");
  hecke->add_option("--row-cap", row_cap, "row limit for --samples-csv");

  auto* mc = app.add_subcommand("mc", "Binder-crossing Monte Carlo estimate of T_c");
  std::vector<double> jv;
  std::string sizes_text;
  double tmin = 0, tmax = 0;
  int steps = 0;
  std::size_t samples = ising::McSchedule{}.samples;
  std::uint64_t min_discard = ising::McSchedule{}.min_discard;
  bool no_auto_aspect = false;
  std::string series_dir;
  mc->add_option("--J", jv, "couplings, e.g. --J 1 1")->required()->delimiter(',');
  mc->add_option("--sizes", sizes_text, "e.g. 16,32 or 64x16,128x32")->required();
  mc->add_option("--tmin", tmin)->required();
  mc->add_option("--tmax", tmax)->required();
  mc->add_option("--steps", steps)->required();
  mc->add_option("--samples", samples);
  mc->add_option("--min-discard", min_discard);
  mc->add_flag("--square", no_auto_aspect, "keep square windows for anisotropic J");
  mc->add_option("--series-dir", series_dir, "write per-replica series CSV and manifests");

  auto* sweep = app.add_subcommand("sweep", "Hecke estimates over a prime sweep against quadrature");
  std::vector<std::uint64_t> primes{101, 1009, 10007, 100003, 1336337};
  double sweep_order = 1.0;
  sweep->add_option("--primes", primes)->delimiter(',');
  sweep->add_option("--p-order", sweep_order);
  sweep->add_option("--r0", r0);
  sweep->add_option("--cells", cells);

  auto* replay = app.add_subcommand("replay", "rerun from a manifest or a previous JSON output");
  replay->add_option("manifest", manifest_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return validation_failure;
  }

  try {
    if (replay->parsed()) {
      cfg = RunConfig::from_json(detail::load_json_file(manifest_path));
    } else {
      cfg.format = format;
      cfg.seed = seed;
      cfg.workers = workers;
      if (minima->parsed()) {
        cfg.command = "minima";
        cfg.params = Json{{"basis", io::basis_to_json(io::load_basis(basis_file))}};
      } else if (tc->parsed()) {
        cfg.command = "tc";
        if (tc_args.size() == 1) {
          cfg.params = Json{{"basis", io::basis_to_json(io::load_basis(tc_args[0]))}};
        } else {
          std::vector<double> j;
          for (const auto& a : tc_args) {
            try {
              std::size_t used = 0;
              j.push_back(std::stod(a, &used));
              if (used != a.size()) throw std::invalid_argument(a);
            } catch (const std::exception&) {
              throw ValidationError("tc: coupling '" + a + "' is not a number");
            }
          }
          cfg.params = Json{{"J", j}};
        }
        cfg.params["tol"] = tol;
      } else if (moments->parsed()) {
        cfg.command = "moments";
        cfg.params = Json{{"p", p}, {"r0", r0}, {"cells", cells}, {"tail", tail}, {"cusp", cusp}};
        if (!cells_csv.empty()) cfg.params["cells_csv"] = cells_csv;
      } else if (hecke->parsed()) {
        cfg.command = "hecke";
        cfg.params = Json{{"prime", prime}, {"p_order", p_order}, {"dim", dim}};
        if (!samples_csv.empty()) {
          cfg.params["samples_csv"] = samples_csv;
          cfg.params["row_cap"] = row_cap;
        }
      } else if (mc->parsed()) {
        cfg.command = "mc";
        const BondWeights j(jv);
        cfg.params = Json{{"J", jv},
                          {"sizes", detail::parse_sizes(sizes_text, j, !no_auto_aspect)},
                          {"tmin", tmin},
                          {"tmax", tmax},
                          {"steps", steps},
                          {"samples", samples},
                          {"min_discard", min_discard}};
        if (!series_dir.empty()) cfg.params["series_dir"] = series_dir;
      } else if (sweep->parsed()) {
        cfg.command = "sweep";
        cfg.params = Json{{"primes", primes}, {"p_order", sweep_order}, {"r0", r0}, {"cells", cells}};
      }
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }

  if (output.empty()) return run(cfg, out, err);
  std::ofstream file(output);
  if (!file) {
    err << "error: cannot write --output '" << output << "'\n";
    return validation_failure;
  }
  return run(cfg, file, err);
}

}  // namespace latc::cli
