#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace latc {

/// Base of every error thrown by the library. `kind()` is a stable tag used
/// by the CLI to pick an exit code.
class Error : public std::runtime_error {
 public:
  enum class Kind { domain, rank_deficient, convergence, divergence, unsupported, validation, estimation, range };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(Kind::domain, what) {}
};

struct RankDeficientError : Error {
  explicit RankDeficientError(const std::string& what) : Error(Kind::rank_deficient, what) {}
};

struct ConvergenceError : Error {
  explicit ConvergenceError(const std::string& what) : Error(Kind::convergence, what) {}
};

struct UnsupportedError : Error {
  explicit UnsupportedError(const std::string& what) : Error(Kind::unsupported, what) {}
};

struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(Kind::validation, what) {}
};

// Raised when an estimator is handed fewer samples than it needs.
struct EstimationError : Error {
  EstimationError(const std::string& what, std::size_t required)
      : Error(Kind::estimation, what), required_(required) {}
  std::size_t required() const noexcept { return required_; }

 private:
  std::size_t required_;
};

/// A divergent integral. Carries the partial integrals (log R, I(R)) that were
/// observed before the growth test fired.
struct DivergenceError : Error {
  DivergenceError(const std::string& what, std::vector<std::pair<double, double>> partials)
      : Error(Kind::divergence, what), partials_(std::move(partials)) {}
  const std::vector<std::pair<double, double>>& partials() const noexcept { return partials_; }

 private:
  std::vector<std::pair<double, double>> partials_;
};

/// No Binder crossing in the scanned window; `detail` lists the curves.
struct RangeError : Error {
  RangeError(const std::string& what, std::string detail)
      : Error(Kind::range, what), detail_(std::move(detail)) {}
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string detail_;
};

}  // namespace latc
