// Critical temperature of the unimodular lattice attached to points of the
// fundamental domain, walking up the imaginary axis into the cusp.
#include <cstdio>

#include "latc/latc.hpp"

int main() {
  const double heights[] = {1.0, 1.5, 2.0, 4.0, 10.0, 100.0, 1000.0};
  std::printf("%8s %8s %14s %14s %14s\n", "x", "y", "T_c", "cusp_balance", "two_term");
  for (double x : {0.0, 0.25, 0.5}) {
    for (double y : heights) {
      if (x * x + y * y < 1.0) continue;
      const latc::ModularPoint z(x, y);
      const auto basis = latc::modular_point_to_lattice(z);
      const double tc = latc::tc_of_lattice(basis).value;
      const double r = z.r();
      std::printf("%8.3f %8.2f %14.9f", x, y, tc);
      if (r > std::exp(1.0))
        std::printf(" %14.9f %14.9f\n", std::sqrt(y) * latc::cusp_balance_tc(std::log(r)), std::sqrt(y) * latc::asymptotic_tc(r).value);
      else
        std::printf(" %14s %14s\n", "-", "-");
    }
  }
}
