// Hecke-point averages of T_c over growing primes, compared with the
// quadrature value of the same moment.
#include <cstdio>
#include <cstdlib>

#include "latc/latc.hpp"

int main(int argc, char** argv) {
  const double q = argc > 1 ? std::atof(argv[1]) : 1.0;
  latc::QuadratureSpec spec;
  spec.p = q;
  spec.workers = latc::default_workers();
  const double reference = latc::moment(spec).value;
  std::printf("quadrature m(T^%g) = %.9f\n", q, reference);
  std::printf("%10s %14s %12s %12s\n", "prime", "hecke", "|dev|", "p^(-1/8)");
  for (std::uint64_t p : {101ull, 1009ull, 10007ull, 100003ull}) {
    const auto m = latc::hecke_moment(latc::HeckePrime(p, 2), q, {}, latc::HeckeOptions{spec.workers});
    std::printf("%10llu %14.9f %12.3e %12.3e\n", static_cast<unsigned long long>(p), m.value, std::abs(m.value - reference),
                std::pow(static_cast<double>(p), -0.125));
  }
}
