#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <utility>

#include "latc/lattice/basis.hpp"

namespace latc {

template <class T>
struct Vec2 {
  T x{};
  T y{};

  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(T s, Vec2 a) { return {s * a.x, s * a.y}; }
};

template <class T>
constexpr T dot(Vec2<T> a, Vec2<T> b) {
  return a.x * b.x + a.y * b.y;
}

/// Result of a two-dimensional reduction: the reduced pair plus the integer
/// change of basis, columns of `transform` being the coefficients of v1, v2
/// in the input basis.
template <class T>
struct GaussReduced {
  Vec2<T> v1;
  Vec2<T> v2;
  std::array<std::array<long long, 2>, 2> transform{{{1, 0}, {0, 1}}};  // transform[col][row]
};

namespace detail {

// Nearest integer to num/den for den > 0, ties toward +inf.
inline long long nearest_quotient(long long num, long long den) {
  long long q = num / den;
  long long r = num % den;
  if (r < 0) {
    r += den;
    --q;
  }
  if (2 * r >= den) ++q;
  return q;
}

template <class T>
long long nearest_multiple(T num, T den) {
  if constexpr (std::integral<T>)
    return nearest_quotient(static_cast<long long>(num), static_cast<long long>(den));
  else
    return static_cast<long long>(std::floor(num / den + T(0.5)));
}

}  // namespace detail

/// Lagrange–Gauss reduction. On return ‖v1‖ ≤ ‖v2‖ are the two successive
/// minima and |⟨v1,v2⟩| ≤ ‖v1‖²/2. Exact for integer T (products must fit
/// the type); for floating T it terminates once no size reduction applies.
template <class T>
GaussReduced<T> gauss_reduce(Vec2<T> a, Vec2<T> b) {
  GaussReduced<T> out{a, b};
  auto& [c1, c2] = out.transform;
  if (dot(b, b) < dot(a, a)) {
    std::swap(out.v1, out.v2);
    std::swap(c1, c2);
  }
  for (int guard = 0; guard < 10'000; ++guard) {
    const T n1 = dot(out.v1, out.v1);
    const long long mu = detail::nearest_multiple(dot(out.v1, out.v2), n1);
    if (mu != 0) {
      out.v2 = out.v2 - static_cast<T>(mu) * out.v1;
      c2[0] -= mu * c1[0];
      c2[1] -= mu * c1[1];
    }
    if (dot(out.v2, out.v2) < n1) {
      std::swap(out.v1, out.v2);
      std::swap(c1, c2);
      continue;
    }
    if (mu == 0) break;
  }
  return out;
}

/// Basis-level wrapper: columns of the result are (v1, v2) with ‖v1‖ ≤ ‖v2‖.
inline LatticeBasis gauss_reduce(const LatticeBasis& basis) {
  if (basis.dim() != 2) throw UnsupportedError("gauss_reduce requires d = 2, got d = " + std::to_string(basis.dim()));
  const Matrix& g = basis.matrix();
  const auto r = gauss_reduce(Vec2<double>{g(0, 0), g(1, 0)}, Vec2<double>{g(0, 1), g(1, 1)});
  Matrix out(2, 2);
  out << r.v1.x, r.v2.x, r.v1.y, r.v2.y;
  return LatticeBasis(std::move(out));
}

}  // namespace latc
