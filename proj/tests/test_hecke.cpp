#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "latc/latc.hpp"
#include "oracles.hpp"

using namespace latc;

namespace {

std::vector<std::vector<long long>> to_rows(const IntMatrix& m) {
  std::vector<std::vector<long long>> rows(m.rows(), std::vector<long long>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

std::vector<NeighborMatrix> collect(const HeckePrime& hp) {
  std::vector<NeighborMatrix> out;
  for (auto n : enumerate_neighbors(hp)) out.push_back(std::move(n));
  return out;
}

}  // namespace

TEST(IsPrime, SmallAndLarge) {
  const std::set<std::uint64_t> small{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
  for (std::uint64_t n = 0; n < 100; ++n) EXPECT_EQ(is_prime(n), small.count(n) == 1) << n;
  EXPECT_TRUE(is_prime(1336337));
  EXPECT_TRUE(is_prime(100003));
  EXPECT_FALSE(is_prime(1336337ull * 3));
  EXPECT_TRUE(is_prime(18446744073709551557ull));
  EXPECT_FALSE(is_prime(3215031751ull));  // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_FALSE(is_prime(18446744073709551615ull));
}

TEST(HeckePrime, RejectsComposites) {
  EXPECT_THROW(HeckePrime(4, 2), ValidationError);
  EXPECT_THROW(HeckePrime(1, 2), ValidationError);
  EXPECT_THROW(HeckePrime(1336335, 2), ValidationError);
  EXPECT_THROW(HeckePrime(5, 1), ValidationError);
}

TEST(EnumerateNeighbors, PlanarPrimeTwo) {
  const auto ns = collect(HeckePrime(2, 2));
  ASSERT_EQ(ns.size(), 3u);
  IntMatrix a(2, 2), b(2, 2), c(2, 2);
  a << 2, 0, 0, 1;
  b << 1, 0, 0, 2;
  c << 1, 1, 0, 2;
  EXPECT_EQ(ns[0].entries, a);
  EXPECT_EQ(ns[1].entries, b);
  EXPECT_EQ(ns[2].entries, c);
}

TEST(EnumerateNeighbors, SmallCounts) {
  EXPECT_EQ(collect(HeckePrime(3, 2)).size(), 4u);
  EXPECT_EQ(collect(HeckePrime(2, 3)).size(), 7u);
  EXPECT_EQ(HeckePrime(1336337, 2).neighbor_count(), 1336338u);
}

TEST(EnumerateNeighbors, MatchesHermiteNormalFormOracle) {
  for (long long p : {2, 3, 5, 7})
    for (int d : {2, 3}) {
      const HeckePrime hp(static_cast<std::uint64_t>(p), d);
      const auto ours = collect(hp);
      const auto hnfs = oracle::hnf_of_determinant(p, d);
      const long long expected = (static_cast<long long>(std::pow(p, d)) - 1) / (p - 1);
      EXPECT_EQ(static_cast<long long>(hnfs.size()), expected);
      EXPECT_EQ(static_cast<long long>(ours.size()), expected);
      std::set<std::vector<std::vector<long long>>> oracle_set(hnfs.begin(), hnfs.end()), our_set;
      for (const auto& n : ours) our_set.insert(to_rows(n.entries));
      EXPECT_EQ(our_set, oracle_set) << "p = " << p << ", d = " << d;
    }
}

TEST(EnumerateNeighbors, BijectsOntoKernelsOfFunctionals) {
  for (long long p : {2, 3, 5, 7})
    for (int d : {2, 3}) {
      std::set<std::vector<long long>> functionals;
      for (const auto& n : collect(HeckePrime(static_cast<std::uint64_t>(p), d))) {
        const auto f = oracle::annihilating_functional(to_rows(n.entries), p);
        ASSERT_FALSE(f.empty());
        functionals.insert(f);
      }
      const long long expected = (static_cast<long long>(std::pow(p, d)) - 1) / (p - 1);
      EXPECT_EQ(static_cast<long long>(functionals.size()), expected);
    }
}

TEST(EnumerateNeighbors, ShapeInvariants) {
  for (const auto& n : collect(HeckePrime(5, 3))) {
    EXPECT_EQ(detail::int_determinant(n.entries), 5);
    int p_count = 0;
    for (int i = 0; i < 3; ++i) {
      p_count += n.entries(i, i) == 5;
      for (int j = 0; j < i; ++j) EXPECT_EQ(n.entries(i, j), 0);
    }
    EXPECT_EQ(p_count, 1);
  }
}

TEST(EnumerateNeighbors, Deterministic) {
  const auto a = collect(HeckePrime(7, 3)), b = collect(HeckePrime(7, 3));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].entries, b[i].entries);
}

TEST(EnumerateNeighbors, OrderIsPivotThenLexicographic) {
  const auto ns = collect(HeckePrime(3, 3));
  for (std::size_t i = 1; i < ns.size(); ++i) {
    const auto &a = ns[i - 1], &b = ns[i];
    EXPECT_TRUE(a.pivot < b.pivot || (a.pivot == b.pivot && a.offsets < b.offsets));
  }
}

TEST(NeighborLattice, Unimodular) {
  for (int d : {2, 3})
    for (const auto& n : collect(HeckePrime(7, d))) EXPECT_LT(std::abs(neighbor_lattice(n).covolume() - 1.0), 1e-12);
  const HeckePrime big(1336337, 2);
  for (std::uint64_t i : {0ull, 1ull, 999ull, 1336337ull}) EXPECT_LT(std::abs(neighbor_lattice(neighbor_at(big, i)).covolume() - 1.0), 1e-12);
}

TEST(NeighborLattice, DiagonalPlanar) {
  IntMatrix m(2, 2);
  m << 2, 0, 0, 1;
  const auto b = neighbor_lattice({m, 0, {}});
  EXPECT_NEAR(b.covolume(), 1.0, 1e-15);
}

TEST(NeighborLattice, ShearedPlanarMatchesBruteForce) {
  IntMatrix m(2, 2);
  m << 1, 1, 0, 2;
  const auto b = neighbor_lattice({m, 1, {1}});
  const auto mins = successive_minima(b);
  const auto reduced = gauss_reduce(b);
  const Matrix& g = b.matrix();
  const auto o = oracle::box_minima_2d({g(0, 0), g(1, 0)}, {g(0, 1), g(1, 1)}, 10);
  EXPECT_NEAR(mins.values[0], o.lambda1, 1e-14);
  EXPECT_NEAR(mins.values[1], o.lambda2, 1e-14);
  EXPECT_NEAR(reduced.column(0).norm(), o.lambda1, 1e-14);
  EXPECT_NEAR(reduced.column(1).norm(), o.lambda2, 1e-14);
  // Row span of [[1,1],[0,2]] is the checkerboard lattice {x ≡ y mod 2}/√2.
  EXPECT_NEAR(o.lambda1, 1.0, 1e-14);
  EXPECT_NEAR(o.lambda2, 1.0, 1e-14);
}

TEST(NeighborLattice, DiagonalSpatial) {
  IntMatrix m = IntMatrix::Identity(3, 3);
  m(0, 0) = 2;
  const auto mins = successive_minima(neighbor_lattice({m, 0, {}}));
  const double c = std::pow(2.0, -1.0 / 3.0);
  EXPECT_NEAR(mins.values[0], c, 1e-14);
  EXPECT_NEAR(mins.values[1], c, 1e-14);
  EXPECT_NEAR(mins.values[2], 2 * c, 1e-14);
}

TEST(HeckeMoment, IntegerPathMatchesGeneralPath) {
  // The streamed planar path reduces in exact integers; it must agree with
  // the generic lattice pipeline.
  const HeckePrime hp(101, 2);
  const auto fast = hecke_moment(hp, 1.0);
  const auto slow = hecke_moment(hp, 1.0, [](const LatticeBasis& b) { return tc_of_lattice(b).value; });
  EXPECT_NEAR(fast.value, slow.value, 1e-12 * slow.value);
}

TEST(HeckeMoment, IndependentOfWorkerCountAndChunking) {
  const HeckePrime hp(10007, 2);
  const auto a = hecke_moment(hp, 2.0, {}, {1, 1000});
  const auto b = hecke_moment(hp, 2.0, {}, {5, 1000});
  EXPECT_EQ(a.value, b.value);
  const auto c = hecke_moment(hp, 2.0, {}, {3, 333});
  EXPECT_NEAR(a.value, c.value, 1e-13 * a.value);
}

TEST(HeckeMoment, Diagnostics) {
  const auto m = hecke_moment(HeckePrime(1009, 2), 1.0);
  EXPECT_EQ(m.method, MomentMethod::hecke);
  EXPECT_EQ(m.diagnostics["neighbor_count"], 1010);
  EXPECT_NEAR(m.diagnostics["min_lambda1"].get<double>(), 1 / std::sqrt(1009.0), 1e-14);
  EXPECT_LE(m.diagnostics["max_lambda1"].get<double>(), std::sqrt(2 / std::sqrt(3.0)) + 1e-12);
  EXPECT_EQ(m.value, m.bulk_value + m.tail_value);
}

TEST(HeckeMoment, SpatialNeedsEstimator) {
  EXPECT_THROW(hecke_moment(HeckePrime(3, 3), 1.0), UnsupportedError);
  const auto m = hecke_moment(HeckePrime(3, 3), 1.0, [](const LatticeBasis& b) { return mean_field_bound(bond_weights(successive_minima(b))); });
  EXPECT_GT(m.value, 0);
  EXPECT_EQ(m.diagnostics["neighbor_count"], 13);
}

TEST(HeckeMoment, ApproachesQuadratureOverSweep) {
  QuadratureSpec s;
  s.workers = default_workers();
  const double reference = moment(s).value;
  int inversions = 0;
  double prev = INFINITY;
  for (std::uint64_t p : {101ull, 1009ull, 10007ull, 100003ull}) {
    const double dev = std::abs(hecke_moment(HeckePrime(p, 2), 1.0, {}, {default_workers()}).value - reference);
    inversions += dev > prev;
    prev = dev;
  }
  EXPECT_LE(inversions, 1);
  EXPECT_LT(prev, 0.005);
}

TEST(HeckeSamples, RowsMatchStream) {
  const HeckePrime hp(11, 2);
  const auto rows = hecke_samples(hp, 5);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.matrix.entries, neighbor_at(hp, r.index).entries);
    const auto s = detail::sample_2d(11, r.index);
    EXPECT_NEAR(r.tc, s.tc, 1e-12 * s.tc);
    EXPECT_NEAR(r.minima[0], s.lambda1, 1e-14);
  }
  EXPECT_EQ(hecke_samples(hp, 100).size(), 12u);
}
