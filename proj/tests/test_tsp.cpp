#include "doctest.h"

#include <random>

#include "cvrp/tsp.hpp"
#include "test_util.hpp"

using namespace cvrp;
using namespace cvrp_test;

namespace {

std::vector<std::vector<double>> rand_metric(int m, std::uint64_t seed) {
  // Points on a line segment keep the triangle inequality exact.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uu(0.0, 1.0);
  std::vector<std::pair<double, double>> pts(m);
  for (auto& p : pts) p = {uu(rng), uu(rng)};
  std::vector<std::vector<double>> w(m, std::vector<double>(m, 0.0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      w[i][j] = std::hypot(pts[i].first - pts[j].first,
                           pts[i].second - pts[j].second);
  return w;
}

std::vector<int> iota_ids(int m) {
  std::vector<int> v(m);
  for (int i = 0; i < m; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_CASE("mst basics") {
  auto unit = [](int a, int b) { return a == b ? 0.0 : 1.0; };
  CHECK(mst(iota_ids(5), unit).weight == doctest::Approx(4.0));

  // Collinear points at 0, 1, 3: the path is forced.
  std::vector<double> x = {0, 1, 3};
  auto line = [&](int a, int b) { return std::abs(x[a] - x[b]); };
  Tree t = mst(iota_ids(3), line);
  CHECK(t.weight == doctest::Approx(3.0));
}

TEST_CASE("mst equals spanning-tree enumeration") {
  for (int rep = 0; rep < 5; ++rep) {
    auto table = rand_metric(9, 300 + rep);
    auto w = [&](int a, int b) { return table[a][b]; };
    CHECK(mst(iota_ids(9), w).weight ==
          doctest::Approx(brute_mst(iota_ids(9), w)).epsilon(1e-9));
  }
}

TEST_CASE("euler_shortcut basics") {
  // A triangle stays a triangle.
  auto cycles = euler_shortcut({{0, 1}, {1, 2}, {2, 0}});
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].size() == 3);
  CHECK(cycles[0][0] == 0);

  // A doubled edge becomes the 2-vertex closed walk.
  cycles = euler_shortcut({{4, 7}, {4, 7}});
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0] == std::vector<int>{4, 7});

  CHECK_THROWS_AS(euler_shortcut({{0, 1}}), TspError);
}

TEST_CASE("doubled mst shortcut is at most twice the tree") {
  auto table = rand_metric(6, 9);
  auto w = [&](int a, int b) { return table[a][b]; };
  Tree t = mst(iota_ids(6), w);
  std::vector<std::pair<int, int>> doubled = t.edges;
  for (auto e : t.edges) doubled.push_back(e);
  auto cycles = euler_shortcut(doubled);
  REQUIRE(cycles.size() == 1);
  CHECK(cycle_weight(cycles[0], w) <= 2 * t.weight + 1e-9);
}

TEST_CASE("christofides degenerate sizes") {
  auto unit = [](int a, int b) { return a == b ? 0.0 : 1.0; };
  CHECK(christofides(iota_ids(6), unit).weight == doctest::Approx(6.0));
  HamCycle two = christofides({0, 5}, unit);
  CHECK(two.weight == doctest::Approx(2.0));
  CHECK(christofides({3}, unit).weight == doctest::Approx(0.0));
}

TEST_CASE("christofides is within 3/2 of the exact optimum") {
  for (int rep = 0; rep < 100; ++rep) {
    auto table = rand_metric(8, 5000 + rep);
    auto w = [&](int a, int b) { return table[a][b]; };
    HamCycle cs = christofides(iota_ids(8), w);
    HamCycle opt = tsp_exact(iota_ids(8), w);
    CHECK(cs.weight >= opt.weight - 1e-9);
    CHECK(cs.weight <= 1.5 * opt.weight + 1e-9);
  }
}

TEST_CASE("tsp_exact basics") {
  auto unit = [](int a, int b) { return a == b ? 0.0 : 1.0; };
  CHECK(tsp_exact(iota_ids(3), unit).weight == doctest::Approx(3.0));

  // Collinear 0, 1, 2, 3: out and back, weight 6.
  std::vector<double> x = {0, 1, 2, 3};
  auto line = [&](int a, int b) { return std::abs(x[a] - x[b]); };
  CHECK(tsp_exact(iota_ids(4), line).weight == doctest::Approx(6.0));

  CHECK_THROWS_AS(tsp_exact(iota_ids(15), unit), TspError);
}

TEST_CASE("tsp_exact agrees with permutation search") {
  for (int m : {4, 6, 8}) {
    for (int rep = 0; rep < 10; ++rep) {
      auto table = rand_metric(m, 7000 + 10 * m + rep);
      auto w = [&](int a, int b) { return table[a][b]; };
      CHECK(tsp_exact(iota_ids(m), w).weight ==
            doctest::Approx(brute_tsp(iota_ids(m), w)).epsilon(1e-9));
    }
  }
}
