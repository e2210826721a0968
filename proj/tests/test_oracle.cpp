#include "doctest.h"

#include "cvrp/oracle.hpp"
#include "cvrp/tsp.hpp"
#include "test_util.hpp"

using namespace cvrp;
using namespace cvrp_test;

TEST_CASE("exact_cvrp smallest instances") {
  Instance one = rand_instance(1, 3, Variant::unit, 2);
  CHECK(exact_cvrp(one).optimum == doctest::Approx(2 * one.w(0, 1)));

  // Two unit customers, all distances 1, k = 3: one tour of weight 3.
  Instance two = unit_metric_instance(2, 3, Variant::unit);
  CHECK(exact_cvrp(two).optimum == doctest::Approx(3.0));

  // Unsplittable demands (2, 2), k = 3: two trivial tours.
  Instance uns = unit_metric_instance(2, 3, Variant::unsplittable, {2, 2});
  CHECK(exact_cvrp(uns).optimum == doctest::Approx(4.0));
}

TEST_CASE("exact_cvrp returns a feasible itinerary of the reported weight") {
  for (int rep = 0; rep < 5; ++rep) {
    Instance inst = rand_instance(6, 3, Variant::unsplittable, 40 + rep);
    OracleResult r = exact_cvrp(inst);
    check_feasible(inst, r.itinerary);
    CHECK(r.itinerary.total_weight(inst) == doctest::Approx(r.optimum));
    CHECK(r.states_expanded > 0);
  }
}

TEST_CASE("exact_cvrp enforces its size cap") {
  Instance big = rand_instance(13, 3, Variant::unit, 1);
  CHECK_THROWS_AS(exact_cvrp(big), OracleError);
  CHECK_NOTHROW(exact_cvrp(big, 13));

  // CVRP_ORACLE_NMAX overrides the default cap.
  setenv("CVRP_ORACLE_NMAX", "13", 1);
  CHECK(oracle_nmax_default() == 13);
  CHECK_NOTHROW(exact_cvrp(big));
  unsetenv("CVRP_ORACLE_NMAX");
  CHECK(oracle_nmax_default() == 12);
}

TEST_CASE("splittable oracle equals the unit oracle on the expansion") {
  for (int rep = 0; rep < 5; ++rep) {
    Instance inst = rand_instance(3, 3, Variant::splittable, 70 + rep, 3);
    UnitExpansion exp = expand_unit(inst);
    if (exp.expanded.n > 10) continue;
    CHECK(exact_cvrp(inst).optimum ==
          doctest::Approx(exact_cvrp(exp.expanded).optimum).epsilon(1e-12));
  }
}

TEST_CASE("exact_mod_k_cycle_packing") {
  auto unit = [](int a, int b) { return a == b ? 0.0 : 1.0; };
  std::vector<int> v3 = {0, 1, 2};
  CHECK(exact_mod_k_cycle_packing(v3, unit, 3) ==
        doctest::Approx(tsp_exact(v3, unit).weight));

  std::vector<int> v6 = {0, 1, 2, 3, 4, 5};
  CHECK(exact_mod_k_cycle_packing(v6, unit, 3) == doctest::Approx(6.0));

  CHECK_THROWS_AS(exact_mod_k_cycle_packing({0, 1, 2, 3}, unit, 3),
                  OracleError);
}

TEST_CASE("exact_mod_k against a hand enumeration on six vertices") {
  Instance inst = rand_instance(6, 3, Variant::unit, 9);
  auto w = [&](int a, int b) { return inst.w(a, b); };
  std::vector<int> ids = inst.customer_ids();
  // min over {one 6-cycle} and all ways to split into two triangles.
  double best = brute_tsp(ids, w);
  for (int a = 1; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b) {
      std::vector<int> tri = {ids[0], ids[a], ids[b]};
      std::vector<int> rest;
      for (int i = 1; i < 6; ++i)
        if (i != a && i != b) rest.push_back(ids[i]);
      double wt = brute_tsp(tri, w) + brute_tsp(rest, w);
      best = std::min(best, wt);
    }
  CHECK(exact_mod_k_cycle_packing(ids, w, 3) ==
        doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("exact_2factor and exact_4cycle_packing") {
  auto unit = [](int a, int b) { return a == b ? 0.0 : 1.0; };
  CHECK(exact_2factor({0, 1, 2}, unit) == doctest::Approx(3.0));

  std::vector<std::pair<double, double>> pts = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto w = [&](int a, int b) {
    return std::hypot(pts[a].first - pts[b].first,
                      pts[a].second - pts[b].second);
  };
  CHECK(exact_2factor({0, 1, 2, 3}, w) == doctest::Approx(4.0));
  CHECK(exact_4cycle_packing({0, 1, 2, 3}, w) == doctest::Approx(4.0));
  CHECK_THROWS_AS(exact_4cycle_packing({0, 1, 2}, w), OracleError);
}
