#include "doctest.h"

#include "cvrp/instance.hpp"
#include "cvrp/oracle.hpp"
#include "test_util.hpp"

using namespace cvrp;
using namespace cvrp_test;

TEST_CASE("parse minimal instance") {
  Instance inst = parse_instance(
      "CVRP k 3 variant unit n 1\n"
      "demands 1\n"
      "matrix\n"
      "0 1\n"
      "1 0\n");
  CHECK(inst.n == 1);
  CHECK(inst.k == 3);
  CHECK(inst.variant == Variant::unit);
  CHECK(inst.w(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("parse rejects unsplittable demand at capacity") {
  CHECK_THROWS_WITH_AS(parse_instance("CVRP k 3 variant unsplittable n 1\n"
                                      "demands 3\n"
                                      "matrix\n"
                                      "0 1\n"
                                      "1 0\n"),
                       "demand >= capacity", InstanceError);
}

TEST_CASE("parse computes euclidean distances without rounding") {
  Instance inst = parse_instance(
      "CVRP k 3 variant unit n 1\n"
      "demands 1\n"
      "coords\n"
      "0 0\n"
      "3 4\n");
  CHECK(inst.w(0, 1) == doctest::Approx(5.0));
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_instance("bogus\n"), InstanceError);
  CHECK_THROWS_AS(parse_instance("CVRP k 3 variant unit n 2\n"
                                 "demands 1\n"
                                 "matrix\n0 1\n1 0\n"),
                  InstanceError);
  // Non-symmetric matrix.
  CHECK_THROWS_AS(parse_instance("CVRP k 3 variant unit n 1\n"
                                 "demands 1\n"
                                 "matrix\n0 1\n2 0\n"),
                  InstanceError);
  // Triangle inequality violation.
  CHECK_THROWS_AS(parse_instance("CVRP k 3 variant unit n 2\n"
                                 "demands 1 1\n"
                                 "matrix\n0 1 5\n1 0 1\n5 1 0\n"),
                  InstanceError);
}

TEST_CASE("serialize then parse is the identity") {
  for (auto variant :
       {Variant::unit, Variant::splittable, Variant::unsplittable}) {
    for (auto metric : {MetricKind::euclidean_unit_square,
                        MetricKind::random_shortest_path_closure}) {
      Instance inst = gen_random(6, 4, variant, metric, 99, 3);
      Instance back = parse_instance(serialize(inst));
      CHECK(back.n == inst.n);
      CHECK(back.k == inst.k);
      CHECK(back.variant == inst.variant);
      CHECK(back.demands == inst.demands);
      CHECK(back.weights == inst.weights);
    }
  }
}

TEST_CASE("gen_random is deterministic and respects demand ranges") {
  Instance a = rand_instance(5, 3, Variant::unit, 7);
  Instance b = rand_instance(5, 3, Variant::unit, 7);
  CHECK(serialize(a) == serialize(b));

  Instance c = gen_random(8, 4, Variant::unsplittable,
                          MetricKind::random_shortest_path_closure, 11);
  for (long long d : c.demands) {
    CHECK(d >= 1);
    CHECK(d <= 3);
  }
  validate(c);  // closure metric passes the exact triangle check
}

TEST_CASE("expand_unit replicates demands as colocated copies") {
  Instance inst = unit_metric_instance(1, 3, Variant::splittable, {3});
  UnitExpansion exp = expand_unit(inst);
  CHECK(exp.expanded.n == 3);
  CHECK(exp.expanded.variant == Variant::unit);

  Instance two = rand_instance(2, 3, Variant::splittable, 5, 2);
  two.demands = {2, 1};
  UnitExpansion e2 = expand_unit(two);
  CHECK(e2.expanded.n == 3);
  CHECK(e2.expanded.w(1, 2) == 0.0);  // both copies of customer 1
  CHECK(e2.expanded.w(1, 3) == doctest::Approx(two.w(1, 2)));
}

TEST_CASE("expansion preserves the optimal value") {
  Instance inst = rand_instance(2, 3, Variant::splittable, 21, 3);
  UnitExpansion exp = expand_unit(inst);
  OracleResult a = exact_cvrp(inst);
  OracleResult b = exact_cvrp(exp.expanded);
  CHECK(a.optimum == doctest::Approx(b.optimum).epsilon(1e-12));
}

TEST_CASE("pad_depot_customers") {
  Instance inst = rand_instance(2, 3, Variant::unit, 13);
  CHECK(serialize(pad_depot_customers(inst, 0)) == serialize(inst));

  Instance padded = pad_depot_customers(inst, 1);
  CHECK(padded.n == 3);
  CHECK(padded.n % 3 == 0);
  CHECK(padded.w(0, 3) == 0.0);
  CHECK(padded.w(1, 3) == doctest::Approx(inst.w(0, 1)));
  validate(padded);

  OracleResult a = exact_cvrp(inst);
  OracleResult b = exact_cvrp(padded);
  CHECK(a.optimum == doctest::Approx(b.optimum).epsilon(1e-12));
}

TEST_CASE("padding never changes the oracle optimum") {
  for (int n = 1; n <= 6; ++n) {
    Instance inst = rand_instance(n, 3, Variant::unit, 100 + n);
    for (int m : {1, 2, 5}) {
      OracleResult a = exact_cvrp(inst);
      OracleResult b = exact_cvrp(pad_depot_customers(inst, m));
      CHECK(a.optimum == doctest::Approx(b.optimum).epsilon(1e-12));
    }
  }
}

TEST_CASE("stripping a padded customer keeps tour weight unchanged") {
  Instance inst = rand_instance(2, 3, Variant::unit, 17);
  Instance padded = pad_depot_customers(inst, 1);
  Itinerary it;
  Tour t;
  t.customers = {3, 1, 2};  // padded customer rides along at the front
  t.deliver = {1, 1, 1};
  it.tours.push_back(t);
  double before = it.total_weight(padded);
  Itinerary stripped = strip_padding(padded, inst.n, it);
  CHECK(stripped.total_weight(padded) == doctest::Approx(before));
}

TEST_CASE("check_feasible catches broken itineraries") {
  Instance inst = unit_metric_instance(2, 3, Variant::unit);
  Itinerary it;
  Tour t;
  t.customers = {1, 2};
  t.deliver = {1, 1};
  it.tours.push_back(t);
  CHECK_NOTHROW(check_feasible(inst, it));

  Itinerary over;
  Tour t2;
  t2.customers = {1, 2};
  t2.deliver = {2, 2};  // exceeds capacity and demand
  over.tours.push_back(t2);
  CHECK_THROWS_AS(check_feasible(inst, over), InstanceError);

  Itinerary missing;
  Tour t3;
  t3.customers = {1};
  t3.deliver = {1};
  missing.tours.push_back(t3);
  CHECK_THROWS_AS(check_feasible(inst, missing), InstanceError);
}
