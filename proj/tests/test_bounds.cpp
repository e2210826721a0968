#include "doctest.h"

#include <cmath>

#include "cvrp/bounds.hpp"
#include "cvrp/oracle.hpp"
#include "test_util.hpp"

using namespace cvrp;
using namespace cvrp_test;

TEST_CASE("lb_instance basics") {
  Instance one = rand_instance(1, 3, Variant::unit, 3);
  double lb = lb_instance(one);
  CHECK(lb == doctest::Approx(std::max(2.0 / 3 * one.w(0, 1), one.w(0, 1))));
  CHECK(lb <= exact_cvrp(one).optimum + 1e-9);

  Instance um = unit_metric_instance(3, 3, Variant::unit);
  CHECK(lb_instance(um) == doctest::Approx(3.0));  // max{2, MST = 3}
  CHECK(exact_cvrp(um).optimum == doctest::Approx(4.0));
}

TEST_CASE("lb_instance stays below the optimum") {
  for (int rep = 0; rep < 20; ++rep) {
    auto variant = rep % 2 ? Variant::unit : Variant::unsplittable;
    Instance inst = rand_instance(3 + rep % 5, 3 + rep % 3, variant,
                                  900 + rep);
    CHECK(lb_instance(inst) <= exact_cvrp(inst).optimum + 1e-9);
  }
}

TEST_CASE("ratio_split_tradeoff frozen values") {
  CHECK(ratio_split_tradeoff(1.5, 5).value == doctest::Approx(1.8));
  CHECK(ratio_split_tradeoff(1.5, 7).value == doctest::Approx(2.0));
  CHECK(ratio_split_tradeoff(1.0, 3).value == doctest::Approx(1.5));
  for (int k = 3; k <= 12; ++k)
    CHECK(ratio_split_tradeoff(1.0, k).value ==
          doctest::Approx(2.0 - 1.5 / k));
  CHECK_THROWS_AS(ratio_split_tradeoff(1.6, 5), BoundsError);
}

TEST_CASE("ratio_split_final frozen values") {
  CHECK(ratio_split_final(3).value == doctest::Approx(2.5 - 5.0 / 6));
  CHECK(ratio_split_final(10).value == doctest::Approx(2.025));
  CHECK(ratio_split_final(29).value == doctest::Approx(2.22414).epsilon(2e-5));
}

TEST_CASE("ratio_split_final strict sqrt bound") {
  for (int k = 3; k <= 1000000; k = k < 100 ? k + 1 : k * 7 / 5)
    CHECK(ratio_split_final(k).value < 2.5 - std::sqrt(2.0 / k));
}

TEST_CASE("ratio_unsplit_tradeoff frozen values") {
  CHECK(ratio_unsplit_tradeoff(1.5, 3).value ==
        doctest::Approx(1.5 + std::log(1.5)));
  CHECK(ratio_unsplit_tradeoff(1.5, 5).value ==
        doctest::Approx(5.0 / 3 + std::log(5.0 / 3)));
  CHECK(ratio_unsplit_tradeoff(1.5, 6).value ==
        doctest::Approx(15.0 / 8 + std::log(4.0 / 3)));
  CHECK(ratio_unsplit_tradeoff(1.5, 6).value < 2.163);
}

TEST_CASE("ratio_unsplit_final frozen values") {
  CHECK(ratio_unsplit_final(7).value == doctest::Approx(2.343).epsilon(2e-3));
  CHECK(ratio_unsplit_final(10).value == doctest::Approx(2.448).epsilon(2e-3));
  CHECK(ratio_unsplit_final(11720).value ==
        doctest::Approx(3.17973).epsilon(2e-5));
  // Below 7 the trade-off at alpha = 3/2 applies unchanged.
  CHECK(ratio_unsplit_final(5).value ==
        doctest::Approx(ratio_unsplit_tradeoff(1.5, 5).value));
}

TEST_CASE("unsplit5 special ratio") {
  double r = ratio_unsplit5_special();
  CHECK(r < 2.157);
  CHECK(r == doctest::Approx(2.157).epsilon(1e-3));
}

TEST_CASE("lp_closed_form frozen values") {
  CHECK(lp_closed_form(3).l == 1);
  CHECK(lp_closed_form(3).value == doctest::Approx(1.0));
  CHECK(lp_closed_form(10).l == 2);
  CHECK(lp_closed_form(10).value == doctest::Approx(0.525));
}

TEST_CASE("lp_closed_form against the monotone-simplex grid oracle") {
  for (int k = 3; k <= 30; ++k) {
    int m = (k + 2) / 2;  // ceil((k+1)/2)
    std::vector<double> c(m);
    c[0] = (k + 3.0) / (2.0 * k);
    for (int i = 2; i <= m; ++i) c[i - 1] = 2.0 * i / k;
    double grid = monotone_lp_grid_min(c, 60);
    CHECK(lp_closed_form(k).value == doctest::Approx(grid).epsilon(1e-6));
  }
}

TEST_CASE("core value is consistent with the LP closed form for all k") {
  for (int k = 3; k <= 200; ++k) {
    LpClosedForm f = lp_closed_form(k);
    double core = 2.0 - (2.0 * f.l * f.l + k - 1) / (2.0 * k * f.l);
    CHECK((2.0 * k + 1) / k - f.value == doctest::Approx(core).epsilon(1e-12));
  }
}

TEST_CASE("table_report rows") {
  auto rows = table_report("split", 3, 10, 1.5);
  CHECK(rows.size() == 8);
  CHECK(rows[3].k == 6);
  CHECK(rows[3].final_ratio == doctest::Approx(1.875));
  CHECK(*rows[0].special == doctest::Approx(1.5));
  CHECK(!rows[2].special.has_value());

  auto urows = table_report("unsplit", 9, 9, 1.5);
  CHECK(urows[0].final_ratio == doctest::Approx(2.471).epsilon(2e-3));

  auto big = table_report("split", 5834, 5834, 1.5);
  CHECK(big[0].final_ratio == doctest::Approx(2.48141).epsilon(2e-5));

  CHECK_THROWS_AS(table_report("split", 2, 4, 1.5), BoundsError);
  CHECK(!render_table_text("split", rows).empty());
}
