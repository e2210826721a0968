// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, in code.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "cvrp/bounds.hpp"
#include "cvrp/instance.hpp"
#include "cvrp/lp.hpp"
#include "cvrp/matching.hpp"
#include "cvrp/oracle.hpp"
#include "cvrp/packing.hpp"
#include "cvrp/split_solvers.hpp"
#include "cvrp/tsp.hpp"
#include "cvrp/unsplit_solvers.hpp"
#include "test_util.hpp"

using namespace cvrp;
using namespace cvrp_test;

namespace {

int g_failures = 0;

void report(int criterion, const char* what, bool ok,
            const std::string& detail = "") {
  std::printf("%s criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
              what, detail.empty() ? "" : " — ", detail.c_str());
  if (!ok) ++g_failures;
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --------------------------------------------------------------- criterion 1
void criterion1() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  auto expect = [&](double got, double want, double tol, const char* tag) {
    if (std::abs(got - want) > tol) {
      ok = false;
      char buf[128];
      std::snprintf(buf, sizeof(buf), "%s: got %.6f want %.6f; ", tag, got,
                    want);
      detail += buf;
    }
  };

  const double sec5[] = {1.500, 1.500};
  const double sec6[] = {1.556, 1.709, 1.800, 1.917,
                         2.000, 2.063, 2.112, 2.150};
  const double sec7[] = {1.667, 1.750, 1.800, 1.875,
                         1.929, 1.969, 2.000, 2.025};
  auto split_rows = table_report("split", 3, 10, 1.5);
  for (int i = 0; i < 8; ++i) {
    if (i < 2) expect(*split_rows[i].special, sec5[i], 0.002, "T1 special");
    expect(split_rows[i].tradeoff, sec6[i], 0.002, "T1 sec6");
    expect(split_rows[i].final_ratio, sec7[i], 0.002, "T1 sec7");
  }
  for (int i = 2; i < 8; ++i)
    if (split_rows[i].special) {
      ok = false;
      detail += "T1 unexpected special; ";
    }

  const double spec2[] = {1.500, 1.750, 2.157};
  const double sec10[] = {1.906, 1.955, 2.178, 2.163,
                          2.351, 2.383, 2.537, 2.538};
  const double sec11[] = {1.906, 1.955, 2.178, 2.163,
                          2.343, 2.337, 2.471, 2.448};
  auto unsplit_rows = table_report("unsplit", 3, 10, 1.5);
  for (int i = 0; i < 8; ++i) {
    if (i < 3) expect(*unsplit_rows[i].special, spec2[i], 0.002, "T2 special");
    expect(unsplit_rows[i].tradeoff, sec10[i], 0.002, "T2 sec10");
    expect(unsplit_rows[i].final_ratio, sec11[i], 0.002, "T2 sec11");
  }

  expect(ratio_split_final(29).value, 2.22414, 2e-5, "k=29");
  expect(ratio_split_final(5834).value, 2.48141, 2e-5, "k=5834");
  expect(ratio_unsplit_final(11720).value, 3.17973, 2e-5, "k=11720");

  double secs = elapsed_s(t0);
  if (secs >= 1.0) {
    ok = false;
    detail += "runtime " + std::to_string(secs) + "s; ";
  }
  report(1, "ratio tables match the frozen reference values", ok,
         detail);
}

// --------------------------------------------------------------- criterion 2
void criterion2() {
  bool ok = true;
  std::string detail;
  for (int k = 3; k <= 60 && ok; ++k) {
    int m = (k + 2) / 2;
    std::vector<double> c(m);
    c[0] = (k + 3.0) / (2.0 * k);
    for (int i = 2; i <= m; ++i) c[i - 1] = 2.0 * i / k;
    double grid = monotone_lp_grid_min(c, 60);
    if (std::abs(lp_closed_form(k).value - grid) > 1e-6) {
      ok = false;
      detail = "closed form mismatch at k=" + std::to_string(k);
    }
  }
  for (int k = 3; k <= 1000000 && ok; ++k) {
    if (!(ratio_split_final(k).value < 2.5 - std::sqrt(2.0 / k))) {
      ok = false;
      detail = "strict bound failed at k=" + std::to_string(k);
    }
  }
  report(2, "lp/core closed forms match the grid oracle; strict sqrt bound",
         ok, detail);
}

// --------------------------------------------------------------- criterion 3
void criterion3() {
  bool ok = true;
  std::string detail;
  int runs = 0;
  std::mt19937_64 rng(20240817);

  auto check = [&](double weight, double bound, double scale,
                   const char* tag) {
    ++runs;
    if (weight > bound + 1e-9 * std::max(1.0, scale)) {
      ok = false;
      detail = std::string(tag) + " violated";
    }
  };

  for (int rep = 0; rep < 500 && ok; ++rep) {
    int k = 3 + rep % 4;
    // Unit-demand instance, expanded size <= 10.
    int n = 3 + static_cast<int>(rng() % 8);
    Instance unit = rand_instance(n, k, Variant::unit, 33000 + rep);
    double scale = 0;
    for (double w : unit.weights) scale = std::max(scale, w);

    HamCycle h = christofides_cycle(unit);
    SolveResult ag = ag_itp(unit, h);
    check(ag.weight, ag.certified_bound, scale, "ag_itp");

    auto wf = [&](int a, int b) { return unit.w(a, b); };
    HamCycle c = christofides(unit.customer_ids(), wf);
    SolveResult hr = hr_itp(unit, c.order);
    check(hr.weight, hr.certified_bound, scale, "hr_itp");

    if (unit.n >= 3) {
      SolveResult ex = ex_itp(unit, min_cycle_packing(unit.customer_ids(), wf));
      check(ex.weight, ex.certified_bound, scale, "ex_itp");
    }

    // Unsplittable instance with expansion size <= 10 (rejection sampling).
    Instance uns;
    for (std::uint64_t s = 44000 + 17 * rep;; ++s) {
      uns = rand_instance(3 + static_cast<int>(rng() % 3), k,
                          Variant::unsplittable, s);
      long long total = 0;
      for (auto d : uns.demands) total += d;
      if (total <= 10) break;
    }
    SolveResult re = refined_ag_uitp(uns, christofides_cycle(uns));
    check(re.weight, re.certified_bound, scale, "refined_ag_uitp");

    // EX-UITP over the small customers of one cycle.
    std::vector<int> smalls;
    for (int v : uns.customer_ids())
      if (!is_big(uns, v)) smalls.push_back(v);
    if (smalls.size() >= 2) {
      CyclePacking p;
      p.cycles = {smalls};
      auto uwf = [&](int a, int b) { return uns.w(a, b); };
      p.weight = cycle_weight(smalls, uwf);
      SolveResult eu = ex_uitp(uns, p);
      check(eu.weight, eu.certified_bound, scale, "ex_uitp");
    }

    // build_local_tours: rule1 on a fitting prefix; rule2/rule3 on
    // synthetic demand profiles when k >= 4.
    if (k >= 4) {
      Instance prof = rand_instance(6, k, Variant::unsplittable,
                                    55000 + rep, 1);
      // rule2: all demands small, total > k.
      for (int i = 0; i < 6; ++i)
        prof.demands[i] = 1 + static_cast<long long>(rng() % (k / 2));
      long long total = 0;
      for (auto d : prof.demands) total += d;
      auto pwf = [&](int a, int b) { return prof.w(a, b); };
      std::vector<int> cyc = prof.customer_ids();
      double dc = 0;
      for (int v : cyc)
        dc += static_cast<double>(prof.demand_of(v)) * prof.w(0, v);
      if (total > k) {
        auto tours = build_local_tours(prof, cyc, LocalRule::no_big);
        double m = std::ceil((total - 1.0) / (k / 2 + k % 2 + 1));
        double g = m / static_cast<double>(total);
        double tw = 0;
        for (auto& t : tours) tw += prof.tour_weight(t);
        check(tw, 2 * g * dc + (1 - g) * cycle_weight(cyc, pwf), scale,
              "rule2");
      }
      // rule3: one big of demand floor(k/2)+1, rest unit.
      prof.demands.assign(6, 1);
      prof.demands[2] = k / 2 + 1;
      total = 5 + k / 2 + 1;
      if (total > k) {
        dc = 0;
        for (int v : cyc)
          dc += static_cast<double>(prof.demand_of(v)) * prof.w(0, v);
        auto tours = build_local_tours(prof, cyc, LocalRule::one_big);
        double m = std::ceil(static_cast<double>(total) / (k / 2 + k % 2 + 1));
        double g = m / static_cast<double>(total);
        double tw = 0;
        for (auto& t : tours) tw += prof.tour_weight(t);
        check(tw, 2 * g * dc + (1 - g) * cycle_weight(cyc, pwf), scale,
              "rule3");
      }
      // rule1 on a prefix that fits.
      std::vector<int> pre;
      long long load = 0;
      for (int v : cyc) {
        if (load + prof.demand_of(v) > k) break;
        pre.push_back(v);
        load += prof.demand_of(v);
      }
      if (!pre.empty()) {
        auto tours = build_local_tours(prof, pre, LocalRule::single);
        double g = 1.0 / static_cast<double>(load);
        double dpre = 0;
        for (int v : pre)
          dpre += static_cast<double>(prof.demand_of(v)) * prof.w(0, v);
        double tw = 0;
        for (auto& t : tours) tw += prof.tour_weight(t);
        check(tw, 2 * g * dpre + (1 - g) * cycle_weight(pre, pwf), scale,
              "rule1");
      }
    }
  }
  report(3, "per-run certified bounds hold on 500 random instances", ok,
         ok ? std::to_string(runs) + " bound checks" : detail);
}

// --------------------------------------------------------------- criterion 4
void criterion4() {
  auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  struct Case {
    const char* name;
    int k;
    Variant variant;
    double ratio;
    std::function<SolveResult(const Instance&)> run;
  };
  std::vector<Case> cases = {
      {"split3", 3, Variant::unit, 1.5, [](const Instance& i) { return split3(i); }},
      {"split4_matching", 4, Variant::unit, 1.5,
       [](const Instance& i) { return split4_matching(i); }},
      {"split4_mod2", 4, Variant::unit, 5.0 / 3,
       [](const Instance& i) { return split4_mod2(i); }},
      {"unsplit3", 3, Variant::unsplittable, 1.5,
       [](const Instance& i) { return unsplit3(i); }},
      {"unsplit4", 4, Variant::unsplittable, 1.75,
       [](const Instance& i) { return unsplit4(i); }},
      {"unsplit5", 5, Variant::unsplittable, 2.157,
       [](const Instance& i) { return unsplit5(i); }},
  };
  for (const Case& c : cases) {
    for (int rep = 0; rep < 200 && ok; ++rep) {
      int n = 3 + rep % 5;  // oracle-sized
      Instance inst =
          gen_random(n, c.k, c.variant,
                     rep % 2 ? MetricKind::euclidean_unit_square
                             : MetricKind::random_shortest_path_closure,
                     91000 + rep, 0);
      SolveResult r = c.run(inst);
      double opt = exact_cvrp(inst).optimum;
      if (r.weight > c.ratio * opt + inst.tol()) {
        ok = false;
        detail = std::string(c.name) + " exceeded its ratio at rep " +
                 std::to_string(rep);
      }
    }
  }
  double secs = elapsed_s(t0);
  if (secs >= 300) {
    ok = false;
    detail += " runtime " + std::to_string(secs) + "s";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "1200 runs in %.1fs", secs);
  report(4, "specialized solvers stay within their guaranteed ratios", ok,
         ok ? buf : detail);
}

// --------------------------------------------------------------- criterion 5
void criterion5() {
  bool ok = true;
  std::string detail;
  std::mt19937_64 rng(5150);

  // Matching vs brute force, 100 cases with n <= 10.
  for (int rep = 0; rep < 100 && ok; ++rep) {
    int m = 4 + 2 * (rep % 4);  // 4, 6, 8, 10
    std::uniform_real_distribution<double> uu(0.01, 1.0);
    std::vector<std::vector<double>> t(m, std::vector<double>(m, 0.0));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) t[i][j] = t[j][i] = uu(rng);
    auto w = [&](int a, int b) { return t[a][b]; };
    std::vector<int> ids(m);
    for (int i = 0; i < m; ++i) ids[i] = i;
    if (std::abs(min_perfect_matching(ids, w).weight -
                 brute_matching(ids, w)) > 1e-9) {
      ok = false;
      detail = "matching mismatch";
    }
  }
  // 2-factor vs oracle on n <= 7.
  for (int rep = 0; rep < 30 && ok; ++rep) {
    int m = 5 + rep % 3;
    Instance inst = rand_instance(m, 3, Variant::unit, 5200 + rep);
    auto w = [&](int a, int b) { return inst.w(a, b); };
    if (std::abs(min_cycle_packing(inst.customer_ids(), w).weight -
                 exact_2factor(inst.customer_ids(), w)) > 1e-9) {
      ok = false;
      detail = "2-factor mismatch";
    }
  }
  // GW trees vs exact mod-3 packing on n <= 9.
  for (int rep = 0; rep < 20 && ok; ++rep) {
    int m = rep % 2 ? 6 : 9;
    Instance inst = rand_instance(m, 3, Variant::unit, 5300 + rep);
    auto w = [&](int a, int b) { return inst.w(a, b); };
    if (mod_k_tree_packing(inst.customer_ids(), w, 3).weight >
        exact_mod_k_cycle_packing(inst.customer_ids(), w, 3) + 1e-9) {
      ok = false;
      detail = "mod-k tree packing exceeded the exact cycle packing";
    }
  }
  // mod-2 packing vs exact C4* on n <= 8.
  for (int rep = 0; rep < 20 && ok; ++rep) {
    Instance inst = rand_instance(8, 4, Variant::unit, 5400 + rep);
    auto w = [&](int a, int b) { return inst.w(a, b); };
    if (mod2_cycle_packing(inst.customer_ids(), w).weight >
        exact_4cycle_packing(inst.customer_ids(), w) + 1e-9) {
      ok = false;
      detail = "mod-2 packing exceeded C4*";
    }
  }
  // Christofides within 3/2 of exact TSP, 100 cases n <= 10.
  for (int rep = 0; rep < 100 && ok; ++rep) {
    int m = 4 + rep % 7;
    Instance inst = rand_instance(m, 3, Variant::unit, 5500 + rep);
    auto w = [&](int a, int b) { return inst.w(a, b); };
    HamCycle cs = christofides(inst.all_vertex_ids(), w);
    HamCycle opt = tsp_exact(inst.all_vertex_ids(), w);
    if (cs.weight > 1.5 * opt.weight + 1e-9) {
      ok = false;
      detail = "christofides above 3/2";
    }
  }
  report(5, "structural subroutines match or bound their oracles", ok, detail);
}

// --------------------------------------------------------------- criterion 6
void criterion6() {
  bool ok = true;
  std::string detail;

  // LP objective is a lower bound on every oracle-sized unsplittable run.
  for (int rep = 0; rep < 25 && ok; ++rep) {
    int k = 3 + rep % 4;
    Instance inst = rand_instance(4 + rep % 4, k, Variant::unsplittable,
                                  6200 + rep);
    LpSolution lp = solve_cover_lp(enumerate_tours(inst, k), inst.n);
    if (lp.objective > exact_cvrp(inst).optimum + 1e-6) {
      ok = false;
      detail = "LP objective above the optimum";
    }
  }

  // gamma = 0 reproduces refined_ag_uitp bit for bit.
  for (int rep = 0; rep < 10 && ok; ++rep) {
    Instance inst = rand_instance(6, 4, Variant::unsplittable, 6300 + rep);
    HamCycle h = christofides_cycle(inst);
    SolveResult a = lp_uitp(inst, h, 0.0, 1234 + rep);
    SolveResult b = refined_ag_uitp(inst, h);
    bool same = a.weight == b.weight &&
                a.itinerary.tours.size() == b.itinerary.tours.size();
    for (size_t i = 0; same && i < a.itinerary.tours.size(); ++i)
      same = a.itinerary.tours[i].customers == b.itinerary.tours[i].customers &&
             a.itinerary.tours[i].deliver == b.itinerary.tours[i].deliver;
    if (!same) {
      ok = false;
      detail = "gamma=0 is not identical to refined_ag_uitp";
    }
  }

  // Monte-Carlo mean at gamma = ln 2 against the expectation bound.
  const double gamma = std::log(2.0);
  for (int rep = 0; rep < 4 && ok; ++rep) {
    Instance inst = rand_instance(8, 10, Variant::unsplittable, 6400 + rep);
    HamCycle h = christofides_cycle(inst);
    double opt = exact_cvrp(inst).optimum;
    double mean = 0;
    for (int seed = 1; seed <= 50; ++seed)
      mean += lp_uitp(inst, h, gamma, seed).weight;
    mean /= 50;
    const double f = inst.k / 2 + 1;  // floor(k/2)+1
    double bound = gamma * opt +
                   std::exp(-gamma) * (2.0 / f) * inst.delta() +
                   (1.0 - 1.0 / f) * h.weight;
    if (mean > 1.05 * bound) {
      ok = false;
      detail = "Monte-Carlo mean above 1.05x the expectation bound";
    }
  }
  report(6, "LP pipeline: lower bound, gamma=0 identity, expectation bound",
         ok, detail);
}

// --------------------------------------------------------------- criterion 7
void criterion7() {
  bool ok = true;
  std::string detail;
  long long runs = 0;
  std::mt19937_64 rng(7777);

  auto feasible = [&](const Instance& inst, const SolveResult& r,
                      const char* tag) {
    ++runs;
    try {
      check_feasible(inst, r.itinerary);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string(tag) + ": " + e.what();
    }
  };

  // The conflict-repair machinery throws if a repair ever increases weight
  // or leaves an infeasible tour; any exception is a failure here.
  try {
    while (runs < 10000 && ok) {
      std::uint64_t seed = 987000 + runs;
      int k = 3 + static_cast<int>(rng() % 4);
      int n = 2 + static_cast<int>(rng() % 6);

      Instance unit = rand_instance(n, k, Variant::unit, seed);
      feasible(unit, split_final(unit), "split_final");
      feasible(unit, split_tradeoff(unit), "split_tradeoff");
      if (k == 3) feasible(unit, split3(unit), "split3");
      if (k == 4) {
        feasible(unit, split4_mod2(unit), "split4_mod2");
        feasible(unit, split4_matching(unit), "split4_matching");
      }

      Instance spl = rand_instance(n, k, Variant::splittable, seed + 1, 2);
      feasible(spl, portfolio_split(spl), "portfolio_split");

      Instance uns = rand_instance(n, k, Variant::unsplittable, seed + 2);
      HamCycle h = christofides_cycle(uns);
      feasible(uns, refined_ag_uitp(uns, h), "refined_ag_uitp");
      feasible(uns, lp_uitp(uns, h, std::log(2.0), seed), "lp_uitp");
      if (k == 3) feasible(uns, unsplit3(uns), "unsplit3");
      if (k == 4) feasible(uns, unsplit4(uns), "unsplit4");
      if (k == 5) feasible(uns, unsplit5(uns), "unsplit5");
      if (runs % 37 == 0)
        feasible(uns, unsplit_portfolio(uns, seed), "unsplit_portfolio");
    }
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("solver invariant tripped: ") + e.what();
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%lld feasible runs", runs);
  report(7, "randomized solver runs stay feasible; repairs never add weight",
         ok, ok ? buf : detail);
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  std::printf("acceptance: %s (%.1fs)\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
              elapsed_s(t0));
  return g_failures == 0 ? 0 : 1;
}
