// Command-line front end: generate instances, run solvers, print the ratio
// tables, and batch-verify solver invariants against the exact oracle.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "cvrp/bounds.hpp"
#include "cvrp/instance.hpp"
#include "cvrp/lp.hpp"
#include "cvrp/oracle.hpp"
#include "cvrp/packing.hpp"
#include "cvrp/split_solvers.hpp"
#include "cvrp/unsplit_solvers.hpp"

using json = nlohmann::ordered_json;
using namespace cvrp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

double round12(double x) {
  if (!std::isfinite(x)) return x;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

// Runs a unit-demand algorithm on a splittable input through the expansion,
// lifting the solution back.
SolveResult run_unit_algo(
    const Instance& inst,
    const std::function<SolveResult(const Instance&)>& algo) {
  if (inst.variant == Variant::unsplittable)
    throw SolverError(
        "variant/algo mismatch: unit algorithm on unsplittable input");
  if (inst.variant == Variant::unit) return algo(inst);
  UnitExpansion exp = expand_unit(inst);
  SolveResult r = algo(exp.expanded);
  r.itinerary = lift_back(inst, exp, r.itinerary);
  r.weight = r.itinerary.total_weight(inst);
  r.inputs_digest = digest(inst);
  return r;
}

SolveResult dispatch(const Instance& inst, const std::string& algo,
                     double gamma, std::uint64_t seed) {
  auto unit_only = [&](auto&& f) {
    return run_unit_algo(inst, [&](const Instance& u) { return f(u); });
  };
  if (algo == "ag-itp")
    return unit_only(
        [](const Instance& u) { return ag_itp(u, christofides_cycle(u)); });
  if (algo == "hr-itp")
    return unit_only([](const Instance& u) {
      auto wf = [&](int a, int b) { return u.w(a, b); };
      HamCycle c = christofides(u.customer_ids(), wf);
      SolveResult r = hr_itp(u, c.order);
      check_feasible(u, r.itinerary);
      return r;
    });
  if (algo == "ex-itp")
    return unit_only([](const Instance& u) {
      auto wf = [&](int a, int b) { return u.w(a, b); };
      if (u.n < 3) return ag_itp(u, christofides_cycle(u));
      return ex_itp(u, min_cycle_packing(u.customer_ids(), wf));
    });
  if (algo == "split3") return split3(inst);
  if (algo == "split4-mod2") return split4_mod2(inst);
  if (algo == "split4-matching") return split4_matching(inst);
  if (algo == "split-tradeoff") return split_tradeoff(inst);
  if (algo == "split-final") return split_final(inst);
  if (algo == "portfolio-split") return portfolio_split(inst);
  if (algo == "refined-uitp") {
    if (inst.variant != Variant::unsplittable)
      throw SolverError(
          "variant/algo mismatch: refined-uitp needs unsplittable input");
    return refined_ag_uitp(inst, christofides_cycle(inst));
  }
  if (algo == "unsplit3") return unsplit3(inst);
  if (algo == "unsplit4") return unsplit4(inst);
  if (algo == "unsplit5") return unsplit5(inst);
  if (algo == "lp-uitp") {
    if (inst.variant != Variant::unsplittable)
      throw SolverError("variant/algo mismatch: lp-uitp needs unsplittable input");
    return lp_uitp(inst, christofides_cycle(inst),
                   gamma >= 0 ? gamma : gamma_select(inst.k), seed);
  }
  if (algo == "portfolio-unsplit") return unsplit_portfolio(inst, seed);
  throw SolverError("unknown algo: " + algo);
}

json report_json(const Instance& inst, const SolveResult& r,
                 std::uint64_t seed, double elapsed_ms,
                 std::optional<double> oracle_opt) {
  json out;
  out["schema"] = 1;
  char digest_hex[32];
  std::snprintf(digest_hex, sizeof(digest_hex), "%016llx",
                static_cast<unsigned long long>(r.inputs_digest));
  out["instance_digest"] = digest_hex;
  out["algorithm"] = r.algorithm;
  out["seed"] = seed;
  out["weight"] = round12(r.weight);
  if (std::isfinite(r.certified_bound))
    out["certified_bound"] = round12(r.certified_bound);
  else
    out["certified_bound"] = nullptr;
  out["lower_bound"] = round12(lb_instance(inst));
  if (oracle_opt) {
    out["oracle_opt"] = round12(*oracle_opt);
    out["empirical_ratio"] =
        round12(*oracle_opt > 0 ? r.weight / *oracle_opt : 1.0);
  }
  out["tours"] = json::array();
  for (const Tour& t : r.itinerary.tours) {
    json jt;
    jt["customers"] = t.customers;
    jt["deliver"] = t.deliver;
    jt["weight"] = round12(inst.tour_weight(t));
    out["tours"].push_back(jt);
  }
  if (!r.branches.empty()) {
    out["branches"] = json::array();
    for (auto& [name, w, bound] : r.branches) {
      json jb;
      jb["algorithm"] = name;
      jb["weight"] = round12(w);
      jb["certified_bound"] =
          std::isfinite(bound) ? json(round12(bound)) : json(nullptr);
      out["branches"].push_back(jb);
    }
  }
  out["elapsed_ms"] = elapsed_ms;
  return out;
}

int cmd_gen(int n, int k, const std::string& variant,
            const std::string& metric, std::uint64_t seed, long long dmax,
            const std::string& output) {
  Instance inst = gen_random(n, k, variant_from_string(variant),
                             metric_kind_from_string(metric), seed, dmax);
  std::string text = serialize(inst);
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output);
    out << text;
  }
  return kExitOk;
}

int cmd_solve(const std::string& input, const std::string& algo, double gamma,
              std::uint64_t seed, bool with_oracle, const std::string& output) {
  Instance inst = load_instance(input);
  auto t0 = std::chrono::steady_clock::now();
  SolveResult r = dispatch(inst, algo, gamma, seed);
  auto t1 = std::chrono::steady_clock::now();
  double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  std::optional<double> oracle_opt;
  if (with_oracle) oracle_opt = exact_cvrp(inst).optimum;

  json out = report_json(inst, r, seed, ms, oracle_opt);
  if (output.empty() || output == "-") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::ofstream f(output);
    f << out.dump(2) << "\n";
  }
  if (oracle_opt && r.weight < *oracle_opt - inst.tol()) {
    std::cerr << "solver beat the oracle: impossible\n";
    return kExitAssertion;
  }
  if (oracle_opt && lb_instance(inst) > *oracle_opt + inst.tol()) {
    std::cerr << "lower bound exceeds the oracle optimum: impossible\n";
    return kExitAssertion;
  }
  return kExitOk;
}

int cmd_ratio_table(const std::string& variant, const std::string& k_range,
                    double alpha, const std::string& format) {
  int k_lo = 0, k_hi = 0;
  auto dots = k_range.find("..");
  if (dots == std::string::npos) {
    k_lo = k_hi = std::stoi(k_range);
  } else {
    k_lo = std::stoi(k_range.substr(0, dots));
    k_hi = std::stoi(k_range.substr(dots + 2));
  }
  auto rows = table_report(variant, k_lo, k_hi, alpha);
  if (format == "json") {
    json out = json::array();
    for (const TableRow& r : rows) {
      json jr;
      jr["k"] = r.k;
      jr["special"] = r.special ? json(round12(*r.special)) : json(nullptr);
      jr["tradeoff"] = round12(r.tradeoff);
      jr["final"] = round12(r.final_ratio);
      out.push_back(jr);
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << render_table_text(variant, rows);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify: random instances, every applicable solver, every invariant.
// ---------------------------------------------------------------------------

struct VerifyOutcome {
  bool ok = true;
  std::string message;
  std::string failed_instance;  // serialized for replay
};

bool lemma_enabled(const std::string& filter, const std::string& family) {
  return filter.empty() || filter == family;
}

VerifyOutcome verify_one(const Instance& inst, const std::string& lemma,
                         std::uint64_t seed, bool inject_fault) {
  VerifyOutcome out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.message = msg;
    out.failed_instance = serialize(inst);
  };
  const int k = inst.k;
  auto check_run = [&](const SolveResult& r) {
    if (!out.ok) return;
    try {
      check_feasible(inst, r.itinerary);
    } catch (const std::exception& e) {
      fail(r.algorithm + ": " + e.what());
      return;
    }
    long long cap = inject_fault ? k - 1 : k;
    for (const Tour& t : r.itinerary.tours)
      if (t.total_delivered() > cap) {
        fail(r.algorithm + ": capacity bound violated");
        return;
      }
    if (r.weight > r.certified_bound + inst.tol()) {
      fail(r.algorithm + ": certified bound violated");
      return;
    }
    std::optional<double> opt;
    try {
      opt = exact_cvrp(inst).optimum;
    } catch (const OracleError&) {
      return;  // beyond oracle size: feasibility and bounds only
    }
    double lb = lb_instance(inst);
    if (lb > *opt + inst.tol()) {
      fail("lower bound exceeds the optimum");
      return;
    }
    if (r.weight < *opt - inst.tol()) {
      fail(r.algorithm + ": weight below the optimum");
      return;
    }
    double ratio = 10.0;
    if (r.algorithm == "split3" || r.algorithm == "unsplit3" ||
        r.algorithm == "split4-matching")
      ratio = 1.5;
    else if (r.algorithm == "split4-mod2")
      ratio = 5.0 / 3;
    else if (r.algorithm == "unsplit4")
      ratio = 1.75;
    else if (r.algorithm == "unsplit5")
      ratio = 2.157;
    else if (r.algorithm == "split-tradeoff")
      ratio = ratio_split_tradeoff(1.5, k).value;
    else if (r.algorithm == "split-final")
      ratio = ratio_split_final(k).value;
    if (r.weight > ratio * *opt + inst.tol())
      fail(r.algorithm + ": theorem ratio violated");
  };

  try {
    if (inst.variant == Variant::unsplittable) {
      if (lemma_enabled(lemma, "reuitp"))
        check_run(refined_ag_uitp(inst, christofides_cycle(inst)));
      if (lemma_enabled(lemma, "lp"))
        check_run(lp_uitp(inst, christofides_cycle(inst), std::log(2.0), seed));
      if (k == 3 && lemma_enabled(lemma, "unsplit3")) check_run(unsplit3(inst));
      if (k == 4 && lemma_enabled(lemma, "unsplit4")) check_run(unsplit4(inst));
      if (k == 5 && lemma_enabled(lemma, "unsplit5")) check_run(unsplit5(inst));
    } else {
      if (lemma_enabled(lemma, "agitp"))
        check_run(dispatch(inst, "ag-itp", -1, seed));
      if (lemma_enabled(lemma, "exitp"))
        check_run(dispatch(inst, "ex-itp", -1, seed));
      if (lemma_enabled(lemma, "tradeoff")) check_run(split_tradeoff(inst));
      if (lemma_enabled(lemma, "final")) check_run(split_final(inst));
      if (k == 3 && lemma_enabled(lemma, "split3")) check_run(split3(inst));
      if (k == 4 && lemma_enabled(lemma, "split4")) {
        check_run(split4_mod2(inst));
        check_run(split4_matching(inst));
      }
    }
  } catch (const LpError&) {
    // enumeration too large for this instance; not a failure
  } catch (const std::exception& e) {
    fail(e.what());
  }
  return out;
}

int cmd_verify(int batch, int n_max, int k, const std::string& variant,
               std::uint64_t seed, const std::string& lemma, int jobs) {
  const bool inject = std::getenv("CVRP_VERIFY_INJECT_FAULT") != nullptr;
  Variant var = variant_from_string(variant);
  std::vector<VerifyOutcome> outcomes(batch);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= batch) return;
      std::uint64_t s = seed + static_cast<std::uint64_t>(i);
      int n = 1 + static_cast<int>(s % n_max);
      long long dmax = var == Variant::splittable ? 3 : 0;
      Instance inst =
          gen_random(n, k, var,
                     i % 2 ? MetricKind::euclidean_unit_square
                           : MetricKind::random_shortest_path_closure,
                     s, dmax);
      outcomes[i] = verify_one(inst, lemma, s, inject);
    }
  };
  int nthreads =
      jobs > 0 ? jobs
               : std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int failures = 0;
  for (int i = 0; i < batch; ++i) {
    if (outcomes[i].ok) continue;
    ++failures;
    std::cerr << "FAIL [" << i << "]: " << outcomes[i].message << "\n";
    std::string path = "verify-fail-" + std::to_string(i) + ".cvrp";
    std::ofstream f(path);
    f << outcomes[i].failed_instance;
    std::cerr << "  instance written to " << path << " for replay\n";
  }
  std::cout << "verify: " << (batch - failures) << "/" << batch << " ok\n";
  return failures == 0 ? kExitOk : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-CVRP approximation solver suite"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  int g_n = 6, g_k = 3;
  std::string g_variant = "unit", g_metric = "euclidean", g_out;
  std::uint64_t g_seed = 1;
  long long g_dmax = 0;
  gen->add_option("--n", g_n, "customer count")->required();
  gen->add_option("--k", g_k, "vehicle capacity")->required();
  gen->add_option("--variant", g_variant, "splittable|unit|unsplittable");
  gen->add_option("--metric", g_metric, "euclidean|random-closure");
  gen->add_option("--seed", g_seed, "rng seed");
  gen->add_option("--dmax", g_dmax, "cap on generated demands (0 = legal max)");
  gen->add_option("-o,--output", g_out, "output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "run one solver on an instance");
  std::string s_input, s_algo, s_out;
  double s_gamma = -1;
  std::uint64_t s_seed = 1;
  bool s_oracle = false;
  solve->add_option("-i,--input", s_input, "instance file")->required();
  solve->add_option("--algo", s_algo,
                    "ag-itp|hr-itp|ex-itp|split3|split4-mod2|split4-matching|"
                    "split-tradeoff|split-final|refined-uitp|unsplit3|"
                    "unsplit4|unsplit5|lp-uitp|portfolio-split|portfolio-unsplit")
      ->required();
  solve->add_option("--gamma", s_gamma, "rounding gamma for lp-uitp");
  solve->add_option("--seed", s_seed, "rng seed");
  solve->add_flag("--oracle", s_oracle, "also compute the exact optimum");
  solve->add_option("-o,--output", s_out, "report file (default stdout)");

  auto* table = app.add_subcommand("ratio-table", "closed-form ratio tables");
  std::string t_variant = "split", t_k = "3..10", t_format = "text";
  double t_alpha = 1.5;
  table->add_option("--variant", t_variant, "split|unsplit")->required();
  table->add_option("--k", t_k, "k or k_lo..k_hi");
  table->add_option("--alpha", t_alpha, "metric TSP ratio in [1, 1.5]");
  table->add_option("--format", t_format, "text|json");

  auto* verify = app.add_subcommand("verify", "randomized invariant checking");
  int v_batch = 100, v_nmax = 7, v_k = 3, v_jobs = 0;
  std::string v_variant = "unit", v_lemma;
  std::uint64_t v_seed = 1;
  verify->add_option("--batch", v_batch, "number of instances");
  verify->add_option("--n-max", v_nmax, "maximum customer count");
  verify->add_option("--k", v_k, "vehicle capacity");
  verify->add_option("--variant", v_variant, "splittable|unit|unsplittable");
  verify->add_option("--seed", v_seed, "base seed");
  verify->add_option("--lemma", v_lemma, "restrict to one bound family");
  verify->add_option("--jobs", v_jobs, "worker threads (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_gen(g_n, g_k, g_variant, g_metric, g_seed, g_dmax, g_out);
    if (solve->parsed())
      return cmd_solve(s_input, s_algo, s_gamma, s_seed, s_oracle, s_out);
    if (table->parsed())
      return cmd_ratio_table(t_variant, t_k, t_alpha, t_format);
    if (verify->parsed())
      return cmd_verify(v_batch, v_nmax, v_k, v_variant, v_seed, v_lemma,
                        v_jobs);
  } catch (const InstanceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BoundsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
  return kExitUsage;
}
