#include "cvrp/unsplit_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "cvrp/lp.hpp"

namespace cvrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double delta_over(const Instance& inst, const std::vector<int>& customers) {
  double s = 0;
  for (int c : customers)
    s += static_cast<double>(inst.demand_of(c)) * inst.w(0, c);
  return s;
}

long long demand_size(const Instance& inst, const std::vector<int>& cycle) {
  long long s = 0;
  for (int c : cycle) s += inst.demand_of(c);
  return s;
}

// Keeps the customers accepted by `pred`, preserving cyclic order.
std::vector<int> subcycle(const std::vector<int>& cycle,
                          const std::function<bool(int)>& pred) {
  std::vector<int> out;
  for (int c : cycle)
    if (pred(c)) out.push_back(c);
  return out;
}

Tour trivial_tour(const Instance& inst, int customer) {
  Tour t;
  t.customers = {customer};
  t.deliver = {inst.demand_of(customer)};
  return t;
}

double tours_weight(const Instance& inst, const std::vector<Tour>& tours) {
  double s = 0;
  for (const Tour& t : tours) s += inst.tour_weight(t);
  return s;
}

// ---------------------------------------------------------------------------
// Capacity-arc segmentation of a demand cycle with conflict repair.
//
// The cycle is expanded into unit positions (demand copies are consecutive).
// Arcs of the given capacities partition the positions, starting at a
// rotation; a customer whose copies straddle arc boundaries is repaired:
// splits over three or more arcs collapse onto a fully-covered middle arc,
// two-arc splits move the whole demand clockwise (to the later arc) or
// counterclockwise (to the earlier one), uniformly. Repair only ever
// shortcuts customers out of tours, so the weight never increases.
// ---------------------------------------------------------------------------

struct ArcVisit {
  int customer;
  long long amount;
};

using Arcs = std::vector<std::vector<ArcVisit>>;

Arcs cut_arcs(const Instance& inst, const std::vector<int>& cycle,
              const std::vector<long long>& caps, long long rotation,
              bool wrap) {
  std::vector<int> units;
  for (int c : cycle)
    for (long long i = 0; i < inst.demand_of(c); ++i) units.push_back(c);
  const long long total = static_cast<long long>(units.size());
  Arcs arcs;
  long long pos = rotation % std::max<long long>(1, total);
  for (long long cap : caps) {
    std::vector<ArcVisit> arc;
    for (long long i = 0; i < cap; ++i) {
      int c = units[wrap ? pos % total : pos];
      ++pos;
      if (!arc.empty() && arc.back().customer == c)
        arc.back().amount += 1;
      else
        arc.push_back({c, 1});
    }
    // An arc spanning the rotation seam can open and close with the same
    // customer; fold the tail into the head (reversal-symmetric weight).
    if (arc.size() > 1 && arc.front().customer == arc.back().customer) {
      arc.front().amount += arc.back().amount;
      arc.pop_back();
    }
    arcs.push_back(std::move(arc));
  }
  return arcs;
}

// Arcs where a customer appears, in cyclic run order starting after a gap.
std::vector<int> run_of(const Arcs& arcs, int customer, bool wrap) {
  const int m = static_cast<int>(arcs.size());
  std::vector<bool> in(m, false);
  for (int j = 0; j < m; ++j)
    for (const ArcVisit& v : arcs[j])
      if (v.customer == customer) in[j] = true;
  std::vector<int> run;
  int start = 0;
  if (wrap) {
    // Anchor the scan at an arc without the customer so the run comes out
    // in cyclic order.
    start = -1;
    for (int j = 0; j < m; ++j)
      if (!in[j]) {
        start = j;
        break;
      }
    if (start == -1) {
      // The customer touches every arc (only possible for two arcs). The
      // run starts at the arc whose tail holds the customer.
      for (int j = 0; j < m; ++j)
        if (!arcs[j].empty() && arcs[j].back().customer == customer &&
            !arcs[(j + 1) % m].empty() &&
            arcs[(j + 1) % m].front().customer == customer) {
          for (int step = 0; step < m; ++step) run.push_back((j + step) % m);
          return run;
        }
      for (int j = 0; j < m; ++j) run.push_back(j);
      return run;
    }
  }
  for (int step = 0; step < m; ++step) {
    int j = (start + step) % m;
    if (in[j]) run.push_back(j);
  }
  return run;
}

struct RepairOutcome {
  std::vector<Tour> tours;
  double weight = 0;
  bool feasible = false;
};

RepairOutcome repair(const Instance& inst, Arcs arcs, bool wrap,
                     bool clockwise) {
  const int m = static_cast<int>(arcs.size());
  std::set<int> split;
  std::map<int, int> arc_count;
  for (const auto& arc : arcs)
    for (const ArcVisit& v : arc) arc_count[v.customer]++;
  auto erase_from = [&](int arc_idx, int customer) {
    auto& arc = arcs[arc_idx];
    arc.erase(std::remove_if(arc.begin(), arc.end(),
                             [&](const ArcVisit& v) {
                               return v.customer == customer;
                             }),
              arc.end());
  };
  auto set_full = [&](int arc_idx, int customer) {
    for (ArcVisit& v : arcs[arc_idx])
      if (v.customer == customer) v.amount = inst.demand_of(customer);
  };

  // Splits over three or more arcs first: the middle arcs consist solely of
  // this customer, so one of them becomes its tour.
  for (auto& [c, cnt] : arc_count) {
    if (cnt < 3) continue;
    std::vector<int> run = run_of(arcs, c, wrap);
    int home = run[1];
    for (int j : run)
      if (j != home) erase_from(j, c);
    set_full(home, c);
    cnt = 1;
  }
  for (auto& [c, cnt] : arc_count)
    if (cnt == 2) split.insert(c);

  for (int c : split) {
    std::vector<int> run = run_of(arcs, c, wrap);
    int earlier = run[0];
    int later = run[1];
    int keep = clockwise ? later : earlier;
    int drop = clockwise ? earlier : later;
    erase_from(drop, c);
    set_full(keep, c);
  }

  RepairOutcome out;
  out.feasible = true;
  for (int j = 0; j < m; ++j) {
    long long load = 0;
    Tour t;
    for (const ArcVisit& v : arcs[j]) {
      load += v.amount;
      t.customers.push_back(v.customer);
      t.deliver.push_back(v.amount);
    }
    if (load > inst.k) out.feasible = false;
    if (!t.customers.empty()) out.tours.push_back(std::move(t));
  }
  if (out.feasible) out.weight = tours_weight(inst, out.tours);
  return out;
}

double arcs_weight(const Instance& inst, const Arcs& arcs) {
  double s = 0;
  for (const auto& arc : arcs) {
    if (arc.empty()) continue;
    s += inst.w(0, arc.front().customer) + inst.w(arc.back().customer, 0);
    for (size_t i = 0; i + 1 < arc.size(); ++i)
      s += inst.w(arc[i].customer, arc[i + 1].customer);
  }
  return s;
}

// Minimum over all unit rotations (wrap mode). Tries the clockwise repair
// first, then counterclockwise; per the local-structure case analysis at
// least one direction is always feasible.
std::vector<Tour> best_rotation_tours(const Instance& inst,
                                      const std::vector<int>& cycle,
                                      const std::vector<long long>& caps) {
  long long total = demand_size(inst, cycle);
  std::vector<Tour> best;
  double best_w = kInf;
  for (long long rot = 0; rot < total; ++rot) {
    Arcs arcs = cut_arcs(inst, cycle, caps, rot, true);
    double pre = arcs_weight(inst, arcs);
    RepairOutcome cand = repair(inst, arcs, true, true);
    if (!cand.feasible) cand = repair(inst, arcs, true, false);
    if (!cand.feasible)
      throw SolverError("conflict repair infeasible in both directions");
    if (cand.weight > pre + inst.tol())
      throw SolverError("conflict repair increased the weight");
    if (cand.weight < best_w - inst.tol()) {
      best_w = cand.weight;
      best = std::move(cand.tours);
    }
  }
  return best;
}

// AG-style segmentation of a depot cycle (linear, clockwise repair): the
// offset solutions have a first tour of i units and full-capacity tours
// after it.
std::vector<Tour> best_offset_tours(const Instance& inst,
                                    const std::vector<int>& order,
                                    long long cap) {
  long long total = demand_size(inst, order);
  std::vector<Tour> best;
  double best_w = kInf;
  for (long long offset = 1; offset <= cap; ++offset) {
    std::vector<long long> caps = {std::min(offset, total)};
    long long rest = total - caps[0];
    while (rest > 0) {
      caps.push_back(std::min(cap, rest));
      rest -= caps.back();
    }
    Arcs arcs = cut_arcs(inst, order, caps, 0, false);
    double pre = arcs_weight(inst, arcs);
    RepairOutcome cand = repair(inst, arcs, false, true);
    if (!cand.feasible)
      throw SolverError("clockwise repair infeasible on a depot cycle");
    if (cand.weight > pre + inst.tol())
      throw SolverError("conflict repair increased the weight");
    if (cand.weight < best_w - inst.tol()) {
      best_w = cand.weight;
      best = std::move(cand.tours);
    }
  }
  return best;
}

void require_unsplittable(const Instance& inst, const char* who) {
  if (inst.variant != Variant::unsplittable)
    throw SolverError(std::string(who) + " expects an unsplittable instance");
}

void assert_bound(const Instance& inst, const char* who, double weight,
                  double bound) {
  if (weight > bound + inst.tol())
    throw SolverError(std::string(who) + ": certified bound violated");
}

long long half_cap(const Instance& inst) { return inst.k / 2 + inst.k % 2 + 1; }

}  // namespace

bool is_big(const Instance& inst, int customer) {
  return inst.demand_of(customer) > inst.k / 2;
}

std::vector<Tour> build_local_tours(const Instance& inst,
                                    const std::vector<int>& cycle,
                                    LocalRule rule) {
  require_unsplittable(inst, "build_local_tours");
  const long long s = demand_size(inst, cycle);
  const long long kappa = half_cap(inst);
  auto wf = [&](int a, int b) { return inst.w(a, b); };
  const double cw = cycle_weight(cycle, wf);
  const double dc = delta_over(inst, cycle);

  long long m = 0;
  std::vector<long long> caps;
  switch (rule) {
    case LocalRule::single: {
      if (s < 1 || s > inst.k)
        throw SolverError("rule single needs 1 <= |C| <= k");
      m = 1;
      caps = {s};
      break;
    }
    case LocalRule::no_big: {
      if (s <= inst.k || inst.k < 4)
        throw SolverError("rule no_big needs |C| > k >= 4");
      for (int c : cycle)
        if (is_big(inst, c)) throw SolverError("rule no_big saw a big customer");
      m = (s - 2) / kappa + 1;  // ceil((s-1)/kappa)
      caps = {kappa + 1};
      for (long long i = 0; i < m - 2; ++i) caps.push_back(kappa);
      long long rem = s - (kappa + 1) - (m - 2) * kappa;
      if (rem > 0) caps.push_back(rem);
      break;
    }
    case LocalRule::one_big: {
      if (s <= inst.k || inst.k < 4)
        throw SolverError("rule one_big needs |C| > k >= 4");
      int bigs = 0;
      for (int c : cycle)
        if (is_big(inst, c)) {
          ++bigs;
          if (inst.demand_of(c) != inst.k / 2 + 1)
            throw SolverError("rule one_big needs the big demand floor(k/2)+1");
        }
      if (bigs != 1) throw SolverError("rule one_big needs exactly one big");
      m = (s + kappa - 1) / kappa;
      for (long long i = 0; i < m - 1; ++i) caps.push_back(kappa);
      caps.push_back(s - (m - 1) * kappa);
      break;
    }
  }
  std::vector<Tour> tours = best_rotation_tours(inst, cycle, caps);
  const double g = static_cast<double>(m) / static_cast<double>(s);
  assert_bound(inst, "build_local_tours", tours_weight(inst, tours),
               2 * g * dc + (1 - g) * cw);
  return tours;
}

SolveResult refined_ag_uitp(const Instance& inst, const HamCycle& h) {
  require_unsplittable(inst, "refined_ag_uitp");
  SolveResult r;
  r.algorithm = "refined-uitp";
  r.inputs_digest = digest(inst);

  std::vector<int> smalls_in_order;
  size_t at = std::find(h.order.begin(), h.order.end(), 0) - h.order.begin();
  if (at == h.order.size())
    throw SolverError("refined_ag_uitp: depot not on the cycle");
  for (size_t i = 1; i < h.order.size(); ++i) {
    int v = h.order[(at + i) % h.order.size()];
    if (is_big(inst, v)) {
      r.itinerary.tours.push_back(trivial_tour(inst, v));
    } else {
      smalls_in_order.push_back(v);
    }
  }
  if (!smalls_in_order.empty()) {
    auto tours = best_offset_tours(inst, smalls_in_order, half_cap(inst));
    for (Tour& t : tours) r.itinerary.tours.push_back(std::move(t));
  }
  r.weight = r.itinerary.total_weight(inst);
  const double f = static_cast<double>(inst.k / 2 + 1);
  r.certified_bound = (2.0 / f) * inst.delta() + (1.0 - 1.0 / f) * h.weight;
  assert_bound(inst, "refined_ag_uitp", r.weight, r.certified_bound);
  check_feasible(inst, r.itinerary);
  return r;
}

SolveResult ex_uitp(const Instance& inst, const CyclePacking& packing) {
  require_unsplittable(inst, "ex_uitp");
  SolveResult r;
  r.algorithm = "ex-uitp";
  r.inputs_digest = digest(inst);
  const long long kappa = half_cap(inst);
  double g = 0;
  double delta_s = 0;
  for (const auto& c : packing.cycles) {
    for (int v : c)
      if (is_big(inst, v)) throw SolverError("ex_uitp saw a big customer");
    long long s = demand_size(inst, c);
    long long m = (s + kappa - 1) / kappa;
    g = std::max(g, static_cast<double>(m) / static_cast<double>(s));
    delta_s += delta_over(inst, c);
    std::vector<long long> caps;
    for (long long i = 0; i < m - 1; ++i) caps.push_back(kappa);
    caps.push_back(s - (m - 1) * kappa);
    auto tours = best_rotation_tours(inst, c, caps);
    for (Tour& t : tours) r.itinerary.tours.push_back(std::move(t));
  }
  r.weight = r.itinerary.total_weight(inst);
  r.certified_bound = 2 * g * delta_s + (1 - g) * packing.weight;
  assert_bound(inst, "ex_uitp", r.weight, r.certified_bound);
  return r;
}

// ---------------------------------------------------------------------------
// Unsplittable specials.
// ---------------------------------------------------------------------------

namespace {

// Demand-weighted packing on the original customers obtained from a packing
// of the unit expansion. `build` produces cycles on the expanded instance.
CyclePacking project_expanded_packing(
    const Instance& padded,
    const std::function<std::vector<std::vector<int>>(const Instance&)>& build,
    PackFlavor flavor) {
  Instance as_split = padded;
  as_split.variant = Variant::splittable;
  UnitExpansion exp = expand_unit(as_split);
  auto cycles = build(exp.expanded);
  auto wf = [&](int a, int b) { return padded.w(a, b); };
  return shortcut_to_originals(cycles, exp.origin, wf, flavor);
}

// Serves every customer in one tour; valid whenever the total demand fits
// the vehicle.
SolveResult single_tour_everything(const Instance& inst, const char* algo) {
  SolveResult r;
  r.algorithm = algo;
  r.inputs_digest = digest(inst);
  std::vector<int> verts = {0};
  for (int c : inst.customer_ids()) verts.push_back(c);
  auto wf = [&](int a, int b) { return inst.w(a, b); };
  HamCycle h = tsp_exact(verts, wf, 16);
  size_t at = std::find(h.order.begin(), h.order.end(), 0) - h.order.begin();
  Tour t;
  for (size_t i = 1; i < h.order.size(); ++i) {
    int c = h.order[(at + i) % h.order.size()];
    t.customers.push_back(c);
    t.deliver.push_back(inst.demand_of(c));
  }
  r.itinerary.tours.push_back(std::move(t));
  r.weight = r.itinerary.total_weight(inst);
  r.certified_bound = r.weight;
  check_feasible(inst, r.itinerary);
  return r;
}

// Appends `extra` unit-demand customers at the depot's position.
Instance pad_with_depot_units(const Instance& inst, int extra) {
  if (extra == 0) return inst;
  Instance out = inst;
  int old_n = inst.n;
  out.n += extra;
  for (int i = 0; i < extra; ++i) out.demands.push_back(1);
  const int rows = out.n + 1;
  out.weights.assign(static_cast<size_t>(rows) * rows, 0.0);
  auto proj = [&](int v) { return v <= old_n ? v : 0; };
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j)
      out.weights[static_cast<size_t>(i) * rows + j] =
          inst.w(proj(i), proj(j));
  return out;
}

// Saturation padding: (k-1) * (unit count) depot copies guarantee an optimal
// itinerary whose tours all deliver exactly k, which the cycle-packing lower
// bounds need. The padded unit count k * total is divisible by k (and even).
Instance pad_unsplittable_saturated(const Instance& inst) {
  long long total = 0;
  for (int c : inst.customer_ids()) total += inst.demand_of(c);
  return pad_with_depot_units(
      inst, static_cast<int>((inst.k - 1) * total));
}

SolveResult finish_padded(const Instance& inst, const Instance& padded,
                          const char* algo, std::vector<Tour> tours,
                          double certified) {
  SolveResult r;
  r.algorithm = algo;
  r.inputs_digest = digest(inst);
  Itinerary padded_it;
  padded_it.tours = std::move(tours);
  r.itinerary = strip_padding(padded, inst.n, padded_it);
  r.weight = r.itinerary.total_weight(inst);
  r.certified_bound = certified;
  assert_bound(inst, algo, r.weight, r.certified_bound);
  check_feasible(inst, r.itinerary);
  return r;
}

}  // namespace

namespace {

// Saturated cycle packing of the unit expansion, projected onto the
// customers, with two pad customers materialized per depot path. Returns the
// padded instance and the projected packing on it.
std::pair<Instance, CyclePacking> project_saturated_packing(
    const Instance& inst,
    const std::function<SaturatedPacking(const Instance&)>& build,
    PackFlavor flavor) {
  Instance as_split = inst;
  as_split.variant = Variant::splittable;
  UnitExpansion exp = expand_unit(as_split);
  SaturatedPacking sat = build(exp.expanded);

  Instance padded = pad_with_depot_units(
      inst, 2 * static_cast<int>(sat.depot_paths.size()));
  std::vector<int> origin = exp.origin;
  std::vector<std::vector<int>> cycles = sat.cycles;
  int next_copy = exp.expanded.n;
  int next_pad = inst.n;
  for (const auto& path : sat.depot_paths) {
    std::vector<int> cyc = path;
    cyc.push_back(++next_copy);
    origin.push_back(++next_pad);
    cyc.push_back(++next_copy);
    origin.push_back(++next_pad);
    cycles.push_back(std::move(cyc));
  }
  auto wf = [&](int a, int b) { return padded.w(a, b); };
  CyclePacking proj = shortcut_to_originals(cycles, origin, wf, flavor);
  return {std::move(padded), std::move(proj)};
}

}  // namespace

SolveResult unsplit3(const Instance& orig) {
  require_unsplittable(orig, "unsplit3");
  if (orig.k != 3) throw SolverError("unsplit3 requires k = 3");

  auto [inst, packing] = project_saturated_packing(
      orig,
      [](const Instance& u) {
        auto wf = [&](int a, int b) { return u.w(a, b); };
        return saturated_cycle_packing(u.customer_ids(), wf);
      },
      PackFlavor::plain);

  std::vector<Tour> tours;
  CyclePacking residual;
  residual.flavor = PackFlavor::plain;
  for (const auto& c : packing.cycles) {
    std::vector<int> ones = subcycle(c, [&](int v) { return inst.demand_of(v) == 1; });
    std::vector<int> twos = subcycle(c, [&](int v) { return inst.demand_of(v) == 2; });
    if (ones.size() == 1) {
      // Pair the lone 1-demand customer with a 2-demand neighbour; every
      // other 2-demand customer gets a trivial tour.
      int u = ones[0];
      int best = -1;
      double best_w = kInf;
      for (int v : twos) {
        double w = inst.w(0, u) + inst.w(u, v) + inst.w(v, 0);
        if (w < best_w - inst.tol()) {
          best_w = w;
          best = v;
        }
      }
      if (best == -1) throw SolverError("unsplit3: no 2-demand partner");
      Tour t;
      t.customers = {u, best};
      t.deliver = {1, 2};
      tours.push_back(std::move(t));
      for (int v : twos)
        if (v != best) tours.push_back(trivial_tour(inst, v));
    } else {
      for (int v : twos) tours.push_back(trivial_tour(inst, v));
      if (!ones.empty()) residual.cycles.push_back(ones);
    }
  }
  if (!residual.cycles.empty()) {
    // All residual customers have unit demand: plain per-cycle ITP.
    for (const auto& c : residual.cycles) {
      // HR-ITP on each residual cycle with capacity k.
      const int s = static_cast<int>(c.size());
      std::vector<Tour> best;
      double best_w = kInf;
      for (int rot = 0; rot < s; ++rot) {
        std::vector<Tour> cand;
        for (int at = 0; at < s; at += inst.k) {
          Tour t;
          for (int j = at; j < std::min(at + inst.k, s); ++j) {
            t.customers.push_back(c[(rot + j) % s]);
            t.deliver.push_back(1);
          }
          cand.push_back(std::move(t));
        }
        double w = tours_weight(inst, cand);
        if (w < best_w - inst.tol()) {
          best_w = w;
          best = std::move(cand);
        }
      }
      for (Tour& t : best) tours.push_back(std::move(t));
    }
  }

  double certified = inst.delta() + 0.5 * packing.weight;
  return finish_padded(orig, inst, "unsplit3", std::move(tours), certified);
}

namespace {

// Cheapest feasible grouping of up to five customers into unsplittable
// tours, each group ordered exactly. Used for the finitely-many-layout
// cases of the type dispatches.
std::vector<Tour> best_partition_tours(const Instance& inst,
                                       const std::vector<int>& customers) {
  const int m = static_cast<int>(customers.size());
  std::vector<std::vector<int>> groups;
  std::vector<int> assign(m, -1);
  std::vector<Tour> best;
  double best_w = kInf;

  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == m) {
      std::vector<Tour> cand;
      double w = 0;
      for (int gj = 0; gj < used; ++gj) {
        std::vector<int> group;
        long long d = 0;
        for (int t = 0; t < m; ++t)
          if (assign[t] == gj) {
            group.push_back(customers[t]);
            d += inst.demand_of(customers[t]);
          }
        if (d > inst.k) return;
        std::vector<int> verts = {0};
        for (int c : group) verts.push_back(c);
        auto wf = [&](int a, int b) { return inst.w(a, b); };
        HamCycle h = tsp_exact(verts, wf, 16);
        size_t at = std::find(h.order.begin(), h.order.end(), 0) -
                    h.order.begin();
        Tour t;
        for (size_t j = 1; j < h.order.size(); ++j) {
          int c = h.order[(at + j) % h.order.size()];
          t.customers.push_back(c);
          t.deliver.push_back(inst.demand_of(c));
        }
        w += inst.tour_weight(t);
        cand.push_back(std::move(t));
      }
      if (w < best_w - inst.tol()) {
        best_w = w;
        best = std::move(cand);
      }
      return;
    }
    for (int gj = 0; gj <= used && gj < m; ++gj) {
      assign[i] = gj;
      rec(i + 1, std::max(used, gj + 1));
      assign[i] = -1;
    }
  };
  rec(0, 0);
  if (best.empty()) throw SolverError("no feasible grouping exists");
  return best;
}

int unsplit4_type(long long x) {
  if (x == 0) return 0;
  if (x % 3 == 0) return 1;
  if (x % 3 == 1) {
    if (x == 1) return 4;
    if (x == 4) return 5;
    if (x == 7) return 6;
    if (x == 10) return 7;
    if (x == 13) return 9;
    return 2;  // x >= 16
  }
  if (x == 2) return 10;
  if (x == 5) return 8;
  return 3;  // x % 3 == 2, x >= 8
}

void check_unsplit4_types_partition() {
  static bool done = false;
  if (done) return;
  for (long long x = 0; x <= 200; ++x) {
    int t = unsplit4_type(x);
    bool ok = false;
    switch (t) {
      case 0: ok = x == 0; break;
      case 1: ok = x >= 3 && x % 3 == 0; break;
      case 2: ok = x >= 16 && x % 3 == 1; break;
      case 3: ok = x >= 8 && x % 3 == 2; break;
      case 4: ok = x == 1; break;
      case 5: ok = x == 4; break;
      case 6: ok = x == 7; break;
      case 7: ok = x == 10; break;
      case 8: ok = x == 5; break;
      case 9: ok = x == 13; break;
      case 10: ok = x == 2; break;
    }
    if (!ok) throw SolverError("unsplit4 type table does not partition");
  }
  done = true;
}

}  // namespace

SolveResult unsplit4(const Instance& inst) {
  require_unsplittable(inst, "unsplit4");
  if (inst.k != 4) throw SolverError("unsplit4 requires k = 4");
  check_unsplit4_types_partition();
  long long total = 0;
  for (int c : inst.customer_ids()) total += inst.demand_of(c);
  if (total <= inst.k) return single_tour_everything(inst, "unsplit4");

  Instance padded = pad_unsplittable_saturated(inst);
  CyclePacking packing = project_expanded_packing(
      padded,
      [](const Instance& u) {
        auto wf = [&](int a, int b) { return u.w(a, b); };
        return mod2_cycle_packing(u.customer_ids(), wf).cycles;
      },
      PackFlavor::demand_mod_k);

  auto wf = [&](int a, int b) { return padded.w(a, b); };
  std::vector<Tour> tours;
  for (const auto& cyc : packing.cycles) {
    auto small = [&](int v) { return padded.demand_of(v) <= 2; };
    std::vector<int> smalls = subcycle(cyc, small);
    std::vector<int> bigs = subcycle(cyc, [&](int v) { return !small(v); });
    long long x = demand_size(padded, smalls);
    const int type = unsplit4_type(x);

    std::vector<Tour> cycle_tours;
    auto trivial_all = [&](const std::vector<int>& vs) {
      for (int v : vs) cycle_tours.push_back(trivial_tour(padded, v));
    };

    switch (type) {
      case 0:
        trivial_all(bigs);
        break;
      case 1:
      case 2:
      case 3: {
        trivial_all(bigs);
        long long m = (x + 2) / 3;  // ceil(x / kappa), kappa = 3
        std::vector<long long> caps(m - 1, 3);
        caps.push_back(x - (m - 1) * 3);
        auto ts = best_rotation_tours(padded, smalls, caps);
        for (Tour& t : ts) cycle_tours.push_back(std::move(t));
        break;
      }
      case 4: {
        // One 1-demand customer; pair it with the cheapest 3-demand anchor.
        int u = smalls[0];
        int bestv = -1;
        double best_w = kInf;
        for (int v : bigs) {
          double w = padded.w(0, u) + padded.w(u, v) + padded.w(v, 0);
          if (w < best_w - padded.tol()) {
            best_w = w;
            bestv = v;
          }
        }
        Tour t;
        t.customers = {u, bestv};
        t.deliver = {1, 3};
        cycle_tours.push_back(std::move(t));
        for (int v : bigs)
          if (v != bestv) cycle_tours.push_back(trivial_tour(padded, v));
        break;
      }
      case 5: {
        trivial_all(bigs);
        auto ts = build_local_tours(padded, smalls, LocalRule::single);
        for (Tour& t : ts) cycle_tours.push_back(std::move(t));
        break;
      }
      case 6:
      case 7: {
        trivial_all(bigs);
        auto ts = build_local_tours(padded, smalls, LocalRule::no_big);
        for (Tour& t : ts) cycle_tours.push_back(std::move(t));
        break;
      }
      case 8:
      case 9: {
        // Keep one 3-demand anchor inside the cycle, rule3 on the rest.
        int anchor = bigs[0];
        std::vector<int> keep = subcycle(
            cyc, [&](int v) { return small(v) || v == anchor; });
        for (int v : bigs)
          if (v != anchor) cycle_tours.push_back(trivial_tour(padded, v));
        auto ts = build_local_tours(padded, keep, LocalRule::one_big);
        for (Tour& t : ts) cycle_tours.push_back(std::move(t));
        break;
      }
      case 10: {
        // x = 2: smalls plus two 3-demand anchors, finitely many layouts.
        std::vector<int> keep = smalls;
        keep.push_back(bigs[0]);
        keep.push_back(bigs[1]);
        for (size_t i = 2; i < bigs.size(); ++i)
          cycle_tours.push_back(trivial_tour(padded, bigs[i]));
        auto ts = best_partition_tours(padded, keep);
        for (Tour& t : ts) cycle_tours.push_back(std::move(t));
        break;
      }
    }
    double cw = cycle_weight(cyc, wf);
    double dc = delta_over(padded, cyc);
    assert_bound(padded, "unsplit4 per-cycle", tours_weight(padded, cycle_tours),
                 0.75 * dc + 0.625 * cw);
    for (Tour& t : cycle_tours) tours.push_back(std::move(t));
  }
  double certified = 0.75 * padded.delta() + 0.625 * packing.weight;
  return finish_padded(inst, padded, "unsplit4", std::move(tours), certified);
}

SolveResult unsplit5(const Instance& inst) {
  require_unsplittable(inst, "unsplit5");
  if (inst.k != 5) throw SolverError("unsplit5 requires k = 5");
  long long total = 0;
  for (int c : inst.customer_ids()) total += inst.demand_of(c);

  std::vector<SolveResult> branches;

  if (total <= inst.k) {
    branches.push_back(single_tour_everything(inst, "unsplit5"));
  } else {
    // Branch A: mod-5 packing of the unit expansion (GW primal-dual),
    // shortcut to customers, per-type local tours.
    Instance padded = pad_unsplittable_saturated(inst);
    CyclePacking packing = project_expanded_packing(
        padded,
        [](const Instance& u) {
          auto wf = [&](int a, int b) { return u.w(a, b); };
          return mod_k_cycle_packing(u.customer_ids(), wf, 5).cycles;
        },
        PackFlavor::demand_mod_k);

    auto wf = [&](int a, int b) { return padded.w(a, b); };
    std::vector<Tour> tours;
    for (const auto& cyc : packing.cycles) {
      auto small = [&](int v) { return padded.demand_of(v) <= 2; };
      std::vector<int> smalls = subcycle(cyc, small);
      std::vector<int> bigs = subcycle(cyc, [&](int v) { return !small(v); });
      long long x = demand_size(padded, smalls);

      std::vector<Tour> cycle_tours;
      auto trivial_rest = [&](int except) {
        for (int v : bigs)
          if (v != except) cycle_tours.push_back(trivial_tour(padded, v));
      };

      if (x == 0) {
        trivial_rest(-1);
      } else if (x == 1) {
        // Lone 1-demand customer, cheapest big anchor.
        int u = smalls[0];
        int bestv = -1;
        double best_w = kInf;
        for (int v : bigs) {
          double w = padded.w(0, u) + padded.w(u, v) + padded.w(v, 0);
          if (w < best_w - padded.tol()) {
            best_w = w;
            bestv = v;
          }
        }
        if (bestv == -1) throw SolverError("unsplit5: x=1 cycle lacks an anchor");
        Tour t;
        t.customers = {u, bestv};
        t.deliver = {1, padded.demand_of(bestv)};
        cycle_tours.push_back(std::move(t));
        trivial_rest(bestv);
      } else if (x == 2) {
        // Smalls total 2; a 3-demand anchor joins them in one tour, a
        // 4-demand anchor needs the two-tour split.
        int anchor3 = -1, anchor4 = -1;
        for (int v : bigs) {
          if (padded.demand_of(v) == 3 && anchor3 == -1) anchor3 = v;
          if (padded.demand_of(v) == 4 && anchor4 == -1) anchor4 = v;
        }
        int anchor = anchor3 != -1 ? anchor3 : anchor4;
        if (anchor == -1) throw SolverError("unsplit5: x=2 cycle lacks an anchor");
        std::vector<int> keep = smalls;
        keep.push_back(anchor);
        auto ts = best_partition_tours(padded, keep);
        for (Tour& t : ts) cycle_tours.push_back(std::move(t));
        trivial_rest(anchor);
      } else if (x <= 5) {
        trivial_rest(-1);
        auto ts = build_local_tours(padded, smalls, LocalRule::single);
        for (Tour& t : ts) cycle_tours.push_back(std::move(t));
      } else {
        trivial_rest(-1);
        long long m = (x + 3) / 4;  // kappa = ceil(5/2)+1 = 4
        std::vector<long long> caps(m - 1, 4);
        caps.push_back(x - (m - 1) * 4);
        auto ts = best_rotation_tours(padded, smalls, caps);
        for (Tour& t : ts) cycle_tours.push_back(std::move(t));
      }

      double cw = cycle_weight(cyc, wf);
      double dc = delta_over(padded, cyc);
      assert_bound(padded, "unsplit5 per-cycle",
                   tours_weight(padded, cycle_tours),
                   (2.0 / 3.0) * dc + (2.0 / 3.0) * cw);
      for (Tour& t : cycle_tours) tours.push_back(std::move(t));
    }
    double certified =
        (2.0 / 3.0) * padded.delta() + (2.0 / 3.0) * packing.weight;
    branches.push_back(
        finish_padded(inst, padded, "unsplit5", std::move(tours), certified));
  }

  // Branch B: LP-UITP on H_CS with the k = 5 fallback gamma and safeguards.
  HamCycle h_cs = christofides_cycle(inst);
  for (double gamma : {std::log(5.0 / 3.0), std::log(2.0), 0.0}) {
    try {
      branches.push_back(lp_uitp(inst, h_cs, gamma, 1));
    } catch (const LpError&) {
      break;  // enumeration limit: keep the packing branch only
    }
  }

  size_t pick = 0;
  for (size_t i = 1; i < branches.size(); ++i)
    if (branches[i].weight < branches[pick].weight - inst.tol()) pick = i;
  SolveResult out = std::move(branches[pick]);
  out.algorithm = "unsplit5";
  out.inputs_digest = digest(inst);
  return out;
}

SolveResult lp_uitp(const Instance& inst, const HamCycle& h, double gamma,
                    std::uint64_t seed) {
  require_unsplittable(inst, "lp_uitp");
  if (gamma < 0) throw SolverError("lp_uitp requires gamma >= 0");
  SolveResult r;
  r.algorithm = "lp-uitp";
  r.inputs_digest = digest(inst);

  std::vector<char> covered(inst.n + 1, 0);
  std::vector<Tour> chosen;
  if (gamma > 0) {
    TourSet tours = enumerate_tours(inst, inst.k);
    LpSolution lp = solve_cover_lp(tours, inst.n);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uu(0.0, 1.0);
    for (size_t t = 0; t < tours.tours.size(); ++t) {
      double draw = uu(rng);
      if (draw < std::min(1.0, gamma * lp.x[t])) {
        // Keep each customer only in its first selected tour.
        Tour kept;
        for (size_t i = 0; i < tours.tours[t].order.size(); ++i) {
          int c = tours.tours[t].order[i];
          if (!covered[c]) {
            covered[c] = 1;
            kept.customers.push_back(c);
            kept.deliver.push_back(inst.demand_of(c));
          }
        }
        if (!kept.customers.empty()) chosen.push_back(std::move(kept));
      }
    }
  }

  // Residual customers go through the refined UITP on h shortcut to them.
  std::vector<int> residual;
  for (int c = 1; c <= inst.n; ++c)
    if (!covered[c]) residual.push_back(c);
  if (!residual.empty()) {
    Instance sub;
    sub.k = inst.k;
    sub.variant = Variant::unsplittable;
    sub.n = static_cast<int>(residual.size());
    std::vector<int> to_orig = {0};
    for (int c : residual) {
      sub.demands.push_back(inst.demand_of(c));
      to_orig.push_back(c);
    }
    const int rows = sub.n + 1;
    sub.weights.assign(static_cast<size_t>(rows) * rows, 0.0);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j)
        sub.weights[static_cast<size_t>(i) * rows + j] =
            inst.w(to_orig[i], to_orig[j]);
    HamCycle sub_h;
    for (int v : h.order) {
      if (v == 0) {
        sub_h.order.push_back(0);
      } else {
        auto it = std::find(to_orig.begin(), to_orig.end(), v);
        if (it != to_orig.end())
          sub_h.order.push_back(static_cast<int>(it - to_orig.begin()));
      }
    }
    auto swf = [&](int a, int b) { return sub.w(a, b); };
    sub_h.weight = cycle_weight(sub_h.order, swf);
    SolveResult rest = refined_ag_uitp(sub, sub_h);
    for (const Tour& t : rest.itinerary.tours) {
      Tour mapped;
      for (size_t i = 0; i < t.customers.size(); ++i) {
        mapped.customers.push_back(to_orig[t.customers[i]]);
        mapped.deliver.push_back(t.deliver[i]);
      }
      r.itinerary.tours.push_back(std::move(mapped));
    }
  }
  for (Tour& t : chosen) r.itinerary.tours.push_back(std::move(t));
  r.weight = r.itinerary.total_weight(inst);
  r.certified_bound = kInf;  // Lemma LPUITP bounds the expectation only
  check_feasible(inst, r.itinerary);
  return r;
}

SolveResult unsplit_portfolio(const Instance& inst, std::uint64_t seed,
                              const std::optional<HamCycle>& alpha_cycle) {
  require_unsplittable(inst, "unsplit_portfolio");
  if (inst.k < 3) throw SolverError("unsplit_portfolio requires k >= 3");
  HamCycle h_cs = christofides_cycle(inst);
  const HamCycle& alpha = alpha_cycle ? *alpha_cycle : h_cs;

  std::vector<SolveResult> runs;
  std::vector<double> gammas = {0.0, std::log(2.0), gamma_select(inst.k)};
  std::uint64_t branch_seed = seed;
  for (double g : gammas) {
    try {
      runs.push_back(lp_uitp(inst, h_cs, g, branch_seed++));
      if (alpha_cycle)
        runs.push_back(lp_uitp(inst, alpha, g, branch_seed++));
    } catch (const LpError&) {
      if (g == 0) throw;  // gamma = 0 never enumerates; should not fail
    }
  }
  if (inst.k == 3) runs.push_back(unsplit3(inst));
  if (inst.k == 4) runs.push_back(unsplit4(inst));
  if (inst.k == 5) runs.push_back(unsplit5(inst));

  size_t pick = 0;
  for (size_t i = 1; i < runs.size(); ++i)
    if (runs[i].weight < runs[pick].weight - inst.tol()) pick = i;
  SolveResult out;
  out.algorithm = "portfolio-unsplit";
  out.inputs_digest = digest(inst);
  for (const auto& run : runs)
    out.branches.emplace_back(run.algorithm, run.weight, run.certified_bound);
  out.weight = runs[pick].weight;
  out.certified_bound = runs[pick].certified_bound;
  out.itinerary = std::move(runs[pick].itinerary);
  return out;
}

}  // namespace cvrp
