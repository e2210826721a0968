#include "cvrp/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <limits>

#include "cvrp/tsp.hpp"

namespace cvrp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cheapest depot tour visiting exactly the customers in `subset` (a bitmask
// over local indexes), via Held-Karp on subset + depot.
double best_tour_weight(const Instance& inst, const std::vector<int>& ids,
                        std::uint32_t subset) {
  std::vector<int> verts = {0};
  for (int i = 0; i < static_cast<int>(ids.size()); ++i)
    if (subset >> i & 1) verts.push_back(ids[i]);
  if (verts.size() == 1) return 0;
  if (verts.size() == 2) return 2 * inst.w(0, verts[1]);
  auto wf = [&](int a, int b) { return inst.w(a, b); };
  return tsp_exact(verts, wf, 16).weight;
}

Tour best_tour(const Instance& inst, const std::vector<int>& ids,
               std::uint32_t subset) {
  std::vector<int> verts = {0};
  for (int i = 0; i < static_cast<int>(ids.size()); ++i)
    if (subset >> i & 1) verts.push_back(ids[i]);
  Tour t;
  if (verts.size() == 1) return t;
  std::vector<int> order;
  if (verts.size() == 2) {
    order = {verts[1]};
  } else {
    auto wf = [&](int a, int b) { return inst.w(a, b); };
    HamCycle h = tsp_exact(verts, wf, 16);
    size_t at = std::find(h.order.begin(), h.order.end(), 0) - h.order.begin();
    for (size_t i = 1; i < h.order.size(); ++i)
      order.push_back(h.order[(at + i) % h.order.size()]);
  }
  for (int c : order) {
    t.customers.push_back(c);
    t.deliver.push_back(inst.demand_of(c));
  }
  return t;
}

OracleResult exact_partition_cvrp(const Instance& inst) {
  const auto ids = inst.customer_ids();
  const int n = inst.n;
  const std::uint32_t full = (n >= 31) ? 0 : (std::uint32_t{1} << n) - 1;
  if (n >= 31) throw OracleError("oracle size cap exceeded");

  // Feasible subsets and their optimal tour weights.
  std::vector<double> tour_w(full + 1, kInf);
  std::uint64_t states = 0;
  for (std::uint32_t s = 1; s <= full; ++s) {
    long long d = 0;
    for (int i = 0; i < n; ++i)
      if (s >> i & 1) d += inst.demand_of(ids[i]);
    if (d <= inst.k) {
      tour_w[s] = best_tour_weight(inst, ids, s);
      ++states;
    }
  }

  std::vector<double> f(full + 1, kInf);
  std::vector<std::uint32_t> pick(full + 1, 0);
  f[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    int low = std::countr_zero(mask);
    std::uint32_t rest = mask ^ (std::uint32_t{1} << low);
    // Enumerate subsets of mask containing the lowest customer.
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      std::uint32_t t = sub | (std::uint32_t{1} << low);
      ++states;
      if (tour_w[t] < kInf && f[mask ^ t] + tour_w[t] < f[mask]) {
        f[mask] = f[mask ^ t] + tour_w[t];
        pick[mask] = t;
      }
      if (sub == 0) break;
    }
  }
  if (f[full] == kInf) throw OracleError("no feasible partition exists");

  OracleResult out;
  out.optimum = f[full];
  out.states_expanded = states;
  std::uint32_t mask = full;
  while (mask) {
    out.itinerary.tours.push_back(best_tour(inst, ids, pick[mask]));
    mask ^= pick[mask];
  }
  check_feasible(inst, out.itinerary);
  return out;
}

}  // namespace

int oracle_nmax_default() {
  if (const char* env = std::getenv("CVRP_ORACLE_NMAX")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 12;
}

OracleResult exact_cvrp(const Instance& inst, int max_expanded) {
  const int cap = max_expanded > 0 ? max_expanded : oracle_nmax_default();
  if (inst.variant == Variant::splittable) {
    UnitExpansion exp = expand_unit(inst);
    if (exp.expanded.n > cap) throw OracleError("oracle size cap exceeded");
    OracleResult r = exact_partition_cvrp(exp.expanded);
    r.itinerary = lift_back(inst, exp, r.itinerary);
    return r;
  }
  if (inst.n > cap) throw OracleError("oracle size cap exceeded");
  return exact_partition_cvrp(inst);
}

namespace {

// Minimum-weight partition of the vertex set into blocks accepted by
// `block_ok`, each block priced at its cheapest Hamiltonian cycle.
double exact_block_partition(const std::vector<int>& vertices,
                             const WeightFn& weight_fn, int size_cap,
                             const std::function<bool(int)>& block_ok) {
  const int m = static_cast<int>(vertices.size());
  if (m > size_cap) throw OracleError("oracle size cap exceeded");
  const std::uint32_t full = (std::uint32_t{1} << m) - 1;
  std::vector<double> cyc(full + 1, kInf);
  for (std::uint32_t s = 1; s <= full; ++s) {
    int cnt = std::popcount(s);
    if (!block_ok(cnt)) continue;
    std::vector<int> verts;
    for (int i = 0; i < m; ++i)
      if (s >> i & 1) verts.push_back(vertices[i]);
    cyc[s] = tsp_exact(verts, weight_fn, 16).weight;
  }
  std::vector<double> f(full + 1, kInf);
  f[0] = 0;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    int low = std::countr_zero(mask);
    std::uint32_t rest = mask ^ (std::uint32_t{1} << low);
    for (std::uint32_t sub = rest;; sub = (sub - 1) & rest) {
      std::uint32_t t = sub | (std::uint32_t{1} << low);
      if (cyc[t] < kInf && f[mask ^ t] + cyc[t] < f[mask])
        f[mask] = f[mask ^ t] + cyc[t];
      if (sub == 0) break;
    }
  }
  if (f[full] == kInf) throw OracleError("no feasible partition exists");
  return f[full];
}

}  // namespace

double exact_mod_k_cycle_packing(const std::vector<int>& vertices,
                                 const WeightFn& weight_fn, int k) {
  if (static_cast<int>(vertices.size()) % k != 0)
    throw OracleError("vertex count not divisible by k");
  return exact_block_partition(vertices, weight_fn, 9,
                               [k](int c) { return c >= k && c % k == 0; });
}

double exact_2factor(const std::vector<int>& vertices,
                     const WeightFn& weight_fn) {
  return exact_block_partition(vertices, weight_fn, 8,
                               [](int c) { return c >= 3; });
}

double exact_4cycle_packing(const std::vector<int>& vertices,
                            const WeightFn& weight_fn) {
  if (vertices.size() % 4 != 0)
    throw OracleError("vertex count not divisible by 4");
  return exact_block_partition(vertices, weight_fn, 8,
                               [](int c) { return c == 4; });
}

}  // namespace cvrp
