#include "cvrp/packing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace cvrp {

namespace {

double packing_weight(const std::vector<std::vector<int>>& cycles,
                      const WeightFn& weight_fn) {
  double s = 0;
  for (const auto& c : cycles) s += cycle_weight(c, weight_fn);
  return s;
}

}  // namespace

CyclePacking min_cycle_packing(const std::vector<int>& vertices,
                               const WeightFn& weight_fn) {
  const int m = static_cast<int>(vertices.size());
  if (m < 3) throw PackingError("cycle packing needs at least 3 vertices");

  // Gadget: per edge e=(i,j) two twin nodes; matching the twins together puts
  // e into the 2-factor. Each vertex also gets (m-3) zero-weight dummy nodes
  // that absorb all but two of its edge slots, forcing degree exactly 2.
  struct Slot {
    int i, j;  // local vertex indexes, i < j
    int side;  // 0 = slot at i, 1 = slot at j
  };
  std::vector<Slot> slots;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      slots.push_back({i, j, 0});
      slots.push_back({i, j, 1});
    }
  const int n_slots = static_cast<int>(slots.size());
  const int dummies_per_vertex = m - 3;
  const int n_gadget = n_slots + m * dummies_per_vertex;
  auto dummy_owner = [&](int g) { return (g - n_slots) / dummies_per_vertex; };

  double large = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      large += std::abs(weight_fn(vertices[i], vertices[j]));

  auto gw = [&](int a, int b) -> double {
    if (a > b) std::swap(a, b);
    if (b < n_slots) {
      // twin pair of the same edge?
      if (b == a + 1 && slots[a].i == slots[b].i && slots[a].j == slots[b].j &&
          slots[a].side == 0 && slots[b].side == 1)
        return weight_fn(vertices[slots[a].i], vertices[slots[a].j]);
      return large;
    }
    if (a >= n_slots) return large;  // dummy-dummy
    int owner = dummy_owner(b);
    int at = slots[a].side == 0 ? slots[a].i : slots[a].j;
    return at == owner ? 0.0 : large;
  };

  std::vector<int> gadget_ids(n_gadget);
  std::iota(gadget_ids.begin(), gadget_ids.end(), 0);
  Matching match = min_perfect_matching(gadget_ids, gw);

  std::vector<std::vector<int>> chosen(m);
  for (auto [a, b] : match.pairs) {
    if (b < n_slots && b == a + 1 && slots[a].i == slots[b].i &&
        slots[a].j == slots[b].j) {
      chosen[slots[a].i].push_back(slots[a].j);
      chosen[slots[a].j].push_back(slots[a].i);
    } else if (gw(a, b) >= large) {
      throw PackingError("2-factor gadget matching selected a non-edge");
    }
  }
  for (int i = 0; i < m; ++i)
    if (chosen[i].size() != 2)
      throw PackingError("2-factor gadget produced a bad degree");

  CyclePacking out;
  out.flavor = PackFlavor::plain;
  std::vector<bool> done(m, false);
  for (int s = 0; s < m; ++s) {
    if (done[s]) continue;
    std::vector<int> cyc = {s};
    done[s] = true;
    int prev = s;
    int cur = std::min(chosen[s][0], chosen[s][1]);
    while (cur != s) {
      cyc.push_back(cur);
      done[cur] = true;
      int nxt = chosen[cur][0] == prev ? chosen[cur][1] : chosen[cur][0];
      prev = cur;
      cur = nxt;
    }
    for (int& v : cyc) v = vertices[v];
    out.cycles.push_back(std::move(cyc));
  }
  out.weight = packing_weight(out.cycles, weight_fn);
  return out;
}

SaturatedPacking saturated_cycle_packing(const std::vector<int>& vertices,
                                         const WeightFn& weight_fn) {
  const int m = static_cast<int>(vertices.size());
  if (m < 1) throw PackingError("saturated packing needs at least 1 vertex");

  // Gadget nodes, in order:
  //   per pair (i<j): two twin slots (edge used <=> twins matched);
  //   per vertex i, copy c in {0,1}: a vertex-side and a depot-side slot for
  //     the depot edge (two copies so a singleton path can use it twice);
  //   per vertex: m-1 dummies soaking up unused vertex slots;
  //   2m depot dummies with free mutual 0-edges (their pairing forces the
  //     used depot degree to be even).
  struct Slot {
    int i, j, side;
  };
  std::vector<Slot> slots;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      slots.push_back({i, j, 0});
      slots.push_back({i, j, 1});
    }
  const int n_pair = static_cast<int>(slots.size());
  const int depot_edge_base = n_pair;        // 4 nodes per vertex: (VA,DB)x2
  const int n_depot_edges = 4 * m;
  const int vertex_dummy_base = depot_edge_base + n_depot_edges;
  const int dummies_per_vertex = m - 1;
  const int depot_dummy_base = vertex_dummy_base + m * dummies_per_vertex;
  const int n_gadget = depot_dummy_base + 2 * m;

  double large = 1.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j)
      large += std::abs(weight_fn(vertices[i], vertices[j]));
    large += 2 * std::abs(weight_fn(0, vertices[i]));
  }

  auto owner_of_slot = [&](int g) -> int {
    if (g < n_pair) return slots[g].side == 0 ? slots[g].i : slots[g].j;
    if (g < vertex_dummy_base) {
      int off = g - depot_edge_base;
      return off % 2 == 0 ? off / 4 : -1;  // odd offsets are depot-side
    }
    return -2;
  };

  auto gw = [&](int a, int b) -> double {
    if (a > b) std::swap(a, b);
    // Twin edges carry the real weights.
    if (b < n_pair) {
      if (b == a + 1 && slots[a].i == slots[b].i && slots[a].j == slots[b].j &&
          slots[a].side == 0)
        return weight_fn(vertices[slots[a].i], vertices[slots[a].j]);
      return large;
    }
    if (a >= depot_edge_base && b < vertex_dummy_base) {
      if (b == a + 1 && (a - depot_edge_base) % 2 == 0)
        return weight_fn(0, vertices[(a - depot_edge_base) / 4]);
      return large;
    }
    // Vertex dummies absorb that vertex's unused slots.
    if (b >= vertex_dummy_base && b < depot_dummy_base) {
      if (a >= vertex_dummy_base) return large;  // vertex dummy pair
      int owner = (b - vertex_dummy_base) / dummies_per_vertex;
      return owner_of_slot(a) == owner ? 0.0 : large;
    }
    // Depot dummies absorb unused depot-side slots, or pair together.
    if (b >= depot_dummy_base) {
      if (a >= depot_dummy_base) return 0.0;
      if (a >= depot_edge_base && a < vertex_dummy_base &&
          (a - depot_edge_base) % 2 == 1)
        return 0.0;
      return large;
    }
    return large;
  };

  std::vector<int> ids(n_gadget);
  std::iota(ids.begin(), ids.end(), 0);
  Matching match = min_perfect_matching(ids, gw);

  std::vector<std::vector<int>> adj(m);   // used pair edges
  std::vector<int> depot_deg(m, 0);       // used depot edges per vertex
  for (auto [a, b] : match.pairs) {
    if (b < n_pair && b == a + 1 && slots[a].i == slots[b].i &&
        slots[a].j == slots[b].j) {
      adj[slots[a].i].push_back(slots[a].j);
      adj[slots[a].j].push_back(slots[a].i);
    } else if (a >= depot_edge_base && a < vertex_dummy_base && b == a + 1 &&
               (a - depot_edge_base) % 2 == 0) {
      depot_deg[(a - depot_edge_base) / 4]++;
    } else if (gw(a, b) >= large) {
      throw PackingError("saturated gadget matching selected a non-edge");
    }
  }
  for (int i = 0; i < m; ++i)
    if (static_cast<int>(adj[i].size()) + depot_deg[i] != 2)
      throw PackingError("saturated gadget produced a bad degree");

  SaturatedPacking out;
  std::vector<bool> done(m, false);
  // Depot paths first: walk from each depot-incident vertex.
  for (int s = 0; s < m; ++s) {
    if (done[s] || depot_deg[s] == 0) continue;
    std::vector<int> path = {s};
    done[s] = true;
    out.weight += weight_fn(0, vertices[s]);
    if (depot_deg[s] == 2) {  // singleton path
      out.weight += weight_fn(0, vertices[s]);
      out.depot_paths.push_back({vertices[s]});
      continue;
    }
    int prev = -1;
    int cur = s;
    for (;;) {
      int nxt = adj[cur][0] != prev ? adj[cur][0] : adj[cur][1];
      out.weight += weight_fn(vertices[cur], vertices[nxt]);
      path.push_back(nxt);
      done[nxt] = true;
      prev = cur;
      cur = nxt;
      if (depot_deg[cur] == 1) break;  // reached the other end
    }
    out.weight += weight_fn(0, vertices[cur]);
    std::vector<int> mapped;
    for (int v : path) mapped.push_back(vertices[v]);
    out.depot_paths.push_back(std::move(mapped));
  }
  // Remaining vertices sit on plain cycles.
  for (int s = 0; s < m; ++s) {
    if (done[s]) continue;
    std::vector<int> cyc = {s};
    done[s] = true;
    int prev = s;
    int cur = std::min(adj[s][0], adj[s][1]);
    out.weight += weight_fn(vertices[s], vertices[cur]);
    while (cur != s) {
      cyc.push_back(cur);
      done[cur] = true;
      int nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
      out.weight += weight_fn(vertices[cur], vertices[nxt]);
      prev = cur;
      cur = nxt;
    }
    for (int& v : cyc) v = vertices[v];
    out.cycles.push_back(std::move(cyc));
  }
  return out;
}

TreePacking mod_k_tree_packing(const std::vector<int>& vertices,
                               const WeightFn& weight_fn, int k) {
  const int m = static_cast<int>(vertices.size());
  if (k < 2) throw PackingError("mod-k packing needs k >= 2");
  if (m % k != 0)
    throw PackingError("vertex count not divisible by k; pad first");

  // Synchronized moat growth. comp[] is a flat union-find by component id,
  // potential[] accumulates the dual value around each vertex, and f-active
  // components (size not divisible by k) all grow at unit rate.
  std::vector<int> comp(m);
  std::iota(comp.begin(), comp.end(), 0);
  std::vector<int> comp_size(m, 1);
  std::vector<bool> active(m, k != 1);
  std::vector<double> potential(m, 0.0);
  auto find = [&](int v) {
    while (comp[v] != v) {
      comp[v] = comp[comp[v]];
      v = comp[v];
    }
    return v;
  };

  std::vector<std::pair<int, int>> merge_edges;  // local indexes, in order
  int active_count = m;  // every singleton is f-active since k >= 2

  const double tie_eps = 1e-12;
  while (active_count > 0) {
    double best_t = std::numeric_limits<double>::infinity();
    int bu = -1, bv = -1, blo = -1, bhi = -1;
    for (int u = 0; u < m; ++u)
      for (int v = u + 1; v < m; ++v) {
        int cu = find(u);
        int cv = find(v);
        if (cu == cv) continue;
        int rate = (active[cu] ? 1 : 0) + (active[cv] ? 1 : 0);
        if (rate == 0) continue;
        double slack = weight_fn(vertices[u], vertices[v]) - potential[u] -
                       potential[v];
        double t = slack / rate;
        int lo = std::min(cu, cv);
        int hi = std::max(cu, cv);
        bool better;
        if (bu == -1 || t < best_t - tie_eps) {
          better = true;
        } else if (t <= best_t + tie_eps) {
          better = std::tie(lo, hi, u, v) < std::tie(blo, bhi, bu, bv);
        } else {
          better = false;
        }
        if (better) {
          best_t = t;
          bu = u;
          bv = v;
          blo = lo;
          bhi = hi;
        }
      }
    if (bu == -1) throw PackingError("moat growth stalled");
    best_t = std::max(0.0, best_t);
    for (int v = 0; v < m; ++v)
      if (active[find(v)]) potential[v] += best_t;
    int cu = find(bu);
    int cv = find(bv);
    merge_edges.emplace_back(bu, bv);
    int root = std::min(cu, cv);
    int other = cu ^ cv ^ root;
    if (active[cu]) --active_count;
    if (active[cv]) --active_count;
    comp[other] = root;
    comp_size[root] += comp_size[other];
    active[root] = comp_size[root] % k != 0;
    if (active[root]) ++active_count;
  }

  // Reverse delete: drop any merge edge whose removal leaves both sides with
  // size divisible by k.
  std::vector<bool> keep(merge_edges.size(), true);
  std::vector<std::vector<std::pair<int, size_t>>> adj(m);
  for (size_t e = 0; e < merge_edges.size(); ++e) {
    adj[merge_edges[e].first].emplace_back(merge_edges[e].second, e);
    adj[merge_edges[e].second].emplace_back(merge_edges[e].first, e);
  }
  auto side_size = [&](int start, size_t cut_edge) {
    std::vector<int> stack = {start};
    std::vector<bool> seen(m, false);
    seen[start] = true;
    int cnt = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++cnt;
      for (auto [to, e] : adj[v])
        if (e != cut_edge && keep[e] && !seen[to]) {
          seen[to] = true;
          stack.push_back(to);
        }
    }
    return cnt;
  };
  for (size_t i = merge_edges.size(); i-- > 0;) {
    if (!keep[i]) continue;
    keep[i] = false;
    if (side_size(merge_edges[i].first, merge_edges.size()) % k != 0)
      keep[i] = true;
    // (checking one side suffices: total component size is divisible by k)
  }

  // Collect the kept forest into trees.
  TreePacking out;
  std::vector<bool> seen(m, false);
  for (int s = 0; s < m; ++s) {
    if (seen[s]) continue;
    Tree t;
    std::vector<int> stack = {s};
    seen[s] = true;
    int count = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++count;
      for (auto [to, e] : adj[v])
        if (keep[e] && !seen[to]) {
          seen[to] = true;
          t.edges.emplace_back(vertices[v], vertices[to]);
          t.weight += weight_fn(vertices[v], vertices[to]);
          stack.push_back(to);
        }
    }
    if (count % k != 0)
      throw PackingError("pruned forest has a component not divisible by k");
    out.trees.push_back(std::move(t));
    out.weight += out.trees.back().weight;
  }
  return out;
}

CyclePacking mod_k_cycle_packing(const std::vector<int>& vertices,
                                 const WeightFn& weight_fn, int k) {
  TreePacking trees = mod_k_tree_packing(vertices, weight_fn, k);
  std::map<int, int> degree;
  for (int v : vertices) degree[v] = 0;
  std::vector<std::pair<int, int>> edges;
  for (const Tree& t : trees.trees)
    for (auto [u, v] : t.edges) {
      edges.emplace_back(u, v);
      degree[u]++;
      degree[v]++;
    }
  std::vector<int> odd;
  for (int v : vertices)
    if (degree[v] % 2 == 1) odd.push_back(v);
  Matching match = min_perfect_matching(odd, weight_fn);
  for (auto p : match.pairs) edges.push_back(p);

  // Isolated tree components with all-even degrees have no edges only when a
  // tree is a single vertex, which cannot happen for k >= 2.
  CyclePacking out;
  out.flavor = PackFlavor::mod_k;
  out.cycles = euler_shortcut(edges);
  out.weight = packing_weight(out.cycles, weight_fn);
  for (const auto& c : out.cycles)
    if (static_cast<int>(c.size()) % k != 0)
      throw PackingError("mod-k shortcut produced a bad cycle length");
  double cap = trees.weight + match.weight;
  if (out.weight > cap + 1e-9 * std::max(1.0, cap))
    throw PackingError("mod-k cycles exceeded tree + matching weight");
  return out;
}

CyclePacking mod2_cycle_packing(const std::vector<int>& vertices,
                                const WeightFn& weight_fn) {
  const int m = static_cast<int>(vertices.size());
  if (m % 2 != 0) throw PackingError("odd vertex count");
  if (m < 4) throw PackingError("mod-2 packing needs at least 4 vertices");
  Matching first = min_perfect_matching(vertices, weight_fn);
  Matching second = min_matching_on_forbidden(vertices, weight_fn, first.pairs);
  std::vector<std::pair<int, int>> edges = first.pairs;
  for (auto p : second.pairs) edges.push_back(p);
  CyclePacking out;
  out.flavor = PackFlavor::mod_2;
  out.cycles = euler_shortcut(edges);
  out.weight = packing_weight(out.cycles, weight_fn);
  for (const auto& c : out.cycles)
    if (c.size() % 2 != 0 || c.size() < 4)
      throw PackingError("mod-2 union produced a bad cycle");
  return out;
}

Itinerary augmented_matching_tours(const Instance& inst,
                                   const Matching& m_star) {
  if (inst.variant != Variant::unit || inst.k != 4)
    throw PackingError("augmented matching tours expect unit demands, k = 4");
  if (inst.n % 4 != 0)
    throw PackingError("customer count must be divisible by 4; pad first");
  const int s = static_cast<int>(m_star.pairs.size());
  if (2 * s != inst.n)
    throw PackingError("matching does not cover all customers");

  // Orientation t of super-pair (a, b): bit 0 flips edge a, bit 1 flips edge
  // b. The augmented weight is the weight of the 4-customer depot tour.
  auto tour_of = [&](int a, int b, int t) {
    auto [u, u2] = m_star.pairs[a];
    auto [v, v2] = m_star.pairs[b];
    if (t & 1) std::swap(u, u2);
    if (t & 2) std::swap(v, v2);
    return std::vector<int>{u, u2, v, v2};
  };
  auto tour_weight = [&](const std::vector<int>& c) {
    double w = inst.w(0, c[0]) + inst.w(c[3], 0);
    for (int i = 0; i < 3; ++i) w += inst.w(c[i], c[i + 1]);
    return w;
  };
  auto best_orientation = [&](int a, int b) {
    int arg = 0;
    double best = tour_weight(tour_of(a, b, 0));
    for (int t = 1; t < 4; ++t) {
      double w = tour_weight(tour_of(a, b, t));
      if (w < best) {
        best = w;
        arg = t;
      }
    }
    return std::make_pair(best, arg);
  };

  std::vector<int> super_ids(s);
  std::iota(super_ids.begin(), super_ids.end(), 0);
  Matching aug = min_perfect_matching(
      super_ids, [&](int a, int b) { return best_orientation(a, b).first; });

  Itinerary out;
  for (auto [a, b] : aug.pairs) {
    auto [w, t] = best_orientation(a, b);
    Tour tour;
    tour.customers = tour_of(a, b, t);
    tour.deliver.assign(4, 1);
    out.tours.push_back(std::move(tour));
  }
  check_feasible(inst, out);
  return out;
}

CyclePacking shortcut_to_originals(const std::vector<std::vector<int>>& cycles,
                                   const std::vector<int>& origin,
                                   const WeightFn& original_weight,
                                   PackFlavor flavor) {
  // Colocated-copy edges project to zero-weight self-loops and are dropped;
  // degrees stay even.
  std::vector<std::pair<int, int>> edges;
  std::map<int, bool> covered;
  for (const auto& c : cycles) {
    for (int copy : c) covered[origin[copy - 1]] = false;
    for (size_t i = 0; i < c.size() && c.size() >= 2; ++i) {
      int a = origin[c[i] - 1];
      int b = origin[c[(i + 1) % c.size()] - 1];
      if (a != b) edges.emplace_back(a, b);
    }
  }
  for (auto [u, v] : edges) covered[u] = covered[v] = true;

  CyclePacking out;
  out.flavor = flavor;
  out.cycles = euler_shortcut(edges);
  // Customers whose copies only ever met each other become singleton
  // "cycles" of weight zero.
  for (auto& [c, has] : covered)
    if (!has) out.cycles.push_back({c});
  out.weight = packing_weight(out.cycles, original_weight);
  return out;
}

}  // namespace cvrp
