#include "cvrp/tsp.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>
#include <set>

namespace cvrp {

double cycle_weight(const std::vector<int>& cycle, const WeightFn& weight_fn) {
  if (cycle.size() < 2) return 0.0;
  double s = 0;
  for (size_t i = 0; i < cycle.size(); ++i)
    s += weight_fn(cycle[i], cycle[(i + 1) % cycle.size()]);
  return s;
}

Tree mst(const std::vector<int>& vertices, const WeightFn& weight_fn) {
  const int m = static_cast<int>(vertices.size());
  if (m < 1) throw TspError("mst needs at least one vertex");
  Tree out;
  if (m == 1) return out;
  // Prim from vertices[0]; argmin ties resolve to the lowest index.
  std::vector<bool> in_tree(m, false);
  std::vector<double> best(m, std::numeric_limits<double>::infinity());
  std::vector<int> from(m, 0);
  in_tree[0] = true;
  for (int j = 1; j < m; ++j) best[j] = weight_fn(vertices[0], vertices[j]);
  for (int step = 1; step < m; ++step) {
    int pick = -1;
    for (int j = 0; j < m; ++j)
      if (!in_tree[j] && (pick == -1 || best[j] < best[pick])) pick = j;
    in_tree[pick] = true;
    out.edges.emplace_back(vertices[from[pick]], vertices[pick]);
    out.weight += best[pick];
    for (int j = 0; j < m; ++j)
      if (!in_tree[j]) {
        double w = weight_fn(vertices[pick], vertices[j]);
        if (w < best[j]) {
          best[j] = w;
          from[j] = pick;
        }
      }
  }
  return out;
}

std::vector<std::vector<int>> euler_shortcut(
    const std::vector<std::pair<int, int>>& multigraph_edges) {
  if (multigraph_edges.empty()) return {};
  // Adjacency as edge indices so parallel edges stay distinct.
  std::map<int, std::vector<size_t>> adj;
  for (size_t e = 0; e < multigraph_edges.size(); ++e) {
    adj[multigraph_edges[e].first].push_back(e);
    adj[multigraph_edges[e].second].push_back(e);
  }
  for (const auto& [v, inc] : adj)
    if (inc.size() % 2 != 0) throw TspError("odd-degree vertex in multigraph");

  std::vector<bool> used(multigraph_edges.size(), false);
  std::map<int, size_t> next_edge;
  std::set<int> remaining;
  for (const auto& [v, inc] : adj) remaining.insert(v);

  std::vector<std::vector<int>> cycles;
  while (!remaining.empty()) {
    int start = *remaining.begin();  // lowest id in the component
    // Hierholzer walk.
    std::vector<int> stack = {start};
    std::vector<int> walk;
    while (!stack.empty()) {
      int v = stack.back();
      size_t& idx = next_edge[v];
      auto& inc = adj[v];
      while (idx < inc.size() && used[inc[idx]]) ++idx;
      if (idx == inc.size()) {
        walk.push_back(v);
        stack.pop_back();
      } else {
        size_t e = inc[idx];
        used[e] = true;
        int to = multigraph_edges[e].first == v ? multigraph_edges[e].second
                                                : multigraph_edges[e].first;
        stack.push_back(to);
      }
    }
    // The stack unwind emits the circuit reversed; flip it so the shortcut
    // traversal starts at the component's lowest vertex id.
    std::reverse(walk.begin(), walk.end());
    std::vector<int> cycle;
    std::set<int> seen;
    for (int v : walk)
      if (seen.insert(v).second) cycle.push_back(v);
    for (int v : cycle) remaining.erase(v);
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

HamCycle christofides(const std::vector<int>& vertices,
                      const WeightFn& weight_fn) {
  const int m = static_cast<int>(vertices.size());
  if (m < 1) throw TspError("christofides needs at least one vertex");
  HamCycle out;
  if (m == 1) {
    out.order = {vertices[0]};
    out.weight = 0;
    return out;
  }
  if (m == 2) {
    out.order = {vertices[0], vertices[1]};
    out.weight = 2 * weight_fn(vertices[0], vertices[1]);
    return out;
  }
  Tree tree = mst(vertices, weight_fn);
  std::map<int, int> degree;
  for (auto [u, v] : tree.edges) {
    degree[u]++;
    degree[v]++;
  }
  std::vector<int> odd;
  for (int v : vertices)
    if (degree[v] % 2 == 1) odd.push_back(v);
  Matching matching = min_perfect_matching(odd, weight_fn);

  std::vector<std::pair<int, int>> edges = tree.edges;
  for (auto p : matching.pairs) edges.push_back(p);
  auto cycles = euler_shortcut(edges);
  if (cycles.size() != 1)
    throw TspError("christofides produced a disconnected walk");
  out.order = cycles[0];
  out.weight = cycle_weight(out.order, weight_fn);

  double cap = tree.weight + matching.weight;
  double scale = std::max(1.0, cap);
  if (out.weight > cap + 1e-9 * scale)
    throw TspError("christofides output exceeded tree+matching weight");
  return out;
}

HamCycle tsp_exact(const std::vector<int>& vertices, const WeightFn& weight_fn,
                   int max_vertices) {
  const int m = static_cast<int>(vertices.size());
  if (m > max_vertices) throw TspError("tsp_exact vertex count above limit");
  if (m < 1) throw TspError("tsp_exact needs at least one vertex");
  HamCycle out;
  if (m == 1) {
    out.order = {vertices[0]};
    return out;
  }
  if (m == 2) {
    out.order = {vertices[0], vertices[1]};
    out.weight = 2 * weight_fn(vertices[0], vertices[1]);
    return out;
  }
  // Held-Karp anchored at vertices[0]: dp[mask][j] = cheapest path over the
  // masked vertices from the anchor ending at j (mask is over 1..m-1).
  const int r = m - 1;
  const size_t full = size_t{1} << r;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> w(size_t(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      w[size_t(i) * m + j] = i == j ? 0.0 : weight_fn(vertices[i], vertices[j]);
  std::vector<std::vector<double>> dp(full, std::vector<double>(r, inf));
  std::vector<std::vector<int>> par(full, std::vector<int>(r, -1));
  for (int j = 0; j < r; ++j) dp[size_t{1} << j][j] = w[size_t(0) * m + (j + 1)];
  for (size_t mask = 1; mask < full; ++mask)
    for (int j = 0; j < r; ++j) {
      if (!(mask >> j & 1) || dp[mask][j] == inf) continue;
      for (int t = 0; t < r; ++t) {
        if (mask >> t & 1) continue;
        size_t nm = mask | (size_t{1} << t);
        double cand = dp[mask][j] + w[size_t(j + 1) * m + (t + 1)];
        if (cand < dp[nm][t]) {
          dp[nm][t] = cand;
          par[nm][t] = j;
        }
      }
    }
  double best = inf;
  int last = -1;
  for (int j = 0; j < r; ++j) {
    double cand = dp[full - 1][j] + w[size_t(j + 1) * m + 0];
    if (cand < best) {
      best = cand;
      last = j;
    }
  }
  std::vector<int> rev;
  size_t mask = full - 1;
  int j = last;
  while (j != -1) {
    rev.push_back(j + 1);
    int p = par[mask][j];
    mask ^= size_t{1} << j;
    j = p;
  }
  out.order = {vertices[0]};
  for (auto it = rev.rbegin(); it != rev.rend(); ++it)
    out.order.push_back(vertices[*it]);
  out.weight = best;
  return out;
}

}  // namespace cvrp
