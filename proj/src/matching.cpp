#include "cvrp/matching.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>

namespace cvrp {

namespace {

// ---------------------------------------------------------------------------
// Subset DP: exact on doubles, O(2^m * m). f[mask] = cheapest perfect
// matching of the vertices in mask; the lowest set bit is always paired
// first, which makes the recurrence linear in the pair partner.
// ---------------------------------------------------------------------------
std::vector<std::pair<int, int>> match_dp(int m,
                                          const std::vector<double>& w) {
  const double inf = std::numeric_limits<double>::infinity();
  const size_t full = size_t{1} << m;
  std::vector<double> f(full, inf);
  std::vector<int> choice(full, -1);
  f[0] = 0;
  for (size_t mask = 1; mask < full; ++mask) {
    int i = std::countr_zero(mask);
    size_t rest = mask ^ (size_t{1} << i);
    if (rest == 0) continue;  // odd leftovers stay infeasible
    for (size_t sub = rest; sub; sub &= sub - 1) {
      int j = std::countr_zero(sub);
      double cand = f[rest ^ (size_t{1} << j)] + w[size_t(i) * m + j];
      if (cand < f[mask]) {
        f[mask] = cand;
        choice[mask] = j;
      }
    }
  }
  std::vector<std::pair<int, int>> pairs;
  size_t mask = full - 1;
  while (mask) {
    int i = std::countr_zero(mask);
    int j = choice[mask];
    if (j < 0) throw MatchingError("no perfect matching exists");
    pairs.emplace_back(i, j);
    mask ^= (size_t{1} << i) | (size_t{1} << j);
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Blossom algorithm for maximum-weight perfect matching, O(V^3), on a dense
// int64 matrix. Weights are doubled internally so all dual values stay
// integral. Vertices are 1-based; index 0 is a sentinel.
// ---------------------------------------------------------------------------
struct Blossom {
  struct Edge {
    int u = 0, v = 0;
    long long w = 0;
  };

  int n = 0;    // real vertices
  int n_x = 0;  // real vertices + active blossoms
  std::vector<std::vector<Edge>> g;
  std::vector<std::vector<int>> flower;
  std::vector<std::vector<int>> flower_from;
  std::vector<long long> lab;
  std::vector<int> match, slack, st, pa, state, vis;
  std::deque<int> q;
  int timestamp = 0;

  explicit Blossom(const std::vector<std::vector<long long>>& weights)
      : n(static_cast<int>(weights.size())) {
    const int cap = 2 * n + 1;
    g.assign(cap, std::vector<Edge>(cap));
    flower.assign(cap, {});
    flower_from.assign(cap, std::vector<int>(n + 1, 0));
    lab.assign(cap, 0);
    match.assign(cap, 0);
    slack.assign(cap, 0);
    st.assign(cap, 0);
    pa.assign(cap, 0);
    state.assign(cap, -1);
    vis.assign(cap, 0);
    for (int u = 1; u <= n; ++u)
      for (int v = 1; v <= n; ++v)
        g[u][v] = Edge{u, v, u == v ? 0 : weights[u - 1][v - 1] * 2};
  }

  long long e_delta(const Edge& e) const {
    return lab[e.u] + lab[e.v] - g[e.u][e.v].w;
  }

  void update_slack(int u, int x) {
    if (!slack[x] || e_delta(g[u][x]) < e_delta(g[slack[x]][x])) slack[x] = u;
  }

  void set_slack(int x) {
    slack[x] = 0;
    for (int u = 1; u <= n; ++u)
      if (g[u][x].w > 0 && st[u] != x && state[st[u]] == 0) update_slack(u, x);
  }

  void q_push(int x) {
    if (x <= n) {
      q.push_back(x);
    } else {
      for (int i : flower[x]) q_push(i);
    }
  }

  void set_st(int x, int b) {
    st[x] = b;
    if (x > n)
      for (int i : flower[x]) set_st(i, b);
  }

  int get_pr(int b, int xr) {
    int pr = static_cast<int>(std::find(flower[b].begin(), flower[b].end(), xr) -
                              flower[b].begin());
    if (pr % 2 == 1) {
      std::reverse(flower[b].begin() + 1, flower[b].end());
      return static_cast<int>(flower[b].size()) - pr;
    }
    return pr;
  }

  void set_match(int u, int v) {
    match[u] = g[u][v].v;
    if (u <= n) return;
    Edge e = g[u][v];
    int xr = flower_from[u][e.u];
    int pr = get_pr(u, xr);
    for (int i = 0; i < pr; ++i) set_match(flower[u][i], flower[u][i ^ 1]);
    set_match(xr, v);
    std::rotate(flower[u].begin(), flower[u].begin() + pr, flower[u].end());
  }

  void augment(int u, int v) {
    for (;;) {
      int xnv = st[match[u]];
      set_match(u, v);
      if (!xnv) return;
      set_match(xnv, st[pa[xnv]]);
      u = st[pa[xnv]];
      v = xnv;
    }
  }

  int get_lca(int u, int v) {
    for (++timestamp; u || v; std::swap(u, v)) {
      if (u == 0) continue;
      if (vis[u] == timestamp) return u;
      vis[u] = timestamp;
      u = st[match[u]];
      if (u) u = st[pa[u]];
    }
    return 0;
  }

  void add_blossom(int u, int lca, int v) {
    int b = n + 1;
    while (b <= n_x && st[b]) ++b;
    if (b > n_x) ++n_x;
    lab[b] = 0;
    state[b] = 0;
    match[b] = match[lca];
    flower[b].clear();
    flower[b].push_back(lca);
    for (int x = u, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    std::reverse(flower[b].begin() + 1, flower[b].end());
    for (int x = v, y; x != lca; x = st[pa[y]]) {
      flower[b].push_back(x);
      flower[b].push_back(y = st[match[x]]);
      q_push(y);
    }
    set_st(b, b);
    for (int x = 1; x <= n_x; ++x) g[b][x].w = g[x][b].w = 0;
    for (int x = 1; x <= n; ++x) flower_from[b][x] = 0;
    for (int xs : flower[b]) {
      for (int x = 1; x <= n_x; ++x)
        if (g[b][x].w == 0 || e_delta(g[xs][x]) < e_delta(g[b][x])) {
          g[b][x] = g[xs][x];
          g[x][b] = g[x][xs];
        }
      for (int x = 1; x <= n; ++x)
        if (flower_from[xs][x]) flower_from[b][x] = xs;
    }
    set_slack(b);
  }

  void expand_blossom(int b) {
    for (int i : flower[b]) set_st(i, i);
    int xr = flower_from[b][g[b][pa[b]].u];
    int pr = get_pr(b, xr);
    for (int i = 0; i < pr; i += 2) {
      int xs = flower[b][i];
      int xns = flower[b][i + 1];
      pa[xs] = g[xns][xs].u;
      state[xs] = 1;
      state[xns] = 0;
      slack[xs] = 0;
      set_slack(xns);
      q_push(xns);
    }
    state[xr] = 1;
    pa[xr] = pa[b];
    for (size_t i = pr + 1; i < flower[b].size(); ++i) {
      state[flower[b][i]] = -1;
      set_slack(flower[b][i]);
    }
    st[b] = 0;
  }

  bool on_found_edge(const Edge& e) {
    int u = st[e.u];
    int v = st[e.v];
    if (state[v] == -1) {
      pa[v] = e.u;
      state[v] = 1;
      int nu = st[match[v]];
      slack[v] = slack[nu] = 0;
      state[nu] = 0;
      q_push(nu);
    } else if (state[v] == 0) {
      int lca = get_lca(u, v);
      if (!lca) {
        augment(u, v);
        augment(v, u);
        return true;
      }
      add_blossom(u, lca, v);
    }
    return false;
  }

  bool grow() {
    std::fill(state.begin(), state.begin() + n_x + 1, -1);
    std::fill(slack.begin(), slack.begin() + n_x + 1, 0);
    q.clear();
    for (int x = 1; x <= n_x; ++x)
      if (st[x] == x && !match[x]) {
        pa[x] = 0;
        state[x] = 0;
        q_push(x);
      }
    if (q.empty()) return false;
    for (;;) {
      while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        if (state[st[u]] == 1) continue;
        for (int v = 1; v <= n; ++v)
          if (g[u][v].w > 0 && st[u] != st[v]) {
            if (e_delta(g[u][v]) == 0) {
              if (on_found_edge(g[u][v])) return true;
            } else {
              update_slack(u, st[v]);
            }
          }
      }
      long long d = std::numeric_limits<long long>::max();
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b && state[b] == 1) d = std::min(d, lab[b] / 2);
      for (int x = 1; x <= n_x; ++x)
        if (st[x] == x && slack[x]) {
          if (state[x] == -1)
            d = std::min(d, e_delta(g[slack[x]][x]));
          else if (state[x] == 0)
            d = std::min(d, e_delta(g[slack[x]][x]) / 2);
        }
      for (int u = 1; u <= n; ++u) {
        if (state[st[u]] == 0) {
          if (lab[u] <= d) return false;  // no perfect matching on this side
          lab[u] -= d;
        } else if (state[st[u]] == 1) {
          lab[u] += d;
        }
      }
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b) {
          if (state[b] == 0)
            lab[b] += 2 * d;
          else if (state[b] == 1)
            lab[b] -= 2 * d;
        }
      q.clear();
      for (int x = 1; x <= n_x; ++x)
        if (st[x] == x && slack[x] && st[slack[x]] != x &&
            e_delta(g[slack[x]][x]) == 0)
          if (on_found_edge(g[slack[x]][x])) return true;
      for (int b = n + 1; b <= n_x; ++b)
        if (st[b] == b && state[b] == 1 && lab[b] == 0) expand_blossom(b);
    }
  }

  // Returns mate[] over 1..n, or an empty vector if no perfect matching.
  std::vector<int> solve() {
    n_x = n;
    int matched = 0;
    for (int u = 0; u <= n; ++u) {
      st[u] = u;
      flower[u].clear();
    }
    long long w_max = 0;
    for (int u = 1; u <= n; ++u)
      for (int v = 1; v <= n; ++v) {
        flower_from[u][v] = (u == v ? u : 0);
        w_max = std::max(w_max, g[u][v].w);
      }
    for (int u = 1; u <= n; ++u) lab[u] = w_max;
    while (grow()) ++matched;
    if (2 * matched != n) return {};
    std::vector<int> mate(n + 1, 0);
    for (int u = 1; u <= n; ++u) mate[u] = match[u];
    return mate;
  }
};

// Scales a dense double matrix to int64 so that the largest entry keeps
// around 45 bits, leaving dual-variable headroom in the blossom.
std::vector<std::vector<long long>> scale_to_int(
    int m, const std::vector<double>& w) {
  double mx = 1.0;
  for (double x : w) mx = std::max(mx, std::abs(x));
  double scale = std::ldexp(1.0, 44 - std::ilogb(mx) - 1);
  std::vector<std::vector<long long>> out(m, std::vector<long long>(m, 0));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      out[i][j] = std::llround(w[size_t(i) * m + j] * scale);
  return out;
}

std::vector<std::pair<int, int>> match_blossom(int m,
                                               const std::vector<double>& w) {
  auto iw = scale_to_int(m, w);
  // Convert the minimization into maximization with all weights >= 1 so the
  // maximum-weight matching is forced to be perfect on a complete graph.
  long long top = 0;
  for (auto& row : iw)
    for (long long x : row) top = std::max(top, x);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) iw[i][j] = (i == j) ? 0 : top + 1 - iw[i][j];
  Blossom b(iw);
  auto mate = b.solve();
  if (mate.empty()) throw MatchingError("no perfect matching exists");
  std::vector<std::pair<int, int>> pairs;
  for (int u = 1; u <= m; ++u)
    if (mate[u] > u) pairs.emplace_back(u - 1, mate[u] - 1);
  return pairs;
}

Matching match_on_matrix(const std::vector<int>& vertices,
                         const std::vector<double>& w, const WeightFn& real_w,
                         int dp_threshold) {
  const int m = static_cast<int>(vertices.size());
  auto pairs = m <= dp_threshold ? match_dp(m, w) : match_blossom(m, w);
  Matching out;
  for (auto [i, j] : pairs) {
    int a = vertices[i];
    int b = vertices[j];
    if (a > b) std::swap(a, b);
    out.pairs.emplace_back(a, b);
    out.weight += real_w(a, b);
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace

Matching min_perfect_matching(const std::vector<int>& vertices,
                              const WeightFn& weight_fn, int dp_threshold) {
  const int m = static_cast<int>(vertices.size());
  if (m % 2 != 0) throw MatchingError("odd vertex count");
  if (m == 0) return {};
  std::vector<double> w(size_t(m) * m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      w[size_t(i) * m + j] = w[size_t(j) * m + i] =
          weight_fn(vertices[i], vertices[j]);
  return match_on_matrix(vertices, w, weight_fn, dp_threshold);
}

Matching min_matching_on_forbidden(
    const std::vector<int>& vertices, const WeightFn& weight_fn,
    const std::vector<std::pair<int, int>>& forbidden, int dp_threshold) {
  const int m = static_cast<int>(vertices.size());
  if (m % 2 != 0) throw MatchingError("odd vertex count");
  if (m == 0) return {};
  auto is_forbidden = [&](int a, int b) {
    for (auto [x, y] : forbidden)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  };
  std::vector<double> w(size_t(m) * m, 0.0);
  double finite_sum = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (!is_forbidden(vertices[i], vertices[j]))
        finite_sum += std::abs(weight_fn(vertices[i], vertices[j]));
  // The DP path can carry the spec's 1e15 sentinel exactly; the scaled
  // blossom path needs a large value that does not drown the real weights.
  const double large = m <= dp_threshold ? kForbiddenWeight : finite_sum;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double v = is_forbidden(vertices[i], vertices[j])
                     ? large
                     : weight_fn(vertices[i], vertices[j]);
      w[size_t(i) * m + j] = w[size_t(j) * m + i] = v;
    }
  Matching out = match_on_matrix(vertices, w,
                                 [&](int a, int b) {
                                   return is_forbidden(a, b) ? large
                                                             : weight_fn(a, b);
                                 },
                                 dp_threshold);
  double real = 0;
  for (auto [a, b] : out.pairs) {
    if (is_forbidden(a, b))
      throw MatchingError("no perfect matching avoids the forbidden pairs");
    real += weight_fn(a, b);
  }
  out.weight = real;
  return out;
}

}  // namespace cvrp
