#include "cvrp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cvrp/bounds.hpp"
#include "cvrp/tsp.hpp"

namespace cvrp {

TourSet enumerate_tours(const Instance& inst, int k, size_t limit) {
  TourSet out;
  auto wf = [&](int a, int b) { return inst.w(a, b); };
  std::vector<int> stack;
  std::function<void(int, long long)> rec = [&](int from, long long load) {
    for (int c = from; c <= inst.n; ++c) {
      if (load + inst.demand_of(c) > k) continue;
      stack.push_back(c);
      if (out.tours.size() >= limit)
        throw LpError("tour enumeration limit exceeded");
      TourInfo info;
      info.customers = stack;
      if (stack.size() <= 2) {
        info.order = stack;
      } else {
        std::vector<int> verts = {0};
        for (int v : stack) verts.push_back(v);
        HamCycle h = tsp_exact(verts, wf, 16);
        size_t at =
            std::find(h.order.begin(), h.order.end(), 0) - h.order.begin();
        for (size_t i = 1; i < h.order.size(); ++i)
          info.order.push_back(h.order[(at + i) % h.order.size()]);
      }
      Tour t;
      t.customers = info.order;
      t.deliver.assign(info.order.size(), 1);
      info.weight = inst.tour_weight(t);
      out.tours.push_back(std::move(info));
      rec(c + 1, load + inst.demand_of(c));
      stack.pop_back();
    }
  };
  rec(1, 0);
  return out;
}

namespace {

constexpr double kEps = 1e-9;

// Dense two-phase primal simplex with Bland's rule; deterministic and exact
// enough for desk-scale covering LPs.
struct Simplex {
  int rows = 0, cols = 0;
  std::vector<std::vector<double>> a;  // rows x (cols+1), last column = rhs
  std::vector<int> basis;

  void pivot(int r, int c) {
    double p = a[r][c];
    for (double& v : a[r]) v /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || std::abs(a[i][c]) < kEps) continue;
      double f = a[i][c];
      for (int j = 0; j <= cols; ++j) a[i][j] -= f * a[r][j];
    }
    basis[r] = c;
  }

  // Minimizes sum(cost[j] * x_j) over the current feasible tableau.
  // Returns the objective value.
  double run(const std::vector<double>& cost) {
    std::vector<double> z(cols + 1, 0.0);
    for (int j = 0; j < cols; ++j) z[j] = cost[j];
    for (int i = 0; i < rows; ++i) {
      double cb = cost[basis[i]];
      if (cb == 0) continue;
      for (int j = 0; j <= cols; ++j) z[j] -= cb * a[i][j];
    }
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols; ++j)
        if (z[j] < -kEps) {
          enter = j;
          break;  // Bland: lowest index
        }
      if (enter == -1) return -z[cols];
      int leave = -1;
      double best_ratio = 0;
      for (int i = 0; i < rows; ++i) {
        if (a[i][enter] <= kEps) continue;
        double ratio = a[i][cols] / a[i][enter];
        if (leave == -1 || ratio < best_ratio - kEps ||
            (ratio <= best_ratio + kEps && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == -1) throw LpError("cover LP is unbounded");
      pivot(leave, enter);
      double cb = z[enter];
      for (int j = 0; j <= cols; ++j) z[j] -= cb * a[leave][j];
    }
  }
};

}  // namespace

LpSolution solve_cover_lp(const TourSet& tours, int n) {
  const int t = static_cast<int>(tours.tours.size());
  for (int v = 1; v <= n; ++v) {
    bool covered = false;
    for (const TourInfo& info : tours.tours)
      if (std::find(info.customers.begin(), info.customers.end(), v) !=
          info.customers.end()) {
        covered = true;
        break;
      }
    if (!covered) throw LpError("a customer appears in no tour");
  }

  // Columns: tours | surplus | artificial. Rows: one per customer.
  Simplex s;
  s.rows = n;
  s.cols = t + n + n;
  s.a.assign(n, std::vector<double>(s.cols + 1, 0.0));
  s.basis.resize(n);
  for (int v = 1; v <= n; ++v) {
    int r = v - 1;
    for (int j = 0; j < t; ++j) {
      const auto& cs = tours.tours[j].customers;
      if (std::find(cs.begin(), cs.end(), v) != cs.end()) s.a[r][j] = 1.0;
    }
    s.a[r][t + r] = -1.0;      // surplus
    s.a[r][t + n + r] = 1.0;   // artificial
    s.a[r][s.cols] = 1.0;      // rhs
    s.basis[r] = t + n + r;
  }

  std::vector<double> phase1(s.cols, 0.0);
  for (int r = 0; r < n; ++r) phase1[t + n + r] = 1.0;
  double infeas = s.run(phase1);
  if (infeas > 1e-7) throw LpError("cover LP phase 1 failed");

  // Pivot any artificial still in the basis out of it (degenerate rows).
  for (int r = 0; r < n; ++r) {
    if (s.basis[r] < t + n) continue;
    int enter = -1;
    for (int j = 0; j < t + n; ++j)
      if (std::abs(s.a[r][j]) > kEps) {
        enter = j;
        break;
      }
    if (enter != -1) s.pivot(r, enter);
  }

  std::vector<double> phase2(s.cols, 0.0);
  for (int j = 0; j < t; ++j) phase2[j] = tours.tours[j].weight;
  for (int r = 0; r < n; ++r) phase2[t + n + r] = 1e18;  // bar artificials
  double obj = s.run(phase2);

  LpSolution out;
  out.x.assign(t, 0.0);
  for (int r = 0; r < n; ++r)
    if (s.basis[r] < t) out.x[s.basis[r]] = std::max(0.0, s.a[r][s.cols]);
  out.objective = obj;

  for (int v = 1; v <= n; ++v) {
    double cover = 0;
    for (int j = 0; j < t; ++j) {
      const auto& cs = tours.tours[j].customers;
      if (std::find(cs.begin(), cs.end(), v) != cs.end()) cover += out.x[j];
    }
    if (cover < 1.0 - 1e-7) throw LpError("cover LP solution undercovers");
  }
  return out;
}

double gamma_select(int k, double x_star) {
  const double half = static_cast<double>(k / 2 + 1);
  double gamma;
  if (x_star > 0) {
    gamma = std::log((k + 1 - 1.0 / x_star) / half);
  } else if (k < 7) {
    gamma = std::log(static_cast<double>(k) / half);
  } else {
    RatioReport rep = ratio_unsplit_final(k);
    gamma = std::log((k + 1 - rep.l) / half);
  }
  return std::max(0.0, gamma);
}

}  // namespace cvrp
