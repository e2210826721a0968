#include "cvrp/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cvrp/tsp.hpp"

namespace cvrp {

double lb_instance(const Instance& inst) {
  auto wf = [&](int a, int b) { return inst.w(a, b); };
  Tree t = mst(inst.all_vertex_ids(), wf);
  return std::max((2.0 / inst.k) * inst.delta(), t.weight);
}

namespace {

long long split_l(int k) {
  auto l = static_cast<long long>(
      std::ceil((std::sqrt(2.0 * k - 1.0) - 1.0) / 2.0 - 1e-12));
  return std::max<long long>(1, l);
}

}  // namespace

RatioReport ratio_split_tradeoff(double alpha, int k) {
  if (alpha < 1.0 || alpha > 1.5)
    throw BoundsError("alpha must lie in [1, 3/2]");
  if (k < 3) throw BoundsError("k must be at least 3");
  RatioReport r;
  r.variant = "split";
  r.k = k;
  r.alpha = alpha;
  if (alpha <= 7.0 / 6.0) {
    r.branch = "case1";
    r.value = alpha + 1 - alpha / k - (alpha - 0.5) / k;
  } else if (k <= 5) {
    r.branch = "case2";
    r.value = (13.0 * k - 11.0) / (6.0 * k);
  } else {
    r.branch = "case3";
    r.value = alpha + 1 - alpha / k - 4 * (alpha - 1) / k;
  }
  return r;
}

RatioReport ratio_split_final(int k) {
  if (k < 3) throw BoundsError("k must be at least 3");
  RatioReport r;
  r.variant = "split";
  r.k = k;
  const long long l = split_l(k);
  r.l = static_cast<double>(l);
  r.branch = "final";
  r.value = 2.5 - (2.0 * l * l + k + l - 1.0) / (2.0 * k * l);
  if (!(r.value < 2.5 - std::sqrt(2.0 / k)))
    throw BoundsError("final split ratio failed its strict upper bound");
  return r;
}

RatioReport ratio_unsplit_tradeoff(double alpha, int k) {
  if (alpha < 1.0 || alpha > 1.5)
    throw BoundsError("alpha must lie in [1, 3/2]");
  if (k < 3) throw BoundsError("k must be at least 3");
  RatioReport r;
  r.variant = "unsplit";
  r.k = k;
  r.alpha = alpha;
  const double half = static_cast<double>(k / 2);
  if (k <= 5) {
    r.branch = "case1";
    r.value = (2 * half + 1) / (half + 1) + std::log(k / (half + 1));
  } else if (k == 6 && alpha >= 7.0 / 6.0) {
    r.branch = "case2";
    r.value = 15.0 / 8.0 + std::log(4.0 / 3.0);
  } else if (k == 7 && alpha >= 17.0 / 12.0) {
    r.branch = "case3";
    r.value = 33.0 / 16.0 + std::log(4.0 / 3.0);
  } else {
    r.branch = "case4";
    r.value = ((alpha + 1) * half + 1) / (half + 1) +
              std::log((k - 4 * (alpha - 1)) / (half + 1));
  }
  return r;
}

namespace {

double rho_odd(int k, double l) {
  return 2.5 + std::log(2.0) + std::log((k + 1 - l) / (k + 1)) -
         (k - 1 + 6 * l) / (2.0 * (k + 1) * l);
}

double rho_even(int k, double l) {
  return 2.5 + std::log(2.0) + std::log((k + 1 - l) / (k + 2)) -
         (k + 6 * l) / (2.0 * (k + 2) * l);
}

}  // namespace

RatioReport ratio_unsplit_final(int k) {
  if (k < 3) throw BoundsError("k must be at least 3");
  if (k < 7) {
    RatioReport r = ratio_unsplit_tradeoff(1.5, k);
    r.branch = "fallback-" + r.branch;
    return r;
  }
  RatioReport r;
  r.variant = "unsplit";
  r.k = k;
  const double kk = k;
  if (k % 2 == 1) {
    r.l_o = (std::sqrt((kk - 1) * (kk - 1) + 8 * (kk - 1) * (kk + 1) * (kk + 1)) -
             (kk - 1)) /
            (4 * (kk + 1));
    double lo = std::max(1.0, std::floor(r.l_o));
    double hi = std::ceil(r.l_o);
    double v_lo = rho_odd(k, lo);
    double v_hi = rho_odd(k, hi);
    r.branch = "odd";
    r.value = std::max(v_lo, v_hi);
    r.l = v_hi >= v_lo ? hi : lo;
  } else {
    r.l_e = (std::sqrt(kk * kk + 8 * kk * (kk + 1) * (kk + 2)) - kk) /
            (4 * (kk + 2));
    double lo = std::max(1.0, std::floor(r.l_e));
    double hi = std::ceil(r.l_e);
    double v_lo = rho_even(k, lo);
    double v_hi = rho_even(k, hi);
    r.branch = "even";
    r.value = std::max(v_lo, v_hi);
    r.l = v_hi >= v_lo ? hi : lo;
  }
  return r;
}

double ratio_unsplit5_special() {
  // Root of (5/3)(x-1) + ln((3+2x)/3) on (0, 1).
  auto f = [](double x) {
    return (5.0 / 3.0) * (x - 1) + std::log((3 + 2 * x) / 3.0);
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  double x0 = 0.5 * (lo + hi);
  return (11 - 6 * x0) / 3.0;
}

LpClosedForm lp_closed_form(int k) {
  if (k < 3) throw BoundsError("k must be at least 3");
  LpClosedForm out;
  out.l = split_l(k);
  out.value = (2.0 * out.l * out.l + 2.0 * out.l + k - 1.0) / (2.0 * k * out.l);
  return out;
}

std::vector<TableRow> table_report(const std::string& variant, int k_lo,
                                   int k_hi, double alpha) {
  if (k_lo < 3 || k_hi < k_lo || k_hi > 100000000)
    throw BoundsError("k range must lie within 3..1e8");
  std::vector<TableRow> rows;
  for (int k = k_lo; k <= k_hi; ++k) {
    TableRow row;
    row.k = k;
    if (variant == "split") {
      if (k == 3 || k == 4) row.special = 1.5;
      row.tradeoff = ratio_split_tradeoff(alpha, k).value;
      row.final_ratio = ratio_split_final(k).value;
    } else if (variant == "unsplit") {
      if (k == 3) row.special = 1.5;
      if (k == 4) row.special = 1.75;
      if (k == 5) row.special = ratio_unsplit5_special();
      row.tradeoff = ratio_unsplit_tradeoff(alpha, k).value;
      row.final_ratio = ratio_unsplit_final(k).value;
    } else {
      throw BoundsError("variant must be 'split' or 'unsplit'");
    }
    rows.push_back(row);
  }
  return rows;
}

std::string render_table_text(const std::string& variant,
                              const std::vector<TableRow>& rows) {
  std::ostringstream out;
  const char* special_hdr = variant == "split" ? "special(3,4)" : "special(3,4,5)";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%8s %14s %12s %12s\n", "k", special_hdr,
                "tradeoff", "final");
  out << buf;
  for (const TableRow& r : rows) {
    if (r.special) {
      std::snprintf(buf, sizeof(buf), "%8d %14.5f %12.5f %12.5f\n", r.k,
                    *r.special, r.tradeoff, r.final_ratio);
    } else {
      std::snprintf(buf, sizeof(buf), "%8d %14s %12.5f %12.5f\n", r.k, "-",
                    r.tradeoff, r.final_ratio);
    }
    out << buf;
  }
  return out.str();
}

}  // namespace cvrp
