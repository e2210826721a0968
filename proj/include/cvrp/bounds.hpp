#ifndef CVRP_BOUNDS_HPP
#define CVRP_BOUNDS_HPP

#include <optional>
#include <string>
#include <vector>

#include "cvrp/instance.hpp"

namespace cvrp {

struct RatioReport {
  std::string variant;  // "split" or "unsplit"
  int k = 0;
  double alpha = 1.5;
  double value = 0;
  std::string branch;      // which formula case applied
  double l = 0;            // integer trade-off parameter, when applicable
  double l_o = 0, l_e = 0; // real roots of the odd/even final-ratio cases
};

struct BoundsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Computable lower bound on the optimum: max{(2/k)Δ, MST over V ∪ {v0}}.
double lb_instance(const Instance& inst);

// Three-way trade-off ratio for splittable/unit k-CVRP with an
// alpha-approximate Hamiltonian cycle, 1 <= alpha <= 3/2.
RatioReport ratio_split_tradeoff(double alpha, int k);

// Final splittable ratio 5/2 - (2l^2+k+l-1)/(2kl), l = ceil((sqrt(2k-1)-1)/2).
RatioReport ratio_split_final(int k);

// Two-cycle LP-UITP trade-off ratio for unsplittable k-CVRP.
RatioReport ratio_unsplit_tradeoff(double alpha, int k);

// Final unsplittable ratio max{rho(ceil l), rho(floor l)} per parity; k < 7
// falls back to the alpha = 3/2 trade-off.
RatioReport ratio_unsplit_final(int k);

// Ratio of the unsplittable 5-CVRP special: (11 - 6*x0)/3 with x0 the root
// of (5/3)(x-1) + ln((3+2x)/3) = 0.
double ratio_unsplit5_special();

// Optimum of the prefix-average LP with c1 = (k+3)/(2k), c_i = 2i/k:
// l = ceil((sqrt(2k-1)-1)/2), value = (2l^2+2l+k-1)/(2kl).
struct LpClosedForm {
  long long l = 0;
  double value = 0;
};
LpClosedForm lp_closed_form(int k);

struct TableRow {
  int k = 0;
  std::optional<double> special;  // small-k special algorithms
  double tradeoff = 0;
  double final_ratio = 0;
};

std::vector<TableRow> table_report(const std::string& variant, int k_lo,
                                   int k_hi, double alpha);

std::string render_table_text(const std::string& variant,
                              const std::vector<TableRow>& rows);

}  // namespace cvrp

#endif
