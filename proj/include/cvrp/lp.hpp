#ifndef CVRP_LP_HPP
#define CVRP_LP_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cvrp/instance.hpp"

namespace cvrp {

struct TourInfo {
  std::vector<int> customers;  // sorted ids
  std::vector<int> order;      // exact optimal visiting order
  double weight = 0;
};

// All customer subsets with demand sum <= k, in lexicographic DFS order,
// each ordered exactly.
struct TourSet {
  std::vector<TourInfo> tours;
};

struct LpSolution {
  std::vector<double> x;  // per tour, in enumeration order
  double objective = 0;
};

struct LpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Throws LpError once more than `limit` feasible subsets exist; truncating
// silently would invalidate the rounding bound.
TourSet enumerate_tours(const Instance& inst, int k, size_t limit = 2000000);

// Fractional tour cover: min sum w_T x_T s.t. every customer is covered at
// least once. Dense two-phase simplex with Bland's rule.
LpSolution solve_cover_lp(const TourSet& tours, int n);

// Rounding constant: for k >= 7 the value ln((k+1-l)/(floor(k/2)+1)) with l
// the integer optimizing the final-ratio expression; below that the
// ln(k/(floor(k/2)+1)) fallback. x_star > 0 overrides l = 1/x_star.
double gamma_select(int k, double x_star = 0);

}  // namespace cvrp

#endif
