#ifndef CVRP_MATCHING_HPP
#define CVRP_MATCHING_HPP

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cvrp {

using WeightFn = std::function<double(int, int)>;

struct Matching {
  std::vector<std::pair<int, int>> pairs;  // vertex-disjoint, first < second
  double weight = 0;
};

struct MatchingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sentinel weight used to price forbidden pairs out of the optimum. The
// post-check in min_matching_on_forbidden keeps the scheme sound.
inline constexpr double kForbiddenWeight = 1e15;

// Exact minimum-weight perfect matching on the complete graph over
// `vertices`. Below dp_threshold vertices a subset DP is used; above it the
// O(V^3) blossom algorithm on scaled integer weights. Throws MatchingError on
// an odd vertex count.
Matching min_perfect_matching(const std::vector<int>& vertices,
                              const WeightFn& weight_fn,
                              int dp_threshold = 16);

// Minimum perfect matching that uses none of the forbidden pairs. Throws
// MatchingError when no such matching exists.
Matching min_matching_on_forbidden(
    const std::vector<int>& vertices, const WeightFn& weight_fn,
    const std::vector<std::pair<int, int>>& forbidden, int dp_threshold = 16);

}  // namespace cvrp

#endif
