#ifndef CVRP_TSP_HPP
#define CVRP_TSP_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "cvrp/matching.hpp"

namespace cvrp {

struct Tree {
  std::vector<std::pair<int, int>> edges;
  double weight = 0;
};

// A closed walk visiting each vertex of its set exactly once; `order` lists
// the vertices cyclically and `weight` includes the closing edge. For one or
// two vertices this degenerates to the doubled star walk.
struct HamCycle {
  std::vector<int> order;
  double weight = 0;
};

struct TspError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Tree mst(const std::vector<int>& vertices, const WeightFn& weight_fn);

// Splits an even-degree edge multiset into one simple cycle per connected
// component: Euler walk from each component's lowest vertex id, keeping the
// first occurrence of every vertex. By the triangle inequality the output
// weight never exceeds the multigraph weight.
std::vector<std::vector<int>> euler_shortcut(
    const std::vector<std::pair<int, int>>& multigraph_edges);

// Christofides-Serdyukov: MST + minimum matching on odd-degree tree vertices
// + Euler shortcut. Asserts w(result) <= w(mst) + w(matching).
HamCycle christofides(const std::vector<int>& vertices,
                      const WeightFn& weight_fn);

// Held-Karp subset DP, exact, limited to 14 vertices.
HamCycle tsp_exact(const std::vector<int>& vertices, const WeightFn& weight_fn,
                   int max_vertices = 14);

double cycle_weight(const std::vector<int>& cycle, const WeightFn& weight_fn);

}  // namespace cvrp

#endif
