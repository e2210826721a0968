#ifndef CVRP_PACKING_HPP
#define CVRP_PACKING_HPP

#include <stdexcept>
#include <vector>

#include "cvrp/instance.hpp"
#include "cvrp/matching.hpp"
#include "cvrp/tsp.hpp"

namespace cvrp {

enum class PackFlavor { plain, mod_k, mod_2, demand_mod_k };

// Vertex-disjoint cycles jointly covering their vertex set. Cycles of length
// two stand for a doubled edge (closed walk u-v-u); they only appear in
// demand-weighted packings obtained by shortcutting.
struct CyclePacking {
  std::vector<std::vector<int>> cycles;
  PackFlavor flavor = PackFlavor::plain;
  double weight = 0;
};

struct TreePacking {
  std::vector<Tree> trees;
  double weight = 0;
};

struct PackingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact minimum-weight 2-factor of the complete graph over `vertices`,
// computed through the per-vertex degree-2 gadget reduction to minimum
// perfect matching.
CyclePacking min_cycle_packing(const std::vector<int>& vertices,
                               const WeightFn& weight_fn);

// Goemans-Williamson primal-dual forest for f(S) = [|S| mod k != 0], with
// reverse-delete pruning. Every output tree has a vertex count divisible by
// k; the total weight is at most the minimum mod-k cycle packing weight.
TreePacking mod_k_tree_packing(const std::vector<int>& vertices,
                               const WeightFn& weight_fn, int k);

// Tree packing + minimum matching on its odd-degree vertices + per-component
// Euler shortcut. Guarantees w <= w(trees) + w(matching).
CyclePacking mod_k_cycle_packing(const std::vector<int>& vertices,
                                 const WeightFn& weight_fn, int k);

// Union of a minimum perfect matching and the minimum perfect matching
// avoiding it: even cycles of length >= 4 covering the vertex set.
CyclePacking mod2_cycle_packing(const std::vector<int>& vertices,
                                const WeightFn& weight_fn);

// 4-CVRP tour construction: contracts the matching edges into super-vertices,
// prices the four orientations of each super-vertex pair as depot tours, and
// expands a minimum augmented-weight perfect matching into 4-customer tours.
Itinerary augmented_matching_tours(const Instance& inst,
                                   const Matching& m_star);

// Exact minimum weight over partitions of the vertex set into plain cycles
// (length >= 3) and depot-closed paths (any length >= 1, priced with both
// legs to the depot). Equals the minimum cycle packing after padding the
// instance with enough zero-distance depot copies to saturate an optimal
// itinerary, but stays polynomial in the real vertex count. Computed by an
// extended degree-2 gadget in which the depot has a free even degree.
struct SaturatedPacking {
  std::vector<std::vector<int>> cycles;
  std::vector<std::vector<int>> depot_paths;
  double weight = 0;  // cycles plus paths, both depot legs included
};

SaturatedPacking saturated_cycle_packing(const std::vector<int>& vertices,
                                         const WeightFn& weight_fn);

// Projects cycles over unit-expanded copies down to the original customers:
// colocated copies collapse, merged components are Euler-shortcut. Weight
// never increases. Used by the demand-weighted (unsplittable) packings.
CyclePacking shortcut_to_originals(const std::vector<std::vector<int>>& cycles,
                                   const std::vector<int>& origin,
                                   const WeightFn& original_weight,
                                   PackFlavor flavor);

}  // namespace cvrp

#endif
