#ifndef CVRP_ORACLE_HPP
#define CVRP_ORACLE_HPP

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cvrp/instance.hpp"
#include "cvrp/matching.hpp"

namespace cvrp {

// Exhaustive exact solvers for desk-scale instances. They exist to
// ground-truth the approximation algorithms and the lower bounds; nothing in
// the solver path depends on them.

struct OracleResult {
  double optimum = 0;
  Itinerary itinerary;
  std::uint64_t states_expanded = 0;
};

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact optimum by minimum-weight exact cover over customer subsets, each
// subset ordered optimally. Splittable instances are solved on their
// unit-demand expansion and lifted back. The size cap applies after
// expansion; CVRP_ORACLE_NMAX overrides it when set.
OracleResult exact_cvrp(const Instance& inst, int max_expanded = 0);

int oracle_nmax_default();

// Exhaustive minimum over partitions of the vertex set into cycles whose
// length is divisible by k.
double exact_mod_k_cycle_packing(const std::vector<int>& vertices,
                                 const WeightFn& weight_fn, int k);

// Exhaustive minimum-weight 2-factor (all cycle lengths >= 3).
double exact_2factor(const std::vector<int>& vertices,
                     const WeightFn& weight_fn);

// Exhaustive minimum over partitions into 4-cycles.
double exact_4cycle_packing(const std::vector<int>& vertices,
                            const WeightFn& weight_fn);

}  // namespace cvrp

#endif
