#ifndef CVRP_SPLIT_SOLVERS_HPP
#define CVRP_SPLIT_SOLVERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "cvrp/instance.hpp"
#include "cvrp/packing.hpp"
#include "cvrp/tsp.hpp"

namespace cvrp {

// Outcome of one solver run. certified_bound is the algorithm's weight
// guarantee evaluated on this run's inputs; weight <= certified_bound holds on
// every run (infinity when the algorithm carries no runtime certificate).
struct SolveResult {
  std::string algorithm;
  Itinerary itinerary;
  double weight = 0;
  double certified_bound = 0;
  std::uint64_t inputs_digest = 0;
  // For trade-off solvers: (branch name, weight, certified bound) per branch.
  std::vector<std::tuple<std::string, double, double>> branches;
};

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterated tour partitioning on a Hamiltonian cycle through the depot: tries
// all k offsets, keeps the lightest. Bound: (2/k)Δ + (1-1/k)w(h).
SolveResult ag_itp(const Instance& inst, const HamCycle& h);

// ITP on a cycle that avoids the depot, serving exactly that cycle's
// customers: tries all rotations, ceil(|c|/k) tours each.
SolveResult hr_itp(const Instance& inst, const std::vector<int>& cycle);

// EX-ITP: AG-ITP on the depot cycle (if any), HR-ITP on every other cycle of
// the packing. Bound: 2gΔ + (1-g)w(packing), g = max ceil(|C|/k)/|C|.
SolveResult ex_itp(const Instance& inst, const CyclePacking& packing);

// Splittable/unit specials and trade-offs. Splittable inputs are
// unit-expanded, solved, and lifted back.
SolveResult split3(const Instance& inst);
SolveResult split4_mod2(const Instance& inst);
SolveResult split4_matching(const Instance& inst);

// Best of three: EX-ITP on a mod-k cycle packing, AG-ITP on the alpha cycle
// (H_CS when not injected), AG-ITP on H_CS.
SolveResult split_tradeoff(const Instance& inst,
                           const std::optional<HamCycle>& alpha_cycle = {});

// AG-ITP on H_CS.
SolveResult split_final(const Instance& inst);

// Minimum over split_tradeoff, split_final and the k-specific specials.
SolveResult portfolio_split(const Instance& inst,
                            const std::optional<HamCycle>& alpha_cycle = {});

// H_CS over the instance's full vertex set.
HamCycle christofides_cycle(const Instance& inst);

}  // namespace cvrp

#endif
