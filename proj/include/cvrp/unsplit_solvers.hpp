#ifndef CVRP_UNSPLIT_SOLVERS_HPP
#define CVRP_UNSPLIT_SOLVERS_HPP

#include <cstdint>
#include <optional>

#include "cvrp/instance.hpp"
#include "cvrp/packing.hpp"
#include "cvrp/split_solvers.hpp"
#include "cvrp/tsp.hpp"

namespace cvrp {

// A customer is big when its demand exceeds floor(k/2).
bool is_big(const Instance& inst, int customer);

enum class LocalRule { single, no_big, one_big };

// Tours for one demand-weighted cycle, per the local-structure rules:
//   single  — total demand <= k, one tour;
//   no_big  — total demand > k >= 4, no big customer,
//             ceil((|C|-1)/(ceil(k/2)+1)) tours;
//   one_big — total demand > k >= 4, exactly one big customer of demand
//             floor(k/2)+1, ceil(|C|/(ceil(k/2)+1)) tours.
// Each satisfies its rule's 2g*Delta_C + (1-g)*w(C) weight bound.
std::vector<Tour> build_local_tours(const Instance& inst,
                                    const std::vector<int>& cycle,
                                    LocalRule rule);

// Refined AG-UITP: trivial tours for big customers, AG-ITP with capacity
// ceil(k/2)+1 on the small customers (shortcut from h), then conflict
// repair. Bound: 2/(floor(k/2)+1)*Delta + (1-1/(floor(k/2)+1))*w(h).
SolveResult refined_ag_uitp(const Instance& inst, const HamCycle& h);

// EX-ITP with capacity ceil(k/2)+1 per cycle plus conflict repair; all
// packing customers must be small. Serves exactly the packing's customers.
SolveResult ex_uitp(const Instance& inst, const CyclePacking& packing);

// Unsplittable specials.
SolveResult unsplit3(const Instance& inst);
SolveResult unsplit4(const Instance& inst);
SolveResult unsplit5(const Instance& inst);

// LP over tours + randomized rounding (probability min{1, gamma*x_T}, one
// uniform draw per tour in enumeration order), residual served by
// refined_ag_uitp on h shortcut to the residual. gamma = 0 reproduces
// refined_ag_uitp exactly.
SolveResult lp_uitp(const Instance& inst, const HamCycle& h, double gamma,
                    std::uint64_t seed);

// Best of the LP-UITP runs (gamma from gamma_select plus {0, ln 2}
// safeguards) and the k-specific special when k is 3, 4 or 5.
SolveResult unsplit_portfolio(const Instance& inst, std::uint64_t seed = 1,
                              const std::optional<HamCycle>& alpha_cycle = {});

}  // namespace cvrp

#endif
