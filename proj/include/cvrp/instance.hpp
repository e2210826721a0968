#ifndef CVRP_INSTANCE_HPP
#define CVRP_INSTANCE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvrp {

enum class Variant { splittable, unit, unsplittable };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

// A tour starts and ends at the depot (vertex 0, implicit). Customers are
// listed in visiting order; deliver[i] is the integer amount dropped at
// customers[i].
struct Tour {
  std::vector<int> customers;
  std::vector<long long> deliver;

  long long total_delivered() const;
};

struct Instance;

struct Itinerary {
  std::vector<Tour> tours;

  double total_weight(const Instance& inst) const;
};

// A k-CVRP instance: depot = vertex 0, customers = 1..n, symmetric weight
// table satisfying the triangle inequality up to tol().
struct Instance {
  int n = 0;
  int k = 1;
  Variant variant = Variant::unit;
  std::vector<long long> demands;        // size n, demand of customer i+1
  std::vector<double> weights;           // (n+1)*(n+1), row-major
  std::vector<std::string> labels;       // optional, size n+1 when present

  double w(int i, int j) const { return weights[static_cast<size_t>(i) * (n + 1) + j]; }
  long long demand_of(int v) const { return demands[v - 1]; }

  // Absolute comparison tolerance: 1e-9 times the largest table entry.
  double tol() const;

  // Demand-weighted star weight to the depot: sum_i d_i * w(0, i).
  double delta() const;

  double tour_weight(const Tour& t) const;

  std::vector<int> customer_ids() const;  // 1..n
  std::vector<int> all_vertex_ids() const;  // 0..n
};

// Thrown on malformed files and instances violating the variant assumptions.
struct InstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Validates symmetry, zero diagonal, nonnegativity, demand assumptions and
// (unless check_triangle is false) the full O(n^3) triangle inequality.
void validate(const Instance& inst, bool check_triangle = true);

Instance parse_instance(const std::string& text);
std::string serialize(const Instance& inst);

// Checks that an itinerary is feasible for the instance: per-tour capacity,
// positive integer deliveries, demands met exactly, and one tour per customer
// for the unit/unsplittable variants. Throws InstanceError otherwise.
void check_feasible(const Instance& inst, const Itinerary& it);

// Splittable -> unit-demand expansion: customer i becomes d_i colocated unit
// customers. Keeps the copy -> original map for lifting solutions back.
struct UnitExpansion {
  Instance expanded;
  std::vector<int> origin;  // origin[copy_id - 1] = original customer id
};

UnitExpansion expand_unit(const Instance& inst);

// Merges colocated copies within each tour of an itinerary for the expanded
// instance back into original-customer visits. Weight never increases.
Itinerary lift_back(const Instance& original, const UnitExpansion& exp,
                    const Itinerary& expanded_solution);

// Appends m unit-demand customers at the depot's position. Optima are
// unchanged: the new customers are free to serve.
Instance pad_depot_customers(const Instance& inst, int m);

// Removes customers with id > keep_n from the tours (they were padding) by
// shortcutting. Tour weights never increase.
Itinerary strip_padding(const Instance& padded, int keep_n, const Itinerary& it);

enum class MetricKind { euclidean_unit_square, random_shortest_path_closure };

std::string to_string(MetricKind m);
MetricKind metric_kind_from_string(const std::string& s);

// Deterministic random instance. Demands are drawn uniformly from the
// variant's legal range, clamped to max_demand when that is smaller.
Instance gen_random(int n, int k, Variant variant, MetricKind metric,
                    std::uint64_t seed, long long max_demand = 0);

// FNV-1a digest of the serialized instance, used to key run reports.
std::uint64_t digest(const Instance& inst);

}  // namespace cvrp

#endif
