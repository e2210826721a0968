#include "cvrp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cvrp {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::splittable: return "splittable";
    case Variant::unit: return "unit";
    case Variant::unsplittable: return "unsplittable";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "splittable") return Variant::splittable;
  if (s == "unit") return Variant::unit;
  if (s == "unsplittable") return Variant::unsplittable;
  throw InstanceError("unknown variant: " + s);
}

std::string to_string(MetricKind m) {
  return m == MetricKind::euclidean_unit_square ? "euclidean"
                                                : "random-closure";
}

MetricKind metric_kind_from_string(const std::string& s) {
  if (s == "euclidean" || s == "euclidean-unit-square")
    return MetricKind::euclidean_unit_square;
  if (s == "random-closure" || s == "random-shortest-path-closure")
    return MetricKind::random_shortest_path_closure;
  throw InstanceError("unknown metric kind: " + s);
}

long long Tour::total_delivered() const {
  long long s = 0;
  for (long long d : deliver) s += d;
  return s;
}

double Instance::tol() const {
  double mx = 0;
  for (double x : weights) mx = std::max(mx, x);
  return 1e-9 * std::max(1.0, mx);
}

double Instance::delta() const {
  double s = 0;
  for (int i = 1; i <= n; ++i) s += static_cast<double>(demand_of(i)) * w(0, i);
  return s;
}

double Instance::tour_weight(const Tour& t) const {
  if (t.customers.empty()) return 0.0;
  double s = w(0, t.customers.front());
  for (size_t i = 0; i + 1 < t.customers.size(); ++i)
    s += w(t.customers[i], t.customers[i + 1]);
  s += w(t.customers.back(), 0);
  return s;
}

std::vector<int> Instance::customer_ids() const {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  return v;
}

std::vector<int> Instance::all_vertex_ids() const {
  std::vector<int> v(n + 1);
  for (int i = 0; i <= n; ++i) v[i] = i;
  return v;
}

double Itinerary::total_weight(const Instance& inst) const {
  double s = 0;
  for (const Tour& t : tours) s += inst.tour_weight(t);
  return s;
}

void validate(const Instance& inst, bool check_triangle) {
  const int n = inst.n;
  if (n < 0) throw InstanceError("negative customer count");
  if (inst.k < 1) throw InstanceError("capacity must be >= 1");
  if (static_cast<int>(inst.demands.size()) != n)
    throw InstanceError("demand count does not match n");
  if (inst.weights.size() != static_cast<size_t>(n + 1) * (n + 1))
    throw InstanceError("weight table size does not match n");

  const double tol = inst.tol();
  for (int i = 0; i <= n; ++i) {
    if (std::abs(inst.w(i, i)) > tol)
      throw InstanceError("nonzero diagonal entry");
    for (int j = 0; j <= n; ++j) {
      if (inst.w(i, j) < -tol) throw InstanceError("negative weight");
      if (std::abs(inst.w(i, j) - inst.w(j, i)) > tol)
        throw InstanceError("non-symmetric weight matrix");
    }
  }
  for (int i = 1; i <= n; ++i) {
    long long d = inst.demand_of(i);
    if (d < 1) throw InstanceError("demand must be a positive integer");
    switch (inst.variant) {
      case Variant::unit:
        if (d != 1) throw InstanceError("unit variant requires all demands = 1");
        break;
      case Variant::unsplittable:
        if (d >= inst.k) throw InstanceError("demand >= capacity");
        break;
      case Variant::splittable:
        // The (n-1)(k-1) cap is vacuous for n = 1, where trivial tours are
        // the only option anyway.
        if (n >= 2 && d > static_cast<long long>(n - 1) * (inst.k - 1))
          throw InstanceError("splittable demand exceeds (n-1)(k-1)");
        break;
    }
  }
  if (check_triangle) {
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        for (int t = 0; t <= n; ++t)
          if (inst.w(i, j) > inst.w(i, t) + inst.w(t, j) + tol)
            throw InstanceError("triangle inequality violated");
  }
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (tokenize(line).empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

double parse_number(const std::string& tok) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw InstanceError("not a number: " + tok);
  }
  if (pos != tok.size()) throw InstanceError("not a number: " + tok);
  return v;
}

}  // namespace

Instance parse_instance(const std::string& text) {
  auto lines = content_lines(text);
  if (lines.size() < 3) throw InstanceError("truncated instance file");

  auto header = tokenize(lines[0]);
  if (header.size() != 7 || header[0] != "CVRP" || header[1] != "k" ||
      header[3] != "variant" || header[5] != "n")
    throw InstanceError("malformed header line");
  Instance inst;
  inst.k = static_cast<int>(parse_number(header[2]));
  inst.variant = variant_from_string(header[4]);
  inst.n = static_cast<int>(parse_number(header[6]));
  if (inst.n < 0) throw InstanceError("malformed header line");

  auto dem = tokenize(lines[1]);
  if (dem.empty() || dem[0] != "demands" ||
      static_cast<int>(dem.size()) != inst.n + 1)
    throw InstanceError("malformed demands line");
  inst.demands.resize(inst.n);
  for (int i = 0; i < inst.n; ++i)
    inst.demands[i] = static_cast<long long>(parse_number(dem[i + 1]));

  auto mode = tokenize(lines[2]);
  if (mode.size() != 1) throw InstanceError("expected 'matrix' or 'coords'");
  const int rows = inst.n + 1;
  inst.weights.assign(static_cast<size_t>(rows) * rows, 0.0);

  if (mode[0] == "matrix") {
    if (static_cast<int>(lines.size()) != 3 + rows)
      throw InstanceError("matrix row count does not match n");
    for (int i = 0; i < rows; ++i) {
      auto row = tokenize(lines[3 + i]);
      if (static_cast<int>(row.size()) != rows)
        throw InstanceError("matrix column count does not match n");
      for (int j = 0; j < rows; ++j)
        inst.weights[static_cast<size_t>(i) * rows + j] = parse_number(row[j]);
    }
  } else if (mode[0] == "coords") {
    if (static_cast<int>(lines.size()) != 3 + rows)
      throw InstanceError("coordinate line count does not match n");
    std::vector<std::pair<double, double>> pts(rows);
    for (int i = 0; i < rows; ++i) {
      auto row = tokenize(lines[3 + i]);
      if (row.size() != 2) throw InstanceError("coordinate line needs 'x y'");
      pts[i] = {parse_number(row[0]), parse_number(row[1])};
    }
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j)
        inst.weights[static_cast<size_t>(i) * rows + j] =
            std::hypot(pts[i].first - pts[j].first,
                       pts[i].second - pts[j].second);
  } else {
    throw InstanceError("expected 'matrix' or 'coords'");
  }

  validate(inst);
  return inst;
}

std::string serialize(const Instance& inst) {
  std::ostringstream out;
  out << "CVRP k " << inst.k << " variant " << to_string(inst.variant) << " n "
      << inst.n << "\n";
  out << "demands";
  for (long long d : inst.demands) out << ' ' << d;
  out << "\nmatrix\n";
  char buf[40];
  for (int i = 0; i <= inst.n; ++i) {
    for (int j = 0; j <= inst.n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", inst.w(i, j));
      out << (j ? " " : "") << buf;
    }
    out << "\n";
  }
  return out.str();
}

void check_feasible(const Instance& inst, const Itinerary& it) {
  std::vector<long long> served(inst.n + 1, 0);
  std::vector<int> tours_visiting(inst.n + 1, 0);
  for (const Tour& t : it.tours) {
    if (t.customers.size() != t.deliver.size())
      throw InstanceError("tour deliver list does not match customers");
    std::vector<int> seen;
    long long load = 0;
    for (size_t i = 0; i < t.customers.size(); ++i) {
      int c = t.customers[i];
      if (c < 1 || c > inst.n) throw InstanceError("tour visits unknown customer");
      if (std::find(seen.begin(), seen.end(), c) != seen.end())
        throw InstanceError("customer repeated within one tour");
      seen.push_back(c);
      if (t.deliver[i] < 1) throw InstanceError("non-positive delivery amount");
      load += t.deliver[i];
      served[c] += t.deliver[i];
      tours_visiting[c] += 1;
    }
    if (load > inst.k) throw InstanceError("tour exceeds capacity");
  }
  for (int c = 1; c <= inst.n; ++c) {
    if (served[c] != inst.demand_of(c))
      throw InstanceError("demand not met exactly");
    if (inst.variant != Variant::splittable && tours_visiting[c] != 1)
      throw InstanceError("customer must appear in exactly one tour");
  }
}

UnitExpansion expand_unit(const Instance& inst) {
  if (inst.variant != Variant::splittable)
    throw InstanceError("expand_unit expects a splittable instance");
  UnitExpansion exp;
  for (int c = 1; c <= inst.n; ++c)
    for (long long j = 0; j < inst.demand_of(c); ++j) exp.origin.push_back(c);

  const int m = static_cast<int>(exp.origin.size());
  Instance& e = exp.expanded;
  e.n = m;
  e.k = inst.k;
  e.variant = Variant::unit;
  e.demands.assign(m, 1);
  e.weights.assign(static_cast<size_t>(m + 1) * (m + 1), 0.0);
  auto orig = [&](int v) { return v == 0 ? 0 : exp.origin[v - 1]; };
  for (int i = 0; i <= m; ++i)
    for (int j = 0; j <= m; ++j)
      e.weights[static_cast<size_t>(i) * (m + 1) + j] =
          orig(i) == orig(j) ? 0.0 : inst.w(orig(i), orig(j));
  return exp;
}

Itinerary lift_back(const Instance& original, const UnitExpansion& exp,
                    const Itinerary& expanded_solution) {
  double before = expanded_solution.total_weight(exp.expanded);
  Itinerary out;
  for (const Tour& t : expanded_solution.tours) {
    Tour lifted;
    std::map<int, size_t> pos;
    for (int copy : t.customers) {
      int c = exp.origin[copy - 1];
      auto it = pos.find(c);
      if (it == pos.end()) {
        pos[c] = lifted.customers.size();
        lifted.customers.push_back(c);
        lifted.deliver.push_back(1);
      } else {
        lifted.deliver[it->second] += 1;
      }
    }
    if (!lifted.customers.empty()) out.tours.push_back(std::move(lifted));
  }
  check_feasible(original, out);
  if (out.total_weight(original) > before + original.tol())
    throw InstanceError("lifting increased the itinerary weight");
  return out;
}

Instance pad_depot_customers(const Instance& inst, int m) {
  if (inst.variant != Variant::unit)
    throw InstanceError("pad_depot_customers expects a unit instance");
  if (m < 0) throw InstanceError("negative padding count");
  if (m == 0) return inst;
  Instance out;
  out.n = inst.n + m;
  out.k = inst.k;
  out.variant = Variant::unit;
  out.demands.assign(out.n, 1);
  const int rows = out.n + 1;
  out.weights.assign(static_cast<size_t>(rows) * rows, 0.0);
  auto proj = [&](int v) { return v <= inst.n ? v : 0; };  // pads sit at the depot
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j)
      out.weights[static_cast<size_t>(i) * rows + j] = inst.w(proj(i), proj(j));
  return out;
}

Itinerary strip_padding(const Instance& padded, int keep_n, const Itinerary& it) {
  Itinerary out;
  double before = it.total_weight(padded);
  for (const Tour& t : it.tours) {
    Tour kept;
    for (size_t i = 0; i < t.customers.size(); ++i) {
      if (t.customers[i] <= keep_n) {
        kept.customers.push_back(t.customers[i]);
        kept.deliver.push_back(t.deliver[i]);
      }
    }
    if (!kept.customers.empty()) out.tours.push_back(std::move(kept));
  }
  if (out.total_weight(padded) > before + padded.tol())
    throw InstanceError("stripping padding increased weight");
  return out;
}

Instance gen_random(int n, int k, Variant variant, MetricKind metric,
                    std::uint64_t seed, long long max_demand) {
  if (n < 1) throw InstanceError("gen_random needs n >= 1");
  if (k < 1) throw InstanceError("gen_random needs k >= 1");
  std::mt19937_64 rng(seed);
  Instance inst;
  inst.n = n;
  inst.k = k;
  inst.variant = variant;

  long long hi = 1;
  switch (variant) {
    case Variant::unit: hi = 1; break;
    case Variant::unsplittable: hi = std::max<long long>(1, k - 1); break;
    case Variant::splittable:
      hi = std::max<long long>(1, static_cast<long long>(n - 1) * (k - 1));
      break;
  }
  if (max_demand > 0) hi = std::min(hi, max_demand);
  std::uniform_int_distribution<long long> dd(1, hi);
  inst.demands.resize(n);
  for (int i = 0; i < n; ++i) inst.demands[i] = dd(rng);

  const int rows = n + 1;
  inst.weights.assign(static_cast<size_t>(rows) * rows, 0.0);
  std::uniform_real_distribution<double> uu(0.0, 1.0);
  if (metric == MetricKind::euclidean_unit_square) {
    std::vector<std::pair<double, double>> pts(rows);
    for (int i = 0; i < rows; ++i) {
      double x = uu(rng);
      double y = uu(rng);
      pts[i] = {x, y};
    }
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j)
        inst.weights[static_cast<size_t>(i) * rows + j] =
            std::hypot(pts[i].first - pts[j].first,
                       pts[i].second - pts[j].second);
  } else {
    for (int i = 0; i < rows; ++i)
      for (int j = i + 1; j < rows; ++j) {
        double v = 0.1 + uu(rng);
        inst.weights[static_cast<size_t>(i) * rows + j] = v;
        inst.weights[static_cast<size_t>(j) * rows + i] = v;
      }
    // Floyd-Warshall closure makes the table an exact semi-metric.
    for (int t = 0; t < rows; ++t)
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j) {
          double via = inst.w(i, t) + inst.w(t, j);
          if (via < inst.w(i, j))
            inst.weights[static_cast<size_t>(i) * rows + j] = via;
        }
  }
  validate(inst);
  return inst;
}

std::uint64_t digest(const Instance& inst) {
  std::string s = serialize(inst);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace cvrp
