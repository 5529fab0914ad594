#pragma once

#include "tropls/pl.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace tropls {

// Enumeration cap shared by rank searches; TROPLS_MAX_CANDIDATES overrides the default 10^6.
long max_candidates();
inline constexpr long kMaxDegree = 12;

// The combinatorial graph on the 1/N lattice points; every edge has length 1/N.
class LatticeModel {
 public:
  LatticeModel(GraphPtr g, const mpz_class& n);

  const GraphPtr& graph() const { return graph_; }
  const mpz_class& denominator() const { return n_; }
  std::size_t size() const { return points_.size(); }
  const Point& point(std::size_t i) const { return points_.at(i); }
  bool contains(const Point& p) const { return index_.count(p) > 0; }
  std::size_t index_of(const Point& p) const;
  // Neighbours with multiplicity; self-loops are dropped since they never move chips.
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adj_.at(i); }

  std::vector<long> chips(const Divisor& d) const;
  Divisor divisor(const std::vector<long>& chips) const;
  // Function whose divisor records the given firing counts, normalized to minimum 0.
  PLFunction potential(const std::vector<long>& fires) const;

 private:
  GraphPtr graph_;
  mpz_class n_;
  std::vector<Point> points_;
  std::map<Point, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adj_;
};

// Smallest N making the graph lengths and the divisor lattice-compatible.
mpz_class natural_denominator(const MetricGraph& g, const Divisor& d);
// Base point used for equivalence tests: the vertex with the smallest name.
Point base_point(const MetricGraph& g);

// Reduces in place; returns the firing counts. Works on raw lattice vectors.
std::vector<long> reduce_chips(const LatticeModel& m, std::vector<long>& chips, std::size_t q);
bool is_reduced_chips(const LatticeModel& m, const std::vector<long>& chips, std::size_t q);

struct Reduction {
  Divisor divisor;
  PLFunction witness;  // divisor = input + div(witness)
};

Reduction reduce(GraphPtr g, const Divisor& d, const Point& q);
bool is_v_reduced(GraphPtr g, const Divisor& d, const Point& q);

struct RankResult {
  long rank = -1;
  mpz_class denominator;  // lattice the answer is certified on
};

RankResult rank(GraphPtr g, const Divisor& d, std::optional<mpz_class> n = std::nullopt);

// Returns f with d2 = d1 + div(f).
std::optional<PLFunction> is_equiv(GraphPtr g, const Divisor& d1, const Divisor& d2);
Rational d_infty(GraphPtr g, const Divisor& d1, const Divisor& d2);

}  // namespace tropls
