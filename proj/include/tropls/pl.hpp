#pragma once

#include "tropls/graph.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace tropls {

using GraphPtr = std::shared_ptr<const MetricGraph>;

GraphPtr share(MetricGraph g);

struct Knot {
  Rational offset;
  Rational value;
};

struct ClosedSegment {
  std::size_t edge = 0;
  Rational lo, hi;  // lo < hi
};

// Closed subset made of points and closed edge segments.
struct ClosedSet {
  std::vector<Point> points;
  std::vector<ClosedSegment> segments;
  bool contains(const MetricGraph& g, const Point& p) const;
};

// Continuous, integer-slope piecewise-linear function. Each edge stores its knots
// from offset 0 to the edge length; collinear interior knots are dropped.
class PLFunction {
 public:
  PLFunction(GraphPtr g, std::vector<std::vector<Knot>> knots);

  static PLFunction constant(GraphPtr g, const Rational& c = 0);
  // Knots are the values at the given offsets of each edge (which must contain every breakpoint).
  static PLFunction sample(GraphPtr g, const std::vector<std::vector<Rational>>& offsets,
                           const std::function<Rational(std::size_t, const Rational&)>& value);
  // Linear on every edge of the refinement.
  static PLFunction from_refinement(GraphPtr g, const Refinement& r, const std::vector<Rational>& vertex_values);

  const MetricGraph& graph() const { return *graph_; }
  const GraphPtr& graph_ptr() const { return graph_; }
  const std::vector<Knot>& knots(std::size_t e) const { return knots_.at(e); }

  Rational eval(const Point& p) const;
  Rational eval_on_edge(std::size_t e, const Rational& offset) const;
  long outgoing_slope(const Tangent& z) const;
  long ord(const Point& p) const;
  Divisor div() const;
  // Vertices plus interior knots.
  std::vector<Point> breakpoints() const;
  bool is_constant() const;

  Rational min_value() const;
  Rational max_value() const;
  Rational max_on(const ClosedSegment& s) const;
  ClosedSet minimizer() const;
  PLFunction normalized() const;

  PLFunction operator+(const PLFunction& o) const;
  PLFunction operator-(const PLFunction& o) const;
  PLFunction operator+(const Rational& c) const;
  PLFunction operator-() const;
  friend bool operator==(const PLFunction& a, const PLFunction& b);

 private:
  GraphPtr graph_;
  std::vector<std::vector<Knot>> knots_;
};

bool same_graph(const PLFunction& a, const PLFunction& b);

PLFunction pointwise_min(const PLFunction& a, const PLFunction& b);

struct TropCombination {
  std::vector<PLFunction> generators;
  std::vector<ExtRational> coefficients;
};

PLFunction trop_min(const TropCombination& c);
PLFunction trop_min(const std::vector<PLFunction>& fns, const std::vector<Rational>& coefficients);

bool in_R_of(const PLFunction& f, const Divisor& d);

// Components of the complement of supp(D) not contained in the minimizer.
std::vector<std::size_t> f_flat(const PLFunction& f, const Divisor& d);

// Distance to a closed set.
PLFunction distance_function(GraphPtr g, const ClosedSet& s);

// Vertices and interior knot offsets of a family, plus every pairwise crossing point.
std::vector<std::vector<Rational>> order_refinement(const std::vector<PLFunction>& fns);

}  // namespace tropls
