#pragma once

#include "tropls/rational.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tropls {

struct EdgeSpec {
  std::string id;
  std::string tail;
  std::string head;
  Rational length;
};

struct Edge {
  std::string id;
  std::size_t tail = 0;
  std::size_t head = 0;
  Rational length;
  bool is_loop() const { return tail == head; }
};

// A half-edge leaving a vertex. from_tail means the germ runs toward increasing offset.
struct HalfEdge {
  std::size_t edge = 0;
  bool from_tail = true;
};

class MetricGraph {
 public:
  MetricGraph(std::vector<std::string> vertices, const std::vector<EdgeSpec>& edges);

  std::size_t vertex_count() const { return names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::string& vertex_name(std::size_t v) const { return names_.at(v); }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& vertex_names() const { return names_; }
  std::optional<std::size_t> find_vertex(std::string_view name) const;
  std::optional<std::size_t> find_edge(std::string_view id) const;
  const std::vector<HalfEdge>& half_edges(std::size_t v) const { return adj_.at(v); }

  int genus() const;
  Rational total_length() const;

  friend bool operator==(const MetricGraph& a, const MetricGraph& b);

 private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<HalfEdge>> adj_;
};

class Point {
 public:
  static Point vertex(std::size_t v);
  // Offsets 0 and the edge length collapse to the endpoint vertex.
  static Point on_edge(const MetricGraph& g, std::size_t e, const Rational& offset);

  bool is_vertex() const { return is_vertex_; }
  std::size_t vertex_index() const;
  std::size_t edge_index() const;
  const Rational& offset() const { return offset_; }

  friend bool operator==(const Point& a, const Point& b) {
    return a.is_vertex_ == b.is_vertex_ && a.index_ == b.index_ && a.offset_ == b.offset_;
  }
  friend std::strong_ordering operator<=>(const Point& a, const Point& b);

 private:
  bool is_vertex_ = true;
  std::size_t index_ = 0;
  Rational offset_;
};

std::string describe(const MetricGraph& g, const Point& p);

struct Tangent {
  Point base;
  std::size_t edge = 0;
  bool forward = true;  // toward increasing offset along edge
};

std::vector<Tangent> tangents(const MetricGraph& g, const Point& p);
int valence(const MetricGraph& g, const Point& p);
// Point at distance t along the tangent (t must stay within the edge).
Point advance(const MetricGraph& g, const Tangent& z, const Rational& t);
// Offsets of the point as seen from edge e: empty if the point is off the edge, two for the base of a loop.
std::vector<Rational> offsets_on_edge(const MetricGraph& g, const Point& p, std::size_t e);

class Divisor {
 public:
  Divisor() = default;
  void add(const Point& p, long mult);
  long at(const Point& p) const;
  long degree() const;
  bool is_effective() const;
  bool empty() const { return chips_.empty(); }
  std::vector<Point> support() const;
  const std::map<Point, long>& chips() const { return chips_; }

  Divisor operator+(const Divisor& o) const;
  Divisor operator-(const Divisor& o) const;
  Divisor scaled(long k) const;
  friend bool operator==(const Divisor& a, const Divisor& b) = default;

 private:
  std::map<Point, long> chips_;
};

Divisor point_divisor(const Point& p, long mult = 1);
std::string describe(const MetricGraph& g, const Divisor& d);
// Sum of multiplicities at valence-1 points.
long valence_one_degree(const MetricGraph& g, const Divisor& d);

Divisor canonical_divisor(const MetricGraph& g);

struct Refinement {
  MetricGraph graph;
  // For every vertex of the refined graph, its location on the original graph.
  std::vector<Point> origin;
  // For every refined edge: original edge and the offsets it spans (lo < hi).
  struct Span {
    std::size_t edge;
    Rational lo, hi;
  };
  std::vector<Span> spans;
  std::size_t vertex_of(const Point& p) const;
};

Refinement refine(const MetricGraph& g, const std::vector<Point>& pts);

// Open interval (lo, hi) of an edge.
struct OpenSegment {
  std::size_t edge = 0;
  Rational lo, hi;
};

struct Component {
  std::vector<OpenSegment> segments;
  std::vector<std::size_t> vertices;
  bool contains(const Point& p) const;
  Point sample(const MetricGraph& g) const;
};

std::vector<Component> components_minus_support(const MetricGraph& g, const Divisor& d);

// Lattice utilities: points with offsets in (1/N)Z.
mpz_class default_denominator(const MetricGraph& g);
mpz_class denominator_of(const Point& p);
mpz_class denominator_of(const Divisor& d);
bool is_lattice_compatible(const MetricGraph& g, const mpz_class& n);
std::vector<Point> lattice_points(const MetricGraph& g, const mpz_class& n);

}  // namespace tropls
