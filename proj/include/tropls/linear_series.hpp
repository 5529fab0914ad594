#pragma once

#include "tropls/chip_firing.hpp"
#include "tropls/pl.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tropls {

inline constexpr std::size_t kDefaultGeneratorCap = 12;

// A finitely generated tropical submodule of R(D). Generators are normalized to minimum 0
// and deduplicated; the module is immutable once built.
class TropSubmodule {
 public:
  TropSubmodule(Divisor base, std::vector<PLFunction> generators, std::size_t generator_cap = kDefaultGeneratorCap);

  const GraphPtr& graph() const { return graph_; }
  const Divisor& base() const { return base_; }
  const std::vector<PLFunction>& generators() const { return gens_; }
  std::size_t size() const { return gens_.size(); }
  std::size_t generator_cap() const { return cap_; }

  TropSubmodule with(const PLFunction& extra) const;
  // Same module seen from D + div(phi): generators become g - phi.
  TropSubmodule translated(const PLFunction& phi) const;
  // Drops generators lying in the span of the others.
  TropSubmodule pruned() const;

 private:
  GraphPtr graph_;
  Divisor base_;
  std::vector<PLFunction> gens_;
  std::size_t cap_;
};

// Coefficients a with phi = min_i(g_i + a_i), or nothing.
std::optional<std::vector<Rational>> membership(const PLFunction& phi, const TropSubmodule& s);
PLFunction combination(const TropSubmodule& s, const std::vector<std::optional<Rational>>& coeffs);

// Tropical rank of the generator evaluation matrix. With a known upper bound the search
// stops as soon as that many independent generators are found.
std::size_t r_ind(const TropSubmodule& s, std::optional<std::size_t> upper_bound = std::nullopt);

// Smallest lattice denominator carrying the graph, the base divisor and every generator knot.
mpz_class lattice_denominator(const TropSubmodule& s);

// Some phi in the module with D - D' + div(phi) >= 0.
std::optional<PLFunction> residual_witness(const TropSubmodule& s, const Divisor& dprime);

struct BNRank {
  long rank = -1;
  mpz_class denominator;
  long rank_at_double = -1;  // -1 when not recomputed
  bool stable() const { return rank_at_double < 0 || rank_at_double == rank; }
};

BNRank r_bn(const TropSubmodule& s, std::optional<mpz_class> n = std::nullopt, bool check_double = true);

struct TlsReport {
  std::size_t r_ind = 0;
  BNRank r_bn;
  bool is_tls = false;
};

TlsReport is_tls(const TropSubmodule& s, std::optional<mpz_class> n = std::nullopt,
                 std::optional<std::size_t> r_ind_bound = std::nullopt);

// Combinatorial type of a divisor on the unrefined graph: vertex chips plus, per edge,
// the multiplicities of interior chips in offset order.
std::string divisor_type(const MetricGraph& g, const Divisor& d);

// Open region of coefficient space on which the generator attaining the minimum is locally
// constant along every segment of the generators' common refinement.
struct Region {
  std::vector<std::vector<int>> winners;  // per refinement segment, left to right
  std::vector<std::size_t> active;        // generators that win somewhere
  std::vector<std::optional<Rational>> interior;
  // Closure point over the fibre; only filled by incident_regions.
  std::vector<std::optional<Rational>> touch;
  int dim = 0;  // dimension of the image in |D|
  Divisor representative;
  std::string type;  // divisor_type of the representative
  std::vector<std::size_t> neighbors;
};

struct Cell {
  std::string type;
  int dim = 0;
  bool maximal = false;
  Divisor representative;
  std::vector<std::size_t> regions;
};

struct CellComplex {
  std::vector<Region> regions;
  std::vector<Cell> cells;
  int dimension() const;
  std::vector<int> maximal_dimensions() const;
};

CellComplex cells(const TropSubmodule& s);

// Regions whose closure meets the fibre over D + div(phi0). phi0 must lie in the module.
std::vector<Region> incident_regions(const TropSubmodule& s, const PLFunction& phi0);
int local_dimension(const TropSubmodule& s, const PLFunction& phi0);

struct NondegeneracyReport {
  bool nondegenerate = false;
  std::size_t support_size = 0;
  long valence_one = 0;
  std::vector<Divisor> offending;  // nearby divisors breaking the local extremum
  std::size_t incident = 0;
};

// d0 must be D + div(phi) for a member phi; throws InputError otherwise.
NondegeneracyReport nondegenerate(const Divisor& d0, const TropSubmodule& s);
// Member phi with D + div(phi) = d0.
std::optional<PLFunction> member_with_divisor(const TropSubmodule& s, const Divisor& d0);

// Pieces of the module meeting D' inside each open region, as affine conditions.
struct ResidualPiece {
  std::size_t region = 0;
  std::vector<std::pair<std::size_t, Rational>> fixed;  // (moving chip index, position) pairs
  int dim = 0;
  Divisor sample;
};

struct ResidualConstraint {
  Divisor dprime;
  std::vector<ResidualPiece> pieces;
  bool empty() const { return pieces.empty(); }
  int dimension() const;
};

ResidualConstraint residual(const TropSubmodule& s, const CellComplex& complex, const Divisor& dprime);

// Distinct outgoing slopes of the generators along a tangent.
std::vector<long> slopes_along(const TropSubmodule& s, const Tangent& z);
// Every tangent of the order refinement of the generators.
std::vector<Tangent> refinement_tangents(const TropSubmodule& s);

// Restriction to the closed subgraph made of the given edges. The base divisor gains the
// smallest boundary chips keeping every restricted generator in R(base).
TropSubmodule restrict_to(const TropSubmodule& s, const std::vector<std::string>& edge_ids);

}  // namespace tropls
