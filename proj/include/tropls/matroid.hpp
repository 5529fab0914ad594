#pragma once

#include "tropls/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tropls {

// Subset of a ground set {0, ..., n-1}; bit i stands for element i.
using ElementSet = std::uint32_t;
inline constexpr std::size_t kMaxGround = 12;

inline int set_size(ElementSet s) { return __builtin_popcount(s); }
inline bool contains(ElementSet big, ElementSet small) { return (big & small) == small; }
inline ElementSet full_set(std::size_t n) { return n >= 32 ? ~0u : (1u << n) - 1; }
ElementSet make_set(std::initializer_list<int> elems);
std::vector<int> elements(ElementSet s);
std::string set_to_string(ElementSet s);

class Matroid {
 public:
  // Throws InputError naming a violating pair when exchange fails.
  static Matroid from_bases(std::size_t n, std::vector<ElementSet> bases);
  static Matroid from_nonspanning_circuits(std::size_t rank, std::size_t n, const std::vector<ElementSet>& circuits);
  // Rank 3 from its lines; pairs not covered by a listed line are lines implicitly.
  static Matroid from_rank2_flats(std::size_t n, const std::vector<ElementSet>& lines);
  static Matroid uniform(std::size_t rank, std::size_t n);
  static Matroid boolean(std::size_t n) { return uniform(n, n); }

  std::size_t size() const { return n_; }
  int rank() const { return rank_; }
  int rank(ElementSet s) const { return ranks_[s & full_set(n_)]; }
  ElementSet ground() const { return full_set(n_); }
  ElementSet closure(ElementSet s) const;
  bool is_flat(ElementSet s) const { return closure(s) == s; }
  bool is_basis(ElementSet s) const { return set_size(s) == rank_ && rank(s) == rank_; }

  const std::vector<ElementSet>& bases() const { return bases_; }
  // All flats, ordered by rank then by bit pattern.
  const std::vector<ElementSet>& flats() const { return flats_; }
  std::vector<ElementSet> flats(int k) const;
  std::vector<ElementSet> hyperplanes() const { return flats(rank_ - 1); }
  std::vector<ElementSet> cocircuits() const;
  std::vector<ElementSet> circuits() const;
  ElementSet loops() const { return closure(0); }
  bool is_loopless() const { return loops() == 0; }
  bool is_simple() const;

  friend bool operator==(const Matroid& a, const Matroid& b) { return a.n_ == b.n_ && a.bases_ == b.bases_; }

 private:
  Matroid(std::size_t n, std::vector<ElementSet> bases);

  std::size_t n_ = 0;
  int rank_ = 0;
  std::vector<ElementSet> bases_;
  std::vector<std::uint8_t> ranks_;
  std::vector<ElementSet> flats_;
};

// Builds the matroid whose flats are exactly the given sets, or explains why none exists.
struct FlatValidation {
  std::optional<Matroid> matroid;
  std::string defect;
};
FlatValidation from_flats(std::size_t n, std::vector<ElementSet> flats);

bool is_quotient(const Matroid& quotient, const Matroid& m);

// Restriction to the elements of keep, relabeled in increasing order.
Matroid submatroid(const Matroid& m, ElementSet keep);

struct Simplification {
  Matroid matroid;
  std::vector<int> element_map;  // -1 for loops
};
Simplification simplify(const Matroid& m);

// image[i] is the element of b matched with element i of a.
std::optional<std::vector<int>> matroid_iso(const Matroid& a, const Matroid& b);
// Some keep-set of m whose restriction is isomorphic to target.
std::optional<ElementSet> find_isomorphic_restriction(const Matroid& m, const Matroid& target);

// Rank-3 adjoints. The ground set of an adjoint indexes m.hyperplanes() in order.
bool is_adjoint(const Matroid& w, const Matroid& m);
Matroid free_adjoint(const Matroid& m);

// Rank-dropping quotients whose flats include every required set.
std::vector<Matroid> elementary_quotients(const Matroid& m, const std::vector<ElementSet>& required = {});
std::vector<Matroid> quotients_of_rank(const Matroid& m, int rank, const std::vector<ElementSet>& required = {});
std::vector<Matroid> common_quotients(const Matroid& a, const Matroid& b, int rank,
                                      const std::vector<ElementSet>& required = {});

Matroid fano();
Matroid non_fano();
Matroid vamos();
Matroid vamos_relaxed();
// All loopless matroids on n elements up to isomorphism (n <= 5 keeps this instant).
std::vector<Matroid> loopless_matroids(std::size_t n);

// A tropical linear space given by generating vectors; infinity is the tropical zero.
using TropVector = std::vector<ExtRational>;

class ValuatedMatroid {
 public:
  ValuatedMatroid(std::size_t n, std::vector<TropVector> generators);
  // Spanned by indicator vectors of cocircuits: 0 on the cocircuit, infinity elsewhere.
  static ValuatedMatroid trop(const Matroid& m);
  static ValuatedMatroid free_module(std::size_t n);

  std::size_t size() const { return n_; }
  const std::vector<TropVector>& generators() const { return gens_; }
  // Matroid of supports: its covectors are the supports of members.
  const Matroid& underlying() const { return underlying_; }

 private:
  std::size_t n_;
  std::vector<TropVector> gens_;
  Matroid underlying_;
};

TropVector trop_combination(const std::vector<TropVector>& gens, const std::vector<ExtRational>& coeffs);

// Coefficients realizing w as a tropical combination, or nothing.
std::optional<std::vector<ExtRational>> span_membership(const TropVector& w, const std::vector<TropVector>& gens);
inline std::optional<std::vector<ExtRational>> span_membership(const TropVector& w, const ValuatedMatroid& v) {
  return span_membership(w, v.generators());
}
bool trop_membership(const TropVector& w, const Matroid& m);

// Matroid whose flats are the supports of w' - w over members w' >= w.
Matroid initial_matroid(const ValuatedMatroid& v, const TropVector& w);

}  // namespace tropls
