#pragma once

#include "tropls/linear_series.hpp"
#include "tropls/matroid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tropls {

struct BigMinimizerReport {
  bool big = false;
  std::vector<std::size_t> failing;  // generators whose minimizer holds no whole component
  // Multiplicity-free base divisor avoiding valence-1 points, which forces big minimizers.
  bool sufficient_criterion = false;
};

// Checking generators suffices: the minimizer of a combination is the union of the minimizers
// of the generators attaining the smallest coefficient.
BigMinimizerReport has_big_minimizers(const TropSubmodule& s);

struct LocalMatroidResult {
  std::vector<Component> components;  // the ground set
  std::vector<ElementSet> flats;      // generated collection, E included
  std::optional<Matroid> matroid;
  std::string defect;  // why the collection is not a flat lattice
  // For each hyperplane, a smallest generator set whose common value set produces it.
  std::vector<std::pair<ElementSet, std::vector<std::size_t>>> provenance;
  bool loopless = false;
  bool ok() const { return matroid.has_value(); }
};

LocalMatroidResult local_matroid(const TropSubmodule& s);

// Sets of components where the function is not minimal, as a bitmask over components.
ElementSet flat_of(const PLFunction& f, const Divisor& d);

struct StarReport {
  LocalMatroidResult local;
  std::vector<std::vector<Rational>> images;  // one evaluation direction per incident region
  bool images_in_bergman = false;
  bool hyperplanes_realized = false;
  std::size_t regions = 0;
};

// d0 must be nondegenerate; throws InputError otherwise.
StarReport star_matches_bergman(const TropSubmodule& s, const Divisor& d0);

// A tropical-module map from coordinates: w maps to min_j (w_j + images[j]). A missing image
// sends its coordinate to the tropical zero, which forgets that coordinate.
struct Parametrization {
  std::vector<std::optional<PLFunction>> images;
  PLFunction apply(const TropVector& w) const;
  TropSubmodule image(const ValuatedMatroid& v, const Divisor& base,
                      std::size_t generator_cap = kDefaultGeneratorCap) const;
  // Largest w with apply(w) = f among combinations of the given vectors, or nothing.
  std::optional<TropVector> lift(const PLFunction& f, const std::vector<TropVector>& vectors) const;
};

struct SectionReport {
  TropVector section;  // w = coordinatewise min of the hyperplane lifts
  std::optional<Matroid> initial;
  std::optional<Matroid> local;  // simplified
  std::optional<ElementSet> embedding;
  std::string defect;
  bool ok() const { return embedding.has_value(); }
};

// phi must be a member whose divisor D + div(phi) is nondegenerate.
SectionReport section_and_submatroid(const ValuatedMatroid& v, const Parametrization& pi, const Divisor& base,
                                     const PLFunction& phi);

}  // namespace tropls
