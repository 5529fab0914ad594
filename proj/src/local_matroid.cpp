#include "tropls/local_matroid.hpp"

#include <algorithm>
#include <map>

namespace tropls {

ElementSet flat_of(const PLFunction& f, const Divisor& d) {
  ElementSet out = 0;
  for (std::size_t i : f_flat(f, d)) out |= 1u << i;
  return out;
}

BigMinimizerReport has_big_minimizers(const TropSubmodule& s) {
  const MetricGraph& g = *s.graph();
  BigMinimizerReport rep;
  ElementSet all = full_set(components_minus_support(g, s.base()).size());
  for (std::size_t i = 0; i < s.size(); ++i)
    if (flat_of(s.generators()[i], s.base()) == all) rep.failing.push_back(i);
  rep.big = rep.failing.empty();
  rep.sufficient_criterion = true;
  for (const auto& [p, k] : s.base().chips())
    if (k != 1 || valence(g, p) == 1) rep.sufficient_criterion = false;
  return rep;
}

LocalMatroidResult local_matroid(const TropSubmodule& s) {
  LocalMatroidResult out;
  out.components = components_minus_support(*s.graph(), s.base());
  const std::size_t n = out.components.size();
  if (n > kMaxGround)
    throw CapExceeded(std::to_string(n) + " components exceed the ground-set cap of " + std::to_string(kMaxGround));

  std::map<ElementSet, std::vector<std::size_t>> prov;
  auto offer = [&](ElementSet f, std::vector<std::size_t> from) {
    auto it = prov.find(f);
    if (it == prov.end()) {
      prov.emplace(f, std::move(from));
      return true;
    }
    if (from.size() < it->second.size()) it->second = std::move(from);
    return false;
  };
  for (std::size_t i = 0; i < s.size(); ++i) offer(flat_of(s.generators()[i], s.base()), {i});
  // Intersections come from combinations where several generators share the smallest coefficient.
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<std::pair<ElementSet, std::vector<std::size_t>>> snapshot(prov.begin(), prov.end());
    for (std::size_t a = 0; a < snapshot.size(); ++a)
      for (std::size_t b = a + 1; b < snapshot.size(); ++b) {
        std::vector<std::size_t> from = snapshot[a].second;
        for (std::size_t i : snapshot[b].second)
          if (std::find(from.begin(), from.end(), i) == from.end()) from.push_back(i);
        std::sort(from.begin(), from.end());
        grew |= offer(snapshot[a].first & snapshot[b].first, std::move(from));
      }
  }
  offer(full_set(n), {});
  for (const auto& [f, from] : prov) out.flats.push_back(f);

  auto v = from_flats(n, out.flats);
  out.matroid = std::move(v.matroid);
  out.defect = std::move(v.defect);
  if (out.matroid)
    for (ElementSet h : out.matroid->hyperplanes()) out.provenance.emplace_back(h, prov.at(h));
  out.loopless = membership(PLFunction::constant(s.graph()), s).has_value();
  return out;
}

namespace {

PLFunction min_of(const TropSubmodule& s, const std::vector<std::size_t>& which) {
  std::vector<std::optional<Rational>> a(s.size());
  for (std::size_t i : which) a[i] = Rational(0);
  return combination(s, a).normalized();
}

std::vector<Rational> evaluate(const PLFunction& f, const std::vector<Point>& pts) {
  std::vector<Rational> v;
  for (const auto& p : pts) v.push_back(f.eval(p));
  return v;
}

}  // namespace

StarReport star_matches_bergman(const TropSubmodule& s, const Divisor& d0) {
  if (!nondegenerate(d0, s).nondegenerate) throw InputError("divisor is degenerate in |Σ|");
  PLFunction phi0 = *member_with_divisor(s, d0);
  TropSubmodule at_d0 = s.translated(phi0);
  StarReport rep;
  rep.local = local_matroid(at_d0);
  if (!rep.local.ok()) return rep;
  const Matroid& m = *rep.local.matroid;
  std::vector<Point> samples;
  for (const auto& c : rep.local.components) samples.push_back(c.sample(*s.graph()));

  // Near the fibre, a region contributes the ray from the touching point toward its interior.
  rep.images_in_bergman = true;
  for (const auto& r : incident_regions(s, phi0)) {
    ++rep.regions;
    auto direction_at = [&](const Rational& t) {
      std::vector<std::optional<Rational>> a(s.size());
      for (std::size_t i = 0; i < s.size(); ++i)
        if (r.touch[i]) a[i] = *r.touch[i] + t * (*r.interior[i] - *r.touch[i]);
      auto v = evaluate(combination(s, a) - phi0, samples);
      Rational lo = *std::min_element(v.begin(), v.end());
      for (auto& x : v) x = (x - lo) / t;
      return v;
    };
    std::optional<std::vector<Rational>> dir;
    Rational t = 1;
    auto prev = direction_at(t);
    for (int k = 0; k < 40 && !dir; ++k) {
      t /= 2;
      auto next = direction_at(t);
      if (next == prev) dir = next;
      prev = std::move(next);
    }
    if (!dir) {
      rep.images_in_bergman = false;
      continue;
    }
    TropVector w(dir->begin(), dir->end());
    if (!trop_membership(w, m)) rep.images_in_bergman = false;
    rep.images.push_back(std::move(*dir));
  }

  // Each hyperplane indicator is the image of min(phi_H, eps).
  rep.hyperplanes_realized = true;
  for (const auto& [h, from] : rep.local.provenance) {
    PLFunction phi_h = min_of(at_d0, from);
    auto vals = evaluate(phi_h, samples);
    std::optional<Rational> eps;
    for (std::size_t j = 0; j < samples.size(); ++j)
      if (h >> j & 1u) eps = eps ? std::min(*eps, vals[j]) : vals[j];
    if (!eps || sgn(*eps) <= 0) {
      rep.hyperplanes_realized = false;
      continue;
    }
    *eps /= 2;
    PLFunction capped = pointwise_min(phi_h, PLFunction::constant(s.graph(), *eps));
    auto img = evaluate(capped, samples);
    bool indicator = true;
    for (std::size_t j = 0; j < samples.size(); ++j)
      if (img[j] != ((h >> j & 1u) ? *eps : Rational(0))) indicator = false;
    if (!indicator || !membership(capped, at_d0)) rep.hyperplanes_realized = false;
  }
  return rep;
}

PLFunction Parametrization::apply(const TropVector& w) const {
  if (w.size() != images.size()) throw InputError("vector length does not match the parametrization");
  TropCombination c;
  for (std::size_t j = 0; j < w.size(); ++j)
    if (images[j]) {
      c.generators.push_back(*images[j]);
      c.coefficients.push_back(w[j]);
    }
  if (c.generators.empty()) throw InputError("parametrization without images");
  return trop_min(c);
}

TropSubmodule Parametrization::image(const ValuatedMatroid& v, const Divisor& base, std::size_t generator_cap) const {
  std::vector<PLFunction> gens;
  for (const auto& g : v.generators()) gens.push_back(apply(g));
  return TropSubmodule(base, std::move(gens), generator_cap);
}

std::optional<TropVector> Parametrization::lift(const PLFunction& f, const std::vector<TropVector>& vectors) const {
  std::vector<PLFunction> imgs;
  std::vector<Rational> shift;
  for (const auto& v : vectors) {
    imgs.push_back(apply(v));
    shift.push_back((f - imgs.back()).max_value());
  }
  if (trop_min(imgs, shift) != f) return std::nullopt;
  TropVector out(images.size());
  for (std::size_t k = 0; k < vectors.size(); ++k)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::min(out[j], vectors[k][j] + ExtRational(shift[k]));
  return out;
}

SectionReport section_and_submatroid(const ValuatedMatroid& v, const Parametrization& pi, const Divisor& base,
                                     const PLFunction& phi) {
  SectionReport rep;
  TropSubmodule s = pi.image(v, base, std::max(kDefaultGeneratorCap, v.generators().size()));
  if (!membership(phi, s)) throw InputError("function is not in the image");
  Divisor d = base + phi.div();
  if (!nondegenerate(d, s).nondegenerate) throw InputError("divisor of the function is degenerate");
  TropSubmodule at_phi = s.translated(phi);
  auto loc = local_matroid(at_phi);
  if (!loc.ok()) {
    rep.defect = "local flats: " + loc.defect;
    return rep;
  }
  rep.local = simplify(*loc.matroid).matroid;

  std::optional<TropVector> w;
  for (const auto& [h, from] : loc.provenance) {
    auto lifted = pi.lift(phi + min_of(at_phi, from), v.generators());
    if (!lifted) {
      rep.defect = "no lift for hyperplane " + set_to_string(h);
      return rep;
    }
    if (!w) {
      w = *lifted;
    } else {
      for (std::size_t j = 0; j < w->size(); ++j) (*w)[j] = std::min((*w)[j], (*lifted)[j]);
    }
  }
  if (!w) {
    rep.defect = "local matroid has no hyperplanes";
    return rep;
  }
  rep.section = *w;
  rep.initial = initial_matroid(v, *w);
  if (rep.initial->rank() != rep.local->rank()) {
    rep.defect = "initial and local ranks differ";
    return rep;
  }
  rep.embedding = find_isomorphic_restriction(*rep.initial, *rep.local);
  if (!rep.embedding) rep.defect = "no restriction of the initial matroid matches";
  return rep;
}

}  // namespace tropls
