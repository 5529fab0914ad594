#include "tropls/matroid.hpp"

#include "tropls/chip_firing.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace tropls {

ElementSet make_set(std::initializer_list<int> elems) {
  ElementSet s = 0;
  for (int e : elems) s |= 1u << e;
  return s;
}

std::vector<int> elements(ElementSet s) {
  std::vector<int> out;
  for (int i = 0; s; ++i, s >>= 1)
    if (s & 1) out.push_back(i);
  return out;
}

std::string set_to_string(ElementSet s) {
  std::string out = "{";
  for (int e : elements(s)) {
    if (out.size() > 1) out += ",";
    out += std::to_string(e);
  }
  return out + "}";
}

namespace {

std::vector<ElementSet> subsets_of_size(std::size_t n, int k) {
  std::vector<ElementSet> out;
  for (ElementSet s = 0; s <= full_set(n); ++s)
    if (set_size(s) == k) out.push_back(s);
  return out;
}

// Returns the first violating (B1, B2, e) of the exchange axiom, if any.
std::optional<std::tuple<ElementSet, ElementSet, int>> exchange_violation(std::size_t n,
                                                                         const std::vector<ElementSet>& bases) {
  std::vector<char> is_basis(std::size_t(1) << n, 0);
  for (ElementSet b : bases) is_basis[b] = 1;
  for (ElementSet b1 : bases)
    for (ElementSet b2 : bases) {
      if (b1 == b2) continue;
      for (int e : elements(b1 & ~b2)) {
        bool found = false;
        for (int f : elements(b2 & ~b1))
          if (is_basis[(b1 & ~(1u << e)) | (1u << f)]) {
            found = true;
            break;
          }
        if (!found) return std::make_tuple(b1, b2, e);
      }
    }
  return std::nullopt;
}

void check_ground(std::size_t n) {
  if (n > kMaxGround) throw CapExceeded("matroids are limited to " + std::to_string(kMaxGround) + " elements");
}

std::vector<ElementSet> union_closure(const std::vector<ElementSet>& parts) {
  std::set<ElementSet> seen{0};
  for (ElementSet p : parts) {
    std::vector<ElementSet> fresh;
    for (ElementSet u : seen)
      if (!seen.count(u | p)) fresh.push_back(u | p);
    seen.insert(fresh.begin(), fresh.end());
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

Matroid::Matroid(std::size_t n, std::vector<ElementSet> bases) : n_(n), bases_(std::move(bases)) {
  std::sort(bases_.begin(), bases_.end());
  bases_.erase(std::unique(bases_.begin(), bases_.end()), bases_.end());
  rank_ = set_size(bases_.front());
  ranks_.assign(std::size_t(1) << n, 0);
  for (ElementSet s = 0; s <= full_set(n); ++s) {
    int best = 0;
    for (ElementSet b : bases_) {
      best = std::max(best, set_size(s & b));
      if (best == rank_) break;
    }
    ranks_[s] = static_cast<std::uint8_t>(best);
  }
  for (ElementSet s = 0; s <= full_set(n); ++s)
    if (closure(s) == s) flats_.push_back(s);
  std::stable_sort(flats_.begin(), flats_.end(),
                   [&](ElementSet a, ElementSet b) { return ranks_[a] < ranks_[b]; });
}

Matroid Matroid::from_bases(std::size_t n, std::vector<ElementSet> bases) {
  check_ground(n);
  if (bases.empty()) throw InputError("a matroid needs at least one basis");
  for (ElementSet b : bases) {
    if (!contains(full_set(n), b)) throw InputError("basis " + set_to_string(b) + " leaves the ground set");
    if (set_size(b) != set_size(bases.front()))
      throw InputError("bases " + set_to_string(bases.front()) + " and " + set_to_string(b) + " differ in size");
  }
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  if (auto bad = exchange_violation(n, bases)) {
    auto [b1, b2, e] = *bad;
    throw InputError("basis exchange fails for " + set_to_string(b1) + " and " + set_to_string(b2) +
                     " when removing " + std::to_string(e));
  }
  return Matroid(n, std::move(bases));
}

Matroid Matroid::from_nonspanning_circuits(std::size_t rank, std::size_t n, const std::vector<ElementSet>& circuits) {
  check_ground(n);
  for (ElementSet c : circuits) {
    if (!contains(full_set(n), c)) throw InputError("circuit " + set_to_string(c) + " leaves the ground set");
    if (static_cast<std::size_t>(set_size(c)) > rank)
      throw InputError("circuit " + set_to_string(c) + " is too large to be non-spanning");
    for (ElementSet d : circuits)
      if (c != d && contains(d, c)) throw InputError("circuits " + set_to_string(c) + " and " + set_to_string(d) + " are nested");
  }
  std::vector<ElementSet> bases;
  for (ElementSet s : subsets_of_size(n, static_cast<int>(rank)))
    if (std::none_of(circuits.begin(), circuits.end(), [&](ElementSet c) { return contains(s, c); })) bases.push_back(s);
  Matroid m = from_bases(n, std::move(bases));
  for (ElementSet c : circuits) {
    bool circuit = m.rank(c) == set_size(c) - 1;
    for (int e : elements(c)) circuit = circuit && m.rank(c & ~(1u << e)) == set_size(c) - 1;
    if (!circuit) throw InputError(set_to_string(c) + " is not a circuit of the resulting matroid");
  }
  return m;
}

Matroid Matroid::from_rank2_flats(std::size_t n, const std::vector<ElementSet>& lines) {
  check_ground(n);
  if (n < 3) throw InputError("a rank 3 matroid needs at least three elements");
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (set_size(lines[i]) < 2) throw InputError("line " + set_to_string(lines[i]) + " has fewer than two points");
    for (std::size_t j = i + 1; j < lines.size(); ++j)
      if (set_size(lines[i] & lines[j]) > 1)
        throw InputError("lines " + set_to_string(lines[i]) + " and " + set_to_string(lines[j]) + " share two points");
  }
  std::vector<ElementSet> bases;
  for (ElementSet s : subsets_of_size(n, 3))
    if (std::none_of(lines.begin(), lines.end(), [&](ElementSet l) { return contains(l, s); })) bases.push_back(s);
  if (bases.empty()) throw InputError("the lines leave no basis");
  return from_bases(n, std::move(bases));
}

Matroid Matroid::uniform(std::size_t rank, std::size_t n) {
  check_ground(n);
  if (rank > n) throw InputError("uniform matroid rank exceeds ground size");
  return Matroid(n, subsets_of_size(n, static_cast<int>(rank)));
}

ElementSet Matroid::closure(ElementSet s) const {
  s &= ground();
  int r = rank(s);
  ElementSet out = s;
  for (std::size_t e = 0; e < n_; ++e)
    if (!(s >> e & 1) && rank(s | 1u << e) == r) out |= 1u << e;
  return out;
}

std::vector<ElementSet> Matroid::flats(int k) const {
  std::vector<ElementSet> out;
  for (ElementSet f : flats_)
    if (rank(f) == k) out.push_back(f);
  return out;
}

std::vector<ElementSet> Matroid::cocircuits() const {
  std::vector<ElementSet> out;
  for (ElementSet h : hyperplanes()) out.push_back(ground() & ~h);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ElementSet> Matroid::circuits() const {
  std::vector<ElementSet> out;
  for (ElementSet s = 1; s <= ground(); ++s) {
    if (rank(s) != set_size(s) - 1) continue;
    bool minimal = true;
    for (int e : elements(s)) minimal = minimal && rank(s & ~(1u << e)) == set_size(s) - 1;
    if (minimal) out.push_back(s);
  }
  return out;
}

bool Matroid::is_simple() const {
  for (std::size_t e = 0; e < n_; ++e) {
    if (rank(1u << e) != 1) return false;
    for (std::size_t f = e + 1; f < n_; ++f)
      if (rank(1u << e | 1u << f) != 2) return false;
  }
  return true;
}

FlatValidation from_flats(std::size_t n, std::vector<ElementSet> flats) {
  check_ground(n);
  FlatValidation out;
  const ElementSet all = full_set(n);
  std::sort(flats.begin(), flats.end());
  flats.erase(std::unique(flats.begin(), flats.end()), flats.end());
  if (!std::binary_search(flats.begin(), flats.end(), all)) {
    out.defect = "the ground set is missing";
    return out;
  }
  for (ElementSet f : flats)
    if (!contains(all, f)) {
      out.defect = "flat " + set_to_string(f) + " leaves the ground set";
      return out;
    }
  for (std::size_t i = 0; i < flats.size(); ++i)
    for (std::size_t j = i + 1; j < flats.size(); ++j)
      if (!std::binary_search(flats.begin(), flats.end(), flats[i] & flats[j])) {
        out.defect = "intersection of " + set_to_string(flats[i]) + " and " + set_to_string(flats[j]) + " is missing";
        return out;
      }
  // The covers of every proper flat must partition its complement.
  for (ElementSet f : flats) {
    if (f == all) continue;
    ElementSet seen = 0;
    for (ElementSet g : flats) {
      if (g == f || !contains(g, f)) continue;
      bool cover = std::none_of(flats.begin(), flats.end(), [&](ElementSet h) {
        return h != f && h != g && contains(h, f) && contains(g, h);
      });
      if (!cover) continue;
      if (seen & g & ~f) {
        out.defect = "covers of " + set_to_string(f) + " overlap outside it";
        return out;
      }
      seen |= g & ~f;
    }
    if ((seen | f) != all) {
      out.defect = "covers of " + set_to_string(f) + " miss " + set_to_string(all & ~(seen | f));
      return out;
    }
  }
  // Height of each flat gives the rank; closure is the smallest flat containing a set.
  std::vector<ElementSet> by_size = flats;
  std::stable_sort(by_size.begin(), by_size.end(), [](ElementSet a, ElementSet b) { return set_size(a) < set_size(b); });
  std::map<ElementSet, int> height;
  for (ElementSet f : by_size) {
    int h = 0;
    for (auto& [g, hg] : height)
      if (g != f && contains(f, g)) h = std::max(h, hg + 1);
    height[f] = h;
  }
  auto rank_of = [&](ElementSet s) {
    ElementSet cl = all;
    for (ElementSet f : flats)
      if (contains(f, s)) cl &= f;
    return height.at(cl);
  };
  int r = height.at(all);
  std::vector<ElementSet> bases;
  for (ElementSet s : subsets_of_size(n, r))
    if (rank_of(s) == r) bases.push_back(s);
  if (bases.empty()) {
    out.defect = "no set of size equal to the height spans";
    return out;
  }
  try {
    Matroid m = Matroid::from_bases(n, bases);
    std::vector<ElementSet> got = m.flats();
    std::sort(got.begin(), got.end());
    if (got != flats) {
      out.defect = "derived matroid has a different lattice of flats";
      return out;
    }
    out.matroid = std::move(m);
  } catch (const InputError& e) {
    out.defect = e.what();
  }
  return out;
}

bool is_quotient(const Matroid& quotient, const Matroid& m) {
  if (quotient.size() != m.size()) throw InputError("quotient test needs a common ground set");
  return std::all_of(quotient.flats().begin(), quotient.flats().end(), [&](ElementSet f) { return m.is_flat(f); });
}

namespace {

Matroid restrict_to(const Matroid& m, ElementSet keep) {
  std::vector<int> kept = elements(keep);
  int r = m.rank(keep);
  std::vector<ElementSet> bases;
  for (ElementSet s : subsets_of_size(kept.size(), r)) {
    ElementSet orig = 0;
    for (int i : elements(s)) orig |= 1u << kept[static_cast<std::size_t>(i)];
    if (m.rank(orig) == r) bases.push_back(s);
  }
  return Matroid::from_bases(kept.size(), std::move(bases));
}

}  // namespace

Matroid submatroid(const Matroid& m, ElementSet keep) {
  if (!contains(m.ground(), keep)) throw InputError("submatroid elements leave the ground set");
  if (m.rank(keep) != m.rank()) throw InputError("submatroid on " + set_to_string(keep) + " contains no basis");
  return restrict_to(m, keep);
}

Simplification simplify(const Matroid& m) {
  std::vector<int> rep(m.size(), -1);
  ElementSet keep = 0;
  for (std::size_t e = 0; e < m.size(); ++e) {
    if (m.rank(1u << e) == 0) continue;
    rep[e] = static_cast<int>(e);
    for (std::size_t f = 0; f < e; ++f)
      if (rep[f] >= 0 && m.rank(1u << e | 1u << f) == 1) {
        rep[e] = rep[f];
        break;
      }
    if (rep[e] == static_cast<int>(e)) keep |= 1u << e;
  }
  std::vector<int> index(m.size(), -1);
  int next = 0;
  for (int e : elements(keep)) index[static_cast<std::size_t>(e)] = next++;
  Simplification out{restrict_to(m, keep), {}};
  for (std::size_t e = 0; e < m.size(); ++e) out.element_map.push_back(rep[e] < 0 ? -1 : index[static_cast<std::size_t>(rep[e])]);
  return out;
}

namespace {

std::vector<std::vector<int>> element_signatures(const Matroid& m) {
  std::vector<std::vector<int>> sig(m.size(), std::vector<int>(static_cast<std::size_t>(m.rank()) + 2, 0));
  for (std::size_t e = 0; e < m.size(); ++e) {
    for (ElementSet b : m.bases())
      if (b >> e & 1) ++sig[e][0];
    for (ElementSet f : m.flats())
      if (f >> e & 1) ++sig[e][static_cast<std::size_t>(m.rank(f)) + 1];
  }
  return sig;
}

}  // namespace

std::optional<std::vector<int>> matroid_iso(const Matroid& a, const Matroid& b) {
  if (a.size() != b.size() || a.rank() != b.rank() || a.bases().size() != b.bases().size() ||
      a.flats().size() != b.flats().size())
    return std::nullopt;
  auto sa = element_signatures(a), sb = element_signatures(b);
  {
    auto x = sa, y = sb;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return std::nullopt;
  }
  const std::size_t n = a.size();
  std::vector<int> image(n, -1);
  ElementSet used = 0;
  // img[s] is the image of the subset s of the already matched prefix.
  std::vector<ElementSet> img{0};
  auto extend = [&](auto&& self, std::size_t k) -> bool {
    if (k == n) return true;
    for (std::size_t f = 0; f < n; ++f) {
      if (used >> f & 1 || sa[k] != sb[f]) continue;
      bool ok = true;
      for (ElementSet s = 0; s < img.size() && ok; ++s)
        ok = a.rank(s | 1u << k) == b.rank(img[s] | 1u << f);
      if (!ok) continue;
      image[k] = static_cast<int>(f);
      used |= 1u << f;
      std::size_t old = img.size();
      for (std::size_t s = 0; s < old; ++s) img.push_back(img[s] | 1u << f);
      if (self(self, k + 1)) return true;
      img.resize(old);
      used &= ~(1u << f);
    }
    return false;
  };
  if (!extend(extend, 0)) return std::nullopt;
  return image;
}

std::optional<ElementSet> find_isomorphic_restriction(const Matroid& m, const Matroid& target) {
  if (target.size() > m.size()) return std::nullopt;
  for (ElementSet s : subsets_of_size(m.size(), static_cast<int>(target.size()))) {
    if (m.rank(s) != target.rank()) continue;
    if (matroid_iso(restrict_to(m, s), target)) return s;
  }
  return std::nullopt;
}

namespace {

void require_simple_rank3(const Matroid& m) {
  if (m.rank() != 3 || !m.is_simple()) throw InputError("adjoints need a simple matroid of rank 3");
}

}  // namespace

bool is_adjoint(const Matroid& w, const Matroid& m) {
  require_simple_rank3(m);
  auto hyper = m.hyperplanes();
  if (w.size() != hyper.size() || w.rank() != 3) return false;
  for (ElementSet f : m.flats()) {
    ElementSet above = 0;
    for (std::size_t i = 0; i < hyper.size(); ++i)
      if (contains(hyper[i], f)) above |= 1u << i;
    if (!w.is_flat(above) || w.rank(above) != 3 - m.rank(f)) return false;
  }
  return true;
}

Matroid free_adjoint(const Matroid& m) {
  require_simple_rank3(m);
  auto hyper = m.hyperplanes();
  check_ground(hyper.size());
  std::vector<ElementSet> lines;
  for (std::size_t e = 0; e < m.size(); ++e) {
    ElementSet through = 0;
    for (std::size_t i = 0; i < hyper.size(); ++i)
      if (hyper[i] >> e & 1) through |= 1u << i;
    if (set_size(through) >= 2) lines.push_back(through);
  }
  // Disjoint pairs of lines are two-point lines and need no listing.
  return Matroid::from_rank2_flats(hyper.size(), lines);
}

namespace {

// Smallest linear subclass of hyperplanes containing the marked ones.
void close_subclass(const Matroid& m, const std::vector<ElementSet>& hyper, std::vector<char>& in) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < hyper.size(); ++i) {
      if (!in[i]) continue;
      for (std::size_t j = i + 1; j < hyper.size(); ++j) {
        if (!in[j]) continue;
        ElementSet meet = hyper[i] & hyper[j];
        if (m.rank(meet) != m.rank() - 2) continue;
        for (std::size_t k = 0; k < hyper.size(); ++k)
          if (!in[k] && contains(hyper[k], meet)) {
            in[k] = 1;
            changed = true;
          }
      }
    }
  }
}

Matroid quotient_from_subclass(const Matroid& m, const std::vector<ElementSet>& hyper, const std::vector<char>& in) {
  auto in_cut = [&](ElementSet f) {
    for (std::size_t i = 0; i < hyper.size(); ++i)
      if (!in[i] && contains(hyper[i], f)) return false;
    return true;
  };
  std::vector<ElementSet> flats;
  for (ElementSet f : m.flats()) {
    if (in_cut(f)) {
      flats.push_back(f);
      continue;
    }
    bool covered = false;
    for (ElementSet g : m.flats())
      if (m.rank(g) == m.rank(f) + 1 && contains(g, f) && in_cut(g)) {
        covered = true;
        break;
      }
    if (!covered) flats.push_back(f);
  }
  auto v = from_flats(m.size(), flats);
  if (!v.matroid) throw std::logic_error("modular cut produced an invalid lattice: " + v.defect);
  return *v.matroid;
}

bool has_flats(const Matroid& q, const std::vector<ElementSet>& required) {
  return std::all_of(required.begin(), required.end(), [&](ElementSet f) { return q.is_flat(f); });
}

}  // namespace

std::vector<Matroid> elementary_quotients(const Matroid& m, const std::vector<ElementSet>& required) {
  if (m.rank() == 0) return {};
  auto hyper = m.hyperplanes();
  std::vector<char> in(hyper.size(), 0), out(hyper.size(), 0);
  // A required hyperplane survives only if it lies in the cut.
  for (ElementSet f : required)
    for (std::size_t i = 0; i < hyper.size(); ++i)
      if (hyper[i] == f) in[i] = 1;
  close_subclass(m, hyper, in);
  std::vector<Matroid> result;
  long leaves = 0;
  auto search = [&](auto&& self, std::size_t idx, std::vector<char>& cur, std::vector<char>& banned) -> void {
    if (idx == hyper.size()) {
      if (++leaves > max_candidates()) throw CapExceeded("linear subclass enumeration exceeded the candidate cap");
      if (std::all_of(cur.begin(), cur.end(), [](char c) { return c; })) return;
      Matroid q = quotient_from_subclass(m, hyper, cur);
      if (has_flats(q, required)) result.push_back(std::move(q));
      return;
    }
    if (cur[idx] || banned[idx]) {
      self(self, idx + 1, cur, banned);
      return;
    }
    banned[idx] = 1;
    self(self, idx + 1, cur, banned);
    banned[idx] = 0;
    auto grown = cur;
    grown[idx] = 1;
    close_subclass(m, hyper, grown);
    for (std::size_t k = 0; k < hyper.size(); ++k)
      if (grown[k] && banned[k]) return;
    self(self, idx + 1, grown, banned);
  };
  search(search, 0, in, out);
  return result;
}

std::vector<Matroid> quotients_of_rank(const Matroid& m, int rank, const std::vector<ElementSet>& required) {
  if (rank > m.rank() || rank < 0) return {};
  std::vector<Matroid> level{m};
  for (int r = m.rank(); r > rank; --r) {
    std::vector<Matroid> next;
    for (const Matroid& x : level)
      for (Matroid& q : elementary_quotients(x, r - 1 == rank ? required : std::vector<ElementSet>{}))
        if (std::find(next.begin(), next.end(), q) == next.end()) next.push_back(std::move(q));
    level = std::move(next);
  }
  if (rank == m.rank() && !has_flats(m, required)) return {};
  return level;
}

std::vector<Matroid> common_quotients(const Matroid& a, const Matroid& b, int rank,
                                      const std::vector<ElementSet>& required) {
  std::vector<Matroid> out;
  for (Matroid& q : quotients_of_rank(a, rank, required))
    if (is_quotient(q, b)) out.push_back(std::move(q));
  return out;
}

Matroid fano() {
  // Points of the projective plane over two elements: element i is the vector i + 1.
  std::set<ElementSet> lines;
  for (unsigned a = 1; a <= 7; ++a)
    for (unsigned b = a + 1; b <= 7; ++b) lines.insert(1u << (a - 1) | 1u << (b - 1) | 1u << ((a ^ b) - 1));
  return Matroid::from_rank2_flats(7, {lines.begin(), lines.end()});
}

Matroid non_fano() {
  // Drop the line through 011, 101, 110, which is collinear only in characteristic two.
  std::vector<ElementSet> lines;
  for (ElementSet l : fano().flats(2))
    if (l != make_set({2, 4, 5})) lines.push_back(l);
  return Matroid::from_rank2_flats(7, lines);
}

Matroid vamos() {
  return Matroid::from_nonspanning_circuits(
      4, 8, {make_set({0, 1, 2, 3}), make_set({0, 3, 4, 5}), make_set({1, 2, 4, 5}), make_set({0, 3, 6, 7}), make_set({1, 2, 6, 7})});
}

Matroid vamos_relaxed() {
  return Matroid::from_nonspanning_circuits(
      4, 8, {make_set({0, 1, 2, 3}), make_set({0, 3, 4, 5}), make_set({1, 2, 4, 5}), make_set({0, 3, 6, 7})});
}

std::vector<Matroid> loopless_matroids(std::size_t n) {
  if (n > 5) throw CapExceeded("matroid enumeration is limited to five elements");
  std::vector<Matroid> out;
  for (std::size_t r = 1; r <= n; ++r) {
    auto candidates = subsets_of_size(n, static_cast<int>(r));
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << candidates.size()); ++mask) {
      std::vector<ElementSet> bases;
      ElementSet cover = 0;
      for (std::size_t i = 0; i < candidates.size(); ++i)
        if (mask >> i & 1) {
          bases.push_back(candidates[i]);
          cover |= candidates[i];
        }
      if (cover != full_set(n) || exchange_violation(n, bases)) continue;
      Matroid m = Matroid::from_bases(n, std::move(bases));
      if (std::none_of(out.begin(), out.end(), [&](const Matroid& x) { return matroid_iso(x, m).has_value(); }))
        out.push_back(std::move(m));
    }
  }
  return out;
}

ValuatedMatroid::ValuatedMatroid(std::size_t n, std::vector<TropVector> generators)
    : n_(n), gens_(std::move(generators)), underlying_(Matroid::boolean(0)) {
  check_ground(n);
  std::vector<ElementSet> supports;
  for (const auto& g : gens_) {
    if (g.size() != n) throw InputError("generator length does not match the ground size");
    ElementSet s = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (g[j].is_finite()) s |= 1u << j;
    supports.push_back(s);
  }
  std::vector<ElementSet> flats;
  for (ElementSet c : union_closure(supports)) flats.push_back(full_set(n) & ~c);
  auto v = from_flats(n, flats);
  if (!v.matroid) throw InputError("generator supports do not form covectors of a matroid: " + v.defect);
  underlying_ = std::move(*v.matroid);
}

ValuatedMatroid ValuatedMatroid::trop(const Matroid& m) {
  std::vector<TropVector> gens;
  for (ElementSet c : m.cocircuits()) {
    TropVector g(m.size(), ExtRational::infinity());
    for (int j : elements(c)) g[static_cast<std::size_t>(j)] = ExtRational(0);
    gens.push_back(std::move(g));
  }
  return ValuatedMatroid(m.size(), std::move(gens));
}

ValuatedMatroid ValuatedMatroid::free_module(std::size_t n) {
  std::vector<TropVector> gens;
  for (std::size_t i = 0; i < n; ++i) {
    TropVector g(n, ExtRational::infinity());
    g[i] = ExtRational(0);
    gens.push_back(std::move(g));
  }
  return ValuatedMatroid(n, std::move(gens));
}

TropVector trop_combination(const std::vector<TropVector>& gens, const std::vector<ExtRational>& coeffs) {
  if (gens.empty()) return {};
  TropVector out(gens.front().size(), ExtRational::infinity());
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = std::min(out[j], gens[i][j] + coeffs[i]);
  return out;
}

std::optional<std::vector<ExtRational>> span_membership(const TropVector& w, const std::vector<TropVector>& gens) {
  std::vector<ExtRational> lambda;
  for (const auto& g : gens) {
    if (g.size() != w.size()) throw InputError("vector length does not match the generators");
    std::optional<Rational> best;
    bool blocked = false;
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (g[j].is_infinite()) continue;
      if (w[j].is_infinite()) {
        blocked = true;
        break;
      }
      Rational d = w[j].value() - g[j].value();
      if (!best || d > *best) best = d;
    }
    lambda.push_back(blocked || !best ? ExtRational::infinity() : ExtRational(*best));
  }
  if (gens.empty()) {
    bool zero = std::all_of(w.begin(), w.end(), [](const ExtRational& x) { return x.is_infinite(); });
    return zero ? std::optional(lambda) : std::nullopt;
  }
  if (trop_combination(gens, lambda) != w) return std::nullopt;
  return lambda;
}

bool trop_membership(const TropVector& w, const Matroid& m) {
  return span_membership(w, ValuatedMatroid::trop(m)).has_value();
}

Matroid initial_matroid(const ValuatedMatroid& v, const TropVector& w) {
  if (std::any_of(w.begin(), w.end(), [](const ExtRational& x) { return x.is_infinite(); }))
    throw InputError("initial matroids need a point with finite coordinates");
  auto lambda = span_membership(w, v);
  if (!lambda) throw InputError("point is not in the tropical span");
  // A member w' >= w has coefficients >= lambda; it agrees with w exactly on the tight
  // sets of the generators whose coefficient stays at lambda.
  std::vector<ElementSet> tight;
  for (std::size_t i = 0; i < v.generators().size(); ++i) {
    if ((*lambda)[i].is_infinite()) continue;
    ElementSet t = 0;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (v.generators()[i][j].is_finite() && v.generators()[i][j] + (*lambda)[i] == w[j]) t |= 1u << j;
    tight.push_back(t);
  }
  std::vector<ElementSet> flats;
  for (ElementSet u : union_closure(tight)) flats.push_back(full_set(v.size()) & ~u);
  auto res = from_flats(v.size(), flats);
  if (!res.matroid) throw InputError("initial supports do not form a matroid: " + res.defect);
  return *res.matroid;
}

}  // namespace tropls
