#pragma once

#include "tropchow/integer.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tropchow {

/// A subset of a ground set {0, ..., 63}, stored as a bitmask.
class ElementSet {
 public:
  constexpr ElementSet() = default;
  constexpr explicit ElementSet(std::uint64_t bits) : bits_(bits) {}
  ElementSet(std::initializer_list<int> elements) {
    for (int e : elements) insert(e);
  }
  static ElementSet from_vector(const std::vector<int>& elements) {
    ElementSet s;
    for (int e : elements) s.insert(e);
    return s;
  }
  static constexpr ElementSet full(int n) {
    return ElementSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool contains(int e) const { return (bits_ >> e) & 1U; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  void insert(int e) { bits_ |= std::uint64_t{1} << e; }
  void erase(int e) { bits_ &= ~(std::uint64_t{1} << e); }

  constexpr bool is_subset_of(ElementSet o) const {
    return (bits_ & ~o.bits_) == 0;
  }
  constexpr ElementSet operator|(ElementSet o) const { return ElementSet(bits_ | o.bits_); }
  constexpr ElementSet operator&(ElementSet o) const { return ElementSet(bits_ & o.bits_); }
  constexpr ElementSet without(int e) const {
    return ElementSet(bits_ & ~(std::uint64_t{1} << e));
  }
  constexpr ElementSet with(int e) const { return ElementSet(bits_ | (std::uint64_t{1} << e)); }

  std::vector<int> elements() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  friend constexpr bool operator==(ElementSet, ElementSet) = default;
  /// Lexicographic order on sorted element lists.
  friend bool operator<(ElementSet a, ElementSet b) { return a.elements() < b.elements(); }

 private:
  std::uint64_t bits_ = 0;
};

class LoopsPresent : public Error {
 public:
  using Error::Error;
};

class InvalidBasepoint : public Error {
 public:
  using Error::Error;
};

/// A matroid on {0, ..., n-1} given by its circuits. Bases are derived.
class Matroid {
 public:
  static constexpr int kMaxGroundSize = 63;

  Matroid() = default;
  Matroid(int ground_size, std::vector<ElementSet> circuits) : n_(ground_size) {
    if (n_ < 0 || n_ > kMaxGroundSize) throw Error("matroid ground set size out of range");
    std::sort(circuits.begin(), circuits.end());
    circuits.erase(std::unique(circuits.begin(), circuits.end()), circuits.end());
    circuits_ = std::move(circuits);
  }

  /// Builds the matroid whose bases are `bases`; the circuits are the
  /// minimal sets contained in no basis.
  static Matroid from_bases(int ground_size, const std::vector<ElementSet>& bases) {
    if (ground_size < 0 || ground_size > 20)
      throw Error("from_bases: ground set too large for enumeration");
    if (bases.empty()) throw Error("from_bases: a matroid has at least one basis");
    auto independent = [&](std::uint64_t s) {
      return std::any_of(bases.begin(), bases.end(),
                         [&](ElementSet b) { return ElementSet(s).is_subset_of(b); });
    };
    std::vector<ElementSet> circuits;
    const std::uint64_t limit = std::uint64_t{1} << ground_size;
    for (std::uint64_t s = 0; s < limit; ++s) {
      if (independent(s)) continue;
      bool minimal = true;
      for (std::uint64_t b = s; b != 0 && minimal; b &= b - 1) {
        const std::uint64_t e = b & (~b + 1);
        if (!independent(s & ~e)) minimal = false;
      }
      if (minimal) circuits.push_back(ElementSet(s));
    }
    return Matroid(ground_size, std::move(circuits));
  }

  int ground_size() const { return n_; }
  const std::vector<ElementSet>& circuits() const { return circuits_; }
  ElementSet ground_set() const { return ElementSet::full(n_); }

  bool is_independent(ElementSet s) const {
    return std::none_of(circuits_.begin(), circuits_.end(),
                        [&](ElementSet c) { return c.is_subset_of(s); });
  }

  bool is_loop_free() const {
    return std::none_of(circuits_.begin(), circuits_.end(),
                        [](ElementSet c) { return c.size() == 1; });
  }

  bool is_coloop(int e) const {
    return std::none_of(circuits_.begin(), circuits_.end(),
                        [&](ElementSet c) { return c.contains(e); });
  }

  friend bool operator==(const Matroid&, const Matroid&) = default;

 private:
  int n_ = 0;
  std::vector<ElementSet> circuits_;
};

/// Size of a maximal independent subset of `s` (greedy).
inline int rank_of_subset(const Matroid& m, ElementSet s) {
  ElementSet indep;
  for (int e : s.elements())
    if (m.is_independent(indep.with(e))) indep.insert(e);
  return indep.size();
}

inline int rank(const Matroid& m) { return rank_of_subset(m, m.ground_set()); }

inline ElementSet closure(const Matroid& m, ElementSet s) {
  const int r = rank_of_subset(m, s);
  ElementSet c = s;
  for (int e = 0; e < m.ground_size(); ++e)
    if (!s.contains(e) && rank_of_subset(m, s.with(e)) == r) c.insert(e);
  return c;
}

/// First violated axiom, or nullopt when the circuit family is a matroid.
inline std::optional<std::string> validate_matroid(const Matroid& m) {
  const auto& cs = m.circuits();
  auto show = [](ElementSet s) {
    std::string out = "{";
    bool first = true;
    for (int e : s.elements()) {
      if (!first) out += ",";
      out += std::to_string(e);
      first = false;
    }
    return out + "}";
  };
  for (ElementSet c : cs) {
    if (c.empty()) return "empty circuit";
    if (!c.is_subset_of(m.ground_set()))
      return "circuit " + show(c) + " leaves the ground set";
  }
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = 0; j < cs.size(); ++j)
      if (i != j && cs[i].is_subset_of(cs[j]))
        return "containment: circuit " + show(cs[i]) + " inside " + show(cs[j]);
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t j = i + 1; j < cs.size(); ++j)
      for (int e : (cs[i] & cs[j]).elements()) {
        const ElementSet target = (cs[i] | cs[j]).without(e);
        if (m.is_independent(target))
          return "elimination: circuits " + show(cs[i]) + " and " + show(cs[j]) +
                 " at " + std::to_string(e) + " leave no circuit in " + show(target);
      }
  return std::nullopt;
}

/// All bases, in lexicographic order.
inline std::vector<ElementSet> bases(const Matroid& m) {
  if (m.ground_size() > 24) throw Error("bases: ground set too large for enumeration");
  const int r = rank(m);
  std::vector<ElementSet> out;
  const std::uint64_t limit = std::uint64_t{1} << m.ground_size();
  for (std::uint64_t s = 0; s < limit; ++s) {
    const ElementSet set(s);
    if (set.size() == r && m.is_independent(set)) out.push_back(set);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Nonempty closed sets other than the ground set, sorted lexicographically.
inline std::vector<ElementSet> proper_flats(const Matroid& m) {
  if (!m.is_loop_free()) throw LoopsPresent("matroid has a loop");
  if (m.ground_size() > 24) throw Error("proper_flats: ground set too large");
  std::vector<ElementSet> out;
  const std::uint64_t limit = std::uint64_t{1} << m.ground_size();
  for (std::uint64_t s = 1; s + 1 < limit; ++s) {
    const ElementSet set(s);
    if (closure(m, set) == set) out.push_back(set);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Matroid direct_sum(const Matroid& a, const Matroid& b) {
  std::vector<ElementSet> circuits = a.circuits();
  const int shift = a.ground_size();
  for (ElementSet c : b.circuits()) circuits.push_back(ElementSet(c.bits() << shift));
  return Matroid(a.ground_size() + b.ground_size(), std::move(circuits));
}

inline Matroid deletion(const Matroid& m, int e) {
  std::vector<ElementSet> circuits;
  auto relabel = [e](ElementSet s) {
    ElementSet out;
    for (int x : s.elements()) out.insert(x < e ? x : x - 1);
    return out;
  };
  for (ElementSet c : m.circuits())
    if (!c.contains(e)) circuits.push_back(relabel(c));
  return Matroid(m.ground_size() - 1, std::move(circuits));
}

/// Label of each element of the second matroid inside a parallel connection:
/// the basepoint becomes p1, the others follow E(M1) in their original order.
inline std::vector<int> parallel_connection_labels(const Matroid& m1, const Matroid& m2,
                                                   int p2, int p1) {
  std::vector<int> label(static_cast<std::size_t>(m2.ground_size()));
  int next = m1.ground_size();
  for (int e = 0; e < m2.ground_size(); ++e)
    label[static_cast<std::size_t>(e)] = e == p2 ? p1 : next++;
  return label;
}

/// Parallel connection glued along p1 ~ p2. Circuits: those of M1, those of
/// M2, and (C1 u C2) \ {p} for C1 through p1 and C2 through p2.
inline Matroid parallel_connection(const Matroid& m1, int p1, const Matroid& m2, int p2) {
  if (p1 < 0 || p1 >= m1.ground_size() || p2 < 0 || p2 >= m2.ground_size())
    throw InvalidBasepoint("basepoint outside the ground set");
  if (!m1.is_loop_free() || !m2.is_loop_free())
    throw LoopsPresent("parallel connection requires loop-free matroids");
  const auto label = parallel_connection_labels(m1, m2, p2, p1);
  auto embed = [&](ElementSet c) {
    ElementSet out;
    for (int e : c.elements()) out.insert(label[static_cast<std::size_t>(e)]);
    return out;
  };
  std::vector<ElementSet> circuits = m1.circuits();
  for (ElementSet c : m2.circuits()) circuits.push_back(embed(c));
  for (ElementSet c1 : m1.circuits()) {
    if (!c1.contains(p1)) continue;
    for (ElementSet c2 : m2.circuits()) {
      if (!c2.contains(p2)) continue;
      circuits.push_back((c1 | embed(c2)).without(p1));
    }
  }
  for (std::size_t i = 0; i < circuits.size(); ++i)
    for (std::size_t j = 0; j < circuits.size(); ++j)
      if (i != j && circuits[i] != circuits[j] && circuits[i].is_subset_of(circuits[j]))
        throw std::logic_error("parallel connection circuits are not an antichain");
  return Matroid(m1.ground_size() + m2.ground_size() - 1, std::move(circuits));
}

enum class Extremum { Minimal, Maximal };

/// Which weight-extremal bases form M_w. With the min convention for
/// tropical linear spaces, the local cone of L_M at w is L_{M_w} exactly when
/// M_w keeps the bases of maximal w-weight; the bergman tests pin this.
inline constexpr Extremum kWeightSelection = Extremum::Maximal;

inline Matroid weight_selected_matroid(const Matroid& m, const RatVector& w,
                                       Extremum which = kWeightSelection) {
  if (static_cast<int>(w.size()) != m.ground_size())
    throw Error("weight vector length differs from ground set size");
  if (!m.is_loop_free()) throw LoopsPresent("matroid has a loop");
  const auto all = bases(m);
  std::vector<Rational> weight;
  for (ElementSet b : all) {
    Rational s = 0;
    for (int e : b.elements()) s += w[static_cast<std::size_t>(e)];
    weight.push_back(s);
  }
  const Rational target = which == Extremum::Maximal
                              ? *std::max_element(weight.begin(), weight.end())
                              : *std::min_element(weight.begin(), weight.end());
  std::vector<ElementSet> selected;
  for (std::size_t i = 0; i < all.size(); ++i)
    if (weight[i] == target) selected.push_back(all[i]);
  return Matroid::from_bases(m.ground_size(), selected);
}

}  // namespace tropchow
