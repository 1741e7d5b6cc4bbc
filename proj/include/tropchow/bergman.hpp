#pragma once

#include "tropchow/fan.hpp"
#include "tropchow/matroid.hpp"

#include <functional>
#include <utility>

// Tropical linear spaces L_M in R^E / R(1,...,1), min convention. The
// quotient is identified with Z^{n-1} by subtracting the last coordinate from
// all others and dropping it; quotient points lift by appending a zero.

namespace tropchow {

class PointNotInSpace : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline RatVector lift_point(const Matroid& m, const RatVector& w) {
  const auto n = static_cast<std::size_t>(m.ground_size());
  if (w.size() == n) return w;
  if (n > 0 && w.size() + 1 == n) {
    RatVector lifted = w;
    lifted.push_back(0);
    return lifted;
  }
  throw DimensionMismatch("point has " + std::to_string(w.size()) +
                          " coordinates; expected " + std::to_string(n) + " or " +
                          std::to_string(n == 0 ? 0 : n - 1));
}

}  // namespace detail

/// Quotient coordinates of a vector in R^E.
inline RatVector to_quotient(const RatVector& w) {
  if (w.empty()) return {};
  RatVector q(w.size() - 1);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) q[i] = w[i] - w.back();
  return q;
}

inline bool linear_space_contains(const Matroid& m, const RatVector& point) {
  if (!m.is_loop_free()) throw LoopsPresent("matroid has a loop");
  const RatVector w = detail::lift_point(m, point);
  for (ElementSet c : m.circuits()) {
    const auto elems = c.elements();
    Rational best = w[static_cast<std::size_t>(elems.front())];
    int hits = 0;
    for (int e : elems) {
      const Rational& x = w[static_cast<std::size_t>(e)];
      if (x < best) {
        best = x;
        hits = 1;
      } else if (x == best) {
        ++hits;
      }
    }
    if (hits < 2) return false;
  }
  return true;
}

/// Whether w + eps v lies in L_M for all small eps > 0, decided by comparing
/// (w_e, v_e) lexicographically on every circuit.
inline bool local_cone_contains(const Matroid& m, const RatVector& point,
                                const RatVector& direction) {
  if (!linear_space_contains(m, point)) throw PointNotInSpace("base point is not in L_M");
  const RatVector w = detail::lift_point(m, point);
  const RatVector v = detail::lift_point(m, direction);
  for (ElementSet c : m.circuits()) {
    std::optional<std::pair<Rational, Rational>> best;
    int hits = 0;
    for (int e : c.elements()) {
      std::pair<Rational, Rational> key{w[static_cast<std::size_t>(e)],
                                        v[static_cast<std::size_t>(e)]};
      if (!best || key < *best) {
        best = std::move(key);
        hits = 1;
      } else if (key == *best) {
        ++hits;
      }
    }
    if (hits < 2) return false;
  }
  return true;
}

/// Quotient coordinates of e_F = sum of e_i over i in F.
inline IntVector flat_ray(const Matroid& m, ElementSet flat) {
  const int n = m.ground_size();
  IntVector v(static_cast<std::size_t>(n - 1));
  const int last = flat.contains(n - 1) ? 1 : 0;
  for (int i = 0; i + 1 < n; ++i) v[static_cast<std::size_t>(i)] = (flat.contains(i) ? 1 : 0) - last;
  if (!is_primitive(v)) throw std::logic_error("flat ray is not primitive");
  return v;
}

/// Fine subdivision: one ray per proper flat, one cone per chain of flats.
/// Ray i corresponds to proper_flats(m)[i].
inline Fan fine_subdivision(const Matroid& m) {
  if (!m.is_loop_free()) throw LoopsPresent("matroid has a loop");
  if (m.ground_size() == 0) throw Error("fine subdivision of the empty matroid");
  const auto flats = proper_flats(m);
  std::vector<IntVector> rays;
  for (ElementSet f : flats) rays.push_back(flat_ray(m, f));

  std::vector<Cone> maximal;
  Cone chain;
  std::function<void(int)> extend = [&](int last) {
    bool extended = false;
    for (std::size_t j = 0; j < flats.size(); ++j) {
      const bool above = last < 0 || (flats[static_cast<std::size_t>(last)] != flats[j] &&
                                      flats[static_cast<std::size_t>(last)].is_subset_of(flats[j]));
      if (!above) continue;
      extended = true;
      chain.push_back(static_cast<RayId>(j));
      extend(static_cast<int>(j));
      chain.pop_back();
    }
    if (!extended) maximal.push_back(chain);
  };
  extend(-1);
  return Fan::from_maximal_cones(static_cast<std::size_t>(m.ground_size() - 1), std::move(rays),
                                 maximal);
}

}  // namespace tropchow
