#pragma once

#include "tropchow/integer.hpp"
#include "tropchow/lattice.hpp"
#include "tropchow/simplex.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tropchow {

using RayId = int;
/// A cone of a simplicial fan, as the sorted list of its ray indices.
using Cone = std::vector<RayId>;
using ConeId = std::size_t;

class ConeNotInFan : public Error {
 public:
  using Error::Error;
};
class ZeroCone : public Error {
 public:
  using Error::Error;
};
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};
class NotARefinement : public Error {
 public:
  using Error::Error;
};

inline std::string cone_to_string(const Cone& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + "}";
}

inline bool cone_less(const Cone& a, const Cone& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

/// Simplicial rational fan. Cones are stored explicitly, ordered by dimension
/// and then lexicographically; ConeId indexes into that order.
class Fan {
 public:
  Fan() = default;

  /// Stores exactly the given cones (each sorted, duplicates dropped).
  Fan(std::size_t lattice_rank, std::vector<IntVector> rays, std::vector<Cone> cones)
      : rank_(lattice_rank), rays_(std::move(rays)) {
    for (auto& c : cones) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    std::sort(cones.begin(), cones.end(), cone_less);
    cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
    cones_ = std::move(cones);
    for (ConeId i = 0; i < cones_.size(); ++i) {
      index_.emplace(cones_[i], i);
      const std::size_t d = cones_[i].size();
      if (by_dim_.size() <= d) by_dim_.resize(d + 1);
      by_dim_[d].push_back(i);
    }
  }

  /// Closes the maximal cones under taking faces, the zero cone included.
  static Fan from_maximal_cones(std::size_t lattice_rank, std::vector<IntVector> rays,
                                const std::vector<Cone>& maximal) {
    std::set<Cone> all{Cone{}};
    for (Cone c : maximal) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
      if (c.size() > 30) throw Error("cone has too many rays");
      const std::uint64_t limit = std::uint64_t{1} << c.size();
      for (std::uint64_t mask = 0; mask < limit; ++mask) {
        Cone face;
        for (std::size_t i = 0; i < c.size(); ++i)
          if ((mask >> i) & 1U) face.push_back(c[i]);
        all.insert(std::move(face));
      }
    }
    return Fan(lattice_rank, std::move(rays), std::vector<Cone>(all.begin(), all.end()));
  }

  std::size_t lattice_rank() const { return rank_; }
  const std::vector<IntVector>& rays() const { return rays_; }
  const IntVector& ray(RayId r) const { return rays_.at(static_cast<std::size_t>(r)); }
  std::size_t ray_count() const { return rays_.size(); }

  const std::vector<Cone>& cones() const { return cones_; }
  const Cone& cone(ConeId id) const { return cones_.at(id); }

  /// Cone ids of dimension k (empty for k out of range).
  const std::vector<ConeId>& cones_of_dim(int k) const {
    static const std::vector<ConeId> kNone;
    if (k < 0 || static_cast<std::size_t>(k) >= by_dim_.size()) return kNone;
    return by_dim_[static_cast<std::size_t>(k)];
  }

  std::optional<ConeId> find(Cone c) const {
    std::sort(c.begin(), c.end());
    auto it = index_.find(c);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  bool contains(const Cone& c) const { return find(c).has_value(); }

  ConeId id_of(const Cone& c) const {
    auto id = find(c);
    if (!id) throw ConeNotInFan("cone " + cone_to_string(c) + " is not in the fan");
    return *id;
  }

  /// Largest cone dimension; -1 for a fan without cones.
  int dimension() const { return static_cast<int>(by_dim_.size()) - 1; }

  std::vector<IntVector> generators(const Cone& c) const {
    std::vector<IntVector> g;
    for (RayId r : c) g.push_back(ray(r));
    return g;
  }

  /// Cones not properly contained in another cone.
  std::vector<Cone> maximal_cones() const {
    std::vector<Cone> out;
    for (const Cone& c : cones_) {
      bool maximal = true;
      for (const Cone& d : cones_) {
        if (d.size() > c.size() && std::includes(d.begin(), d.end(), c.begin(), c.end())) {
          maximal = false;
          break;
        }
      }
      if (maximal) out.push_back(c);
    }
    return out;
  }

  bool is_pure() const {
    const auto mc = maximal_cones();
    return std::all_of(mc.begin(), mc.end(), [&](const Cone& c) {
      return static_cast<int>(c.size()) == dimension();
    });
  }

  friend bool operator==(const Fan& a, const Fan& b) {
    return a.rank_ == b.rank_ && a.rays_ == b.rays_ && a.cones_ == b.cones_;
  }

 private:
  std::size_t rank_ = 0;
  std::vector<IntVector> rays_;
  std::vector<Cone> cones_;
  std::map<Cone, ConeId> index_;
  std::vector<std::vector<ConeId>> by_dim_;
};

/// Lattice index of the sublattice spanned by a cone's generators inside its
/// saturation (1 iff the generators extend to a lattice basis); 0 when they
/// are linearly dependent.
inline Integer cone_index(const Fan& f, const Cone& c) {
  if (c.empty()) return 1;
  const auto s = smith_normal_form(IntMatrix::from_columns(f.generators(c), f.lattice_rank()));
  if (s.rank < c.size()) return 0;
  Integer index = 1;
  for (const auto& d : s.invariant_factors()) index *= d;
  return index;
}

/// Every maximal cone's generators extend to a lattice basis.
inline bool is_smooth(const Fan& f) {
  for (const Cone& c : f.maximal_cones())
    if (cone_index(f, c) != 1) return false;
  return true;
}

namespace detail {

/// True when pos(a) and pos(b) meet outside pos(a n b). Both cones must have
/// linearly independent generators.
inline bool cones_overlap(const Fan& f, const Cone& a, const Cone& b) {
  Cone only_a, only_b;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a));
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b));
  if (only_a.empty() || only_b.empty()) return false;
  const std::size_t n = f.lattice_rank();
  const std::size_t vars = a.size() + b.size();
  // sum_a x_i u_i - sum_b y_j u_j = 0, sum over the non-shared rays = 1.
  std::vector<RatVector> rows(n + 1, RatVector(vars));
  RatVector rhs(n + 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& u = f.ray(a[i]);
    for (std::size_t k = 0; k < n; ++k) rows[k][i] = u[k];
    if (!std::binary_search(b.begin(), b.end(), a[i])) rows[n][i] = 1;
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    const auto& u = f.ray(b[j]);
    for (std::size_t k = 0; k < n; ++k) rows[k][a.size() + j] = -Rational(u[k]);
    if (!std::binary_search(a.begin(), a.end(), b[j])) rows[n][a.size() + j] = 1;
  }
  rhs[n] = 1;
  return nonnegative_solution(std::move(rows), std::move(rhs)).has_value();
}

}  // namespace detail

/// Checks primitivity, subset closure, smoothness, and that cones meet in
/// common faces. Returns the first violation.
inline std::optional<std::string> validate_fan(const Fan& f) {
  const std::size_t n = f.lattice_rank();
  for (std::size_t i = 0; i < f.ray_count(); ++i) {
    const auto& u = f.rays()[i];
    if (u.size() != n)
      return "ray " + std::to_string(i) + " has length " + std::to_string(u.size()) +
             ", expected " + std::to_string(n);
    if (gcd(u) == 0) return "ray " + std::to_string(i) + " is zero";
    if (!is_primitive(u)) return "ray " + std::to_string(i) + " is not primitive";
    for (std::size_t j = 0; j < i; ++j)
      if (f.rays()[j] == u)
        return "rays " + std::to_string(j) + " and " + std::to_string(i) + " coincide";
  }
  if (f.cones().empty() || !f.cones().front().empty()) return "closure: zero cone missing";
  for (const Cone& c : f.cones()) {
    for (RayId r : c)
      if (r < 0 || static_cast<std::size_t>(r) >= f.ray_count())
        return "cone " + cone_to_string(c) + " uses unknown ray " + std::to_string(r);
    for (std::size_t i = 0; i < c.size(); ++i) {
      Cone face = c;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      if (!f.contains(face))
        return "closure: face " + cone_to_string(face) + " of cone " + cone_to_string(c) +
               " is missing";
    }
  }
  for (std::size_t i = 0; i < f.ray_count(); ++i)
    if (!f.contains(Cone{static_cast<RayId>(i)}))
      return "ray " + std::to_string(i) + " spans no cone";
  const auto maximal = f.maximal_cones();
  for (const Cone& c : maximal) {
    const Integer index = cone_index(f, c);
    if (index == 0) return "cone " + cone_to_string(c) + " has linearly dependent generators";
    if (index != 1)
      return "cone " + cone_to_string(c) + " is not smooth: index " + index.str();
  }
  for (std::size_t i = 0; i < maximal.size(); ++i)
    for (std::size_t j = i + 1; j < maximal.size(); ++j)
      if (detail::cones_overlap(f, maximal[i], maximal[j]))
        return "cones " + cone_to_string(maximal[i]) + " and " + cone_to_string(maximal[j]) +
               " do not meet in a common face";
  return std::nullopt;
}

/// Coordinates of p with respect to the cone's generators, or nullopt when p
/// is not in their span.
inline std::optional<RatVector> cone_coordinates(const Fan& f, const Cone& c,
                                                 const RatVector& p) {
  return solve_in_span(f.generators(c), p);
}

inline bool cone_contains(const Fan& f, const Cone& c, const RatVector& p) {
  const auto x = cone_coordinates(f, c, p);
  return x && std::all_of(x->begin(), x->end(), [](const Rational& v) { return v >= 0; });
}

/// The smallest cone whose relative interior contains p, if p is in |F|.
inline std::optional<Cone> carrier_cone(const Fan& f, const RatVector& p) {
  if (p.size() != f.lattice_rank()) throw DimensionMismatch("point has wrong dimension");
  for (const Cone& c : f.maximal_cones()) {
    const auto x = cone_coordinates(f, c, p);
    if (!x) continue;
    if (std::any_of(x->begin(), x->end(), [](const Rational& v) { return v < 0; })) continue;
    Cone carrier;
    for (std::size_t i = 0; i < c.size(); ++i)
      if ((*x)[i] > 0) carrier.push_back(c[i]);
    return carrier;
  }
  return std::nullopt;
}

inline bool support_contains(const Fan& f, const RatVector& p) {
  return carrier_cone(f, p).has_value();
}

inline IntVector barycenter(const Fan& f, const Cone& c) {
  IntVector b(f.lattice_rank());
  for (RayId r : c)
    for (std::size_t k = 0; k < b.size(); ++k) b[k] += f.ray(r)[k];
  return b;
}

/// Star of the fan at a cone, in the quotient lattice N / (Lin(c) n N).
struct StarResult {
  Fan fan;
  LatticeProjection projection;
  std::vector<RayId> ray_origin;  ///< original ray id of each star ray
};

inline StarResult star_with_projection(const Fan& f, const Cone& sigma_in) {
  Cone sigma = sigma_in;
  std::sort(sigma.begin(), sigma.end());
  f.id_of(sigma);
  LatticeProjection proj = quotient_lattice(f.generators(sigma), f.lattice_rank());
  std::map<RayId, RayId> new_id;
  std::vector<IntVector> rays;
  std::vector<RayId> origin;
  std::vector<Cone> cones;
  for (const Cone& tau : f.cones()) {
    if (!std::includes(tau.begin(), tau.end(), sigma.begin(), sigma.end())) continue;
    Cone image;
    for (RayId r : tau) {
      if (std::binary_search(sigma.begin(), sigma.end(), r)) continue;
      auto it = new_id.find(r);
      if (it == new_id.end()) {
        it = new_id.emplace(r, static_cast<RayId>(rays.size())).first;
        rays.push_back(primitive_part(proj.apply(f.ray(r))));
        origin.push_back(r);
      }
      image.push_back(it->second);
    }
    cones.push_back(std::move(image));
  }
  return StarResult{Fan(proj.target_rank, std::move(rays), std::move(cones)), std::move(proj),
                    std::move(origin)};
}

inline Fan star(const Fan& f, const Cone& sigma) { return star_with_projection(f, sigma).fan; }

/// Inserts the ray through the sum of the cone's generators. A ray is its
/// own stellar subdivision.
inline Fan stellar_subdivision(const Fan& f, const Cone& sigma_in) {
  Cone sigma = sigma_in;
  std::sort(sigma.begin(), sigma.end());
  f.id_of(sigma);
  if (sigma.empty()) throw ZeroCone("stellar subdivision at the zero cone");
  if (sigma.size() == 1) return f;
  std::vector<IntVector> rays = f.rays();
  const IntVector u = barycenter(f, sigma);
  if (!is_primitive(u)) throw std::logic_error("stellar ray is not primitive");
  const RayId fresh = static_cast<RayId>(rays.size());
  rays.push_back(u);
  std::vector<Cone> maximal;
  for (const Cone& tau : f.maximal_cones()) {
    if (!std::includes(tau.begin(), tau.end(), sigma.begin(), sigma.end())) {
      maximal.push_back(tau);
      continue;
    }
    for (RayId r : sigma) {
      Cone c;
      for (RayId t : tau)
        if (t != r) c.push_back(t);
      c.push_back(fresh);
      maximal.push_back(std::move(c));
    }
  }
  return Fan::from_maximal_cones(f.lattice_rank(), std::move(rays), maximal);
}

namespace detail {

/// v lies in pos(sigma) + Lin(tau) for some maximal sigma containing tau.
inline bool in_local_cone(const Fan& f, const std::vector<Cone>& maximal, const Cone& tau,
                          const RatVector& v) {
  for (const Cone& sigma : maximal) {
    if (!std::includes(sigma.begin(), sigma.end(), tau.begin(), tau.end())) continue;
    const auto x = cone_coordinates(f, sigma, v);
    if (!x) continue;
    bool ok = true;
    for (std::size_t i = 0; i < sigma.size() && ok; ++i)
      if (!std::binary_search(tau.begin(), tau.end(), sigma[i]) && (*x)[i] < 0) ok = false;
    if (ok) return true;
  }
  return false;
}

}  // namespace detail

/// Whether the whole line through w stays in |F| from every point of |F|.
/// Checked on the local cone at the relative interior of every cone.
inline bool is_lineality_vector(const Fan& f, const IntVector& w) {
  const auto maximal = f.maximal_cones();
  RatVector plus = to_rational(w);
  RatVector minus = plus;
  for (auto& x : minus) x = -x;
  for (const Cone& tau : f.cones())
    if (!detail::in_local_cone(f, maximal, tau, plus) ||
        !detail::in_local_cone(f, maximal, tau, minus))
      return false;
  return true;
}

/// Basis (Hermite-reduced rows) of the span of the rays that are lineality
/// vectors of |F|.
inline std::vector<IntVector> lineality_space(const Fan& f) {
  std::vector<IntVector> candidates;
  for (const auto& u : f.rays())
    if (is_lineality_vector(f, u)) candidates.push_back(u);
  const auto h = hermite_normal_form(IntMatrix::from_rows(candidates, f.lattice_rank()));
  std::vector<IntVector> basis;
  for (std::size_t i = 0; i < h.rank; ++i) basis.push_back(h.H.row(i));
  return basis;
}

/// For each fine cone, the minimal coarse cone containing it.
struct RefinementMap {
  std::shared_ptr<const Fan> fine;
  std::shared_ptr<const Fan> coarse;
  std::vector<ConeId> assignment;  ///< indexed by fine ConeId

  const Cone& target(ConeId fine_cone) const { return coarse->cone(assignment.at(fine_cone)); }
};

inline RefinementMap refinement_map(std::shared_ptr<const Fan> fine,
                                    std::shared_ptr<const Fan> coarse) {
  if (fine->lattice_rank() != coarse->lattice_rank())
    throw NotARefinement("fans live in lattices of different rank");
  RefinementMap r{fine, coarse, {}};
  for (const Cone& delta : fine->cones()) {
    const auto carrier = carrier_cone(*coarse, to_rational(barycenter(*fine, delta)));
    if (!carrier)
      throw NotARefinement("fine cone " + cone_to_string(delta) + " leaves the coarse support");
    for (RayId g : delta)
      if (!cone_contains(*coarse, *carrier, to_rational(fine->ray(g))))
        throw NotARefinement("fine cone " + cone_to_string(delta) +
                             " is not inside a single coarse cone");
    r.assignment.push_back(coarse->id_of(*carrier));
  }
  // Coverage: the fine cones of full dimension inside each maximal coarse
  // cone must fill it. In the coarse cone's own coordinates, each fine cone
  // cuts the simplex {y >= 0, sum y = 1} in a simplex of relative volume
  // |det G| / prod |g_i|_1; the volumes must add up to one.
  for (const Cone& sigma : coarse->maximal_cones()) {
    const ConeId sid = coarse->id_of(sigma);
    Rational covered = 0;
    for (ConeId d : fine->cones_of_dim(static_cast<int>(sigma.size()))) {
      if (r.assignment[d] != sid) continue;
      const Cone& delta = fine->cone(d);
      const std::size_t k = sigma.size();
      IntMatrix g(k, k);
      Integer norms = 1;
      for (std::size_t j = 0; j < k; ++j) {
        const auto x = *cone_coordinates(*coarse, sigma, to_rational(fine->ray(delta[j])));
        Integer norm = 0;
        for (std::size_t i = 0; i < k; ++i) {
          g(i, j) = boost::multiprecision::numerator(x[i]);
          norm += g(i, j);
        }
        norms *= norm;
      }
      covered += Rational(abs(determinant(g)), norms);
    }
    if (sigma.empty()) covered = fine->contains(Cone{}) ? 1 : 0;
    if (covered != 1)
      throw NotARefinement("coarse cone " + cone_to_string(sigma) +
                           " is not covered by the fine fan");
  }
  return r;
}

/// Relabels rays in lexicographic order; cones follow.
inline Fan canonicalize(const Fan& f) {
  std::vector<RayId> order(f.ray_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<RayId>(i);
  std::sort(order.begin(), order.end(),
            [&](RayId a, RayId b) { return f.ray(a) < f.ray(b); });
  std::vector<RayId> new_id(f.ray_count());
  std::vector<IntVector> rays;
  for (std::size_t i = 0; i < order.size(); ++i) {
    new_id[static_cast<std::size_t>(order[i])] = static_cast<RayId>(i);
    rays.push_back(f.ray(order[i]));
  }
  std::vector<Cone> cones;
  for (const Cone& c : f.cones()) {
    Cone d;
    for (RayId r : c) d.push_back(new_id[static_cast<std::size_t>(r)]);
    cones.push_back(std::move(d));
  }
  return Fan(f.lattice_rank(), std::move(rays), std::move(cones));
}

/// Applies a unimodular change of lattice coordinates to every ray.
inline Fan change_coordinates(const Fan& f, const IntMatrix& g) {
  std::vector<IntVector> rays;
  for (const auto& u : f.rays()) rays.push_back(g * u);
  return Fan(f.lattice_rank(), std::move(rays), f.cones());
}

}  // namespace tropchow
