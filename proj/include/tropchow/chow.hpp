#pragma once

#include "tropchow/fan.hpp"
#include "tropchow/lattice.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <utility>
#include <vector>

namespace tropchow {

class NotSmooth : public Error {
 public:
  using Error::Error;
};
class FanMismatch : public Error {
 public:
  using Error::Error;
};
class DegreeMismatch : public Error {
 public:
  using Error::Error;
};

/// Coordinates of a class in R^k: free part, then torsion residues.
struct NormalForm {
  IntVector free;
  IntVector torsion;
  friend bool operator==(const NormalForm&, const NormalForm&) = default;
};

/// R^k as the cokernel of the relation matrix on Z^{Sigma(k)}. One relation
/// row per (tau in Sigma(k-1), basis covector m of tau-perp), with entry
/// <m, u_{sigma/tau}> in the column of each sigma containing tau.
class ChowGroupPresentation {
 public:
  ChowGroupPresentation() = default;

  ChowGroupPresentation(const Fan& f, int k) : degree_(k) {
    generators_ = f.cones_of_dim(k);
    for (std::size_t i = 0; i < generators_.size(); ++i) position_.emplace(generators_[i], i);
    const std::size_t n = f.lattice_rank();
    std::vector<IntVector> rows;
    for (ConeId t : f.cones_of_dim(k - 1)) {
      const Cone& tau = f.cone(t);
      const IntMatrix perp = integer_kernel(IntMatrix::from_rows(f.generators(tau), n));
      std::vector<std::pair<std::size_t, RayId>> cofaces;
      for (std::size_t i = 0; i < generators_.size(); ++i) {
        const Cone& sigma = f.cone(generators_[i]);
        if (!std::includes(sigma.begin(), sigma.end(), tau.begin(), tau.end())) continue;
        RayId extra = -1;
        for (RayId r : sigma)
          if (!std::binary_search(tau.begin(), tau.end(), r)) extra = r;
        cofaces.emplace_back(i, extra);
      }
      for (std::size_t j = 0; j < perp.cols(); ++j) {
        const IntVector m = perp.column(j);
        IntVector row(generators_.size());
        for (auto [i, extra] : cofaces) row[i] = dot(m, f.ray(extra));
        rows.push_back(std::move(row));
        relation_labels_.emplace_back(t, m);
      }
    }
    relations_ = IntMatrix::from_rows(rows, generators_.size());
    smith_ = smith_normal_form(relations_);
  }

  int degree() const { return degree_; }
  /// Sigma(k), in fan order; position i is column i of the relation matrix.
  const std::vector<ConeId>& generators() const { return generators_; }
  std::size_t generator_count() const { return generators_.size(); }
  std::optional<std::size_t> position(ConeId c) const {
    auto it = position_.find(c);
    if (it == position_.end()) return std::nullopt;
    return it->second;
  }
  const IntMatrix& relations() const { return relations_; }
  /// (tau, m) behind each relation row.
  const std::vector<std::pair<ConeId, IntVector>>& relation_labels() const {
    return relation_labels_;
  }
  const SmithDecomposition& smith() const { return smith_; }

  std::size_t rank() const { return generators_.size() - smith_.rank; }
  IntVector torsion() const { return smith_.torsion(); }
  bool is_free() const { return torsion().empty(); }

  /// Coefficient vectors (over Sigma(k)) of a basis of the free part.
  std::vector<IntVector> free_basis() const {
    std::vector<IntVector> basis;
    for (std::size_t i = smith_.rank; i < generators_.size(); ++i)
      basis.push_back(smith_.V_inverse.row(i));
    return basis;
  }

  NormalForm normal_form(const IntVector& coeffs) const {
    if (coeffs.size() != generators_.size()) throw DegreeMismatch("coefficient vector length");
    const std::size_t g = generators_.size();
    IntVector y(g);
    for (std::size_t i = 0; i < g; ++i) {
      if (coeffs[i] == 0) continue;
      for (std::size_t j = 0; j < g; ++j) y[j] += coeffs[i] * smith_.V(i, j);
    }
    NormalForm nf;
    for (std::size_t j = 0; j < g; ++j) {
      if (j >= smith_.rank) {
        nf.free.push_back(y[j]);
      } else if (smith_.D(j, j) > 1) {
        Integer r = y[j] % smith_.D(j, j);
        if (r < 0) r += smith_.D(j, j);
        nf.torsion.push_back(r);
      }
    }
    return nf;
  }

 private:
  int degree_ = 0;
  std::vector<ConeId> generators_;
  std::map<ConeId, std::size_t> position_;
  IntMatrix relations_;
  std::vector<std::pair<ConeId, IntVector>> relation_labels_;
  SmithDecomposition smith_;
};

/// The integral Chow ring of a smooth fan with every graded piece presented
/// up front. Immutable once built.
class ChowRing {
 public:
  static std::shared_ptr<const ChowRing> create(std::shared_ptr<const Fan> fan) {
    if (!is_smooth(*fan)) throw NotSmooth("Chow rings need a smooth fan");
    return std::shared_ptr<const ChowRing>(new ChowRing(std::move(fan)));
  }
  static std::shared_ptr<const ChowRing> create(Fan fan) {
    return create(std::make_shared<const Fan>(std::move(fan)));
  }

  const Fan& fan() const { return *fan_; }
  const std::shared_ptr<const Fan>& fan_ptr() const { return fan_; }
  int dimension() const { return fan_->dimension(); }

  const ChowGroupPresentation& group(int k) const {
    if (k < 0 || k >= static_cast<int>(groups_.size())) return empty_;
    return groups_[static_cast<std::size_t>(k)];
  }

  /// Rays adjacent to a cone: r with cone + {r} in the fan.
  std::vector<RayId> link_rays(const Cone& c) const {
    std::vector<RayId> out;
    for (RayId r = 0; r < static_cast<RayId>(fan_->ray_count()); ++r) {
      if (std::binary_search(c.begin(), c.end(), r)) continue;
      Cone d = c;
      d.insert(std::lower_bound(d.begin(), d.end(), r), r);
      if (fan_->contains(d)) out.push_back(r);
    }
    return out;
  }

 private:
  explicit ChowRing(std::shared_ptr<const Fan> fan) : fan_(std::move(fan)) {
    for (int k = 0; k <= fan_->dimension(); ++k) groups_.emplace_back(*fan_, k);
  }

  std::shared_ptr<const Fan> fan_;
  std::vector<ChowGroupPresentation> groups_;
  ChowGroupPresentation empty_;
};

using RingPtr = std::shared_ptr<const ChowRing>;

inline bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || a->fan() == b->fan();
}

/// Integer combination of square-free monomials x_sigma, sigma in Sigma(k).
class ChowClass {
 public:
  ChowClass(RingPtr ring, int degree)
      : ring_(std::move(ring)), degree_(degree),
        coeffs_(ring_->group(degree).generator_count()) {}
  ChowClass(RingPtr ring, int degree, IntVector coeffs)
      : ring_(std::move(ring)), degree_(degree), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != ring_->group(degree_).generator_count())
      throw DegreeMismatch("class coefficients do not match Sigma(k)");
  }

  const RingPtr& ring() const { return ring_; }
  int degree() const { return degree_; }
  const IntVector& coefficients() const { return coeffs_; }
  IntVector& coefficients() { return coeffs_; }

  /// Coefficient of x_sigma.
  Integer coefficient(const Cone& sigma) const {
    const auto pos = ring_->group(degree_).position(ring_->fan().id_of(sigma));
    return pos ? coeffs_[*pos] : Integer(0);
  }
  void add_monomial(ConeId sigma, const Integer& c) {
    const auto pos = ring_->group(degree_).position(sigma);
    if (!pos) throw DegreeMismatch("cone dimension differs from class degree");
    coeffs_[*pos] += c;
  }

  bool is_zero_combination() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& x) { return x == 0; });
  }

  ChowClass& operator+=(const ChowClass& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  ChowClass& operator-=(const ChowClass& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  ChowClass& operator*=(const Integer& s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
  }
  friend ChowClass operator+(ChowClass a, const ChowClass& b) { return a += b; }
  friend ChowClass operator-(ChowClass a, const ChowClass& b) { return a -= b; }
  friend ChowClass operator*(const Integer& s, ChowClass a) { return a *= s; }

 private:
  void check_compatible(const ChowClass& o) const {
    if (!same_ring(ring_, o.ring_)) throw FanMismatch("classes live on different fans");
    if (degree_ != o.degree_) throw DegreeMismatch("classes have different degrees");
  }

  RingPtr ring_;
  int degree_;
  IntVector coeffs_;
};

inline const ChowGroupPresentation& chow_group(const ChowRing& ring, int k) {
  return ring.group(k);
}

inline NormalForm normal_form(const ChowClass& a) {
  return a.ring()->group(a.degree()).normal_form(a.coefficients());
}

/// Equality in R^k.
inline bool equivalent(const ChowClass& a, const ChowClass& b) {
  if (!same_ring(a.ring(), b.ring())) throw FanMismatch("classes live on different fans");
  return a.degree() == b.degree() && normal_form(a) == normal_form(b);
}

inline ChowClass monomial(const RingPtr& ring, const Cone& sigma) {
  ChowClass c(ring, static_cast<int>(sigma.size()));
  c.add_monomial(ring->fan().id_of(sigma), 1);
  return c;
}

inline ChowClass unit(const RingPtr& ring) { return monomial(ring, Cone{}); }

/// Choices made while rewriting a repeated variable; every choice yields the
/// same class. The defaults are the deterministic ones.
struct ReductionOptions {
  bool largest_repeated_first = false;
  /// Nonzero: shift each covector m by a random element of tau-perp.
  std::uint64_t perturbation_seed = 0;
};

namespace detail {

class MonomialReducer {
 public:
  MonomialReducer(const RingPtr& ring, ReductionOptions options)
      : ring_(ring), options_(options), rng_(options.perturbation_seed) {}

  /// Coefficients over Sigma(deg) of the product of x_r for r in `rays`
  /// (a sorted multiset).
  const IntVector& reduce(const std::vector<RayId>& rays) {
    if (options_.perturbation_seed == 0) {
      auto it = memo_.find(rays);
      if (it != memo_.end()) return it->second;
    }
    IntVector result = compute(rays);
    auto [it, inserted] = memo_.insert_or_assign(rays, std::move(result));
    return it->second;
  }

 private:
  IntVector compute(const std::vector<RayId>& rays) {
    const Fan& f = ring_->fan();
    const int deg = static_cast<int>(rays.size());
    const auto& group = ring_->group(deg);
    IntVector out(group.generator_count());
    Cone distinct = rays;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    const auto tau_id = f.find(distinct);
    if (!tau_id) return out;  // Stanley-Reisner relation
    if (distinct.size() == rays.size()) {
      out[*group.position(*tau_id)] = 1;
      return out;
    }
    std::vector<RayId> repeated;
    for (std::size_t i = 1; i < rays.size(); ++i)
      if (rays[i] == rays[i - 1] && (repeated.empty() || repeated.back() != rays[i]))
        repeated.push_back(rays[i]);
    const RayId rho = options_.largest_repeated_first ? repeated.back() : repeated.front();

    // <m, u_rho> = 1 and m vanishes on the other rays of tau.
    std::vector<IntVector> vectors;
    IntVector values;
    for (RayId r : distinct) {
      vectors.push_back(f.ray(r));
      values.push_back(r == rho ? 1 : 0);
    }
    IntVector m = solve_prescribed_pairings(vectors, values, f.lattice_rank());
    if (options_.perturbation_seed != 0) {
      const IntMatrix perp = integer_kernel(IntMatrix::from_rows(vectors, f.lattice_rank()));
      for (std::size_t j = 0; j < perp.cols(); ++j) {
        const Integer shift = static_cast<long>(rng_() % 7) - 3;
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += shift * perp(i, j);
      }
    }
    // x_rho = -sum_{r not in tau} <m, u_r> x_r; only rays adjacent to tau
    // survive the Stanley-Reisner relations.
    std::vector<RayId> rest = rays;
    rest.erase(std::find(rest.begin(), rest.end(), rho));
    for (RayId r : ring_->link_rays(distinct)) {
      const Integer c = -dot(m, f.ray(r));
      if (c == 0) continue;
      std::vector<RayId> next = rest;
      next.insert(std::lower_bound(next.begin(), next.end(), r), r);
      const IntVector sub = reduce(next);
      for (std::size_t i = 0; i < out.size(); ++i)
        if (sub[i] != 0) out[i] += c * sub[i];
    }
    return out;
  }

  RingPtr ring_;
  ReductionOptions options_;
  std::mt19937_64 rng_;
  std::map<std::vector<RayId>, IntVector> memo_;
};

}  // namespace detail

/// The class of prod x_r as a combination of square-free monomials.
inline ChowClass reduce_monomial(const RingPtr& ring, std::vector<RayId> rays,
                                 ReductionOptions options = {}) {
  for (RayId r : rays)
    if (r < 0 || static_cast<std::size_t>(r) >= ring->fan().ray_count())
      throw Error("unknown ray " + std::to_string(r));
  std::sort(rays.begin(), rays.end());
  detail::MonomialReducer reducer(ring, options);
  const int deg = static_cast<int>(rays.size());
  return ChowClass(ring, deg, reducer.reduce(rays));
}

inline ChowClass multiply(const ChowClass& a, const ChowClass& b, ReductionOptions options = {}) {
  if (!same_ring(a.ring(), b.ring())) throw FanMismatch("classes live on different fans");
  const RingPtr& ring = a.ring();
  const Fan& f = ring->fan();
  const int deg = a.degree() + b.degree();
  ChowClass out(ring, deg);
  if (out.coefficients().empty()) return out;
  detail::MonomialReducer reducer(ring, options);
  const auto& ga = ring->group(a.degree()).generators();
  const auto& gb = ring->group(b.degree()).generators();
  for (std::size_t i = 0; i < ga.size(); ++i) {
    if (a.coefficients()[i] == 0) continue;
    for (std::size_t j = 0; j < gb.size(); ++j) {
      if (b.coefficients()[j] == 0) continue;
      std::vector<RayId> rays = f.cone(ga[i]);
      const Cone& other = f.cone(gb[j]);
      rays.insert(rays.end(), other.begin(), other.end());
      std::sort(rays.begin(), rays.end());
      const Integer scale = a.coefficients()[i] * b.coefficients()[j];
      const IntVector& r = reducer.reduce(rays);
      for (std::size_t k = 0; k < r.size(); ++k)
        if (r[k] != 0) out.coefficients()[k] += scale * r[k];
    }
  }
  return out;
}

/// Integer weight on every k-cone; balanced weights are the elements of
/// Hom(R^k, Z).
class MinkowskiWeight {
 public:
  MinkowskiWeight(RingPtr ring, int degree)
      : ring_(std::move(ring)), degree_(degree),
        weights_(ring_->group(degree).generator_count()) {}
  MinkowskiWeight(RingPtr ring, int degree, IntVector weights)
      : ring_(std::move(ring)), degree_(degree), weights_(std::move(weights)) {
    if (weights_.size() != ring_->group(degree_).generator_count())
      throw DegreeMismatch("weights do not match Sigma(k)");
  }

  const RingPtr& ring() const { return ring_; }
  int degree() const { return degree_; }
  const IntVector& weights() const { return weights_; }
  IntVector& weights() { return weights_; }

  Integer weight(const Cone& sigma) const {
    const auto pos = ring_->group(degree_).position(ring_->fan().id_of(sigma));
    if (!pos) throw DegreeMismatch("cone dimension differs from weight degree");
    return weights_[*pos];
  }

  friend bool operator==(const MinkowskiWeight& a, const MinkowskiWeight& b) {
    return same_ring(a.ring_, b.ring_) && a.degree_ == b.degree_ && a.weights_ == b.weights_;
  }
  MinkowskiWeight& operator+=(const MinkowskiWeight& o) {
    if (degree_ != o.degree_) throw DegreeMismatch("weights have different degrees");
    for (std::size_t i = 0; i < weights_.size(); ++i) weights_[i] += o.weights_[i];
    return *this;
  }
  MinkowskiWeight& operator*=(const Integer& s) {
    for (auto& w : weights_) w *= s;
    return *this;
  }

 private:
  RingPtr ring_;
  int degree_;
  IntVector weights_;
};

inline bool is_balanced(const MinkowskiWeight& c) {
  const auto& rel = c.ring()->group(c.degree()).relations();
  for (std::size_t i = 0; i < rel.rows(); ++i) {
    Integer s = 0;
    for (std::size_t j = 0; j < rel.cols(); ++j) s += rel(i, j) * c.weights()[j];
    if (s != 0) return false;
  }
  return true;
}

/// Z-basis of Mink_k as the integer kernel of the relation matrix.
inline std::vector<MinkowskiWeight> minkowski_weight_basis(const RingPtr& ring, int k) {
  const auto& group = ring->group(k);
  std::vector<MinkowskiWeight> out;
  if (group.generator_count() == 0) return out;
  const IntMatrix kernel = integer_kernel(group.relations());
  for (std::size_t j = 0; j < kernel.cols(); ++j)
    out.emplace_back(ring, k, kernel.column(j));
  return out;
}

inline Integer evaluate(const MinkowskiWeight& c, const ChowClass& a) {
  if (!same_ring(c.ring(), a.ring())) throw FanMismatch("weight and class live on different fans");
  if (c.degree() != a.degree()) throw DegreeMismatch("weight and class degrees differ");
  Integer s = 0;
  for (std::size_t i = 0; i < c.weights().size(); ++i) s += c.weights()[i] * a.coefficients()[i];
  return s;
}

/// Polynomial in the Courant functions phi_r. Keys are sorted ray multisets.
class CourantPolynomial {
 public:
  using Monomial = std::vector<RayId>;

  CourantPolynomial() = default;
  explicit CourantPolynomial(std::shared_ptr<const Fan> fan) : fan_(std::move(fan)) {}

  static CourantPolynomial constant(std::shared_ptr<const Fan> fan, const Integer& c) {
    CourantPolynomial p(std::move(fan));
    p.add_term({}, c);
    return p;
  }
  static CourantPolynomial variable(std::shared_ptr<const Fan> fan, RayId r) {
    CourantPolynomial p(std::move(fan));
    p.add_term({r}, 1);
    return p;
  }

  void add_term(Monomial m, const Integer& c) {
    std::sort(m.begin(), m.end());
    auto& slot = terms_[m];
    slot += c;
    if (slot == 0) terms_.erase(m);
  }

  const std::map<Monomial, Integer>& terms() const { return terms_; }
  const std::shared_ptr<const Fan>& fan() const { return fan_; }

  /// Degree of a homogeneous polynomial; nullopt for mixed or zero ones.
  std::optional<int> homogeneous_degree() const {
    std::optional<int> d;
    for (const auto& [m, c] : terms_) {
      const int md = static_cast<int>(m.size());
      if (d && *d != md) return std::nullopt;
      d = md;
    }
    return d;
  }

  friend CourantPolynomial operator*(const CourantPolynomial& a, const CourantPolynomial& b) {
    CourantPolynomial p(a.fan_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        p.add_term(std::move(m), ca * cb);
      }
    return p;
  }
  friend CourantPolynomial operator+(CourantPolynomial a, const CourantPolynomial& b) {
    for (const auto& [m, c] : b.terms_) a.add_term(m, c);
    return a;
  }

 private:
  std::shared_ptr<const Fan> fan_;
  std::map<Monomial, Integer> terms_;
};

/// phi_r(p) for every ray r: the coordinate of p along u_r inside the cone
/// carrying p, zero for rays outside that cone.
inline RatVector courant_values(const Fan& f, const RatVector& p) {
  const auto carrier = carrier_cone(f, p);
  if (!carrier) throw Error("point is outside the support of the fan");
  RatVector values(f.ray_count());
  const auto x = *cone_coordinates(f, *carrier, p);
  for (std::size_t i = 0; i < carrier->size(); ++i)
    values[static_cast<std::size_t>((*carrier)[i])] = x[i];
  return values;
}

inline Rational evaluate_at(const CourantPolynomial& poly, const RatVector& p) {
  const RatVector phi = courant_values(*poly.fan(), p);
  Rational s = 0;
  for (const auto& [m, c] : poly.terms()) {
    Rational term = c;
    for (RayId r : m) term *= phi[static_cast<std::size_t>(r)];
    s += term;
  }
  return s;
}

/// Class of a homogeneous polynomial in R^*(Sigma).
inline ChowClass to_class(const RingPtr& ring, const CourantPolynomial& poly,
                          ReductionOptions options = {}) {
  const auto deg = poly.homogeneous_degree();
  if (!deg && !poly.terms().empty()) throw DegreeMismatch("polynomial is not homogeneous");
  ChowClass out(ring, deg.value_or(0));
  detail::MonomialReducer reducer(ring, options);
  for (const auto& [m, c] : poly.terms()) {
    const IntVector& r = reducer.reduce(m);
    for (std::size_t i = 0; i < r.size(); ++i) out.coefficients()[i] += c * r[i];
  }
  return out;
}

struct PiecewiseLinear {
  ChowClass cls;
  CourantPolynomial polynomial;
};

/// The piecewise linear function with the given value on each ray.
inline PiecewiseLinear pl_to_class(const RingPtr& ring, const IntVector& values) {
  const Fan& f = ring->fan();
  if (values.size() != f.ray_count()) throw Error("one value per ray required");
  CourantPolynomial poly(ring->fan_ptr());
  for (std::size_t r = 0; r < values.size(); ++r)
    if (values[r] != 0) poly.add_term({static_cast<RayId>(r)}, values[r]);
  ChowClass cls(ring, 1);
  for (std::size_t r = 0; r < values.size(); ++r)
    if (values[r] != 0) cls.add_monomial(f.id_of(Cone{static_cast<RayId>(r)}), values[r]);
  return PiecewiseLinear{std::move(cls), std::move(poly)};
}

}  // namespace tropchow
