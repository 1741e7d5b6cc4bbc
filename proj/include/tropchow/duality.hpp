#pragma once

#include "tropchow/chow.hpp"
#include "tropchow/fan.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tropchow {

class NotBalanced : public Error {
 public:
  using Error::Error;
};
class NoCertificate : public Error {
 public:
  using Error::Error;
};
class IncompatibleMorphism : public Error {
 public:
  using Error::Error;
};

/// Weight 1 on every top-dimensional cone.
inline MinkowskiWeight fundamental_weight(const RingPtr& ring) {
  const Fan& f = ring->fan();
  if (!f.is_pure()) throw NotBalanced("fan is not pure-dimensional");
  const int d = f.dimension();
  MinkowskiWeight w(ring, d, IntVector(f.cones_of_dim(d).size(), 1));
  if (!is_balanced(w)) throw NotBalanced("the all-ones top weight is not balanced");
  return w;
}

/// Values fund(x_sigma * x_tau) for sigma in Sigma(k), tau in Sigma(d-k),
/// using the all-ones top functional.
inline IntMatrix monomial_pairing_table(const RingPtr& ring, int k) {
  const Fan& f = ring->fan();
  const int d = ring->dimension();
  const auto& left = ring->group(k).generators();
  const auto& right = ring->group(d - k).generators();
  IntMatrix table(left.size(), right.size());
  detail::MonomialReducer reducer(ring, {});
  for (std::size_t i = 0; i < left.size(); ++i)
    for (std::size_t j = 0; j < right.size(); ++j) {
      std::vector<RayId> rays = f.cone(left[i]);
      const Cone& o = f.cone(right[j]);
      rays.insert(rays.end(), o.begin(), o.end());
      std::sort(rays.begin(), rays.end());
      Integer s = 0;
      for (const auto& x : reducer.reduce(rays)) s += x;
      table(i, j) = s;
    }
  return table;
}

struct DegreeCertificate {
  int k = 0;
  std::size_t rank = 0;
  IntVector torsion;
  /// Free-part basis of R^k as coefficient vectors over Sigma(k).
  std::vector<IntVector> basis;
  /// Pairing R^k x R^{d-k} -> Z in the chosen bases (empty if not computed).
  IntMatrix pairing;
  std::optional<Integer> pairing_det;
};

struct DualityCertificate {
  RingPtr ring;
  int dimension = -1;
  std::vector<DegreeCertificate> degrees;
  bool top_is_z = false;        ///< R^d free of rank one, dual to the all-ones weight
  bool all_free = false;
  bool pairings_unimodular = false;
  bool vanishes_above_top = true;
  bool pass = false;
  std::optional<std::string> failure;
};

namespace detail {

inline IntMatrix basis_matrix(const std::vector<IntVector>& basis, std::size_t width) {
  return IntMatrix::from_rows(basis, width);
}

}  // namespace detail

/// Checks the Poincare duality ring conditions directly: graded pieces free,
/// R^d = Z via the all-ones weight, and every pairing unimodular.
inline DualityCertificate certify_poincare_duality(const RingPtr& ring) {
  DualityCertificate cert;
  cert.ring = ring;
  const int d = ring->dimension();
  cert.dimension = d;
  auto fail = [&](std::string reason) {
    if (!cert.failure) cert.failure = std::move(reason);
  };
  if (d < 0) {
    fail("fan has no cones");
    return cert;
  }
  for (int k = 0; k <= d; ++k) {
    const auto& g = ring->group(k);
    DegreeCertificate dc;
    dc.k = k;
    dc.rank = g.rank();
    dc.torsion = g.torsion();
    dc.basis = g.free_basis();
    cert.degrees.push_back(std::move(dc));
  }
  // Sigma(k) is empty above the dimension, so those groups vanish.
  cert.vanishes_above_top = ring->group(d + 1).generator_count() == 0;

  const auto& top = cert.degrees.back();
  if (top.rank != 1 || !top.torsion.empty()) {
    fail("top-degree group not ℤ: R^" + std::to_string(d) + " rank " +
         std::to_string(top.rank) + (top.torsion.empty() ? "" : " with torsion") +
         ", expected rank 1 in top degree");
  } else {
    const auto mink = minkowski_weight_basis(ring, d);
    const IntVector ones(ring->group(d).generator_count(), 1);
    if (mink.size() != 1 || mink[0].weights() != ones)
      fail("top-degree group not ℤ via the all-ones weight: top Minkowski weights are not "
           "generated by the all-ones weight");
    else
      cert.top_is_z = true;
  }

  cert.all_free = true;
  for (const auto& dc : cert.degrees)
    if (!dc.torsion.empty()) {
      cert.all_free = false;
      std::string t;
      for (const auto& x : dc.torsion) t += (t.empty() ? "" : ",") + x.str();
      fail("R^" + std::to_string(dc.k) + " has torsion (" + t + ")");
    }

  if (cert.top_is_z) {
    cert.pairings_unimodular = true;
    for (int k = 0; k <= d; ++k) {
      auto& dc = cert.degrees[static_cast<std::size_t>(k)];
      const auto& dual = cert.degrees[static_cast<std::size_t>(d - k)];
      const IntMatrix table = monomial_pairing_table(ring, k);
      const IntMatrix left = detail::basis_matrix(dc.basis, ring->group(k).generator_count());
      const IntMatrix right =
          detail::basis_matrix(dual.basis, ring->group(d - k).generator_count());
      dc.pairing = left * table * right.transpose();
      if (dc.pairing.rows() != dc.pairing.cols()) {
        cert.pairings_unimodular = false;
        fail("pairing R^" + std::to_string(k) + " x R^" + std::to_string(d - k) +
             " is not square (" + std::to_string(dc.pairing.rows()) + " x " +
             std::to_string(dc.pairing.cols()) + ")");
        continue;
      }
      dc.pairing_det = determinant(dc.pairing);
      if (abs(*dc.pairing_det) != 1) {
        cert.pairings_unimodular = false;
        fail("pairing R^" + std::to_string(k) + " x R^" + std::to_string(d - k) +
             " has determinant " + dc.pairing_det->str());
      }
    }
  }
  cert.pass = cert.top_is_z && cert.all_free && cert.pairings_unimodular &&
              cert.vanishes_above_top && !cert.failure;
  return cert;
}

/// c evaluated on alpha * x_omega, for every omega of dimension deg c - deg alpha.
inline MinkowskiWeight class_action(const ChowClass& alpha, const MinkowskiWeight& c) {
  if (!same_ring(alpha.ring(), c.ring())) throw FanMismatch("class and weight on different fans");
  const RingPtr& ring = c.ring();
  const int k = c.degree() - alpha.degree();
  MinkowskiWeight out(ring, k);
  const auto& omegas = ring->group(k).generators();
  for (std::size_t i = 0; i < omegas.size(); ++i)
    out.weights()[i] = evaluate(c, multiply(alpha, monomial(ring, ring->fan().cone(omegas[i]))));
  return out;
}

/// Intersection of a piecewise linear function (values on rays) with a
/// weight, cone by cone: subtract a linear function agreeing with phi on tau
/// and sum (phi - m_tau)(u_{sigma/tau}) c(sigma) over sigma containing tau.
inline MinkowskiWeight divisor_action_direct(const RingPtr& ring, const IntVector& phi,
                                             const MinkowskiWeight& c,
                                             std::uint64_t perturbation_seed = 0) {
  const Fan& f = ring->fan();
  if (phi.size() != f.ray_count()) throw Error("one value per ray required");
  if (c.degree() < 1) throw DegreeMismatch("divisor action needs a weight of degree >= 1");
  std::mt19937_64 rng(perturbation_seed);
  const int k = c.degree();
  MinkowskiWeight out(ring, k - 1);
  const auto& taus = ring->group(k - 1).generators();
  const auto& sigmas = ring->group(k).generators();
  for (std::size_t t = 0; t < taus.size(); ++t) {
    const Cone& tau = f.cone(taus[t]);
    IntVector values;
    for (RayId r : tau) values.push_back(phi[static_cast<std::size_t>(r)]);
    IntVector m = solve_prescribed_pairings(f.generators(tau), values, f.lattice_rank());
    if (perturbation_seed != 0) {
      const IntMatrix perp = integer_kernel(IntMatrix::from_rows(f.generators(tau), f.lattice_rank()));
      for (std::size_t j = 0; j < perp.cols(); ++j) {
        const Integer shift = static_cast<long>(rng() % 11) - 5;
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += shift * perp(i, j);
      }
    }
    Integer total = 0;
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
      const Cone& sigma = f.cone(sigmas[s]);
      if (!std::includes(sigma.begin(), sigma.end(), tau.begin(), tau.end())) continue;
      RayId extra = -1;
      for (RayId r : sigma)
        if (!std::binary_search(tau.begin(), tau.end(), r)) extra = r;
      total += (phi[static_cast<std::size_t>(extra)] - dot(m, f.ray(extra))) * c.weights()[s];
    }
    out.weights()[t] = total;
  }
  return out;
}

/// Action of a homogeneous Courant polynomial through the ring.
inline MinkowskiWeight cocycle_action_ring(const RingPtr& ring, const CourantPolynomial& p,
                                           const MinkowskiWeight& c) {
  return class_action(to_class(ring, p), c);
}

/// Same action, monomial by monomial as iterated divisor actions.
inline MinkowskiWeight cocycle_action_iterated(const RingPtr& ring, const CourantPolynomial& p,
                                               const MinkowskiWeight& c) {
  const int j = p.homogeneous_degree().value_or(0);
  MinkowskiWeight out(ring, c.degree() - j);
  for (const auto& [mono, coeff] : p.terms()) {
    MinkowskiWeight w = c;
    for (RayId r : mono) {
      IntVector phi(ring->fan().ray_count());
      phi[static_cast<std::size_t>(r)] = 1;
      w = divisor_action_direct(ring, phi, w);
    }
    w *= coeff;
    out += w;
  }
  return out;
}

/// Both routes are computed and must agree.
inline MinkowskiWeight cocycle_action(const RingPtr& ring, const CourantPolynomial& p,
                                      const MinkowskiWeight& c) {
  const auto deg = p.homogeneous_degree();
  if (!deg && !p.terms().empty()) throw DegreeMismatch("polynomial is not homogeneous");
  if (deg.value_or(0) > c.degree()) throw DegreeMismatch("polynomial degree exceeds weight degree");
  MinkowskiWeight via_ring = cocycle_action_ring(ring, p, c);
  const MinkowskiWeight via_divisors = cocycle_action_iterated(ring, p, c);
  if (!(via_ring == via_divisors))
    throw std::logic_error("ring action and iterated divisor action disagree");
  return via_ring;
}

/// The unique class alpha with alpha . [Sigma] = B.
inline ChowClass cycle_to_cocycle(const DualityCertificate& cert, const MinkowskiWeight& b) {
  if (!cert.pass) throw NoCertificate("Poincare duality has not been certified for this fan");
  if (!same_ring(cert.ring, b.ring())) throw FanMismatch("weight lives on a different fan");
  const RingPtr& ring = cert.ring;
  const int d = cert.dimension;
  const int k = b.degree();
  ChowClass alpha(ring, d - k);
  if (k < 0 || k > d) return alpha;
  const auto& src = cert.degrees[static_cast<std::size_t>(d - k)];
  const auto& dst = cert.degrees[static_cast<std::size_t>(k)];
  IntVector values;
  for (const auto& basis_vec : dst.basis) values.push_back(evaluate(b, ChowClass(ring, k, basis_vec)));
  const auto a = solve_integer_system(src.pairing.transpose(), values);
  if (!a) throw std::logic_error("unimodular pairing system has no integral solution");
  for (std::size_t i = 0; i < src.basis.size(); ++i)
    for (std::size_t j = 0; j < src.basis[i].size(); ++j)
      alpha.coefficients()[j] += (*a)[i] * src.basis[i][j];
  return alpha;
}

inline MinkowskiWeight intersect_cycles(const DualityCertificate& cert, const MinkowskiWeight& a,
                                        const MinkowskiWeight& b) {
  return class_action(cycle_to_cocycle(cert, a), b);
}

/// x_delta maps to x_sigma when the minimal coarse cone sigma containing
/// delta has the same dimension, and to zero otherwise.
inline ChowClass pushforward_class(const RefinementMap& r, const RingPtr& coarse_ring,
                                   const ChowClass& alpha) {
  if (!(alpha.ring()->fan() == *r.fine)) throw FanMismatch("class is not on the fine fan");
  if (!(coarse_ring->fan() == *r.coarse)) throw FanMismatch("ring is not on the coarse fan");
  const int k = alpha.degree();
  ChowClass out(coarse_ring, k);
  const auto& gens = alpha.ring()->group(k).generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (alpha.coefficients()[i] == 0) continue;
    const ConeId sigma = r.assignment[gens[i]];
    if (static_cast<int>(r.coarse->cone(sigma).size()) == k)
      out.add_monomial(sigma, alpha.coefficients()[i]);
  }
  return out;
}

/// Courant function of a coarse ray restricted to the fine fan, as values on
/// the fine rays.
inline IntVector restricted_courant_values(const RefinementMap& r, RayId coarse_ray) {
  const Fan& fine = *r.fine;
  const Fan& coarse = *r.coarse;
  IntVector values(fine.ray_count());
  for (std::size_t i = 0; i < fine.ray_count(); ++i) {
    const ConeId sid = r.assignment[fine.id_of(Cone{static_cast<RayId>(i)})];
    const Cone& sigma = coarse.cone(sid);
    const auto pos = std::find(sigma.begin(), sigma.end(), coarse_ray);
    if (pos == sigma.end()) continue;
    const auto x = *cone_coordinates(coarse, sigma, to_rational(fine.ray(static_cast<RayId>(i))));
    values[i] = boost::multiprecision::numerator(x[static_cast<std::size_t>(pos - sigma.begin())]);
  }
  return values;
}

namespace detail {

/// Sum over square-free monomials x_tau of alpha of coeff * prod of the
/// linear forms assigned to the rays of tau, reduced in `ring`.
inline ChowClass substitute_linear_forms(const ChowClass& alpha, const std::vector<IntVector>& forms,
                                         const RingPtr& ring) {
  const Fan& src = alpha.ring()->fan();
  CourantPolynomial poly(ring->fan_ptr());
  const auto& gens = alpha.ring()->group(alpha.degree()).generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (alpha.coefficients()[i] == 0) continue;
    CourantPolynomial term = CourantPolynomial::constant(ring->fan_ptr(), alpha.coefficients()[i]);
    for (RayId rho : src.cone(gens[i])) {
      CourantPolynomial linear(ring->fan_ptr());
      const IntVector& form = forms[static_cast<std::size_t>(rho)];
      for (std::size_t j = 0; j < form.size(); ++j)
        if (form[j] != 0) linear.add_term({static_cast<RayId>(j)}, form[j]);
      term = term * linear;
    }
    poly = poly + term;
  }
  ChowClass out = to_class(ring, poly);
  if (out.degree() != alpha.degree()) return ChowClass(ring, alpha.degree());
  return out;
}

}  // namespace detail

/// Ring map R^*(coarse) -> R^*(fine) induced by restricting piecewise
/// polynomials.
inline ChowClass pullback_class(const RefinementMap& r, const RingPtr& fine_ring,
                                const ChowClass& alpha) {
  if (!(alpha.ring()->fan() == *r.coarse)) throw FanMismatch("class is not on the coarse fan");
  if (!(fine_ring->fan() == *r.fine)) throw FanMismatch("ring is not on the fine fan");
  std::vector<IntVector> forms;
  for (std::size_t rho = 0; rho < r.coarse->ray_count(); ++rho)
    forms.push_back(restricted_courant_values(r, static_cast<RayId>(rho)));
  return detail::substitute_linear_forms(alpha, forms, fine_ring);
}

/// Refinement of weighted fans.
inline MinkowskiWeight refine_weight(const RefinementMap& r, const RingPtr& fine_ring,
                                     const MinkowskiWeight& c) {
  if (!(c.ring()->fan() == *r.coarse)) throw FanMismatch("weight is not on the coarse fan");
  const int k = c.degree();
  MinkowskiWeight out(fine_ring, k);
  const auto& gens = fine_ring->group(k).generators();
  const auto& coarse_group = c.ring()->group(k);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const ConeId sigma = r.assignment[gens[i]];
    if (static_cast<int>(r.coarse->cone(sigma).size()) == k)
      out.weights()[i] = c.weights()[*coarse_group.position(sigma)];
  }
  return out;
}

/// Integral linear map between fan lattices under which every source cone
/// lands inside one target cone.
struct FanMorphism {
  std::shared_ptr<const Fan> source;
  std::shared_ptr<const Fan> target;
  IntMatrix matrix;  ///< target rank x source rank
  std::vector<ConeId> table;  ///< target cone for each source ConeId

  IntVector apply(const IntVector& v) const { return matrix * v; }
};

/// Checks a compatibility table: every source cone's generators map into its
/// assigned target cone.
inline void validate_morphism(const FanMorphism& f) {
  if (f.matrix.rows() != f.target->lattice_rank() || f.matrix.cols() != f.source->lattice_rank())
    throw IncompatibleMorphism("matrix shape does not match the lattices");
  if (f.table.size() != f.source->cones().size())
    throw IncompatibleMorphism("compatibility table has the wrong size");
  for (ConeId s = 0; s < f.table.size(); ++s) {
    const Cone& target_cone = f.target->cone(f.table[s]);
    for (RayId r : f.source->cone(s))
      if (!cone_contains(*f.target, target_cone, to_rational(f.apply(f.source->ray(r)))))
        throw IncompatibleMorphism("image of source cone " + cone_to_string(f.source->cone(s)) +
                                   " is not inside target cone " + cone_to_string(target_cone));
  }
}

/// Builds the compatibility table from the minimal target cone containing the
/// image of each source cone.
inline FanMorphism make_fan_morphism(std::shared_ptr<const Fan> source,
                                     std::shared_ptr<const Fan> target, IntMatrix matrix) {
  FanMorphism f{std::move(source), std::move(target), std::move(matrix), {}};
  if (f.matrix.rows() != f.target->lattice_rank() || f.matrix.cols() != f.source->lattice_rank())
    throw IncompatibleMorphism("matrix shape does not match the lattices");
  for (const Cone& c : f.source->cones()) {
    const auto carrier = carrier_cone(*f.target, to_rational(f.apply(barycenter(*f.source, c))));
    if (!carrier)
      throw IncompatibleMorphism("image of source cone " + cone_to_string(c) +
                                 " leaves the target support");
    f.table.push_back(f.target->id_of(*carrier));
  }
  validate_morphism(f);
  return f;
}

/// Pull-back of cycles along f relative to the source cycle A: the cocycle
/// dual to B is pulled back to the source and applied to A.
inline MinkowskiWeight pullback_cycle(const FanMorphism& f, const DualityCertificate& target_cert,
                                      const MinkowskiWeight& a, const MinkowskiWeight& b) {
  validate_morphism(f);
  if (!(a.ring()->fan() == *f.source)) throw FanMismatch("A is not a weight on the source fan");
  if (!(target_cert.ring->fan() == *f.target))
    throw FanMismatch("certificate is not for the target fan");
  const ChowClass c = cycle_to_cocycle(target_cert, b);
  const Fan& src = *f.source;
  const Fan& tgt = *f.target;
  // forms[rho'][rho] = phi_{rho'}(f(u_rho))
  std::vector<IntVector> forms(tgt.ray_count(), IntVector(src.ray_count()));
  for (std::size_t rho = 0; rho < src.ray_count(); ++rho) {
    const ConeId sid = src.id_of(Cone{static_cast<RayId>(rho)});
    const Cone& tau = tgt.cone(f.table[sid]);
    const auto x = *cone_coordinates(tgt, tau, to_rational(f.apply(src.ray(static_cast<RayId>(rho)))));
    for (std::size_t i = 0; i < tau.size(); ++i)
      forms[static_cast<std::size_t>(tau[i])][rho] = boost::multiprecision::numerator(x[i]);
  }
  const ChowClass pulled = detail::substitute_linear_forms(c, forms, a.ring());
  return class_action(pulled, a);
}

}  // namespace tropchow
