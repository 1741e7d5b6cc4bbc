#pragma once

#include "tropchow/chow.hpp"
#include "tropchow/duality.hpp"
#include "tropchow/fan.hpp"
#include "tropchow/matroid.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <sstream>
#include <string>

// JSON formats. Emission is canonical: fixed key order, compact separators,
// integers as numbers when they fit in 64 bits and as decimal strings
// otherwise.

namespace tropchow::io {

using Json = nlohmann::ordered_json;

/// Malformed or semantically invalid input.
class InputError : public Error {
 public:
  using Error::Error;
};

inline Json to_json(const Integer& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return Json(static_cast<std::int64_t>(x));
  return Json(x.str());
}

inline Integer integer_from_json(const Json& j, const std::string& what) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return Integer(j.get<std::uint64_t>());
    return Integer(j.get<std::int64_t>());
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const bool ok = !s.empty() && s.find_first_not_of("0123456789", s[0] == '-' ? 1 : 0) == std::string::npos &&
                    s != "-";
    if (!ok) throw InputError(what + ": \"" + s + "\" is not an integer");
    return Integer(s);
  }
  throw InputError(what + ": expected an integer");
}

inline Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline IntVector vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array");
  IntVector v;
  for (std::size_t i = 0; i < j.size(); ++i)
    v.push_back(integer_from_json(j[i], what + "[" + std::to_string(i) + "]"));
  return v;
}

inline int small_int(const Json& j, const std::string& what) {
  if (!j.is_number_integer()) throw InputError(what + ": expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw InputError(what + ": out of range");
  return static_cast<int>(v);
}

inline const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(what + ": missing \"" + key + "\"");
  return *it;
}

/// Parses JSON text, reporting syntax errors by line and column.
inline Json parse(const std::string& text, const std::string& source = "input") {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                     ": malformed JSON");
  }
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

inline std::string dump(const Json& j) { return j.dump(); }

// Matroid: {"n": int, "circuits": [[...]]} or {"n": int, "bases": [[...]]}.

inline Json to_json(const Matroid& m) {
  Json circuits = Json::array();
  for (ElementSet c : m.circuits()) circuits.push_back(c.elements());
  return Json{{"n", m.ground_size()}, {"circuits", std::move(circuits)}};
}

inline Matroid matroid_from_json(const Json& j) {
  const int n = small_int(field(j, "n", "matroid"), "matroid.n");
  if (n < 0 || n > Matroid::kMaxGroundSize) throw InputError("matroid.n out of range");
  const bool has_c = j.contains("circuits");
  const bool has_b = j.contains("bases");
  if (has_c == has_b) throw InputError("matroid: exactly one of \"circuits\" and \"bases\" is required");
  const std::string key = has_c ? "circuits" : "bases";
  const Json& sets = j[key];
  if (!sets.is_array()) throw InputError("matroid." + key + ": expected an array");
  std::vector<ElementSet> out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const std::string what = "matroid." + key + "[" + std::to_string(i) + "]";
    if (!sets[i].is_array()) throw InputError(what + ": expected an array");
    ElementSet s;
    for (const auto& e : sets[i]) {
      const int x = small_int(e, what);
      if (x < 0 || x >= n) throw InputError(what + ": element " + std::to_string(x) + " outside 0.." + std::to_string(n - 1));
      if (s.contains(x)) throw InputError(what + ": repeated element " + std::to_string(x));
      s.insert(x);
    }
    out.push_back(s);
  }
  if (has_c) return Matroid(n, std::move(out));
  try {
    return Matroid::from_bases(n, out);
  } catch (const Error& e) {
    throw InputError(std::string("matroid: ") + e.what());
  }
}

// Fan: {"lattice_rank": r, "rays": [[...]], "maximal_cones": [[...]]}.

inline Json to_json(const Fan& f) {
  const Fan c = canonicalize(f);
  Json rays = Json::array();
  for (const auto& u : c.rays()) rays.push_back(to_json(u));
  Json cones = Json::array();
  for (const Cone& m : c.maximal_cones()) cones.push_back(m);
  return Json{{"lattice_rank", c.lattice_rank()}, {"rays", std::move(rays)},
              {"maximal_cones", std::move(cones)}};
}

inline Fan fan_from_json(const Json& j) {
  const int rank = small_int(field(j, "lattice_rank", "fan"), "fan.lattice_rank");
  if (rank < 0) throw InputError("fan.lattice_rank must be nonnegative");
  const Json& rays_j = field(j, "rays", "fan");
  if (!rays_j.is_array()) throw InputError("fan.rays: expected an array");
  std::vector<IntVector> rays;
  for (std::size_t i = 0; i < rays_j.size(); ++i) {
    IntVector u = vector_from_json(rays_j[i], "fan.rays[" + std::to_string(i) + "]");
    if (u.size() != static_cast<std::size_t>(rank))
      throw InputError("fan.rays[" + std::to_string(i) + "]: expected " + std::to_string(rank) +
                       " coordinates");
    rays.push_back(std::move(u));
  }
  const Json& cones_j = field(j, "maximal_cones", "fan");
  if (!cones_j.is_array()) throw InputError("fan.maximal_cones: expected an array");
  std::vector<Cone> cones;
  for (std::size_t i = 0; i < cones_j.size(); ++i) {
    const std::string what = "fan.maximal_cones[" + std::to_string(i) + "]";
    if (!cones_j[i].is_array()) throw InputError(what + ": expected an array");
    Cone c;
    for (const auto& r : cones_j[i]) {
      const int id = small_int(r, what);
      if (id < 0 || static_cast<std::size_t>(id) >= rays.size())
        throw InputError(what + ": unknown ray " + std::to_string(id));
      c.push_back(id);
    }
    cones.push_back(std::move(c));
  }
  return Fan::from_maximal_cones(static_cast<std::size_t>(rank), std::move(rays), cones);
}

// Weight: {"degree": k, "weights": [{"cone": [...], "weight": w}]}; class
// JSON is the same with "coeffs" and "coeff". Cones use the ray ids of the
// fan they live on; zero entries are omitted on output.

namespace detail {

inline Json graded_to_json(const RingPtr& ring, int degree, const IntVector& values,
                           const char* list_key, const char* value_key) {
  Json entries = Json::array();
  const auto& gens = ring->group(degree).generators();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) continue;
    entries.push_back(Json{{"cone", ring->fan().cone(gens[i])}, {value_key, to_json(values[i])}});
  }
  return Json{{"degree", degree}, {list_key, std::move(entries)}};
}

inline std::pair<int, IntVector> graded_from_json(const RingPtr& ring, const Json& j,
                                                  const char* list_key, const char* value_key) {
  const std::string kind = list_key;
  const int degree = small_int(field(j, "degree", kind), kind + ".degree");
  const auto& group = ring->group(degree);
  IntVector values(group.generator_count());
  const Json& entries = field(j, list_key, kind);
  if (!entries.is_array()) throw InputError(kind + ": expected an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string what = kind + "[" + std::to_string(i) + "]";
    const Json& cone_j = field(entries[i], "cone", what);
    if (!cone_j.is_array()) throw InputError(what + ".cone: expected an array");
    Cone c;
    for (const auto& r : cone_j) c.push_back(small_int(r, what + ".cone"));
    std::sort(c.begin(), c.end());
    if (static_cast<int>(c.size()) != degree)
      throw InputError(what + ": cone " + cone_to_string(c) + " has dimension " +
                       std::to_string(c.size()) + ", expected " + std::to_string(degree));
    const auto id = ring->fan().find(c);
    if (!id) throw InputError(what + ": cone " + cone_to_string(c) + " is not in the fan");
    values[*group.position(*id)] += integer_from_json(field(entries[i], value_key, what), what);
  }
  return {degree, std::move(values)};
}

}  // namespace detail

inline Json to_json(const MinkowskiWeight& w) {
  return detail::graded_to_json(w.ring(), w.degree(), w.weights(), "weights", "weight");
}

inline MinkowskiWeight weight_from_json(const RingPtr& ring, const Json& j) {
  auto [degree, values] = detail::graded_from_json(ring, j, "weights", "weight");
  return MinkowskiWeight(ring, degree, std::move(values));
}

inline Json to_json(const ChowClass& a) {
  return detail::graded_to_json(a.ring(), a.degree(), a.coefficients(), "coeffs", "coeff");
}

inline ChowClass class_from_json(const RingPtr& ring, const Json& j) {
  auto [degree, values] = detail::graded_from_json(ring, j, "coeffs", "coeff");
  return ChowClass(ring, degree, std::move(values));
}

// Morphism: {"source": fan, "target": fan, "matrix": [[...]]}, matrix of
// shape target rank x source rank. Fans are kept exactly as given so that
// weights can refer to their ray ids.

struct MorphismInput {
  Fan source;
  Fan target;
  IntMatrix matrix;
};

inline MorphismInput morphism_from_json(const Json& j) {
  MorphismInput m{fan_from_json(field(j, "source", "morphism")),
                  fan_from_json(field(j, "target", "morphism")), IntMatrix()};
  const Json& rows = field(j, "matrix", "morphism");
  if (!rows.is_array()) throw InputError("morphism.matrix: expected an array");
  std::vector<IntVector> r;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    r.push_back(vector_from_json(rows[i], "morphism.matrix[" + std::to_string(i) + "]"));
    if (r.back().size() != m.source.lattice_rank())
      throw InputError("morphism.matrix: rows need " + std::to_string(m.source.lattice_rank()) +
                       " entries");
  }
  if (r.size() != m.target.lattice_rank())
    throw InputError("morphism.matrix: expected " + std::to_string(m.target.lattice_rank()) + " rows");
  m.matrix = IntMatrix::from_rows(r, m.source.lattice_rank());
  return m;
}

inline Json to_json(const IntMatrix& a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(to_json(a.row(i)));
  return rows;
}

/// Fans are written as given (not canonicalized) so that cone ids in the
/// per-degree bases keep their meaning.
inline Json to_json_as_given(const Fan& f) {
  Json rays = Json::array();
  for (const auto& u : f.rays()) rays.push_back(to_json(u));
  Json cones = Json::array();
  for (const Cone& m : f.maximal_cones()) cones.push_back(m);
  return Json{{"lattice_rank", f.lattice_rank()}, {"rays", std::move(rays)},
              {"maximal_cones", std::move(cones)}};
}

inline Json to_json(const DualityCertificate& c) {
  Json degrees = Json::array();
  for (const auto& d : c.degrees) {
    Json entry{{"k", d.k}, {"rank", d.rank}, {"torsion", to_json(d.torsion)}};
    entry["pairing_det"] = d.pairing_det ? to_json(*d.pairing_det) : Json(nullptr);
    entry["pairing"] = d.pairing_det ? to_json(d.pairing) : Json(nullptr);
    degrees.push_back(std::move(entry));
  }
  Json out{{"fan", to_json_as_given(c.ring->fan())}, {"dimension", c.dimension},
           {"degrees", std::move(degrees)}};
  out["verdicts"] = Json{{"top_is_z", c.top_is_z},
                         {"all_free", c.all_free},
                         {"pairings_unimodular", c.pairings_unimodular},
                         {"vanishes_above_top", c.vanishes_above_top}};
  out["pass"] = c.pass;
  out["failure"] = c.failure ? Json(*c.failure) : Json(nullptr);
  return out;
}

}  // namespace tropchow::io
