#pragma once

#include "tropchow/bergman.hpp"
#include "tropchow/fan.hpp"
#include "tropchow/matroid.hpp"

#include <optional>
#include <string>
#include <vector>

// Named fixtures. Matroid names: U12 U13 U23 U24 U34 B2 B3 B4 K4.
// Fan names: F1 (tropical line), F2 (quadrant), F3 (permutohedral A2),
// TWO_RAYS (two rays in Z^2, no 2-cone).

namespace tropchow::catalog {

inline Matroid uniform(int r, int n) {
  std::vector<ElementSet> circuits;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t s = 1; s < limit; ++s)
    if (ElementSet(s).size() == r + 1) circuits.push_back(ElementSet(s));
  return Matroid(n, std::move(circuits));
}

inline Matroid boolean(int n) { return Matroid(n, {}); }

/// Graphic matroid of K4. Edges 0..5 are 01 02 03 12 13 23.
inline Matroid k4() {
  auto c = [](std::vector<int> e) { return ElementSet::from_vector(e); };
  return Matroid(6, {c({0, 1, 3}), c({0, 2, 4}), c({1, 2, 5}), c({3, 4, 5}),
                     c({0, 1, 4, 5}), c({0, 2, 3, 5}), c({1, 2, 3, 4})});
}

inline std::vector<std::string> matroid_names() {
  return {"U12", "U13", "U23", "U24", "U34", "B2", "B3", "B4", "K4"};
}

/// The matroids every certification run covers by default.
inline std::vector<std::string> default_matroid_names() {
  return {"U12", "U13", "U23", "U24", "U34", "B2", "B3", "K4"};
}

inline std::optional<Matroid> matroid(const std::string& name) {
  if (name == "U12") return uniform(1, 2);
  if (name == "U13") return uniform(1, 3);
  if (name == "U23") return uniform(2, 3);
  if (name == "U24") return uniform(2, 4);
  if (name == "U34") return uniform(3, 4);
  if (name == "B2") return boolean(2);
  if (name == "B3") return boolean(3);
  if (name == "B4") return boolean(4);
  if (name == "K4") return k4();
  return std::nullopt;
}

inline Fan f1() { return Fan::from_maximal_cones(2, {{1, 0}, {0, 1}, {-1, -1}}, {{0}, {1}, {2}}); }

inline Fan f2() { return Fan::from_maximal_cones(2, {{1, 0}, {0, 1}}, {{0, 1}}); }

inline Fan f3() {
  // rays: (1,0) (0,1) (-1,-1) (1,1) (0,-1) (-1,0)
  return Fan::from_maximal_cones(2, {{1, 0}, {0, 1}, {-1, -1}, {1, 1}, {0, -1}, {-1, 0}},
                                 {{0, 3}, {1, 3}, {0, 4}, {2, 4}, {1, 5}, {2, 5}});
}

inline Fan two_rays() { return Fan::from_maximal_cones(2, {{1, 0}, {0, 1}}, {{0}, {1}}); }

inline std::vector<std::string> fan_names() { return {"F1", "F2", "F3", "TWO_RAYS"}; }

inline std::optional<Fan> fan(const std::string& name) {
  if (name == "F1") return f1();
  if (name == "F2") return f2();
  if (name == "F3") return f3();
  if (name == "TWO_RAYS") return two_rays();
  if (auto m = matroid(name)) return fine_subdivision(*m);
  return std::nullopt;
}

}  // namespace tropchow::catalog
