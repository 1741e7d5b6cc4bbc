#pragma once

#include "tropchow/bergman.hpp"
#include "tropchow/duality.hpp"
#include "tropchow/io.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace tropchow {

struct BatchItem {
  std::string name;
  Matroid matroid;
  std::optional<std::string> load_error;  ///< set when the input could not be read
};

/// One certified fan: the Bergman fan, one of its subdivisions, or a star.
struct BatchStage {
  std::string label;  ///< "base", "stellar {..}", "star {..}"
  std::size_t rays = 0;
  int dimension = -1;
  std::vector<std::size_t> ranks;
  std::vector<IntVector> torsion;
  std::vector<std::optional<Integer>> pairing_dets;
  bool pass = false;
  std::optional<std::string> failure;
  double seconds = 0;
};

struct BatchEntry {
  std::string name;
  std::uint64_t seed = 0;  ///< per-item seed derived from the batch seed
  std::vector<BatchStage> stages;
  std::optional<std::string> error;  ///< the item could not be processed
  bool pass() const {
    if (error) return false;
    for (const auto& s : stages)
      if (!s.pass) return false;
    return true;
  }
};

struct BatchReport {
  std::uint64_t seed = 0;
  int depth = 0;
  std::vector<BatchEntry> entries;
  bool pass() const {
    for (const auto& e : entries)
      if (!e.pass()) return false;
    return true;
  }
};

struct BatchOptions {
  int depth = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  int stars_per_stage = 1;
};

namespace detail {

/// FNV-1a of the item name mixed with the batch seed, so the randomness of an
/// item does not depend on its position or on scheduling.
inline std::uint64_t item_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : name) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h ^ (seed * 0x9E3779B97F4A7C15ULL);
}

inline BatchStage certify_stage(const std::string& label, const Fan& f) {
  const auto start = std::chrono::steady_clock::now();
  BatchStage s;
  s.label = label;
  s.rays = f.ray_count();
  s.dimension = f.dimension();
  const auto cert = certify_poincare_duality(ChowRing::create(f));
  for (const auto& d : cert.degrees) {
    s.ranks.push_back(d.rank);
    s.torsion.push_back(d.torsion);
    s.pairing_dets.push_back(d.pairing_det);
  }
  s.pass = cert.pass;
  s.failure = cert.failure;
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

inline const Cone* pick_cone(const Fan& f, std::mt19937_64& rng, std::size_t min_dim) {
  std::vector<const Cone*> pool;
  for (const Cone& c : f.cones())
    if (c.size() >= min_dim) pool.push_back(&c);
  if (pool.empty()) return nullptr;
  return pool[static_cast<std::size_t>(rng() % pool.size())];
}

inline BatchEntry run_item(const BatchItem& item, const BatchOptions& options) {
  BatchEntry e;
  e.name = item.name;
  e.seed = item_seed(options.seed, item.name);
  std::mt19937_64 rng(e.seed);
  try {
    if (item.load_error) throw Error(*item.load_error);
    if (auto bad = validate_matroid(item.matroid)) throw Error("invalid matroid: " + *bad);
    Fan f = fine_subdivision(item.matroid);
    auto certify_with_stars = [&](const std::string& label) {
      e.stages.push_back(certify_stage(label, f));
      for (int i = 0; i < options.stars_per_stage; ++i) {
        const Cone* c = pick_cone(f, rng, 1);
        if (!c) break;
        e.stages.push_back(certify_stage(label + " / star " + cone_to_string(*c), star(f, *c)));
      }
    };
    certify_with_stars("base");
    for (int step = 0; step < options.depth; ++step) {
      const Cone* c = pick_cone(f, rng, 2);
      if (!c) break;  // no cone of dimension two: every stellar subdivision is trivial
      const std::string label = "stellar " + cone_to_string(*c) + " (ray " + std::to_string(f.ray_count()) + ")";
      f = stellar_subdivision(f, *c);
      certify_with_stars(label);
    }
  } catch (const std::exception& ex) {
    e.error = ex.what();
  }
  return e;
}

}  // namespace detail

/// Certifies the Bergman fan of each matroid, `depth` seeded stellar
/// subdivisions of it, and stars of random cones. Items may run concurrently;
/// the report keeps input order.
inline BatchReport batch_certify(const std::vector<BatchItem>& items, const BatchOptions& options) {
  if (options.depth < 0) throw Error("depth must be nonnegative");
  BatchReport report;
  report.seed = options.seed;
  report.depth = options.depth;
  report.entries.resize(items.size());
  const unsigned jobs = std::max(1U, std::min<unsigned>(options.jobs, static_cast<unsigned>(items.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++)
      report.entries[i] = detail::run_item(items[i], options);
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return report;
}

inline io::Json to_json(const BatchReport& r, bool with_timings = false) {
  using io::Json;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json stages = Json::array();
    for (const auto& s : e.stages) {
      Json dets = Json::array();
      for (const auto& d : s.pairing_dets) dets.push_back(d ? io::to_json(*d) : Json(nullptr));
      Json torsion = Json::array();
      for (const auto& t : s.torsion) torsion.push_back(io::to_json(t));
      Json st{{"label", s.label}, {"rays", s.rays},           {"dimension", s.dimension},
              {"ranks", s.ranks}, {"torsion", torsion},      {"pairing_dets", dets},
              {"pass", s.pass},   {"failure", s.failure ? Json(*s.failure) : Json(nullptr)}};
      if (with_timings) st["seconds"] = s.seconds;
      stages.push_back(std::move(st));
    }
    entries.push_back(Json{{"name", e.name},
                           {"seed", e.seed},
                           {"pass", e.pass()},
                           {"error", e.error ? Json(*e.error) : Json(nullptr)},
                           {"stages", std::move(stages)}});
  }
  return Json{{"seed", r.seed}, {"depth", r.depth}, {"pass", r.pass()}, {"entries", std::move(entries)}};
}

}  // namespace tropchow
