// Command-line front end. Exit codes: 0 success, 1 a mathematical verdict
// failed, 2 bad input, 3 internal error.

#include "tropchow/batch.hpp"
#include "tropchow/catalog.hpp"
#include "tropchow/io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace tropchow;
using io::Json;

namespace {

enum class Format { Json, Table };

struct Globals {
  Format format = Format::Json;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out_path;
};

class Output {
 public:
  explicit Output(const Globals& g) : g_(g) {}

  void emit(const std::string& text) {
    if (g_.out_path.empty()) {
      std::cout << text << '\n';
      return;
    }
    std::ofstream f(g_.out_path, std::ios::binary);
    if (!f) throw io::InputError(g_.out_path + ": cannot write file");
    f << text << '\n';
  }

  /// JSON in json mode, or the given table text in table mode.
  void report(const Json& j, const std::string& table) {
    emit(g_.format == Format::Json ? io::dump(j) : table);
  }

  /// Data without a tabular form is always JSON.
  void data(const Json& j) { emit(io::dump(j)); }

 private:
  const Globals& g_;
};

Matroid load_matroid(const std::string& path) {
  Matroid m = io::matroid_from_json(io::read_file(path));
  if (auto bad = validate_matroid(m)) throw io::InputError(path + ": invalid matroid: " + *bad);
  return m;
}

Fan load_fan(const std::string& path) {
  Fan f = io::fan_from_json(io::read_file(path));
  if (auto bad = validate_fan(f)) throw io::InputError(path + ": invalid fan: " + *bad);
  return f;
}

Cone parse_cone(const std::string& text) {
  Cone c;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      c.push_back(v);
    } catch (const std::exception&) {
      throw io::InputError("cone: '" + item + "' is not a ray id");
    }
  }
  std::sort(c.begin(), c.end());
  return c;
}

RatVector parse_point(const std::string& text) {
  RatVector p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      p.push_back(parse_rational(item));
    } catch (const Error& e) {
      throw io::InputError(std::string("point: ") + e.what());
    }
  }
  return p;
}

Json cone_json(const Cone& c) { return Json(c); }

std::string join(const IntVector& v, const char* sep = " ") {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : sep) + x.str();
  return s;
}

std::string certificate_table(const DualityCertificate& c) {
  std::ostringstream os;
  os << "dimension " << c.dimension << '\n';
  os << std::left << std::setw(5) << "k" << std::setw(7) << "rank" << std::setw(12) << "torsion"
     << "pairing det\n";
  for (const auto& d : c.degrees) {
    os << std::setw(5) << d.k << std::setw(7) << d.rank << std::setw(12)
       << (d.torsion.empty() ? "-" : join(d.torsion, ","))
       << (d.pairing_det ? d.pairing_det->str() : "-") << '\n';
  }
  os << (c.pass ? "PASS" : "FAIL: " + c.failure.value_or("?"));
  return os.str();
}

std::string batch_table(const BatchReport& r, bool timings) {
  std::ostringstream os;
  os << "seed " << r.seed << "  depth " << r.depth << '\n';
  for (const auto& e : r.entries) {
    os << e.name << "  (item seed " << e.seed << ")  " << (e.pass() ? "PASS" : "FAIL") << '\n';
    if (e.error) os << "  error: " << *e.error << '\n';
    for (const auto& s : e.stages) {
      std::string ranks, dets;
      for (auto x : s.ranks) ranks += (ranks.empty() ? "" : ",") + std::to_string(x);
      for (const auto& d : s.pairing_dets) dets += (dets.empty() ? "" : ",") + (d ? d->str() : "-");
      os << "  " << std::left << std::setw(44) << s.label << " rays " << std::setw(4) << s.rays
         << " ranks (" << ranks << ") dets (" << dets << ")";
      if (timings) os << " " << std::fixed << std::setprecision(3) << s.seconds << "s";
      os << (s.pass ? "" : "  FAIL: " + s.failure.value_or("?")) << '\n';
    }
  }
  os << (r.pass() ? "all passed" : "failures present");
  return os.str();
}

std::string verdict_table(bool ok, const std::optional<std::string>& reason) {
  return ok ? "valid" : "invalid: " + reason.value_or("?");
}

Json verdict_json(bool ok, const std::optional<std::string>& reason) {
  return Json{{"valid", ok}, {"reason", reason ? Json(*reason) : Json(nullptr)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral Chow rings, Minkowski weights and Poincare duality certificates for "
               "smooth fans on tropical linear spaces."};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Globals g;
  std::string format = "json";
  app.add_option("--output", format, "Report format")
      ->check(CLI::IsMember({"json", "table"}))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads for batch runs")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out_path, "Write the result to this file instead of stdout");

  int exit_code = 0;
  std::function<void()> action;
  Output out(g);
  auto bind = [&](CLI::App* cmd, std::function<void()> fn) { cmd->callback([&, fn] { action = fn; }); };

  // matroid
  auto* matroid = app.add_subcommand("matroid", "Matroid operations");
  matroid->require_subcommand(1);
  {
    static std::string path;
    auto* validate = matroid->add_subcommand("validate", "Check the circuit axioms (exit 1 if violated)");
    validate->add_option("matroid", path, "Matroid JSON")->required();
    bind(validate, [&] {
      const Matroid m = io::matroid_from_json(io::read_file(path));
      const auto bad = validate_matroid(m);
      out.report(verdict_json(!bad, bad), verdict_table(!bad, bad));
      if (bad) exit_code = 1;
    });
    static std::string flats_path;
    auto* flats = matroid->add_subcommand("flats", "List the proper nonempty flats with their ranks");
    flats->add_option("matroid", flats_path, "Matroid JSON")->required();
    bind(flats, [&] {
      const Matroid m = load_matroid(flats_path);
      Json list = Json::array();
      std::string table;
      for (ElementSet f : proper_flats(m)) {
        list.push_back(Json{{"flat", f.elements()}, {"rank", rank_of_subset(m, f)}});
        table += "rank " + std::to_string(rank_of_subset(m, f)) + "  " + cone_to_string(f.elements()) + "\n";
      }
      if (!table.empty()) table.pop_back();
      out.report(Json{{"flats", list}}, table);
    });
    static std::string m1_path, m2_path;
    static int p1 = 0, p2 = 0;
    auto* parallel = matroid->add_subcommand("parallel", "Parallel connection along p1 ~ p2");
    parallel->add_option("m1", m1_path, "First matroid JSON")->required();
    parallel->add_option("p1", p1, "Basepoint in the first matroid")->required();
    parallel->add_option("m2", m2_path, "Second matroid JSON")->required();
    parallel->add_option("p2", p2, "Basepoint in the second matroid")->required();
    bind(parallel, [&] {
      const Matroid a = load_matroid(m1_path);
      const Matroid b = load_matroid(m2_path);
      out.data(io::to_json(parallel_connection(a, p1, b, p2)));
    });
  }

  // bergman
  auto* bergman = app.add_subcommand("bergman", "Bergman fans of matroids");
  bergman->require_subcommand(1);
  {
    static std::string path;
    auto* build = bergman->add_subcommand("build", "Fine subdivision of the tropical linear space");
    build->add_option("matroid", path, "Matroid JSON")->required();
    bind(build, [&] { out.data(io::to_json(fine_subdivision(load_matroid(path)))); });
    static std::string cpath, point;
    auto* contains = bergman->add_subcommand("contains", "Membership of a point, e.g. \"1,0,-1/2\"");
    contains->add_option("matroid", cpath, "Matroid JSON")->required();
    contains->add_option("point", point, "Comma-separated rationals, one per element")->required();
    bind(contains, [&] {
      const Matroid m = load_matroid(cpath);
      const RatVector p = parse_point(point);
      if (p.size() != static_cast<std::size_t>(m.ground_size()))
        throw io::InputError("point: expected " + std::to_string(m.ground_size()) + " coordinates");
      out.emit(linear_space_contains(m, p) ? "true" : "false");
    });
  }

  // fan
  auto* fan = app.add_subcommand("fan", "Fan operations");
  fan->require_subcommand(1);
  {
    static std::string path;
    auto* validate = fan->add_subcommand("validate", "Check primitivity, closure, intersections and smoothness (exit 1 if violated)");
    validate->add_option("fan", path, "Fan JSON")->required();
    bind(validate, [&] {
      const Fan f = io::fan_from_json(io::read_file(path));
      const auto bad = validate_fan(f);
      out.report(verdict_json(!bad, bad), verdict_table(!bad, bad));
      if (bad) exit_code = 1;
    });
    static std::string spath, scone;
    auto* star_cmd = fan->add_subcommand("star", "Star of the fan at a cone");
    star_cmd->add_option("fan", spath, "Fan JSON")->required();
    star_cmd->add_option("--cone", scone, "Ray ids, comma-separated")->required();
    bind(star_cmd, [&] { out.data(io::to_json(star(load_fan(spath), parse_cone(scone)))); });
    static std::string tpath, tcone;
    auto* stellar = fan->add_subcommand("stellar", "Stellar subdivision at a cone");
    stellar->add_option("fan", tpath, "Fan JSON")->required();
    stellar->add_option("--cone", tcone, "Ray ids, comma-separated")->required();
    bind(stellar, [&] { out.data(io::to_json(stellar_subdivision(load_fan(tpath), parse_cone(tcone)))); });
    static std::string fine_path, coarse_path;
    auto* refine = fan->add_subcommand("refine", "Minimal coarse cone of every fine cone (exit 1 if not a refinement)");
    refine->add_option("fine", fine_path, "Fine fan JSON")->required();
    refine->add_option("coarse", coarse_path, "Coarse fan JSON")->required();
    bind(refine, [&] {
      auto fine = std::make_shared<const Fan>(load_fan(fine_path));
      auto coarse = std::make_shared<const Fan>(load_fan(coarse_path));
      try {
        const RefinementMap r = refinement_map(fine, coarse);
        Json list = Json::array();
        std::string table;
        for (ConeId c = 0; c < fine->cones().size(); ++c) {
          list.push_back(Json{{"cone", cone_json(fine->cone(c))}, {"target", cone_json(r.target(c))}});
          table += cone_to_string(fine->cone(c)) + " -> " + cone_to_string(r.target(c)) + "\n";
        }
        if (!table.empty()) table.pop_back();
        out.report(Json{{"refines", true}, {"assignment", list}}, table);
      } catch (const NotARefinement& e) {
        out.report(Json{{"refines", false}, {"reason", e.what()}}, std::string("not a refinement: ") + e.what());
        exit_code = 1;
      }
    });
  }

  // chow
  auto* chow = app.add_subcommand("chow", "Chow groups and Minkowski weights");
  chow->require_subcommand(1);
  {
    static std::string path;
    auto* ranks = chow->add_subcommand("ranks", "Rank and torsion of every graded piece");
    ranks->add_option("fan", path, "Fan JSON")->required();
    bind(ranks, [&] {
      const RingPtr ring = ChowRing::create(load_fan(path));
      Json degrees = Json::array();
      std::string table = "k    rank  torsion";
      for (int k = 0; k <= ring->dimension(); ++k) {
        const auto& grp = ring->group(k);
        degrees.push_back(Json{{"k", k}, {"rank", grp.rank()}, {"torsion", io::to_json(grp.torsion())}});
        std::ostringstream row;
        row << '\n' << std::left << std::setw(5) << k << std::setw(6) << grp.rank()
            << (grp.torsion().empty() ? "-" : join(grp.torsion(), ","));
        table += row.str();
      }
      out.report(Json{{"dimension", ring->dimension()}, {"degrees", degrees}}, table);
    });
    static std::string wpath;
    static int degree = 0;
    auto* weights = chow->add_subcommand("weights", "Basis of the Minkowski weights of one degree");
    weights->add_option("fan", wpath, "Fan JSON")->required();
    weights->add_option("--degree", degree, "Degree k")->required();
    bind(weights, [&] {
      const RingPtr ring = ChowRing::create(load_fan(wpath));
      if (degree < 0) throw io::InputError("--degree must be nonnegative");
      Json basis = Json::array();
      for (const auto& w : minkowski_weight_basis(ring, degree)) basis.push_back(io::to_json(w));
      out.data(Json{{"degree", degree}, {"basis", basis}});
    });
  }

  // duality
  auto* duality = app.add_subcommand("duality", "Poincare duality certificates and cycle calculus");
  duality->require_subcommand(1);
  {
    auto certified = [](const std::string& path) {
      const DualityCertificate c = certify_poincare_duality(ChowRing::create(load_fan(path)));
      if (!c.pass) throw NoCertificate(path + ": fan fails certification: " + c.failure.value_or("?"));
      return c;
    };
    static std::string path;
    auto* certify = duality->add_subcommand("certify", "Certify that the Chow ring is a Poincare duality ring (exit 1 if not)");
    certify->add_option("fan", path, "Fan JSON")->required();
    bind(certify, [&] {
      const auto c = certify_poincare_duality(ChowRing::create(load_fan(path)));
      out.report(io::to_json(c), certificate_table(c));
      if (!c.pass) exit_code = 1;
    });
    static std::string afan, aclass, aweight;
    auto* act = duality->add_subcommand("act", "Cap a class with a weight");
    act->add_option("fan", afan, "Fan JSON")->required();
    act->add_option("class", aclass, "Class JSON")->required();
    act->add_option("weight", aweight, "Weight JSON")->required();
    bind(act, [&] {
      const RingPtr ring = ChowRing::create(load_fan(afan));
      const ChowClass a = io::class_from_json(ring, io::read_file(aclass));
      const MinkowskiWeight c = io::weight_from_json(ring, io::read_file(aweight));
      if (!is_balanced(c)) throw io::InputError(aweight + ": weight is not balanced");
      if (a.degree() > c.degree()) throw io::InputError("class degree exceeds weight degree");
      out.data(io::to_json(class_action(a, c)));
    });
    static std::string ifan, iweight;
    auto* invert = duality->add_subcommand("invert", "The class whose cap with the fundamental weight is B");
    invert->add_option("fan", ifan, "Fan JSON")->required();
    invert->add_option("weight", iweight, "Weight JSON")->required();
    bind(invert, [&] {
      const auto c = certified(ifan);
      const MinkowskiWeight b = io::weight_from_json(c.ring, io::read_file(iweight));
      if (!is_balanced(b)) throw io::InputError(iweight + ": weight is not balanced");
      out.data(io::to_json(cycle_to_cocycle(c, b)));
    });
    static std::string xfan, xa, xb;
    auto* intersect = duality->add_subcommand("intersect", "Intersection product of two weights");
    intersect->add_option("fan", xfan, "Fan JSON")->required();
    intersect->add_option("A", xa, "Weight JSON")->required();
    intersect->add_option("B", xb, "Weight JSON")->required();
    bind(intersect, [&] {
      const auto c = certified(xfan);
      const MinkowskiWeight a = io::weight_from_json(c.ring, io::read_file(xa));
      const MinkowskiWeight b = io::weight_from_json(c.ring, io::read_file(xb));
      if (!is_balanced(a) || !is_balanced(b)) throw io::InputError("weights must be balanced");
      if (a.degree() + b.degree() < c.dimension) throw io::InputError("degrees of A and B sum below the dimension");
      out.data(io::to_json(intersect_cycles(c, a, b)));
    });
    static std::string mpath, ma, mb;
    auto* pullback = duality->add_subcommand("pullback", "Pull back B along a morphism relative to A");
    pullback->add_option("morphism", mpath, "Morphism JSON")->required();
    pullback->add_option("A", ma, "Weight JSON on the source fan")->required();
    pullback->add_option("B", mb, "Weight JSON on the target fan")->required();
    bind(pullback, [&] {
      io::MorphismInput in = io::morphism_from_json(io::read_file(mpath));
      for (const Fan* f : {&in.source, &in.target})
        if (auto bad = validate_fan(*f)) throw io::InputError(mpath + ": invalid fan: " + *bad);
      auto src = std::make_shared<const Fan>(std::move(in.source));
      auto tgt = std::make_shared<const Fan>(std::move(in.target));
      const FanMorphism f = make_fan_morphism(src, tgt, in.matrix);
      const auto cert = certify_poincare_duality(ChowRing::create(tgt));
      if (!cert.pass) throw NoCertificate("target fan fails certification: " + cert.failure.value_or("?"));
      const MinkowskiWeight a = io::weight_from_json(ChowRing::create(src), io::read_file(ma));
      const MinkowskiWeight b = io::weight_from_json(cert.ring, io::read_file(mb));
      if (!is_balanced(a) || !is_balanced(b)) throw io::InputError("weights must be balanced");
      out.data(io::to_json(pullback_cycle(f, cert, a, b)));
    });
  }

  // catalog
  auto* catalog_cmd = app.add_subcommand("catalog", "Built-in matroids and fans");
  catalog_cmd->require_subcommand(1);
  {
    auto* list = catalog_cmd->add_subcommand("list", "Names of the built-in fixtures");
    bind(list, [&] {
      Json fans = catalog::fan_names();
      Json matroids = catalog::matroid_names();
      std::string table = "matroids:";
      for (const auto& n : catalog::matroid_names()) table += " " + n;
      table += "\nfans:";
      for (const auto& n : catalog::fan_names()) table += " " + n;
      out.report(Json{{"matroids", matroids}, {"fans", fans}}, table);
    });
    static std::string name;
    static bool as_matroid = false;
    auto* emit = catalog_cmd->add_subcommand("emit", "Canonical JSON of a fixture; a matroid name gives its Bergman fan");
    emit->add_option("name", name, "Fixture name")->required();
    emit->add_flag("--matroid", as_matroid, "Emit the matroid itself");
    bind(emit, [&] {
      if (as_matroid) {
        const auto m = catalog::matroid(name);
        if (!m) throw io::InputError("unknown matroid '" + name + "'");
        out.data(io::to_json(*m));
        return;
      }
      const auto f = catalog::fan(name);
      if (!f) throw io::InputError("unknown fixture '" + name + "'");
      out.data(io::to_json(*f));
    });
  }

  // batch
  {
    static std::vector<std::string> files;
    static int depth = 0;
    static bool with_catalog = false, timings = false;
    auto* batch = app.add_subcommand("batch", "Certify Bergman fans, seeded stellar subdivisions and stars (exit 1 on any failure)");
    batch->add_option("matroids", files, "Matroid JSON files");
    batch->add_option("--depth", depth, "Stellar subdivisions per matroid")->check(CLI::NonNegativeNumber);
    batch->add_flag("--catalog", with_catalog, "Include the built-in matroids");
    batch->add_flag("--timings", timings, "Report timings (breaks byte stability)");
    bind(batch, [&] {
      std::vector<BatchItem> items;
      if (with_catalog)
        for (const auto& n : catalog::default_matroid_names()) items.push_back({n, *catalog::matroid(n)});
      for (const auto& f : files) {
        try {
          items.push_back({f, io::matroid_from_json(io::read_file(f)), std::nullopt});
        } catch (const io::InputError& e) {
          items.push_back({f, Matroid(0, {}), e.what()});
        }
      }
      const BatchReport r = batch_certify(items, BatchOptions{depth, g.seed, g.jobs});
      out.report(to_json(r, timings), batch_table(r, timings));
      if (!r.pass()) exit_code = 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  g.format = format == "table" ? Format::Table : Format::Json;

  try {
    if (action) action();
  } catch (const io::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NoCertificate& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
  return exit_code;
}
