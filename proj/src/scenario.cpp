#include "mrc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace mrc::cli {

using json = nlohmann::json;
using namespace geometry;

namespace {

constexpr double kUnitTol = 1e-12;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ScenarioError(field + ": " + what);
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "document" : path, "must be an object");
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                [&](const char* a) { return item.key() == a; });
    if (!ok) fail(join(path, item.key()), "unknown key");
  }
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(path, "must be finite");
  return d;
}

int get_int(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
  }
  fail(path, "must be an integer");
}

bool get_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "must be true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "must be a string");
  return v.get<std::string>();
}

Vec3 get_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) fail(path, "must be an array of 3 numbers");
  return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]"),
          get_number(v[2], path + "[2]")};
}

ParamRange get_range(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) fail(path, "must be an array [lo, hi]");
  return {get_number(v[0], path + "[0]"), get_number(v[1], path + "[1]")};
}

std::vector<Vec3> get_points(const json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "must be an array of 3-vectors");
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_vec3(v[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json points_json(const std::vector<Vec3>& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(vec_json(p));
  return a;
}

const char* patch_kind_name(PatchSpec::Kind k) {
  switch (k) {
    case PatchSpec::Kind::SpherePatch: return "sphere";
    case PatchSpec::Kind::EllipsoidPatch: return "ellipsoid";
    case PatchSpec::Kind::Plane: return "plane";
    case PatchSpec::Kind::Cylinder: return "cylinder";
  }
  return "sphere";
}

PatchSpec parse_patch(const json& j, const std::string& path) {
  reject_unknown(j, path, {"kind", "parameter", "axis", "origin", "range1", "range2"});
  PatchSpec p;
  if (!j.contains("kind")) fail(join(path, "kind"), "is required");
  const std::string kind = get_string(j["kind"], join(path, "kind"));
  if (kind == "sphere") {
    p.kind = PatchSpec::Kind::SpherePatch;
  } else if (kind == "ellipsoid") {
    p.kind = PatchSpec::Kind::EllipsoidPatch;
  } else if (kind == "plane") {
    p.kind = PatchSpec::Kind::Plane;
  } else if (kind == "cylinder") {
    p.kind = PatchSpec::Kind::Cylinder;
  } else {
    fail(join(path, "kind"), "must be one of sphere, ellipsoid, plane, cylinder");
  }
  if (j.contains("parameter")) p.parameter = get_number(j["parameter"], join(path, "parameter"));
  if (j.contains("axis")) p.axis = get_int(j["axis"], join(path, "axis"));
  if (j.contains("origin")) p.origin = get_vec3(j["origin"], join(path, "origin"));
  if (j.contains("range1")) p.range1 = get_range(j["range1"], join(path, "range1"));
  if (j.contains("range2")) p.range2 = get_range(j["range2"], join(path, "range2"));
  return p;
}

ObstacleDescriptor parse_geometry(const json& g) {
  if (!g.is_object()) fail("geometry", "must be an object");
  if (!g.contains("type")) fail("geometry.type", "is required");
  const std::string type = get_string(g["type"], "geometry.type");
  if (type == "sphere") {
    reject_unknown(g, "geometry", {"type", "radius"});
    SphereSpec s;
    if (g.contains("radius")) s.radius = get_number(g["radius"], "geometry.radius");
    return s;
  }
  if (type == "ellipsoid") {
    reject_unknown(g, "geometry", {"type", "b"});
    EllipsoidSpec s;
    if (g.contains("b")) s.b = get_number(g["b"], "geometry.b");
    return s;
  }
  if (type == "cube") {
    reject_unknown(g, "geometry", {"type", "half_side"});
    CubeSpec s;
    if (g.contains("half_side")) s.half_side = get_number(g["half_side"], "geometry.half_side");
    return s;
  }
  if (type == "dumbbell") {
    reject_unknown(g, "geometry", {"type", "sphere_radius", "center_offset", "neck_radius",
                                   "neck_halfheight", "trim"});
    DumbbellSpec s;
    if (g.contains("sphere_radius")) {
      s.sphere_radius = get_number(g["sphere_radius"], "geometry.sphere_radius");
    }
    if (g.contains("center_offset")) {
      s.center_offset = get_number(g["center_offset"], "geometry.center_offset");
    }
    if (g.contains("neck_radius")) {
      s.neck_radius = get_number(g["neck_radius"], "geometry.neck_radius");
    }
    if (g.contains("neck_halfheight")) {
      s.neck_halfheight = get_number(g["neck_halfheight"], "geometry.neck_halfheight");
    }
    if (g.contains("trim")) s.trim = get_bool(g["trim"], "geometry.trim");
    return s;
  }
  if (type == "patches") {
    reject_unknown(g, "geometry", {"type", "patches", "trim"});
    PatchListSpec s;
    if (!g.contains("patches") || !g["patches"].is_array()) {
      fail("geometry.patches", "must be an array of patches");
    }
    for (std::size_t i = 0; i < g["patches"].size(); ++i) {
      s.patches.push_back(
          parse_patch(g["patches"][i], "geometry.patches[" + std::to_string(i) + "]"));
    }
    if (s.patches.empty()) fail("geometry.patches", "must not be empty");
    if (g.contains("trim")) s.trim = get_bool(g["trim"], "geometry.trim");
    return s;
  }
  fail("geometry.type", "must be one of sphere, ellipsoid, cube, dumbbell, patches");
}

json geometry_json(const ObstacleDescriptor& d) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphereSpec>) {
          return {{"type", "sphere"}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, EllipsoidSpec>) {
          return {{"type", "ellipsoid"}, {"b", s.b}};
        } else if constexpr (std::is_same_v<T, CubeSpec>) {
          return {{"type", "cube"}, {"half_side", s.half_side}};
        } else if constexpr (std::is_same_v<T, DumbbellSpec>) {
          return {{"type", "dumbbell"},          {"sphere_radius", s.sphere_radius},
                  {"center_offset", s.center_offset}, {"neck_radius", s.neck_radius},
                  {"neck_halfheight", s.neck_halfheight}, {"trim", s.trim}};
        } else {
          json patches = json::array();
          for (const auto& p : s.patches) {
            patches.push_back({{"kind", patch_kind_name(p.kind)},
                               {"parameter", p.parameter},
                               {"axis", p.axis},
                               {"origin", vec_json(p.origin)},
                               {"range1", {p.range1.lo, p.range1.hi}},
                               {"range2", {p.range2.lo, p.range2.hi}}});
          }
          return {{"type", "patches"}, {"patches", patches}, {"trim", s.trim}};
        }
      },
      d);
}

GridResolution parse_resolution(const json& j, const std::string& path) {
  reject_unknown(j, path, {"n1", "n2"});
  GridResolution r;
  if (j.contains("n1")) r.n1 = get_int(j["n1"], join(path, "n1"));
  if (j.contains("n2")) r.n2 = get_int(j["n2"], join(path, "n2"));
  return r;
}

void check_resolution(const GridResolution& r, const std::string& path) {
  if (r.n1 % 2 != 0) fail(join(path, "n1"), "must be even");
  if (r.n2 % 2 != 0) fail(join(path, "n2"), "must be even");
  if (r.n1 < 2) fail(join(path, "n1"), "must be >= 2");
  if (r.n2 < 2) fail(join(path, "n2"), "must be >= 2");
}

std::string location(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  // nlohmann reports the byte just past the offending token
  if (col > 1) --col;
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

SolveOptions Scenario::solve_options(int threads) const {
  SolveOptions o;
  o.grid = grid;
  o.per_patch = per_patch;
  o.scheme = scheme;
  o.rank_rtol = rank_rtol;
  o.threads = threads;
  return o;
}

EscalationPlan Scenario::plan() const {
  return {L, L_max, center_sets, convention};
}

bool operator==(const Scenario& a, const Scenario& b) {
  auto same_points = [](const std::vector<Vec3>& x, const std::vector<Vec3>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != y[i]) return false;
    }
    return true;
  };
  if (a.center_sets.size() != b.center_sets.size()) return false;
  for (std::size_t i = 0; i < a.center_sets.size(); ++i) {
    if (!same_points(a.center_sets[i], b.center_sets[i])) return false;
  }
  return a.name == b.name && a.geometry == b.geometry && a.k == b.k && a.alpha == b.alpha &&
         a.grid == b.grid && a.per_patch == b.per_patch && a.scheme == b.scheme &&
         a.L == b.L && a.L_max == b.L_max && a.epsilon == b.epsilon &&
         a.rank_rtol == b.rank_rtol && a.convention == b.convention &&
         a.eval.far_n_theta == b.eval.far_n_theta && a.eval.far_n_phi == b.eval.far_n_phi &&
         same_points(a.eval.points, b.eval.points) && a.outputs == b.outputs;
}

Scenario parse_scenario(const std::string& text, std::vector<std::string>* warnings) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ScenarioError("parse error at " + location(text, e.byte) + ": " + e.what());
  }
  reject_unknown(doc, "", {"name", "geometry", "wave", "grid", "basis", "solver", "eval",
                           "outputs"});

  Scenario s;
  if (doc.contains("name")) s.name = get_string(doc["name"], "name");
  if (!doc.contains("geometry")) fail("geometry", "is required");
  s.geometry = parse_geometry(doc["geometry"]);

  if (doc.contains("wave")) {
    const json& w = doc["wave"];
    reject_unknown(w, "wave", {"k", "alpha"});
    if (w.contains("k")) s.k = get_number(w["k"], "wave.k");
    if (w.contains("alpha")) s.alpha = get_vec3(w["alpha"], "wave.alpha");
  }
  if (!(s.k > 0.0)) fail("wave.k", "must be positive");
  const double an = s.alpha.norm();
  if (!(an > 0.0)) fail("wave.alpha", "must be nonzero");
  if (std::abs(an - 1.0) > kUnitTol) {
    s.alpha /= an;
    if (warnings) {
      warnings->push_back("wave.alpha normalized to unit length (norm was " +
                          std::to_string(an) + ")");
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    reject_unknown(g, "grid", {"n1", "n2", "scheme", "per_patch"});
    if (g.contains("n1")) s.grid.n1 = get_int(g["n1"], "grid.n1");
    if (g.contains("n2")) s.grid.n2 = get_int(g["n2"], "grid.n2");
    if (g.contains("scheme")) {
      const std::string sch = get_string(g["scheme"], "grid.scheme");
      if (sch == "standard") {
        s.scheme = QuadratureScheme::StandardSimpson;
      } else if (sch == "paper") {
        s.scheme = QuadratureScheme::PaperTable;
      } else {
        fail("grid.scheme", "must be standard or paper");
      }
    }
    if (g.contains("per_patch")) {
      if (!g["per_patch"].is_array()) fail("grid.per_patch", "must be an array");
      for (std::size_t i = 0; i < g["per_patch"].size(); ++i) {
        s.per_patch.push_back(
            parse_resolution(g["per_patch"][i], "grid.per_patch[" + std::to_string(i) + "]"));
      }
    }
  }

  bool have_L_max = false;
  if (doc.contains("basis")) {
    const json& b = doc["basis"];
    reject_unknown(b, "basis", {"L", "L_max", "centers", "center_sets"});
    if (b.contains("L")) s.L = get_int(b["L"], "basis.L");
    if (b.contains("L_max")) {
      s.L_max = get_int(b["L_max"], "basis.L_max");
      have_L_max = true;
    }
    if (b.contains("centers") && b.contains("center_sets")) {
      fail("basis", "give either centers or center_sets, not both");
    }
    if (b.contains("centers")) s.center_sets = {get_points(b["centers"], "basis.centers")};
    if (b.contains("center_sets")) {
      const json& cs = b["center_sets"];
      if (!cs.is_array()) fail("basis.center_sets", "must be an array of center lists");
      s.center_sets.clear();
      for (std::size_t i = 0; i < cs.size(); ++i) {
        s.center_sets.push_back(
            get_points(cs[i], "basis.center_sets[" + std::to_string(i) + "]"));
      }
    }
  }
  if (!have_L_max) s.L_max = s.L;

  if (doc.contains("solver")) {
    const json& v = doc["solver"];
    reject_unknown(v, "solver", {"epsilon", "rank_rtol", "epsilon_convention"});
    if (v.contains("epsilon")) s.epsilon = get_number(v["epsilon"], "solver.epsilon");
    if (v.contains("rank_rtol")) {
      const json& r = v["rank_rtol"];
      if (r.is_string()) {
        if (r.get<std::string>() != "auto") fail("solver.rank_rtol", "must be \"auto\" or a number");
        s.rank_rtol.reset();
      } else {
        s.rank_rtol = get_number(r, "solver.rank_rtol");
      }
    }
    if (v.contains("epsilon_convention")) {
      const std::string c = get_string(v["epsilon_convention"], "solver.epsilon_convention");
      if (c == "norm") {
        s.convention = EpsilonConvention::Norm;
      } else if (c == "norm_squared") {
        s.convention = EpsilonConvention::NormSquared;
      } else {
        fail("solver.epsilon_convention", "must be norm or norm_squared");
      }
    }
  }

  if (doc.contains("eval")) {
    const json& e = doc["eval"];
    reject_unknown(e, "eval", {"far_field", "points"});
    if (e.contains("far_field")) {
      const json& f = e["far_field"];
      reject_unknown(f, "eval.far_field", {"n_theta", "n_phi"});
      if (f.contains("n_theta")) s.eval.far_n_theta = get_int(f["n_theta"], "eval.far_field.n_theta");
      if (f.contains("n_phi")) s.eval.far_n_phi = get_int(f["n_phi"], "eval.far_field.n_phi");
    }
    if (e.contains("points")) s.eval.points = get_points(e["points"], "eval.points");
  }

  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    reject_unknown(o, "outputs", {"sweep", "coeffs", "farfield", "field"});
    if (o.contains("sweep")) s.outputs.sweep = get_string(o["sweep"], "outputs.sweep");
    if (o.contains("coeffs")) s.outputs.coeffs = get_string(o["coeffs"], "outputs.coeffs");
    if (o.contains("farfield")) s.outputs.farfield = get_string(o["farfield"], "outputs.farfield");
    if (o.contains("field")) s.outputs.field = get_string(o["field"], "outputs.field");
  }

  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), warnings);
}

void validate(const Scenario& s) {
  if (!(s.k > 0.0)) fail("wave.k", "must be positive");
  if (std::abs(s.alpha.norm() - 1.0) > kUnitTol) fail("wave.alpha", "must be a unit vector");
  check_resolution(s.grid, "grid");
  for (std::size_t i = 0; i < s.per_patch.size(); ++i) {
    check_resolution(s.per_patch[i], "grid.per_patch[" + std::to_string(i) + "]");
  }
  if (s.L < 0) fail("basis.L", "must be >= 0");
  if (s.L_max < s.L) fail("basis.L_max", "must be >= basis.L");
  if (!(s.epsilon > 0.0)) fail("solver.epsilon", "must be positive");
  if (s.rank_rtol && !(*s.rank_rtol > 0.0 && *s.rank_rtol < 1.0)) {
    fail("solver.rank_rtol", "must lie in (0, 1)");
  }
  if (s.eval.far_n_theta < 1) fail("eval.far_field.n_theta", "must be >= 1");
  if (s.eval.far_n_phi < 1) fail("eval.far_field.n_phi", "must be >= 1");

  std::optional<Surface> surface;
  try {
    surface.emplace(build_surface(s.geometry));
  } catch (const std::exception& e) {
    fail("geometry", e.what());
  }
  if (!s.per_patch.empty() && s.per_patch.size() != surface->size()) {
    fail("grid.per_patch", "has " + std::to_string(s.per_patch.size()) + " entries but the " +
                               "surface has " + std::to_string(surface->size()) + " patches");
  }
  if (s.center_sets.empty()) fail("basis.center_sets", "must not be empty");
  for (std::size_t i = 0; i < s.center_sets.size(); ++i) {
    const std::string path = s.center_sets.size() == 1 ? std::string("basis.centers")
                                                       : "basis.center_sets[" + std::to_string(i) + "]";
    const auto& set = s.center_sets[i];
    if (set.empty()) fail(path, "must not be empty");
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (surface->contains(set[j]) == false) {
        fail(path + "[" + std::to_string(j) + "]", "lies outside the obstacle");
      }
      for (std::size_t q = j + 1; q < set.size(); ++q) {
        if (set[j] == set[q]) fail(path + "[" + std::to_string(q) + "]", "repeats a center");
      }
    }
  }
}

std::string serialize_scenario(const Scenario& s) {
  json doc;
  doc["name"] = s.name;
  doc["geometry"] = geometry_json(s.geometry);
  doc["wave"] = {{"k", s.k}, {"alpha", vec_json(s.alpha)}};
  json grid = {{"n1", s.grid.n1}, {"n2", s.grid.n2}, {"scheme", to_string(s.scheme)}};
  if (!s.per_patch.empty()) {
    json pp = json::array();
    for (const auto& r : s.per_patch) pp.push_back({{"n1", r.n1}, {"n2", r.n2}});
    grid["per_patch"] = pp;
  }
  doc["grid"] = grid;
  json basis = {{"L", s.L}, {"L_max", s.L_max}};
  if (s.center_sets.size() == 1) {
    basis["centers"] = points_json(s.center_sets.front());
  } else {
    json cs = json::array();
    for (const auto& set : s.center_sets) cs.push_back(points_json(set));
    basis["center_sets"] = cs;
  }
  doc["basis"] = basis;
  doc["solver"] = {
      {"epsilon", s.epsilon},
      {"rank_rtol", s.rank_rtol ? json(*s.rank_rtol) : json("auto")},
      {"epsilon_convention", s.convention == EpsilonConvention::Norm ? "norm" : "norm_squared"}};
  doc["eval"] = {{"far_field", {{"n_theta", s.eval.far_n_theta}, {"n_phi", s.eval.far_n_phi}}},
                 {"points", points_json(s.eval.points)}};
  doc["outputs"] = {{"sweep", s.outputs.sweep},
                    {"coeffs", s.outputs.coeffs},
                    {"farfield", s.outputs.farfield},
                    {"field", s.outputs.field}};
  return doc.dump(2) + "\n";
}

std::vector<Scenario> builtin_scenarios() {
  const std::vector<Vec3> origin{Vec3::Zero()};
  auto star = [](double d) {
    return std::vector<Vec3>{Vec3(0, 0, 0),  Vec3(d, 0, 0),  Vec3(-d, 0, 0), Vec3(0, d, 0),
                             Vec3(0, -d, 0), Vec3(0, 0, d),  Vec3(0, 0, -d)};
  };

  Scenario sphere;
  sphere.name = "sphere";
  sphere.geometry = SphereSpec{1.0};
  sphere.L = 0;
  sphere.L_max = 7;
  sphere.epsilon = 0.02;
  sphere.eval.points = {Vec3(2, 0, 0), Vec3(0, 2, 0), Vec3(0, 0, 2), Vec3(-2, 0, 0)};

  Scenario cube;
  cube.name = "cube";
  cube.geometry = CubeSpec{1.0};
  cube.grid = {10, 10};
  cube.L = 0;
  cube.L_max = 8;
  cube.center_sets = {origin, star(0.2)};
  cube.epsilon = 0.1;
  cube.eval.points = {Vec3(2, 0, 0), Vec3(0, 0, 2), Vec3(2, 2, 2)};

  Scenario ellipsoid;
  ellipsoid.name = "ellipsoid";
  ellipsoid.geometry = EllipsoidSpec{2.0};
  ellipsoid.L = 0;
  ellipsoid.L_max = 7;
  ellipsoid.center_sets = {origin, star(0.5)};
  ellipsoid.epsilon = 0.01;
  ellipsoid.eval.points = {Vec3(2, 0, 0), Vec3(0, 0, 3)};

  Scenario dumbbell;
  dumbbell.name = "dumbbell";
  dumbbell.geometry = DumbbellSpec{};
  dumbbell.L = 0;
  dumbbell.L_max = 7;
  std::vector<Vec3> axis{Vec3::Zero()};
  for (int i = 1; i <= 5; ++i) {
    axis.emplace_back(0, 0, i / 10.0);
    axis.emplace_back(0, 0, -i / 10.0);
  }
  dumbbell.center_sets = {origin, axis};
  dumbbell.epsilon = 0.1;
  dumbbell.eval.points = {Vec3(3, 0, 0), Vec3(0, 0, 4)};

  return {sphere, cube, ellipsoid, dumbbell};
}

}  // namespace mrc::cli
