#include <sstream>

#include "doctest.h"
#include "mrc/scenario.hpp"
#include "mrc/sweep.hpp"

using namespace mrc;
using namespace mrc::cli;
using namespace mrc::geometry;

namespace {

std::string message_of(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const ScenarioError& e) {
    return e.what();
  }
  return "";
}

std::string sweep_csv(const Scenario& s, int lo, int hi, int threads) {
  std::ostringstream os;
  write_sweep_header(os);
  SweepOptions opt;
  opt.threads = threads;
  for (const auto& row : run_sweep(s, lo, hi, opt)) write_sweep_row(os, row, {false, false});
  return os.str();
}

}  // namespace

TEST_CASE("minimal document and defaults") {
  const Scenario s = parse_scenario(R"({"geometry": {"type": "sphere"}})");
  CHECK(std::get<SphereSpec>(s.geometry).radius == 1.0);
  CHECK(s.k == 1.0);
  CHECK(s.alpha == Vec3::UnitX());
  CHECK(s.grid.n1 == 20);
  CHECK(s.grid.n2 == 10);
  CHECK(s.L == 0);
  CHECK(s.L_max == 0);
  CHECK(s.center_sets.size() == 1);
  CHECK(s.epsilon == 1e-2);
  CHECK_FALSE(s.rank_rtol.has_value());
  CHECK(s.outputs.sweep == "sweep.csv");

  const Scenario l = parse_scenario(
      R"({"geometry": {"type": "cube"}, "basis": {"L": 3}, "solver": {"rank_rtol": 1e-8}})");
  CHECK(l.L_max == 3);
  CHECK(l.rank_rtol == 1e-8);
  CHECK(std::get<CubeSpec>(l.geometry).half_side == 1.0);
}

TEST_CASE("alpha is normalized with a warning") {
  std::vector<std::string> warnings;
  const Scenario s =
      parse_scenario(R"({"geometry": {"type": "sphere"}, "wave": {"alpha": [0, 3, 4]}})", &warnings);
  CHECK(s.alpha.isApprox(Vec3(0, 0.6, 0.8)));
  CHECK(warnings.size() == 1);

  warnings.clear();
  parse_scenario(R"({"geometry": {"type": "sphere"}, "wave": {"alpha": [0, 0, 1]}})", &warnings);
  CHECK(warnings.empty());
}

TEST_CASE("invalid documents name the offending field") {
  CHECK(message_of(R"({"geometry": {"type": "sphere"}, "grid": {"n1": 21}})") ==
        "grid.n1: must be even");
  CHECK(message_of(R"({"geometry": {"type": "sphere"}, "wave": {"k": 1, "kk": 2}})")
            .starts_with("wave.kk: unknown key"));
  CHECK(message_of(R"({"geometry": {"type": "torus"}})").starts_with("geometry.type"));
  CHECK(message_of(R"({"wave": {"k": 1}})").starts_with("geometry"));
  CHECK(message_of(R"({"geometry": {"type": "sphere"}, "wave": {"k": -1}})")
            .starts_with("wave.k"));
  CHECK(message_of(R"({"geometry": {"type": "sphere"}, "basis": {"L": 3, "L_max": 2}})")
            .starts_with("basis.L_max"));
  CHECK(message_of(R"({"geometry": {"type": "sphere"}, "solver": {"rank_rtol": 2}})")
            .starts_with("solver.rank_rtol"));
  CHECK(message_of(R"({"geometry": {"type": "sphere"}, "basis": {"centers": [[0, 0, 5]]}})")
            .starts_with("basis"));
  CHECK(message_of(R"({"geometry": {"type": "dumbbell"}, "grid": {"per_patch": [{"n1": 4, "n2": 2}]}})")
            .starts_with("grid.per_patch"));

  const std::string parse = message_of("{\n  \"geometry\": {\"type\": \"sphere\",}\n}");
  CHECK(parse.find("line 2") != std::string::npos);
  CHECK(parse.find("column") != std::string::npos);
}

TEST_CASE("serialization round trip") {
  for (const Scenario& s : builtin_scenarios()) {
    CHECK_NOTHROW(validate(s));
    CHECK(parse_scenario(serialize_scenario(s)) == s);
  }

  const std::string text = R"({
    "name": "two balls",
    "geometry": {"type": "patches", "trim": true, "patches": [
      {"kind": "sphere", "parameter": 1.0, "origin": [0, 0, 0.8]},
      {"kind": "sphere", "parameter": 1.0, "origin": [0, 0, -0.8]}]},
    "wave": {"k": 2, "alpha": [0, 0, 1]},
    "grid": {"n1": 12, "n2": 6, "scheme": "paper", "per_patch": [{"n1": 12, "n2": 6}, {"n1": 8, "n2": 4}]},
    "basis": {"L": 1, "L_max": 4, "center_sets": [[[0, 0, 0]], [[0, 0, 0.8], [0, 0, -0.8]]]},
    "solver": {"epsilon": 0.05, "rank_rtol": 1e-9, "epsilon_convention": "norm_squared"},
    "eval": {"far_field": {"n_theta": 6, "n_phi": 8}, "points": [[3, 0, 0]]},
    "outputs": {"sweep": "s.csv"}
  })";
  const Scenario s = parse_scenario(text);
  CHECK(s.per_patch.size() == 2);
  CHECK(s.scheme == QuadratureScheme::PaperTable);
  CHECK(s.convention == EpsilonConvention::NormSquared);
  CHECK(s.center_sets.size() == 2);
  CHECK(s.outputs.sweep == "s.csv");
  CHECK(s.outputs.coeffs == "coeffs.csv");
  CHECK(parse_scenario(serialize_scenario(s)) == s);
}

TEST_CASE("sweeps") {
  Scenario s = builtin_scenarios().front();
  CHECK(run_sweep(s, 3, 2).empty());
  CHECK(has_exact_coefficients(s));

  std::vector<int> seen;
  SweepOptions opt;
  opt.on_row = [&](const SweepRow& r) { seen.push_back(r.L); };
  const auto rows = run_sweep(s, 0, 3, opt);
  REQUIRE(rows.size() == 4);
  CHECK(seen == std::vector<int>{0, 1, 2, 3});
  for (const auto& r : rows) {
    CHECK(r.err_c.has_value());
    CHECK(r.rank == (r.L + 1) * (r.L + 1));
  }

  Scenario cube = builtin_scenarios()[1];
  CHECK_FALSE(has_exact_coefficients(cube));
  CHECK(sweep_csv(cube, 0, 3, 1) == sweep_csv(cube, 0, 3, 3));
  CHECK(run_sweep(cube, 0, 0).front().err_c == std::nullopt);

  CHECK(format_number(0.123456, {true, true}) == "0.1235");
  CHECK(format_number(0.1, {}) == "0.10000000000000001");
  CHECK(monotone_slack(4.0) == 4e-10);
}

TEST_CASE("coarse rank truncation can break monotonicity") {
  Scenario s = builtin_scenarios()[1];
  s.rank_rtol = 0.9;
  std::vector<SweepRow> delivered;
  SweepOptions opt;
  opt.center_set = 0;
  opt.on_row = [&](const SweepRow& r) { delivered.push_back(r); };
  CHECK_THROWS_AS(run_sweep(s, 0, 8, opt), MonotonicityError);
  REQUIRE(delivered.size() >= 2);
  CHECK(delivered.back().F_star > delivered[delivered.size() - 2].F_star);

  opt.check_monotone = false;
  delivered.clear();
  CHECK(run_sweep(s, 0, 8, opt).size() == 9);
}
