#pragma once

// Scenario documents (JSON) driving the command-line tool.
//
// {
//   "name": "sphere",
//   "geometry": {"type": "sphere", "radius": 1},
//   "wave": {"k": 1, "alpha": [1, 0, 0]},
//   "grid": {"n1": 20, "n2": 10, "scheme": "standard"},
//   "basis": {"L": 0, "L_max": 7, "centers": [[0, 0, 0]]},
//   "solver": {"epsilon": 0.01, "rank_rtol": "auto", "epsilon_convention": "norm"},
//   "eval": {"far_field": {"n_theta": 18, "n_phi": 36}, "points": [[2, 0, 0]]},
//   "outputs": {"sweep": "sweep.csv", "coeffs": "coeffs.csv",
//               "farfield": "farfield.csv", "field": "field.csv"}
// }
//
// geometry.type is one of sphere {radius}, ellipsoid {b}, cube {half_side},
// dumbbell {sphere_radius, center_offset, neck_radius, neck_halfheight, trim},
// patches {trim, patches: [{kind, parameter, axis, origin, range1, range2}]}
// with kind in sphere | ellipsoid | plane | cylinder.
// grid.per_patch: optional [{n1, n2}, ...], one entry per patch.
// basis.center_sets: optional list of center lists tried in order by
// `solve`; mutually exclusive with basis.centers.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrc/geometry.hpp"
#include "mrc/solver.hpp"

namespace mrc::cli {

/// Malformed document or invalid field; the message names the location.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Outputs {
  std::string sweep = "sweep.csv";
  std::string coeffs = "coeffs.csv";
  std::string farfield = "farfield.csv";
  std::string field = "field.csv";
  friend bool operator==(const Outputs&, const Outputs&) = default;
};

struct EvalSettings {
  int far_n_theta = 18;
  int far_n_phi = 36;
  std::vector<Vec3> points;
};

struct Scenario {
  std::string name = "scenario";
  geometry::ObstacleDescriptor geometry = geometry::SphereSpec{};
  double k = 1.0;
  Vec3 alpha = Vec3::UnitX();
  geometry::GridResolution grid;
  std::vector<geometry::GridResolution> per_patch;
  geometry::QuadratureScheme scheme = geometry::QuadratureScheme::StandardSimpson;
  int L = 0;
  int L_max = 0;
  std::vector<std::vector<Vec3>> center_sets{{Vec3::Zero()}};
  double epsilon = 1e-2;
  std::optional<double> rank_rtol;  // nullopt: automatic
  EpsilonConvention convention = EpsilonConvention::Norm;
  EvalSettings eval;
  Outputs outputs;

  [[nodiscard]] IncidentWave wave() const { return {k, alpha}; }
  [[nodiscard]] SolveOptions solve_options(int threads = 0) const;
  [[nodiscard]] EscalationPlan plan() const;
};

bool operator==(const Scenario& a, const Scenario& b);

/// Parses and validates. Warnings (e.g. alpha renormalized) are appended to
/// `warnings` when given. Throws ScenarioError.
Scenario parse_scenario(const std::string& text, std::vector<std::string>* warnings = nullptr);
Scenario load_scenario(const std::string& path, std::vector<std::string>* warnings = nullptr);

/// Checks cross-field constraints (centers inside the obstacle, per-patch
/// count). Throws ScenarioError naming the field.
void validate(const Scenario& s);

/// Inverse of parse_scenario: serialize_scenario(s) parses back to s.
std::string serialize_scenario(const Scenario& s);

/// Built-in scenarios for the sphere, cube, ellipsoid and dumbbell examples.
std::vector<Scenario> builtin_scenarios();

}  // namespace mrc::cli
