// Command-line front end: solve, sweep, validate-sphere, eval, examples.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "mrc/fields.hpp"
#include "mrc/scenario.hpp"
#include "mrc/sweep.hpp"

namespace fs = std::filesystem;
using namespace mrc;
using namespace mrc::cli;

namespace {

constexpr int kExitConverged = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct Common {
  std::string scenario_path;
  std::string L_range;
  int threads = 0;
  bool paper_format = false;
  std::string scheme;
  std::string out_dir;
};

struct Range {
  int lo;
  int hi;
};

// "7", "0:7" or "0-7".
Range parse_range(const std::string& text) {
  const auto pos = text.find_first_of(":-", 1);
  try {
    if (pos == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument("--L expects N or LO:HI, got '" + text + "'");
  }
}

Scenario load(const Common& c) {
  std::vector<std::string> warnings;
  Scenario s = load_scenario(c.scenario_path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  if (!c.scheme.empty()) {
    s.scheme = c.scheme == "paper" ? geometry::QuadratureScheme::PaperTable
                                   : geometry::QuadratureScheme::StandardSimpson;
  }
  if (!c.L_range.empty()) {
    const Range r = parse_range(c.L_range);
    s.L = r.lo;
    s.L_max = r.hi;
  }
  return s;
}

std::string out_path(const Common& c, const std::string& name) {
  if (c.out_dir.empty()) return name;
  fs::create_directories(c.out_dir);
  return (fs::path(c.out_dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

void add_common(CLI::App* app, Common& c, bool need_scenario = true) {
  auto* opt = app->add_option("--scenario", c.scenario_path, "Scenario JSON file");
  if (need_scenario) opt->required();
  app->add_option("--L", c.L_range, "Degree or degree range LO:HI");
  app->add_option("--threads", c.threads, "Assembly threads (0: all cores)");
  app->add_flag("--paper-format", c.paper_format, "Print numbers with 4 decimals");
  app->add_option("--scheme", c.scheme, "Quadrature scheme")
      ->check(CLI::IsMember({"standard", "paper"}));
  app->add_option("--out-dir", c.out_dir, "Directory for output files");
}

void print_solution(const MrcSolution& sol, bool converged, const CsvFormat& f) {
  fmt::print("L = {}, J = {}, rows = {}, columns = {}\n", sol.basis.max_degree(),
             sol.basis.center_count(), sol.rows, sol.basis.column_count());
  fmt::print("F_star = {}, sqrt(F_star) = {}\n", format_number(sol.F_star, f),
             format_number(std::sqrt(sol.F_star), f));
  fmt::print("rank = {} (rtol {:.3g}), condition estimate {:.3g}\n", sol.rank, sol.rank_rtol,
             sol.condition_estimate());
  fmt::print("{}\n", converged ? "converged" : "not converged");
}

int cmd_solve(const Common& c) {
  const Scenario s = load(c);
  const geometry::Surface surface = geometry::build_surface(s.geometry);
  const AdaptiveResult res =
      adaptive_solve(surface, s.wave(), s.epsilon, s.plan(), s.solve_options(c.threads));
  const CsvFormat f{c.paper_format, true};
  print_solution(res.solution, res.converged, f);
  auto os = open_out(out_path(c, s.outputs.coeffs));
  write_coeffs_csv(os, res.solution, f);
  return res.converged ? kExitConverged : kExitNotConverged;
}

int cmd_sweep(const Common& c, int center_set, bool no_timing, bool allow_increase) {
  const Scenario s = load(c);
  const CsvFormat f{c.paper_format, !no_timing};
  auto os = open_out(out_path(c, s.outputs.sweep));
  write_sweep_header(os);
  write_sweep_header(std::cout);
  SweepOptions opt;
  opt.threads = c.threads;
  opt.center_set = center_set;
  opt.check_monotone = !allow_increase;
  opt.on_row = [&](const SweepRow& row) {
    write_sweep_row(os, row, f);
    write_sweep_row(std::cout, row, f);
  };
  run_sweep(s, s.L, s.L_max, opt);
  return kExitConverged;
}

int cmd_validate_sphere(const Common& c, double k, std::vector<double> alpha, int n1, int n2) {
  Scenario s;
  if (!c.scenario_path.empty()) {
    s = load(c);
  } else {
    s.name = "validate-sphere";
    s.k = k;
    geometry::Vec3 a(alpha.at(0), alpha.at(1), alpha.at(2));
    s.alpha = a / a.norm();
    s.grid = {n1, n2};
    s.L = 0;
    s.L_max = 7;
    if (!c.scheme.empty() && c.scheme == "paper") s.scheme = geometry::QuadratureScheme::PaperTable;
    if (!c.L_range.empty()) {
      const Range r = parse_range(c.L_range);
      s.L = r.lo;
      s.L_max = r.hi;
    }
    validate(s);
  }
  if (!has_exact_coefficients(s)) {
    throw std::invalid_argument("validate-sphere needs the unit sphere with a single origin center");
  }
  const CsvFormat f{c.paper_format, true};
  fmt::print("k = {}, alpha = ({}, {}, {}), n1 = {}, n2 = {}, scheme = {}\n", s.k, s.alpha.x(),
             s.alpha.y(), s.alpha.z(), s.grid.n1, s.grid.n2, geometry::to_string(s.scheme));
  fmt::print("{:>3} {:>24} {:>24} {:>5}\n", "L", "F_star", "err_c", "rank");
  SweepOptions opt;
  opt.threads = c.threads;
  double last_err = 0.0;
  opt.on_row = [&](const SweepRow& row) {
    fmt::print("{:>3} {:>24} {:>24} {:>5}\n", row.L, format_number(row.F_star, f),
               format_number(*row.err_c, f), row.rank);
    last_err = *row.err_c;
  };
  run_sweep(s, s.L, s.L_max, opt);
  const bool ok = last_err <= 1e-3;
  fmt::print("err(c) at L = {}: {:.3e} ({})\n", s.L_max, last_err, ok ? "ok" : "above 1e-3");
  return ok ? kExitConverged : kExitNotConverged;
}

int cmd_eval(const Common& c) {
  const Scenario s = load(c);
  const geometry::Surface surface = geometry::build_surface(s.geometry);
  const AdaptiveResult res =
      adaptive_solve(surface, s.wave(), s.epsilon, s.plan(), s.solve_options(c.threads));
  const CsvFormat f{c.paper_format, true};
  print_solution(res.solution, res.converged, f);
  {
    auto os = open_out(out_path(c, s.outputs.farfield));
    write_farfield_csv(os, fields::far_field_pattern(res.solution, s.eval.far_n_theta,
                                                     s.eval.far_n_phi),
                       f);
  }
  {
    auto os = open_out(out_path(c, s.outputs.field));
    write_field_csv(os, fields::sample_fields(res.solution, s.eval.points), f);
  }
  {
    auto os = open_out(out_path(c, s.outputs.coeffs));
    write_coeffs_csv(os, res.solution, f);
  }
  return res.converged ? kExitConverged : kExitNotConverged;
}

int cmd_examples(const std::string& dir) {
  for (const auto& s : builtin_scenarios()) {
    const std::string text = serialize_scenario(s);
    if (dir.empty()) {
      std::cout << "// " << s.name << ".json\n" << text;
    } else {
      fs::create_directories(dir);
      const std::string path = (fs::path(dir) / (s.name + ".json")).string();
      auto os = open_out(path);
      os << text;
      std::cout << path << '\n';
    }
  }
  return kExitConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exterior Dirichlet scattering by boundary-residual minimization"};
  app.require_subcommand(1);

  Common solve_c, sweep_c, val_c, eval_c;
  auto* solve = app.add_subcommand("solve", "Adaptive solve; writes coeffs.csv");
  add_common(solve, solve_c);

  auto* sweep = app.add_subcommand("sweep", "One solve per L; writes sweep.csv");
  add_common(sweep, sweep_c);
  int center_set = -1;
  bool no_timing = false;
  bool allow_increase = false;
  sweep->add_option("--center-set", center_set, "Center set index (-1: last)");
  sweep->add_flag("--no-timing", no_timing, "Leave the wall_time column empty");
  sweep->add_flag("--allow-increase", allow_increase, "Do not fail when F_star increases");

  auto* val = app.add_subcommand("validate-sphere", "Unit-sphere sweep against exact coefficients");
  add_common(val, val_c, false);
  double k = 1.0;
  std::vector<double> alpha{1.0, 0.0, 0.0};
  int n1 = 20, n2 = 10;
  val->add_option("--k", k, "Wavenumber");
  val->add_option("--alpha", alpha, "Incident direction")->expected(3)->delimiter(',');
  val->add_option("--n1", n1, "Grid intervals in phi");
  val->add_option("--n2", n2, "Grid intervals in theta");

  auto* ev = app.add_subcommand("eval", "Adaptive solve, then far-field and field CSVs");
  add_common(ev, eval_c);

  auto* ex = app.add_subcommand("examples", "Write the built-in scenarios");
  std::string ex_dir;
  ex->add_option("--dir", ex_dir, "Output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*solve) return cmd_solve(solve_c);
    if (*sweep) return cmd_sweep(sweep_c, center_set, no_timing, allow_increase);
    if (*val) return cmd_validate_sphere(val_c, k, alpha, n1, n2);
    if (*ev) return cmd_eval(eval_c);
    if (*ex) return cmd_examples(ex_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
