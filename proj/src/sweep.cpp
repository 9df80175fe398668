#include "mrc/sweep.hpp"

#include <chrono>
#include <fmt/format.h>

namespace mrc::cli {

namespace {

const std::vector<Vec3>& pick_centers(const Scenario& s, int index) {
  if (s.center_sets.empty()) throw std::invalid_argument("scenario has no center sets");
  const int n = static_cast<int>(s.center_sets.size());
  const int i = index < 0 ? n - 1 : index;
  if (i >= n) {
    throw std::invalid_argument("center set " + std::to_string(index) + " does not exist (have " +
                                std::to_string(n) + ")");
  }
  return s.center_sets[i];
}

}  // namespace

bool has_exact_coefficients(const Scenario& scenario, int center_set) {
  const auto* sphere = std::get_if<geometry::SphereSpec>(&scenario.geometry);
  if (!sphere || sphere->radius != 1.0) return false;
  const auto& centers = pick_centers(scenario, center_set);
  return centers.size() == 1 && centers.front() == Vec3::Zero();
}

double monotone_slack(double b_norm_sq) { return 1e-10 * b_norm_sq; }

std::vector<SweepRow> run_sweep(const Scenario& scenario, int L_lo, int L_hi,
                                const SweepOptions& options) {
  std::vector<SweepRow> rows;
  if (L_lo > L_hi) return rows;
  if (L_lo < 0) throw std::invalid_argument("sweep range must start at L >= 0");

  const auto& centers = pick_centers(scenario, options.center_set);
  const bool exact = has_exact_coefficients(scenario, options.center_set);
  const IncidentWave wave = scenario.wave();
  const geometry::Surface surface = geometry::build_surface(scenario.geometry);
  const geometry::QuadratureGrid grid = geometry::quad_grid(
      surface, scenario.grid.n1, scenario.grid.n2, scenario.scheme, scenario.per_patch);
  // |u0| = 1 on the surface, so |b|^2 is the total weight
  const double slack = monotone_slack(grid.total_weight());

  for (int L = L_lo; L <= L_hi; ++L) {
    const auto t0 = std::chrono::steady_clock::now();
    const MrcSolution sol =
        minimize_functional(grid, BasisSet(L, centers), wave, scenario.rank_rtol, options.threads);
    SweepRow row;
    row.L = L;
    row.F_star = sol.F_star;
    row.rank = sol.rank;
    if (exact) {
      row.err_c = fields::coeff_error(sol.coefficients,
                                      fields::exact_sphere_coefficients(wave, L));
    }
    row.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rows.push_back(row);
    if (options.on_row) options.on_row(row);

    if (options.check_monotone && rows.size() > 1) {
      const SweepRow& prev = rows[rows.size() - 2];
      if (row.F_star > prev.F_star + slack) {
        throw MonotonicityError(fmt::format(
            "F_star increased from {:.17g} at L={} to {:.17g} at L={}", prev.F_star, prev.L,
            row.F_star, row.L));
      }
    }
  }
  return rows;
}

std::string format_number(double v, const CsvFormat& f) {
  return f.paper_format ? fmt::format("{:.4f}", v) : fmt::format("{:.17g}", v);
}

void write_sweep_header(std::ostream& os) { os << "L,F_star,err_c,rank,wall_time\n"; }

void write_sweep_row(std::ostream& os, const SweepRow& row, const CsvFormat& f) {
  os << row.L << ',' << format_number(row.F_star, f) << ','
     << (row.err_c ? format_number(*row.err_c, f) : std::string()) << ',' << row.rank << ','
     << (f.include_timing ? fmt::format("{:.6f}", row.wall_time) : std::string()) << '\n';
  os.flush();
}

void write_coeffs_csv(std::ostream& os, const MrcSolution& sol, const CsvFormat& f) {
  os << "l,m,j,re,im\n";
  for (int col = 0; col < sol.basis.column_count(); ++col) {
    const auto [idx, j] = sol.basis.index_of(col);
    const cplx c = sol.coefficients(col);
    os << idx.l << ',' << idx.m << ',' << j << ',' << format_number(c.real(), f) << ','
       << format_number(c.imag(), f) << '\n';
  }
}

void write_farfield_csv(std::ostream& os, const std::vector<fields::FarFieldSample>& samples,
                        const CsvFormat& f) {
  os << "theta,phi,Re(A),Im(A),|A|\n";
  for (const auto& s : samples) {
    os << format_number(s.theta, f) << ',' << format_number(s.phi, f) << ','
       << format_number(s.amplitude.real(), f) << ',' << format_number(s.amplitude.imag(), f)
       << ',' << format_number(std::abs(s.amplitude), f) << '\n';
  }
}

void write_field_csv(std::ostream& os, const std::vector<fields::FieldSample>& samples,
                     const CsvFormat& f) {
  os << "x,y,z,Re(u),Im(u),Re(v),Im(v)\n";
  for (const auto& s : samples) {
    os << format_number(s.x.x(), f) << ',' << format_number(s.x.y(), f) << ','
       << format_number(s.x.z(), f) << ',' << format_number(s.total.real(), f) << ','
       << format_number(s.total.imag(), f) << ',' << format_number(s.scattered.real(), f) << ','
       << format_number(s.scattered.imag(), f) << '\n';
  }
}

}  // namespace mrc::cli
