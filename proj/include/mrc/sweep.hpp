#pragma once

// L sweeps and CSV output.

#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrc/fields.hpp"
#include "mrc/scenario.hpp"

namespace mrc::cli {

struct SweepRow {
  int L = 0;
  double F_star = 0.0;
  std::optional<double> err_c;  // unit sphere with a single origin center only
  int rank = 0;
  double wall_time = 0.0;  // seconds
};

/// F_star rose with L beyond roundoff. The offending row and all before it
/// have already been delivered to the row callback.
class MonotonicityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepOptions {
  int threads = 0;
  int center_set = -1;  // index into scenario.center_sets; -1 is the last
  std::function<void(const SweepRow&)> on_row;
  bool check_monotone = true;
};

/// One solve per L in [L_lo, L_hi] on a fixed grid and center set. An empty
/// range (L_lo > L_hi) yields no rows.
std::vector<SweepRow> run_sweep(const Scenario& scenario, int L_lo, int L_hi,
                                const SweepOptions& options = {});

/// True when the scenario is the unit sphere solved from the origin alone,
/// so exact coefficients exist.
bool has_exact_coefficients(const Scenario& scenario, int center_set = -1);

/// Absolute slack allowed in F monotonicity checks: 1e-10 * |b|^2.
double monotone_slack(double b_norm_sq);

// CSV writers. Numbers use 17 significant digits, or 4 decimals when
// paper_format is set.
struct CsvFormat {
  bool paper_format = false;
  bool include_timing = true;
};

void write_sweep_header(std::ostream& os);
void write_sweep_row(std::ostream& os, const SweepRow& row, const CsvFormat& fmt = {});
void write_coeffs_csv(std::ostream& os, const MrcSolution& sol, const CsvFormat& fmt = {});
void write_farfield_csv(std::ostream& os, const std::vector<fields::FarFieldSample>& samples,
                        const CsvFormat& fmt = {});
void write_field_csv(std::ostream& os, const std::vector<fields::FieldSample>& samples,
                     const CsvFormat& fmt = {});

std::string format_number(double v, const CsvFormat& fmt);

}  // namespace mrc::cli
