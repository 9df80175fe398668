#pragma once

// Discrete boundary-residual functional, its minimization, and the adaptive
// L / center-set escalation loop.

#include <Eigen/Core>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mrc/geometry.hpp"
#include "mrc/linalg.hpp"
#include "mrc/specfun.hpp"

namespace mrc {

using geometry::Vec3;
using linalg::CMatrix;
using linalg::CVector;
using specfun::cplx;
using specfun::HarmonicIndex;

/// Plane wave e^{i k alpha . x}.
struct IncidentWave {
  /// Throws std::invalid_argument unless k > 0 and |alpha| = 1 within 1e-12.
  IncidentWave(double k, const Vec3& alpha);

  double k;
  Vec3 alpha;
};

/// Radiating functions Y_lm h_l(k|x - x_j|) for 0 <= l <= L and centers x_j.
/// Column of (l, m, j) is j (L+1)^2 + l^2 + l + m.
class BasisSet {
 public:
  /// Throws std::invalid_argument on L < 0, no centers, or repeated centers.
  BasisSet(int max_degree, std::vector<Vec3> centers);

  [[nodiscard]] int max_degree() const { return max_degree_; }
  [[nodiscard]] int center_count() const { return static_cast<int>(centers_.size()); }
  [[nodiscard]] const std::vector<Vec3>& centers() const { return centers_; }
  [[nodiscard]] int per_center() const { return specfun::harmonic_count(max_degree_); }
  [[nodiscard]] int column_count() const { return per_center() * center_count(); }
  [[nodiscard]] int column(HarmonicIndex idx, int j) const;
  [[nodiscard]] std::pair<HarmonicIndex, int> index_of(int column) const;

 private:
  int max_degree_;
  std::vector<Vec3> centers_;
};

/// psi_lm(point - center) with the outgoing normalization h_l ~ e^{ikr}/r.
/// Throws DegenerateError when point == center.
cplx basis_column(HarmonicIndex idx, const Vec3& center, double k, const Vec3& point);

/// All basis functions at one point, in column order. out.size() must equal
/// basis.column_count().
void basis_row(const BasisSet& basis, double k, const Vec3& point, std::span<cplx> out);

struct LinearSystem {
  CMatrix a;
  CVector b;
};

/// Rows are grid nodes (patches concatenated), scaled by sqrt of the node
/// weight, so that |A c - b|^2 is the discrete functional. Zero-weight rows
/// are left zero and never evaluated. threads <= 0 uses all hardware threads;
/// the result does not depend on the thread count.
LinearSystem assemble_system(const geometry::QuadratureGrid& grid, const BasisSet& basis,
                             const IncidentWave& wave, int threads = 0);

struct MrcSolution {
  BasisSet basis;
  IncidentWave wave;
  CVector coefficients;
  double F_star = 0.0;
  int rank = 0;
  double rank_rtol = 0.0;
  Eigen::Index rows = 0;
  std::vector<geometry::GridResolution> grid;  // per patch
  geometry::QuadratureScheme scheme = geometry::QuadratureScheme::StandardSimpson;
  std::vector<double> diagonal_ratios;

  /// |R_00| / |R_{r-1,r-1}| of the retained block.
  [[nodiscard]] double condition_estimate() const;
};

/// Without rank_rtol the tolerance is linalg::auto_rank_rtol of the system.
MrcSolution minimize_functional(const geometry::QuadratureGrid& grid, const BasisSet& basis,
                                const IncidentWave& wave,
                                std::optional<double> rank_rtol = std::nullopt,
                                int threads = 0);

enum class EpsilonConvention { Norm, NormSquared };

struct EscalationPlan {
  int L_start = 0;
  int L_max = 10;
  std::vector<std::vector<Vec3>> center_sets;  // tried in order
  EpsilonConvention convention = EpsilonConvention::Norm;
};

struct SolveOptions {
  geometry::GridResolution grid;
  std::vector<geometry::GridResolution> per_patch;  // empty: use `grid`
  geometry::QuadratureScheme scheme = geometry::QuadratureScheme::StandardSimpson;
  std::optional<double> rank_rtol;
  int threads = 0;
};

struct AdaptiveResult {
  MrcSolution solution;  // converged one, or best found
  bool converged = false;
  int solves = 0;
};

/// Raises L from L_start to L_max for each center set in turn and stops at
/// the first solution meeting epsilon (sqrt(F) <= eps, or F <= eps under
/// NormSquared). Throws std::invalid_argument for an empty plan or centers
/// known to lie outside the obstacle.
AdaptiveResult adaptive_solve(const geometry::Surface& surface, const IncidentWave& wave,
                              double epsilon, const EscalationPlan& plan,
                              const SolveOptions& options = {});

/// Whether F meets epsilon under the convention.
bool meets_tolerance(double F, double epsilon, EpsilonConvention convention);

}  // namespace mrc
