#include "mrc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "mrc/errors.hpp"

namespace mrc {

namespace {

constexpr double kUnitTol = 1e-12;

int resolve_threads(int threads, std::size_t work) {
  int n = threads;
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  const std::size_t cap = std::max<std::size_t>(work, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), cap));
}

struct RowScratch {
  std::vector<cplx> ylm;
  std::vector<cplx> radial;
};

// psi values of all (l, m) for one center, in flat order.
void center_block(int L, const Vec3& center, double k, const Vec3& point, RowScratch& s,
                  std::span<cplx> out) {
  const Vec3 d = point - center;
  const double rho = std::hypot(d.x(), d.y());
  const double r = std::hypot(rho, d.z());
  if (r == 0.0) throw DegenerateError("basis function evaluated at its center");
  const double cos_t = d.z() / r;
  const double sin_t = rho / r;
  double phi = 0.0;
  if (rho > 0.0) {
    phi = std::atan2(d.y(), d.x());
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  }
  s.ylm.resize(specfun::harmonic_count(L));
  s.radial.resize(L + 1);
  specfun::sph_harm_all(L, cos_t, sin_t, phi, s.ylm);
  specfun::outgoing_radial_all(L, specfun::RadialKind::PaperOutgoing, k, r, s.radial);
  for (int l = 0; l <= L; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int f = HarmonicIndex{l, m}.flat();
      out[f] = s.ylm[f] * s.radial[l];
    }
  }
}

}  // namespace

IncidentWave::IncidentWave(double k_, const Vec3& alpha_) : k(k_), alpha(alpha_) {
  if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("wave.k must be positive");
  if (std::abs(alpha.norm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("wave.alpha must be a unit vector");
  }
}

BasisSet::BasisSet(int max_degree, std::vector<Vec3> centers)
    : max_degree_(max_degree), centers_(std::move(centers)) {
  if (max_degree_ < 0) throw std::invalid_argument("basis.L must be >= 0");
  if (centers_.empty()) throw std::invalid_argument("basis needs at least one center");
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    for (std::size_t j = i + 1; j < centers_.size(); ++j) {
      if (centers_[i] == centers_[j]) {
        throw std::invalid_argument("basis centers " + std::to_string(i) + " and " +
                                    std::to_string(j) + " coincide");
      }
    }
  }
}

int BasisSet::column(HarmonicIndex idx, int j) const {
  if (idx.l < 0 || idx.l > max_degree_ || std::abs(idx.m) > idx.l) {
    throw DomainError("harmonic index outside basis");
  }
  if (j < 0 || j >= center_count()) throw DomainError("center index outside basis");
  return j * per_center() + idx.flat();
}

std::pair<HarmonicIndex, int> BasisSet::index_of(int column) const {
  if (column < 0 || column >= column_count()) throw DomainError("column outside basis");
  return {HarmonicIndex::from_flat(column % per_center()), column / per_center()};
}

cplx basis_column(HarmonicIndex idx, const Vec3& center, double k, const Vec3& point) {
  idx = HarmonicIndex::checked(idx.l, idx.m);
  RowScratch s;
  std::vector<cplx> out(specfun::harmonic_count(idx.l));
  center_block(idx.l, center, k, point, s, out);
  return out[idx.flat()];
}

void basis_row(const BasisSet& basis, double k, const Vec3& point, std::span<cplx> out) {
  if (out.size() != static_cast<std::size_t>(basis.column_count())) {
    throw DimensionError("basis_row: output size mismatch");
  }
  RowScratch s;
  const int per = basis.per_center();
  for (int j = 0; j < basis.center_count(); ++j) {
    center_block(basis.max_degree(), basis.centers()[j], k, point, s,
                 out.subspan(static_cast<std::size_t>(j) * per, per));
  }
}

LinearSystem assemble_system(const geometry::QuadratureGrid& grid, const BasisSet& basis,
                             const IncidentWave& wave, int threads) {
  const std::vector<Vec3> points = grid.points();
  const std::vector<double> weights = grid.weights();
  const auto rows = static_cast<Eigen::Index>(points.size());
  const Eigen::Index cols = basis.column_count();

  LinearSystem sys;
  // Row-major scratch so each worker writes a contiguous block.
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a =
      Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>::Zero(rows, cols);
  sys.b = CVector::Zero(rows);

  auto work = [&](Eigen::Index lo, Eigen::Index hi) {
    std::vector<cplx> row(cols);
    for (Eigen::Index i = lo; i < hi; ++i) {
      const double w = weights[i];
      if (w <= 0.0) continue;
      const double sw = std::sqrt(w);
      basis_row(basis, wave.k, points[i], row);
      for (Eigen::Index c = 0; c < cols; ++c) a(i, c) = row[c] * sw;
      sys.b(i) = -std::polar(1.0, wave.k * wave.alpha.dot(points[i])) * sw;
    }
  };

  const int nt = resolve_threads(threads, static_cast<std::size_t>(rows));
  if (nt == 1) {
    work(0, rows);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(nt);
    const Eigen::Index chunk = (rows + nt - 1) / nt;
    for (int t = 0; t < nt; ++t) {
      const Eigen::Index lo = std::min<Eigen::Index>(rows, t * chunk);
      const Eigen::Index hi = std::min<Eigen::Index>(rows, lo + chunk);
      pool.emplace_back([&, t, lo, hi] {
        try {
          work(lo, hi);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  sys.a = a;
  return sys;
}

double MrcSolution::condition_estimate() const {
  if (rank <= 0 || diagonal_ratios.empty()) return 0.0;
  const double last = diagonal_ratios[rank - 1];
  return last > 0.0 ? 1.0 / last : 0.0;
}

MrcSolution minimize_functional(const geometry::QuadratureGrid& grid, const BasisSet& basis,
                                const IncidentWave& wave, std::optional<double> rank_rtol,
                                int threads) {
  const LinearSystem sys = assemble_system(grid, basis, wave, threads);
  const double rtol = rank_rtol.value_or(linalg::auto_rank_rtol(sys.a.rows(), sys.a.cols()));
  linalg::LeastSquaresResult ls = linalg::qr_least_squares(sys.a, sys.b, rtol);

  std::vector<geometry::GridResolution> res;
  res.reserve(grid.patches.size());
  for (const auto& p : grid.patches) res.push_back({p.n1, p.n2});

  return MrcSolution{
      .basis = basis,
      .wave = wave,
      .coefficients = std::move(ls.coefficients),
      .F_star = ls.residual_norm_sq,
      .rank = ls.numerical_rank,
      .rank_rtol = rtol,
      .rows = sys.a.rows(),
      .grid = std::move(res),
      .scheme = grid.scheme,
      .diagonal_ratios = std::move(ls.diagonal_ratios),
  };
}

bool meets_tolerance(double F, double epsilon, EpsilonConvention convention) {
  return convention == EpsilonConvention::Norm ? std::sqrt(F) <= epsilon : F <= epsilon;
}

AdaptiveResult adaptive_solve(const geometry::Surface& surface, const IncidentWave& wave,
                              double epsilon, const EscalationPlan& plan,
                              const SolveOptions& options) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("solver.epsilon must be positive");
  if (plan.center_sets.empty()) throw std::invalid_argument("escalation plan has no center sets");
  if (plan.L_start < 0 || plan.L_max < plan.L_start) {
    throw std::invalid_argument("escalation plan needs 0 <= L_start <= L_max");
  }
  for (const auto& set : plan.center_sets) {
    for (const auto& c : set) {
      if (surface.contains(c) == false) {
        throw std::invalid_argument("basis center lies outside the obstacle");
      }
    }
  }

  const geometry::QuadratureGrid grid =
      geometry::quad_grid(surface, options.grid.n1, options.grid.n2, options.scheme,
                          options.per_patch);

  std::optional<MrcSolution> best;
  int solves = 0;
  for (const auto& centers : plan.center_sets) {
    for (int L = plan.L_start; L <= plan.L_max; ++L) {
      MrcSolution sol =
          minimize_functional(grid, BasisSet(L, centers), wave, options.rank_rtol, options.threads);
      ++solves;
      if (meets_tolerance(sol.F_star, epsilon, plan.convention)) {
        return AdaptiveResult{std::move(sol), true, solves};
      }
      if (!best || sol.F_star < best->F_star) best = std::move(sol);
    }
  }
  return AdaptiveResult{std::move(*best), false, solves};
}

}  // namespace mrc
