#pragma once

// Incident, scattered and far fields of an expansion, the exact sphere
// solution, and error metrics.

#include <vector>

#include "mrc/geometry.hpp"
#include "mrc/solver.hpp"

namespace mrc::fields {

/// e^{i k alpha . x}.
cplx incident(const IncidentWave& wave, const Vec3& x);

/// Coefficients of the scattered field for the unit sphere, in flat (l, m)
/// order for a single center at the origin.
CVector exact_sphere_coefficients(const IncidentWave& wave, int L);

/// sum_j sum_lm c_lmj psi_lm(x - x_j). Throws DegenerateError at a center.
cplx scattered_field(const BasisSet& basis, double k, const CVector& c, const Vec3& x);
cplx scattered_field(const MrcSolution& solution, const Vec3& x);
cplx total_field(const MrcSolution& solution, const Vec3& x);

/// A(alpha') = sum c_lmj Y_lm(alpha') e^{-i k alpha' . x_j}. Throws
/// std::invalid_argument unless |alpha'| = 1 within 1e-12.
cplx far_field_amplitude(const BasisSet& basis, double k, const CVector& c,
                         const Vec3& alpha_prime);
cplx far_field_amplitude(const MrcSolution& solution, const Vec3& alpha_prime);

/// Euclidean norm of c_star - c_exact. Throws DimensionError on length mismatch.
double coeff_error(const CVector& c_star, const CVector& c_exact);

struct TraceError {
  double l2 = 0.0;
  double max = 0.0;
};

/// Discrete L2 (standard Simpson weights) and max norms of u0 + v over a
/// validation grid. The max runs over nodes with positive weight.
TraceError boundary_trace_error(const BasisSet& basis, const IncidentWave& wave,
                                const CVector& c, const geometry::Surface& surface,
                                int validation_n1, int validation_n2);
/// As above; the validation grid must be strictly finer than the solve grid
/// on every patch (std::invalid_argument otherwise).
TraceError boundary_trace_error(const MrcSolution& solution, const geometry::Surface& surface,
                                int validation_n1, int validation_n2);

struct FarFieldSample {
  double theta = 0.0;
  double phi = 0.0;
  cplx amplitude;
};

/// Far field on a (n_theta + 1) x n_phi direction grid, theta in [0, pi],
/// phi in [0, 2pi).
std::vector<FarFieldSample> far_field_pattern(const MrcSolution& solution, int n_theta,
                                              int n_phi);

struct FieldSample {
  Vec3 x;
  cplx total;
  cplx scattered;
};

/// Fields at the given points, in order.
std::vector<FieldSample> sample_fields(const MrcSolution& solution,
                                       const std::vector<Vec3>& points);

}  // namespace mrc::fields
