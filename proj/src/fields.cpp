#include "mrc/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mrc/errors.hpp"

namespace mrc::fields {

namespace {

constexpr double kUnitTol = 1e-12;

void check_size(const BasisSet& basis, const CVector& c) {
  if (c.size() != basis.column_count()) {
    throw DimensionError("coefficient vector has length " + std::to_string(c.size()) +
                         ", basis has " + std::to_string(basis.column_count()) + " columns");
  }
}

}  // namespace

cplx incident(const IncidentWave& wave, const Vec3& x) {
  return std::polar(1.0, wave.k * wave.alpha.dot(x));
}

CVector exact_sphere_coefficients(const IncidentWave& wave, int L) {
  if (L < 0) throw DomainError("exact_sphere_coefficients: L must be >= 0");
  const geometry::SphericalCoords a = geometry::to_spherical(wave.alpha);
  std::vector<cplx> y(specfun::harmonic_count(L));
  specfun::sph_harm_all(L, wave.alpha.z(), std::hypot(wave.alpha.x(), wave.alpha.y()), a.phi, y);

  std::vector<double> j(L + 1);
  std::vector<cplx> h(L + 1);
  specfun::sph_bessel_j_all(L, wave.k, j);
  specfun::outgoing_radial_all(L, specfun::RadialKind::PaperOutgoing, wave.k, 1.0, h);

  CVector c(specfun::harmonic_count(L));
  for (int l = 0; l <= L; ++l) {
    const cplx f = -4.0 * std::numbers::pi * specfun::i_pow(l) * j[l] / h[l];
    for (int m = -l; m <= l; ++m) {
      const int idx = HarmonicIndex{l, m}.flat();
      c(idx) = f * std::conj(y[idx]);
    }
  }
  return c;
}

cplx scattered_field(const BasisSet& basis, double k, const CVector& c, const Vec3& x) {
  check_size(basis, c);
  std::vector<cplx> row(basis.column_count());
  basis_row(basis, k, x, row);
  cplx s{0.0, 0.0};
  for (Eigen::Index i = 0; i < c.size(); ++i) s += c(i) * row[i];
  return s;
}

cplx scattered_field(const MrcSolution& solution, const Vec3& x) {
  return scattered_field(solution.basis, solution.wave.k, solution.coefficients, x);
}

cplx total_field(const MrcSolution& solution, const Vec3& x) {
  return incident(solution.wave, x) + scattered_field(solution, x);
}

cplx far_field_amplitude(const BasisSet& basis, double k, const CVector& c,
                         const Vec3& alpha_prime) {
  check_size(basis, c);
  if (std::abs(alpha_prime.norm() - 1.0) > kUnitTol) {
    throw std::invalid_argument("far-field direction must be a unit vector");
  }
  const int L = basis.max_degree();
  const geometry::SphericalCoords d = geometry::to_spherical(alpha_prime);
  std::vector<cplx> y(specfun::harmonic_count(L));
  specfun::sph_harm_all(L, alpha_prime.z(), std::hypot(alpha_prime.x(), alpha_prime.y()), d.phi,
                        y);
  cplx a{0.0, 0.0};
  for (int j = 0; j < basis.center_count(); ++j) {
    cplx s{0.0, 0.0};
    const Eigen::Index off = static_cast<Eigen::Index>(j) * basis.per_center();
    for (int f = 0; f < basis.per_center(); ++f) s += c(off + f) * y[f];
    a += s * std::polar(1.0, -k * alpha_prime.dot(basis.centers()[j]));
  }
  return a;
}

cplx far_field_amplitude(const MrcSolution& solution, const Vec3& alpha_prime) {
  return far_field_amplitude(solution.basis, solution.wave.k, solution.coefficients,
                             alpha_prime);
}

double coeff_error(const CVector& c_star, const CVector& c_exact) {
  if (c_star.size() != c_exact.size()) {
    throw DimensionError("coeff_error: lengths " + std::to_string(c_star.size()) + " and " +
                         std::to_string(c_exact.size()) + " differ");
  }
  return (c_star - c_exact).norm();
}

TraceError boundary_trace_error(const BasisSet& basis, const IncidentWave& wave,
                                const CVector& c, const geometry::Surface& surface,
                                int validation_n1, int validation_n2) {
  check_size(basis, c);
  const geometry::QuadratureGrid grid =
      geometry::quad_grid(surface, validation_n1, validation_n2,
                          geometry::QuadratureScheme::StandardSimpson);
  double sum = 0.0;
  double mx = 0.0;
  for (const auto& pg : grid.patches) {
    for (std::size_t i = 0; i < pg.points.size(); ++i) {
      if (pg.weights[i] <= 0.0) continue;
      const Vec3& x = pg.points[i];
      const double e = std::abs(incident(wave, x) + scattered_field(basis, wave.k, c, x));
      sum += pg.weights[i] * e * e;
      mx = std::max(mx, e);
    }
  }
  return {std::sqrt(sum), mx};
}

TraceError boundary_trace_error(const MrcSolution& solution, const geometry::Surface& surface,
                                int validation_n1, int validation_n2) {
  for (const auto& g : solution.grid) {
    if (validation_n1 <= g.n1 || validation_n2 <= g.n2) {
      throw std::invalid_argument("validation grid must be finer than the solve grid");
    }
  }
  return boundary_trace_error(solution.basis, solution.wave, solution.coefficients, surface,
                              validation_n1, validation_n2);
}

std::vector<FarFieldSample> far_field_pattern(const MrcSolution& solution, int n_theta,
                                              int n_phi) {
  if (n_theta < 1 || n_phi < 1) {
    throw std::invalid_argument("far-field pattern needs n_theta >= 1 and n_phi >= 1");
  }
  std::vector<FarFieldSample> out;
  out.reserve(static_cast<std::size_t>(n_theta + 1) * n_phi);
  for (int it = 0; it <= n_theta; ++it) {
    const double theta = (it == n_theta) ? std::numbers::pi : std::numbers::pi * it / n_theta;
    const geometry::PolarTrig t = geometry::polar_trig(theta);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double phi = 2.0 * std::numbers::pi * ip / n_phi;
      Vec3 dir(t.sin * std::cos(phi), t.sin * std::sin(phi), t.cos);
      dir.normalize();
      out.push_back({theta, phi, far_field_amplitude(solution, dir)});
    }
  }
  return out;
}

std::vector<FieldSample> sample_fields(const MrcSolution& solution,
                                       const std::vector<Vec3>& points) {
  std::vector<FieldSample> out;
  out.reserve(points.size());
  for (const auto& x : points) {
    const cplx v = scattered_field(solution, x);
    out.push_back({x, incident(solution.wave, x) + v, v});
  }
  return out;
}

}  // namespace mrc::fields
