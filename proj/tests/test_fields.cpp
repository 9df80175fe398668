#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "mrc/errors.hpp"
#include "mrc/fields.hpp"
#include "mrc/specfun.hpp"
#include "oracle.hpp"

using namespace mrc;
using namespace mrc::geometry;
using namespace mrc::fields;

namespace {

constexpr double kPi = std::numbers::pi;

MrcSolution sphere_solve(int L, double k = 1.0, Vec3 alpha = Vec3::UnitX(), int n1 = 20,
                         int n2 = 10) {
  const auto g = quad_grid(build_surface(SphereSpec{1.0}), n1, n2,
                           QuadratureScheme::StandardSimpson);
  return minimize_functional(g, BasisSet(L, {Vec3::Zero()}), IncidentWave(k, alpha));
}

// Plane-wave scattering by the unit sphere, summed directly in the standard
// Hankel normalization: v = -sum (2l+1) i^l j_l(k)/h_l(k) h_l(kr) P_l(cos g).
cplx exact_series(const IncidentWave& w, const Vec3& x, int L) {
  const double r = x.norm();
  const double cg = w.alpha.dot(x) / r;
  cplx v = 0.0;
  for (int l = 0; l <= L; ++l) {
    const auto h1 = specfun::outgoing_radial(l, specfun::RadialKind::StandardHankel1, 1.0, w.k);
    const auto hr = specfun::outgoing_radial(l, specfun::RadialKind::StandardHankel1, 1.0, w.k * r);
    v -= (2.0 * l + 1) * specfun::i_pow(l) * specfun::sph_bessel_j(l, w.k) / h1 * hr *
         specfun::legendre_p(l, cg);
  }
  return v;
}

Vec3 direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

}  // namespace

TEST_CASE("incident wave") {
  CHECK(std::abs(incident(IncidentWave(1.0, Vec3::UnitX()), Vec3(0, 5, -3)) - 1.0) < 1e-15);
  CHECK(std::abs(incident(IncidentWave(2.0, Vec3::UnitZ()), Vec3(0, 0, kPi / 2)) + 1.0) < 1e-15);
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  const IncidentWave w(1.7, Vec3(0.6, 0, 0.8));
  for (int i = 0; i < 100; ++i) {
    CHECK(std::abs(incident(w, Vec3(u(rng), u(rng), u(rng)))) == doctest::Approx(1.0));
  }
}

TEST_CASE("exact sphere coefficients") {
  const IncidentWave w(1.0, Vec3::UnitX());
  const CVector c = exact_sphere_coefficients(w, 10);
  CHECK(c.size() == 121);

  // boundary cancellation on a 40x20 grid
  const BasisSet b(10, {Vec3::Zero()});
  const auto g = quad_grid(build_surface(SphereSpec{1.0}), 40, 20,
                           QuadratureScheme::StandardSimpson);
  double worst = 0.0;
  for (const auto& x : g.points()) {
    worst = std::max(worst, std::abs(incident(w, x) + scattered_field(b, w.k, c, x)));
  }
  CHECK(worst <= 1e-6);

  // independent series in the standard normalization
  for (const Vec3& x : {Vec3(2, 0, 0), Vec3(0.3, -1.4, 0.9), Vec3(-3, 1, 2)}) {
    CHECK(std::abs(scattered_field(b, w.k, c, x) - exact_series(w, x, 10)) < 1e-12);
  }

  const CVector cz = exact_sphere_coefficients(IncidentWave(1.3, Vec3::UnitZ()), 6);
  for (int l = 0; l <= 6; ++l) {
    for (int m = -l; m <= l; ++m) {
      if (m != 0) CHECK(std::abs(cz(specfun::HarmonicIndex{l, m}.flat())) < 1e-15);
    }
  }
  CHECK(std::abs(cz(0)) > 0.0);

  const auto s7 = sphere_solve(7);
  CHECK(coeff_error(s7.coefficients, exact_sphere_coefficients(w, 7)) <= 5e-4);
}

TEST_CASE("scattered field") {
  const auto s7 = sphere_solve(7);
  const CVector zero = CVector::Zero(s7.coefficients.size());
  CHECK(scattered_field(s7.basis, 1.0, zero, Vec3(2, 0, 0)) == cplx(0.0));

  const IncidentWave w(1.0, Vec3::UnitX());
  CHECK(std::abs(scattered_field(s7, Vec3(2, 0, 0)) - exact_series(w, Vec3(2, 0, 0), 30)) < 1e-3);
  CHECK(std::abs(total_field(s7, Vec3(2, 0, 0)) -
                 (incident(w, Vec3(2, 0, 0)) + scattered_field(s7, Vec3(2, 0, 0)))) < 1e-15);

  // linearity
  const BasisSet b(3, {Vec3::Zero(), Vec3(0.2, 0, 0)});
  std::mt19937 rng(2);
  std::normal_distribution<double> n;
  CVector c1(b.column_count()), c2(b.column_count());
  for (int i = 0; i < b.column_count(); ++i) {
    c1(i) = {n(rng), n(rng)};
    c2(i) = {n(rng), n(rng)};
  }
  const Vec3 x(1.1, -0.7, 0.4);
  const cplx lhs = scattered_field(b, 1.0, c1 + c2, x);
  const cplx rhs = scattered_field(b, 1.0, c1, x) + scattered_field(b, 1.0, c2, x);
  CHECK(std::abs(lhs - rhs) <= 1e-14 * std::abs(lhs) + 1e-14);
  CHECK_THROWS_AS(scattered_field(b, 1.0, c1, Vec3(0.2, 0, 0)), DegenerateError);

  const auto samples = sample_fields(s7, {Vec3(2, 0, 0), Vec3(0, 3, 0)});
  REQUIRE(samples.size() == 2);
  CHECK(samples[1].scattered == scattered_field(s7, Vec3(0, 3, 0)));
}

TEST_CASE("far field projection recovers the coefficients") {
  const auto s = sphere_solve(6, 1.0, Vec3(0.6, 0.0, 0.8));
  const auto rule = oracle::sphere_rule(30, 60);
  const int nh = specfun::harmonic_count(6);
  CVector proj = CVector::Zero(nh);
  std::vector<cplx> y(nh);
  for (std::size_t q = 0; q < rule.w.size(); ++q) {
    const Vec3 d(rule.sin_t[q] * std::cos(rule.phi[q]), rule.sin_t[q] * std::sin(rule.phi[q]),
                 rule.cos_t[q]);
    const cplx a = far_field_amplitude(s, d);
    specfun::sph_harm_all(6, rule.cos_t[q], rule.sin_t[q], rule.phi[q], y);
    for (int i = 0; i < nh; ++i) proj(i) += rule.w[q] * a * std::conj(y[i]);
  }
  CHECK((proj - s.coefficients).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK_THROWS_AS(far_field_amplitude(s, Vec3(1, 1, 0)), std::invalid_argument);
}

TEST_CASE("far field matches the asymptotics of the near field") {
  const double r = 1e4;
  auto check = [&](const MrcSolution& s) {
    for (const Vec3& d : {direction(0.3, 0.2), direction(1.9, 4.0), direction(kPi / 2, 0.0)}) {
      const cplx a = far_field_amplitude(s, d);
      const cplx ext = r * std::exp(cplx(0, -s.wave.k * r)) * scattered_field(s, r * d);
      CHECK(std::abs(ext - a) <= 1e-3 * std::abs(a));
    }
  };
  check(sphere_solve(7));

  const IncidentWave w(1.0, Vec3(0, 0.6, 0.8));
  const auto gc = quad_grid(build_surface(CubeSpec{1.0}), 10, 10, QuadratureScheme::StandardSimpson);
  const std::vector<Vec3> centers{Vec3::Zero(), Vec3(0.2, 0, 0), Vec3(0, -0.2, 0),
                                  Vec3(0, 0, 0.2)};
  check(minimize_functional(gc, BasisSet(4, centers), w));

  const auto pat = far_field_pattern(sphere_solve(3), 4, 6);
  CHECK(pat.size() == 5 * 6);
  CHECK(pat.back().theta == doctest::Approx(kPi));
}

TEST_CASE("far field depends only on the scattering angle for the sphere") {
  const IncidentWave w(1.0, Vec3::UnitX());
  const auto s = sphere_solve(7);
  const CVector ce = exact_sphere_coefficients(w, 7);
  // both pairs at alpha . alpha' = cos(0.8)
  const Vec3 d2(std::cos(0.8), 0.0, std::sin(0.8));
  const Vec3 d3(std::cos(0.8), std::sin(0.8) * std::cos(1.1), std::sin(0.8) * std::sin(1.1));
  CHECK(std::abs(far_field_amplitude(s, d2) - far_field_amplitude(s, d3)) <= 1e-6);
  CHECK(std::abs(far_field_amplitude(s.basis, 1.0, ce, d2) -
                 far_field_amplitude(s.basis, 1.0, ce, d3)) <= 1e-12);
  CHECK(d2.dot(w.alpha) == doctest::Approx(d3.dot(w.alpha)));
}

TEST_CASE("translation covariance of the far field") {
  const Vec3 t(0.4, -0.3, 0.7);
  const IncidentWave w(1.2, Vec3(0, 0.6, 0.8));
  auto solve_at = [&](const Vec3& shift) {
    PatchSpec ps;
    ps.kind = PatchSpec::Kind::EllipsoidPatch;
    ps.parameter = 1.5;
    ps.origin = shift;
    const auto g = quad_grid(build_surface(PatchListSpec{{ps}}), 20, 10,
                             QuadratureScheme::StandardSimpson);
    return minimize_functional(g, BasisSet(5, {shift, shift + Vec3(0, 0, 0.3)}), w);
  };
  const auto s0 = solve_at(Vec3::Zero());
  const auto s1 = solve_at(t);
  const cplx shift = std::exp(cplx(0, w.k * w.alpha.dot(t)));
  for (const Vec3& d : {direction(0.4, 1.0), direction(2.2, 5.0), Vec3(0, 0, 1)}) {
    const cplx a0 = far_field_amplitude(s0, d);
    const cplx a1 = far_field_amplitude(s1, d);
    CHECK(std::abs(std::abs(a1) - std::abs(a0)) <= 1e-8);
    CHECK(std::abs(a1 - shift * std::exp(cplx(0, -w.k * d.dot(t))) * a0) <= 1e-8);
  }
}

TEST_CASE("coefficient error") {
  CVector a(3), b(3);
  a << 1.0, cplx(0, 1), 2.0;
  b << 1.0, cplx(0, 1), 2.0;
  CHECK(coeff_error(a, b) == 0.0);
  b(2) = cplx(2.0, 0.5);
  CHECK(coeff_error(a, b) == doctest::Approx(0.5));
  CHECK_THROWS_AS(coeff_error(a, CVector(2)), DimensionError);
}

TEST_CASE("boundary trace error") {
  const IncidentWave w(1.0, Vec3::UnitX());
  const Surface sphere = build_surface(SphereSpec{1.0});
  const BasisSet b10(10, {Vec3::Zero()});
  CHECK(boundary_trace_error(b10, w, exact_sphere_coefficients(w, 10), sphere, 40, 20).l2 <= 1e-5);

  const auto z = boundary_trace_error(b10, w, CVector::Zero(121), sphere, 40, 20);
  CHECK(z.l2 == doctest::Approx(std::sqrt(4 * kPi)).epsilon(1e-3));
  CHECK(z.max == doctest::Approx(1.0));

  const auto s7 = sphere_solve(7);
  const double l2 = boundary_trace_error(s7, sphere, 40, 20).l2;
  const double rf = std::sqrt(s7.F_star);
  CHECK(l2 <= 2.0 * rf);
  CHECK(l2 >= 0.5 * rf);
  CHECK_THROWS_AS(boundary_trace_error(s7, sphere, 20, 10), std::invalid_argument);
  CHECK_THROWS_AS(boundary_trace_error(s7, sphere, 40, 10), std::invalid_argument);
}

TEST_CASE("scattered field satisfies the Helmholtz equation") {
  const auto s = sphere_solve(7, 1.5, Vec3(0, 0.8, 0.6));
  REQUIRE(s.coefficients.norm() <= 10.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const double h = 1e-3, k = 1.5;
  int n = 0;
  while (n < 20) {
    const Vec3 x(u(rng), u(rng), u(rng));
    if (x.norm() < 1.5) continue;
    ++n;
    cplx lap = -6.0 * scattered_field(s, x);
    for (int a = 0; a < 3; ++a) {
      Vec3 e = Vec3::Zero();
      e[a] = h;
      lap += scattered_field(s, x + e) + scattered_field(s, x - e);
    }
    lap /= h * h;
    CHECK(std::abs(lap + k * k * scattered_field(s, x)) <= 1e-4);
  }
}
