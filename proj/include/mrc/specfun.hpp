#pragma once

// Special functions for spherical-wave expansions.
//
// Conventions:
//   * P_l^m(x) = (1 - x^2)^{m/2} d^m/dx^m P_l(x) for m >= 0, with NO
//     Condon-Shortley factor (differs from std::assoc_legendre, GSL, scipy
//     by (-1)^m).
//   * Theta_lm(x) = sqrt((2l+1)/2 (l-m)!/(l+m)!) P_l^m(x); for m < 0,
//     Theta_lm = (-1)^m Theta_{l,-m}.
//   * Y_lm(theta, phi) = (2 pi)^{-1/2} e^{i m phi} Theta_lm(cos theta).
//   * The outgoing radial function h_l(kr) is normalized so that
//     h_l(kr) ~ e^{ikr}/r as r -> infinity, i.e. i^{l+1} k h_l^{(1)}(kr).

#include <complex>
#include <span>

namespace mrc::specfun {

using cplx = std::complex<double>;

/// Degree/order pair of a spherical harmonic.
struct HarmonicIndex {
  int l = 0;
  int m = 0;

  /// Throws DomainError unless l >= 0 and |m| <= l.
  static HarmonicIndex checked(int l, int m);

  /// Position in the (l, m) enumeration l^2 + l + m.
  [[nodiscard]] constexpr int flat() const noexcept { return l * l + l + m; }
  static HarmonicIndex from_flat(int flat);

  friend constexpr bool operator==(HarmonicIndex, HarmonicIndex) = default;
};

/// Number of (l, m) pairs with 0 <= l <= max_degree.
constexpr int harmonic_count(int max_degree) noexcept {
  return (max_degree + 1) * (max_degree + 1);
}

enum class RadialKind { StandardHankel1, PaperOutgoing };

double legendre_p(int l, double x);
double legendre_assoc(int l, int m, double x);
double theta_lm(HarmonicIndex idx, double x);
cplx sph_harm(HarmonicIndex idx, double theta, double phi);

double sph_bessel_j(int l, double z);
double sph_bessel_y(int l, double z);
cplx sph_hankel1(int l, double z);

cplx outgoing_radial(int l, RadialKind kind, double k, double r);

// Batch evaluation used by the assembly loops. Output spans must hold
// exactly the number of entries stated.

/// Theta_lm for all 0 <= l <= lmax, -l <= m <= l, indexed by flat().
/// `sin_theta` must be the non-negative sqrt(1 - cos_theta^2); passing it
/// separately keeps pole values exact. Size: harmonic_count(lmax).
void theta_all(int lmax, double cos_theta, double sin_theta,
               std::span<double> out);

/// Y_lm for all (l, m) up to lmax, indexed by flat(). Size: harmonic_count(lmax).
void sph_harm_all(int lmax, double cos_theta, double sin_theta, double phi,
                  std::span<cplx> out);

/// j_0..j_lmax at z > 0. Size: lmax + 1.
void sph_bessel_j_all(int lmax, double z, std::span<double> out);
/// y_0..y_lmax at z > 0. Size: lmax + 1.
void sph_bessel_y_all(int lmax, double z, std::span<double> out);
/// Radial functions of orders 0..lmax. Size: lmax + 1.
void outgoing_radial_all(int lmax, RadialKind kind, double k, double r,
                         std::span<cplx> out);

/// i^n for any integer n.
cplx i_pow(int n) noexcept;

}  // namespace mrc::specfun
