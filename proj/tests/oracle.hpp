#pragma once

// Test-side reference routines that do not call into the library.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration on the
/// three-term recurrence.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(z), p0 = P_{n-1}(z)
      const double dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
      if (std::abs(dz) < 1e-16) break;
    }
  }
  return {x, w};
}

/// Direction grid on the unit sphere: Gauss-Legendre in cos(theta), uniform
/// in phi. Exact for band-limited integrands of degree < min(2 n_theta, n_phi).
struct SphereRule {
  std::vector<double> cos_t, sin_t, phi, w;
};

inline SphereRule sphere_rule(int n_theta, int n_phi) {
  auto [x, wx] = gauss_legendre(n_theta);
  SphereRule r;
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      r.cos_t.push_back(x[i]);
      r.sin_t.push_back(std::sqrt((1.0 - x[i]) * (1.0 + x[i])));
      r.phi.push_back(2.0 * std::numbers::pi * j / n_phi);
      r.w.push_back(wx[i] * 2.0 * std::numbers::pi / n_phi);
    }
  }
  return r;
}

/// j_l(z) by its power series; accurate for small z.
inline double sph_bessel_j_series(int l, double z) {
  double pref = 1.0;
  for (int k = 1; k <= l; ++k) pref *= z / (2.0 * k + 1.0);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -(z * z / 2.0) / (k * (2.0 * l + 2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return pref * sum;
}

inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

/// P_l^m(x) without Condon-Shortley phase, from the explicit polynomial
/// coefficients of P_l differentiated m times.
inline double assoc_legendre_explicit(int l, int m, double x) {
  // P_l(x) = 2^-l sum_k (-1)^k C(l,k) C(2l-2k, l) x^{l-2k}
  std::vector<double> c(l + 1, 0.0);
  for (int k = 0; 2 * k <= l; ++k) {
    const double binom_lk = factorial(l) / (factorial(k) * factorial(l - k));
    const double binom2 = factorial(2 * l - 2 * k) / (factorial(l) * factorial(l - 2 * k));
    c[l - 2 * k] = ((k % 2) ? -1.0 : 1.0) * binom_lk * binom2 / std::pow(2.0, l);
  }
  for (int d = 0; d < m; ++d) {
    for (int p = 0; p < l; ++p) c[p] = c[p + 1] * (p + 1);
    c[l - d] = 0.0;
  }
  double v = 0.0;
  for (int p = l; p >= 0; --p) v = v * x + c[p];
  return std::pow(1.0 - x * x, 0.5 * m) * v;
}

}  // namespace oracle
