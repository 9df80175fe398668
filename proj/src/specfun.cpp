#include "mrc/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mrc/errors.hpp"

namespace mrc::specfun {

namespace {

constexpr double kUnitTol = 1e-12;

void check_unit_interval(double x, const char* what) {
  if (!(std::abs(x) <= 1.0 + kUnitTol)) {
    throw DomainError(std::string(what) + ": |x| > 1 (x = " +
                      std::to_string(x) + ")");
  }
}

void check_positive(double z, const char* what) {
  if (!(z > 0.0)) {
    throw DomainError(std::string(what) + ": argument must be > 0");
  }
}

void check_size(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": output span has size " +
                         std::to_string(got) + ", expected " +
                         std::to_string(want));
  }
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

HarmonicIndex HarmonicIndex::checked(int l, int m) {
  if (l < 0 || m < -l || m > l) {
    throw DomainError("invalid harmonic index (l=" + std::to_string(l) +
                      ", m=" + std::to_string(m) + ")");
  }
  return {l, m};
}

HarmonicIndex HarmonicIndex::from_flat(int flat) {
  if (flat < 0) throw DomainError("negative flat harmonic index");
  const int l = static_cast<int>(std::sqrt(static_cast<double>(flat)));
  // guard against sqrt rounding at perfect squares
  int ll = l;
  while (ll * ll > flat) --ll;
  while ((ll + 1) * (ll + 1) <= flat) ++ll;
  return {ll, flat - ll * ll - ll};
}

cplx i_pow(int n) noexcept {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

double legendre_p(int l, double x) {
  if (l < 0) throw DomainError("legendre_p: negative degree");
  check_unit_interval(x, "legendre_p");
  x = clamp_unit(x);
  if (l == 0) return 1.0;
  double p_prev = 1.0;
  double p = x;
  for (int n = 1; n < l; ++n) {
    const double p_next = ((2 * n + 1) * x * p - n * p_prev) / (n + 1);
    p_prev = p;
    p = p_next;
  }
  return p;
}

double legendre_assoc(int l, int m, double x) {
  if (l < 0 || m < 0 || m > l) {
    throw DomainError("legendre_assoc: requires 0 <= m <= l");
  }
  check_unit_interval(x, "legendre_assoc");
  x = clamp_unit(x);
  const double s = std::sqrt((1.0 - x) * (1.0 + x));

  // P_m^m = (2m-1)!! s^m  (positive convention)
  double pmm = 1.0;
  for (int i = 1; i <= m; ++i) pmm *= (2 * i - 1) * s;
  if (l == m) return pmm;

  double p_prev = pmm;
  double p = x * (2 * m + 1) * pmm;
  for (int n = m + 2; n <= l; ++n) {
    const double p_next = (x * (2 * n - 1) * p - (n + m - 1) * p_prev) / (n - m);
    p_prev = p;
    p = p_next;
  }
  return p;
}

void theta_all(int lmax, double cos_theta, double sin_theta,
               std::span<double> out) {
  if (lmax < 0) throw DomainError("theta_all: negative degree");
  check_size(out.size(), static_cast<std::size_t>(harmonic_count(lmax)),
             "theta_all");
  const double x = cos_theta;
  const double s = sin_theta;

  // Normalized recurrences (orthonormal on [-1, 1]); no factorials are formed.
  double diag = std::sqrt(0.5);
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) diag *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    out[HarmonicIndex{m, m}.flat()] = diag;
    if (m == lmax) break;

    double prev = diag;
    double cur = x * std::sqrt(2.0 * m + 3.0) * diag;
    out[HarmonicIndex{m + 1, m}.flat()] = cur;
    double a_prev = std::sqrt(2.0 * m + 3.0);  // a_{m+1,m}
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) /
                                 (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double next = a * (x * cur - prev / a_prev);
      prev = cur;
      cur = next;
      a_prev = a;
      out[HarmonicIndex{l, m}.flat()] = cur;
    }
  }
  for (int l = 1; l <= lmax; ++l) {
    for (int m = 1; m <= l; ++m) {
      const double v = out[HarmonicIndex{l, m}.flat()];
      out[HarmonicIndex{l, -m}.flat()] = (m % 2 == 0) ? v : -v;
    }
  }
}

double theta_lm(HarmonicIndex idx, double x) {
  idx = HarmonicIndex::checked(idx.l, idx.m);
  check_unit_interval(x, "theta_lm");
  x = clamp_unit(x);
  std::vector<double> buf(harmonic_count(idx.l));
  theta_all(idx.l, x, std::sqrt((1.0 - x) * (1.0 + x)), buf);
  return buf[idx.flat()];
}

void sph_harm_all(int lmax, double cos_theta, double sin_theta, double phi,
                  std::span<cplx> out) {
  check_size(out.size(), static_cast<std::size_t>(harmonic_count(lmax)),
             "sph_harm_all");
  std::vector<double> th(out.size());
  theta_all(lmax, cos_theta, sin_theta, th);

  const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const cplx step = std::polar(1.0, phi);
  cplx e_pos{1.0, 0.0};  // e^{i m phi}
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) e_pos *= step;
    // recompute directly every few steps to bound drift
    if (m % 16 == 0 && m > 0) e_pos = std::polar(1.0, m * phi);
    const cplx e_neg = std::conj(e_pos);
    for (int l = m; l <= lmax; ++l) {
      out[HarmonicIndex{l, m}.flat()] = norm * th[HarmonicIndex{l, m}.flat()] * e_pos;
      if (m > 0) {
        out[HarmonicIndex{l, -m}.flat()] =
            norm * th[HarmonicIndex{l, -m}.flat()] * e_neg;
      }
    }
  }
}

cplx sph_harm(HarmonicIndex idx, double theta, double phi) {
  idx = HarmonicIndex::checked(idx.l, idx.m);
  const double x = std::cos(theta);
  const double s = std::abs(std::sin(theta));
  std::vector<cplx> buf(harmonic_count(idx.l));
  sph_harm_all(idx.l, x, s, phi, buf);
  return buf[idx.flat()];
}

void sph_bessel_j_all(int lmax, double z, std::span<double> out) {
  if (lmax < 0) throw DomainError("sph_bessel_j: negative order");
  check_positive(z, "sph_bessel_j");
  check_size(out.size(), static_cast<std::size_t>(lmax + 1), "sph_bessel_j_all");

  const double j0 = std::sin(z) / z;
  if (lmax == 0) {
    out[0] = j0;
    return;
  }

  if (z >= static_cast<double>(lmax)) {
    // Upward recurrence is stable while l <= z.
    out[0] = j0;
    out[1] = std::sin(z) / (z * z) - std::cos(z) / z;
    for (int l = 1; l < lmax; ++l) {
      out[l + 1] = (2.0 * l + 1.0) / z * out[l] - out[l - 1];
    }
    return;
  }

  // Miller's downward recurrence from well above max(lmax, z), normalized
  // against the closed form of j_0 (or j_1 near zeros of j_0).
  const int top = std::max(lmax, static_cast<int>(z)) + 20 +
                  static_cast<int>(std::sqrt(40.0 * std::max(lmax, 1)));
  constexpr double kBig = 1e200;
  std::vector<double> f(top + 2, 0.0);
  f[top + 1] = 0.0;
  f[top] = 1e-300;
  for (int n = top; n >= 1; --n) {
    f[n - 1] = (2.0 * n + 1.0) / z * f[n] - f[n + 1];
    if (std::abs(f[n - 1]) > kBig) {
      for (int i = n - 1; i <= top + 1; ++i) f[i] /= kBig;
    }
  }
  const double j1 = std::sin(z) / (z * z) - std::cos(z) / z;
  const double scale = (std::abs(j0) >= std::abs(j1)) ? j0 / f[0] : j1 / f[1];
  for (int l = 0; l <= lmax; ++l) out[l] = f[l] * scale;
}

void sph_bessel_y_all(int lmax, double z, std::span<double> out) {
  if (lmax < 0) throw DomainError("sph_bessel_y: negative order");
  check_positive(z, "sph_bessel_y");
  check_size(out.size(), static_cast<std::size_t>(lmax + 1), "sph_bessel_y_all");
  out[0] = -std::cos(z) / z;
  if (lmax == 0) return;
  out[1] = -std::cos(z) / (z * z) - std::sin(z) / z;
  for (int l = 1; l < lmax; ++l) {
    out[l + 1] = (2.0 * l + 1.0) / z * out[l] - out[l - 1];
  }
}

double sph_bessel_j(int l, double z) {
  if (l < 0) throw DomainError("sph_bessel_j: negative order");
  std::vector<double> buf(l + 1);
  sph_bessel_j_all(l, z, buf);
  return buf[l];
}

double sph_bessel_y(int l, double z) {
  if (l < 0) throw DomainError("sph_bessel_y: negative order");
  std::vector<double> buf(l + 1);
  sph_bessel_y_all(l, z, buf);
  return buf[l];
}

cplx sph_hankel1(int l, double z) { return {sph_bessel_j(l, z), sph_bessel_y(l, z)}; }

void outgoing_radial_all(int lmax, RadialKind kind, double k, double r,
                         std::span<cplx> out) {
  if (!(k > 0.0)) throw DomainError("outgoing_radial: wavenumber must be > 0");
  if (!(r > 0.0)) throw DomainError("outgoing_radial: radius must be > 0");
  check_size(out.size(), static_cast<std::size_t>(lmax + 1), "outgoing_radial_all");
  const double z = k * r;
  std::vector<double> j(lmax + 1), y(lmax + 1);
  sph_bessel_j_all(lmax, z, j);
  sph_bessel_y_all(lmax, z, y);
  for (int l = 0; l <= lmax; ++l) {
    const cplx h{j[l], y[l]};
    out[l] = (kind == RadialKind::PaperOutgoing) ? i_pow(l + 1) * k * h : h;
  }
}

cplx outgoing_radial(int l, RadialKind kind, double k, double r) {
  if (l < 0) throw DomainError("outgoing_radial: negative order");
  std::vector<cplx> buf(l + 1);
  outgoing_radial_all(l, kind, k, r, buf);
  return buf[l];
}

}  // namespace mrc::specfun
