#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "fpspec/errors.hpp"

namespace fpspec {

using cplx = std::complex<double>;

namespace detail {

/// Exponential integral E1(w) by modified Lentz continued fraction,
/// E1(w) = e^{-w} / (w + 1 - 1/(w + 3 - 4/(w + 5 - ...))).
/// Valid away from the negative real axis; we only call it with
/// |arg w| near pi/2, where convergence is fast.
inline cplx expint_e1_cf(cplx w) {
  const double tiny = 1e-300;
  cplx b = w + 1.0;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int k = 1; k <= 400; ++k) {
    const cplx a = -static_cast<double>(k) * static_cast<double>(k);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-w) * h;
}

/// Power series for Si, usable whenever cancellation stays mild
/// (small |Re z|; the imaginary direction has no sign alternation).
inline cplx si_series(cplx z) {
  const cplx z2 = z * z;
  cplx term = z;  // z^{2m+1}/(2m+1)!
  cplx sum = z;
  for (int m = 0; m < 120; ++m) {
    term *= -z2 / ((2.0 * m + 2.0) * (2.0 * m + 3.0));
    const cplx add = term / (2.0 * m + 3.0);
    sum += add;
    if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return sum;
}

}  // namespace detail

/// Sine integral Si(z) = int_0^z sin(t)/t dt for complex z on a strip
/// around the real axis. Power series for moderate |Re z|; beyond that
/// the identity Si(z) = pi/2 + (i/2)(E1(-iz) - E1(iz)) with E1 by
/// continued fraction. Odd in z.
inline cplx sine_integral(cplx z) {
  if (std::real(z) < 0.0) return -sine_integral(-z);
  if (std::real(z) <= 7.0) {
    if (std::abs(std::imag(z)) > 16.0)
      throw OffStrip("sine_integral: argument too far from the real axis");
    return detail::si_series(z);
  }
  const double half_pi = 1.57079632679489661923;
  const cplx i(0.0, 1.0);
  return half_pi + 0.5 * i * (detail::expint_e1_cf(-i * z) - detail::expint_e1_cf(i * z));
}

/// Cin(v) = int_0^v (1 - cos t)/t dt for real v; even in v. Series for
/// small |v|, otherwise gamma + ln v - Ci(v) with Ci from the same E1
/// continued fraction (E1(iv) = -Ci(v) + i(Si(v) - pi/2)).
inline double cin_integral(double v) {
  v = std::abs(v);
  if (v == 0.0) return 0.0;
  if (v <= 7.0) {
    const double v2 = v * v;
    double term = 0.5 * v2;  // (-1)^{m+1} v^{2m}/(2m)! at m = 1
    double sum = term / 2.0;
    for (int m = 2; m <= 60; ++m) {
      term *= -v2 / ((2.0 * m) * (2.0 * m - 1.0));
      const double add = term / (2.0 * m);
      sum += add;
      if (std::abs(add) < 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return sum;
  }
  const double euler_gamma = 0.57721566490153286061;
  const double ci = -std::real(detail::expint_e1_cf(cplx(0.0, v)));
  return euler_gamma + std::log(v) - ci;
}

/// int_0^1 (e^{-i v s} - 1)/s ds = -Cin(v) - i Si(v) for real v.
inline cplx phase_ramp_integral(double v) {
  return cplx(-cin_integral(v), -std::real(sine_integral(cplx(v, 0.0))));
}

}  // namespace fpspec
