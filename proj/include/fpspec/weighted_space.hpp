#pragma once

#include <cmath>
#include <vector>

#include "fpspec/errors.hpp"
#include "fpspec/grid.hpp"

namespace fpspec {

inline constexpr int kMaxHermiteOrder = 12;

/// The weight omega(x) = cosh(beta x) defining the space L^2(omega).
struct Weight {
  double beta = 1.0;
  double omega(double x) const { return std::cosh(beta * x); }
};

/// ||f||_omega = sqrt(int |f|^2 cosh(beta x) dx), trapezoid rule.
inline double omega_norm(const GridFunction& f, const Weight& w) {
  double acc = 0.0;
  for (int i = 0; i < f.grid.n; ++i)
    acc += std::norm(f.values[i]) * trapezoid_weight(f.grid, i) * w.omega(f.grid.point(i));
  return std::sqrt(acc);
}

/// Fourier-side norm sqrt(||fhat(.+i b/2)||^2 + ||fhat(.-i b/2)||^2) with
/// b = beta; equals sqrt(4 pi) ||f||_omega.
inline double fourier_norm(const GridFunction& f, const Weight& w) {
  const double dxi = fourier_spacing(f.grid);
  double acc = 0.0;
  for (double sign : {0.5, -0.5}) {
    const FourierLine line = line_transform(f, sign * w.beta);
    for (const cplx& v : line.values) acc += std::norm(v) * dxi;
  }
  return std::sqrt(acc);
}

namespace detail {

/// Coefficient tables of H_0..H_k from the Rodrigues-form recurrence
/// H_0 = 1, H_1 = -x, H_{k+1} = -x H_k - k H_{k-1}.
inline std::vector<std::vector<double>> hermite_coefficients(int k_max) {
  std::vector<std::vector<double>> H(static_cast<size_t>(k_max) + 1);
  H[0] = {1.0};
  if (k_max >= 1) H[1] = {0.0, -1.0};
  for (int k = 1; k < k_max; ++k) {
    std::vector<double> next(static_cast<size_t>(k) + 2, 0.0);
    for (size_t p = 0; p < H[k].size(); ++p) next[p + 1] -= H[k][p];
    for (size_t p = 0; p < H[k - 1].size(); ++p) next[p] -= k * H[k - 1][p];
    H[k + 1] = std::move(next);
  }
  return H;
}

inline double eval_poly(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (size_t p = c.size(); p-- > 0;) acc = acc * x + c[p];
  return acc;
}

/// Values of H_k on the grid by the same three-term recurrence.
inline std::vector<double> hermite_values(int k, const Grid& g) {
  std::vector<double> h0(static_cast<size_t>(g.n), 1.0), h1(static_cast<size_t>(g.n));
  if (k == 0) return h0;
  for (int i = 0; i < g.n; ++i) h1[i] = -g.point(i);
  for (int j = 1; j < k; ++j) {
    for (int i = 0; i < g.n; ++i) {
      const double next = -g.point(i) * h1[i] - j * h0[i];
      h0[i] = h1[i];
      h1[i] = next;
    }
  }
  return h1;
}

}  // namespace detail

/// Hermite eigenfunctions mu_0..mu_{k_max} of the Fokker-Planck operator
/// together with the polynomial coefficient table.
struct HermiteBasis {
  int k_max = 0;
  std::vector<GridFunction> functions;
  std::vector<std::vector<double>> coefficients;
};

/// mu_k(x) = H_k(x) e^{-x^2/2} / sqrt(2 pi); eigenvalue -k.
inline GridFunction hermite_mu(int k, const Grid& g) {
  if (k < 0 || k > kMaxHermiteOrder) throw OrderTooHigh("hermite_mu: order must be in [0, 12]");
  const double inv_sqrt_2pi = 0.3989422804014326779;
  const std::vector<double> h = detail::hermite_values(k, g);
  GridFunction out = make_grid_function(g);
  for (int i = 0; i < g.n; ++i) {
    const double x = g.point(i);
    out.values[i] = h[i] * std::exp(-0.5 * x * x) * inv_sqrt_2pi;
  }
  return out;
}

inline HermiteBasis make_hermite_basis(int k_max, const Grid& g) {
  if (k_max < 0 || k_max > kMaxHermiteOrder)
    throw OrderTooHigh("make_hermite_basis: order must be in [0, 12]");
  HermiteBasis basis;
  basis.k_max = k_max;
  basis.coefficients = detail::hermite_coefficients(k_max);
  basis.functions.reserve(static_cast<size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) basis.functions.push_back(hermite_mu(k, g));
  return basis;
}

/// Unperturbed spectral projection Pi_{L,k} f = (1/k!) (int f H_k dx) mu_k.
inline GridFunction hermite_projection(const GridFunction& f, int k) {
  if (k < 0 || k > kMaxHermiteOrder)
    throw OrderTooHigh("hermite_projection: order must be in [0, 12]");
  const std::vector<double> h = detail::hermite_values(k, f.grid);
  cplx coef(0.0, 0.0);
  for (int i = 0; i < f.grid.n; ++i)
    coef += f.values[i] * (trapezoid_weight(f.grid, i) * h[i]);
  double kfact = 1.0;
  for (int j = 2; j <= k; ++j) kfact *= j;
  coef /= kfact;
  GridFunction mk = hermite_mu(k, f.grid);
  for (cplx& v : mk.values) v *= coef;
  return mk;
}

/// Moment residuals (|m_0|, ..., |m_{k-1}|); f belongs to the subspace E_k
/// when all of them vanish.
inline std::vector<double> ek_residuals(const GridFunction& f, int k) {
  if (k > kMaxHermiteOrder) throw MomentOrderTooHigh("ek_residuals: order must be <= 12");
  std::vector<double> out;
  out.reserve(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) out.push_back(std::abs(moment(f, j)));
  return out;
}

/// Membership test with tolerance scaled by the omega norm.
inline bool ek_member(const GridFunction& f, int k, const Weight& w, double rel_tol = 1e-8) {
  const double tol = rel_tol * omega_norm(f, w);
  for (double r : ek_residuals(f, k))
    if (r > tol) return false;
  return true;
}

/// Central-difference derivative, second-order one-sided at the ends.
inline GridFunction central_derivative(const GridFunction& f) {
  GridFunction out = make_grid_function(f.grid);
  const int n = f.grid.n;
  const double inv2dx = 1.0 / (2.0 * f.grid.dx);
  for (int i = 1; i + 1 < n; ++i) out.values[i] = (f.values[i + 1] - f.values[i - 1]) * inv2dx;
  out.values[0] = (-3.0 * f.values[0] + 4.0 * f.values[1] - f.values[2]) * inv2dx;
  out.values[n - 1] = (3.0 * f.values[n - 1] - 4.0 * f.values[n - 2] + f.values[n - 3]) * inv2dx;
  return out;
}

/// ||f||_omega / ||f'||_omega, bounded by 2/beta for decaying functions.
inline double poincare_ratio(const GridFunction& f, const Weight& w) {
  const GridFunction df = central_derivative(f);
  const double dn = omega_norm(df, w);
  const double fn = omega_norm(f, w);
  if (dn <= 1e-14 * fn || dn == 0.0)
    throw ZeroDerivative("poincare_ratio: derivative vanishes on the grid");
  return fn / dn;
}

}  // namespace fpspec
