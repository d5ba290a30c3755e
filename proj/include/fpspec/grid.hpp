#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "fpspec/errors.hpp"

namespace fpspec {

using cplx = std::complex<double>;

/// Uniform symmetric grid x_i = x_min + i*dx, i = 0..n-1, with x_min = -x_max.
struct Grid {
  double x_min = 0.0;
  double x_max = 0.0;
  int n = 0;
  double dx = 0.0;

  double point(int i) const { return x_min + i * dx; }
  bool same_as(const Grid& o) const { return n == o.n && x_min == o.x_min && x_max == o.x_max; }
};

/// Complex samples of a function on a Grid. Values outside [x_min, x_max]
/// are treated as zero throughout the library.
struct GridFunction {
  Grid grid;
  std::vector<cplx> values;
};

/// Samples of xi -> fhat(xi + i*b) on a real frequency grid.
struct FourierLine {
  std::vector<double> xi;
  std::vector<cplx> values;
  double offset_b = 0.0;
};

inline Grid make_grid(double x_min, double x_max, int n) {
  if (n < 8) throw DegenerateGrid("make_grid: need at least 8 points");
  if (!(x_min < x_max)) throw DegenerateGrid("make_grid: x_min must be below x_max");
  if (std::abs(x_min + x_max) > 1e-12 * (x_max - x_min))
    throw DegenerateGrid("make_grid: domain must be symmetric about 0");
  Grid g;
  g.x_min = x_min;
  g.x_max = x_max;
  g.n = n;
  g.dx = (x_max - x_min) / (n - 1);
  return g;
}

inline GridFunction make_grid_function(const Grid& g) {
  GridFunction f;
  f.grid = g;
  f.values.assign(static_cast<size_t>(g.n), cplx(0.0, 0.0));
  return f;
}

/// Sample a callable on the grid.
template <class F>
GridFunction sample(const Grid& g, F&& fn) {
  GridFunction out = make_grid_function(g);
  for (int i = 0; i < g.n; ++i) out.values[i] = cplx(fn(g.point(i)));
  return out;
}

/// Trapezoid weight of node i (dx, halved at the ends).
inline double trapezoid_weight(const Grid& g, int i) {
  return (i == 0 || i == g.n - 1) ? 0.5 * g.dx : g.dx;
}

/// Frequency nodes xi_j = (j - (n-1)/2) * 2*pi/(n*dx), symmetric about 0
/// for odd n, covering [-pi/dx, pi/dx).
inline std::vector<double> fourier_nodes(const Grid& g) {
  const double pi = 3.14159265358979323846;
  const double dxi = 2.0 * pi / (g.n * g.dx);
  std::vector<double> xi(static_cast<size_t>(g.n));
  const double lo = -0.5 * (g.n - 1) * dxi;
  for (int j = 0; j < g.n; ++j) xi[j] = lo + j * dxi;
  return xi;
}

inline double fourier_spacing(const Grid& g) {
  const double pi = 3.14159265358979323846;
  return 2.0 * pi / (g.n * g.dx);
}

namespace detail {

/// sum_i w_i h_i e^{-i u x_i} for one real frequency u, by phase recurrence
/// with periodic exact refresh. O(n) per evaluation point.
inline cplx nonuniform_sum(const Grid& g, const std::vector<cplx>& h, double u) {
  const cplx step = std::exp(cplx(0.0, -u * g.dx));
  cplx phase = std::exp(cplx(0.0, -u * g.x_min));
  cplx acc(0.0, 0.0);
  for (int i = 0; i < g.n; ++i) {
    if ((i & 31) == 0) phase = std::exp(cplx(0.0, -u * g.point(i)));
    acc += h[i] * phase;
    phase *= step;
  }
  return acc;
}

/// Pre-weighted samples dx * e^{b x_i} * f_i used by the transforms.
/// Uniform weights keep the forward/inverse pair exactly unitary; for
/// admissible (boundary-vanishing) functions they agree with trapezoid
/// weighting far below the library's tolerances.
inline std::vector<cplx> weighted_samples(const GridFunction& f, double b) {
  std::vector<cplx> h(f.values.size());
  for (int i = 0; i < f.grid.n; ++i)
    h[i] = f.values[i] * (f.grid.dx * std::exp(b * f.grid.point(i)));
  return h;
}

}  // namespace detail

/// Discrete transform of e^{bx} f(x) with the convention
/// fhat(xi) = int f(x) e^{-i x xi} dx, sampled on the fourier_nodes grid.
/// Represents fhat(xi + i b) for f in the weighted space.
inline FourierLine line_transform(const GridFunction& f, double b) {
  FourierLine out;
  out.offset_b = b;
  out.xi = fourier_nodes(f.grid);
  out.values.resize(out.xi.size());
  const std::vector<cplx> h = detail::weighted_samples(f, b);
  for (size_t j = 0; j < out.xi.size(); ++j)
    out.values[j] = detail::nonuniform_sum(f.grid, h, out.xi[j]);
  return out;
}

/// Evaluate the same transform at arbitrary real frequencies.
inline std::vector<cplx> line_transform_at(const GridFunction& f, double b,
                                           const std::vector<double>& freqs) {
  const std::vector<cplx> h = detail::weighted_samples(f, b);
  std::vector<cplx> out(freqs.size());
  for (size_t j = 0; j < freqs.size(); ++j)
    out[j] = detail::nonuniform_sum(f.grid, h, freqs[j]);
  return out;
}

/// Inverse of line_transform: recovers g with e^{bx} g(x) = F^{-1}[values].
inline GridFunction inverse_line_transform(const FourierLine& F, const Grid& g) {
  if (static_cast<int>(F.values.size()) != g.n)
    throw DegenerateGrid("inverse_line_transform: line length does not match grid");
  GridFunction out = make_grid_function(g);
  const double pi = 3.14159265358979323846;
  const double dxi = F.xi.size() > 1 ? F.xi[1] - F.xi[0] : 0.0;
  const double scale = dxi / (2.0 * pi);
  for (int i = 0; i < g.n; ++i) {
    const double xv = g.point(i);
    const cplx step = std::exp(cplx(0.0, xv * dxi));
    cplx phase = std::exp(cplx(0.0, xv * F.xi[0]));
    cplx acc(0.0, 0.0);
    for (size_t j = 0; j < F.values.size(); ++j) {
      if ((j & 31) == 0) phase = std::exp(cplx(0.0, xv * F.xi[j]));
      acc += F.values[j] * phase;
      phase *= step;
    }
    out.values[i] = acc * scale * std::exp(-F.offset_b * xv);
  }
  return out;
}

/// Trapezoid rule for int f(x) w(x) dx with a pointwise weight callable.
template <class W>
cplx quadrature(const GridFunction& f, W&& w) {
  cplx acc(0.0, 0.0);
  for (int i = 0; i < f.grid.n; ++i)
    acc += f.values[i] * (trapezoid_weight(f.grid, i) * w(f.grid.point(i)));
  return acc;
}

/// j-th moment int f(x) x^j dx, trapezoid rule. j is capped at 12; higher
/// moments are numerically meaningless on the default grid.
inline cplx moment(const GridFunction& f, int j) {
  if (j < 0 || j > 12) throw MomentOrderTooHigh("moment: order must be in [0, 12]");
  return quadrature(f, [j](double x) {
    double p = 1.0;
    for (int l = 0; l < j; ++l) p *= x;
    return p;
  });
}

}  // namespace fpspec
