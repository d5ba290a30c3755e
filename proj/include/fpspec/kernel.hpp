#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "fpspec/errors.hpp"
#include "fpspec/gauss_legendre.hpp"
#include "fpspec/grid.hpp"
#include "fpspec/special.hpp"
#include "fpspec/weighted_space.hpp"

namespace fpspec {

struct DiracTerm {
  cplx amplitude;
  double location;
};

/// Perturbation kernel theta: a finite Dirac comb plus an optional smooth
/// grid-sampled part. Zero mean is enforced at construction.
struct Kernel {
  std::vector<DiracTerm> dirac;
  std::optional<GridFunction> smooth;
  std::string description;

  bool is_zero() const { return dirac.empty() && !smooth.has_value(); }
};

/// Report of a sampled check of the analyticity/boundedness conditions on
/// theta-hat over the strip |Im xi| <= beta/2.
struct ConditionCReport {
  cplx theta_hat_at_zero;
  double sup_theta_hat = 0.0;
  double sup_re_integral = 0.0;
  int lines_sampled = 0;
  bool passed = false;
};

inline Kernel make_kernel(std::vector<DiracTerm> dirac, std::optional<GridFunction> smooth = {},
                          std::string description = {}) {
  cplx mean(0.0, 0.0);
  double scale = 1.0;
  for (const DiracTerm& d : dirac) {
    mean += d.amplitude;
    scale += std::abs(d.amplitude);
  }
  if (smooth) {
    const cplx smooth_mass = moment(*smooth, 0);
    mean += smooth_mass;
    scale += std::abs(smooth_mass);
  }
  if (std::abs(mean) > 1e-12 * scale)
    throw InvalidKernel("make_kernel: kernel must have zero mean");
  Kernel k;
  k.dirac = std::move(dirac);
  k.smooth = std::move(smooth);
  k.description = std::move(description);
  return k;
}

/// The Section-4 pair eps*(delta_{-alpha} - delta_{alpha}).
inline Kernel make_dirac_pair(double eps, double alpha) {
  return make_kernel({{cplx(eps, 0.0), -alpha}, {cplx(-eps, 0.0), alpha}}, {}, "dirac-pair");
}

namespace detail {

inline cplx smooth_hat(const GridFunction& s, cplx xi) {
  const cplx mi(0.0, -1.0);
  cplx q(0.0, 0.0);
  for (int i = 0; i < s.grid.n; ++i)
    q += s.values[i] * (trapezoid_weight(s.grid, i) * std::exp(mi * xi * s.grid.point(i)));
  return q;
}

}  // namespace detail

/// theta-hat(xi) = sum_j a_j e^{-i xi x_j} + int theta_W(x) e^{-i xi x} dx
/// for xi on the closed strip |Im xi| <= beta/2.
inline cplx theta_hat(const Kernel& k, cplx xi, const Weight& w) {
  if (std::abs(std::imag(xi)) > 0.5 * w.beta + 1e-12)
    throw OffStrip("theta_hat: |Im xi| exceeds beta/2");
  cplx acc(0.0, 0.0);
  const cplx mi(0.0, -1.0);
  for (const DiracTerm& d : k.dirac) acc += d.amplitude * std::exp(mi * xi * d.location);
  if (k.smooth) acc += detail::smooth_hat(*k.smooth, xi);
  return acc;
}

namespace detail {

inline constexpr int kPsiQuadratureNodes = 200;

}  // namespace detail

/// E(xi) = int_0^1 theta_hat(xi s)/s ds by Gauss-Legendre on (0, 1]. The
/// integrand extends continuously to theta_hat'(0) xi at s = 0, so the
/// open-interval nodes see an analytic function.
inline cplx psi_exponent(const Kernel& k, cplx xi, const Weight& w) {
  if (k.is_zero()) return cplx(0.0, 0.0);
  if (std::abs(std::imag(xi)) > 0.5 * w.beta + 1e-12)
    throw OffStrip("psi_exponent: |Im xi| exceeds beta/2");
  const GaussLegendreRule rule = gauss_legendre_on(detail::kPsiQuadratureNodes, 0.0, 1.0);
  cplx acc(0.0, 0.0);
  for (int m = 0; m < detail::kPsiQuadratureNodes; ++m) {
    const double s = rule.nodes[m];
    acc += rule.weights[m] * theta_hat(k, xi * s, w) / s;
  }
  return acc;
}

/// psi-hat(xi) = exp(E(xi)).
inline cplx psi_hat(const Kernel& k, cplx xi, const Weight& w) {
  return std::exp(psi_exponent(k, xi, w));
}

/// E(u) for real u through the closed form of the Dirac part,
///   int_0^1 (e^{-i u c s} - 1)/s ds = -Cin(u c) - i Si(u c),
/// valid after pairing each term with its share of the zero mean. The
/// smooth remainder keeps the Gauss-Legendre rule. Agrees with
/// psi_exponent to the quadrature tolerance and costs O(1) per Dirac term,
/// which matters inside the resolvent loop.
inline cplx psi_exponent_real(const Kernel& k, double u) {
  if (k.is_zero()) return cplx(0.0, 0.0);
  cplx acc(0.0, 0.0);
  cplx dirac_mean(0.0, 0.0);
  for (const DiracTerm& d : k.dirac) {
    acc += d.amplitude * phase_ramp_integral(u * d.location);
    dirac_mean += d.amplitude;
  }
  if (k.smooth) {
    const cplx smooth_mean = -dirac_mean;  // zero total mean at construction
    const GaussLegendreRule rule = gauss_legendre_on(detail::kPsiQuadratureNodes, 0.0, 1.0);
    for (int m = 0; m < detail::kPsiQuadratureNodes; ++m) {
      const double s = rule.nodes[m];
      acc += rule.weights[m] * (detail::smooth_hat(*k.smooth, cplx(u * s, 0.0)) - smooth_mean) / s;
    }
  }
  return acc;
}

namespace detail {

inline int lattice_shift(double location, double dx) {
  const double cells = location / dx;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-6)
    throw MisalignedShift("dirac location is not on the grid lattice");
  return static_cast<int>(rounded);
}

}  // namespace detail

/// Theta f = theta * f. Dirac terms are exact index shifts (out-of-domain
/// samples read as zero); the smooth part is applied by discrete
/// convolution through line transforms at b = 0.
inline GridFunction apply_theta(const Kernel& k, const GridFunction& f) {
  const Grid& g = f.grid;
  GridFunction out = make_grid_function(g);
  for (const DiracTerm& d : k.dirac) {
    const int m = detail::lattice_shift(d.location, g.dx);
    const int lo = std::max(0, m);
    const int hi = std::min(g.n, g.n + m);
    for (int i = lo; i < hi; ++i) out.values[i] += d.amplitude * f.values[i - m];
  }
  if (k.smooth) {
    FourierLine F = line_transform(f, 0.0);
    for (size_t j = 0; j < F.xi.size(); ++j)
      F.values[j] *= detail::smooth_hat(*k.smooth, cplx(F.xi[j], 0.0));
    const GridFunction conv = inverse_line_transform(F, g);
    for (int i = 0; i < g.n; ++i) out.values[i] += conv.values[i];
  }
  return out;
}

/// Sample theta-hat and Re E on n_lines horizontal lines of the strip and
/// report the observed suprema. The check is necessarily finite; passed
/// means no violation was seen on the sampled set.
inline ConditionCReport validate_condition_c(const Kernel& k, const Weight& w, double xi_extent,
                                             int n_lines) {
  if (n_lines < 3 || n_lines % 2 == 0)
    throw Error("validate_condition_c: n_lines must be odd and at least 3");
  ConditionCReport report;
  report.lines_sampled = n_lines;
  report.theta_hat_at_zero = theta_hat(k, cplx(0.0, 0.0), w);
  const int n_xi = 801;
  const int integral_stride = 8;  // Re E is smoother than theta-hat; sample coarser
  bool finite = true;
  for (int l = 0; l < n_lines; ++l) {
    const double b = -0.5 * w.beta + l * (w.beta / (n_lines - 1));
    for (int j = 0; j < n_xi; ++j) {
      const double xr = -xi_extent + 2.0 * xi_extent * j / (n_xi - 1);
      const cplx xi(xr, b);
      const cplx th = theta_hat(k, xi, w);
      if (!std::isfinite(std::abs(th))) finite = false;
      report.sup_theta_hat = std::max(report.sup_theta_hat, std::abs(th));
      if (j % integral_stride == 0) {
        const cplx ex = psi_exponent(k, xi, w);
        if (!std::isfinite(std::abs(ex))) finite = false;
        report.sup_re_integral = std::max(report.sup_re_integral, std::abs(std::real(ex)));
      }
    }
  }
  report.passed = finite && std::abs(report.theta_hat_at_zero) <= 1e-12;
  return report;
}

}  // namespace fpspec
