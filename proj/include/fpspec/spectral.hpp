#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "fpspec/errors.hpp"
#include "fpspec/gauss_legendre.hpp"
#include "fpspec/grid.hpp"
#include "fpspec/kernel.hpp"
#include "fpspec/parallel.hpp"
#include "fpspec/weighted_space.hpp"

namespace fpspec {

/// Spectral data of the perturbed operator: fhat_0 on the frequency grid
/// and the eigenfunctions f_0..f_{k_max}, with f_k the k-th derivative of
/// the unit-mass stationary state f_0 (normalization c_k = i^k).
struct SpectralSet {
  Kernel kernel;
  Weight weight;
  Grid grid;
  int k_max = 0;
  FourierLine f_hat_0;
  std::vector<GridFunction> eigenfunctions;
  double sup_re_integral = 0.0;  // sampled sup of |Re E| on the strip
};

struct ResolventQuery {
  cplx zeta;
  int k_floor = 0;
  GridFunction rhs;
};

/// fhat_0(xi) = exp(-xi^2/2 + E(xi)) with E the psi exponent; f_k is the
/// inverse transform of (i xi)^k fhat_0.
inline SpectralSet build_spectral_set(const Kernel& k, const Weight& w, const Grid& g,
                                      int k_max) {
  if (k_max < 0 || k_max > kMaxHermiteOrder)
    throw OrderTooHigh("build_spectral_set: k_max must be in [0, 12]");
  const double pi = 3.14159265358979323846;
  SpectralSet s;
  s.kernel = k;
  s.weight = w;
  s.grid = g;
  s.k_max = k_max;
  if (!k.is_zero()) {
    const ConditionCReport report = validate_condition_c(k, w, pi / g.dx, 5);
    if (!report.passed) throw InvalidKernel("build_spectral_set: kernel fails condition checks");
    s.sup_re_integral = report.sup_re_integral;
  }
  s.f_hat_0.offset_b = 0.0;
  s.f_hat_0.xi = fourier_nodes(g);
  s.f_hat_0.values.resize(s.f_hat_0.xi.size());
  for (size_t j = 0; j < s.f_hat_0.xi.size(); ++j) {
    const double xi = s.f_hat_0.xi[j];
    s.f_hat_0.values[j] = std::exp(cplx(-0.5 * xi * xi, 0.0) + psi_exponent_real(k, xi));
  }
  s.eigenfunctions.reserve(static_cast<size_t>(k_max) + 1);
  for (int order = 0; order <= k_max; ++order) {
    FourierLine line = s.f_hat_0;
    for (size_t j = 0; j < line.values.size(); ++j) {
      const cplx ix(0.0, line.xi[j]);
      cplx p(1.0, 0.0);
      for (int l = 0; l < order; ++l) p *= ix;
      line.values[j] *= p;
    }
    s.eigenfunctions.push_back(inverse_line_transform(line, g));
  }
  return s;
}

/// Psi f = f * psi (inverse: convolution with F^{-1}[1/psi-hat]); realized
/// as multiplication by psi-hat(xi) on the frequency grid. Preserves each
/// moment subspace E_k.
inline GridFunction psi_map(const Kernel& k, const Weight& w, const GridFunction& f,
                            bool inverse = false) {
  if (k.is_zero()) return f;
  FourierLine F = line_transform(f, 0.0);
  for (size_t j = 0; j < F.xi.size(); ++j) {
    const cplx ph = psi_hat(k, cplx(F.xi[j], 0.0), w);
    F.values[j] = inverse ? F.values[j] / ph : F.values[j] * ph;
  }
  return inverse_line_transform(F, f.grid);
}

/// Perturbed spectral projection P_k f = Psi(Pi_{L,k}(Psi^{-1} f)); the
/// result is a multiple of f_k.
inline GridFunction perturbed_projection(const SpectralSet& s, const GridFunction& f, int k) {
  if (k < 0 || k > s.k_max) throw OrderTooHigh("perturbed_projection: k exceeds k_max");
  const GridFunction pulled = psi_map(s.kernel, s.weight, f, true);
  const GridFunction projected = hermite_projection(pulled, k);
  return psi_map(s.kernel, s.weight, projected, false);
}

/// Annihilation operator: cumulative integral from x_min, defined on
/// massless functions (lowers the eigenvalue index by one).
inline GridFunction annihilate(const GridFunction& f, const Weight& w) {
  if (std::abs(moment(f, 0)) > 1e-8 * omega_norm(f, w))
    throw NotMassless("annihilate: input carries mass");
  GridFunction out = make_grid_function(f.grid);
  cplx acc(0.0, 0.0);
  out.values[0] = 0.0;
  for (int i = 1; i < f.grid.n; ++i) {
    acc += 0.5 * f.grid.dx * (f.values[i - 1] + f.values[i]);
    out.values[i] = acc;
  }
  return out;
}

/// Creation operator: the derivative.
inline GridFunction create(const GridFunction& f) { return central_derivative(f); }

namespace detail {

/// Moment with uniform dx weights, matching the weighting inside the
/// transforms (the public moment() uses the trapezoid rule).
inline cplx plain_moment(const GridFunction& f, int j) {
  cplx acc(0.0, 0.0);
  for (int i = 0; i < f.grid.n; ++i) {
    double p = 1.0;
    for (int l = 0; l < j; ++l) p *= f.grid.point(i);
    acc += f.values[i] * p;
  }
  return acc * f.grid.dx;
}

/// Remove the discrete moments 0..k-1 from g by subtracting multiples of
/// x^l mu_0. The correction is at the rounding level for admissible rhs,
/// but it keeps the resolvent quadrature from amplifying moment noise
/// through the non-integrable s^{zeta-1} factor. Uses the same uniform
/// weights as the transforms so that ghat gains an exact zero of order k.
inline GridFunction clean_moments(const GridFunction& g, int k) {
  if (k <= 0) return g;
  const Grid& gr = g.grid;
  const GridFunction mu0 = hermite_mu(0, gr);
  std::vector<GridFunction> dirs;
  for (int l = 0; l < k; ++l) {
    GridFunction d = mu0;
    for (int i = 0; i < gr.n; ++i) {
      double p = 1.0;
      for (int q = 0; q < l; ++q) p *= gr.point(i);
      d.values[i] *= p;
    }
    dirs.push_back(std::move(d));
  }
  // Solve the small Gram system M c = m by Gaussian elimination.
  std::vector<std::vector<cplx>> M(static_cast<size_t>(k),
                                   std::vector<cplx>(static_cast<size_t>(k) + 1));
  for (int row = 0; row < k; ++row) {
    for (int col = 0; col < k; ++col) M[row][col] = plain_moment(dirs[col], row);
    M[row][k] = plain_moment(g, row);
  }
  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int row = col + 1; row < k; ++row)
      if (std::abs(M[row][col]) > std::abs(M[pivot][col])) pivot = row;
    std::swap(M[col], M[pivot]);
    for (int row = col + 1; row < k; ++row) {
      const cplx factor = M[row][col] / M[col][col];
      for (int c2 = col; c2 <= k; ++c2) M[row][c2] -= factor * M[col][c2];
    }
  }
  std::vector<cplx> coef(static_cast<size_t>(k));
  for (int row = k - 1; row >= 0; --row) {
    cplx acc = M[row][k];
    for (int c2 = row + 1; c2 < k; ++c2) acc -= M[row][c2] * coef[c2];
    coef[row] = acc / M[row][row];
  }
  GridFunction out = g;
  for (int l = 0; l < k; ++l)
    for (int i = 0; i < gr.n; ++i) out.values[i] -= coef[l] * dirs[l].values[i];
  return out;
}

struct ResolventPanelPlan {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Panels for int_{s_lo}^1: geometric refinement toward 0 plus splitting so
/// that the oscillation of ghat(s xi) and of the Gaussian ratio stays
/// resolved by the per-panel rule.
inline ResolventPanelPlan make_panels(double s_lo, double abs_xi, double x_max, double zeta_mag) {
  constexpr int kNodes = 16;
  constexpr double kBudget = 6.0;
  ResolventPanelPlan plan;
  std::vector<double> edges{1.0};
  while (edges.back() > s_lo) edges.push_back(std::max(s_lo, 0.5 * edges.back()));
  for (size_t p = edges.size() - 1; p > 0; --p) {
    const double lo = edges[p], hi = edges[p - 1];
    const double width = hi - lo;
    const double variation = width * (x_max * abs_xi + abs_xi * abs_xi * hi) + zeta_mag;
    const int nsub = std::max(1, static_cast<int>(std::ceil(variation / kBudget)));
    for (int m = 0; m < nsub; ++m) {
      const GaussLegendreRule rule =
          gauss_legendre_on(kNodes, lo + width * m / nsub, lo + width * (m + 1) / nsub);
      plan.nodes.insert(plan.nodes.end(), rule.nodes.begin(), rule.nodes.end());
      plan.weights.insert(plan.weights.end(), rule.weights.begin(), rule.weights.end());
    }
  }
  return plan;
}

}  // namespace detail

/// Resolvent f = R(zeta) g on the moment subspace E_k via the Fourier-side
/// representation fhat(xi) = fhat_0(xi) int_0^1 ghat(s xi)/fhat_0(s xi)
/// s^{zeta-1} ds. The two fhat_0 factors are combined analytically into
/// exp(-xi^2 (1-s^2)/2 + E(xi) - E(s xi)), which is bounded on the whole
/// frequency range, and ghat is evaluated by direct nonuniform quadrature
/// per node.
inline GridFunction resolvent(const SpectralSet& s, const ResolventQuery& q) {
  const Grid& g = s.grid;
  const Weight& w = s.weight;
  const cplx zeta = q.zeta;
  const int kf = q.k_floor;
  if (kf < 0) throw PreconditionFailed("resolvent: k_floor must be non-negative");
  if (!(std::real(zeta) > -kf))
    throw PreconditionFailed("resolvent: Re zeta must exceed -k_floor");
  // Poles sit at the non-positive integers -j, j >= k_floor.
  const double nearest = std::round(-std::real(zeta));
  if (nearest >= kf && std::abs(zeta + nearest) < 1e-6)
    throw SpectrumHit("resolvent: zeta is within 1e-6 of the spectrum");
  if (!ek_member(q.rhs, kf, w))
    throw PreconditionFailed("resolvent: rhs fails the moment residuals for k_floor");
  if (!q.rhs.grid.same_as(g)) throw PreconditionFailed("resolvent: rhs grid mismatch");

  const GridFunction cleaned = detail::clean_moments(q.rhs, kf);
  const std::vector<cplx> h = detail::weighted_samples(cleaned, 0.0);
  const double a = std::real(zeta) + kf;
  const double s_min = std::pow(10.0, -std::min(14.0, std::max(9.0, 9.0 / a)));
  // Window where the combined Gaussian ratio is above 1e-18 relative.
  const double win = 2.0 * (18.0 * std::log(10.0) + 2.0 * s.sup_re_integral + 4.0);

  FourierLine fh;
  fh.offset_b = 0.0;
  fh.xi = fourier_nodes(g);
  fh.values.assign(fh.xi.size(), cplx(0.0, 0.0));

  detail::parallel_for(g.n, [&](int j) {
    const double xi = fh.xi[j];
    const double axi = std::abs(xi);
    double s_lo = s_min;
    if (xi != 0.0) {
      const double floor2 = 1.0 - win / (xi * xi);
      if (floor2 > s_lo * s_lo) s_lo = std::sqrt(floor2);
    }
    const detail::ResolventPanelPlan plan =
        detail::make_panels(s_lo, axi, std::max(std::abs(g.x_min), g.x_max), std::abs(zeta) + 1.0);
    const cplx e_xi = psi_exponent_real(s.kernel, xi);
    cplx total(0.0, 0.0);
    for (size_t m = 0; m < plan.nodes.size(); ++m) {
      const double sv = plan.nodes[m];
      const double u = sv * xi;
      const cplx ghat_u = detail::nonuniform_sum(g, h, u);
      const cplx ratio = std::exp(cplx(-0.5 * xi * xi * (1.0 - sv * sv), 0.0) + e_xi -
                                  psi_exponent_real(s.kernel, u));
      total += plan.weights[m] * ratio * ghat_u * std::exp((zeta - 1.0) * std::log(sv));
    }
    fh.values[j] = total;
  });
  return inverse_line_transform(fh, g);
}

}  // namespace fpspec
