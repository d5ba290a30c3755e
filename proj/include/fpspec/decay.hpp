#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fpspec/errors.hpp"
#include "fpspec/evolution.hpp"
#include "fpspec/spectral.hpp"
#include "fpspec/weighted_space.hpp"

namespace fpspec {

/// Result of a log-linear decay fit: norm(t) ~ prefactor * e^{rate * t}.
struct DecayFit {
  double rate = 0.0;
  double prefactor = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double rms_residual = 0.0;
};

/// The two benchmark initial conditions, omega-normalized to 1:
///   phi1 = (f_1 - 1.32 f_2) / ||.||
///   phi2 = (chi_[-4,0] - chi_[0,4]) / ||.||   (jump points sampled at the
///          half value, so the function stays odd and exactly massless)
inline GridFunction make_initial(const std::string& name, const SpectralSet& s) {
  const Grid& g = s.grid;
  GridFunction phi = make_grid_function(g);
  if (name == "phi1") {
    if (s.k_max < 2) throw OrderTooHigh("make_initial: phi1 needs k_max >= 2");
    for (int i = 0; i < g.n; ++i)
      phi.values[i] = s.eigenfunctions[1].values[i] - 1.32 * s.eigenfunctions[2].values[i];
  } else if (name == "phi2") {
    auto box = [](double x, double lo, double hi) {
      if (x < lo || x > hi) return 0.0;
      if (x == lo || x == hi) return 0.5;
      return 1.0;
    };
    for (int i = 0; i < g.n; ++i) {
      const double x = g.point(i);
      phi.values[i] = box(x, -4.0, 0.0) - box(x, 0.0, 4.0);
    }
  } else {
    throw UnknownInitial("make_initial: unknown initial condition '" + name + "'");
  }
  const double norm = omega_norm(phi, s.weight);
  for (cplx& v : phi.values) v /= norm;
  return phi;
}

/// Ordinary least squares of log(omega_norm) against t on the window.
inline DecayFit fit_decay(const Trajectory& traj, double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw Error("fit_decay: window must satisfy t_lo < t_hi");
  std::vector<double> ts, ys;
  for (size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double norm = traj.omega_norms[i];
    if (!(norm > 0.0)) throw NonpositiveNorm("fit_decay: non-positive norm inside the window");
    ts.push_back(t);
    ys.push_back(std::log(norm));
  }
  if (ts.size() < 10) throw WindowTooSparse("fit_decay: fewer than 10 observations in the window");
  const double n = static_cast<double>(ts.size());
  double st = 0.0, sy = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    st += ts[i];
    sy += ys[i];
  }
  const double tbar = st / n, ybar = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    sxx += (ts[i] - tbar) * (ts[i] - tbar);
    sxy += (ts[i] - tbar) * (ys[i] - ybar);
  }
  DecayFit fit;
  fit.rate = sxy / sxx;
  fit.prefactor = std::exp(ybar - fit.rate * tbar);
  fit.window_lo = t_lo;
  fit.window_hi = t_hi;
  double ss = 0.0;
  for (size_t i = 0; i < ts.size(); ++i) {
    const double r = ys[i] - (std::log(fit.prefactor) + fit.rate * ts[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

}  // namespace fpspec
