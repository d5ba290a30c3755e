#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "fpspec/errors.hpp"
#include "fpspec/grid.hpp"
#include "fpspec/kernel.hpp"
#include "fpspec/spectral.hpp"
#include "fpspec/weighted_space.hpp"

namespace fpspec {

/// Crank-Nicolson configuration. Boundaries are zero-flux (the only
/// supported closure; it is what makes the scheme conserve mass).
struct CNConfig {
  double dt = 1e-3;
  double t_end = 10.0;
  int observe_every = 1;    // record mass and omega-norm every this many steps
  int snapshot_every = 0;   // store full states this often; 0 disables
};

/// Time series of observables (and optional snapshots) along a run.
struct Trajectory {
  std::vector<double> times;
  std::vector<cplx> masses;
  std::vector<double> omega_norms;
  std::vector<std::pair<double, GridFunction>> snapshots;
};

namespace detail {

/// Flux-form coefficients of L at row i: (Lf)_i = a f_{i-1} + b f_i + c f_{i+1}
/// with half-point Gaussian weights expressed through ratio exponents, which
/// stay O(1) even where mu itself underflows.
struct FluxRow {
  double sub = 0.0, diag = 0.0, super = 0.0;
};

inline FluxRow flux_row(const Grid& g, int i) {
  FluxRow r;
  const double inv_dx2 = 1.0 / (g.dx * g.dx);
  const double x = g.point(i);
  if (i < g.n - 1) {
    const double xh = x + 0.5 * g.dx;
    const double xp = x + g.dx;
    r.super = std::exp(0.5 * (xp * xp - xh * xh)) * inv_dx2;
    r.diag -= std::exp(0.5 * (x * x - xh * xh)) * inv_dx2;
  }
  if (i > 0) {
    const double xh = x - 0.5 * g.dx;
    const double xm = x - g.dx;
    r.sub = std::exp(0.5 * (xm * xm - xh * xh)) * inv_dx2;
    r.diag -= std::exp(0.5 * (x * x - xh * xh)) * inv_dx2;
  }
  return r;
}

}  // namespace detail

/// Discrete flux-form Fokker-Planck operator D-[mu_{i+1/2} D+(f/mu)] with
/// zero flux through both walls. Consistent with f'' + x f' + f at O(dx^2);
/// plain-sum mass of the output telescopes to zero.
inline GridFunction apply_fp_operator(const GridFunction& f) {
  const Grid& g = f.grid;
  GridFunction out = make_grid_function(g);
  for (int i = 0; i < g.n; ++i) {
    const detail::FluxRow r = detail::flux_row(g, i);
    cplx acc = r.diag * f.values[i];
    if (i > 0) acc += r.sub * f.values[i - 1];
    if (i < g.n - 1) acc += r.super * f.values[i + 1];
    out.values[i] = acc;
  }
  return out;
}

/// Exact unperturbed semigroup e^{tL} f via the Fourier-side formula
/// exp(-xi^2 (1 - e^{-2t})/2) fhat(xi e^{-t}), with fhat evaluated at the
/// contracted frequencies by direct nonuniform transforms.
inline GridFunction exact_semigroup(const GridFunction& f, double t) {
  if (t < 0.0) throw NegativeTime("exact_semigroup: t must be non-negative");
  if (t == 0.0) return f;
  const double contraction = std::exp(-t);
  FourierLine line;
  line.offset_b = 0.0;
  line.xi = fourier_nodes(f.grid);
  std::vector<double> contracted(line.xi.size());
  for (size_t j = 0; j < line.xi.size(); ++j) contracted[j] = line.xi[j] * contraction;
  line.values = line_transform_at(f, 0.0, contracted);
  const double spread = 0.5 * (1.0 - std::exp(-2.0 * t));
  for (size_t j = 0; j < line.xi.size(); ++j)
    line.values[j] *= std::exp(-spread * line.xi[j] * line.xi[j]);
  return inverse_line_transform(line, f.grid);
}

namespace detail {

/// Conservative matrix of Theta for a Dirac comb: interior rows are the
/// exact index shifts; wall rows re-deposit what the shifts would carry
/// through the walls, so every column sums to zero (zero-flux closure of
/// the nonlocal term). Derived from differencing clipped prefix sums of
/// the shift ranges.
inline void append_theta_triplets(const Kernel& k, const Grid& g,
                                  std::vector<Eigen::Triplet<cplx>>& out, cplx scale) {
  struct Event {
    int end;
    cplx amp;
  };
  std::vector<std::pair<cplx, int>> terms;
  for (const DiracTerm& d : k.dirac) terms.emplace_back(d.amplitude, lattice_shift(d.location, g.dx));
  if (terms.empty()) return;
  std::vector<Event> events;
  for (int i = 0; i < g.n; ++i) {
    events.clear();
    for (const auto& [amp, m] : terms) {
      if (i <= g.n - 2) events.push_back({std::min(i - m, g.n - 1), amp});
      if (i >= 1) events.push_back({std::min(i - 1 - m, g.n - 1), -amp});
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
      return a.end > b.end;
    });
    cplx running(0.0, 0.0);
    int prev_end = g.n - 1;
    for (size_t e = 0; e < events.size(); ++e) {
      const int end = events[e].end;
      if (running != cplx(0.0, 0.0)) {
        for (int col = std::max(end + 1, 0); col <= prev_end; ++col)
          out.emplace_back(i, col, scale * running);
      }
      running += events[e].amp;
      prev_end = std::min(end, g.n - 1);
      if (prev_end < 0) break;
    }
    // The segment below the smallest range end carries the full +/- sum of
    // the zero-mean comb, which vanishes identically; drop it.
  }
}

}  // namespace detail

/// Mass-conserving Crank-Nicolson evolution of d_t f = (L + Theta) f with
/// zero-flux boundaries. Theta enters both half-step operators (no
/// splitting), as exact lattice shifts away from the walls and their
/// conservative closure at the walls. Dirac combs only; kernels with a
/// smooth part are rejected.
inline Trajectory evolve_cn(const Kernel& k, const Weight& w, const GridFunction& phi,
                            const CNConfig& cfg) {
  const Grid& g = phi.grid;
  if (k.smooth.has_value())
    throw InvalidKernel("evolve_cn: smooth kernel parts are not supported by the CN scheme");
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0))
    throw Error("evolve_cn: dt and t_end must be positive");
  if (cfg.observe_every < 1) throw Error("evolve_cn: observe_every must be at least 1");
  const double steps_real = cfg.t_end / cfg.dt;
  const long steps = std::lround(steps_real);
  if (steps < 1 || std::abs(steps_real - static_cast<double>(steps)) > 1e-6)
    throw Error("evolve_cn: t_end must be a whole number of steps");
  for (const cplx& v : phi.values)
    if (!std::isfinite(std::real(v)) || !std::isfinite(std::imag(v)))
      throw Error("evolve_cn: initial state has non-finite entries");

  using SpMat = Eigen::SparseMatrix<cplx>;
  using Vec = Eigen::VectorXcd;
  const int n = g.n;
  std::vector<Eigen::Triplet<cplx>> minus_t, plus_t;
  const cplx half_dt(0.5 * cfg.dt, 0.0);
  for (int i = 0; i < n; ++i) {
    const detail::FluxRow r = detail::flux_row(g, i);
    minus_t.emplace_back(i, i, cplx(1.0, 0.0) - half_dt * r.diag);
    plus_t.emplace_back(i, i, cplx(1.0, 0.0) + half_dt * r.diag);
    if (i > 0) {
      minus_t.emplace_back(i, i - 1, -half_dt * r.sub);
      plus_t.emplace_back(i, i - 1, half_dt * r.sub);
    }
    if (i < n - 1) {
      minus_t.emplace_back(i, i + 1, -half_dt * r.super);
      plus_t.emplace_back(i, i + 1, half_dt * r.super);
    }
  }
  detail::append_theta_triplets(k, g, minus_t, -half_dt);
  detail::append_theta_triplets(k, g, plus_t, half_dt);
  SpMat lhs(n, n), rhs_mat(n, n);
  lhs.setFromTriplets(minus_t.begin(), minus_t.end());
  rhs_mat.setFromTriplets(plus_t.begin(), plus_t.end());
  lhs.makeCompressed();
  rhs_mat.makeCompressed();
  Eigen::SparseLU<SpMat> solver;
  solver.compute(lhs);
  if (solver.info() != Eigen::Success)
    throw SolverBreakdown("evolve_cn: factorization of the implicit operator failed");

  Vec f(n);
  for (int i = 0; i < n; ++i) f[i] = phi.values[i];
  GridFunction state = phi;

  Trajectory traj;
  auto observe = [&](double t) {
    for (int i = 0; i < n; ++i) state.values[i] = f[i];
    traj.times.push_back(t);
    traj.masses.push_back(moment(state, 0));
    traj.omega_norms.push_back(omega_norm(state, w));
  };
  auto maybe_snapshot = [&](double t, long step) {
    if (cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0) {
      for (int i = 0; i < n; ++i) state.values[i] = f[i];
      traj.snapshots.emplace_back(t, state);
    }
  };
  observe(0.0);
  maybe_snapshot(0.0, 0);
  for (long step = 1; step <= steps; ++step) {
    const Vec b = rhs_mat * f;
    f = solver.solve(b);
    if (solver.info() != Eigen::Success)
      throw SolverBreakdown("evolve_cn: linear solve failed");
    const double resid = (lhs * f - b).template lpNorm<Eigen::Infinity>();
    if (resid > 1e-6 * (b.template lpNorm<Eigen::Infinity>() + 1e-300))
      throw SolverBreakdown("evolve_cn: linear solve lost more than six digits");
    if (step % cfg.observe_every == 0 || step == steps) observe(step * cfg.dt);
    maybe_snapshot(step * cfg.dt, step);
  }
  return traj;
}

/// ||f(t) - m f_0||_omega per stored snapshot, with m the initial mass.
inline std::vector<double> distance_to_steady(const Trajectory& traj, const SpectralSet& s) {
  if (traj.snapshots.empty()) throw NoSnapshots("distance_to_steady: trajectory has no snapshots");
  const cplx m = traj.masses.empty() ? cplx(0.0, 0.0) : traj.masses.front();
  const GridFunction& f0 = s.eigenfunctions.front();
  std::vector<double> out;
  out.reserve(traj.snapshots.size());
  for (const auto& [t, snap] : traj.snapshots) {
    GridFunction diff = snap;
    for (int i = 0; i < diff.grid.n; ++i) diff.values[i] -= m * f0.values[i];
    out.push_back(omega_norm(diff, s.weight));
  }
  return out;
}

}  // namespace fpspec
