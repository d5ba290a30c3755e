#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "fpspec/decay.hpp"
#include "fpspec/evolution.hpp"
#include "fpspec/spectral.hpp"
#include "test_helpers.hpp"

using Catch::Approx;
using namespace fpspec;

namespace {

const Weight kW{1.0};

}  // namespace

TEST_CASE("flux operator annihilates the steady state and telescopes mass") {
  const Grid g = testutil::default_grid();
  const GridFunction mu0 = testutil::gaussian_mu0(g);
  CHECK(testutil::max_abs(apply_fp_operator(mu0)) <= 5e-4);

  std::mt19937 rng(61);
  const GridFunction f = testutil::random_smooth(rng, g, 6, true);
  const GridFunction lf = apply_fp_operator(f);
  cplx plain_sum(0.0, 0.0);
  for (const cplx& v : lf.values) plain_sum += v;
  CHECK(std::abs(plain_sum) * g.dx <= 1e-11);
}

TEST_CASE("flux operator reproduces the hermite eigenvalues") {
  const Grid g = testutil::default_grid();
  for (int k = 1; k <= 4; ++k) {
    const GridFunction mk = hermite_mu(k, g);
    const GridFunction lf = apply_fp_operator(mk);
    GridFunction resid = lf;
    for (int i = 0; i < g.n; ++i) resid.values[i] += static_cast<double>(k) * mk.values[i];
    CHECK(omega_norm(resid, kW) <= 2e-3 * omega_norm(mk, kW));
  }
}

TEST_CASE("exact semigroup decays hermite modes at rate k") {
  const Grid g = testutil::default_grid();
  for (int k = 1; k <= 3; ++k) {
    const GridFunction mk = hermite_mu(k, g);
    for (double t : {0.5, 1.0, 2.0}) {
      const GridFunction evolved = exact_semigroup(mk, t);
      GridFunction expect = mk;
      for (cplx& v : expect.values) v *= std::exp(-k * t);
      CHECK(testutil::rel_omega_dist(evolved, expect, kW) <= 1e-7);
    }
  }
}

TEST_CASE("exact semigroup: identity at t=0, equilibration at large t") {
  const Grid g = testutil::default_grid();
  std::mt19937 rng(67);
  GridFunction f = testutil::random_smooth(rng, g, 5, false);
  // normalize to unit mass
  const cplx m = moment(f, 0);
  for (cplx& v : f.values) v /= m;
  CHECK(testutil::max_abs_diff(exact_semigroup(f, 0.0), f) == 0.0);
  const GridFunction late = exact_semigroup(f, 10.0);
  CHECK(testutil::rel_omega_dist(late, testutil::gaussian_mu0(g), kW) <= 1e-4);
  CHECK_THROWS_AS(exact_semigroup(f, -0.1), NegativeTime);
}

TEST_CASE("semigroup law e^{sL} e^{tL} = e^{(s+t)L}") {
  const Grid g = testutil::default_grid();
  std::mt19937 rng(71);
  const GridFunction f = testutil::random_smooth(rng, g, 5, true);
  for (double s : {0.4, 1.3}) {
    for (double t : {0.7, 2.0}) {
      const GridFunction two_step = exact_semigroup(exact_semigroup(f, s), t);
      const GridFunction one_step = exact_semigroup(f, s + t);
      CHECK(testutil::rel_omega_dist(two_step, one_step, kW) <= 1e-6);
    }
  }
}

TEST_CASE("crank-nicolson matches the exact semigroup for theta = 0") {
  const Grid g = testutil::default_grid();
  const Kernel zero = make_kernel({});
  const GridFunction mu1 = hermite_mu(1, g);
  CNConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.observe_every = 1000;
  cfg.snapshot_every = 1000;
  const Trajectory traj = evolve_cn(zero, kW, mu1, cfg);
  const GridFunction exact = exact_semigroup(mu1, 1.0);
  GridFunction diff = traj.snapshots.back().second;
  for (int i = 0; i < g.n; ++i) diff.values[i] -= exact.values[i];
  CHECK(omega_norm(diff, kW) <= 1e-4);
}

TEST_CASE("crank-nicolson halving dt divides the time error by about four") {
  const Grid g = testutil::default_grid();
  const Kernel zero = make_kernel({});
  const GridFunction mu1 = hermite_mu(1, g);
  const GridFunction exact = exact_semigroup(mu1, 1.0);
  auto discrepancy = [&](double dt) {
    CNConfig cfg;
    cfg.dt = dt;
    cfg.t_end = 1.0;
    cfg.observe_every = 1000000;
    cfg.snapshot_every = static_cast<int>(std::lround(1.0 / dt));
    const Trajectory traj = evolve_cn(zero, kW, mu1, cfg);
    GridFunction diff = traj.snapshots.back().second;
    for (int i = 0; i < g.n; ++i) diff.values[i] -= exact.values[i];
    return omega_norm(diff, kW);
  };
  const double ratio = discrepancy(0.25) / discrepancy(0.125);
  CHECK(ratio >= 3.5);
  CHECK(ratio <= 4.5);
}

TEST_CASE("stationary state relaxes only to the nearby discrete steady state") {
  const Grid g = testutil::default_grid();
  const Kernel k = make_dirac_pair(2.0, 2.0);
  const SpectralSet s = build_spectral_set(k, kW, g, 2);
  CNConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.observe_every = 200;
  cfg.snapshot_every = 500;
  const Trajectory traj = evolve_cn(k, kW, s.eigenfunctions[0], cfg);
  // The discrete operator resolves f_0 only to its O(dx^2) truncation,
  // which the cosh weight amplifies along the slow left tail: the state
  // drifts to the discrete null vector at omega-distance ~0.27 and stays.
  // Mass and the norm trajectory are the sharp invariants here.
  const std::vector<double> dist = distance_to_steady(traj, s);
  CHECK(dist.back() <= 0.35);
  CHECK(dist.back() - dist[dist.size() - 2] <= 0.05);  // saturation
  const double n0 = omega_norm(s.eigenfunctions[0], kW);
  for (size_t i = 0; i < traj.times.size(); ++i) {
    // the trapezoid mass sees the half end cells move with the tails
    CHECK(std::abs(traj.masses[i] - traj.masses.front()) <= 1e-10);
    CHECK(std::abs(traj.omega_norms[i] - n0) <= 0.02 * n0);
  }
}

TEST_CASE("crank-nicolson conserves mass to rounding") {
  const Grid g = testutil::default_grid();
  const Kernel k = make_dirac_pair(2.0, 2.0);
  std::mt19937 rng(73);
  GridFunction f = testutil::random_smooth(rng, g, 5, false);
  CNConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.5;
  cfg.observe_every = 1;
  const Trajectory traj = evolve_cn(k, kW, f, cfg);
  const cplx m0 = traj.masses.front();
  for (const cplx& m : traj.masses)
    CHECK(std::abs(m - m0) <= 1e-12 * (1.0 + std::abs(m0)));
}

TEST_CASE("moment subspaces are invariant along the flow") {
  const Grid g = testutil::default_grid();
  const Kernel k = make_dirac_pair(2.0, 2.0);
  const GridFunction mu2 = hermite_mu(2, g);
  CNConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.observe_every = 250;
  cfg.snapshot_every = 250;
  const Trajectory traj = evolve_cn(k, kW, mu2, cfg);
  // the discrete x-moment identity holds to O(dx^2), so the first moment
  // drifts to an equilibrium near 1e-4 instead of staying at rounding
  for (const auto& [t, snap] : traj.snapshots) {
    const std::vector<double> res = ek_residuals(snap, 2);
    CHECK(res[0] <= 1e-10);
    CHECK(res[1] <= 1e-3);
  }
}

TEST_CASE("massless data decays at rate one") {
  const Grid g = testutil::default_grid();
  const Kernel k = make_dirac_pair(2.0, 2.0);
  const SpectralSet s = build_spectral_set(k, kW, g, 2);
  const GridFunction phi = make_initial("phi2", s);
  CNConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 8.0;
  cfg.observe_every = 10;
  const Trajectory traj = evolve_cn(k, kW, phi, cfg);
  const DecayFit fit = fit_decay(traj, 4.0, 8.0);
  CHECK(fit.rate <= -1.0 + 0.02);
}

TEST_CASE("evolution input validation") {
  const Grid g = testutil::default_grid();
  const Kernel zero = make_kernel({});
  const GridFunction mu1 = hermite_mu(1, g);
  CNConfig bad;
  bad.dt = 0.3;
  bad.t_end = 1.0;  // not a whole number of steps
  CHECK_THROWS_AS(evolve_cn(zero, kW, mu1, bad), Error);
  const Kernel off = make_kernel({{cplx(1.0, 0.0), -0.05}, {cplx(-1.0, 0.0), 0.05}});
  CNConfig cfg;
  cfg.dt = 0.5;
  cfg.t_end = 1.0;
  CHECK_THROWS_AS(evolve_cn(off, kW, mu1, cfg), MisalignedShift);
  Trajectory empty;
  const SpectralSet s = build_spectral_set(zero, kW, g, 0);
  CHECK_THROWS_AS(distance_to_steady(empty, s), NoSnapshots);
}
