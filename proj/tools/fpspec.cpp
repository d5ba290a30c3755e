// fpspec: spectral analysis and evolution of the perturbed Fokker-Planck
// operator in the cosh-weighted space. Emits CSV for functions and
// trajectories, JSON for scalar results.

#include <CLI11.hpp>
#include <complex>
#include <cstdio>
#include <future>
#include <iostream>
#include <json.hpp>
#include <string>

#include "fpspec/fpspec.hpp"

using namespace fpspec;
using nlohmann::json;

namespace {

struct CommonOpts {
  double beta = 1.0;
  std::string dirac_pair;  // "eps,alpha"
  std::string kernel_path;
  std::string grid_spec = "25:1501";
  double dt = 1e-3;
  double t_end = 10.0;
  std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--beta", o.beta, "weight parameter beta > 0");
  cmd->add_option("--dirac-pair", o.dirac_pair, "shorthand eps,alpha for eps*(d_{-a} - d_{a})");
  cmd->add_option("--kernel", o.kernel_path, "kernel description file");
  cmd->add_option("--grid", o.grid_spec, "grid as XMAX:N (symmetric domain [-XMAX, XMAX])");
  cmd->add_option("--dt", o.dt, "time step");
  cmd->add_option("--t-end", o.t_end, "final time");
  cmd->add_option("--out", o.out, "output path or prefix");
}

Grid parse_grid(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--grid", "expected XMAX:N");
  const double x_max = std::stod(spec.substr(0, colon));
  const int n = std::stoi(spec.substr(colon + 1));
  return make_grid(-x_max, x_max, n);
}

Kernel parse_kernel(const CommonOpts& o) {
  if (!o.kernel_path.empty()) return read_kernel_file(o.kernel_path);
  if (!o.dirac_pair.empty()) {
    const auto comma = o.dirac_pair.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--dirac-pair", "expected eps,alpha");
    return make_dirac_pair(std::stod(o.dirac_pair.substr(0, comma)),
                           std::stod(o.dirac_pair.substr(comma + 1)));
  }
  return make_kernel({});
}

cplx parse_complex(const std::string& spec) {
  const auto comma = spec.find(',');
  if (comma == std::string::npos) return cplx(std::stod(spec), 0.0);
  return cplx(std::stod(spec.substr(0, comma)), std::stod(spec.substr(comma + 1)));
}

json report_to_json(const ConditionCReport& r) {
  return json{{"format_version", kFormatVersion},
              {"theta_hat_at_zero", {std::real(r.theta_hat_at_zero), std::imag(r.theta_hat_at_zero)}},
              {"sup_theta_hat", r.sup_theta_hat},
              {"sup_re_integral", r.sup_re_integral},
              {"lines_sampled", r.lines_sampled},
              {"passed", r.passed}};
}

json fit_to_json(const DecayFit& f) {
  return json{{"format_version", kFormatVersion},
              {"rate", f.rate},
              {"prefactor", f.prefactor},
              {"window", {f.window_lo, f.window_hi}},
              {"rms_residual", f.rms_residual}};
}

GridFunction load_initial(const std::string& spec, const SpectralSet& set) {
  if (spec.rfind("csv:", 0) == 0) return read_grid_function_csv(spec.substr(4));
  return make_initial(spec, set);
}

int cmd_validate(const CommonOpts& o) {
  const Grid g = parse_grid(o.grid_spec);
  const Kernel k = parse_kernel(o);
  const Weight w{o.beta};
  const double pi = 3.14159265358979323846;
  const ConditionCReport r = validate_condition_c(k, w, pi / g.dx, 5);
  std::cout << report_to_json(r).dump(2) << "\n";
  return r.passed ? 0 : 1;
}

int cmd_eigen(const CommonOpts& o, int k_max) {
  const Grid g = parse_grid(o.grid_spec);
  const Weight w{o.beta};
  const SpectralSet s = build_spectral_set(parse_kernel(o), w, g, k_max);
  const std::string prefix = o.out.empty() ? "f" : o.out;
  for (int k = 0; k <= k_max; ++k)
    write_grid_function_csv(s.eigenfunctions[k], prefix + std::to_string(k) + ".csv");
  return 0;
}

int cmd_evolve(const CommonOpts& o, const std::string& init, const std::string& scheme,
               int observe_every, int snapshot_every) {
  const Grid g = parse_grid(o.grid_spec);
  const Weight w{o.beta};
  const Kernel k = parse_kernel(o);
  if (scheme == "exact" && !k.is_zero())
    throw Error("scheme 'exact' requires the zero kernel");
  const SpectralSet s = build_spectral_set(k, w, g, init == "phi1" ? 2 : 0);
  const GridFunction phi = load_initial(init, s);
  Trajectory traj;
  if (scheme == "exact") {
    const long steps = std::lround(o.t_end / o.dt);
    for (long step = 0; step <= steps; step += observe_every) {
      const GridFunction f = exact_semigroup(phi, step * o.dt);
      traj.times.push_back(step * o.dt);
      traj.masses.push_back(moment(f, 0));
      traj.omega_norms.push_back(omega_norm(f, w));
    }
  } else {
    CNConfig cfg;
    cfg.dt = o.dt;
    cfg.t_end = o.t_end;
    cfg.observe_every = observe_every;
    cfg.snapshot_every = snapshot_every;
    traj = evolve_cn(k, w, phi, cfg);
  }
  write_trajectory_csv(traj, o.out.empty() ? "traj.csv" : o.out);
  return 0;
}

int cmd_fit(const std::string& in, const std::string& window, bool as_json) {
  const auto colon = window.find(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--window", "expected LO:HI");
  const double lo = std::stod(window.substr(0, colon));
  const double hi = std::stod(window.substr(colon + 1));
  const Trajectory traj = read_trajectory_csv(in);
  const DecayFit fit = fit_decay(traj, lo, hi);
  if (as_json) {
    std::cout << fit_to_json(fit).dump(2) << "\n";
  } else {
    std::printf("rate %.12g\nprefactor %.12g\nrms_residual %.3e\n", fit.rate, fit.prefactor,
                fit.rms_residual);
  }
  return 0;
}

int cmd_resolvent(const CommonOpts& o, const std::string& zeta_spec, int k_floor,
                  const std::string& rhs_path) {
  const Grid g = parse_grid(o.grid_spec);
  const Weight w{o.beta};
  const SpectralSet s = build_spectral_set(parse_kernel(o), w, g, std::max(2, k_floor));
  ResolventQuery q{parse_complex(zeta_spec), k_floor, read_grid_function_csv(rhs_path)};
  write_grid_function_csv(resolvent(s, q), o.out.empty() ? "resolvent.csv" : o.out);
  return 0;
}

int cmd_project(const CommonOpts& o, int k, const std::string& in) {
  const Grid g = parse_grid(o.grid_spec);
  const Weight w{o.beta};
  const SpectralSet s = build_spectral_set(parse_kernel(o), w, g, std::max(2, k));
  const GridFunction f = read_grid_function_csv(in);
  write_grid_function_csv(perturbed_projection(s, f, k),
                          o.out.empty() ? "projection.csv" : o.out);
  return 0;
}

int cmd_figure1(CommonOpts o, double window_lo, double window_hi) {
  if (o.dirac_pair.empty() && o.kernel_path.empty()) o.dirac_pair = "2,2";
  const Grid g = parse_grid(o.grid_spec);
  const Weight w{o.beta};
  const Kernel k = parse_kernel(o);
  const SpectralSet s = build_spectral_set(k, w, g, 2);
  const std::string dir = o.out.empty() ? "." : o.out;

  auto run = [&](const std::string& name) {
    CNConfig cfg;
    cfg.dt = o.dt;
    cfg.t_end = o.t_end;
    const GridFunction phi = make_initial(name, s);
    return evolve_cn(k, w, phi, cfg);
  };
  // the two trajectories are independent; run them concurrently
  auto fut = std::async(std::launch::async, run, "phi1");
  const Trajectory traj2 = run("phi2");
  const Trajectory traj1 = fut.get();

  write_trajectory_csv(traj1, dir + "/fig1a.csv");
  write_trajectory_csv(traj2, dir + "/fig1b.csv");
  const DecayFit fit1 = fit_decay(traj1, window_lo, window_hi);
  const DecayFit fit2 = fit_decay(traj2, window_lo, window_hi);
  json out{{"format_version", kFormatVersion},
           {"phi1", fit_to_json(fit1)},
           {"phi2", fit_to_json(fit2)}};
  std::ofstream fits(dir + "/fits.json");
  fits << out.dump(2) << "\n";
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral analysis of the perturbed Fokker-Planck operator in L2(cosh)"};
  app.require_subcommand(1);

  CommonOpts opts;
  int k_max = 3, k_floor = 0, k_proj = 0;
  int observe_every = 1, snapshot_every = 0;
  std::string init = "phi2", scheme = "cn", zeta_spec = "1,0";
  std::string fit_in, fit_window = "4:8";
  double window_lo = 4.0, window_hi = 8.0;
  bool fit_json = false;

  CLI::App* validate = app.add_subcommand("validate", "check the kernel conditions");
  add_common(validate, opts);

  CLI::App* eigen = app.add_subcommand("eigen", "export eigenfunctions f_0..f_kmax as CSV");
  add_common(eigen, opts);
  eigen->add_option("--kmax", k_max, "highest eigenfunction order");

  CLI::App* evolve = app.add_subcommand("evolve", "run the evolution and record observables");
  add_common(evolve, opts);
  evolve->add_option("--init", init, "phi1 | phi2 | csv:PATH");
  evolve->add_option("--scheme", scheme, "cn | exact (exact needs the zero kernel)");
  evolve->add_option("--observe-every", observe_every, "record every this many steps");
  evolve->add_option("--snapshot-every", snapshot_every, "store states this often (0 = never)");

  CLI::App* fit = app.add_subcommand("fit", "least-squares decay fit of a trajectory");
  fit->add_option("--in", fit_in, "trajectory CSV")->required();
  fit->add_option("--window", fit_window, "fit window LO:HI");
  fit->add_flag("--json", fit_json, "emit JSON");

  CLI::App* resolvent_cmd = app.add_subcommand("resolvent", "apply R(zeta) to a grid function");
  add_common(resolvent_cmd, opts);
  resolvent_cmd->add_option("--zeta", zeta_spec, "resolvent point re,im");
  resolvent_cmd->add_option("--kfloor", k_floor, "moment subspace index of the rhs");
  std::string rhs_path;
  resolvent_cmd->add_option("--rhs", rhs_path, "right-hand side CSV")->required();

  CLI::App* project = app.add_subcommand("project", "apply the spectral projection P_k");
  add_common(project, opts);
  project->add_option("--k", k_proj, "projection index");
  std::string project_in;
  project->add_option("--in", project_in, "input CSV")->required();

  CLI::App* figure1 = app.add_subcommand(
      "figure1", "run both benchmark initial conditions and fit their decay");
  add_common(figure1, opts);
  figure1->add_option("--window-lo", window_lo, "fit window start");
  figure1->add_option("--window-hi", window_hi, "fit window end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (validate->parsed()) return cmd_validate(opts);
    if (eigen->parsed()) return cmd_eigen(opts, k_max);
    if (evolve->parsed()) return cmd_evolve(opts, init, scheme, observe_every, snapshot_every);
    if (fit->parsed()) return cmd_fit(fit_in, fit_window, fit_json);
    if (resolvent_cmd->parsed()) return cmd_resolvent(opts, zeta_spec, k_floor, rhs_path);
    if (project->parsed()) return cmd_project(opts, k_proj, project_in);
    if (figure1->parsed()) return cmd_figure1(opts, window_lo, window_hi);
  } catch (const Error& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 2;
  }
  return 2;
}
