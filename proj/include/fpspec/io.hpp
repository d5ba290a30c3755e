#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fpspec/decay.hpp"
#include "fpspec/errors.hpp"
#include "fpspec/evolution.hpp"
#include "fpspec/grid.hpp"
#include "fpspec/kernel.hpp"

namespace fpspec {

inline constexpr int kFormatVersion = 1;

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

inline bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

}  // namespace detail

/// GridFunction CSV: x,re,im with 17 significant digits per field.
inline void write_grid_function_csv(const GridFunction& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# format_version=" << kFormatVersion << "\n";
  out << "x,re,im\n";
  for (int i = 0; i < f.grid.n; ++i)
    out << detail::fmt17(f.grid.point(i)) << ',' << detail::fmt17(std::real(f.values[i])) << ','
        << detail::fmt17(std::imag(f.values[i])) << "\n";
}

inline GridFunction read_grid_function_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<double> xs;
  std::vector<cplx> vs;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::skippable(line) || line.rfind("x,", 0) == 0) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() < 3) throw IoError("malformed grid-function row in " + path);
    xs.push_back(std::stod(fields[0]));
    vs.push_back(cplx(std::stod(fields[1]), std::stod(fields[2])));
  }
  if (xs.size() < 8) throw IoError("grid-function file too short: " + path);
  GridFunction f;
  f.grid = make_grid(xs.front(), xs.back(), static_cast<int>(xs.size()));
  f.values = std::move(vs);
  return f;
}

/// FourierLine CSV: xi,re,im,b.
inline void write_fourier_line_csv(const FourierLine& F, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# format_version=" << kFormatVersion << "\n";
  out << "xi,re,im,b\n";
  for (size_t j = 0; j < F.xi.size(); ++j)
    out << detail::fmt17(F.xi[j]) << ',' << detail::fmt17(std::real(F.values[j])) << ','
        << detail::fmt17(std::imag(F.values[j])) << ',' << detail::fmt17(F.offset_b) << "\n";
}

/// Trajectory CSV: t,mass_re,mass_im,omega_norm[,dist_steady].
inline void write_trajectory_csv(const Trajectory& traj, const std::string& path,
                                 const std::vector<double>* dist_steady = nullptr) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# format_version=" << kFormatVersion << "\n";
  out << "t,mass_re,mass_im,omega_norm" << (dist_steady ? ",dist_steady" : "") << "\n";
  for (size_t i = 0; i < traj.times.size(); ++i) {
    out << detail::fmt17(traj.times[i]) << ',' << detail::fmt17(std::real(traj.masses[i])) << ','
        << detail::fmt17(std::imag(traj.masses[i])) << ','
        << detail::fmt17(traj.omega_norms[i]);
    if (dist_steady) out << ',' << detail::fmt17((*dist_steady)[i]);
    out << "\n";
  }
}

inline Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  Trajectory traj;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::skippable(line) || line.rfind("t,", 0) == 0) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() < 4) throw IoError("malformed trajectory row in " + path);
    traj.times.push_back(std::stod(fields[0]));
    traj.masses.push_back(cplx(std::stod(fields[1]), std::stod(fields[2])));
    traj.omega_norms.push_back(std::stod(fields[3]));
  }
  return traj;
}

/// Kernel text format: lines `dirac <re> <im> <location>` plus an optional
/// `smooth <csv-path>`; `#` starts a comment.
inline Kernel read_kernel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::vector<DiracTerm> dirac;
  std::optional<GridFunction> smooth;
  std::string line;
  while (std::getline(in, line)) {
    if (detail::skippable(line)) continue;
    std::stringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "dirac") {
      double re = 0.0, im = 0.0, loc = 0.0;
      if (!(ss >> re >> im >> loc)) throw IoError("malformed dirac line in " + path);
      dirac.push_back({cplx(re, im), loc});
    } else if (tag == "smooth") {
      std::string csv;
      if (!(ss >> csv)) throw IoError("malformed smooth line in " + path);
      smooth = read_grid_function_csv(csv);
    } else {
      throw IoError("unknown kernel directive '" + tag + "' in " + path);
    }
  }
  return make_kernel(std::move(dirac), std::move(smooth), path);
}

inline void write_kernel_file(const Kernel& k, const std::string& path,
                              const std::string& smooth_csv = {}) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << "# format_version=" << kFormatVersion << "\n";
  for (const DiracTerm& d : k.dirac)
    out << "dirac " << detail::fmt17(std::real(d.amplitude)) << ' '
        << detail::fmt17(std::imag(d.amplitude)) << ' ' << detail::fmt17(d.location) << "\n";
  if (k.smooth) {
    if (smooth_csv.empty()) throw IoError("write_kernel_file: smooth part needs a csv path");
    write_grid_function_csv(*k.smooth, smooth_csv);
    out << "smooth " << smooth_csv << "\n";
  }
}

}  // namespace fpspec
