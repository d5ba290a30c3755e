#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <random>

#include "fpspec/io.hpp"
#include "test_helpers.hpp"

using namespace fpspec;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("io_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("grid function csv round trip is lossless") {
  const Grid g = make_grid(-10.0, 10.0, 201);
  std::mt19937 rng(83);
  const GridFunction f = testutil::random_smooth(rng, g, 5, true);
  TempFile tmp("gf.csv");
  write_grid_function_csv(f, tmp.path);
  const GridFunction back = read_grid_function_csv(tmp.path);
  REQUIRE(back.grid.n == g.n);
  CHECK(back.grid.dx == g.dx);
  CHECK(testutil::max_abs_diff(back, f) == 0.0);
}

TEST_CASE("trajectory csv round trip") {
  Trajectory traj;
  for (int i = 0; i <= 20; ++i) {
    traj.times.push_back(0.1 * i);
    traj.masses.push_back(cplx(1.0 + 1e-15 * i, -2e-16 * i));
    traj.omega_norms.push_back(std::exp(-0.1 * i));
  }
  TempFile tmp("traj.csv");
  write_trajectory_csv(traj, tmp.path);
  const Trajectory back = read_trajectory_csv(tmp.path);
  REQUIRE(back.times.size() == traj.times.size());
  for (size_t i = 0; i < traj.times.size(); ++i) {
    CHECK(back.times[i] == traj.times[i]);
    CHECK(back.masses[i] == traj.masses[i]);
    CHECK(back.omega_norms[i] == traj.omega_norms[i]);
  }
}

TEST_CASE("kernel file round trip and validation") {
  TempFile tmp("kernel.txt");
  const Kernel k = make_dirac_pair(2.0, 2.0);
  write_kernel_file(k, tmp.path);
  const Kernel back = read_kernel_file(tmp.path);
  REQUIRE(back.dirac.size() == 2);
  CHECK(back.dirac[0].amplitude == cplx(2.0, 0.0));
  CHECK(back.dirac[0].location == -2.0);
  CHECK(back.dirac[1].amplitude == cplx(-2.0, 0.0));
  CHECK(back.dirac[1].location == 2.0);

  {
    std::ofstream bad(tmp.path);
    bad << "dirac 1 0 2.0\n";  // nonzero mean
  }
  CHECK_THROWS_AS(read_kernel_file(tmp.path), InvalidKernel);
  {
    std::ofstream bad(tmp.path);
    bad << "delta 1 0 2.0\n";
  }
  CHECK_THROWS_AS(read_kernel_file(tmp.path), IoError);
  CHECK_THROWS_AS(read_grid_function_csv("does_not_exist.csv"), IoError);
}

TEST_CASE("fourier line csv carries the offset") {
  const Grid g = make_grid(-5.0, 5.0, 64);
  std::mt19937 rng(89);
  const GridFunction f = testutil::random_smooth(rng, g, 3, true);
  const FourierLine line = line_transform(f, 0.25);
  TempFile tmp("line.csv");
  write_fourier_line_csv(line, tmp.path);
  std::ifstream in(tmp.path);
  std::string header;
  std::getline(in, header);  // comment
  std::getline(in, header);
  CHECK(header == "xi,re,im,b");
  std::string row;
  std::getline(in, row);
  CHECK(row.find(",0.25") != std::string::npos);
}
