#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "exactwkb/records.hpp"
#include "helpers.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "exactwkb");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return exactwkb::cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("exactwkb_cli_" + std::to_string(::getpid()))) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("spectrum of the pure quartic") {
  TempDir dir;
  const auto out = dir / "levels.csv";
  REQUIRE(invoke({"spectrum", "--degree", "4", "--coeffs", "0,0,0", "--parity", "even", "--levels", "8", "--out", out}) == 0);
  const auto t = exactwkb::read_records(out);
  CHECK(t.columns == std::vector<std::string>{"ell", "k", "re_E", "im_E", "residual"});
  std::vector<double> sector0;
  for (const auto& row : t.rows)
    if (row[0] == 0.0) sector0.push_back(row[2]);
  REQUIRE(sector0.size() == 8);
  for (int i = 0; i < 4; ++i) CHECK(rel_err(sector0[i], frozen::quartic_even[i]) < 1e-6);

  const auto summary = nlohmann::json::parse(slurp(out + ".summary.json"));
  CHECK(summary["subcommand"] == "spectrum");
  CHECK(summary["config"]["K"] == 8);
  CHECK(summary["potential"]["degree"] == 4);
  CHECK(summary["exit_status"] == 0);

  // same config, byte-identical records
  const auto again = dir / "spec2.csv";
  REQUIRE(invoke({"spectrum", "--levels", "8", "--out", again}) == 0);
  CHECK(slurp(out) == slurp(again));
}

TEST_CASE("config file precedence") {
  TempDir dir;
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# flat key=value\nlevels=12\ncoeffs=0,-5,0\nparity=odd\n";
  }
  const auto out = dir / "d.csv";
  REQUIRE(invoke({"--config", dir / "run.cfg", "determinant", "--levels", "10", "--lambda", "1,2", "--out", out}) == 0);
  const auto summary = nlohmann::json::parse(slurp(out + ".summary.json"));
  CHECK(summary["config"]["K"] == 10);
  CHECK(summary["potential"]["coeffs"][1] == -5.0);
  const auto t = exactwkb::read_records(out);
  CHECK(t.rows.size() == 2);
  CHECK(t.notes.back() == "parity: odd");
}

TEST_CASE("actions table") {
  TempDir dir;
  const auto out = dir / "a.csv";
  REQUIRE(invoke({"actions", "--coeffs", "0,10,0", "--lambda", "1,4", "--out", out}) == 0);
  const auto t = exactwkb::read_records(out);
  for (const auto& row : t.rows) CHECK(std::abs(row[2] - row[4]) < 1e-8);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(invoke({"spectrum", "--coeffs", "1,2", "--out", dir / "x.csv"}) == 2);
  CHECK(invoke({"spectrum", "--parity", "sideways", "--out", dir / "x.csv"}) == 2);
  CHECK(invoke({"spectrum", "--damping", "2", "--out", dir / "x.csv"}) == 2);
  CHECK(invoke({"nonsense"}) == 2);
  CHECK(invoke({"wavefunction", "--energy", "1", "--grid", "1:0:0.5", "--out", dir / "x.csv"}) == 2);
  CHECK(invoke({"spectrum", "--max-iter", "1", "--out", dir / "x.csv"}) == 3);
}

TEST_CASE("figure1 files") {
  TempDir dir;
  const auto prefix = dir / "fig1";
  REQUIRE(invoke({"figure1", "--v2", "0", "--out", prefix}) == 0);
  const auto t = exactwkb::read_records(prefix + "_v2_0.csv");
  CHECK(t.columns == std::vector<std::string>{"ell", "k", "re_E", "im_E"});
  double max_ell = 0.0;
  for (const auto& row : t.rows) max_ell = std::max(max_ell, row[0]);
  CHECK(max_ell == 2.0);
  CHECK(t.rows[0][1] == 1.0);  // odd parity starts at k = 1
  CHECK(rel_err(t.rows[0][2], frozen::quartic_odd[0]) < 1e-6);
}
