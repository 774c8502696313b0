#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "tvjko/cli_io.hpp"
#include "tvjko/csv_io.hpp"
#include "tvjko/run_config.hpp"

using namespace tvjko;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("tvjko_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    return e.what();
  }
  return "";
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tvjko");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("density csv round trip") {
  const auto dir = scratch("csv");
  const GridSpec g(-1.0, 1.0, 16);
  std::vector<double> v(16);
  for (std::size_t i = 0; i < 16; ++i) v[i] = 1.0 + static_cast<double>(i % 3);
  const auto rho = GridDensity::normalized(g, v);
  write_density_csv((dir / "rho.csv").string(), rho);
  const auto back = read_density_csv((dir / "rho.csv").string());
  CHECK(back.grid().left() == doctest::Approx(-1.0));
  CHECK(back.grid().right() == doctest::Approx(1.0));
  CHECK(l1_distance(back, rho) < 1e-12);
}

TEST_CASE("density csv errors name the row") {
  const auto dir = scratch("csv_bad");
  write_text(dir / "neg.csv", "x,rho\n0.25,1\n0.75,-0.5\n");
  CHECK(error_of([&] { read_density_csv((dir / "neg.csv").string()); }).find("row 3") != std::string::npos);
  write_text(dir / "head.csv", "y,rho\n0.25,1\n0.75,1\n");
  CHECK_THROWS_AS(read_density_csv((dir / "head.csv").string()), std::invalid_argument);
  write_text(dir / "gap.csv", "x,rho\n0.25,1\n0.75,1\n1.5,1\n");
  CHECK_THROWS_AS(read_density_csv((dir / "gap.csv").string()), std::invalid_argument);
  CHECK_THROWS_AS(read_density_csv((dir / "missing.csv").string()), std::invalid_argument);
  write_text(dir / "radial.csv", "r,rho\n0.3,1\n0.9,1\n");
  CHECK_THROWS_AS(read_radial_csv((dir / "radial.csv").string(), 2), std::invalid_argument);
}

TEST_CASE("run config parsing") {
  const json j = {{"mode", "step"}, {"tau", 0.1}, {"grid", {{"left", 0.0}, {"right", 1.0}, {"n_cells", 64}}},
                  {"io", {{"input_path", "in.csv"}, {"output_dir", "out"}}}};
  const auto c = parse_run_config(j);
  CHECK(c.mode == RunMode::step);
  CHECK(*c.tau == doctest::Approx(0.1));
  CHECK(c.grid->n_cells == 64);
  CHECK(parse_run_config(to_json(c)).io.output_dir == "out");

  json bad = j;
  bad["solver"] = {{"max_iters", 3}};
  CHECK(error_of([&] { parse_run_config(bad); }).find("solver.max_iters") != std::string::npos);
  CHECK_THROWS_AS(parse_mode("walk"), std::invalid_argument);

  json o = j;
  apply_override(o, "solver.max_outer_iter=7");
  apply_override(o, "io.output_dir=elsewhere");
  const auto co = parse_run_config(o);
  CHECK(co.solver.max_outer_iter == 7);
  CHECK(co.io.output_dir == "elsewhere");
  CHECK_THROWS_AS(apply_override(o, "novalue"), std::invalid_argument);
}

TEST_CASE("mode defaults and output directory fallback") {
  auto c = load_run_config("", "validate_hat", {}, std::string("/tmp/envdir"));
  CHECK(c.io.output_dir == "/tmp/envdir");
  CHECK(*c.tau == doctest::Approx(1.0 / 270.0));
  CHECK(c.grid->n_cells == 2048);
  auto d = load_run_config("", "validate_uniform", {}, std::nullopt);
  CHECK(d.io.output_dir == ".");
  CHECK(*d.tau == doctest::Approx(1.0 / 3.0));
  CHECK_THROWS_AS(load_run_config("", "step", {}, std::nullopt), std::invalid_argument);
}

TEST_CASE("command line exit codes and outputs") {
  const auto dir = scratch("cli");
  const std::string out = (dir / "run").string();
  CHECK(cli({"validate_uniform", "--override", "grid.n_cells=256", "--override", "io.output_dir=" + out}) == 0);
  CHECK(fs::exists(fs::path(out) / "rho1.csv"));
  CHECK(fs::exists(fs::path(out) / "validation.csv"));
  std::ifstream m(fs::path(out) / "manifest.json");
  const json manifest = json::parse(m);
  CHECK(manifest["exit_code"] == 0);
  CHECK(manifest["tool"] == "tvjko");

  CHECK(cli({"validate_uniform", "--override", "grid.n_cells=256", "--override", "solver.max_outer_iter=2",
             "--override", "io.output_dir=" + out}) == 2);
  CHECK(cli({"step", "--override", "tau=0.1", "--override", "io.input_path=" + (dir / "none.csv").string(),
             "--override", "io.output_dir=" + out}) == 1);
  CHECK(cli({"validate_uniform", "--override", "bogus=1", "--override", "io.output_dir=" + out}) == 1);
  CHECK(cli({"oracle_check", "--override", "oracle.prox_absolute=0", "--override", "io.output_dir=" + out}) == 3);
}
