#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "antex/io.hpp"
#include "antex/sampling.hpp"

using namespace antex;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const char* cli = std::getenv("ANTEX_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "ANTEX_CLI must point at the built binary");
  const fs::path out =
      fs::temp_directory_path() / ("antex_cli_out_" + std::to_string(rand()));
  const std::string cmd =
      "\"" + std::string(cli) + "\" " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(out);
  r.output.assign(std::istreambuf_iterator<char>(in), {});
  fs::remove(out);
  return r;
}

}  // namespace

TEST_CASE("min-samples subcommand") {
  auto r = run_cli("min-samples --model horn --kind mag");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "11\n");
  r = run_cli("min-samples --model rect --rows 3 --cols 3 --kind complex");
  CHECK(r.output == "23\n");
}

TEST_CASE("simulate subcommand") {
  auto r = run_cli("simulate --model rect --rows 1 --cols 1");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "1+0i\n");

  r = run_cli("simulate --model rect --rows 1 --cols 1 --az 0,0.5 --el 0 "
              "--kind mag --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output == "[1, 1]\n");
}

TEST_CASE("experiment subcommand error contract") {
  auto r = run_cli("experiment missing.toml");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("missing.toml") != std::string::npos);

  // malformed field names the key
  const fs::path bad = fs::temp_directory_path() / "antex_bad.toml";
  {
    std::ofstream out(bad);
    out << "trials = banana\n";
  }
  r = run_cli("experiment " + bad.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("trials") != std::string::npos);
  fs::remove(bad);
}

TEST_CASE("extrapolate and order-scan round trip through files") {
  const fs::path dir = fs::temp_directory_path() / "antex_cli_e2e";
  fs::remove_all(dir);
  fs::create_directories(dir);

  // synthesize a 1x2 array pattern with the library, solve via the CLI
  const auto model_dirs = generate_samples(SamplingSpec::random_sphere(40), 3);
  std::vector<SamplePoint> pts = to_far_field(model_dirs);
  SampledPattern obs;
  obs.kind = MeasurementKind::ComplexField;
  obs.points = pts;
  obs.values.resize(40);
  for (int i = 0; i < 40; ++i) {
    const double sp = std::sin(model_dirs[static_cast<std::size_t>(i)].azimuth());
    obs.values[i] =
        (Complex{1, 0} + std::polar(1.0, kTwoPi * 0.31 * sp)) / std::numbers::sqrt2;
  }
  write_pattern_json(dir / "obs.json", obs);

  auto r = run_cli("extrapolate --pattern " + (dir / "obs.json").string() +
                   " --model rect --rows 1 --cols 2 --iterations 12 "
                   "--restarts 2 --seed 4 --out " + (dir / "fit.json").string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "fit.json"));
  CHECK(r.output.find("residual") != std::string::npos);

  r = run_cli("order-scan --pattern " + (dir / "obs.json").string() +
              " --max-rows 2 --max-cols 2 --iterations 6 --restarts 1 "
              "--seed 4 --out " + (dir / "scan.csv").string());
  CHECK(r.exit_code == 0);
  const auto csv = [&] {
    std::ifstream in(dir / "scan.csv");
    return std::string(std::istreambuf_iterator<char>(in), {});
  }();
  CHECK(csv.rfind("rows,cols,min_residual,selected\n", 0) == 0);
  CHECK(r.output.find("selected") != std::string::npos);
  fs::remove_all(dir);
}
