#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "antex/experiment.hpp"
#include "antex/io.hpp"
#include "antex/sampling.hpp"

using namespace antex;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("antex_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("pattern JSON round trip is exact") {
  const auto dir = temp_dir("pattern");
  SampledPattern p;
  p.kind = MeasurementKind::ComplexField;
  p.points = {SamplePoint::far_field(Direction(0.123456789123, -0.5)),
              SamplePoint::near_field({1.0 / 3.0, -2.5, 100.25})};
  p.values.resize(2);
  p.values << Complex{0.1, -0.2}, Complex{1e-17, 3.0};
  write_pattern_json(dir / "p.json", p);
  const auto q = read_pattern_json(dir / "p.json");
  CHECK(q.kind == p.kind);
  REQUIRE(q.points.size() == 2);
  CHECK(q.points[0].direction().azimuth() == p.points[0].direction().azimuth());
  CHECK(q.points[0].direction().elevation() == p.points[0].direction().elevation());
  CHECK(q.points[1].position() == p.points[1].position());
  CHECK(q.values[0] == p.values[0]);
  CHECK(q.values[1] == p.values[1]);

  // magnitude kinds store plain numbers
  SampledPattern m = p;
  m.kind = MeasurementKind::MagnitudeLinear;
  m.values << Complex{0.5, 0}, Complex{2.25, 0};
  write_pattern_json(dir / "m.json", m);
  const auto m2 = read_pattern_json(dir / "m.json");
  CHECK(m2.values[0] == m.values[0]);
  CHECK(m2.values[1] == m.values[1]);
}

TEST_CASE("malformed pattern files name the offending field") {
  const auto dir = temp_dir("badpattern");
  const auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name);
    out << body;
  };
  write("nokind.json", R"({"points": [], "values": []})");
  write("badvals.json",
        R"({"kind": "complex", "points": [{"az": 0, "el": 0}], "values": [1]})");
  write("badpoint.json",
        R"({"kind": "mag", "points": [{"foo": 1}], "values": [1]})");
  write("notjson.json", "not json at all {");

  const auto field_of = [&](const std::string& name) {
    try {
      read_pattern_json(dir / name);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("no error");
  };
  CHECK(field_of("nokind.json") == "kind");
  CHECK(field_of("badvals.json") == "values");
  CHECK(field_of("badpoint.json") == "points");
  CHECK(field_of("notjson.json") == "file");
  CHECK(field_of("missing.json") == "file");
}

TEST_CASE("flat config parsing") {
  const auto cfg = FlatConfig::parse_string(
      "# comment\n"
      "model.family = \"rect\"\n"
      "model.rows = 3\n"
      "noise.sigmas = [0, 0.01, 0.1]  # ladder\n"
      "scan.enabled = true\n"
      "solver.decay = 0.7\n");
  CHECK(cfg.get_string("model.family", "") == "rect");
  CHECK(cfg.get_int("model.rows", 0) == 3);
  CHECK(cfg.get_bool("scan.enabled", false));
  CHECK(cfg.get_double("solver.decay", 0) == 0.7);
  const auto sigmas = cfg.get_double_list("noise.sigmas", {});
  REQUIRE(sigmas.size() == 3);
  CHECK(sigmas[1] == 0.01);
  CHECK(cfg.get_int("missing.key", 42) == 42);
  CHECK_NOTHROW(cfg.check_all_consumed());

  CHECK_THROWS_AS(FlatConfig::parse_string("key 3\n"), ConfigError);
  CHECK_THROWS_AS(FlatConfig::parse_string("a = 1\na = 2\n"), ConfigError);
  const auto bad = FlatConfig::parse_string("trials = banana\n");
  CHECK_THROWS_AS(bad.get_int("trials", 1), ConfigError);
  const auto unknown = FlatConfig::parse_string("nonsense = 1\n");
  CHECK_THROWS_AS(unknown.check_all_consumed(), ConfigError);
}

TEST_CASE("experiment config reading and validation") {
  const auto dir = temp_dir("expcfg");
  {
    std::ofstream out(dir / "exp.toml");
    out << "model.family = \"rect\"\n"
           "model.rows = 2\n"
           "model.cols = 2\n"
           "sampling.kind = \"random\"\n"
           "sampling.count = 24\n"
           "noise.sigmas = [0, 0.1]\n"
           "trials = 2\n"
           "seed = 9\n"
           "solver.iterations = 2\n"
           "solver.restarts = 1\n"
           "dense.step_deg = 30\n";
  }
  const auto cfg = read_experiment_config(dir / "exp.toml");
  CHECK(cfg.family == "rect");
  CHECK(cfg.rows == 2);
  CHECK(cfg.sampling.kind == SamplingKind::RandomSphere);
  CHECK(cfg.sampling.count == 24);
  CHECK(cfg.trials == 2);
  CHECK(cfg.solver.max_iterations == 2);

  {
    std::ofstream out(dir / "typo.toml");
    out << "model.family = \"rect\"\nmodle.rows = 2\n";
  }
  CHECK_THROWS_AS(read_experiment_config(dir / "typo.toml"), ConfigError);
  CHECK_THROWS_AS(read_experiment_config(dir / "missing.toml"), ConfigError);
}

TEST_CASE("csv schemas are pinned") {
  std::vector<ScatterRow> scatter{{3, "random", 0.01, 0.5, 1.25, 7, true}};
  CHECK(scatter_csv_text(scatter) ==
        "trial,sampling,sigma,residual,total_error,iterations_used,converged\n"
        "3,random,0.01,0.5,1.25,7,1\n");
  std::vector<TraceRow> trace{{3, 0.1, 0, 2.5}, {3, 0.1, 1, 1.0}};
  CHECK(trace_csv_text(trace) ==
        "trial,sigma,iteration,residual\n"
        "3,0.1,0,2.5\n"
        "3,0.1,1,1\n");
  std::vector<OrderScanEntry> order{{4, 3, 0.125, true}};
  CHECK(order_scan_csv_text(order) ==
        "rows,cols,min_residual,selected\n"
        "4,3,0.125,1\n");
}

TEST_CASE("experiments are byte-identical across runs and thread counts") {
  ExperimentConfig cfg;
  cfg.family = "rect";
  cfg.rows = 2;
  cfg.cols = 2;
  cfg.sampling = SamplingSpec::random_sphere(24);
  cfg.sigmas = {0.0, 0.1};
  cfg.trials = 3;
  cfg.seed = 1234;
  cfg.solver.max_iterations = 2;
  cfg.solver.restarts = 1;
  cfg.dense_step_deg = 30.0;

  const auto d1 = temp_dir("det1");
  const auto d2 = temp_dir("det2");
  const auto d4 = temp_dir("det4");
  cfg.threads = 1;
  cfg.out_dir = d1;
  run_experiment(cfg);
  cfg.out_dir = d2;
  run_experiment(cfg);
  cfg.threads = 2;
  cfg.out_dir = d4;
  run_experiment(cfg);

  CHECK(slurp(d1 / "scatter.csv") == slurp(d2 / "scatter.csv"));
  CHECK(slurp(d1 / "residual_trace.csv") == slurp(d2 / "residual_trace.csv"));
  CHECK(slurp(d1 / "scatter.csv") == slurp(d4 / "scatter.csv"));
  CHECK(slurp(d1 / "residual_trace.csv") == slurp(d4 / "residual_trace.csv"));
}

TEST_CASE("partial runs reproduce the corresponding rows of a full run") {
  ExperimentConfig cfg;
  cfg.family = "rect";
  cfg.rows = 2;
  cfg.cols = 2;
  cfg.sampling = SamplingSpec::azimuth_blocks(3, 8);
  cfg.sigmas = {0.0};
  cfg.trials = 4;
  cfg.seed = 555;
  cfg.solver.max_iterations = 2;
  cfg.solver.restarts = 1;
  cfg.dense_step_deg = 30.0;
  cfg.threads = 1;

  const auto full = run_experiment(cfg);
  cfg.trial_first = 2;
  cfg.trials = 2;
  const auto part = run_experiment(cfg);
  REQUIRE(part.scatter.size() == 2);
  for (std::size_t i = 0; i < part.scatter.size(); ++i) {
    const auto& a = part.scatter[i];
    const auto& b = full.scatter[2 + i];
    CHECK(a.trial == b.trial);
    CHECK(a.residual == b.residual);
    CHECK(a.total_error == b.total_error);
    CHECK(a.converged == b.converged);
  }
}

TEST_CASE("result JSON includes the fit summary") {
  const auto dir = temp_dir("result");
  ExtrapolationResult r;
  r.config = Eigen::VectorXd::Zero(2);
  r.config << 0.25, 0.5;
  r.excitation = Eigen::VectorXcd::Zero(1);
  r.excitation << Complex{0.6, -0.8};
  r.residual_history = {1.0, 0.5, 0.25};
  r.converged = true;
  r.iterations_used = 2;
  write_result_json(dir / "r.json", r);
  const auto text = slurp(dir / "r.json");
  CHECK(text.find("\"residual_history\"") != std::string::npos);
  CHECK(text.find("\"converged\": true") != std::string::npos);
  CHECK(text.find("0.25") != std::string::npos);
}
