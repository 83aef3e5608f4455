#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fpp/experiment.hpp"
#include "fpp/oracle.hpp"
#include "json.hpp"

using namespace fpp;

namespace {

nlohmann::json load_fixture() {
  std::ifstream in(std::string(FPP_FIXTURE_DIR) + "/oracle.json");
  REQUIRE(in.good());
  return nlohmann::json::parse(in);
}

ExperimentConfig small(const std::string& command) {
  ExperimentConfig c;
  c.command = command;
  c.n = {3};
  c.H = 6;
  c.n_samples = 40;
  c.master_seed = 11;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FPPLAB_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("oracle fixture is reproduced") {
  const nlohmann::json fixture = load_fixture();
  ExperimentConfig cfg;
  cfg.command = "oracle";
  const nlohmann::json fresh = nlohmann::json::parse(oracle_fixture(cfg).dump());
  CHECK(fresh == fixture["results"]);
  // Hand-checked entries: a single edge has mean 3/2 and variance 1/4, the unit square 3 and 1/2.
  CHECK(fixture["results"]["instances"][0]["mean"] == "3/2");
  CHECK(fixture["results"]["instances"][0]["variance"] == "1/4");
  CHECK(fixture["results"]["instances"][2]["mean"] == "3");
  CHECK(fixture["results"]["instances"][2]["variance"] == "1/2");
}

TEST_CASE("flow on the fixture seed matches the oracle fixture") {
  const nlohmann::json fx = load_fixture()["results"]["flow"];
  ExperimentConfig cfg;
  cfg.command = "flow";
  cfg.n = {fx["spec"]["n"].get<int>()};
  cfg.H = fx["spec"]["H"].get<int>();
  cfg.master_seed = fx["master_seed"].get<std::uint64_t>();
  cfg.sample = fx["sample"].get<std::uint64_t>();
  const RunOutput out = run_experiment(cfg);
  const nlohmann::json r = nlohmann::json::parse(out.results.dump());
  CHECK(r["capacities"] == fx["capacities"]);
  CHECK(r["value"] == fx["value"]);
  CHECK(r["cut_edges"] == fx["canonical"]);
  CHECK(r["essential"] == fx["essential"]);
  CHECK(r["pivotal"] == fx["pivotal"]);
  // On the unit square the only cut separating bottom from top is the pair of verticals 1 and 2.
  const auto caps = fx["capacities"].get<std::vector<int>>();
  CHECK(fx["value"].get<int>() == caps[1] + caps[2]);
}

TEST_CASE("variance of a degenerate law is zero") {
  ExperimentConfig cfg = small("variance");
  cfg.n_samples = 2;
  cfg.dist.p_a = Ratio::of(1, 1);
  const RunOutput out = run_experiment(cfg);
  bool seen = false;
  for (const ReportRow& r : out.rows) {
    if (r.estimator == "variance") {
      CHECK(r.value == 0.0);
      seen = true;
    }
  }
  CHECK(seen);
}

TEST_CASE("reruns produce byte-identical reports") {
  for (const char* command : {"flow", "variance", "influence", "chaos", "chimney", "lipschitz", "anchored", "oracle"}) {
    CAPTURE(command);
    ExperimentConfig cfg = small(command);
    if (cfg.command == "influence") cfg.norms = true;
    if (cfg.command == "variance") cfg.bounds = true;
    if (cfg.command == "lipschitz") {
      cfg.n = {2};
      cfg.H = 3;
    }
    const RunOutput a = run_experiment(cfg);
    cfg.jobs = 3;
    const RunOutput b = run_experiment(cfg);
    CHECK(render_csv(cfg, a) == render_csv(cfg, b));
    CHECK(render_json(cfg, a) == render_json(cfg, b));
    CHECK(a.status == 0);
  }
}

TEST_CASE("config hash covers results but not execution settings") {
  ExperimentConfig a = small("variance");
  ExperimentConfig b = a;
  b.jobs = 4;
  b.out_dir = "/elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 40);
  b.master_seed = 12;
  CHECK(config_hash(a) != config_hash(b));
  const std::string csv = render_csv(a, RunOutput{{{"mean", 3, 6, "", 0.5, 0.25}}, {}, 0});
  CHECK(csv.find(config_hash(a) + ",11,variance,mean,phi,2,3,6,,0.5,0.25\n") != std::string::npos);
}

TEST_CASE("config round-trips through JSON") {
  ExperimentConfig c = small("chaos");
  c.aspect = Ratio::of(3, 2);
  c.t_grid = {Ratio::of(0, 1), Ratio::of(1, 2)};
  c.quantity = Quantity::kTau;
  const ExperimentConfig back = config_from_json(nlohmann::json::parse(config_to_json(c).dump()));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(resolve_height(back, 4) == 6);
}

TEST_CASE("config errors name the field") {
  auto message = [](const nlohmann::json& j) -> std::string {
    try {
      validate_config(config_from_json(j));
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message({{"colour", 1}}).rfind("colour:", 0) == 0);
  CHECK(message({{"d", "two"}}).rfind("d:", 0) == 0);
  CHECK(message({{"d", 1}}).rfind("d:", 0) == 0);
  CHECK(message({{"command", "plot"}}).rfind("command:", 0) == 0);
  CHECK(message({{"p_a", "3/2"}}).rfind("a/b/p_a:", 0) == 0);
  CHECK(message({{"t_grid", {"1/2", "1/4"}}}).rfind("t_grid:", 0) == 0);
  CHECK(message({{"quantity", "energy"}}).rfind("quantity:", 0) == 0);
  CHECK(message({{"epsilon", "1/3"}}).rfind("epsilon/delta/slab_height:", 0) == 0);
  CHECK(message({{"command", "variance"}, {"n_samples", 1}}).rfind("n_samples:", 0) == 0);
  CHECK(message({{"n", {4, 8}}, {"aspect", "2"}}).empty());
}

TEST_CASE("command line exit codes and report files") {
  const auto dir = std::filesystem::temp_directory_path() / "fpplab_cli_test";
  std::filesystem::remove_all(dir);
  const std::string out = " --out " + dir.string();
  CHECK(run_cli("flow --n 2 --H 3 --seed 5" + out) == 0);
  const std::string first = slurp(dir / "flow.csv");
  CHECK(first.rfind("config_hash,master_seed,command,", 0) == 0);
  CHECK(run_cli("flow --n 2 --H 3 --seed 5 --jobs 2" + out) == 0);
  CHECK(slurp(dir / "flow.csv") == first);
  CHECK(slurp(dir / "flow.json").find("\"tool\": \"fpplab") != std::string::npos);

  CHECK(run_cli("plot" + out) == 2);
  CHECK(run_cli("flow --d 1" + out) == 2);
  CHECK(run_cli("flow --pa 2" + out) == 2);
  CHECK(run_cli("flow --config /nonexistent.json" + out) == 2);
  CHECK(run_cli("flow --bogus-flag" + out) == 2);
  CHECK(run_cli("flow --d 3 --n 100000 --H 2" + out) == 3);

  const auto cfg_path = dir / "cfg.json";
  std::ofstream(cfg_path) << R"({"command": "variance", "n": [2, 3], "H": 4, "n_samples": 20, "master_seed": 3})";
  CHECK(run_cli("variance --config " + cfg_path.string() + out) == 0);
  const std::string csv = slurp(dir / "variance.csv");
  CHECK(csv.find(",3,variance,variance,phi,2,2,4,") != std::string::npos);
  CHECK(csv.find(",3,variance,variance,phi,2,3,4,") != std::string::npos);
  std::filesystem::remove_all(dir);
}
