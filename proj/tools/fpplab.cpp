// fpplab: batch runner for the max-flow / min-cut percolation experiments.
//
//   fpplab <command> [--config file.json] [overrides...]
//
// Exit codes: 0 success, 1 a check inside the run failed, 2 configuration error, 3 guard refusal.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "fpp/experiment.hpp"
#include "fpp/parallel.hpp"
#include "fpp/suite.hpp"
#include "json.hpp"

namespace {

constexpr int kConfigExit = 2;
constexpr int kGuardExit = 3;

struct Overrides {
  std::string config_path;
  std::string command;
  std::optional<int> d, H, slab_height, pin, jobs, a, b;
  std::vector<int> n, C;
  std::optional<std::string> aspect, p_a, epsilon, delta, quantity, out;
  std::optional<std::uint64_t> samples, seed, sample;
  std::vector<std::string> t_grid;
  bool bounds = false, norms = false;
  std::vector<int> only;
};

nlohmann::json overrides_json(const Overrides& o) {
  nlohmann::json j = nlohmann::json::object();
  j["command"] = o.command;
  if (o.d) j["d"] = *o.d;
  if (!o.n.empty()) j["n"] = o.n;
  if (o.H) j["H"] = *o.H;
  if (o.aspect) j["aspect"] = *o.aspect;
  if (o.a) j["a"] = *o.a;
  if (o.b) j["b"] = *o.b;
  if (o.p_a) j["p_a"] = *o.p_a;
  if (o.epsilon) j["epsilon"] = *o.epsilon;
  if (o.delta) j["delta"] = *o.delta;
  if (o.slab_height) j["slab_height"] = *o.slab_height;
  if (o.quantity) j["quantity"] = *o.quantity;
  if (o.samples) j["n_samples"] = *o.samples;
  if (o.seed) j["master_seed"] = *o.seed;
  if (o.sample) j["sample"] = *o.sample;
  if (!o.t_grid.empty()) j["t_grid"] = o.t_grid;
  if (!o.C.empty()) j["C"] = o.C;
  if (o.bounds) j["bounds"] = true;
  if (o.norms) j["norms"] = true;
  if (o.pin) j["pin"] = *o.pin;
  if (o.jobs) j["jobs"] = *o.jobs;
  if (o.out) j["out_dir"] = *o.out;
  return j;
}

fpp::ExperimentConfig load_config(const Overrides& o) {
  fpp::ExperimentConfig cfg;
  if (const char* env = std::getenv("FPPLAB_OUT_DIR"); env && *env) cfg.out_dir = env;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw fpp::ConfigError("config: cannot open '" + o.config_path + "'");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw fpp::ConfigError(std::string("config: ") + e.what());
    }
    cfg = fpp::config_from_json(j, cfg);
  }
  cfg = fpp::config_from_json(overrides_json(o), cfg);
  if (cfg.jobs == 0) cfg.jobs = fpp::default_jobs();
  fpp::validate_config(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact max-flow / min-cut experiments on first-passage percolation cylinders"};
  Overrides o;
  app.add_option("command", o.command,
                 "flow | variance | influence | chaos | chimney | lipschitz | anchored | oracle | suite")
      ->required();
  app.add_option("--config", o.config_path, "JSON config; flags given on the command line override it");
  app.add_option("--d", o.d, "dimension");
  app.add_option("--n", o.n, "base size, or several for a sweep");
  app.add_option("--H", o.H, "height");
  app.add_option("--aspect", o.aspect, "aspect ratio h, H = ceil(h n)");
  app.add_option("--a", o.a, "low capacity");
  app.add_option("--b", o.b, "high capacity");
  app.add_option("--pa", o.p_a, "probability of the low capacity, e.g. 1/2");
  app.add_option("--epsilon", o.epsilon, "penalty exponent epsilon");
  app.add_option("--delta", o.delta, "penalty exponent delta");
  app.add_option("--slab-height", o.slab_height, "slab height for the penalized flow (0: pilot)");
  app.add_option("--quantity", o.quantity, "phi | phi_tilde | psi_lip | tau");
  app.add_option("--samples", o.samples, "Monte Carlo sample count");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--sample", o.sample, "sample index solved by `flow`");
  app.add_option("--t-grid", o.t_grid, "noise levels for `chaos`");
  app.add_option("--C", o.C, "localization offsets for `anchored`");
  app.add_flag("--bounds", o.bounds, "add Efron-Stein and Newman-Piza estimates to `variance`");
  app.add_flag("--norms", o.norms, "estimate derivative norms in `influence`");
  app.add_option("--pin", o.pin, "anchored boundary height for `lipschitz`");
  app.add_option("--jobs", o.jobs, "worker threads (0: FPP_JOBS or hardware)");
  app.add_option("--out", o.out, "output directory (default $FPPLAB_OUT_DIR or .)");
  app.add_option("--only", o.only, "`suite`: run only these criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigExit;
  }

  try {
    const fpp::ExperimentConfig cfg = load_config(o);
    fpp::RunOutput out;
    if (cfg.command == "suite") {
      fpp::SuiteOptions opt;
      opt.jobs = cfg.jobs;
      opt.only = o.only;
      opt.progress = &std::cout;
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const fpp::CriterionResult& r : fpp::run_acceptance(opt)) {
        out.rows.push_back({"criterion", 0, 0, std::to_string(r.id), r.pass ? 1.0 : 0.0, 0});
        arr.push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
        if (!r.pass) out.status = 1;
      }
      out.results["criteria"] = arr;
    } else {
      out = fpp::run_experiment(cfg);
    }
    fpp::write_reports(cfg, out);
    if (cfg.command != "suite") std::cout << fpp::render_csv(cfg, out);
    return out.status;
  } catch (const fpp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  } catch (const fpp::GuardError& e) {
    std::cerr << e.what() << "\n";
    return kGuardExit;
  } catch (const fpp::CapacityError& e) {
    std::cerr << e.what() << "\n";
    return kGuardExit;
  } catch (const fpp::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigExit;
  }
}
