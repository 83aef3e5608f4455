#include "fpp/experiment.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fpp/estimators.hpp"
#include "fpp/flow.hpp"
#include "fpp/format.hpp"
#include "fpp/lipschitz.hpp"
#include "fpp/oracle.hpp"
#include "fpp/suite.hpp"

namespace fpp {

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> v{"flow", "variance", "influence", "chaos", "chimney",
                                          "lipschitz", "anchored", "oracle", "suite"};
  return v;
}

[[noreturn]] void fail(const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); }

Ratio ratio_field(const nlohmann::json& v, const std::string& field) {
  try {
    if (v.is_string()) return Ratio::parse(v.get<std::string>());
    if (v.is_number_integer()) return Ratio::of(v.get<std::int64_t>(), 1);
    if (v.is_number_float()) return Ratio::parse(fmt_double(v.get<double>()));
  } catch (const DomainError& e) {
    fail(field, e.what());
  }
  fail(field, "expected a rational such as \"1/2\" or 0.25");
}

template <class T>
T typed(const nlohmann::json& v, const std::string& field) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(field, "wrong type");
  }
}

ojson ratio_json(const Ratio& r) { return r.str(); }

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig c) {
  if (!j.is_object()) fail("config", "expected a JSON object");
  static const std::vector<std::string> fields{"command", "d", "n", "H", "aspect", "a", "b", "p_a", "epsilon",
                                               "delta", "slab_height", "quantity", "n_samples", "master_seed",
                                               "sample", "t_grid", "C", "bounds", "norms", "pin", "out_dir", "jobs"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(fields.begin(), fields.end(), key) == fields.end()) fail(key, "unknown field");
  }
  if (j.contains("command")) c.command = typed<std::string>(j["command"], "command");
  if (j.contains("d")) c.d = typed<int>(j["d"], "d");
  if (j.contains("n")) {
    if (j["n"].is_array()) {
      c.n = typed<std::vector<int>>(j["n"], "n");
    } else {
      c.n = {typed<int>(j["n"], "n")};
    }
  }
  if (j.contains("H")) c.H = typed<int>(j["H"], "H");
  if (j.contains("aspect")) c.aspect = ratio_field(j["aspect"], "aspect");
  if (j.contains("a")) c.dist.a = typed<int>(j["a"], "a");
  if (j.contains("b")) c.dist.b = typed<int>(j["b"], "b");
  if (j.contains("p_a")) c.dist.p_a = ratio_field(j["p_a"], "p_a");
  if (j.contains("epsilon")) c.penalty.epsilon = ratio_field(j["epsilon"], "epsilon");
  if (j.contains("delta")) c.penalty.delta = ratio_field(j["delta"], "delta");
  if (j.contains("slab_height")) c.penalty.slab_height = typed<int>(j["slab_height"], "slab_height");
  if (j.contains("quantity")) {
    try {
      c.quantity = parse_quantity(typed<std::string>(j["quantity"], "quantity"));
    } catch (const ConfigError&) {
      throw;
    } catch (const DomainError& e) {
      fail("quantity", e.what());
    }
  }
  if (j.contains("n_samples")) c.n_samples = typed<std::uint64_t>(j["n_samples"], "n_samples");
  if (j.contains("master_seed")) c.master_seed = typed<std::uint64_t>(j["master_seed"], "master_seed");
  if (j.contains("sample")) c.sample = typed<std::uint64_t>(j["sample"], "sample");
  if (j.contains("t_grid")) {
    if (!j["t_grid"].is_array()) fail("t_grid", "expected an array");
    c.t_grid.clear();
    for (const auto& v : j["t_grid"]) c.t_grid.push_back(ratio_field(v, "t_grid"));
  }
  if (j.contains("C")) c.C = typed<std::vector<int>>(j["C"], "C");
  if (j.contains("bounds")) c.bounds = typed<bool>(j["bounds"], "bounds");
  if (j.contains("norms")) c.norms = typed<bool>(j["norms"], "norms");
  if (j.contains("pin")) c.pin = typed<int>(j["pin"], "pin");
  if (j.contains("out_dir")) c.out_dir = typed<std::string>(j["out_dir"], "out_dir");
  if (j.contains("jobs")) c.jobs = typed<int>(j["jobs"], "jobs");
  return c;
}

ojson config_to_json(const ExperimentConfig& c) {
  ojson j;
  j["command"] = c.command;
  j["d"] = c.d;
  j["n"] = c.n;
  j["H"] = c.H;
  j["aspect"] = c.aspect ? ratio_json(*c.aspect) : ojson(nullptr);
  j["a"] = c.dist.a;
  j["b"] = c.dist.b;
  j["p_a"] = ratio_json(c.dist.p_a);
  j["epsilon"] = ratio_json(c.penalty.epsilon);
  j["delta"] = ratio_json(c.penalty.delta);
  j["slab_height"] = c.penalty.slab_height;
  j["quantity"] = std::string(quantity_name(c.quantity));
  j["n_samples"] = c.n_samples;
  j["master_seed"] = c.master_seed;
  j["sample"] = c.sample;
  ojson grid = ojson::array();
  for (const Ratio& t : c.t_grid) grid.push_back(ratio_json(t));
  j["t_grid"] = grid;
  j["C"] = c.C;
  j["bounds"] = c.bounds;
  j["norms"] = c.norms;
  j["pin"] = c.pin;
  return j;
}

void validate_config(const ExperimentConfig& c) {
  if (std::find(known_commands().begin(), known_commands().end(), c.command) == known_commands().end()) {
    fail("command", "unknown subcommand '" + c.command + "'");
  }
  if (c.d < 2 || c.d > kMaxDim) fail("d", "must lie in [2, 8]");
  if (c.n.empty()) fail("n", "needs at least one size");
  for (int n : c.n) {
    if (n < 0) fail("n", "sizes must be non-negative");
  }
  if (c.H < 0) fail("H", "must be non-negative");
  if (c.aspect && c.aspect->is_zero()) fail("aspect", "must be positive");
  try {
    c.dist.validate();
  } catch (const DomainError& e) {
    fail("a/b/p_a", e.what());
  }
  try {
    c.penalty.validate();
  } catch (const DomainError& e) {
    fail("epsilon/delta/slab_height", e.what());
  }
  if (c.n_samples < 2 && c.command != "flow" && c.command != "oracle" && c.command != "suite") {
    fail("n_samples", "must be at least 2");
  }
  for (std::size_t k = 0; k < c.t_grid.size(); ++k) {
    if (Ratio::of(1, 1) < c.t_grid[k]) fail("t_grid", "values must lie in [0, 1]");
    if (k > 0 && !(c.t_grid[k - 1] < c.t_grid[k])) fail("t_grid", "must be strictly increasing");
  }
  if (c.jobs < 0) fail("jobs", "must be non-negative");
}

std::string config_hash(const ExperimentConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(text.data()), text.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : digest) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

int resolve_height(const ExperimentConfig& cfg, int n) {
  if (cfg.H > 0) return cfg.H;
  if (cfg.aspect) {
    const __int128 num = static_cast<__int128>(cfg.aspect->num) * n;
    const auto h = static_cast<int>((num + cfg.aspect->den - 1) / cfg.aspect->den);
    return std::max(h, 1);
  }
  MonteCarloPlan pilot;
  pilot.spec = CylinderSpec{cfg.d, n, std::max(2, 2 * n)};
  pilot.dist = cfg.dist;
  pilot.master_seed = cfg.master_seed;
  pilot.jobs = cfg.jobs;
  // pilot_slab_height returns min(H, 2 × extent); the aspect wants twice that.
  const int twice_extent = pilot_slab_height(pilot, 200);
  return std::max(2, 2 * twice_extent);
}

namespace {

MonteCarloPlan plan_of(const ExperimentConfig& cfg, int n, int H) {
  MonteCarloPlan p;
  p.quantity = cfg.quantity;
  p.spec = CylinderSpec{cfg.d, n, H};
  p.dist = cfg.dist;
  p.penalty = cfg.penalty;
  p.n_samples = cfg.n_samples;
  p.master_seed = cfg.master_seed;
  p.jobs = cfg.jobs;
  return p;
}

ojson estimate_json(const Estimate& e) {
  ojson j;
  j["mean"] = e.mean;
  j["variance"] = e.variance;
  j["stderr_of_mean"] = e.stderr_of_mean;
  j["stderr_of_variance"] = e.stderr_of_variance;
  j["n_samples"] = e.n_samples;
  return j;
}

std::vector<std::uint32_t> ids(const EdgeSet& s) {
  std::vector<std::uint32_t> v;
  v.reserve(s.size());
  for (EdgeId e : s) v.push_back(index(e));
  return v;
}

void run_flow(const ExperimentConfig& cfg, RunOutput& out) {
  const int n = cfg.n.front();
  const int H = resolve_height(cfg, n);
  const Lattice L(CylinderSpec{cfg.d, n, H});
  const CapacityField f = sample_field(L, cfg.dist, cfg.master_seed, cfg.sample);
  const auto role = cylinder_roles(L);
  const FlowResult r = solve_flow(L, f.values, role);
  const CutSet cut = canonical_min_cut(L, f.values, r);
  const EdgeSet ess = essential_edges(L, r);
  const EdgeSet piv = pivotal_edges(L, f.values, cfg.dist, role, r);
  out.rows.push_back({"flow", n, H, "value", static_cast<double>(r.value), 0});
  out.rows.push_back({"flow", n, H, "cut_capacity", static_cast<double>(cut.capacity), 0});
  out.rows.push_back({"flow", n, H, "cut_size", static_cast<double>(cut.edges.size()), 0});
  out.rows.push_back({"flow", n, H, "extent", static_cast<double>(cut.h_max - cut.h_min), 0});
  out.rows.push_back({"flow", n, H, "essential", static_cast<double>(ess.size()), 0});
  out.rows.push_back({"flow", n, H, "pivotal", static_cast<double>(piv.size()), 0});
  ojson& j = out.results;
  j["n"] = n;
  j["H"] = H;
  j["sample"] = cfg.sample;
  j["value"] = r.value;
  j["cut_edges"] = ids(cut.edges);
  j["cut_capacity"] = cut.capacity;
  j["h_min"] = cut.h_min;
  j["h_max"] = cut.h_max;
  j["essential"] = ids(ess);
  j["pivotal"] = ids(piv);
  if (L.num_edges() <= 256) j["capacities"] = f.values;
}

void run_variance(const ExperimentConfig& cfg, RunOutput& out) {
  ojson points = ojson::array();
  for (int n : cfg.n) {
    const int H = resolve_height(cfg, n);
    const MonteCarloPlan plan = plan_of(cfg, n, H);
    ojson p;
    p["n"] = n;
    p["H"] = H;
    Estimate var;
    if (cfg.bounds) {
      const VarianceBounds b = variance_bounds(plan);
      var = b.variance;
      out.rows.push_back({"efron_stein", n, H, "", b.efron_stein.mean, b.efron_stein.stderr_of_mean});
      if (cfg.quantity != Quantity::kPsiLip) {
        out.rows.push_back({"newman_piza", n, H, "", b.newman_piza.mean, b.newman_piza.stderr_of_mean});
        p["newman_piza"] = estimate_json(b.newman_piza);
      }
      p["efron_stein"] = estimate_json(b.efron_stein);
    } else {
      var = estimate_variance(plan);
    }
    out.rows.push_back({"mean", n, H, "", var.mean, var.stderr_of_mean});
    out.rows.push_back({"variance", n, H, "", var.variance, var.stderr_of_variance});
    if (n >= 2) {
      const double scale = std::log(static_cast<double>(n)) / std::pow(static_cast<double>(n), cfg.d - 1);
      out.rows.push_back({"variance_log_n_over_area", n, H, "", var.variance * scale, var.stderr_of_variance * scale});
    }
    p["estimate"] = estimate_json(var);
    points.push_back(p);
  }
  out.results["points"] = points;
}

void run_influence(const ExperimentConfig& cfg, RunOutput& out) {
  const int n = cfg.n.front();
  const int H = resolve_height(cfg, n);
  MonteCarloPlan plan = plan_of(cfg, n, H);
  plan.quantity = Quantity::kPhiTilde;
  InfluenceOptions opt;
  opt.derivative_norms = cfg.norms;
  const InfluenceProfile p = influence_profile(plan, opt);
  out.rows.push_back({"influence", n, H, "slab_height", static_cast<double>(p.slab_height), 0});
  out.rows.push_back({"influence", n, H, "hit_sum", p.hit_sum, 0});
  out.rows.push_back({"influence", n, H, "j0_bottom", p.bottom, p.bottom_stderr});
  out.rows.push_back({"influence", n, H, "j0_top", p.top, p.top_stderr});
  out.rows.push_back({"influence", n, H, "shift_max", p.shift_max, p.shift_stderr});
  for (const auto& [xi, count] : p.thresholds) {
    out.rows.push_back({"influence_threshold", n, H, fmt_double(xi), static_cast<double>(count), 0});
  }
  ojson& j = out.results;
  j["n"] = n;
  j["H"] = H;
  j["slab_height"] = p.slab_height;
  j["hit"] = p.hit;
  j["j0_histogram"] = p.j0_histogram;
  j["shift_excess"] = p.shift_excess;
  if (cfg.norms) {
    const double t = talagrand_rhs(p.l1, p.l2);
    out.rows.push_back({"talagrand_rhs", n, H, "", t, 0});
    j["l1"] = p.l1;
    j["l2"] = p.l2;
    j["talagrand_rhs"] = t;
    j["penalty_bit_bound"] = penalty_bit_derivative_bound(cfg.d, n, cfg.penalty.delta);
  }
}

void run_chaos(const ExperimentConfig& cfg, RunOutput& out) {
  const int n = cfg.n.front();
  const int H = resolve_height(cfg, n);
  MonteCarloPlan plan = plan_of(cfg, n, H);
  if (plan.quantity != Quantity::kTau) plan.quantity = Quantity::kPhi;
  const ChaosCurve c = chaos_curve(plan, cfg.t_grid);
  ojson pts = ojson::array();
  for (const ChaosPoint& p : c.points) {
    const std::string t = p.t.str();
    out.rows.push_back({"chaos_pivotal", n, H, t, p.pivotal.mean, p.pivotal.stderr_of_mean});
    out.rows.push_back({"chaos_essential", n, H, t, p.essential.mean, p.essential.stderr_of_mean});
    out.rows.push_back({"chaos_weighted", n, H, t, p.weighted.mean, p.weighted.stderr_of_mean});
    ojson q;
    q["t"] = t;
    q["pivotal"] = estimate_json(p.pivotal);
    q["essential"] = estimate_json(p.essential);
    q["weighted"] = estimate_json(p.weighted);
    q["drop"] = p.drop;
    q["drop_stderr"] = p.drop_stderr;
    pts.push_back(q);
  }
  out.rows.push_back({"chaos_integral", n, H, "", c.integral, c.integral_stderr});
  out.rows.push_back({"chaos_weighted_integral", n, H, "", c.weighted_integral, c.weighted_integral_stderr});
  out.rows.push_back({"variance", n, H, "", c.variance.variance, c.variance.stderr_of_variance});
  out.results["points"] = pts;
  out.results["variance"] = estimate_json(c.variance);
}

void run_chimney(const ExperimentConfig& cfg, RunOutput& out) {
  const int n = cfg.n.front();
  const int H = resolve_height(cfg, n);
  const ChimneyReport r = chimney_statistics(plan_of(cfg, n, H));
  for (std::size_t k = 0; k < r.extent_histogram.size(); ++k) {
    if (r.extent_histogram[k] == 0) continue;
    out.rows.push_back({"extent_histogram", n, H, std::to_string(k), static_cast<double>(r.extent_histogram[k]), 0});
  }
  out.rows.push_back({"chimney", n, H, "cuts", static_cast<double>(r.cuts), 0});
  out.rows.push_back({"chimney", n, H, "max_extent", static_cast<double>(r.max_extent), 0});
  out.rows.push_back({"chimney", n, H, "violations", static_cast<double>(r.violations), 0});
  out.rows.push_back({"chimney", n, H, "empty_A", static_cast<double>(r.empty_A), 0});
  out.rows.push_back({"chimney", n, H, "stops_overlap", static_cast<double>(r.stops_overlap), 0});
  out.results["extent_histogram"] = r.extent_histogram;
  out.results["violating_samples"] = r.violating_samples;
  if (r.violations > 0) out.status = 1;
}

void run_lipschitz(const ExperimentConfig& cfg, RunOutput& out) {
  const int n = cfg.n.front();
  const int H = resolve_height(cfg, n);
  const CylinderSpec spec{cfg.d, n, H};
  const int pin = cfg.pin >= 0 ? cfg.pin : H / 2;
  std::uint64_t checked = 0, mismatches = 0, anchored_below = 0;
  double sum = 0, anchored_sum = 0;
  for (std::uint64_t i = 0; i < cfg.n_samples; ++i) {
    const VertexWeightField w = sample_vertex_weights(spec, cfg.dist, cfg.master_seed, i);
    const LipschitzSolution free = solve_lipschitz(w);
    const LipschitzSolution anchored = solve_anchored_lipschitz(w, pin);
    sum += static_cast<double>(free.value);
    anchored_sum += static_cast<double>(anchored.value);
    anchored_below += anchored.value < free.value;
    try {
      const FlowValue brute = brute_force_lipschitz(w, 100000);
      ++checked;
      mismatches += brute != free.value;
    } catch (const GuardError&) {
    }
  }
  const double N = static_cast<double>(cfg.n_samples);
  out.rows.push_back({"lipschitz", n, H, "mean", sum / N, 0});
  out.rows.push_back({"lipschitz", n, H, "anchored_mean", anchored_sum / N, 0});
  out.rows.push_back({"lipschitz", n, H, "brute_checked", static_cast<double>(checked), 0});
  out.rows.push_back({"lipschitz", n, H, "mismatches", static_cast<double>(mismatches), 0});
  out.rows.push_back({"lipschitz", n, H, "anchored_below_free", static_cast<double>(anchored_below), 0});
  out.results["pin"] = pin;
  out.results["brute_checked"] = checked;
  out.results["mismatches"] = mismatches;
  if (mismatches > 0 || anchored_below > 0) out.status = 1;
}

void run_anchored(const ExperimentConfig& cfg, RunOutput& out) {
  const int n = cfg.n.front();
  const int H = resolve_height(cfg, n);
  MonteCarloPlan plan = plan_of(cfg, n, H);
  plan.quantity = Quantity::kTau;
  const LocalizationReport r = anchored_localization(plan, cfg.C);
  out.rows.push_back({"tau", n, H, "mean", r.tau.mean, r.tau.stderr_of_mean});
  out.rows.push_back({"tau", n, H, "variance", r.tau.variance, r.tau.stderr_of_variance});
  for (std::size_t k = 0; k < r.C.size(); ++k) {
    out.rows.push_back({"localization", n, H, std::to_string(r.C[k]), r.outside_fraction[k], 0});
  }
  out.results["tau"] = estimate_json(r.tau);
  out.results["C"] = r.C;
  out.results["outside_fraction"] = r.outside_fraction;
}

void run_oracle(const ExperimentConfig& cfg, RunOutput& out) {
  out.results = oracle_fixture(cfg);
  for (const auto& inst : out.results["instances"]) {
    const auto& sp = inst["spec"];
    const std::string key = inst["quantity"].get<std::string>() + "/d" + std::to_string(sp["d"].get<int>());
    out.rows.push_back({"exact_variance", sp["n"].get<int>(), sp["H"].get<int>(), key,
                        mpq_class(inst["variance"].get<std::string>()).get_d(), 0});
  }
}

void run_suite(const ExperimentConfig& cfg, RunOutput& out) {
  SuiteOptions opt;
  opt.jobs = cfg.jobs;
  ojson arr = ojson::array();
  for (const CriterionResult& r : run_acceptance(opt)) {
    out.rows.push_back({"criterion", 0, 0, std::to_string(r.id), r.pass ? 1.0 : 0.0, 0});
    ojson j;
    j["id"] = r.id;
    j["title"] = r.title;
    j["pass"] = r.pass;
    j["detail"] = r.detail;
    arr.push_back(j);
    if (!r.pass) out.status = 1;
  }
  out.results["criteria"] = arr;
}

}  // namespace

RunOutput run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  RunOutput out;
  const std::string& c = cfg.command;
  if (c == "flow") run_flow(cfg, out);
  else if (c == "variance") run_variance(cfg, out);
  else if (c == "influence") run_influence(cfg, out);
  else if (c == "chaos") run_chaos(cfg, out);
  else if (c == "chimney") run_chimney(cfg, out);
  else if (c == "lipschitz") run_lipschitz(cfg, out);
  else if (c == "anchored") run_anchored(cfg, out);
  else if (c == "oracle") run_oracle(cfg, out);
  else if (c == "suite") run_suite(cfg, out);
  return out;
}

std::string render_csv(const ExperimentConfig& cfg, const RunOutput& out) {
  const std::string hash = config_hash(cfg);
  std::string s = "config_hash,master_seed,command,estimator,quantity,d,n,H,key,value,stderr\n";
  for (const ReportRow& r : out.rows) {
    s += hash;
    s += ',';
    append_int(s, cfg.master_seed);
    s += ',';
    s += cfg.command;
    s += ',';
    s += r.estimator;
    s += ',';
    s += quantity_name(cfg.quantity);
    s += ',';
    append_int(s, cfg.d);
    s += ',';
    append_int(s, r.n);
    s += ',';
    append_int(s, r.H);
    s += ',';
    s += r.key;
    s += ',';
    append_double(s, r.value);
    s += ',';
    append_double(s, r.stderr_);
    s += '\n';
  }
  return s;
}

std::string render_json(const ExperimentConfig& cfg, const RunOutput& out) {
  ojson j;
  j["tool"] = kToolVersion;
  j["config_hash"] = config_hash(cfg);
  j["master_seed"] = cfg.master_seed;
  j["config"] = config_to_json(cfg);
  j["results"] = out.results;
  return j.dump(2) + "\n";
}

void write_reports(const ExperimentConfig& cfg, const RunOutput& out) {
  const std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / (cfg.command + ".csv"), std::ios::binary) << render_csv(cfg, out);
  std::ofstream(dir / (cfg.command + ".json"), std::ios::binary) << render_json(cfg, out);
}

ojson oracle_fixture(const ExperimentConfig& cfg) {
  struct Item {
    CylinderSpec spec;
    Quantity q;
  };
  const std::vector<Item> items{
      {{2, 0, 1}, Quantity::kPhi}, {{2, 0, 2}, Quantity::kPhi}, {{2, 1, 1}, Quantity::kPhi},
      {{2, 1, 2}, Quantity::kPhi}, {{2, 2, 1}, Quantity::kPhi}, {{3, 1, 1}, Quantity::kPhi},
      {{2, 1, 2}, Quantity::kTau}, {{2, 1, 2}, Quantity::kPsiLip}};
  ojson fixture;
  fixture["dist"] = {{"a", cfg.dist.a}, {"b", cfg.dist.b}, {"p_a", cfg.dist.p_a.str()}};
  ojson arr = ojson::array();
  for (const Item& it : items) {
    const ExactTable t = tabulate(QuantityEvaluator(it.q, it.spec, cfg.dist));
    const ExactMoments m = exact_moments(t);
    const ExactChaos c = exact_chaos_integral(t);
    ojson j;
    j["spec"] = {{"d", it.spec.d}, {"n", it.spec.n}, {"H", it.spec.H}};
    j["quantity"] = std::string(quantity_name(it.q));
    j["mean"] = mpq_str(m.mean);
    j["variance"] = mpq_str(m.variance);
    j["chaos_pivotal"] = mpq_str(c.pivotal);
    j["chaos_weighted"] = mpq_str(c.weighted);
    arr.push_back(j);
  }
  fixture["instances"] = arr;

  const Lattice L(CylinderSpec{2, 1, 1});
  const CapacityField f = sample_field(L, cfg.dist, cfg.master_seed, cfg.sample);
  const auto role = cylinder_roles(L);
  const CutGroundTruth g = enumerate_ground_truth(L, f.values, cfg.dist, role);
  ojson flow;
  flow["spec"] = {{"d", 2}, {"n", 1}, {"H", 1}};
  flow["master_seed"] = cfg.master_seed;
  flow["sample"] = cfg.sample;
  flow["capacities"] = f.values;
  flow["value"] = g.min_capacity;
  ojson cuts = ojson::array();
  for (const EnumeratedCut& c : enumerate_min_cuts(L, f.values, role)) cuts.push_back(ids(c.edges));
  flow["min_cuts"] = cuts;
  flow["canonical"] = ids(g.canonical);
  flow["essential"] = ids(g.essential);
  flow["pivotal"] = ids(g.pivotal);
  fixture["flow"] = flow;
  return fixture;
}

}  // namespace fpp
