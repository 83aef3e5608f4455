#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpp/capacity.hpp"
#include "fpp/penalized.hpp"
#include "fpp/quantity.hpp"
#include "json.hpp"

namespace fpp {

inline constexpr const char* kToolVersion = "fpplab 1.0.0";

// Invalid experiment configuration; the message names the offending field.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

struct ExperimentConfig {
  std::string command = "flow";
  int d = 2;
  std::vector<int> n{8};
  int H = 0;                    // explicit height; 0 defers to the aspect ratio
  std::optional<Ratio> aspect;  // H = ⌈h n⌉; absent as well means a pilot-measured height
  TwoPointDist dist;
  PenaltyParams penalty;
  Quantity quantity = Quantity::kPhi;
  std::uint64_t n_samples = 1000;
  std::uint64_t master_seed = 1;
  std::uint64_t sample = 0;     // flow: which sample index to solve
  std::vector<Ratio> t_grid{Ratio::of(0, 1), Ratio::of(1, 5), Ratio::of(2, 5), Ratio::of(3, 5), Ratio::of(4, 5), Ratio::of(1, 1)};
  std::vector<int> C{0, 1, 2, 4, 8};
  bool bounds = false;          // variance: add Efron–Stein and Newman–Piza columns
  bool norms = false;           // influence: estimate derivative norms and the Talagrand sum
  int pin = -1;                 // lipschitz: anchored boundary height, -1 for ⌊H/2⌋
  // Execution settings; they never change results and stay out of the hash.
  std::string out_dir = ".";
  int jobs = 1;
};

// Throws ConfigError with "field: reason" diagnostics.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);
void validate_config(const ExperimentConfig& cfg);
// SHA-1 of the canonical JSON form, as 40 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

// H for base size n: explicit, ⌈h n⌉, or 4 × the largest canonical-cut extent in a 200-sample
// pilot at H = 2n (twice the measured chimney bound as an aspect ratio).
int resolve_height(const ExperimentConfig& cfg, int n);

// Fixed column CSV accumulated by the runners.
struct ReportRow {
  std::string estimator;
  int n = 0;
  int H = 0;
  std::string key;
  double value = 0;
  double stderr_ = 0;
};

struct RunOutput {
  std::vector<ReportRow> rows;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  int status = 0;
};

RunOutput run_experiment(const ExperimentConfig& cfg);
std::string render_csv(const ExperimentConfig& cfg, const RunOutput& out);
std::string render_json(const ExperimentConfig& cfg, const RunOutput& out);
// Writes <out_dir>/<command>.csv and <command>.json.
void write_reports(const ExperimentConfig& cfg, const RunOutput& out);

// Exact values for a fixed list of tiny instances plus one solved flow instance.
nlohmann::ordered_json oracle_fixture(const ExperimentConfig& cfg);

}  // namespace fpp
