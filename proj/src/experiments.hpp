#pragma once

// Monte-Carlo runners for the three benchmark experiments:
//   test1  phase transition, Gaussian A (J x N), noiseless, success when
//          MaxErr <= threshold;
//   test2  denoising (A = I) of ideal one-jump signals over a list of SNRs,
//          HOTVBL against the oracle-tuned l1 analysis estimate;
//   test3  real signal from noisy complex DFT data, stacked into a real model.
//
// Every trial draws from its own generator seeded by
// derive_seed(base_seed, group key, trial index), so the records do not depend
// on scheduling. Records come back sorted by (group, trial, method).

#include <atomic>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "l1.hpp"
#include "sbl.hpp"
#include "signals.hpp"

namespace hotvbl {

enum class TestId { test1, test2, test3 };
enum class Method { hotvbl, l1_oracle, l1_fixed };

std::string_view to_string(TestId id);
std::string_view to_string(Method method);
TestId test_id_from_string(std::string_view name);

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

struct ExperimentConfig {
  TestId test = TestId::test1;
  int n = 250;
  int j = 50;  // test1 measurement count; tests 2 and 3 use J = N
  int m = 1;   // test1 order
  int k_min = 1;
  int k_max = 25;
  bool jumps_only = false;        // test1 spike positions restricted to m..N-1
  bool l1_comparator = true;      // test1 fixed-lambda l1 run
  double l1_fixed_lambda = 1.0;
  double success_threshold = 1e-3;
  std::vector<SignalKind> kinds = {SignalKind::constant, SignalKind::linear, SignalKind::quadratic};
  std::vector<double> snr_db = {0.0, 10.0, 20.0, 30.0};  // kNoiseless for clean data
  std::vector<int> orders = {1, 2, 3};                   // test3
  int trials = 500;
  std::uint64_t base_seed = 0;
  double confidence = 0.99;
  int jobs = 0;  // 0: hardware concurrency
  bool keep_curves = true;
  SblOptions sbl;
  L1Options l1;

  void validate() const;
};

ExperimentConfig default_config(TestId test);

struct TrialRecord {
  TestId test = TestId::test1;
  std::uint64_t seed = 0;
  int trial = 0;
  int k = 0;                                            // test1
  SignalKind kind = SignalKind::constant;               // test2
  double snr_db = std::numeric_limits<double>::quiet_NaN();  // tests 2, 3 (inf: noiseless)
  int m = 1;
  Method method = Method::hotvbl;
  double rel_err = std::numeric_limits<double>::quiet_NaN();
  double max_err = std::numeric_limits<double>::quiet_NaN();
  bool success = false;
  double realized_snr_db = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();  // l1 methods
  int iterations = 0;
  bool converged = false;
  int sparsity_count = -1;  // test3
  double edge_width = std::numeric_limits<double>::quiet_NaN();    // test2 hotvbl
  double smooth_width = std::numeric_limits<double>::quiet_NaN();  // test2 hotvbl
  std::string error;  // non-empty when the solver threw
  double wall_time = 0.0;
};

// Signal-domain series for one trial, for plotting.
struct Curve {
  std::string label;
  Vector truth;
  Vector observed;  // b for denoising, least-squares back-projection otherwise
  Vector bl_mean;
  Vector bl_lower;
  Vector bl_upper;
  Vector l1;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::vector<Curve> curves;
  bool interrupted = false;
};

// `cancel` is polled between trials; trials not yet started are dropped.
ExperimentResult run_test1(const ExperimentConfig& config, const std::atomic<bool>* cancel = nullptr);
ExperimentResult run_test2(const ExperimentConfig& config, const std::atomic<bool>* cancel = nullptr);
ExperimentResult run_test3(const ExperimentConfig& config, const std::atomic<bool>* cancel = nullptr);
ExperimentResult run_experiment(const ExperimentConfig& config, const std::atomic<bool>* cancel = nullptr);

// Median 99% (config.confidence) interval widths near the jump and far from it.
struct EdgeWidths {
  double edge = 0.0;
  double smooth = 0.0;
};
EdgeWidths edge_interval_widths(const std::vector<double>& widths, int jump_index, int order,
                                int far_distance = 10);

// Aggregates per group and method.
nlohmann::json summarize(const ExperimentResult& result);

// Reproducible exports: no timing data in these.
std::string trials_csv(const ExperimentResult& result);
std::string curves_csv(const ExperimentResult& result);
// Wall times, one row per record.
std::string timings_csv(const ExperimentResult& result);

// JSON round trip of the configuration. `config_from_json` also accepts a
// run manifest (reads its "config" member) and fills missing keys from the
// defaults of the named test.
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& doc, TestId fallback = TestId::test1);

}  // namespace hotvbl
