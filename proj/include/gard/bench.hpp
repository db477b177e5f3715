#pragma once

#include "gard/baselines.hpp"
#include "gard/datagen.hpp"
#include "gard/gard.hpp"
#include "gard/theory.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Experiment runner: seeded trial grids over outlier fractions, run by a small
// worker pool and folded in trial order, so results do not depend on the
// worker count.
namespace gard::bench {

inline constexpr const char* kVersion = "0.1.0";
/// Relative error below which a trial counts as a recovery.
inline constexpr double kSuccessRelError = 0.03;

enum class Experiment { kMseSweep, kScaling, kSupport, kPhase, kNoiseSuite, kCertify };
enum class Method { kGard, kMEst, kRomp, kAdmm };

std::string to_string(Experiment e);
std::string to_string(Method m);
/// Accepts both the config spelling (mse_sweep) and the CLI spelling (mse-sweep).
Experiment parse_experiment(const std::string& s);
Method parse_method(const std::string& s);

/// Invalid or inconsistent configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MethodParams {
  Engine gard_engine = Engine::kCholesky;
  std::optional<Index> gard_max_outliers;
  /// Noise bounds handed to GARD and ROMP; default is the instance's epsilon0.
  std::optional<double> gard_epsilon0;
  std::optional<double> romp_epsilon0;
  baselines::IrlsConfig m_est;
  baselines::IrlsConfig romp;
  baselines::AdmmConfig admm;
};

struct InstanceModel {
  datagen::InlierModel inlier = datagen::GaussianInlier{1.0, std::nullopt};
  double outlier_magnitude = 25.0;
  datagen::OutlierSign outlier_sign = datagen::OutlierSign::kRandom;
  double hypercube_halfwidth = 1.0;
  double theta_std = 5.0;
  std::optional<std::pair<double, double>> y0_peak_band;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::kMseSweep;
  std::vector<Method> methods{Method::kGard, Method::kMEst, Method::kRomp, Method::kAdmm};
  Index n = 60;
  Index m = 5;
  std::vector<double> fractions{0.1};
  /// scaling: grid over n at fixed m.
  std::vector<Index> n_values;
  /// phase: grid over m at fixed n.
  std::vector<Index> m_values;
  /// noise_suite: which of tests A-D to run.
  std::vector<datagen::NoiseTest> noise_tests;
  int trials = 3;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;
  InstanceModel instance;
  MethodParams params;
  theory::BruteForceBudget budget;
  std::string output_path = "bench_out";

  /// Throws ConfigError.
  void validate() const;
};

/// Rows of the trial grid: one per value of n (scaling), m (phase), noise
/// test (noise_suite), or a single group otherwise.
struct Group {
  std::string label;
  Index n = 0;
  Index m = 0;
  std::optional<datagen::NoiseTest> noise_test;
};
std::vector<Group> groups(const ExperimentConfig& cfg);

/// Outlier count for a fraction of n observations (rounded to nearest).
Index outlier_count(double fraction, Index n);

/// derive_seed(master, {experiment, group, fraction, trial}).
std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t group_index, std::size_t fraction_index,
                         int trial_index);

/// The instance seen by every method in one trial.
datagen::Instance make_trial_instance(const ExperimentConfig& cfg, std::size_t group_index,
                                      std::size_t fraction_index, int trial_index);

struct TrialOutcome {
  std::size_t group_index = 0;
  std::size_t fraction_index = 0;
  int trial_index = 0;
  Method method = Method::kGard;
  Index s = 0;
  double sq_err = 0.0;
  double rel_err = 0.0;
  /// NaN for methods without an outlier estimate (ROMP) and in the noise suite.
  double support_correct_pct = 0.0;
  double support_extra_count = 0.0;
  bool success = false;
  int iterations = 0;
  /// "ok" or "failed"; failed rows carry NaN errors and a reason.
  std::string status = "ok";
  std::string reason;
  double elapsed_seconds = 0.0;
};

/// Certificate of one trial instance (support and certify experiments).
struct TheoryRecord {
  std::size_t group_index = 0;
  std::size_t fraction_index = 0;
  int trial_index = 0;
  Index s = 0;
  double epsilon0 = 0.0;
  bool bound_only = false;
  /// NaN in bound-only mode or when s = 0.
  double delta_s = 0.0;
  double mu_s = 0.0;
  double omega_s_degrees = 0.0;
  double bound_noiseless_c = 0.0;
  /// NaN when undefined.
  double bound_noisy_c = 0.0;
  double tau = 0.0;
  double error_bound_tight = 0.0;
  double error_bound_loose = 0.0;
  /// delta_s < c for the bound matching the instance (noisy when epsilon0 > 0).
  bool guarantee = false;
  Index d = 0;
};

struct SummaryRow {
  std::size_t group_index = 0;
  std::size_t fraction_index = 0;
  Method method = Method::kGard;
  int trials = 0;
  int failures = 0;
  /// Means over the non-failed trials.
  double mse = 0.0;
  double mse_db = 0.0;
  double success_rate = 0.0;
  double support_correct_pct = 0.0;
  double support_extra_mean = 0.0;
  double mean_time = 0.0;
};

struct Crossing {
  std::size_t group_index = 0;
  Method method = Method::kGard;
  /// NaN when the curve never crosses 0.5 on the grid.
  double fraction = 0.0;
  /// "crossed", "above_all", "below_all" or "no_crossing" (never falls through 0.5).
  std::string status;
};

/// Fraction where the success rate falls through 0.5, by linear
/// interpolation between the first bracketing grid points.
Crossing find_crossing(const std::vector<double>& fractions, const std::vector<double>& rates);

struct BenchResult {
  ExperimentConfig config;
  std::vector<Group> groups;
  std::vector<TrialOutcome> trials;
  std::vector<TheoryRecord> theory;
  std::vector<SummaryRow> summary;
  std::vector<Crossing> crossings;
  std::vector<std::string> warnings;
};

/// Runs the configured experiment. Throws ConfigError, and
/// theory::BudgetExceededError for certify runs outside the budget.
BenchResult run_experiment(const ExperimentConfig& cfg);

/// Runs one method on one instance and scores it against the truth.
TrialOutcome run_method(const ExperimentConfig& cfg, Method method, const datagen::Instance& inst,
                        const Group& group);

/// Aggregates trial outcomes in (group, fraction, method) order.
std::vector<SummaryRow> summarize(const ExperimentConfig& cfg, const std::vector<Group>& groups,
                                  const std::vector<TrialOutcome>& trials);

/// Writes <out>.csv (summary), <out>_trials.csv, <out>.json (run metadata) and,
/// where relevant, <out>_theory.csv and <out>_crossings.csv. Returns the paths.
/// Timing columns come last in every CSV.
std::vector<std::filesystem::path> write_outputs(const BenchResult& result, const std::filesystem::path& out);

// Configuration (bench_config.cpp).

std::vector<std::string> preset_names();
/// Throws ConfigError for unknown names.
ExperimentConfig preset(const std::string& name);
/// Applies the keys of a JSON document on top of base. Unknown keys are errors.
ExperimentConfig apply_config_json(const ExperimentConfig& base, const std::string& json_text);
ExperimentConfig load_config_file(const ExperimentConfig& base, const std::filesystem::path& file);
/// Fully resolved config as JSON text.
std::string config_to_json(const ExperimentConfig& cfg);

/// Per-test method settings of the heavy-tailed noise suite: epsilon0 = 3 for
/// GARD and ROMP in A-C, the summed inlier bound sqrt(n) in D; Tukey scale fixed at
/// 1.2 (A) or 1 (B, C), MAD-estimated in D.
MethodParams noise_suite_params(const MethodParams& base, datagen::NoiseTest test, Index n);

}  // namespace gard::bench
