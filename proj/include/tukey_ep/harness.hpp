#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "tukey_ep/dragonian.hpp"
#include "tukey_ep/ep_engine.hpp"
#include "tukey_ep/test_functions.hpp"

namespace tukey_ep {

enum class OutputFormat { Csv, Json };

/// Everything needed to reproduce a multi-trial experiment. Serialized
/// field-for-field as the JSON config file and inside every run manifest.
///
/// Zero for `dimension` or `population`, and empty `bounds`, mean "use the
/// objective's / scheme's default"; resolved() fills them in.
struct ExperimentConfig {
  std::string objective = "rosenbrock";  // benchmark name or "dragonian"
  std::size_t dimension = 0;
  int scheme = 3;
  std::size_t population = 0;
  std::size_t trials = 25;
  std::size_t budget = 60000;
  std::uint64_t seed = 1;
  std::size_t q = 10;
  double eta_floor = 1e-6;
  std::optional<double> eta_init;
  std::string repair = "clamp";
  double beta_min = 0.1;
  double beta_range = 2.0;
  double lambda_min = -1.0;
  double lambda_range = 1.14;
  std::vector<Bounds> bounds;
  dragonian::Givens givens;
  dragonian::FitnessConfig fitness;
  std::string output_dir = "results";
  OutputFormat format = OutputFormat::Csv;

  bool is_dragonian() const { return objective == "dragonian"; }
  /// Copy with every defaulted field made explicit; validates.
  ExperimentConfig resolved() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;

  SchemeConfig scheme_config() const;
  /// Evolution settings for one trial; the trial index becomes the RNG stream.
  EvolutionConfig evolution_config(std::size_t trial) const;
  Objective objective_function() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

ExperimentConfig load_config(const std::filesystem::path& path);

/// One optimizer run inside an experiment.
struct RunResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::vector<GenerationRecord> trajectory;
  std::vector<double> best_point;
  double best_fitness = 0.0;
  std::size_t evaluations = 0;
  std::size_t non_finite_evaluations = 0;

  std::size_t generations() const { return trajectory.empty() ? 0 : trajectory.back().generation; }
};

struct AggregateRow {
  std::size_t generation = 0;
  std::size_t evaluations = 0;
  double overall_best = 0.0;  // min across trials
  double mean_best = 0.0;
  double std_best = 0.0;      // population standard deviation across trials
};

using AggregateResult = std::vector<AggregateRow>;

struct ExperimentResult {
  ExperimentConfig config;  // resolved
  std::vector<RunResult> trials;
  AggregateResult aggregate;
};

/// Worker count from TUKEY_EP_WORKERS, else the hardware concurrency.
std::size_t default_worker_count();

/// Runs config.trials independent trials (stream id = trial index), up to
/// `workers` at a time. Output does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers = 0);

/// Per-generation statistics of best_so_far across trials, truncated to the
/// shortest trial.
AggregateResult aggregate_trials(const std::vector<RunResult>& trials);

struct EmittedFiles {
  std::filesystem::path trials;
  std::filesystem::path aggregate;
  std::filesystem::path manifest;
};

inline constexpr const char* kTrialsCsvHeader =
    "trial,generation,evaluations,best_of_generation,best_so_far";
inline constexpr const char* kAggregateCsvHeader =
    "generation,evaluations,overall_best,mean_best,std_best";

/// Writes trials.{csv,json}, aggregate.{csv,json} and manifest.json into
/// `dir`. Throws std::runtime_error on I/O failure.
EmittedFiles emit_results(const ExperimentResult& result, const std::filesystem::path& dir,
                          OutputFormat format);

/// Trial rows parsed back from trials.csv; only the trajectory fields are set.
std::vector<RunResult> read_trials_csv(const std::filesystem::path& path);
AggregateResult read_aggregate_csv(const std::filesystem::path& path);
std::vector<RunResult> read_trials_json(const std::filesystem::path& path);
AggregateResult read_aggregate_json(const std::filesystem::path& path);
nlohmann::json read_manifest(const std::filesystem::path& path);
nlohmann::json manifest_json(const ExperimentResult& result);

/// Closed interval swept by the grid-search oracle.
struct Range {
  double low = 0.0;
  double high = 0.0;
};

struct OracleResult {
  dragonian::Vars vars;
  double fitness = 0.0;
  std::size_t cells = 0;
};

/// Exhaustive evaluation of the antenna fitness on a regular grid with the
/// given step; ties go to the lower theta_0, then the lower f12.
OracleResult grid_search_oracle(const dragonian::Givens& givens,
                                const dragonian::FitnessConfig& fc, Range theta0_range,
                                Range f12_range, double step);

/// Entry point of the tukey-ep command line tool. Returns 0 on success, 1 on
/// a usage or configuration error, 2 on a runtime failure.
int cli_main(int argc, const char* const* argv);

}  // namespace tukey_ep
