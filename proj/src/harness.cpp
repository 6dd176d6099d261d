#include "tukey_ep/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "tukey_ep/version.hpp"

namespace tukey_ep {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::vector<Bounds> default_antenna_bounds() { return {{-90.0, -70.0}, {85.0, 105.0}}; }

std::size_t default_dimension(const std::string& objective) {
  if (objective == "dragonian") return 2;
  return parse_benchmark(objective) == Benchmark::Ackley ? 20 : 2;
}

BoundRepair parse_repair(const std::string& name) {
  if (name == "clamp") return BoundRepair::Clamp;
  if (name == "reflect") return BoundRepair::Reflect;
  throw ConfigError("repair: expected 'clamp' or 'reflect', got '" + name + "'");
}

}  // namespace

ExperimentConfig ExperimentConfig::resolved() const {
  ExperimentConfig c = *this;
  if (c.objective != "dragonian") {
    c.objective = std::string(benchmark_name(parse_benchmark(c.objective)));
  }
  if (c.dimension == 0) c.dimension = default_dimension(c.objective);
  if (c.population == 0) c.population = c.scheme == 1 ? 120 : 60;
  if (c.bounds.empty()) {
    c.bounds = c.is_dragonian() ? default_antenna_bounds()
                                : make_benchmark(parse_benchmark(c.objective), c.dimension).bounds;
  }
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (!is_dragonian()) parse_benchmark(objective);
  scheme_from_int(scheme);
  if (trials < 1) throw ConfigError("trials: must be at least 1");
  if (population < 2) throw ConfigError("population: must be at least 2");
  if (budget < population) throw ConfigError("budget: must be at least the population size");
  if (scheme != 1 && population % 3 != 0) {
    throw ConfigError("population: schemes 2 and 3 need a multiple of 3, got " +
                      std::to_string(population));
  }
  if (is_dragonian() && dimension != 2) throw ConfigError("dimension: dragonian has 2 variables");
  if (bounds.size() != dimension) {
    throw ConfigError("bounds: expected " + std::to_string(dimension) + " entries, got " +
                      std::to_string(bounds.size()));
  }
  if (!(fitness.d_cf0 >= 0.0) || !(fitness.d_cs0 >= 0.0)) {
    throw ConfigError("fitness: d_cf0 and d_cs0 must be non-negative");
  }
  parse_repair(repair);
  scheme_config().validate();
  evolution_config(0).validate();
}

SchemeConfig ExperimentConfig::scheme_config() const {
  SchemeConfig s;
  s.scheme = scheme_from_int(scheme);
  s.k = s.scheme == Scheme::Scheme1 ? population : population / 3;
  s.beta_min = beta_min;
  s.beta_range = beta_range;
  s.lambda_min = lambda_min;
  s.lambda_range = lambda_range;
  return s;
}

EvolutionConfig ExperimentConfig::evolution_config(std::size_t trial) const {
  EvolutionConfig e;
  e.mu = population;
  e.q = q;
  e.max_evaluations = budget;
  e.bounds = bounds;
  e.eta_floor = eta_floor;
  e.eta_init = eta_init;
  e.seed = seed;
  e.stream = trial;
  e.repair = parse_repair(repair);
  return e;
}

Objective ExperimentConfig::objective_function() const {
  if (is_dragonian()) {
    return [givens = givens, fc = fitness](std::span<const double> x) {
      return dragonian::dragonian_fitness(givens, {x[0], x[1]}, fc);
    };
  }
  return [spec = make_benchmark(parse_benchmark(objective), dimension)](
             std::span<const double> x) { return spec(x); };
}

void to_json(json& j, const ExperimentConfig& c) {
  json bounds = json::array();
  for (const auto& b : c.bounds) bounds.push_back({b.low, b.high});
  j = json{
      {"objective", c.objective},
      {"dimension", c.dimension},
      {"scheme", c.scheme},
      {"population", c.population},
      {"trials", c.trials},
      {"budget", c.budget},
      {"seed", c.seed},
      {"q", c.q},
      {"eta_floor", c.eta_floor},
      {"eta_init", c.eta_init ? json(*c.eta_init) : json(nullptr)},
      {"repair", c.repair},
      {"beta_min", c.beta_min},
      {"beta_range", c.beta_range},
      {"lambda_min", c.lambda_min},
      {"lambda_range", c.lambda_range},
      {"bounds", bounds},
      {"givens", {{"D", c.givens.D}, {"theta_e", c.givens.theta_e}, {"theta_p", c.givens.theta_p}}},
      {"fitness",
       {{"d_cf0", c.fitness.d_cf0},
        {"d_cs0", c.fitness.d_cs0},
        {"penalty", c.fitness.penalty},
        {"feed_sign", std::string(dragonian::feed_sign_name(c.fitness.feed_sign))}}},
      {"output_dir", c.output_dir},
      {"format", c.format == OutputFormat::Csv ? "csv" : "json"},
  };
}

void from_json(const json& j, ExperimentConfig& c) {
  static const char* const kKnown[] = {
      "objective", "dimension", "scheme",     "population", "trials",       "budget",
      "seed",      "q",         "eta_floor",  "eta_init",   "repair",       "beta_min",
      "beta_range", "lambda_min", "lambda_range", "bounds", "givens",       "fitness",
      "output_dir", "format"};
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw ConfigError("config: unknown field '" + key + "'");
    }
  }
  auto field = [&j](const char* name, auto& target) {
    if (!j.contains(name)) return;
    try {
      j.at(name).get_to(target);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config field '") + name + "': " + e.what());
    }
  };
  ExperimentConfig d;
  c = d;
  field("objective", c.objective);
  field("dimension", c.dimension);
  field("scheme", c.scheme);
  field("population", c.population);
  field("trials", c.trials);
  field("budget", c.budget);
  field("seed", c.seed);
  field("q", c.q);
  field("eta_floor", c.eta_floor);
  if (j.contains("eta_init") && !j.at("eta_init").is_null()) {
    double v = 0.0;
    field("eta_init", v);
    c.eta_init = v;
  }
  field("repair", c.repair);
  field("beta_min", c.beta_min);
  field("beta_range", c.beta_range);
  field("lambda_min", c.lambda_min);
  field("lambda_range", c.lambda_range);
  if (j.contains("bounds")) {
    std::vector<std::vector<double>> raw;
    field("bounds", raw);
    c.bounds.clear();
    for (const auto& pair : raw) {
      if (pair.size() != 2) throw ConfigError("config field 'bounds': entries must be [low, high]");
      c.bounds.push_back({pair[0], pair[1]});
    }
  }
  if (j.contains("givens")) {
    const json& g = j.at("givens");
    c.givens.D = g.value("D", d.givens.D);
    c.givens.theta_e = g.value("theta_e", d.givens.theta_e);
    c.givens.theta_p = g.value("theta_p", d.givens.theta_p);
  }
  if (j.contains("fitness")) {
    const json& f = j.at("fitness");
    c.fitness.d_cf0 = f.value("d_cf0", d.fitness.d_cf0);
    c.fitness.d_cs0 = f.value("d_cs0", d.fitness.d_cs0);
    c.fitness.penalty = f.value("penalty", d.fitness.penalty);
    if (f.contains("feed_sign")) {
      c.fitness.feed_sign = dragonian::parse_feed_sign(f.at("feed_sign").get<std::string>());
    }
  }
  field("output_dir", c.output_dir);
  if (j.contains("format")) {
    const std::string format = j.at("format").get<std::string>();
    if (format == "csv") {
      c.format = OutputFormat::Csv;
    } else if (format == "json") {
      c.format = OutputFormat::Json;
    } else {
      throw ConfigError("config field 'format': expected csv or json");
    }
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + ": " + e.what());
  }
  return j.get<ExperimentConfig>();
}

// ---------------------------------------------------------------------------
// Execution

std::size_t default_worker_count() {
  if (const char* env = std::getenv("TUKEY_EP_WORKERS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers) {
  ExperimentResult result;
  result.config = config.resolved();
  const ExperimentConfig& cfg = result.config;
  const SchemeConfig scheme = cfg.scheme_config();
  const Objective objective = cfg.objective_function();

  result.trials.resize(cfg.trials);
  if (workers == 0) workers = default_worker_count();
  workers = std::min(workers, cfg.trials);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t t = next++; t < cfg.trials; t = next++) {
      try {
        const EvolutionConfig ec = cfg.evolution_config(t);
        EvolutionResult run = evolve(objective, ec, scheme);
        RunResult& r = result.trials[t];
        r.trial = t;
        r.seed = ec.seed;
        r.stream = ec.stream;
        r.trajectory = std::move(run.trajectory);
        r.best_point = std::move(run.best.x);
        r.best_fitness = run.best.fitness;
        r.evaluations = run.evaluations;
        r.non_finite_evaluations = run.non_finite_evaluations;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  result.aggregate = aggregate_trials(result.trials);
  return result;
}

AggregateResult aggregate_trials(const std::vector<RunResult>& trials) {
  if (trials.empty()) return {};
  std::size_t rows = std::numeric_limits<std::size_t>::max();
  for (const auto& t : trials) rows = std::min(rows, t.trajectory.size());

  AggregateResult aggregate(rows);
  const double n = static_cast<double>(trials.size());
  for (std::size_t g = 0; g < rows; ++g) {
    AggregateRow& row = aggregate[g];
    row.generation = trials.front().trajectory[g].generation;
    row.evaluations = trials.front().trajectory[g].evaluations;
    row.overall_best = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto& t : trials) {
      const double v = t.trajectory[g].best_so_far;
      row.overall_best = std::min(row.overall_best, v);
      sum += v;
    }
    row.mean_best = sum / n;
    double squares = 0.0;
    for (const auto& t : trials) {
      const double dev = t.trajectory[g].best_so_far - row.mean_best;
      squares += dev * dev;
    }
    row.std_best = trials.size() > 1 ? std::sqrt(squares / n) : 0.0;
  }
  return aggregate;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// Non-finite values are not representable in JSON; store them as strings.
json real_json(double v) { return std::isfinite(v) ? json(v) : json(format_real(v)); }
double real_from_json(const json& j) {
  return j.is_string() ? parse_real(j.get<std::string>()) : j.get<double>();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path,
                                               const std::string& expected_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != expected_header) {
    throw std::runtime_error(path.string() + ": unexpected header");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

json trials_json(const std::vector<RunResult>& trials) {
  json out = json::array();
  for (const auto& t : trials) {
    json rows = json::array();
    for (const auto& g : t.trajectory) {
      rows.push_back({{"generation", g.generation},
                      {"evaluations", g.evaluations},
                      {"best_of_generation", real_json(g.best_of_generation)},
                      {"best_so_far", real_json(g.best_so_far)}});
    }
    out.push_back({{"trial", t.trial}, {"trajectory", rows}});
  }
  return out;
}

json aggregate_json(const AggregateResult& aggregate) {
  json out = json::array();
  for (const auto& a : aggregate) {
    out.push_back({{"generation", a.generation},
                   {"evaluations", a.evaluations},
                   {"overall_best", real_json(a.overall_best)},
                   {"mean_best", real_json(a.mean_best)},
                   {"std_best", real_json(a.std_best)}});
  }
  return out;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out = open_for_write(path);
  out << j.dump(2) << '\n';
  finish(out, path);
}

}  // namespace

json manifest_json(const ExperimentResult& result) {
  json trials = json::array();
  for (const auto& t : result.trials) {
    json point = json::array();
    for (double v : t.best_point) point.push_back(real_json(v));
    trials.push_back({{"trial", t.trial},
                      {"seed", t.seed},
                      {"stream", t.stream},
                      {"generations", t.generations()},
                      {"evaluations", t.evaluations},
                      {"non_finite_evaluations", t.non_finite_evaluations},
                      {"best_fitness", real_json(t.best_fitness)},
                      {"best_point", point}});
  }
  return json{{"library", "tukey_ep"},
              {"version", kVersion},
              {"seed_derivation", "stream id = trial index; RngStream(seed, stream)"},
              {"config", result.config},
              {"trials", trials}};
}

EmittedFiles emit_results(const ExperimentResult& result, const std::filesystem::path& dir,
                          OutputFormat format) {
  if (result.trials.empty()) throw std::invalid_argument("emit_results: no trials");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  EmittedFiles files;
  files.manifest = dir / "manifest.json";
  if (format == OutputFormat::Csv) {
    files.trials = dir / "trials.csv";
    files.aggregate = dir / "aggregate.csv";

    std::ofstream trials = open_for_write(files.trials);
    trials << kTrialsCsvHeader << '\n';
    for (const auto& t : result.trials) {
      for (const auto& g : t.trajectory) {
        trials << t.trial << ',' << g.generation << ',' << g.evaluations << ','
               << format_real(g.best_of_generation) << ',' << format_real(g.best_so_far) << '\n';
      }
    }
    finish(trials, files.trials);

    std::ofstream aggregate = open_for_write(files.aggregate);
    aggregate << kAggregateCsvHeader << '\n';
    for (const auto& a : result.aggregate) {
      aggregate << a.generation << ',' << a.evaluations << ',' << format_real(a.overall_best)
                << ',' << format_real(a.mean_best) << ',' << format_real(a.std_best) << '\n';
    }
    finish(aggregate, files.aggregate);
  } else {
    files.trials = dir / "trials.json";
    files.aggregate = dir / "aggregate.json";
    write_json(trials_json(result.trials), files.trials);
    write_json(aggregate_json(result.aggregate), files.aggregate);
  }
  write_json(manifest_json(result), files.manifest);
  return files;
}

std::vector<RunResult> read_trials_csv(const std::filesystem::path& path) {
  std::vector<RunResult> trials;
  for (const auto& row : read_csv(path, kTrialsCsvHeader)) {
    if (row.size() != 5) throw std::runtime_error(path.string() + ": expected 5 columns");
    const std::size_t trial = std::stoull(row[0]);
    if (trials.empty() || trials.back().trial != trial) {
      trials.emplace_back();
      trials.back().trial = trial;
    }
    trials.back().trajectory.push_back(
        {std::stoull(row[1]), std::stoull(row[2]), parse_real(row[3]), parse_real(row[4])});
  }
  return trials;
}

AggregateResult read_aggregate_csv(const std::filesystem::path& path) {
  AggregateResult rows;
  for (const auto& row : read_csv(path, kAggregateCsvHeader)) {
    if (row.size() != 5) throw std::runtime_error(path.string() + ": expected 5 columns");
    rows.push_back({std::stoull(row[0]), std::stoull(row[1]), parse_real(row[2]),
                    parse_real(row[3]), parse_real(row[4])});
  }
  return rows;
}

json read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return json::parse(in);
}

std::vector<RunResult> read_trials_json(const std::filesystem::path& path) {
  std::vector<RunResult> trials;
  for (const auto& t : read_manifest(path)) {
    RunResult r;
    r.trial = t.at("trial").get<std::size_t>();
    for (const auto& g : t.at("trajectory")) {
      r.trajectory.push_back({g.at("generation").get<std::size_t>(),
                              g.at("evaluations").get<std::size_t>(),
                              real_from_json(g.at("best_of_generation")),
                              real_from_json(g.at("best_so_far"))});
    }
    trials.push_back(std::move(r));
  }
  return trials;
}

AggregateResult read_aggregate_json(const std::filesystem::path& path) {
  AggregateResult rows;
  for (const auto& a : read_manifest(path)) {
    rows.push_back({a.at("generation").get<std::size_t>(), a.at("evaluations").get<std::size_t>(),
                    real_from_json(a.at("overall_best")), real_from_json(a.at("mean_best")),
                    real_from_json(a.at("std_best"))});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

OracleResult grid_search_oracle(const dragonian::Givens& givens,
                                const dragonian::FitnessConfig& fc, Range theta0_range,
                                Range f12_range, double step) {
  if (!(step > 0.0)) throw ConfigError("oracle: step must be positive");
  for (const Range& r : {theta0_range, f12_range}) {
    if (!std::isfinite(r.low) || !std::isfinite(r.high) || r.high < r.low) {
      throw ConfigError("oracle: ranges must be finite with low <= high");
    }
  }
  auto count = [step](const Range& r) {
    return static_cast<std::size_t>(std::floor((r.high - r.low) / step + 1e-9)) + 1;
  };
  const std::size_t n_theta = count(theta0_range);
  const std::size_t n_f12 = count(f12_range);

  OracleResult best;
  best.fitness = std::numeric_limits<double>::infinity();
  // Row-major sweep in increasing theta_0 then f12 with a strict comparison
  // keeps the first (lowest theta_0, then lowest f12) of any tied cells.
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double theta_0 = theta0_range.low + static_cast<double>(i) * step;
    for (std::size_t k = 0; k < n_f12; ++k) {
      const dragonian::Vars vars{theta_0, f12_range.low + static_cast<double>(k) * step};
      const double f = dragonian::dragonian_fitness(givens, vars, fc);
      if (f < best.fitness) {
        best.fitness = f;
        best.vars = vars;
      }
    }
  }
  best.cells = n_theta * n_f12;
  return best;
}

}  // namespace tukey_ep
