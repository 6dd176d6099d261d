#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "tukey_ep/distributions.hpp"
#include "tukey_ep/harness.hpp"
#include "tukey_ep/version.hpp"

namespace tukey_ep {

namespace {

std::string real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Options shared by optimize-fn and optimize-antenna. Values only override the
// loaded/default config when the flag was actually given.
struct RunOptions {
  std::string config_file;
  int scheme = 0;
  std::size_t population = 0;
  std::size_t trials = 0;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::size_t q = 0;
  std::string out;
  std::string format;
  std::size_t workers = 0;
  std::string repair;
  std::vector<double> bounds;

  CLI::Option* scheme_opt = nullptr;
  CLI::Option* population_opt = nullptr;
  CLI::Option* trials_opt = nullptr;
  CLI::Option* budget_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* q_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* format_opt = nullptr;
  CLI::Option* repair_opt = nullptr;
  CLI::Option* bounds_opt = nullptr;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "JSON experiment config")->check(CLI::ExistingFile);
    scheme_opt = app->add_option("--scheme", scheme, "Selection scheme")->check(CLI::IsMember({1, 2, 3}));
    population_opt = app->add_option("--pop", population, "Population size (mu)");
    trials_opt = app->add_option("--trials", trials, "Independent trials");
    budget_opt = app->add_option("--budget", budget, "Fitness evaluations per trial");
    seed_opt = app->add_option("--seed", seed, "Base seed");
    q_opt = app->add_option("--q", q, "Tournament opponents");
    out_opt = app->add_option("--out", out, "Output directory");
    format_opt = app->add_option("--format", format, "Trajectory file format")
                     ->check(CLI::IsMember({"csv", "json"}));
    repair_opt = app->add_option("--repair", repair, "Bound repair")
                     ->check(CLI::IsMember({"clamp", "reflect"}));
    bounds_opt = app->add_option("--bounds", bounds,
                                 "Flattened low,high pairs, one pair per dimension")
                     ->delimiter(',');
    app->add_option("--workers", workers, "Parallel trials (default: TUKEY_EP_WORKERS or cores)");
  }

  void apply(ExperimentConfig& c) const {
    if (*scheme_opt) c.scheme = scheme;
    if (*population_opt) c.population = population;
    if (*trials_opt) c.trials = trials;
    if (*budget_opt) c.budget = budget;
    if (*seed_opt) c.seed = seed;
    if (*q_opt) c.q = q;
    if (*out_opt) c.output_dir = out;
    if (*format_opt) c.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (*repair_opt) c.repair = repair;
    if (*bounds_opt) {
      if (bounds.size() % 2 != 0) throw ConfigError("--bounds: expected low,high pairs");
      c.bounds.clear();
      for (std::size_t i = 0; i < bounds.size(); i += 2) c.bounds.push_back({bounds[i], bounds[i + 1]});
    }
  }
};

struct AntennaOptions {
  dragonian::Givens givens;
  dragonian::FitnessConfig fitness;
  std::string feed_sign;
  CLI::Option* D_opt = nullptr;
  CLI::Option* theta_e_opt = nullptr;
  CLI::Option* theta_p_opt = nullptr;
  CLI::Option* d_cf0_opt = nullptr;
  CLI::Option* d_cs0_opt = nullptr;
  CLI::Option* penalty_opt = nullptr;

  void attach(CLI::App* app, bool with_fitness) {
    D_opt = app->add_option("--D", givens.D, "Main reflector diameter");
    theta_e_opt = app->add_option("--theta-e", givens.theta_e, "Feed half-cone angle (deg)");
    theta_p_opt = app->add_option("--theta-p", givens.theta_p, "Feed axis angle (deg)");
    app->add_option("--feed-sign", feed_sign, "Clearance sign branch (default: side for negative theta-p)")
        ->check(CLI::IsMember({"front", "side"}));
    if (with_fitness) {
      d_cf0_opt = app->add_option("--d-cf0", fitness.d_cf0, "Feed clearance threshold");
      d_cs0_opt = app->add_option("--d-cs0", fitness.d_cs0, "Subreflector clearance threshold");
      penalty_opt = app->add_option("--penalty", fitness.penalty, "Fitness of infeasible designs");
    }
  }

  void apply(dragonian::Givens& g, dragonian::FitnessConfig& f, bool sign_from_config) const {
    if (*D_opt) g.D = givens.D;
    if (*theta_e_opt) g.theta_e = givens.theta_e;
    if (*theta_p_opt) g.theta_p = givens.theta_p;
    if (d_cf0_opt && *d_cf0_opt) f.d_cf0 = fitness.d_cf0;
    if (d_cs0_opt && *d_cs0_opt) f.d_cs0 = fitness.d_cs0;
    if (penalty_opt && *penalty_opt) f.penalty = fitness.penalty;
    if (!feed_sign.empty()) {
      f.feed_sign = dragonian::parse_feed_sign(feed_sign);
    } else if (!sign_from_config) {
      f.feed_sign = dragonian::default_feed_sign(g);
    }
  }
};

int run_optimizer(ExperimentConfig config, const RunOptions& opts, std::ostream& out) {
  const ExperimentResult result = run_experiment(config, opts.workers);
  const EmittedFiles files = emit_results(result, result.config.output_dir, result.config.format);

  const RunResult* best = &result.trials.front();
  for (const auto& t : result.trials) {
    if (t.best_fitness < best->best_fitness) best = &t;
  }
  out << "objective=" << result.config.objective << '\n'
      << "scheme=" << result.config.scheme << '\n'
      << "population=" << result.config.population << '\n'
      << "trials=" << result.config.trials << '\n'
      << "best_trial=" << best->trial << '\n'
      << "best_fitness=" << real(best->best_fitness) << '\n'
      << "best_point=";
  for (std::size_t j = 0; j < best->best_point.size(); ++j) {
    out << (j ? "," : "") << real(best->best_point[j]);
  }
  out << '\n'
      << "mean_final_best=" << real(result.aggregate.back().mean_best) << '\n'
      << "trials_file=" << files.trials.string() << '\n'
      << "aggregate_file=" << files.aggregate.string() << '\n'
      << "manifest_file=" << files.manifest.string() << '\n';
  return 0;
}

void print_geometry(const dragonian::Givens& g, const dragonian::Vars& v, dragonian::FeedSign sign,
                    bool as_json, bool with_section, std::ostream& out) {
  const dragonian::Derived d = dragonian::derive_geometry(g, v, sign);
  const auto section = with_section ? dragonian::cross_section(g, v, d)
                                    : std::vector<dragonian::SectionPoint>{};
  std::vector<std::pair<std::string, double>> fields = {
      {"D", g.D},           {"theta_e", g.theta_e},     {"theta_p", g.theta_p},
      {"theta_0", v.theta_0}, {"f12", v.f12},           {"gamma", d.gamma},
      {"alpha", d.alpha_feed}, {"beta", d.beta_tilt},   {"M", d.M},
      {"e", d.e},           {"F_e", d.F_e},             {"F", d.F},
      {"L_sm", d.l_sm},     {"d_cf", d.d_cf},           {"d_cs", d.d_cs},
  };
  if (as_json) {
    nlohmann::json j;
    for (const auto& [key, value] : fields) j[key] = std::isfinite(value) ? nlohmann::json(value) : nlohmann::json(nullptr);
    j["feed_sign"] = dragonian::feed_sign_name(sign);
    j["valid"] = d.valid;
    if (!d.valid) j["invalid_reason"] = d.invalid_reason;
    if (with_section) {
      nlohmann::json points = nlohmann::json::array();
      for (const auto& p : section) points.push_back({{"label", p.label}, {"x", p.x}, {"z", p.z}});
      j["cross_section"] = points;
    }
    out << j.dump(2) << '\n';
    return;
  }
  for (const auto& [key, value] : fields) out << key << '=' << real(value) << '\n';
  out << "feed_sign=" << dragonian::feed_sign_name(sign) << '\n';
  out << "valid=" << (d.valid ? "true" : "false") << '\n';
  if (!d.valid) out << "invalid_reason=" << d.invalid_reason << '\n';
  for (const auto& p : section) {
    out << "point." << p.label << '=' << real(p.x) << ',' << real(p.z) << '\n';
  }
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Evolutionary programming with Tukey-Lambda mutation", "tukey-ep"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // optimize-fn
  auto* fn = app.add_subcommand("optimize-fn", "Benchmark a test function over several trials");
  RunOptions fn_opts;
  fn_opts.attach(fn);
  std::string function_name;
  std::size_t dimension = 0;
  auto* function_opt = fn->add_option("--function", function_name, "ackley | rosenbrock | sphere");
  auto* dimension_opt = fn->add_option("--dim", dimension, "Dimension (default 20 for ackley, 2 otherwise)");

  // optimize-antenna
  auto* ant = app.add_subcommand("optimize-antenna", "Optimize the Dragonian antenna geometry");
  RunOptions ant_opts;
  ant_opts.attach(ant);
  AntennaOptions ant_geom;
  ant_geom.attach(ant, true);

  // geometry
  auto* geo = app.add_subcommand("geometry", "Forward Dragonian geometry report");
  AntennaOptions geo_geom;
  geo_geom.attach(geo, false);
  dragonian::Vars geo_vars;
  bool geo_json = false;
  bool geo_section = false;
  geo->add_option("--theta0", geo_vars.theta_0, "Main reflector offset angle (deg)");
  geo->add_option("--f12", geo_vars.f12, "Inter-focal distance");
  geo->add_flag("--json", geo_json, "Emit a JSON record");
  geo->add_flag("--cross-section", geo_section, "Include principal-plane section points");

  // sample-dist
  auto* sample = app.add_subcommand("sample-dist", "Dump Tukey-Lambda variates");
  TukeyLambdaParams sample_params{0.0, 1.0, 0.14};
  std::size_t sample_count = 1000;
  std::uint64_t sample_seed = 1;
  std::uint64_t sample_stream = 0;
  std::size_t bins = 0;
  std::string sample_out;
  sample->add_option("--location", sample_params.location, "Location (alpha)");
  sample->add_option("--scale", sample_params.scale, "Scale (beta)");
  sample->add_option("--shape,--lambda", sample_params.shape, "Shape (lambda)");
  sample->add_option("-n,--count", sample_count, "Number of variates");
  sample->add_option("--seed", sample_seed, "Seed");
  sample->add_option("--stream", sample_stream, "Stream id");
  sample->add_option("--bins", bins, "Emit an equal-width histogram with this many bins instead");
  sample->add_option("--out", sample_out, "Write to this file instead of stdout");

  // oracle
  auto* orc = app.add_subcommand("oracle", "Grid-search the antenna fitness");
  AntennaOptions orc_geom;
  orc_geom.attach(orc, true);
  std::vector<double> theta0_range{-90.0, -70.0};
  std::vector<double> f12_range{85.0, 105.0};
  double step = 0.01;
  orc->add_option("--theta0-range", theta0_range, "low,high (deg)")->expected(2)->delimiter(',');
  orc->add_option("--f12-range", f12_range, "low,high")->expected(2)->delimiter(',');
  orc->add_option("--step", step, "Grid resolution")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fn) {
      ExperimentConfig config;
      if (!fn_opts.config_file.empty()) config = load_config(fn_opts.config_file);
      if (*function_opt) config.objective = function_name;
      if (*dimension_opt) config.dimension = dimension;
      if (config.objective == "dragonian") throw ConfigError("optimize-fn: use optimize-antenna for dragonian");
      fn_opts.apply(config);
      return run_optimizer(config, fn_opts, std::cout);
    }
    if (*ant) {
      ExperimentConfig config;
      config.budget = 20000;
      const bool from_file = !ant_opts.config_file.empty();
      if (from_file) config = load_config(ant_opts.config_file);
      config.objective = "dragonian";
      ant_geom.apply(config.givens, config.fitness, from_file);
      ant_opts.apply(config);
      return run_optimizer(config, ant_opts, std::cout);
    }
    if (*geo) {
      dragonian::Givens givens;
      dragonian::FitnessConfig unused;
      geo_geom.apply(givens, unused, false);
      print_geometry(givens, geo_vars, unused.feed_sign, geo_json, geo_section, std::cout);
      return 0;
    }
    if (*sample) {
      sample_params.validate();
      if (sample_count == 0) throw ConfigError("--count must be positive");
      RngStream rng(sample_seed, sample_stream);
      std::vector<double> values(sample_count);
      for (double& v : values) v = tukey_sample(sample_params, rng);

      std::ofstream file;
      if (!sample_out.empty()) {
        file.open(sample_out, std::ios::trunc);
        if (!file) throw std::runtime_error("cannot write " + sample_out);
      }
      std::ostream& out = sample_out.empty() ? std::cout : file;
      if (bins == 0) {
        out << "value\n";
        for (double v : values) out << real(v) << '\n';
      } else {
        const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
        const double lo = *lo_it;
        const double width = (*hi_it - lo) / static_cast<double>(bins);
        std::vector<std::size_t> counts(bins, 0);
        for (double v : values) {
          std::size_t b = width > 0.0 ? static_cast<std::size_t>((v - lo) / width) : 0;
          counts[std::min(b, bins - 1)] += 1;
        }
        out << "bin_low,bin_high,count\n";
        for (std::size_t b = 0; b < bins; ++b) {
          out << real(lo + width * static_cast<double>(b)) << ','
              << real(lo + width * static_cast<double>(b + 1)) << ',' << counts[b] << '\n';
        }
      }
      if (!out) throw std::runtime_error("write failed");
      return 0;
    }
    if (*orc) {
      dragonian::Givens givens;
      dragonian::FitnessConfig fc;
      orc_geom.apply(givens, fc, false);
      const OracleResult r = grid_search_oracle(givens, fc, {theta0_range[0], theta0_range[1]},
                                                {f12_range[0], f12_range[1]}, step);
      std::cout << "theta_0=" << real(r.vars.theta_0) << '\n'
                << "f12=" << real(r.vars.f12) << '\n'
                << "fitness=" << real(r.fitness) << '\n'
                << "cells=" << r.cells << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace tukey_ep
