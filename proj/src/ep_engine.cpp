#include "tukey_ep/ep_engine.hpp"

#include <algorithm>
#include <cmath>

namespace tukey_ep {

ScaleFactors ScaleFactors::for_dimension(std::size_t n) {
  if (n == 0) throw ConfigError("dimension must be positive");
  const double dim = static_cast<double>(n);
  return ScaleFactors{1.0 / std::sqrt(2.0 * std::sqrt(dim)), 1.0 / std::sqrt(2.0 * dim)};
}

Scheme scheme_from_int(int value) {
  switch (value) {
    case 1: return Scheme::Scheme1;
    case 2: return Scheme::Scheme2;
    case 3: return Scheme::Scheme3;
    default: throw ConfigError("scheme must be 1, 2 or 3, got " + std::to_string(value));
  }
}

std::size_t SchemeConfig::population_size() const noexcept {
  return scheme == Scheme::Scheme1 ? k : 3 * k;
}

void SchemeConfig::validate() const {
  if (k == 0) throw ConfigError("scheme: k must be positive");
  if (!std::isfinite(beta_min) || !std::isfinite(beta_range) || !std::isfinite(lambda_min) ||
      !std::isfinite(lambda_range)) {
    throw ConfigError("scheme: range constants must be finite");
  }
  if (!(beta_min > 0.0) || !(beta_min + beta_range > 0.0)) {
    throw ConfigError("scheme: drawn scales must stay positive (beta_min > 0, beta_min + beta_range > 0)");
  }
}

double EvolutionConfig::initial_eta(std::size_t j) const {
  if (eta_init) return *eta_init;
  return std::min(3.0, bounds[j].width() / 10.0);
}

void EvolutionConfig::validate() const {
  if (mu < 2) throw ConfigError("mu must be at least 2");
  if (q < 1) throw ConfigError("q must be at least 1");
  if (max_evaluations < mu) throw ConfigError("max_evaluations must cover the initial population");
  if (bounds.empty()) throw ConfigError("bounds must name at least one dimension");
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    if (!(bounds[j].low < bounds[j].high) || !std::isfinite(bounds[j].low) ||
        !std::isfinite(bounds[j].high)) {
      throw ConfigError("bounds[" + std::to_string(j) + "]: need finite low < high");
    }
  }
  if (!(eta_floor > 0.0)) throw ConfigError("eta_floor must be positive");
  if (eta_init && !(*eta_init > 0.0)) throw ConfigError("eta_init must be positive");
}

double repair_coordinate(double value, const Bounds& bounds, BoundRepair repair) {
  if (std::isnan(value)) return bounds.low + 0.5 * bounds.width();
  if (repair == BoundRepair::Reflect && std::isfinite(value)) {
    const double width = bounds.width();
    double offset = std::fmod(value - bounds.low, 2.0 * width);
    if (offset < 0.0) offset += 2.0 * width;
    value = bounds.low + (offset <= width ? offset : 2.0 * width - offset);
  }
  return std::clamp(value, bounds.low, bounds.high);
}

namespace {

double score(const Objective& objective, const Individual& ind, std::size_t& non_finite) {
  const double f = objective(ind.x);
  if (std::isfinite(f)) return f;
  ++non_finite;
  return std::numeric_limits<double>::infinity();
}

const Individual& best_of(std::span<const Individual> population) {
  return *std::min_element(population.begin(), population.end(),
                           [](const Individual& a, const Individual& b) {
                             return a.fitness < b.fitness;
                           });
}

}  // namespace

EvolutionResult evolve(const Objective& objective, const EvolutionConfig& config,
                       const SchemeConfig& scheme) {
  config.validate();
  scheme.validate();
  if (scheme.population_size() != config.mu) {
    throw ConfigError("mu = " + std::to_string(config.mu) + " is inconsistent with the scheme (" +
                      std::to_string(scheme.population_size()) + ")");
  }

  RngStream rng(config.seed, config.stream);
  const ScaleFactors scales = ScaleFactors::for_dimension(config.dimension());

  EvolutionResult result;
  std::vector<Individual> population = initialize_population(config, rng);
  for (auto& ind : population) ind.fitness = score(objective, ind, result.non_finite_evaluations);
  result.evaluations = config.mu;
  result.best = best_of(population);
  result.trajectory.push_back({0, result.evaluations, result.best.fitness, result.best.fitness});

  std::vector<Individual> combined;
  combined.reserve(2 * config.mu);
  for (std::size_t generation = 1; result.evaluations + config.mu <= config.max_evaluations;
       ++generation) {
    const OperatorAssignment tags = assign_operators(scheme, config.mu, rng);
    combined.assign(population.begin(), population.end());
    for (std::size_t i = 0; i < config.mu; ++i) {
      combined.push_back(mutate(population[i], tags[i], scales, config, rng));
    }
    for (std::size_t i = config.mu; i < combined.size(); ++i) {
      combined[i].fitness = score(objective, combined[i], result.non_finite_evaluations);
    }
    result.evaluations += config.mu;

    const Individual& generation_best = best_of(std::span(combined).subspan(config.mu));
    if (generation_best.fitness < result.best.fitness) result.best = generation_best;
    population = tournament_select(combined, config.q, config.mu, rng);
    result.trajectory.push_back(
        {generation, result.evaluations, generation_best.fitness, result.best.fitness});
  }
  result.final_population = std::move(population);
  return result;
}

}  // namespace tukey_ep
