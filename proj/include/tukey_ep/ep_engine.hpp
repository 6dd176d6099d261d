#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "tukey_ep/distributions.hpp"
#include "tukey_ep/rng.hpp"

namespace tukey_ep {

/// Raised for inconsistent optimizer or experiment settings.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Bounds {
  double low = 0.0;
  double high = 1.0;

  double width() const noexcept { return high - low; }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// A candidate solution and its self-adaptive step sizes.
struct Individual {
  std::vector<double> x;
  std::vector<double> eta;
  double fitness = std::numeric_limits<double>::quiet_NaN();
};

/// Log-normal learning rates for step-size self-adaptation.
struct ScaleFactors {
  double tau = 0.0;        // per-component rate
  double tau_prime = 0.0;  // shared per-individual rate

  /// tau = 1/sqrt(2 sqrt(n)), tau_prime = 1/sqrt(2 n).
  static ScaleFactors for_dimension(std::size_t n);
};

enum class Scheme { Scheme1 = 1, Scheme2 = 2, Scheme3 = 3 };

Scheme scheme_from_int(int value);

/// Operator/parameter selection policy and the uniform ranges that
/// Tukey (scale, shape) draws are confined to.
struct SchemeConfig {
  Scheme scheme = Scheme::Scheme3;
  std::size_t k = 20;  // sub-population size
  double beta_min = 0.1;
  double beta_range = 2.0;
  double lambda_min = -1.0;
  double lambda_range = 1.14;

  /// k for Scheme1, 3k otherwise.
  std::size_t population_size() const noexcept;
  void validate() const;
};

enum class BoundRepair { Clamp, Reflect };

struct EvolutionConfig {
  std::size_t mu = 60;
  std::size_t q = 10;
  std::size_t max_evaluations = 60000;
  std::vector<Bounds> bounds;
  double eta_floor = 1e-6;
  /// Initial step size; unset means min(3, (high - low) / 10) per dimension.
  std::optional<double> eta_init;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  BoundRepair repair = BoundRepair::Clamp;

  std::size_t dimension() const noexcept { return bounds.size(); }
  double initial_eta(std::size_t j) const;
  void validate() const;
};

struct GaussianMutation {
  friend bool operator==(const GaussianMutation&, const GaussianMutation&) = default;
};
struct CauchyMutation {
  friend bool operator==(const CauchyMutation&, const CauchyMutation&) = default;
};
struct TukeyMutation {
  TukeyLambdaParams params;
  friend bool operator==(const TukeyMutation&, const TukeyMutation&) = default;
};

using MutationOperator = std::variant<GaussianMutation, CauchyMutation, TukeyMutation>;
/// One operator tag per individual, in population order.
using OperatorAssignment = std::vector<MutationOperator>;

/// Maps a coordinate back into [low, high].
double repair_coordinate(double value, const Bounds& bounds, BoundRepair repair);

template <UniformSource S>
std::vector<Individual> initialize_population(const EvolutionConfig& config, S& source) {
  config.validate();
  std::vector<Individual> population(config.mu);
  const std::size_t n = config.dimension();
  for (auto& ind : population) {
    ind.x.resize(n);
    ind.eta.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Bounds& b = config.bounds[j];
      ind.x[j] = b.low + b.width() * source.uniform();
      ind.eta[j] = config.initial_eta(j);
    }
  }
  return population;
}

/// eta'(j) = eta(j) exp(tau' N(0,1) + tau N_j(0,1)), floored at eta_floor.
/// The shared draw comes first, then one draw per component.
template <VariateSource S>
std::vector<double> self_adapt_eta(std::span<const double> eta, const ScaleFactors& scales,
                                   double eta_floor, S& source) {
  const double shared = scales.tau_prime * source.normal();
  std::vector<double> adapted(eta.size());
  for (std::size_t j = 0; j < eta.size(); ++j) {
    const double value = eta[j] * std::exp(shared + scales.tau * source.normal());
    adapted[j] = std::isfinite(value) ? std::max(value, eta_floor) : eta_floor;
  }
  return adapted;
}

/// One draw from the tagged perturbation distribution.
template <VariateSource S>
double draw_perturbation(const MutationOperator& op, S& source) {
  return std::visit(
      [&source](const auto& tag) -> double {
        using T = std::decay_t<decltype(tag)>;
        if constexpr (std::is_same_v<T, GaussianMutation>) {
          return gaussian_sample(source);
        } else if constexpr (std::is_same_v<T, CauchyMutation>) {
          return cauchy_sample(source);
        } else {
          return tukey_sample(tag.params, source);
        }
      },
      op);
}

/// Self-adapts the parent's steps, then x'(j) = x(j) + eta'(j) * draw_j and
/// repairs into bounds. The offspring's fitness is left unevaluated.
template <VariateSource S>
Individual mutate(const Individual& parent, const MutationOperator& op,
                  const ScaleFactors& scales, const EvolutionConfig& config, S& source) {
  Individual child;
  child.eta = self_adapt_eta(parent.eta, scales, config.eta_floor, source);
  child.x.resize(parent.x.size());
  for (std::size_t j = 0; j < parent.x.size(); ++j) {
    const double moved = parent.x[j] + child.eta[j] * draw_perturbation(op, source);
    child.x[j] = repair_coordinate(moved, config.bounds[j], config.repair);
  }
  return child;
}

/// scale = beta_min + beta_range u1, shape = lambda_min + lambda_range u2,
/// location 0.
template <UniformSource S>
TukeyLambdaParams draw_tukey_params(const SchemeConfig& scheme, S& source) {
  TukeyLambdaParams params;
  params.location = 0.0;
  params.scale = scheme.beta_min + scheme.beta_range * source.uniform();
  params.shape = scheme.lambda_min + scheme.lambda_range * source.uniform();
  return params;
}

/// Tags each individual with its mutation operator for one generation.
///
/// Scheme1 draws Tukey parameters per individual. Scheme2 draws one
/// parameter pair per sub-population of k. Scheme3 tags the first k
/// Gaussian, the next k Cauchy and the last k Tukey with one shared draw.
template <UniformSource S>
OperatorAssignment assign_operators(const SchemeConfig& scheme, std::size_t population_size,
                                    S& source) {
  scheme.validate();
  if (population_size != scheme.population_size()) {
    throw ConfigError("population size " + std::to_string(population_size) +
                      " does not match scheme (expected " +
                      std::to_string(scheme.population_size()) + ")");
  }
  OperatorAssignment tags;
  tags.reserve(population_size);
  switch (scheme.scheme) {
    case Scheme::Scheme1:
      for (std::size_t i = 0; i < population_size; ++i) {
        tags.emplace_back(TukeyMutation{draw_tukey_params(scheme, source)});
      }
      break;
    case Scheme::Scheme2:
      for (int sub = 0; sub < 3; ++sub) {
        const TukeyMutation tag{draw_tukey_params(scheme, source)};
        tags.insert(tags.end(), scheme.k, tag);
      }
      break;
    case Scheme::Scheme3: {
      tags.insert(tags.end(), scheme.k, GaussianMutation{});
      tags.insert(tags.end(), scheme.k, CauchyMutation{});
      const TukeyMutation tag{draw_tukey_params(scheme, source)};
      tags.insert(tags.end(), scheme.k, tag);
      break;
    }
  }
  return tags;
}

/// Indices of the survivors of an EP q-tournament over `fitness`, best first.
///
/// Each entry meets q opponents drawn uniformly from the others and scores a
/// win whenever its fitness is <= the opponent's. The `survivors` entries with
/// the most wins are kept; ties go to lower fitness, then lower index.
template <IndexSource S>
std::vector<std::size_t> tournament_ranking(std::span<const double> fitness, std::size_t q,
                                            std::size_t survivors, S& source) {
  const std::size_t n = fitness.size();
  if (survivors > n) throw ConfigError("cannot select more survivors than candidates");
  std::vector<std::size_t> wins(n, 0);
  if (n > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t t = 0; t < q; ++t) {
        std::size_t opponent = static_cast<std::size_t>(source.index(n - 1));
        if (opponent >= i) ++opponent;
        if (fitness[i] <= fitness[opponent]) ++wins[i];
      }
    }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (wins[a] != wins[b]) return wins[a] > wins[b];
    if (fitness[a] != fitness[b]) return fitness[a] < fitness[b];
    return a < b;
  });
  order.resize(survivors);
  return order;
}

/// Selects `survivors` individuals out of the combined parent + offspring pool.
template <IndexSource S>
std::vector<Individual> tournament_select(std::span<const Individual> combined, std::size_t q,
                                          std::size_t survivors, S& source) {
  std::vector<double> fitness(combined.size());
  for (std::size_t i = 0; i < combined.size(); ++i) fitness[i] = combined[i].fitness;
  std::vector<Individual> selected;
  selected.reserve(survivors);
  for (std::size_t idx : tournament_ranking(fitness, q, survivors, source)) {
    selected.push_back(combined[idx]);
  }
  return selected;
}

struct GenerationRecord {
  std::size_t generation = 0;
  std::size_t evaluations = 0;
  double best_of_generation = 0.0;
  double best_so_far = 0.0;
};

struct EvolutionResult {
  std::vector<GenerationRecord> trajectory;
  std::vector<Individual> final_population;
  Individual best;
  std::size_t evaluations = 0;
  /// Objective calls that returned NaN or infinity (scored as +inf).
  std::size_t non_finite_evaluations = 0;

  std::size_t generations() const noexcept {
    return trajectory.empty() ? 0 : trajectory.back().generation;
  }
};

using Objective = std::function<double(std::span<const double>)>;

/// Runs the generational loop until another full generation would exceed
/// config.max_evaluations. Generation 0 is the evaluated initial population.
///
/// Random draws come from RngStream(config.seed, config.stream) in a fixed
/// order: operator assignment, then per offspring its adaptation draws
/// followed by its perturbation draws, then the tournament.
EvolutionResult evolve(const Objective& objective, const EvolutionConfig& config,
                       const SchemeConfig& scheme);

}  // namespace tukey_ep
