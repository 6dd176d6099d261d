#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tukey_ep/ep_engine.hpp"

namespace tukey_ep {

enum class Benchmark { Ackley, Rosenbrock, Sphere };

/// A benchmark objective with its conventional box and known optimum.
struct BenchmarkSpec {
  Benchmark name = Benchmark::Sphere;
  std::size_t dimension = 2;
  std::vector<Bounds> bounds;
  std::vector<double> optimum_location;
  double optimum_value = 0.0;

  double operator()(std::span<const double> x) const;
};

/// -20 exp(-0.2 sqrt(mean x^2)) - exp(mean cos(2 pi x)) + 20 + e.
double ackley(std::span<const double> x);
/// Sum of 100 (x[j+1] - x[j]^2)^2 + (1 - x[j])^2. Needs at least 2 dimensions.
double rosenbrock(std::span<const double> x);
double sphere(std::span<const double> x);

// Analytic gradients, used to cross-check the objectives against finite differences.
std::vector<double> ackley_gradient(std::span<const double> x);
std::vector<double> rosenbrock_gradient(std::span<const double> x);
std::vector<double> sphere_gradient(std::span<const double> x);

std::string_view benchmark_name(Benchmark b);
/// Accepts "ackley", "rosenbrock" or "sphere" (case-insensitive).
Benchmark parse_benchmark(std::string_view name);
/// Ackley uses [-32.768, 32.768]^n, Rosenbrock [-2.048, 2.048]^n, Sphere [-5.12, 5.12]^n.
BenchmarkSpec make_benchmark(Benchmark b, std::size_t dimension);

}  // namespace tukey_ep
