#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tukey_ep/rng.hpp"

namespace tukey_ep {

/// |shape| below this uses the logistic limit of the quantile.
inline constexpr double kLogisticShapeThreshold = 1e-8;

inline constexpr double kDefaultCdfTolerance = 1e-12;
inline constexpr int kCdfMaxIterations = 200;

/// Location, scale and shape of a symmetric Tukey-Lambda distribution.
///
/// shape = 1 is uniform on [location - scale, location + scale], shape near
/// 0.14 approximates a normal, shape -> 0 is logistic, shape = -1 is close to
/// Cauchy.
struct TukeyLambdaParams {
  double location = 0.0;
  double scale = 1.0;
  double shape = 0.0;

  /// Throws std::domain_error unless scale > 0 and all fields are finite.
  void validate() const;

  friend bool operator==(const TukeyLambdaParams&, const TukeyLambdaParams&) = default;
};

/// A probability strictly inside (0, 1).
class Probability {
 public:
  /// Throws std::domain_error for values outside the open unit interval.
  explicit Probability(double value);

  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }

 private:
  double value_;
};

/// Standardized quantile (location 0, scale 1) for the given shape.
double standard_tukey_quantile(double shape, double p);

/// Closed-form inverse CDF: location + scale * (p^shape - (1-p)^shape) / shape.
double tukey_quantile(const TukeyLambdaParams& params, Probability p);

/// CDF by bisection on the monotone quantile. Saturates to the clipped
/// probability endpoints outside the support (finite for shape > 0).
Probability tukey_cdf(const TukeyLambdaParams& params, double x,
                      double tol = kDefaultCdfTolerance);

/// tan(pi (u - 1/2)), the standard Cauchy quantile.
inline double cauchy_quantile(Probability p) {
  return std::tan(std::numbers::pi * (p.value() - 0.5));
}

template <UniformSource S>
double tukey_sample(const TukeyLambdaParams& params, S& source) {
  return tukey_quantile(params, Probability(source.uniform()));
}

template <VariateSource S>
double gaussian_sample(S& source) {
  return source.normal();
}

template <UniformSource S>
double cauchy_sample(S& source) {
  return cauchy_quantile(Probability(source.uniform()));
}

}  // namespace tukey_ep
