#include "tukey_ep/distributions.hpp"

#include <string>

namespace tukey_ep {

void TukeyLambdaParams::validate() const {
  if (!std::isfinite(location) || !std::isfinite(scale) || !std::isfinite(shape)) {
    throw std::domain_error("Tukey-Lambda parameters must be finite");
  }
  if (!(scale > 0.0)) {
    throw std::domain_error("Tukey-Lambda scale must be positive, got " +
                            std::to_string(scale));
  }
}

Probability::Probability(double value) : value_(value) {
  if (!(value > 0.0 && value < 1.0)) {
    throw std::domain_error("probability must lie in the open interval (0, 1), got " +
                            std::to_string(value));
  }
}

double standard_tukey_quantile(double shape, double p) {
  const double q = 1.0 - p;
  if (std::abs(shape) < kLogisticShapeThreshold) {
    return std::log(p) - std::log(q);
  }
  return (std::pow(p, shape) - std::pow(q, shape)) / shape;
}

double tukey_quantile(const TukeyLambdaParams& params, Probability p) {
  params.validate();
  return params.location + params.scale * standard_tukey_quantile(params.shape, p.value());
}

Probability tukey_cdf(const TukeyLambdaParams& params, double x, double tol) {
  params.validate();
  if (!std::isfinite(x)) throw std::domain_error("tukey_cdf: x must be finite");
  if (!(tol > 0.0)) throw std::domain_error("tukey_cdf: tolerance must be positive");

  double lo = kUniformEpsilon;
  double hi = 1.0 - kUniformEpsilon;
  if (x <= tukey_quantile(params, Probability(lo))) return Probability(lo);
  if (x >= tukey_quantile(params, Probability(hi))) return Probability(hi);

  for (int i = 0; i < kCdfMaxIterations && hi - lo > tol; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (tukey_quantile(params, Probability(mid)) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Probability(lo + 0.5 * (hi - lo));
}

}  // namespace tukey_ep
