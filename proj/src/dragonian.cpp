#include "tukey_ep/dragonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "tukey_ep/ep_engine.hpp"

namespace tukey_ep::dragonian {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;
constexpr double kDenominatorEpsilon = 1e-9;
constexpr double kSineEpsilon = 1e-12;

double rad(double degrees) { return degrees * kDegree; }
double deg(double radians) { return radians / kDegree; }

Derived invalid(Derived d, std::string reason) {
  d.valid = false;
  d.invalid_reason = std::move(reason);
  return d;
}

// Distance from the common focus to the hyperboloid along a ray making angle
// `off_axis` (radians) with the hyperboloid axis.
double subreflector_radius(double e, double f12, double off_axis) {
  return (e - 1.0 / e) * f12 / (2.0 * (e * std::cos(off_axis) - 1.0));
}

}  // namespace

FeedSign default_feed_sign(const Givens& givens) {
  return givens.theta_p < 0.0 ? FeedSign::Side : FeedSign::Front;
}

std::string_view feed_sign_name(FeedSign sign) {
  return sign == FeedSign::Front ? "front" : "side";
}

FeedSign parse_feed_sign(std::string_view name) {
  if (name == "front" || name == "+") return FeedSign::Front;
  if (name == "side" || name == "-") return FeedSign::Side;
  throw ConfigError("feed_sign must be 'front' or 'side', got '" + std::string(name) + "'");
}

Derived derive_geometry(const Givens& givens, const Vars& vars, FeedSign sign) {
  Derived d;
  d.theta_p = givens.theta_p;
  if (!(givens.D > 0.0) || !(givens.theta_e > 0.0 && givens.theta_e < 90.0) ||
      !std::isfinite(givens.theta_p)) {
    return invalid(d, "givens out of range");
  }
  if (!(vars.f12 > 0.0) || !std::isfinite(vars.f12) || !(std::abs(vars.theta_0) < 180.0) ||
      vars.theta_0 == 0.0) {
    return invalid(d, "design variables out of range");
  }

  const double theta_0 = rad(vars.theta_0);
  const double theta_p = rad(givens.theta_p);
  const double theta_e = rad(givens.theta_e);
  const double s = sign == FeedSign::Front ? 1.0 : -1.0;

  const double cot_sum = 2.0 / std::tan(theta_0 / 2.0) - 1.0 / std::tan(theta_p / 2.0);
  const double gamma = cot_sum != 0.0 ? std::atan(1.0 / cot_sum) : std::numbers::pi / 2.0;
  const double alpha = theta_p / 2.0 - gamma;
  const double beta = theta_p / 2.0 + gamma;
  d.gamma = deg(gamma);
  d.alpha_feed = deg(alpha);
  d.beta_tilt = deg(beta);

  const double tan_half_alpha = std::tan(alpha / 2.0);
  if (std::abs(tan_half_alpha) < kSineEpsilon) return invalid(d, "feed axis coincides with subreflector axis");
  d.M = std::tan(beta / 2.0) / tan_half_alpha;
  if (!std::isfinite(d.M) || !(d.M > 1.0)) return invalid(d, "magnification must exceed 1");
  d.e = (d.M + 1.0) / (d.M - 1.0);

  d.F_e = givens.D / (4.0 * std::tan(theta_e / 2.0));
  if (std::abs(std::sin(alpha)) < kSineEpsilon) return invalid(d, "sin(alpha) vanishes");
  d.F = d.F_e * std::sin(beta) / std::sin(alpha);

  const double central_denominator = d.e * std::cos(beta - theta_0) - 1.0;
  const double edge_denominator = d.e * std::cos(alpha + s * theta_e) + 1.0;
  if (std::abs(central_denominator) < kDenominatorEpsilon ||
      std::abs(edge_denominator) < kDenominatorEpsilon) {
    return invalid(d, "clearance denominator vanishes");
  }

  const double eccentric_span = (d.e - 1.0 / d.e) * vars.f12;
  d.l_sm = 2.0 * d.F / (1.0 + std::cos(theta_0)) - eccentric_span / (2.0 * central_denominator);
  const double offset = 2.0 * d.F * std::tan(theta_0 / 2.0) - vars.f12 * std::sin(beta);
  d.d_cf = s * offset - givens.D / 2.0;
  d.d_cs = -offset - givens.D / 2.0 -
           eccentric_span * std::sin(theta_p + s * theta_e) / (2.0 * edge_denominator);

  if (!std::isfinite(d.F) || !std::isfinite(d.l_sm) || !std::isfinite(d.d_cf) ||
      !std::isfinite(d.d_cs)) {
    return invalid(d, "non-finite geometry");
  }
  if (!(std::abs(alpha) > theta_e)) return invalid(d, "|alpha| must exceed theta_e");
  d.valid = true;
  return d;
}

std::pair<double, double> design_condition_residuals(const Derived& derived, const Vars& vars) {
  if (!derived.valid) throw std::domain_error("design_condition_residuals: invalid geometry");
  const double beta = rad(derived.beta_tilt);
  const double theta_p = rad(derived.theta_p);
  const double theta_0 = rad(vars.theta_0);
  const double r8 = std::tan(beta / 2.0) - derived.M * std::tan((theta_p - beta) / 2.0);
  const double r9 =
      std::tan((theta_p - beta) / 2.0) - derived.M * std::tan((beta - theta_0) / 2.0);
  return {r8, r9};
}

double dragonian_fitness(const Givens& givens, const Vars& vars, const FitnessConfig& fc) {
  const Derived d = derive_geometry(givens, vars, fc.feed_sign);
  if (!d.valid) return fc.penalty;
  const double feed_margin = d.d_cf - fc.d_cf0;
  const double sub_margin = d.d_cs - fc.d_cs0;
  if (d.l_sm < -kPositivityTolerance || feed_margin < -kPositivityTolerance ||
      sub_margin < -kPositivityTolerance) {
    return fc.penalty;
  }
  const double fitness = d.l_sm + feed_margin + sub_margin;
  return std::isfinite(fitness) ? fitness : fc.penalty;
}

std::vector<SectionPoint> cross_section(const Givens& givens, const Vars& vars,
                                        const Derived& derived) {
  if (!derived.valid) return {};
  const double beta = rad(derived.beta_tilt);
  const double theta_0 = rad(vars.theta_0);

  auto on_main = [&](std::string label, double theta) {
    const double rho = 2.0 * derived.F / (1.0 + std::cos(theta));
    return SectionPoint{std::move(label), rho * std::sin(theta), rho * std::cos(theta)};
  };
  auto on_sub = [&](std::string label, double theta) {
    const double r = subreflector_radius(derived.e, vars.f12, beta - theta);
    return SectionPoint{std::move(label), r * std::sin(theta), r * std::cos(theta)};
  };

  // Rays reaching the aperture rim leave the focus at 2 atan(x_rim / 2F).
  const double centre_x = 2.0 * derived.F * std::tan(theta_0 / 2.0);
  const double rim_a = 2.0 * std::atan((centre_x - givens.D / 2.0) / (2.0 * derived.F));
  const double rim_b = 2.0 * std::atan((centre_x + givens.D / 2.0) / (2.0 * derived.F));

  return {
      {"focus", 0.0, 0.0},
      {"feed", vars.f12 * std::sin(beta), vars.f12 * std::cos(beta)},
      on_main("main_centre", theta_0),
      on_main("main_rim_lower", rim_a),
      on_main("main_rim_upper", rim_b),
      on_sub("sub_centre", theta_0),
      on_sub("sub_rim_lower", rim_a),
      on_sub("sub_rim_upper", rim_b),
  };
}

}  // namespace tukey_ep::dragonian
