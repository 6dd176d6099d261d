#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tukey_ep::dragonian {

// All angles crossing this interface are in degrees; lengths share whatever
// unit D is given in.

/// Fixed design inputs.
struct Givens {
  double D = 100.0;        // main reflector diameter
  double theta_e = 30.0;   // feed half-cone angle
  double theta_p = -170.0; // feed axis angle from the main reflector axis

  friend bool operator==(const Givens&, const Givens&) = default;
};

/// Optimized design variables.
struct Vars {
  double theta_0 = -81.67;  // main reflector offset angle
  double f12 = 94.799;      // inter-focal distance of the hyperboloid (2c)

  friend bool operator==(const Vars&, const Vars&) = default;
};

/// Sign used in the clearance formulas: + for front-fed, - for side-fed.
enum class FeedSign { Front, Side };

FeedSign default_feed_sign(const Givens& givens);
std::string_view feed_sign_name(FeedSign sign);
FeedSign parse_feed_sign(std::string_view name);

struct Derived {
  double theta_p = 0.0;    // copied from the givens
  double gamma = 0.0;      // half-difference of the subreflector-axis angles
  double alpha_feed = 0.0; // feed axis to subreflector axis
  double beta_tilt = 0.0;  // subreflector axis to main reflector axis
  double M = 0.0;          // magnification
  double e = 0.0;          // eccentricity
  double F_e = 0.0;        // equivalent focal length
  double F = 0.0;          // main reflector focal length
  double l_sm = 0.0;       // main-to-subreflector distance along the central ray
  double d_cf = 0.0;       // feed clearance
  double d_cs = 0.0;       // subreflector clearance
  bool valid = false;
  std::string invalid_reason;
};

struct FitnessConfig {
  double d_cf0 = 1.0;
  double d_cs0 = 1.0;
  double penalty = 1000.0;
  FeedSign feed_sign = FeedSign::Side;

  friend bool operator==(const FitnessConfig&, const FitnessConfig&) = default;
};

/// Slack allowed when checking the clearance gates of the fitness.
inline constexpr double kPositivityTolerance = 1e-9;

/// Forward geometry: subreflector tilt, magnification and eccentricity of the
/// hyperboloid, focal lengths, main-to-sub distance and both clearances.
///
/// The tilt follows from cot(beta - theta_p/2) = 2 cot(theta_0/2) - cot(theta_p/2),
/// inverted on the principal atan branch. Never throws: a degenerate or
/// blocked configuration comes back with valid = false and a reason.
Derived derive_geometry(const Givens& givens, const Vars& vars, FeedSign sign);

/// Residuals of the zero cross-polarization condition and the hyperboloid's
/// angular magnification relation:
///   r8 = tan(beta/2) - M tan((theta_p - beta)/2)
///   r9 = tan((theta_p - beta)/2) - M tan((beta - theta_0)/2)
/// Throws std::domain_error for an invalid geometry.
std::pair<double, double> design_condition_residuals(const Derived& derived, const Vars& vars);

/// l_sm + (d_cf - d_cf0) + (d_cs - d_cs0) when the geometry is valid and all
/// three terms are non-negative (within kPositivityTolerance); fc.penalty
/// otherwise. Always finite.
double dragonian_fitness(const Givens& givens, const Vars& vars, const FitnessConfig& fc);

/// A labelled point in the principal-plane cross-section, with the common
/// focus at the origin and z along the main reflector axis.
struct SectionPoint {
  std::string label;
  double x = 0.0;
  double z = 0.0;
};

/// Feed, focus, main reflector centre and rim, and subreflector centre and
/// rim points for plotting. Empty for an invalid geometry.
std::vector<SectionPoint> cross_section(const Givens& givens, const Vars& vars,
                                        const Derived& derived);

}  // namespace tukey_ep::dragonian
