#pragma once

namespace hvs {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

constexpr double deg_to_rad(double d) { return d * (kPi / 180.0); }
constexpr double rad_to_deg(double r) { return r * (180.0 / kPi); }

/// Wrap an azimuth into [0, 360). Throws std::invalid_argument on
/// non-finite input. wrap_azimuth(a + 360k) == wrap_azimuth(a).
double wrap_azimuth(double a);

/// Shortest signed azimuth difference target - current, in (-180, 180].
/// The 180-degree ambiguity resolves to +180.
double signed_delta(double target, double current);

/// Clamp a pitch to [-90, 90]. Throws std::invalid_argument on non-finite.
double clamp_pitch(double g);

/// A point on the sphere: azimuth phi in [0, 360), elevation mu in [-90, 90].
/// Construction wraps phi and rejects non-finite phi and non-finite or
/// out-of-range mu.
struct Direction {
  double phi = 0.0;
  double mu = 0.0;

  Direction() = default;
  Direction(double phi_deg, double mu_deg);

  bool operator==(const Direction& o) const { return phi == o.phi && mu == o.mu; }
};

/// Camera orientation: azimuth phi in [0, 360), pitch gamma. Construction
/// wraps phi and clamps gamma into [-90, 90] (never wraps it).
struct ViewPose {
  double phi = 0.0;
  double gamma = 0.0;

  ViewPose() = default;
  ViewPose(double phi_deg, double gamma_deg);

  bool operator==(const ViewPose& o) const { return phi == o.phi && gamma == o.gamma; }
};

/// Field of view of the pinhole camera, degrees, each component in (0, 180).
struct FoVSpec {
  double f_phi = 0.0;
  double f_gamma = 0.0;

  FoVSpec() = default;
  FoVSpec(double horizontal_deg, double vertical_deg);
};

/// Vertical FoV implied by a horizontal FoV and a pixel aspect ratio:
/// 2 atan((h/w) tan(f_phi / 2)). Throws on non-positive inputs or
/// f_phi >= 180.
double derive_vertical_fov(double f_phi, double width, double height);

/// Per-axis angular box test: |signed_delta(pred.phi, pose.phi)| <= f_phi/2
/// and |pred.mu - pose.gamma| <= f_gamma/2, both boundaries inclusive.
bool within_fov(const Direction& pred, const ViewPose& pose, const FoVSpec& fov);

}  // namespace hvs
