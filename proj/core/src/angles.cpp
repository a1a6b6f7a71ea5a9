#include "hvs/angles.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hvs {

double wrap_azimuth(double a) {
  if (!std::isfinite(a)) throw std::invalid_argument("wrap_azimuth: non-finite azimuth");
  double r = std::fmod(a, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r = 0.0;  // fmod can land exactly on 360 after the add
  return r;
}

double signed_delta(double target, double current) {
  double d = wrap_azimuth(wrap_azimuth(target) - wrap_azimuth(current));
  if (d > 180.0) d -= 360.0;
  return d;
}

double clamp_pitch(double g) {
  if (!std::isfinite(g)) throw std::invalid_argument("clamp_pitch: non-finite pitch");
  return g < -90.0 ? -90.0 : (g > 90.0 ? 90.0 : g);
}

Direction::Direction(double phi_deg, double mu_deg) : phi(wrap_azimuth(phi_deg)), mu(mu_deg) {
  if (!std::isfinite(mu_deg) || mu_deg < -90.0 || mu_deg > 90.0)
    throw std::invalid_argument("Direction: mu out of [-90, 90]: " + std::to_string(mu_deg));
}

ViewPose::ViewPose(double phi_deg, double gamma_deg)
    : phi(wrap_azimuth(phi_deg)), gamma(clamp_pitch(gamma_deg)) {}

FoVSpec::FoVSpec(double horizontal_deg, double vertical_deg)
    : f_phi(horizontal_deg), f_gamma(vertical_deg) {
  if (!(f_phi > 0.0 && f_phi < 180.0 && f_gamma > 0.0 && f_gamma < 180.0))
    throw std::invalid_argument("FoVSpec: each field of view must lie in (0, 180)");
}

double derive_vertical_fov(double f_phi, double width, double height) {
  if (!(f_phi > 0.0 && f_phi < 180.0))
    throw std::invalid_argument("derive_vertical_fov: horizontal FoV must lie in (0, 180)");
  if (!(width > 0.0) || !(height > 0.0))
    throw std::invalid_argument("derive_vertical_fov: dimensions must be positive");
  return rad_to_deg(2.0 * std::atan((height / width) * std::tan(deg_to_rad(f_phi) / 2.0)));
}

bool within_fov(const Direction& pred, const ViewPose& pose, const FoVSpec& fov) {
  return std::fabs(signed_delta(pred.phi, pose.phi)) <= fov.f_phi / 2.0 &&
         std::fabs(pred.mu - pose.gamma) <= fov.f_gamma / 2.0;
}

}  // namespace hvs
