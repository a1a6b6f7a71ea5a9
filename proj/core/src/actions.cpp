#include "hvs/actions.hpp"

#include <cmath>
#include <stdexcept>

#include "hvs/errors.hpp"
#include "hvs/util.hpp"

namespace hvs {

Action Action::rot(double d_phi, double d_gamma) {
  if (!std::isfinite(d_phi) || !std::isfinite(d_gamma))
    throw std::invalid_argument("Action::rot: non-finite argument");
  return {Kind::rot, signed_delta(d_phi, 0.0), d_gamma};
}

Action Action::sub(double phi, double gamma) {
  if (!std::isfinite(phi) || !std::isfinite(gamma))
    throw std::invalid_argument("Action::sub: non-finite argument");
  return {Kind::sub, wrap_azimuth(phi), clamp_pitch(gamma)};
}

namespace {
std::string render(const Action& act, std::string (*fmt)(double)) {
  const char* name = act.kind == Action::Kind::rot ? "Rot" : "Sub";
  return std::string(name) + "(" + fmt(act.a) + ", " + fmt(act.b) + ")";
}

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

std::string format_action(const Action& act) { return render(act, format_angle); }
std::string format_action_1dp(const Action& act) { return render(act, format_angle_1dp); }

Action parse_action(std::string_view text) {
  std::string_view s = trim(text);
  bool is_rot;
  if (s.substr(0, 3) == "Rot")
    is_rot = true;
  else if (s.substr(0, 3) == "Sub")
    is_rot = false;
  else
    throw ParseError("expected Rot(...) or Sub(...), got \"" + std::string(s) + "\"");
  s = trim(s.substr(3));
  if (s.empty() || s.front() != '(' || s.back() != ')')
    throw ParseError("malformed action arguments in \"" + std::string(text) + "\"");
  s = s.substr(1, s.size() - 2);
  size_t comma = s.find(',');
  if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
    throw ParseError("action needs exactly two comma-separated numbers");
  double a, b;
  if (!parse_angle(trim(s.substr(0, comma)), a) || !parse_angle(trim(s.substr(comma + 1)), b))
    throw ParseError("unparseable number in action \"" + std::string(text) + "\"");
  return is_rot ? Action::rot(a, b) : Action::sub(a, b);
}

ViewPose apply_rotation(const ViewPose& pose, const Action& rot) {
  if (rot.kind != Action::Kind::rot)
    throw std::logic_error("apply_rotation: Sub is a submission, not a camera move");
  return ViewPose(pose.phi + rot.a, pose.gamma + rot.b);
}

}  // namespace hvs
