#pragma once

#include <string>
#include <string_view>

#include "hvs/angles.hpp"

namespace hvs {

/// A camera primitive: Rot(d_phi, d_gamma) rotates relative to the current
/// pose, Sub(phi, gamma) submits an absolute pose as the final answer.
struct Action {
  enum class Kind { rot, sub };

  Kind kind = Kind::rot;
  double a = 0.0;  // rot: d_phi in (-180, 180]; sub: phi in [0, 360)
  double b = 0.0;  // rot: d_gamma;              sub: gamma in [-90, 90]

  /// Normalizes d_phi to the shortest equivalent turn in (-180, 180].
  static Action rot(double d_phi, double d_gamma);
  /// Wraps phi, clamps gamma.
  static Action sub(double phi, double gamma);

  bool operator==(const Action& o) const { return kind == o.kind && a == o.a && b == o.b; }
};

/// "Rot(a, b)" / "Sub(a, b)" with shortest-round-trip numbers.
std::string format_action(const Action& act);

/// Same shape with exactly one fractional digit (suggestion blocks).
std::string format_action_1dp(const Action& act);

/// Parse "Rot(<num>, <num>)" or "Sub(<num>, <num>)". Case-sensitive
/// primitive names, tolerant interior whitespace, strict decimal numbers.
/// Throws ParseError.
Action parse_action(std::string_view text);

/// Apply a Rot to a pose: phi wraps, gamma clamps. Throws std::logic_error
/// if given a Sub (submission ends the episode; it is not a camera move).
ViewPose apply_rotation(const ViewPose& pose, const Action& rot);

}  // namespace hvs
