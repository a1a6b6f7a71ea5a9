#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hvs/actions.hpp"
#include "hvs/angles.hpp"

namespace hvs {

/// A predicted target coordinate plus the sampling temperature that
/// produced it (0 for the greedy hypothesis).
struct CoordHypothesis {
  Direction coord;
  double temperature = 0.0;

  bool operator==(const CoordHypothesis& o) const {
    return coord == o.coord && temperature == o.temperature;
  }
};

/// One converted suggestion, rank 1 = greedy hypothesis.
struct ActionSuggestion {
  int rank = 0;
  Direction source;
  Action action;
  double temperature = 0.0;
};

/// Turn a predicted coordinate into an executable action for the pose:
/// inside the FoV box (boundary inclusive) it becomes Sub(pred), outside it
/// becomes the shortest Rot that would center the prediction.
Action convert_prediction(const Direction& pred, const ViewPose& pose, const FoVSpec& fov);

/// Convert a hypothesis batch in order, preserving duplicates; ranks are
/// assigned 1..n in input order (greedy hypothesis first by construction).
std::vector<ActionSuggestion> convert_hypotheses(const std::vector<CoordHypothesis>& hyps,
                                                 const ViewPose& pose, const FoVSpec& fov);

/// Render the ranked block handed to the actor. Exact shape:
///   [Spatial Imagination Suggestions]
///   1. Rot(90.0, -10.0)
///   2. Sub(12.5, 3.0)
/// Numbers carry exactly one fractional digit; lines are joined with \n and
/// there is no trailing newline. Throws std::invalid_argument on an empty
/// batch (an empty block is represented by the empty string upstream).
std::string format_suggestion_block(const std::vector<ActionSuggestion>& suggestions);

/// Parse a suggestion block back into actions (rank order enforced:
/// 1..n contiguous). Throws ParseError with a line number.
std::vector<Action> parse_suggestion_block(std::string_view text);

}  // namespace hvs
