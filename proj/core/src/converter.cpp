#include "hvs/converter.hpp"

#include <stdexcept>

#include "hvs/errors.hpp"

namespace hvs {

Action convert_prediction(const Direction& pred, const ViewPose& pose, const FoVSpec& fov) {
  if (within_fov(pred, pose, fov)) return Action::sub(pred.phi, pred.mu);
  return Action::rot(signed_delta(pred.phi, pose.phi), pred.mu - pose.gamma);
}

std::vector<ActionSuggestion> convert_hypotheses(const std::vector<CoordHypothesis>& hyps,
                                                 const ViewPose& pose, const FoVSpec& fov) {
  std::vector<ActionSuggestion> out;
  out.reserve(hyps.size());
  int rank = 1;
  for (const CoordHypothesis& h : hyps)
    out.push_back({rank++, h.coord, convert_prediction(h.coord, pose, fov), h.temperature});
  return out;
}

namespace {
constexpr char kHeader[] = "[Spatial Imagination Suggestions]";

std::string_view trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace

std::string format_suggestion_block(const std::vector<ActionSuggestion>& suggestions) {
  if (suggestions.empty())
    throw std::invalid_argument("format_suggestion_block: empty batch has no block form");
  std::string out = kHeader;
  for (const ActionSuggestion& s : suggestions) {
    out += '\n';
    out += std::to_string(s.rank);
    out += ". ";
    out += format_action_1dp(s.action);
  }
  return out;
}

std::vector<Action> parse_suggestion_block(std::string_view text) {
  std::vector<Action> actions;
  int line_no = 0;
  bool header_seen = false;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kHeader)
        throw ParseError("expected header \"" + std::string(kHeader) + "\"", line_no);
      header_seen = true;
      continue;
    }
    size_t dot = line.find('.');
    if (dot == std::string_view::npos || dot == 0)
      throw ParseError("suggestion line must start with \"<rank>. \"", line_no);
    int rank = 0;
    for (char c : line.substr(0, dot)) {
      if (c < '0' || c > '9')
        throw ParseError("suggestion rank must be a positive integer", line_no);
      rank = rank * 10 + (c - '0');
    }
    if (rank != static_cast<int>(actions.size()) + 1)
      throw ParseError("suggestion ranks must be contiguous from 1; got " +
                           std::to_string(rank),
                       line_no);
    try {
      actions.push_back(parse_action(trim(line.substr(dot + 1))));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!header_seen) throw ParseError("missing suggestion header");
  if (actions.empty()) throw ParseError("suggestion block lists no actions");
  return actions;
}

}  // namespace hvs
