#include "hvs/actor.hpp"

#include <stdexcept>

#include "hvs/errors.hpp"
#include "hvs/util.hpp"

namespace hvs {

ActorReply parse_actor_reply(std::string_view text) {
  size_t open = text.find("<answer>");
  if (open == std::string_view::npos) throw ParseError("reply has no <answer> block");
  if (text.find("<answer>", open + 1) != std::string_view::npos)
    throw ParseError("reply has multiple <answer> blocks");
  size_t close = text.find("</answer>", open);
  if (close == std::string_view::npos) throw ParseError("unterminated <answer> block");

  ActorReply reply;
  reply.action = parse_action(text.substr(open + 8, close - open - 8));

  size_t t_open = text.find("<think>");
  if (t_open != std::string_view::npos && t_open < open) {
    size_t t_close = text.find("</think>", t_open);
    if (t_close == std::string_view::npos || t_close > open)
      throw ParseError("unterminated <think> block");
    reply.think = std::string(text.substr(t_open + 7, t_close - t_open - 7));
  }
  return reply;
}

std::string format_actor_reply(const ActorReply& reply) {
  if (reply.think.find("</think>") != std::string::npos ||
      reply.think.find("<answer>") != std::string::npos)
    throw std::invalid_argument("think text would not survive a round trip");
  std::string answer = "<answer>" + format_action(reply.action) + "</answer>";
  if (reply.think.empty()) return answer;
  return "<think>" + reply.think + "</think>\n" + answer;
}

ActorReply FollowerActor::act(const ActorContext& ctx) {
  if (ctx.suggestions.empty())
    throw Error("follower actor: no suggestions to follow (unguided mode needs a different "
                "actor)");
  return {"", ctx.suggestions.front().action};
}

ActorReply SweepActor::act(const ActorContext& ctx) {
  if (!ctx.observation) throw Error("sweep actor: missing current observation");
  if (cfg_.detection && ctx.target_visible.value_or(false)) {
    const ViewPose& p = ctx.observation->pose;
    return {"", Action::sub(p.phi, p.gamma)};
  }
  return {"", Action::rot(cfg_.stride_deg, 0.0)};
}

namespace {
/// Replace every "{key}"; when the value is empty, swallow one trailing
/// newline so the template line disappears instead of leaving a blank.
void substitute(std::string& text, const std::string& key, const std::string& value) {
  std::string needle = "{" + key + "}";
  size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    size_t len = needle.size();
    if (value.empty() && pos + len < text.size() && text[pos + len] == '\n') ++len;
    text.replace(pos, len, value);
    pos += value.size();
  }
}
}  // namespace

std::string render_actor_prompt(const std::string& template_text, const std::string& instruction,
                                const std::vector<ViewPose>& memory,
                                const std::string& suggestions_text, int step) {
  std::string memory_text;
  for (const ViewPose& p : memory) {
    if (!memory_text.empty()) memory_text += '\n';
    memory_text += "- (" + format_angle(p.phi) + ", " + format_angle(p.gamma) + ")";
  }
  if (memory_text.empty()) memory_text = "- (none yet)";

  std::string out = template_text;
  substitute(out, "instruction", instruction);
  substitute(out, "step", std::to_string(step));
  substitute(out, "memory", memory_text);
  substitute(out, "suggestions", suggestions_text);
  return out;
}

const std::string& default_actor_prompt_template() {
  static const std::string tmpl =
      "You are controlling a camera inside a panoramic scene.\n"
      "Task: {instruction}\n"
      "Step: {step}\n"
      "Poses already visited:\n"
      "{memory}\n"
      "{suggestions}\n"
      "Rotate with Rot(d_phi, d_gamma) or submit a final pose with Sub(phi, gamma).\n"
      "Reply with optional <think>...</think> reasoning and exactly one "
      "<answer>...</answer>.";
  return tmpl;
}

}  // namespace hvs
