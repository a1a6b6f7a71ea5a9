#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hvs/actions.hpp"
#include "hvs/converter.hpp"
#include "hvs/render.hpp"

namespace hvs {

/// Everything an actor may look at when choosing an action.
struct ActorContext {
  std::string instruction;
  const NFoVObservation* observation = nullptr;  // current rendered view
  std::vector<ViewPose> memory;                  // past poses, oldest first
  std::vector<ActionSuggestion> suggestions;     // empty in unguided mode
  std::string suggestions_text;                  // formatted block, "" when empty
  int step = 1;
  /// Scene-truth visibility of the target from the current pose; set by the
  /// episode engine, consumed only by the scripted sweep policy.
  std::optional<bool> target_visible;
};

struct ActorReply {
  std::string think;  // may be empty
  Action action;

  bool operator==(const ActorReply& o) const { return think == o.think && action == o.action; }
};

/// Parse an actor reply: optional <think>...</think> followed by exactly one
/// <answer>Rot(a, b)</answer> or <answer>Sub(a, b)</answer>. Tag and
/// primitive names are case-sensitive; surrounding prose outside the tags is
/// ignored. Zero or multiple answer blocks is a ParseError.
ActorReply parse_actor_reply(std::string_view text);

std::string format_actor_reply(const ActorReply& reply);

class ActorBackend {
 public:
  virtual ~ActorBackend() = default;
  virtual ActorReply act(const ActorContext& ctx) = 0;
};

/// Executes the rank-1 suggestion verbatim. Throws Error when the context
/// carries no suggestions (this policy is meaningless unguided).
class FollowerActor : public ActorBackend {
 public:
  ActorReply act(const ActorContext& ctx) override;
};

struct SweepConfig {
  double stride_deg = 60.0;  // azimuth step per unfruitful step
  bool detection = true;     // false: never submits, burns the budget
};

/// Suggestion-blind baseline: pans by a fixed stride until the scene-truth
/// detector reports the target inside the current view, then submits the
/// current pose.
class SweepActor : public ActorBackend {
 public:
  explicit SweepActor(SweepConfig cfg = {}) : cfg_(cfg) {}
  ActorReply act(const ActorContext& ctx) override;

 private:
  SweepConfig cfg_;
};

/// Fill the actor prompt template. Placeholders: {instruction}, {step},
/// {memory} (one "phi, gamma" line per past pose), {suggestions} (the block
/// with a leading blank line, or "" so an unguided prompt omits the section
/// entirely).
std::string render_actor_prompt(const std::string& template_text, const std::string& instruction,
                                const std::vector<ViewPose>& memory,
                                const std::string& suggestions_text, int step);

/// Built-in template used when no override file is given.
const std::string& default_actor_prompt_template();

}  // namespace hvs
