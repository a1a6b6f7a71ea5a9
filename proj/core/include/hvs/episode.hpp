#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hvs/actor.hpp"
#include "hvs/imagination.hpp"
#include "hvs/scene.hpp"

namespace hvs {

/// Success thresholds, degrees. Object seeking scores azimuth and pitch
/// against the target coordinate; person seeking scores azimuth only,
/// with the tighter threshold.
struct Tolerances {
  double object_tau_phi = 30.0;
  double object_tau_gamma = 20.0;
  double person_tau_phi = 10.0;
};

/// True iff the submitted pose hits the target under its task's rule
/// (boundaries inclusive, azimuth compared via shortest signed delta).
bool score_submission(const TargetSpec& target, const ViewPose& submitted,
                      const Tolerances& tol);

struct EpisodeConfig {
  int max_steps = 10;
  int width = 960;
  int height = 720;
  FoVSpec fov{100.0, derive_vertical_fov(100.0, 960, 720)};
  Tolerances tolerances;
  SamplingSchedule schedule;
  uint64_t seed = 0;
  /// Start pose override; by default phi ~ U[0, 360) from the seed, gamma 0.
  std::optional<ViewPose> start;
};

enum class Termination { submitted, budget_exhausted, backend_error };

const char* to_string(Termination t);

struct StepRecord {
  int step = 0;
  ViewPose pose;
  std::vector<double> temperatures;        // schedule for this step
  std::vector<CoordHypothesis> hypotheses; // suggested coords, greedy first
  std::string suggestions_text;            // "" in unguided mode
  std::optional<Action> action;            // absent when the backend failed mid-step
  double latency_ms = 0.0;
};

struct EpisodeResult {
  bool success = false;
  Termination termination = Termination::budget_exhausted;
  int steps_used = 0;
  std::optional<ViewPose> submitted;
  std::vector<StepRecord> steps;
  std::string error;  // set when termination == backend_error
};

/// Run one target search: render, imagine (unless imaginator is null:
/// unguided mode), convert, act, repeat until Sub or the step budget runs
/// out. Backend failures (the hvs::Error family) terminate the episode as
/// backend_error with the message preserved; configuration mistakes
/// (std::invalid_argument etc.) propagate.
EpisodeResult run_episode(const LoadedScene& scene, const TargetSpec& target,
                          ImaginatorBackend* imaginator, ActorBackend& actor,
                          const EpisodeConfig& cfg);

/// Serialize an episode as JSON Lines, one line per step; the terminal line
/// also carries success/termination/steps_used. latency_ms of zero is
/// written as logged.
std::vector<std::string> episode_log_lines(const std::string& scene_id,
                                           const std::string& target_label,
                                           const EpisodeResult& result);

}  // namespace hvs
