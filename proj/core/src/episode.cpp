#include "hvs/episode.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "hvs/errors.hpp"
#include "hvs/render.hpp"
#include "hvs/util.hpp"

namespace hvs {

using ordered_json = nlohmann::ordered_json;

const char* to_string(Termination t) {
  switch (t) {
    case Termination::submitted: return "submitted";
    case Termination::budget_exhausted: return "budget_exhausted";
    case Termination::backend_error: return "backend_error";
  }
  return "?";
}

bool score_submission(const TargetSpec& target, const ViewPose& submitted,
                      const Tolerances& tol) {
  double d_phi = std::fabs(signed_delta(target.coord.phi, submitted.phi));
  if (target.task == TaskKind::person_seeking) return d_phi <= tol.person_tau_phi;
  return d_phi <= tol.object_tau_phi &&
         std::fabs(target.coord.mu - submitted.gamma) <= tol.object_tau_gamma;
}

EpisodeResult run_episode(const LoadedScene& scene, const TargetSpec& target,
                          ImaginatorBackend* imaginator, ActorBackend& actor,
                          const EpisodeConfig& cfg) {
  if (cfg.max_steps < 1) throw std::invalid_argument("run_episode: max_steps must be >= 1");
  if (cfg.width <= 0 || cfg.height <= 0)
    throw std::invalid_argument("run_episode: non-positive view size");

  ViewPose pose;
  if (cfg.start) {
    pose = *cfg.start;
  } else {
    std::mt19937_64 rng(mix_seed(cfg.seed, fnv1a("episode-start")));
    pose = ViewPose(std::uniform_real_distribution<double>(0.0, 360.0)(rng), 0.0);
  }

  EpisodeResult res;
  std::vector<ViewPose> history;
  std::vector<Image> images;
  const uint64_t imagine_seed = mix_seed(cfg.seed, fnv1a("imagination"));

  for (int step = 1; step <= cfg.max_steps; ++step) {
    auto t0 = std::chrono::steady_clock::now();
    StepRecord rec;
    rec.step = step;
    rec.pose = pose;

    images.push_back(render_nfov(scene.panorama, pose, cfg.fov, cfg.width, cfg.height));
    history.push_back(pose);

    NFoVObservation obs{pose, cfg.fov, images.back(), step};
    ActorContext ctx;
    ctx.instruction = target.instruction;
    ctx.observation = &obs;
    ctx.memory.assign(history.begin(), history.end() - 1);
    ctx.step = step;
    ctx.target_visible = within_fov(target.coord, pose, cfg.fov);

    auto elapsed_ms = [&t0] {
      return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
          .count();
    };

    try {
      if (imaginator) {
        rec.temperatures = schedule_temperatures(step, cfg.schedule);
        ImagineContext ictx{target.instruction, history, std::span<const Image>(images)};
        HypothesisSet hyps = imagine_step(*imaginator, ictx, step, cfg.schedule, imagine_seed);
        rec.hypotheses = hyps.coords();
        ctx.suggestions = convert_hypotheses(rec.hypotheses, pose, cfg.fov);
        ctx.suggestions_text = format_suggestion_block(ctx.suggestions);
        rec.suggestions_text = ctx.suggestions_text;
      }
      ActorReply reply = actor.act(ctx);
      rec.action = reply.action;
      rec.latency_ms = elapsed_ms();
    } catch (const Error& e) {
      rec.latency_ms = elapsed_ms();
      res.steps.push_back(std::move(rec));
      res.termination = Termination::backend_error;
      res.steps_used = step;
      res.error = e.what();
      return res;
    }

    res.steps.push_back(rec);
    if (rec.action->kind == Action::Kind::sub) {
      res.submitted = ViewPose(rec.action->a, rec.action->b);
      res.success = score_submission(target, *res.submitted, cfg.tolerances);
      res.termination = Termination::submitted;
      res.steps_used = step;
      return res;
    }
    pose = apply_rotation(pose, *rec.action);
  }

  res.termination = Termination::budget_exhausted;
  res.steps_used = cfg.max_steps;
  return res;
}

std::vector<std::string> episode_log_lines(const std::string& scene_id,
                                           const std::string& target_label,
                                           const EpisodeResult& result) {
  std::vector<std::string> lines;
  lines.reserve(result.steps.size());
  for (size_t i = 0; i < result.steps.size(); ++i) {
    const StepRecord& rec = result.steps[i];
    ordered_json j;
    j["scene_id"] = scene_id;
    j["target_label"] = target_label;
    j["step"] = rec.step;
    j["pose"] = {{"phi", rec.pose.phi}, {"gamma", rec.pose.gamma}};
    j["temperatures"] = rec.temperatures;
    ordered_json hyps = ordered_json::array();
    for (const CoordHypothesis& h : rec.hypotheses)
      hyps.push_back({{"phi", h.coord.phi}, {"mu", h.coord.mu}, {"temperature", h.temperature}});
    j["hypotheses"] = std::move(hyps);
    j["suggestions_text"] = rec.suggestions_text;
    if (rec.action) {
      j["action"] = {{"kind", rec.action->kind == Action::Kind::rot ? "rot" : "sub"},
                     {"args", {rec.action->a, rec.action->b}}};
    } else {
      j["action"] = nullptr;
    }
    j["latency_ms"] = rec.latency_ms;
    if (i + 1 == result.steps.size()) {
      j["success"] = result.success;
      j["termination"] = to_string(result.termination);
      j["steps_used"] = result.steps_used;
      if (!result.error.empty()) j["error"] = result.error;
    }
    lines.push_back(j.dump());
  }
  return lines;
}

}  // namespace hvs
