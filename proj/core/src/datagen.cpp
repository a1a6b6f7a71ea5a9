#include "hvs/datagen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "hvs/errors.hpp"
#include "hvs/render.hpp"
#include "hvs/util.hpp"

namespace hvs {

using ordered_json = nlohmann::ordered_json;

namespace {

ViewPose draw_pose(std::mt19937_64& rng, const ViewPose* prev, const TrajectoryParams& p) {
  std::uniform_real_distribution<double> pitch(-p.pitch_limit, p.pitch_limit);
  if (!prev) {
    std::uniform_real_distribution<double> full(0.0, 360.0);
    return ViewPose(full(rng), pitch(rng));
  }
  std::uniform_real_distribution<double> step(p.step_min, p.step_max);
  std::uniform_int_distribution<int> coin(0, 1);
  double d_phi = step(rng) * (coin(rng) ? 1.0 : -1.0);
  return ViewPose(prev->phi + d_phi, pitch(rng));
}

}  // namespace

std::vector<Trajectory> synthesize_trajectories(const SceneAnnotation& scene,
                                                const TrajectoryParams& params,
                                                const FoVSpec& fov, uint64_t seed) {
  if (scene.targets.empty())
    throw Error("datagen: scene \"" + scene.scene_id + "\" has no targets");
  if (params.count < 0 || params.length < 1 || params.avoid_ratio < 0.0 ||
      params.avoid_ratio > 1.0 || params.step_min <= 0.0 || params.step_max < params.step_min)
    throw std::invalid_argument("datagen: invalid trajectory parameters");

  int n_avoid = static_cast<int>(std::floor(params.count * params.avoid_ratio));
  int targets_used = std::min<int>(3, static_cast<int>(scene.targets.size()));

  std::vector<Trajectory> out;
  out.reserve(params.count);
  for (int i = 0; i < params.count; ++i) {
    Trajectory traj;
    traj.scene_id = scene.scene_id;
    traj.target_index = i % targets_used;
    traj.avoiding = i < n_avoid;
    const Direction& goal = scene.targets[traj.target_index].coord;

    std::mt19937_64 rng(mix_seed(seed, static_cast<uint64_t>(i)));
    for (int k = 0; k < params.length; ++k) {
      const ViewPose* prev = traj.poses.empty() ? nullptr : &traj.poses.back();
      ViewPose pose = draw_pose(rng, prev, params);
      if (traj.avoiding) {
        int tries = 0;
        while (within_fov(goal, pose, fov)) {
          if (++tries > params.reject_budget)
            throw Error("datagen: scene \"" + scene.scene_id + "\" trajectory " +
                        std::to_string(i) + ": rejection budget exhausted while avoiding \"" +
                        scene.targets[traj.target_index].label + "\"");
          pose = draw_pose(rng, prev, params);
        }
      }
      traj.poses.push_back(pose);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

std::vector<TrainingSample> expand_trajectory(const SceneAnnotation& scene,
                                              const Trajectory& traj,
                                              const std::vector<int>& prefix_lengths,
                                              const FoVSpec& fov) {
  if (traj.target_index < 0 || traj.target_index >= static_cast<int>(scene.targets.size()))
    throw Error("datagen: trajectory points at a missing target");
  const TargetSpec& target = scene.targets[traj.target_index];

  std::vector<TrainingSample> samples;
  samples.reserve(prefix_lengths.size());
  for (int len : prefix_lengths) {
    if (len < 1 || len > static_cast<int>(traj.poses.size()))
      throw std::invalid_argument("datagen: prefix length " + std::to_string(len) +
                                  " does not fit a trajectory of " +
                                  std::to_string(traj.poses.size()) + " poses");
    TrainingSample s;
    s.scene_id = scene.scene_id;
    s.instruction = target.instruction;
    s.revealed.assign(traj.poses.begin(), traj.poses.begin() + len);

    EntityPartition part = partition_entities(scene.entities, s.revealed, fov);
    for (const SemanticEntity& e : part.visible) s.content.observed.push_back({e.label, e.coord});
    for (const SemanticEntity& e : part.hidden) s.content.imagined.push_back({e.label, e.coord});

    // The designated target must appear in the partition; an entity sharing
    // its label already covers it, otherwise classify it by its own coord.
    bool covered = std::any_of(scene.entities.begin(), scene.entities.end(),
                               [&](const SemanticEntity& e) { return e.label == target.label; });
    if (!covered) {
      bool seen = std::any_of(s.revealed.begin(), s.revealed.end(), [&](const ViewPose& v) {
        return within_fov(target.coord, v, fov);
      });
      (seen ? s.content.observed : s.content.imagined).push_back({target.label, target.coord});
    }
    s.content.suggest = target.coord;
    samples.push_back(std::move(s));
  }
  return samples;
}

std::string serialize_sample(const TrainingSample& sample) {
  ordered_json j;
  j["scene_id"] = sample.scene_id;
  j["instruction"] = sample.instruction;
  ordered_json revealed = ordered_json::array();
  for (const ViewPose& p : sample.revealed)
    revealed.push_back({{"phi", p.phi}, {"gamma", p.gamma}});
  j["revealed"] = std::move(revealed);
  j["target_text"] = format_imagination(sample.content);
  return j.dump();
}

TrainingSample parse_sample(const std::string& line) {
  ordered_json j = ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ParseError("sample line is not a JSON object");
  TrainingSample s;
  try {
    s.scene_id = j.at("scene_id").get<std::string>();
    s.instruction = j.at("instruction").get<std::string>();
    for (const auto& p : j.at("revealed"))
      s.revealed.emplace_back(p.at("phi").get<double>(), p.at("gamma").get<double>());
    s.content = parse_imagination(j.at("target_text").get<std::string>());
  } catch (const ordered_json::exception& e) {
    throw ParseError(std::string("sample line: ") + e.what());
  }
  return s;
}

DatagenSummary run_datagen(const std::filesystem::path& manifest, const DatagenConfig& cfg,
                           const std::filesystem::path& out_dir) {
  std::vector<SceneAnnotation> scenes = load_manifest(manifest);
  std::filesystem::create_directories(out_dir);

  struct SceneOutput {
    std::string shard;
    int trajectories = 0;
    int avoiding = 0;
    int samples = 0;
  };
  std::vector<SceneOutput> outputs(scenes.size());

  auto process = [&](size_t idx) {
    const SceneAnnotation& scene = scenes[idx];
    uint64_t scene_seed = mix_seed(cfg.seed, fnv1a(scene.scene_id));
    std::vector<Trajectory> trajs =
        synthesize_trajectories(scene, cfg.trajectories, cfg.fov, scene_seed);
    SceneOutput& out = outputs[idx];
    for (const Trajectory& t : trajs) {
      ++out.trajectories;
      if (t.avoiding) ++out.avoiding;
      for (const TrainingSample& s : expand_trajectory(scene, t, cfg.prefix_lengths, cfg.fov)) {
        out.shard += serialize_sample(s);
        out.shard += '\n';
        ++out.samples;
      }
    }
  };

  int workers = cfg.workers > 0 ? cfg.workers
                                : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<int>(workers, static_cast<int>(scenes.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < scenes.size(); ++i) process(i);
  } else {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto drain = [&] {
      size_t i;
      while ((i = next.fetch_add(1)) < scenes.size()) {
        try {
          process(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(drain);
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  DatagenSummary summary;
  summary.scenes = static_cast<int>(scenes.size());
  int avoiding = 0;
  for (size_t i = 0; i < scenes.size(); ++i) {
    write_text_file(out_dir / ("samples-" + scenes[i].scene_id + ".jsonl"), outputs[i].shard);
    summary.trajectories += outputs[i].trajectories;
    summary.samples += outputs[i].samples;
    avoiding += outputs[i].avoiding;
  }
  summary.avoiding_fraction =
      summary.trajectories == 0 ? 0.0 : double(avoiding) / summary.trajectories;

  ordered_json j;
  j["scenes"] = summary.scenes;
  j["trajectories"] = summary.trajectories;
  j["samples"] = summary.samples;
  j["avoiding_fraction"] = summary.avoiding_fraction;
  write_text_file(out_dir / "summary.json", j.dump(2) + "\n");
  return summary;
}

}  // namespace hvs
