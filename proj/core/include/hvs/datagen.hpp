#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hvs/angles.hpp"
#include "hvs/imagination.hpp"
#include "hvs/scene.hpp"

namespace hvs {

/// A synthetic exploration path through one scene, tied to the target the
/// derived samples will teach.
struct Trajectory {
  std::string scene_id;
  int target_index = 0;     // into SceneAnnotation::targets
  bool avoiding = true;     // no pose's FoV box contains the target
  std::vector<ViewPose> poses;
};

struct TrajectoryParams {
  int count = 24;
  double avoid_ratio = 0.5;   // leading fraction rejection-sampled away from the target
  int length = 8;
  double step_min = 30.0;     // azimuth step magnitude, degrees
  double step_max = 120.0;
  double pitch_limit = 45.0;  // pitch ~ U[-limit, limit]
  int reject_budget = 1000;   // redraws per pose before giving up
};

/// Seeded random walks: azimuth steps of uniform magnitude [step_min,
/// step_max] with a uniform sign, pitch redrawn per pose. Trajectory i
/// derives its stream from (seed, i), so the set is stable under reruns and
/// parallel generation. Targets are assigned round-robin over the first
/// min(3, #targets) targets. Throws Error when the scene has no targets or
/// a rejection budget is exhausted.
std::vector<Trajectory> synthesize_trajectories(const SceneAnnotation& scene,
                                                const TrajectoryParams& params,
                                                const FoVSpec& fov, uint64_t seed);

/// One masked-prediction training sample: the prefix of views the model may
/// "see", the entity partition those views induce, and the target
/// coordinate to regress.
struct TrainingSample {
  std::string scene_id;
  std::string instruction;
  std::vector<ViewPose> revealed;
  ImaginationOutput content;  // observed/imagined partition + suggest coord
};

/// Expand a trajectory into one sample per prefix length. Prefix lengths
/// must be positive and no longer than the trajectory. The designated
/// target appears in the partition via its matching entity when one shares
/// its label, otherwise it is appended under its own visibility.
std::vector<TrainingSample> expand_trajectory(const SceneAnnotation& scene,
                                              const Trajectory& traj,
                                              const std::vector<int>& prefix_lengths,
                                              const FoVSpec& fov);

/// One JSON line (no trailing newline): scene_id, instruction, revealed
/// poses, and the imagination text rendered with format_imagination.
std::string serialize_sample(const TrainingSample& sample);
TrainingSample parse_sample(const std::string& line);  // exact inverse

struct DatagenConfig {
  TrajectoryParams trajectories;
  std::vector<int> prefix_lengths{1, 2, 4, 8};
  FoVSpec fov{100.0, derive_vertical_fov(100.0, 960, 720)};
  uint64_t seed = 0;
  int workers = 0;  // 0: hardware concurrency
};

struct DatagenSummary {
  int scenes = 0;
  int trajectories = 0;
  int samples = 0;
  double avoiding_fraction = 0.0;
};

/// Generate shards for every scene in the manifest: samples-<scene_id>.jsonl
/// plus summary.json in out_dir. Scene streams are seeded by scene_id, so
/// output bytes are identical for a fixed seed regardless of worker count.
DatagenSummary run_datagen(const std::filesystem::path& manifest, const DatagenConfig& cfg,
                           const std::filesystem::path& out_dir);

}  // namespace hvs
