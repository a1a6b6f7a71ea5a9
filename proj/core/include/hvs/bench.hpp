#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hvs/episode.hpp"

namespace hvs {

struct RateCount {
  int successes = 0;
  int episodes = 0;
  double rate() const { return episodes == 0 ? 0.0 : double(successes) / episodes; }
};

/// Aggregate over a bench run. Serialization is byte-deterministic for a
/// given run (stable key order, no timestamps or latencies).
struct BenchReport {
  RateCount overall;
  std::map<std::string, RateCount> by_difficulty;
  std::map<std::string, RateCount> by_task;
  std::vector<int> step_buckets;   // [i]: episodes that succeeded at step i+1
  int failure_bucket = 0;          // unsuccessful episodes of any kind
  int backend_errors = 0;
  double mean_steps_success = 0.0;
  double median_steps_success = 0.0;
  double median_terminal_steps = 0.0;  // over all episodes
  std::string config_fingerprint;

  std::string to_json() const;
  std::string to_table() const;
};

struct BenchConfig {
  EpisodeConfig episode;             // per-episode seeds derive from `seeds`
  std::string imaginator = "oracle"; // oracle | none | remote:<url>
  std::string actor = "follower";    // follower | sweep | remote:<url>
  double sigma0 = 20.0;              // oracle imagination noise scale
  SweepConfig sweep;
  std::vector<uint64_t> seeds{0};
  int workers = 0;                   // 0: hardware concurrency
  std::filesystem::path out_dir;     // when set: episodes.jsonl, report.json, report.txt
};

/// Run every (scene, target, seed) episode in the manifest on a worker
/// pool, aggregating in schedule order so the report and logs are
/// independent of thread interleaving. Backend construction errors
/// propagate; per-episode backend failures land in the report instead.
BenchReport run_bench(const std::filesystem::path& manifest, const BenchConfig& cfg);

/// Suggested coordinates of every step line under dir (*.jsonl). Lines that
/// do not parse are counted, not fatal.
std::vector<Direction> suggested_coords_from_logs(const std::filesystem::path& dir,
                                                  int* skipped = nullptr);

/// Equirectangular density grid (width = 2 * height) of Gaussian kernels,
/// great-circle metric, normalized to peak 1 (all zeros stays all zeros).
struct HeatmapGrid {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major

  double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
};
HeatmapGrid build_heatmap(const std::vector<Direction>& coords, int width, int height,
                          double sigma_deg);
Image heatmap_image(const HeatmapGrid& grid);

/// Terminal-step distribution: per_step[i] counts successes at step i+1;
/// failures counts every unsuccessful episode. Bucket count adapts to the
/// largest terminal step seen.
struct StepHistogram {
  std::vector<int> per_step;
  int failures = 0;
  int episodes() const;
};
StepHistogram histogram_from_logs(const std::filesystem::path& dir, int* skipped = nullptr);
std::string histogram_csv(const StepHistogram& hist);
Image histogram_image(const StepHistogram& hist);

}  // namespace hvs
