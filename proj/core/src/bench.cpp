#include "hvs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>
#include <opencv2/imgproc.hpp>

#include "hvs/errors.hpp"
#include "hvs/projection.hpp"
#include "hvs/remote.hpp"
#include "hvs/util.hpp"

namespace hvs {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json rate_json(const RateCount& rc) {
  return {{"successes", rc.successes}, {"episodes", rc.episodes}, {"rate", rc.rate()}};
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

std::string BenchReport::to_json() const {
  ordered_json j;
  j["episodes"] = overall.episodes;
  j["successes"] = overall.successes;
  j["success_rate"] = overall.rate();
  ordered_json diff = ordered_json::object();
  for (const auto& [k, v] : by_difficulty) diff[k] = rate_json(v);
  j["by_difficulty"] = std::move(diff);
  ordered_json task = ordered_json::object();
  for (const auto& [k, v] : by_task) task[k] = rate_json(v);
  j["by_task"] = std::move(task);
  j["step_buckets"] = step_buckets;
  j["failure_bucket"] = failure_bucket;
  j["backend_errors"] = backend_errors;
  j["mean_steps_success"] = mean_steps_success;
  j["median_steps_success"] = median_steps_success;
  j["median_terminal_steps"] = median_terminal_steps;
  j["config_fingerprint"] = config_fingerprint;
  return j.dump(2) + "\n";
}

std::string BenchReport::to_table() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %8s %8s %8s\n", "slice", "succ", "total", "rate");
  out << line;
  auto row = [&](const std::string& name, const RateCount& rc) {
    std::snprintf(line, sizeof(line), "%-12s %8d %8d %8.3f\n", name.c_str(), rc.successes,
                  rc.episodes, rc.rate());
    out << line;
  };
  row("overall", overall);
  for (const auto& [k, v] : by_difficulty) row("diff:" + k, v);
  for (const auto& [k, v] : by_task) row("task:" + k, v);
  out << "steps:";
  for (size_t i = 0; i < step_buckets.size(); ++i) out << ' ' << (i + 1) << '=' << step_buckets[i];
  out << " failure=" << failure_bucket << "\n";
  std::snprintf(line, sizeof(line),
                "mean_steps_success=%.3f median_steps_success=%.1f median_terminal=%.1f "
                "errors=%d fingerprint=%s\n",
                mean_steps_success, median_steps_success, median_terminal_steps, backend_errors,
                config_fingerprint.c_str());
  out << line;
  return out.str();
}

namespace {

std::string bench_fingerprint(const BenchConfig& cfg) {
  std::ostringstream s;
  s << cfg.imaginator << '|' << cfg.actor << '|' << format_angle(cfg.sigma0) << '|'
    << cfg.episode.max_steps << '|' << cfg.episode.width << 'x' << cfg.episode.height << '|'
    << format_angle(cfg.episode.fov.f_phi) << ',' << format_angle(cfg.episode.fov.f_gamma)
    << '|' << cfg.episode.schedule.k_candidates << ',' << format_angle(cfg.episode.schedule.t1)
    << ',' << format_angle(cfg.episode.schedule.decay) << ','
    << cfg.episode.schedule.stochastic_steps << ',' << cfg.episode.schedule.top_k << '|'
    << format_angle(cfg.episode.tolerances.object_tau_phi) << ','
    << format_angle(cfg.episode.tolerances.object_tau_gamma) << ','
    << format_angle(cfg.episode.tolerances.person_tau_phi) << '|'
    << format_angle(cfg.sweep.stride_deg) << ',' << (cfg.sweep.detection ? 1 : 0) << '|';
  for (uint64_t seed : cfg.seeds) s << seed << ',';
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a(s.str())));
  return hex;
}

std::unique_ptr<ActorBackend> make_actor(const BenchConfig& cfg) {
  if (cfg.actor == "follower") return std::make_unique<FollowerActor>();
  if (cfg.actor == "sweep") return std::make_unique<SweepActor>(cfg.sweep);
  if (cfg.actor.rfind("remote:", 0) == 0)
    return std::make_unique<RemoteActor>(RemoteConfig::from_env(cfg.actor.substr(7)));
  throw std::invalid_argument("unknown actor \"" + cfg.actor +
                              "\" (follower | sweep | remote:<url>)");
}

}  // namespace

BenchReport run_bench(const std::filesystem::path& manifest, const BenchConfig& cfg) {
  std::vector<SceneAnnotation> records = load_manifest(manifest);
  if (records.empty()) throw Error("bench: manifest lists no scenes");
  if (cfg.seeds.empty()) throw Error("bench: no seeds given");

  bool oracle_imaginator = cfg.imaginator == "oracle";
  bool no_imaginator = cfg.imaginator == "none";
  std::unique_ptr<ImaginatorBackend> shared_imaginator;
  if (!oracle_imaginator && !no_imaginator) {
    if (cfg.imaginator.rfind("remote:", 0) != 0)
      throw std::invalid_argument("unknown imaginator \"" + cfg.imaginator +
                                  "\" (oracle | none | remote:<url>)");
    shared_imaginator =
        std::make_unique<RemoteImaginator>(RemoteConfig::from_env(cfg.imaginator.substr(7)));
  }
  std::unique_ptr<ActorBackend> actor = make_actor(cfg);

  std::filesystem::path base = manifest.parent_path();
  std::vector<LoadedScene> scenes;
  scenes.reserve(records.size());
  for (const SceneAnnotation& rec : records) scenes.push_back(load_scene(rec, base));

  struct Job {
    size_t scene;
    size_t target;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (size_t s = 0; s < scenes.size(); ++s)
    for (size_t t = 0; t < scenes[s].annotation.targets.size(); ++t)
      for (uint64_t seed : cfg.seeds) jobs.push_back({s, t, seed});
  if (jobs.empty()) throw Error("bench: no targets to run");

  std::vector<EpisodeResult> results(jobs.size());
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto run_job = [&](size_t j) {
    const Job& job = jobs[j];
    const LoadedScene& scene = scenes[job.scene];
    const TargetSpec& target = scene.annotation.targets[job.target];
    EpisodeConfig ecfg = cfg.episode;
    ecfg.seed = mix_seed(job.seed,
                         fnv1a(scene.annotation.scene_id + "#" + std::to_string(job.target)));
    std::unique_ptr<ImaginatorBackend> own;
    ImaginatorBackend* imaginator = shared_imaginator.get();
    if (oracle_imaginator) {
      own = std::make_unique<OracleImaginator>(scene.annotation, ecfg.fov, cfg.sigma0,
                                               ecfg.schedule.t1);
      imaginator = own.get();
    }
    results[j] = run_episode(scene, target, no_imaginator ? nullptr : imaginator, *actor, ecfg);
  };

  int workers = cfg.workers > 0 ? cfg.workers
                                : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<int>(workers, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    for (size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    auto drain = [&] {
      size_t j;
      while ((j = next.fetch_add(1)) < jobs.size()) {
        try {
          run_job(j);
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

  BenchReport report;
  report.step_buckets.assign(static_cast<size_t>(cfg.episode.max_steps), 0);
  report.config_fingerprint = bench_fingerprint(cfg);
  std::vector<double> success_steps;
  std::vector<double> terminal_steps;
  std::string log_text;

  for (size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    const EpisodeResult& res = results[j];
    const TargetSpec& target = scenes[job.scene].annotation.targets[job.target];

    for (const std::string& line :
         episode_log_lines(scenes[job.scene].annotation.scene_id, target.label, res)) {
      log_text += line;
      log_text += '\n';
    }

    auto tally = [&](RateCount& rc) {
      ++rc.episodes;
      if (res.success) ++rc.successes;
    };
    tally(report.overall);
    tally(report.by_difficulty[to_string(target.difficulty)]);
    tally(report.by_task[to_string(target.task)]);
    if (res.success) {
      report.step_buckets[static_cast<size_t>(res.steps_used - 1)] += 1;
      success_steps.push_back(res.steps_used);
    } else {
      report.failure_bucket += 1;
    }
    if (res.termination == Termination::backend_error) ++report.backend_errors;
    terminal_steps.push_back(res.steps_used);
  }

  if (!success_steps.empty()) {
    double sum = 0.0;
    for (double s : success_steps) sum += s;
    report.mean_steps_success = sum / success_steps.size();
  }
  report.median_steps_success = median(success_steps);
  report.median_terminal_steps = median(terminal_steps);

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    write_text_file(cfg.out_dir / "episodes.jsonl", log_text);
    write_text_file(cfg.out_dir / "report.json", report.to_json());
    write_text_file(cfg.out_dir / "report.txt", report.to_table());
  }
  return report;
}

namespace {
std::vector<std::filesystem::path> log_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw Error("log directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}
}  // namespace

std::vector<Direction> suggested_coords_from_logs(const std::filesystem::path& dir,
                                                  int* skipped) {
  std::vector<Direction> coords;
  int bad = 0;
  for (const std::filesystem::path& file : log_files(dir)) {
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ordered_json j = ordered_json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("hypotheses")) {
        ++bad;
        continue;
      }
      bool ok = true;
      std::vector<Direction> here;
      for (const auto& h : j["hypotheses"]) {
        if (!h.is_object() || !h.contains("phi") || !h.contains("mu") ||
            !h["phi"].is_number() || !h["mu"].is_number()) {
          ok = false;
          break;
        }
        double phi = h["phi"].get<double>();
        double mu = h["mu"].get<double>();
        if (mu < -90.0 || mu > 90.0) {
          ok = false;
          break;
        }
        here.emplace_back(phi, mu);
      }
      if (!ok) {
        ++bad;
        continue;
      }
      coords.insert(coords.end(), here.begin(), here.end());
    }
  }
  if (skipped) *skipped = bad;
  return coords;
}

HeatmapGrid build_heatmap(const std::vector<Direction>& coords, int width, int height,
                          double sigma_deg) {
  if (width <= 0 || height <= 0 || width != 2 * height)
    throw std::invalid_argument("heatmap grid must be 2:1 with positive size");
  if (!(sigma_deg > 0.0)) throw std::invalid_argument("heatmap sigma must be > 0");

  HeatmapGrid grid{width, height, std::vector<double>(size_t(width) * height, 0.0), };
  if (coords.empty()) return grid;

  std::vector<Vec3> points;
  points.reserve(coords.size());
  for (const Direction& d : coords) points.push_back(dir_to_vec(d));

  const double denom = 2.0 * sigma_deg * sigma_deg;
  size_t i = 0;
  for (int y = 0; y < height; ++y) {
    double mu = 90.0 - (y + 0.5) / height * 180.0;
    for (int x = 0; x < width; ++x, ++i) {
      Vec3 cell = dir_to_vec(Direction((x + 0.5) / width * 360.0, mu));
      double acc = 0.0;
      for (const Vec3& p : points) {
        double c = dot(cell, p);
        if (c > 1.0) c = 1.0;
        if (c < -1.0) c = -1.0;
        double d = rad_to_deg(std::acos(c));
        acc += std::exp(-(d * d) / denom);
      }
      grid.values[i] = acc;
    }
  }
  double peak = *std::max_element(grid.values.begin(), grid.values.end());
  if (peak > 0.0)
    for (double& v : grid.values) v /= peak;
  return grid;
}

Image heatmap_image(const HeatmapGrid& grid) {
  cv::Mat gray(grid.height, grid.width, CV_8UC1);
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x)
      gray.at<uint8_t>(y, x) =
          static_cast<uint8_t>(std::lround(grid.at(x, y) * 255.0));
  cv::Mat colored;
  cv::applyColorMap(gray, colored, cv::COLORMAP_INFERNO);
  Image img(grid.width, grid.height);
  for (int y = 0; y < grid.height; ++y)
    for (int x = 0; x < grid.width; ++x) {
      cv::Vec3b bgr = colored.at<cv::Vec3b>(y, x);
      img.set(x, y, {bgr[2], bgr[1], bgr[0]});
    }
  return img;
}

int StepHistogram::episodes() const {
  int n = failures;
  for (int c : per_step) n += c;
  return n;
}

StepHistogram histogram_from_logs(const std::filesystem::path& dir, int* skipped) {
  StepHistogram hist;
  int bad = 0;
  for (const std::filesystem::path& file : log_files(dir)) {
    std::ifstream in(file);
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      ordered_json j = ordered_json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object()) {
        ++bad;
        continue;
      }
      if (!j.contains("termination")) continue;  // per-step line, not terminal
      if (!j.contains("success") || !j.contains("steps_used") ||
          !j["steps_used"].is_number_integer()) {
        ++bad;
        continue;
      }
      if (j["success"].get<bool>()) {
        int step = j["steps_used"].get<int>();
        if (step < 1) {
          ++bad;
          continue;
        }
        if (static_cast<size_t>(step) > hist.per_step.size()) hist.per_step.resize(step, 0);
        hist.per_step[step - 1] += 1;
      } else {
        hist.failures += 1;
      }
    }
  }
  if (skipped) *skipped = bad;
  return hist;
}

std::string histogram_csv(const StepHistogram& hist) {
  std::string out = "step,count\n";
  for (size_t i = 0; i < hist.per_step.size(); ++i)
    out += std::to_string(i + 1) + "," + std::to_string(hist.per_step[i]) + "\n";
  out += "failure," + std::to_string(hist.failures) + "\n";
  return out;
}

Image histogram_image(const StepHistogram& hist) {
  const int bar_w = 32, gap = 8, chart_h = 220, margin = 12;
  int bars = static_cast<int>(hist.per_step.size()) + 1;
  int width = margin * 2 + bars * bar_w + (bars - 1) * gap;
  int height = chart_h + margin * 2;
  Image img(width, height);
  std::fill(img.rgb.begin(), img.rgb.end(), 0xff);  // white background

  int peak = hist.failures;
  for (int c : hist.per_step) peak = std::max(peak, c);
  if (peak == 0) peak = 1;

  auto draw_bar = [&](int index, int count, Rgb color) {
    int h = static_cast<int>(std::lround(double(count) / peak * (chart_h - 10)));
    int x0 = margin + index * (bar_w + gap);
    for (int y = height - margin - h; y < height - margin; ++y)
      for (int x = x0; x < x0 + bar_w; ++x) img.set(x, y, color);
  };
  for (size_t i = 0; i < hist.per_step.size(); ++i)
    draw_bar(static_cast<int>(i), hist.per_step[i], {60, 90, 200});
  draw_bar(bars - 1, hist.failures, {200, 60, 60});
  return img;
}

}  // namespace hvs
