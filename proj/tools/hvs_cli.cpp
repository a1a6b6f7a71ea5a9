// Command-line front end: episode benching, heatmaps/histograms over logs,
// the deterministic mock endpoint server, single-view rendering, and
// training-sample generation.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hvs/bench.hpp"
#include "hvs/datagen.hpp"
#include "hvs/errors.hpp"
#include "hvs/mock_server.hpp"
#include "hvs/render.hpp"
#include "hvs/util.hpp"

namespace {

/// "--seeds 8" means seeds 0..7; "--seeds 3,17,42" means exactly those.
std::vector<uint64_t> parse_seeds(const std::string& text) {
  std::vector<uint64_t> seeds;
  if (text.find(',') == std::string::npos) {
    size_t end = 0;
    unsigned long long n = std::stoull(text, &end);
    if (end != text.size()) throw hvs::Error("bad --seeds value \"" + text + "\"");
    for (unsigned long long i = 0; i < n; ++i) seeds.push_back(i);
    if (seeds.empty()) throw hvs::Error("--seeds needs at least one seed");
    return seeds;
  }
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string part = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    size_t end = 0;
    seeds.push_back(std::stoull(part, &end));
    if (end != part.size()) throw hvs::Error("bad --seeds entry \"" + part + "\"");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return seeds;
}

std::vector<int> parse_int_list(const std::string& text, const char* flag) {
  std::vector<int> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    std::string part = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    size_t end = 0;
    out.push_back(std::stoi(part, &end));
    if (end != part.size())
      throw hvs::Error(std::string("bad ") + flag + " entry \"" + part + "\"");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Humanoid visual search over equirectangular panoramas"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run search episodes and write logs + report");
  std::string run_manifest, imaginator = "oracle", actor = "follower", seeds_text = "1";
  std::string run_out;
  hvs::BenchConfig bench;
  run->add_option("--manifest", run_manifest, "Scene manifest (JSON Lines)")->required();
  run->add_option("--imaginator", imaginator, "oracle | none | remote:<url>");
  run->add_option("--actor", actor, "follower | sweep | remote:<url>");
  run->add_option("--max-steps", bench.episode.max_steps, "Step budget per episode");
  double run_fov = 100.0;
  run->add_option("--fov", run_fov, "Horizontal field of view, degrees");
  run->add_option("--width", bench.episode.width, "View width, px");
  run->add_option("--height", bench.episode.height, "View height, px");
  run->add_option("--k", bench.episode.schedule.k_candidates, "Hypotheses per stochastic step");
  run->add_option("--t1", bench.episode.schedule.t1, "First-step sampling temperature");
  run->add_option("--decay", bench.episode.schedule.decay, "Per-step temperature decay");
  run->add_option("--stochastic-steps", bench.episode.schedule.stochastic_steps,
                  "Steps with stochastic hypotheses");
  run->add_option("--sigma0", bench.sigma0, "Oracle imagination noise scale, degrees");
  run->add_option("--seeds", seeds_text, "Seed count, or comma-separated seed list");
  run->add_option("--workers", bench.workers, "Worker threads (0: hardware)");
  run->add_option("--out", run_out, "Output directory")->required();

  // heatmap
  auto* heatmap = app.add_subcommand("heatmap", "Density map of suggested coordinates");
  std::string hm_logs, hm_out;
  double hm_sigma = 10.0;
  heatmap->add_option("--logs", hm_logs, "Directory of episode logs (*.jsonl)")->required();
  heatmap->add_option("--sigma", hm_sigma, "Gaussian kernel sigma, degrees");
  heatmap->add_option("--out", hm_out, "Output PNG")->required();

  // hist
  auto* hist = app.add_subcommand("hist", "Terminal-step histogram of episode logs");
  std::string hist_logs, hist_out, hist_csv;
  hist->add_option("--logs", hist_logs, "Directory of episode logs (*.jsonl)")->required();
  hist->add_option("--out", hist_out, "Output PNG")->required();
  hist->add_option("--csv", hist_csv, "Also write the distribution as CSV");

  // serve-mock
  auto* serve = app.add_subcommand("serve-mock", "Serve /v1/imagine and /v1/act from scene truth");
  hvs::MockServerConfig mock;
  std::string mock_manifest;
  int mock_port = 8088;
  uint64_t mock_seed = 0;
  std::string mock_actor_mode = "follower";
  serve->add_option("--manifest", mock_manifest, "Scene manifest (JSON Lines)")->required();
  serve->add_option("--port", mock_port, "Listen port");
  serve->add_option("--seed", mock_seed, "Fallback sampling seed stream");
  serve->add_option("--actor-mode", mock_actor_mode, "follower | sweep");

  // render
  auto* render = app.add_subcommand("render", "Render one view from a panorama");
  std::string pano_path, render_out;
  double r_phi = 0.0, r_gamma = 0.0, r_fov = 100.0;
  int r_width = 960, r_height = 720;
  render->add_option("--pano", pano_path, "Equirectangular panorama image")->required();
  render->add_option("--phi", r_phi, "Azimuth, degrees")->required();
  render->add_option("--gamma", r_gamma, "Pitch, degrees")->required();
  render->add_option("--fov", r_fov, "Horizontal field of view, degrees");
  render->add_option("--width", r_width, "Output width, px");
  render->add_option("--height", r_height, "Output height, px");
  render->add_option("--out", render_out, "Output PNG")->required();

  // datagen
  auto* datagen = app.add_subcommand("datagen", "Generate masked-prediction training samples");
  hvs::DatagenConfig dg;
  std::string dg_scenes, dg_prefixes = "1,2,4,8", dg_out;
  double dg_fov = 100.0;
  int dg_width = 960, dg_height = 720;
  datagen->add_option("--scenes", dg_scenes, "Scene manifest (JSON Lines)")->required();
  datagen->add_option("--trajectories", dg.trajectories.count, "Trajectories per scene");
  datagen->add_option("--avoid-ratio", dg.trajectories.avoid_ratio,
                      "Leading fraction of target-avoiding trajectories");
  datagen->add_option("--prefixes", dg_prefixes, "Comma-separated prefix lengths");
  datagen->add_option("--fov", dg_fov, "Horizontal field of view, degrees");
  datagen->add_option("--width", dg_width, "View width, px");
  datagen->add_option("--height", dg_height, "View height, px");
  datagen->add_option("--seed", dg.seed, "Generation seed");
  datagen->add_option("--workers", dg.workers, "Worker threads (0: hardware)");
  datagen->add_option("--out", dg_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      bench.imaginator = imaginator;
      bench.actor = actor;
      bench.episode.fov =
          hvs::FoVSpec(run_fov,
                       hvs::derive_vertical_fov(run_fov, bench.episode.width,
                                                bench.episode.height));
      bench.seeds = parse_seeds(seeds_text);
      bench.out_dir = run_out;
      hvs::BenchReport report = hvs::run_bench(run_manifest, bench);
      std::fputs(report.to_table().c_str(), stdout);
    } else if (*heatmap) {
      int skipped = 0;
      std::vector<hvs::Direction> coords = hvs::suggested_coords_from_logs(hm_logs, &skipped);
      if (skipped > 0)
        std::fprintf(stderr, "warning: skipped %d unparseable log lines\n", skipped);
      if (coords.empty()) {
        std::fprintf(stderr, "warning: no suggested coordinates under %s; not writing %s\n",
                     hm_logs.c_str(), hm_out.c_str());
        return 0;
      }
      hvs::HeatmapGrid grid = hvs::build_heatmap(coords, 720, 360, hm_sigma);
      hvs::save_png(hvs::heatmap_image(grid), hm_out);
      std::printf("wrote %s from %zu coordinates\n", hm_out.c_str(), coords.size());
    } else if (*hist) {
      int skipped = 0;
      hvs::StepHistogram h = hvs::histogram_from_logs(hist_logs, &skipped);
      if (skipped > 0)
        std::fprintf(stderr, "warning: skipped %d unparseable log lines\n", skipped);
      if (h.episodes() == 0) {
        std::fprintf(stderr, "warning: no terminal lines under %s; not writing %s\n",
                     hist_logs.c_str(), hist_out.c_str());
        return 0;
      }
      if (!hist_csv.empty()) hvs::write_text_file(hist_csv, hvs::histogram_csv(h));
      hvs::save_png(hvs::histogram_image(h), hist_out);
      std::printf("wrote %s over %d episodes\n", hist_out.c_str(), h.episodes());
    } else if (*serve) {
      mock.manifest = mock_manifest;
      mock.seed = mock_seed;
      mock.actor_mode = mock_actor_mode;
      hvs::MockServer server(mock);
      std::printf("serving scene truth on http://127.0.0.1:%d\n", mock_port);
      std::fflush(stdout);
      server.run_blocking(mock_port);
    } else if (*render) {
      hvs::Image pano = hvs::load_image(pano_path);
      if (pano.width != 2 * pano.height)
        throw hvs::Error("panorama must be 2:1, got " + std::to_string(pano.width) + "x" +
                         std::to_string(pano.height));
      hvs::FoVSpec fov(r_fov, hvs::derive_vertical_fov(r_fov, r_width, r_height));
      hvs::Image view =
          hvs::render_nfov(pano, hvs::ViewPose(r_phi, r_gamma), fov, r_width, r_height);
      hvs::save_png(view, render_out);
      std::printf("wrote %s\n", render_out.c_str());
    } else if (*datagen) {
      dg.prefix_lengths = parse_int_list(dg_prefixes, "--prefixes");
      dg.fov = hvs::FoVSpec(dg_fov, hvs::derive_vertical_fov(dg_fov, dg_width, dg_height));
      hvs::DatagenSummary s = hvs::run_datagen(dg_scenes, dg, dg_out);
      std::printf("scenes=%d trajectories=%d samples=%d avoiding_fraction=%.3f\n", s.scenes,
                  s.trajectories, s.samples, s.avoiding_fraction);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
