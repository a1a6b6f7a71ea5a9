// Release gate: nine checked guarantees, one pass/fail line each. Exits
// nonzero when any of them fails. Each body uses the shared fixtures and
// recomputes expectations independently of the library where feasible.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hvs/actions.hpp"
#include "hvs/actor.hpp"
#include "hvs/angles.hpp"
#include "hvs/bench.hpp"
#include "hvs/converter.hpp"
#include "hvs/datagen.hpp"
#include "hvs/episode.hpp"
#include "hvs/errors.hpp"
#include "hvs/imagination.hpp"
#include "hvs/mock_server.hpp"
#include "hvs/projection.hpp"
#include "hvs/remote.hpp"
#include "hvs/render.hpp"
#include "hvs/scene.hpp"
#include "hvs/util.hpp"
#include "support/fixtures.hpp"

using namespace hvs;

namespace {

struct Checker {
  std::vector<std::string> failures;

  void fail(std::string what) {
    if (failures.size() < 64) failures.push_back(std::move(what));
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

// 1. The evaluation protocol: step budget, view geometry, success
//    tolerances, sampling defaults, and the scoring rule on worked examples.
void protocol_constants(Checker& ck) {
  EpisodeConfig cfg;
  ck.expect(cfg.max_steps == 10, "default step budget is 10");
  ck.expect(cfg.width == 960 && cfg.height == 720, "default view size is 960x720");
  ck.expect(cfg.fov.f_phi == 100.0, "default horizontal fov is 100 degrees");
  double v = derive_vertical_fov(100.0, 960, 720);
  ck.expect(cfg.fov.f_gamma == v, "default vertical fov derives from the 4:3 aspect");
  ck.expect(std::fabs(v - 83.58165703059892) <= 1e-9,
            "derived vertical fov is 83.5816570306, got " + num(v));

  Tolerances tol;
  ck.expect(tol.object_tau_phi == 30.0 && tol.object_tau_gamma == 20.0,
            "object tolerances are 30 azimuth / 20 pitch");
  ck.expect(tol.person_tau_phi == 10.0, "person azimuth tolerance is 10");

  SamplingSchedule sch;
  ck.expect(sch.k_candidates == 3 && sch.t1 == 0.7 && sch.decay == 0.85 &&
                sch.stochastic_steps == 3 && sch.top_k == 50,
            "sampling defaults are k=3, t1=0.7, decay=0.85, 3 stochastic steps, top_k=50");

  TargetSpec obj;
  obj.label = "obj";
  obj.coord = Direction(120.0, 5.0);
  obj.bbox = {110.0, 130.0, 0.0, 10.0};
  obj.task = TaskKind::object_seeking;
  ck.expect(score_submission(obj, ViewPose(140.0, -10.0), tol),
            "object target (120,5): submitting (140,-10) is a hit (20<=30, 15<=20)");
  ck.expect(!score_submission(obj, ViewPose(155.0, 5.0), tol),
            "object target (120,5): submitting (155,5) is a miss (35>30)");
  ck.expect(score_submission(obj, ViewPose(150.0, 25.0), tol),
            "object boundaries are inclusive at (150,25)");
  ck.expect(!score_submission(obj, ViewPose(150.001, 5.0), tol),
            "just past the azimuth boundary is a miss");

  TargetSpec person;
  person.label = "p";
  person.coord = Direction(200.0, 0.0);
  person.bbox = {195.0, 205.0, -5.0, 5.0};
  person.task = TaskKind::person_seeking;
  ck.expect(score_submission(person, ViewPose(209.0, 60.0), tol),
            "person target at 200: submitting 209 is a hit, pitch ignored");
  ck.expect(!score_submission(person, ViewPose(211.0, 0.0), tol),
            "person target at 200: submitting 211 is a miss");
}

// 2. Prediction-to-action conversion: worked examples including seam
//    wraparound, then a 1e5-case fuzz on a 1/64-degree lattice where every
//    intermediate value is exact, checking that executing a suggested
//    rotation centers the prediction (idempotence), that Rot(0,0) never
//    appears, and that the conversion only depends on relative geometry.
void suggestion_conversion(Checker& ck) {
  FoVSpec fov{100.0, derive_vertical_fov(100.0, 960, 720)};
  auto check_action = [&ck](const Action& got, const Action& want, const std::string& what) {
    if (!(got == want))
      ck.fail(what + ": got " + format_action(got) + ", want " + format_action(want));
  };
  check_action(convert_prediction(Direction(166.0, 9.0), ViewPose(0.0, 0.0), fov),
               Action::rot(166.0, 9.0), "far prediction from the origin rotates");
  check_action(convert_prediction(Direction(166.0, 9.0), ViewPose(160.0, 10.0), fov),
               Action::sub(166.0, 9.0), "in-view prediction submits");
  check_action(convert_prediction(Direction(42.0, -7.0), ViewPose(42.0, -7.0), fov),
               Action::sub(42.0, -7.0), "prediction at the view center submits");
  check_action(convert_prediction(Direction(10.0, 0.0), ViewPose(350.0, 0.0), fov),
               Action::sub(10.0, 0.0), "seam-crossing in-view prediction submits");
  check_action(convert_prediction(Direction(350.0, 0.0), ViewPose(10.0, 0.0), fov),
               Action::sub(350.0, 0.0), "seam-crossing the other way submits");
  check_action(convert_prediction(Direction(190.0, 0.0), ViewPose(0.0, 0.0), fov),
               Action::rot(-170.0, 0.0), "rotation takes the short way around the seam");

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> phi64(0, 360 * 64 - 1);
  std::uniform_int_distribution<int> mu64(-90 * 64, 90 * 64);
  std::uniform_int_distribution<int> fov64(64, 170 * 64);
  int sub_bad = 0, rot_zero = 0, idem_bad = 0, invar_bad = 0;
  for (int i = 0; i < 100000; ++i) {
    Direction pred(phi64(rng) / 64.0, mu64(rng) / 64.0);
    ViewPose pose(phi64(rng) / 64.0, mu64(rng) / 64.0);
    FoVSpec f(fov64(rng) / 64.0, fov64(rng) / 64.0);

    Action first = convert_prediction(pred, pose, f);
    if (first.kind == Action::Kind::sub) {
      if (!within_fov(pred, pose, f) || first.a != pred.phi || first.b != pred.mu) ++sub_bad;
    } else {
      if (within_fov(pred, pose, f)) ++sub_bad;
      if (first.a == 0.0 && first.b == 0.0) ++rot_zero;
      ViewPose moved = apply_rotation(pose, first);
      bool clamped = moved.gamma != pose.gamma + first.b;
      bool in_view = within_fov(pred, moved, f);
      Action second = convert_prediction(pred, moved, f);
      if (!clamped && !in_view) ++idem_bad;
      if ((second.kind == Action::Kind::sub) != in_view) ++idem_bad;
      if (second.kind == Action::Kind::sub && (second.a != pred.phi || second.b != pred.mu))
        ++idem_bad;
    }

    double off = phi64(rng) / 64.0;
    Direction pred_s(pred.phi + off, pred.mu);
    ViewPose pose_s(pose.phi + off, pose.gamma);
    Action shifted = convert_prediction(pred_s, pose_s, f);
    bool same = first.kind == shifted.kind;
    if (same && first.kind == Action::Kind::rot)
      same = shifted.a == first.a && shifted.b == first.b;
    if (same && first.kind == Action::Kind::sub)
      same = shifted.a == pred_s.phi && shifted.b == pred_s.mu;
    if (!same) ++invar_bad;
  }
  ck.expect(sub_bad == 0,
            "submit exactly when in view, with the prediction's own coordinates (" +
                std::to_string(sub_bad) + " violations)");
  ck.expect(rot_zero == 0, "Rot(0, 0) never appears (" + std::to_string(rot_zero) + " hits)");
  ck.expect(idem_bad == 0, "executing the suggested rotation centers the prediction (" +
                               std::to_string(idem_bad) + " violations)");
  ck.expect(invar_bad == 0, "conversion depends only on relative azimuth (" +
                                std::to_string(invar_bad) + " violations)");
}

// 3. The temperature schedule for the first four steps and the greedy-only
//    tail, to 1e-12.
void temperature_schedule(Checker& ck) {
  SamplingSchedule sch;
  const std::vector<std::vector<double>> want = {
      {0.0, 0.7, 0.7}, {0.0, 0.595, 0.595}, {0.0, 0.50575, 0.50575}, {0.0}};
  for (int step = 1; step <= 4; ++step) {
    std::vector<double> got = schedule_temperatures(step, sch);
    const std::vector<double>& w = want[step - 1];
    if (got.size() != w.size()) {
      ck.fail("step " + std::to_string(step) + ": " + std::to_string(got.size()) +
              " temperatures, want " + std::to_string(w.size()));
      continue;
    }
    for (size_t i = 0; i < w.size(); ++i)
      ck.expect(std::fabs(got[i] - w[i]) <= 1e-12, "step " + std::to_string(step) + " slot " +
                                                       std::to_string(i) + ": " + num(got[i]) +
                                                       ", want " + num(w[i]));
  }
  for (int step = 5; step <= 10; ++step) {
    std::vector<double> got = schedule_temperatures(step, sch);
    ck.expect(got.size() == 1 && got[0] == 0.0,
              "step " + std::to_string(step) + " is greedy-only");
  }
}

// 4. Renderer fidelity at 960x720: decoded per-pixel directions match the
//    analytic camera model within 0.5 degrees for |pitch| <= 60, rows vary
//    smoothly across the azimuth seam, and the center pixel reproduces the
//    panorama at the pose exactly.
void renderer_fidelity(Checker& ck) {
  const int kW = 960, kH = 720;
  FoVSpec fov{100.0, derive_vertical_fov(100.0, kW, kH)};
  Image az_pano = hvs::test::azimuth_probe_pano(2048);
  Image az_fine_pano = hvs::test::azimuth_probe_fine_pano(2048);
  Image mu_pano = hvs::test::pitch_probe_pano(2048);

  double worst_az = 0.0, worst_mu = 0.0;
  long checked = 0;
  for (double pose_phi : {0.0, 58.25, 180.0, 271.25}) {
    for (double pose_gamma : {-18.0, 0.0, 18.0}) {
      ViewPose pose(pose_phi, pose_gamma);
      Image az_view = render_nfov(az_pano, pose, fov, kW, kH);
      Image az_fine_view = render_nfov(az_fine_pano, pose, fov, kW, kH);
      Image mu_view = render_nfov(mu_pano, pose, fov, kW, kH);
      for (int v = 0; v < kH; v += 4) {
        for (int u = 0; u < kW; u += 4) {
          Direction want = rotate_ray(camera_ray(u, v, fov, kW, kH), pose);
          if (std::fabs(want.mu) > 60.0) continue;
          double dec_phi =
              hvs::test::decode_azimuth_pair(az_view.at(u, v), az_fine_view.at(u, v));
          double az_err = std::fabs(signed_delta(dec_phi, want.phi));
          double mu_err = std::fabs(hvs::test::decode_pitch(mu_view.at(u, v)) - want.mu);
          worst_az = std::max(worst_az, az_err);
          worst_mu = std::max(worst_mu, mu_err);
          ++checked;
        }
      }
    }
  }
  ck.expect(checked > 300000, "direction lattice covers the view grid");
  ck.expect(worst_az <= 0.5, "worst decoded azimuth error " + num(worst_az) + " <= 0.5");
  ck.expect(worst_mu <= 0.5, "worst decoded pitch error " + num(worst_mu) + " <= 0.5");

  Image seam_view = render_nfov(az_pano, ViewPose(0.0, 0.0), fov, kW, kH);
  Image seam_fine_view = render_nfov(az_fine_pano, ViewPose(0.0, 0.0), fov, kW, kH);
  int seam_jumps = 0;
  double prev =
      hvs::test::decode_azimuth_pair(seam_view.at(0, kH / 2), seam_fine_view.at(0, kH / 2));
  for (int u = 1; u < kW; ++u) {
    double cur =
        hvs::test::decode_azimuth_pair(seam_view.at(u, kH / 2), seam_fine_view.at(u, kH / 2));
    double step = signed_delta(cur, prev);
    if (step <= -0.5 || step >= 1.0) ++seam_jumps;
    prev = cur;
  }
  ck.expect(seam_jumps == 0, "center row advances smoothly across the azimuth seam (" +
                                 std::to_string(seam_jumps) + " jumps)");

  int center_bad = 0;
  for (const ViewPose& pose : {ViewPose(0.0, 0.0), ViewPose(37.5, -45.0), ViewPose(180.0, 30.0),
                               ViewPose(359.25, 0.0), ViewPose(123.4, 62.1)}) {
    Image view = render_nfov(az_pano, pose, fov, kW, kH);
    PixelCoord at_pose =
        dir_to_equirect_pixel(Direction(pose.phi, pose.gamma), az_pano.width, az_pano.height);
    if (!(view.at(kW / 2, kH / 2) == sample_equirect(az_pano, at_pose.x, at_pose.y)))
      ++center_bad;
  }
  ck.expect(center_bad == 0, "center pixel equals the panorama sampled at the pose (" +
                                 std::to_string(center_bad) + " mismatches)");
}

// 5. Zero-noise end-to-end runs: the truth-backed suggester plus the
//    suggestion follower solves every fixture episode with median 2 steps
//    or fewer, and two runs write byte-identical reports.
void oracle_suite(Checker& ck) {
  hvs::test::TempDir tmp;
  std::filesystem::path manifest = hvs::test::write_fixture_manifest(tmp.path() / "scenes", 5);

  BenchConfig bc;
  bc.sigma0 = 0.0;
  bc.imaginator = "oracle";
  bc.actor = "follower";
  bc.seeds = {0, 1, 2};
  bc.workers = 4;
  bc.out_dir = tmp.path() / "run1";
  BenchReport r1 = run_bench(manifest, bc);

  ck.expect(r1.overall.episodes == 60, "5 scenes x 4 targets x 3 seeds = 60 episodes, got " +
                                           std::to_string(r1.overall.episodes));
  ck.expect(r1.overall.episodes >= 50, "at least 50 episodes");
  ck.expect(r1.overall.successes == r1.overall.episodes,
            "success rate 1.000 with zero noise, got " + std::to_string(r1.overall.successes) +
                "/" + std::to_string(r1.overall.episodes));
  ck.expect(r1.backend_errors == 0, "no backend errors");
  ck.expect(r1.median_steps_success <= 2.0,
            "median steps to success <= 2, got " + num(r1.median_steps_success));

  bc.out_dir = tmp.path() / "run2";
  bc.workers = 1;
  BenchReport r2 = run_bench(manifest, bc);
  ck.expect(r1.to_json() == r2.to_json(), "in-memory reports identical across runs");
  std::string j1 = slurp(tmp.path() / "run1" / "report.json");
  std::string j2 = slurp(tmp.path() / "run2" / "report.json");
  ck.expect(!j1.empty() && j1 == j2, "report.json byte-identical across runs and worker counts");
  std::string t1 = slurp(tmp.path() / "run1" / "report.txt");
  std::string t2 = slurp(tmp.path() / "run2" / "report.txt");
  ck.expect(!t1.empty() && t1 == t2, "report.txt byte-identical across runs and worker counts");
}

// 6. The training-data count law on a 5-scene manifest with defaults:
//    480 samples, 12 of 24 trajectories per scene avoid their target, every
//    avoiding sample lists that target in its imagined section, and every
//    sample's observed/imagined split matches an independent recomputation.
void training_data(Checker& ck) {
  hvs::test::TempDir tmp;
  std::filesystem::path manifest = hvs::test::write_fixture_manifest(tmp.path() / "scenes", 5);

  DatagenConfig dc;
  dc.workers = 4;
  std::filesystem::path out = tmp.path() / "shards";
  DatagenSummary sum = run_datagen(manifest, dc, out);
  ck.expect(sum.scenes == 5 && sum.trajectories == 120,
            "5 scenes x 24 trajectories, got " + std::to_string(sum.trajectories));
  ck.expect(sum.samples == 480,
            "120 trajectories x 4 prefixes = 480 samples, got " + std::to_string(sum.samples));
  ck.expect(sum.avoiding_fraction == 0.5, "half of all trajectories avoid their target");

  int mismatches = 0, missing_target = 0, group_bad = 0;
  std::vector<SceneAnnotation> scenes = load_manifest(manifest);
  for (const SceneAnnotation& scene : scenes) {
    std::vector<Trajectory> trajs = synthesize_trajectories(
        scene, dc.trajectories, dc.fov, mix_seed(dc.seed, fnv1a(scene.scene_id)));
    int avoiding = 0;
    for (const Trajectory& t : trajs) avoiding += t.avoiding;
    ck.expect(avoiding == 12, scene.scene_id + ": " + std::to_string(avoiding) +
                                  "/24 avoiding trajectories, want 12");

    std::ifstream in(out / ("samples-" + scene.scene_id + ".jsonl"));
    std::vector<TrainingSample> samples;
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) samples.push_back(parse_sample(line));
    if (samples.size() != 96) {
      ck.fail(scene.scene_id + ": " + std::to_string(samples.size()) + " samples, want 96");
      continue;
    }

    for (size_t g = 0; g < trajs.size(); ++g) {
      const Trajectory& traj = trajs[g];
      const TargetSpec& target = scene.targets[traj.target_index];
      // Four samples per trajectory, prefix lengths 1, 2, 4, 8 in order.
      const TrainingSample& full = samples[4 * g + 3];
      if (full.revealed.size() != traj.poses.size() || !(full.instruction == target.instruction))
        ++group_bad;
      for (size_t p = 0; p < full.revealed.size() && p < traj.poses.size(); ++p)
        if (!(full.revealed[p] == traj.poses[p])) ++group_bad;

      if (traj.avoiding) {
        for (const ViewPose& p : traj.poses)
          if (within_fov(target.coord, p, dc.fov)) ++group_bad;
        for (size_t k = 4 * g; k < 4 * g + 4; ++k) {
          bool listed = false;
          for (const LabeledCoord& lc : samples[k].content.imagined)
            if (lc.label == target.label) listed = true;
          if (!listed) ++missing_target;
        }
      }
    }

    for (const TrainingSample& s : samples) {
      EntityPartition part = partition_entities(scene.entities, s.revealed, dc.fov);
      bool ok = part.visible.size() == s.content.observed.size() &&
                part.hidden.size() == s.content.imagined.size();
      for (size_t i = 0; ok && i < part.visible.size(); ++i)
        ok = s.content.observed[i].label == part.visible[i].label &&
             s.content.observed[i].coord == part.visible[i].coord;
      for (size_t i = 0; ok && i < part.hidden.size(); ++i)
        ok = s.content.imagined[i].label == part.hidden[i].label &&
             s.content.imagined[i].coord == part.hidden[i].coord;
      if (!ok) ++mismatches;
    }
  }
  ck.expect(group_bad == 0, "shard rows line up with the synthesized trajectories (" +
                                std::to_string(group_bad) + " mismatches)");
  ck.expect(missing_target == 0, "every avoiding sample lists its target as imagined (" +
                                     std::to_string(missing_target) + " missing)");
  ck.expect(mismatches == 0, "observed/imagined splits match the visibility recomputation (" +
                                 std::to_string(mismatches) + " mismatches)");
}

// 7. Text grammars: 1000 random structured-layout round trips, 1000 random
//    actor-reply round trips, and the canonical worked examples.
void grammar_round_trips(Checker& ck) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u_phi(0.0, 360.0);
  std::uniform_real_distribution<double> u_mu(-90.0, 90.0);
  std::uniform_int_distribution<int> u_n(0, 4);
  const char* labels[] = {"door", "tv stand", "floor lamp", "a_b", "x-1", "window blinds"};

  int layout_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    ImaginationOutput out;
    for (int k = u_n(rng); k-- > 0;)
      out.observed.push_back({labels[rng() % 6], Direction(u_phi(rng), u_mu(rng))});
    for (int k = u_n(rng); k-- > 0;)
      out.imagined.push_back({labels[rng() % 6], Direction(u_phi(rng), u_mu(rng))});
    out.suggest = Direction(u_phi(rng), u_mu(rng));
    if (!(parse_imagination(format_imagination(out)) == out)) ++layout_bad;
  }
  ck.expect(layout_bad == 0, "structured layout text round-trips (" +
                                 std::to_string(layout_bad) + " losses in 1000)");

  const char* thinks[] = {"", "scan the far wall", "target likely behind", "pan right"};
  int reply_bad = 0;
  for (int i = 0; i < 1000; ++i) {
    ActorReply reply;
    reply.think = thinks[rng() % 4];
    if (rng() % 2)
      reply.action = Action::rot(u_phi(rng) - 180.0, u_mu(rng));
    else
      reply.action = Action::sub(u_phi(rng), u_mu(rng));
    if (!(parse_actor_reply(format_actor_reply(reply)) == reply)) ++reply_bad;
  }
  ck.expect(reply_bad == 0,
            "actor replies round-trip (" + std::to_string(reply_bad) + " losses in 1000)");

  ImaginationOutput ex = parse_imagination(
      "[Observed]\n- picture frames: (274, 16)\n[Imagined]\n"
      "- window with outdoor view: (166, 9)\nSuggest Check (166, 9)");
  ck.expect(ex.observed.size() == 1 && ex.observed[0].label == "picture frames" &&
                ex.observed[0].coord == Direction(274.0, 16.0),
            "worked example: observed entity parses to (274, 16)");
  ck.expect(ex.imagined.size() == 1 && ex.imagined[0].label == "window with outdoor view" &&
                ex.imagined[0].coord == Direction(166.0, 9.0),
            "worked example: imagined entity parses to (166, 9)");
  ck.expect(ex.suggest == Direction(166.0, 9.0), "worked example: suggestion parses to (166, 9)");

  ActorReply rot = parse_actor_reply(
      "<think>target likely left</think><answer>Rot(-40, 5)</answer>");
  ck.expect(rot.think == "target likely left" && rot.action == Action::rot(-40.0, 5.0),
            "worked example: think plus Rot(-40, 5)");
  ActorReply sub = parse_actor_reply("<answer>Sub(166, 9)</answer>");
  ck.expect(sub.think.empty() && sub.action == Action::sub(166.0, 9.0),
            "worked example: bare Sub(166, 9)");
}

// 8. Wire loopback: the HTTP clients against the bundled server reproduce
//    the direct backend outputs bit-exactly, sequentially for 100 seeded
//    requests and under a 20-way concurrent soak with per-request pairing.
void wire_loopback(Checker& ck) {
  hvs::test::TempDir tmp;
  std::filesystem::path manifest = hvs::test::write_fixture_manifest(tmp.path(), 2);

  MockServerConfig scfg;
  scfg.manifest = manifest;
  scfg.sigma0 = 20.0;
  MockServer server(scfg);
  server.start();

  RemoteConfig rcfg;
  rcfg.base_url = server.url();
  rcfg.timeout_ms = 10000;
  rcfg.max_retries = 1;
  rcfg.backoff_ms = 1;
  rcfg.max_concurrency = 20;
  RemoteImaginator remote(rcfg);

  FoVSpec fov{100.0, derive_vertical_fov(100.0, 960, 720)};
  std::vector<OracleImaginator> locals;
  locals.emplace_back(hvs::test::fixture_annotation("scene-a", 0.0), fov, scfg.sigma0, 0.7);
  locals.emplace_back(hvs::test::fixture_annotation("scene-b", 37.0), fov, scfg.sigma0, 0.7);
  const std::vector<SceneAnnotation> scenes = load_manifest(manifest);

  const double temps[] = {0.0, 0.7, 0.595, 0.50575};
  int imagine_bad = 0;
  for (int i = 0; i < 100; ++i) {
    int scene = i % 2;
    ImagineRequest req;
    req.instruction = scenes[scene].targets[(i / 2) % 4].instruction;
    req.history.emplace_back(wrap_azimuth(31.0 * i), (i % 5 - 2) * 15.0);
    if (i % 3 == 0) req.history.emplace_back(wrap_azimuth(31.0 * i + 90.0), 0.0);
    req.temperature = temps[i % 4];
    req.seed = 1000 + static_cast<uint64_t>(i);
    if (!(remote.imagine(req) == locals[scene].imagine(req))) ++imagine_bad;
  }
  ck.expect(imagine_bad == 0, "100 seeded imagine calls match the direct backend (" +
                                  std::to_string(imagine_bad) + " mismatches)");

  RemoteActor remote_actor(rcfg);
  FollowerActor local_actor;
  NFoVObservation obs;
  obs.fov = fov;
  obs.image = Image(8, 6);
  int act_bad = 0;
  for (int i = 0; i < 10; ++i) {
    obs.pose = ViewPose(36.0 * i, (i % 3 - 1) * 20.0);
    std::vector<CoordHypothesis> hyps = {{Direction(wrap_azimuth(36.0 * i + 150.0), 5.0), 0.0},
                                         {Direction(12.5 * i, -4.0), 0.7}};
    ActorContext ctx;
    ctx.instruction = scenes[i % 2].targets[0].instruction;
    ctx.observation = &obs;
    ctx.memory = {ViewPose(0.0, 0.0)};
    ctx.suggestions = convert_hypotheses(hyps, obs.pose, fov);
    ctx.suggestions_text = format_suggestion_block(ctx.suggestions);
    ctx.step = 1 + i % 4;
    if (!(remote_actor.act(ctx) == local_actor.act(ctx))) ++act_bad;
  }
  ck.expect(act_bad == 0, "10 loopback act calls match the direct follower (" +
                              std::to_string(act_bad) + " mismatches)");

  std::vector<ImagineRequest> soak(20);
  std::vector<ImaginationOutput> want;
  for (int t = 0; t < 20; ++t) {
    soak[t].instruction = scenes[t % 2].targets[(t / 2) % 4].instruction;
    soak[t].history.emplace_back(18.0 * t, 0.0);
    soak[t].temperature = 0.7;
    soak[t].seed = 5000 + static_cast<uint64_t>(t);
    want.push_back(locals[t % 2].imagine(soak[t]));
  }
  std::atomic<int> soak_bad{0};
  std::vector<std::thread> pool;
  pool.reserve(20);
  for (int t = 0; t < 20; ++t)
    pool.emplace_back([&, t] {
      try {
        if (!(remote.imagine(soak[t]) == want[t])) soak_bad.fetch_add(1);
      } catch (...) {
        soak_bad.fetch_add(1);
      }
    });
  for (std::thread& th : pool) th.join();
  ck.expect(soak_bad.load() == 0, "20-way concurrent soak pairs every reply to its request (" +
                                      std::to_string(soak_bad.load()) + " mismatches)");
  server.stop();
}

// 9. Behavior separation: with noisy suggestions (sigma0 20) the guided
//    follower beats the suggestion-blind sweep on success rate and median
//    terminal step over 200 seeded episodes, and the guided success rate
//    never increases as the noise scale grows.
void guided_separation(Checker& ck) {
  hvs::test::TempDir tmp;
  std::filesystem::path manifest = hvs::test::write_fixture_manifest(tmp.path(), 2);

  EpisodeConfig ecfg;
  ecfg.width = 160;
  ecfg.height = 120;
  ecfg.fov = FoVSpec{100.0, derive_vertical_fov(100.0, 160, 120)};

  BenchConfig guided;
  guided.episode = ecfg;
  guided.imaginator = "oracle";
  guided.actor = "follower";
  guided.sigma0 = 20.0;
  guided.workers = 4;
  guided.seeds.clear();
  for (uint64_t s = 0; s < 25; ++s) guided.seeds.push_back(s);

  BenchConfig sweep = guided;
  sweep.imaginator = "none";
  sweep.actor = "sweep";

  BenchReport gr = run_bench(manifest, guided);
  BenchReport sr = run_bench(manifest, sweep);
  ck.expect(gr.overall.episodes == 200 && sr.overall.episodes == 200,
            "200 episodes per policy, got " + std::to_string(gr.overall.episodes) + " and " +
                std::to_string(sr.overall.episodes));
  ck.expect(gr.overall.rate() > sr.overall.rate(),
            "guided success rate " + num(gr.overall.rate()) + " strictly above sweep " +
                num(sr.overall.rate()));
  ck.expect(gr.median_terminal_steps < sr.median_terminal_steps,
            "guided median terminal step " + num(gr.median_terminal_steps) +
                " strictly below sweep " + num(sr.median_terminal_steps));
  ck.expect(sr.overall.rate() < 1.0, "the sweep baseline leaves room to separate");

  double prev_rate = 2.0;
  for (double sigma0 : {0.0, 10.0, 20.0, 40.0, 80.0}) {
    BenchConfig point = guided;
    point.sigma0 = sigma0;
    BenchReport pr = sigma0 == 20.0 ? gr : run_bench(manifest, point);
    ck.expect(pr.overall.rate() <= prev_rate,
              "success rate non-increasing in noise: sigma0 " + num(sigma0) + " gives " +
                  num(pr.overall.rate()) + " after " + num(prev_rate));
    prev_rate = pr.overall.rate();
  }
}

struct Criterion {
  int number;
  const char* name;
  void (*body)(Checker&);
};

}  // namespace

int main(int argc, char** argv) {
  const Criterion criteria[] = {
      {1, "evaluation protocol constants", protocol_constants},
      {2, "suggestion conversion", suggestion_conversion},
      {3, "temperature schedule", temperature_schedule},
      {4, "renderer fidelity", renderer_fidelity},
      {5, "zero-noise end-to-end runs", oracle_suite},
      {6, "training data generation", training_data},
      {7, "grammar round-trips", grammar_round_trips},
      {8, "wire loopback equivalence", wire_loopback},
      {9, "guided search separation", guided_separation},
  };

  // Optional arguments select criteria by number, e.g. "hvs_acceptance 4 9".
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failed = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), c.number) == wanted.end())
      continue;
    ++ran;
    Checker ck;
    auto start = std::chrono::steady_clock::now();
    try {
      c.body(ck);
    } catch (const std::exception& e) {
      ck.fail(std::string("unexpected exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool ok = ck.failures.empty();
    std::printf("[%s] criterion %d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", c.number, c.name, secs);
    for (const std::string& f : ck.failures) std::printf("    - %s\n", f.c_str());
    if (!ok) ++failed;
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
