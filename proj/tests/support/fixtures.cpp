#include "support/fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>

#include <nlohmann/json.hpp>

#include "hvs/angles.hpp"
#include "hvs/util.hpp"

namespace hvs::test {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
double d2r(double d) { return d * kPi / 180.0; }
double r2d(double r) { return r * 180.0 / kPi; }

uint8_t to_byte(double v01) {
  double v = v01 * 255.0;
  if (v < 0.0) v = 0.0;
  if (v > 255.0) v = 255.0;
  return static_cast<uint8_t>(std::lround(v));
}

/// Triangle wave with period 1 over t, range [0, 1], peak at t = 0.5.
double tri(double t) { return std::fabs(2.0 * (t - std::floor(t + 0.5))); }
}  // namespace

TempDir::TempDir() {
  static std::atomic<uint64_t> counter{0};
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("hvs-test-" + std::to_string(rd()) + "-" + std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

Image gradient_pano(int width) {
  int height = width / 2;
  Image img(width, height);
  for (int y = 0; y < height; ++y) {
    double mu = 90.0 - double(y) / height * 180.0;
    uint8_t b = to_byte((std::sin(d2r(mu)) + 1.0) / 2.0);
    for (int x = 0; x < width; ++x) {
      double phi = double(x) / width * 360.0;
      img.set(x, y,
              {to_byte((std::cos(d2r(phi)) + 1.0) / 2.0),
               to_byte((std::sin(d2r(phi)) + 1.0) / 2.0), b});
    }
  }
  return img;
}

Image azimuth_probe_pano(int width) {
  int height = width / 2;
  Image img(width, height);
  for (int x = 0; x < width; ++x) {
    double phi = double(x) / width * 360.0;
    Rgb c{to_byte((std::cos(d2r(phi)) + 1.0) / 2.0),
          to_byte((std::sin(d2r(phi)) + 1.0) / 2.0), to_byte(tri(phi / 45.0))};
    for (int y = 0; y < height; ++y) img.set(x, y, c);
  }
  return img;
}

double decode_azimuth(Rgb c) {
  double coarse = r2d(std::atan2(c.g / 255.0 * 2.0 - 1.0, c.r / 255.0 * 2.0 - 1.0));
  if (coarse < 0.0) coarse += 360.0;
  double v = c.b / 255.0;
  // tri((45k +- 22.5 v) / 45) == v; pick the solution nearest the coarse angle.
  double best = coarse, best_err = 1e9;
  for (int k = 0; k < 8; ++k) {
    for (double cand : {45.0 * k + 22.5 * v, 45.0 * k - 22.5 * v}) {
      double c360 = std::fmod(cand + 360.0, 360.0);
      double err = std::fabs(c360 - coarse);
      if (err > 180.0) err = 360.0 - err;
      if (err < best_err) {
        best_err = err;
        best = c360;
      }
    }
  }
  return best;
}

Image azimuth_probe_fine_pano(int width) {
  int height = width / 2;
  Image img(width, height);
  for (int x = 0; x < width; ++x) {
    double t = d2r(double(x) / width * 360.0 * 8.0);
    Rgb c{to_byte((std::cos(t) + 1.0) / 2.0), to_byte((std::sin(t) + 1.0) / 2.0), 0};
    for (int y = 0; y < height; ++y) img.set(x, y, c);
  }
  return img;
}

double decode_azimuth_pair(Rgb coarse_px, Rgb fine_px) {
  double coarse =
      r2d(std::atan2(coarse_px.g / 255.0 * 2.0 - 1.0, coarse_px.r / 255.0 * 2.0 - 1.0));
  double off =
      r2d(std::atan2(fine_px.g / 255.0 * 2.0 - 1.0, fine_px.r / 255.0 * 2.0 - 1.0)) / 8.0;
  double k = std::round((coarse - off) / 45.0);
  return wrap_azimuth(45.0 * k + off);
}

Image pitch_probe_pano(int width) {
  int height = width / 2;
  Image img(width, height);
  for (int y = 0; y < height; ++y) {
    double mu = 90.0 - double(y) / height * 180.0;
    double t = d2r(mu * 12.0);
    Rgb c{to_byte((mu + 90.0) / 180.0), to_byte((std::cos(t) + 1.0) / 2.0),
          to_byte((std::sin(t) + 1.0) / 2.0)};
    for (int x = 0; x < width; ++x) img.set(x, y, c);
  }
  return img;
}

double decode_pitch(Rgb c) {
  double coarse = c.r / 255.0 * 180.0 - 90.0;
  double off = r2d(std::atan2(c.b / 255.0 * 2.0 - 1.0, c.g / 255.0 * 2.0 - 1.0)) / 12.0;
  double k = std::round((coarse - off) / 30.0);
  return std::clamp(30.0 * k + off, -90.0, 90.0);
}

void oracle_view_direction(double u, double v, int width, int height, double f_phi,
                           double f_gamma, double pose_phi, double pose_gamma,
                           double& out_phi, double& out_mu) {
  double px = (2.0 * u / width - 1.0) * std::tan(d2r(f_phi) / 2.0);
  double py = (1.0 - 2.0 * v / height) * std::tan(d2r(f_gamma) / 2.0);
  double pz = 1.0;
  double n = std::sqrt(px * px + py * py + pz * pz);
  double cam[3] = {px / n, py / n, pz / n};

  // Rows of R = R_y(phi) * R_x(-gamma), written out explicitly.
  double cg = std::cos(d2r(pose_gamma)), sg = std::sin(d2r(pose_gamma));
  double cp = std::cos(d2r(pose_phi)), sp = std::sin(d2r(pose_phi));
  double R[3][3] = {
      {cp, -sp * sg, sp * cg},
      {0.0, cg, sg},
      {-sp, -cp * sg, cp * cg},
  };
  double world[3] = {0.0, 0.0, 0.0};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) world[r] += R[r][c] * cam[c];

  double y = world[1];
  if (y > 1.0) y = 1.0;
  if (y < -1.0) y = -1.0;
  out_mu = r2d(std::asin(y));
  out_phi = r2d(std::atan2(world[0], world[2]));
  if (out_phi < 0.0) out_phi += 360.0;
}

double oracle_signed_delta(double target, double current) {
  double base = std::fmod(target, 360.0) - std::fmod(current, 360.0);
  double best = 1e9;
  for (int k = -2; k <= 2; ++k) {
    double cand = base + 360.0 * k;
    if (std::fabs(cand) < std::fabs(best)) best = cand;
    // Resolve the half-turn tie toward +180.
    if (std::fabs(std::fabs(cand) - std::fabs(best)) < 1e-12 && cand > best) best = cand;
  }
  return best;
}

double oracle_vertical_fov(double f_phi, double width, double height) {
  double rhs = (height / width) * std::tan(d2r(f_phi) / 2.0);
  double lo = 0.0, hi = 179.999;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2.0;
    (std::tan(d2r(mid) / 2.0) < rhs ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

double great_circle_deg(double phi_a, double mu_a, double phi_b, double mu_b) {
  double ax = std::cos(d2r(mu_a)) * std::sin(d2r(phi_a));
  double ay = std::sin(d2r(mu_a));
  double az = std::cos(d2r(mu_a)) * std::cos(d2r(phi_a));
  double bx = std::cos(d2r(mu_b)) * std::sin(d2r(phi_b));
  double by = std::sin(d2r(mu_b));
  double bz = std::cos(d2r(mu_b)) * std::cos(d2r(phi_b));
  double d = ax * bx + ay * by + az * bz;
  double cx = ay * bz - az * by;
  double cy = az * bx - ax * bz;
  double cz = ax * by - ay * bx;
  double cross = std::sqrt(cx * cx + cy * cy + cz * cz);
  // atan2 keeps full precision near 0 and 180, where acos(dot) loses it.
  return r2d(std::atan2(cross, d));
}

namespace {
struct EntityInit {
  const char* label;
  double phi, mu;
  int salience;
};
constexpr EntityInit kEntities[] = {
    {"door", 10.0, 5.0, 3},     {"window", 52.0, 18.0, 2},  {"sofa", 95.0, -8.0, 4},
    {"lamp", 140.0, 32.0, 1},   {"tv", 185.0, 2.0, 5},      {"plant", 230.0, -15.0, 2},
    {"shelf", 275.0, 10.0, 3},  {"rug", 320.0, -30.0, 1},   {"clock", 355.0, 48.0, 2},
    {"person", 208.0, -5.0, 4}, {"poster", 78.0, 60.0, 1},
};

struct TargetInit {
  const char* label;
  const char* instruction;
  const char* difficulty;
  const char* task;
};
constexpr TargetInit kTargets[] = {
    {"tv", "Find the television screen", "easy", "object"},
    {"lamp", "Locate the reading lamp", "medium", "object"},
    {"poster", "Check the poster high on the wall", "hard", "object"},
    {"person", "Find the person standing", "medium", "person"},
};
}  // namespace

SceneAnnotation fixture_annotation(const std::string& scene_id, double shift_deg) {
  SceneAnnotation scene;
  scene.scene_id = scene_id;
  scene.pano_path = scene_id + ".png";
  scene.category = "indoor";
  for (const EntityInit& e : kEntities)
    scene.entities.push_back(
        {e.label, Direction(wrap_azimuth(e.phi + shift_deg), e.mu), e.salience});
  for (const TargetInit& t : kTargets) {
    const SemanticEntity* ent = nullptr;
    for (const SemanticEntity& e : scene.entities)
      if (e.label == std::string(t.label)) ent = &e;
    TargetSpec tgt;
    tgt.label = t.label;
    tgt.instruction = std::string(t.instruction) + " in " + scene_id;
    tgt.coord = ent->coord;
    tgt.bbox = {wrap_azimuth(tgt.coord.phi - 12.0), wrap_azimuth(tgt.coord.phi + 12.0),
                std::max(-90.0, tgt.coord.mu - 12.0), std::min(90.0, tgt.coord.mu + 12.0)};
    tgt.difficulty = difficulty_from_string(t.difficulty);
    tgt.task = task_from_string(t.task);
    scene.targets.push_back(std::move(tgt));
  }
  return scene;
}

LoadedScene fixture_scene(const std::string& scene_id, double shift_deg, int pano_width) {
  return {fixture_annotation(scene_id, shift_deg), gradient_pano(pano_width)};
}

std::filesystem::path write_fixture_manifest(const std::filesystem::path& dir, int n_scenes,
                                             int pano_width) {
  using ordered_json = nlohmann::ordered_json;
  std::filesystem::create_directories(dir);
  std::string manifest_text;
  for (int i = 0; i < n_scenes; ++i) {
    std::string id = "scene-" + std::string(1, static_cast<char>('a' + i));
    SceneAnnotation scene = fixture_annotation(id, 37.0 * i);
    save_png(gradient_pano(pano_width), dir / scene.pano_path);

    ordered_json rec;
    rec["scene_id"] = scene.scene_id;
    rec["pano_path"] = scene.pano_path;
    rec["category"] = scene.category;
    ordered_json ents = ordered_json::array();
    for (const SemanticEntity& e : scene.entities)
      ents.push_back({{"label", e.label},
                      {"phi", e.coord.phi},
                      {"mu", e.coord.mu},
                      {"salience", e.salience}});
    rec["entities"] = std::move(ents);
    ordered_json tgts = ordered_json::array();
    for (const TargetSpec& t : scene.targets)
      tgts.push_back({{"label", t.label},
                      {"instruction", t.instruction},
                      {"phi", t.coord.phi},
                      {"mu", t.coord.mu},
                      {"bbox",
                       {{"phi_min", t.bbox.phi_min},
                        {"phi_max", t.bbox.phi_max},
                        {"mu_min", t.bbox.mu_min},
                        {"mu_max", t.bbox.mu_max}}},
                      {"difficulty", to_string(t.difficulty)},
                      {"task", to_string(t.task)}});
    rec["targets"] = std::move(tgts);
    manifest_text += rec.dump();
    manifest_text += '\n';
  }
  std::filesystem::path manifest = dir / "manifest.jsonl";
  write_text_file(manifest, manifest_text);
  return manifest;
}

}  // namespace hvs::test
