#pragma once

// Shared test fixtures: synthetic panoramas whose colors analytically encode
// sphere angles, a small annotated scene family, scratch directories, and
// geometry oracles implemented independently of the library code they check.

#include <filesystem>
#include <string>
#include <vector>

#include "hvs/image.hpp"
#include "hvs/scene.hpp"

namespace hvs::test {

/// Unique scratch directory, removed recursively on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// -- panoramas ---------------------------------------------------------------

/// Smooth wrap-continuous pattern (sin/cos of the angles); good for seam and
/// determinism checks where only smoothness matters.
Image gradient_pano(int width);

/// Columns encode azimuth: R/G carry cos/sin (coarse), B a 45-degree-period
/// triangle wave (fine). Rows are constant.
Image azimuth_probe_pano(int width);
double decode_azimuth(Rgb c);  // degrees in [0, 360)

/// Quadrature companion to azimuth_probe_pano: R/G carry cos/sin of 8*phi,
/// a 45-degree-period pair that stays continuous across the seam. Sampled
/// at the same pixel as the coarse probe it decodes without the fold
/// ambiguity a single fine channel has near triangle peaks.
Image azimuth_probe_fine_pano(int width);

/// Azimuth from pixels taken at the same location of renders of the coarse
/// and fine azimuth probes. The coarse angle only selects the 45-degree
/// period (error budget 22.5 degrees), precision comes from the pair.
double decode_azimuth_pair(Rgb coarse, Rgb fine);  // degrees in [0, 360)

/// Rows encode pitch: R carries a linear ramp (coarse, selects the
/// 30-degree period), G/B a 30-degree-period quadrature pair (fine).
/// Columns are constant.
Image pitch_probe_pano(int width);
double decode_pitch(Rgb c);  // degrees in [-90, 90]

// -- independent geometry oracles --------------------------------------------

/// Sphere direction of the view ray through pixel (u, v), computed with an
/// explicit rotation matrix (pitch about camera-right, then yaw about
/// world-up), separate from the library's implementation.
void oracle_view_direction(double u, double v, int width, int height, double f_phi,
                           double f_gamma, double pose_phi, double pose_gamma,
                           double& out_phi, double& out_mu);

/// Shortest signed azimuth difference by brute force over the three
/// candidate turns.
double oracle_signed_delta(double target, double current);

/// Vertical FoV by bisection on tan(v/2) = (h/w) tan(f_phi/2).
double oracle_vertical_fov(double f_phi, double width, double height);

double great_circle_deg(double phi_a, double mu_a, double phi_b, double mu_b);

// -- scenes -------------------------------------------------------------------

/// Annotated room: 11 entities, 4 targets (the targets reuse entity labels
/// and coordinates). shift_deg rotates every azimuth so scenes differ;
/// instructions embed the scene id so they stay unique across a manifest.
SceneAnnotation fixture_annotation(const std::string& scene_id, double shift_deg = 0.0);

/// In-memory scene over a gradient panorama.
LoadedScene fixture_scene(const std::string& scene_id, double shift_deg = 0.0,
                          int pano_width = 256);

/// Write panoramas plus manifest.jsonl for n scenes; returns the manifest path.
std::filesystem::path write_fixture_manifest(const std::filesystem::path& dir, int n_scenes,
                                             int pano_width = 256);

}  // namespace hvs::test
