#pragma once

#include <vector>

#include "hvs/angles.hpp"
#include "hvs/image.hpp"
#include "hvs/scene.hpp"

namespace hvs {

/// Bilinear sample of an equirectangular panorama at continuous pixel
/// coordinates. x wraps across the azimuth seam, y clamps at the poles.
Rgb sample_equirect(const Image& pano, double x, double y);

/// Render a pinhole (normal field of view) image of the panorama from a
/// pose. Output pixel (u, v) looks along rotate_ray(camera_ray(u, v)); the
/// center pixel therefore equals the panorama sampled at the pose exactly.
/// Throws std::invalid_argument on a non-2:1 panorama or non-positive size.
Image render_nfov(const Image& pano, const ViewPose& pose, const FoVSpec& fov, int width,
                  int height);

/// A rendered view plus the pose/FoV it was taken with.
struct NFoVObservation {
  ViewPose pose;
  FoVSpec fov;
  Image image;
  int step = 0;
};

/// Split entities into those inside at least one view's angular box and the
/// rest. Ordering within each part follows the input ordering.
struct EntityPartition {
  std::vector<SemanticEntity> visible;
  std::vector<SemanticEntity> hidden;
};
EntityPartition partition_entities(const std::vector<SemanticEntity>& entities,
                                   const std::vector<ViewPose>& views, const FoVSpec& fov);

}  // namespace hvs
