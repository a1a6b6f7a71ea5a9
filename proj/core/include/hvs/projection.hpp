#pragma once

#include "hvs/angles.hpp"

namespace hvs {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

Vec3 normalize(const Vec3& v);
double dot(const Vec3& a, const Vec3& b);

/// World-frame unit vector for a sphere direction. The frame is y-up:
/// phi=0 looks along +z, phi=90 along +x, mu=90 along +y.
Vec3 dir_to_vec(const Direction& d);

/// Great-circle angle between two sphere directions, degrees in [0, 180].
double angular_distance_deg(const Direction& a, const Direction& b);

/// Continuous pixel coordinates of a sphere direction on a 2:1
/// equirectangular image: x = phi/360 * width in [0, width),
/// y = (90 - mu)/180 * height in [0, height]. Throws std::invalid_argument
/// unless width == 2 * height and both are positive.
struct PixelCoord {
  double x = 0.0, y = 0.0;
};
PixelCoord dir_to_equirect_pixel(const Direction& d, int width, int height);

/// Inverse of dir_to_equirect_pixel at lattice points and anywhere in the
/// continuous image plane; x wraps, y is clamped to the valid pitch range.
Direction equirect_pixel_to_dir(double x, double y, int width, int height);

/// Unit ray through output pixel (u, v) in the camera frame
/// (x right, y up, z forward). u in [0, width], v in [0, height];
/// (width/2, height/2) maps to (0, 0, 1) exactly.
Vec3 camera_ray(double u, double v, const FoVSpec& fov, int width, int height);

/// Rotate a camera-frame ray by a pose (pitch about camera-right, then yaw
/// about world-up, roll fixed at zero) and return its sphere direction.
/// The forward ray (0, 0, 1) returns the pose angles exactly.
Direction rotate_ray(const Vec3& ray, const ViewPose& pose);

}  // namespace hvs
