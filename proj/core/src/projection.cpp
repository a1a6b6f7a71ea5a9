#include "hvs/projection.hpp"

#include <cmath>
#include <stdexcept>

namespace hvs {

Vec3 normalize(const Vec3& v) {
  double n = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
  return {v.x / n, v.y / n, v.z / n};
}

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 dir_to_vec(const Direction& d) {
  double phi = deg_to_rad(d.phi);
  double mu = deg_to_rad(d.mu);
  double c = std::cos(mu);
  return {c * std::sin(phi), std::sin(mu), c * std::cos(phi)};
}

double angular_distance_deg(const Direction& a, const Direction& b) {
  double d = dot(dir_to_vec(a), dir_to_vec(b));
  if (d > 1.0) d = 1.0;
  if (d < -1.0) d = -1.0;
  return rad_to_deg(std::acos(d));
}

namespace {
void check_equirect_dims(int width, int height) {
  if (width <= 0 || height <= 0 || width != 2 * height)
    throw std::invalid_argument("equirectangular image must be 2:1 with positive size");
}
}  // namespace

PixelCoord dir_to_equirect_pixel(const Direction& d, int width, int height) {
  check_equirect_dims(width, height);
  return {d.phi / 360.0 * width, (90.0 - d.mu) / 180.0 * height};
}

Direction equirect_pixel_to_dir(double x, double y, int width, int height) {
  check_equirect_dims(width, height);
  double mu = 90.0 - y / height * 180.0;
  return {wrap_azimuth(x / width * 360.0), clamp_pitch(mu)};
}

Vec3 camera_ray(double u, double v, const FoVSpec& fov, int width, int height) {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("camera_ray: non-positive image size");
  double x = (2.0 * u / width - 1.0) * std::tan(deg_to_rad(fov.f_phi) / 2.0);
  double y = (1.0 - 2.0 * v / height) * std::tan(deg_to_rad(fov.f_gamma) / 2.0);
  return normalize({x, y, 1.0});
}

Direction rotate_ray(const Vec3& ray, const ViewPose& pose) {
  // The forward ray is the pose by definition; returning it untouched keeps
  // the center pixel of a render exact instead of within trig round-off.
  if (ray.x == 0.0 && ray.y == 0.0 && ray.z > 0.0) return {pose.phi, pose.gamma};

  double sg = std::sin(deg_to_rad(pose.gamma));
  double cg = std::cos(deg_to_rad(pose.gamma));
  double sp = std::sin(deg_to_rad(pose.phi));
  double cp = std::cos(deg_to_rad(pose.phi));

  // Pitch about camera-right, then yaw about world-up. Roll stays zero.
  double x1 = ray.x;
  double y1 = ray.y * cg + ray.z * sg;
  double z1 = -ray.y * sg + ray.z * cg;
  double x2 = x1 * cp + z1 * sp;
  double z2 = -x1 * sp + z1 * cp;

  double ny = y1 < -1.0 ? -1.0 : (y1 > 1.0 ? 1.0 : y1);
  double mu = rad_to_deg(std::asin(ny));
  double phi = (x2 == 0.0 && z2 == 0.0) ? 0.0 : rad_to_deg(std::atan2(x2, z2));
  return {wrap_azimuth(phi), clamp_pitch(mu)};
}

}  // namespace hvs
