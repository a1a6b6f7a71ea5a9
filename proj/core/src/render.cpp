#include "hvs/render.hpp"

#include <cmath>
#include <stdexcept>

#include "hvs/projection.hpp"

namespace hvs {

Rgb sample_equirect(const Image& pano, double x, double y) {
  int w = pano.width, h = pano.height;

  double xw = std::fmod(x, static_cast<double>(w));
  if (xw < 0.0) xw += w;
  int x0 = static_cast<int>(xw);
  if (x0 >= w) x0 = 0;  // fmod rounding can touch w exactly
  int x1 = (x0 + 1) % w;
  double fx = xw - x0;

  // Pitch does not wrap: clamp to the pole rows.
  int y0, y1;
  double fy;
  if (y <= 0.0) {
    y0 = y1 = 0;
    fy = 0.0;
  } else if (y >= h - 1.0) {
    y0 = y1 = h - 1;
    fy = 0.0;
  } else {
    y0 = static_cast<int>(y);
    y1 = y0 + 1;
    fy = y - y0;
  }

  Rgb c00 = pano.at(x0, y0), c10 = pano.at(x1, y0);
  Rgb c01 = pano.at(x0, y1), c11 = pano.at(x1, y1);
  auto lerp2 = [&](uint8_t a, uint8_t b, uint8_t c, uint8_t d) {
    double top = a + (b - a) * fx;
    double bot = c + (d - c) * fx;
    double v = top + (bot - top) * fy;
    return static_cast<uint8_t>(std::lround(v));
  };
  return {lerp2(c00.r, c10.r, c01.r, c11.r), lerp2(c00.g, c10.g, c01.g, c11.g),
          lerp2(c00.b, c10.b, c01.b, c11.b)};
}

Image render_nfov(const Image& pano, const ViewPose& pose, const FoVSpec& fov, int width,
                  int height) {
  if (pano.width != 2 * pano.height || pano.width <= 0)
    throw std::invalid_argument("render_nfov: panorama must be 2:1");
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("render_nfov: non-positive output size");

  Image out(width, height);
  size_t i = 0;
  for (int v = 0; v < height; ++v) {
    for (int u = 0; u < width; ++u) {
      Direction d = rotate_ray(camera_ray(u, v, fov, width, height), pose);
      PixelCoord p = dir_to_equirect_pixel(d, pano.width, pano.height);
      Rgb c = sample_equirect(pano, p.x, p.y);
      out.rgb[i++] = c.r;
      out.rgb[i++] = c.g;
      out.rgb[i++] = c.b;
    }
  }
  return out;
}

EntityPartition partition_entities(const std::vector<SemanticEntity>& entities,
                                   const std::vector<ViewPose>& views, const FoVSpec& fov) {
  EntityPartition part;
  for (const SemanticEntity& e : entities) {
    bool seen = false;
    for (const ViewPose& v : views) {
      if (within_fov(e.coord, v, fov)) {
        seen = true;
        break;
      }
    }
    (seen ? part.visible : part.hidden).push_back(e);
  }
  return part;
}

}  // namespace hvs
