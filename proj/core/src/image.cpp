#include "hvs/image.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "hvs/errors.hpp"

namespace hvs {

namespace {
Image from_mat(const cv::Mat& bgr, const std::string& what) {
  if (bgr.empty()) throw Error("cannot decode image: " + what);
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  Image img(rgb.cols, rgb.rows);
  if (rgb.isContinuous()) {
    const uint8_t* p = rgb.ptr<uint8_t>(0);
    img.rgb.assign(p, p + img.rgb.size());
  } else {
    for (int y = 0; y < rgb.rows; ++y) {
      const uint8_t* row = rgb.ptr<uint8_t>(y);
      std::copy(row, row + static_cast<size_t>(rgb.cols) * 3,
                img.rgb.begin() + static_cast<size_t>(y) * rgb.cols * 3);
    }
  }
  return img;
}

cv::Mat to_mat_bgr(const Image& img) {
  if (img.width <= 0 || img.height <= 0) throw Error("cannot encode an empty image");
  cv::Mat rgb(img.height, img.width, CV_8UC3, const_cast<uint8_t*>(img.rgb.data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return bgr;
}
}  // namespace

Image load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("image file not found: " + path.string());
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  return from_mat(bgr, path.string());
}

Image decode_image(const std::vector<uint8_t>& bytes) {
  cv::Mat buf(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<uint8_t*>(bytes.data()));
  cv::Mat bgr = cv::imdecode(buf, cv::IMREAD_COLOR);
  return from_mat(bgr, std::to_string(bytes.size()) + " bytes");
}

std::vector<uint8_t> encode_png(const Image& img) {
  std::vector<uint8_t> out;
  if (!cv::imencode(".png", to_mat_bgr(img), out)) throw Error("PNG encoding failed");
  return out;
}

void save_png(const Image& img, const std::filesystem::path& path) {
  if (!cv::imwrite(path.string(), to_mat_bgr(img)))
    throw Error("cannot write image " + path.string());
}

}  // namespace hvs
