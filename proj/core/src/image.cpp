#include "svip/image.hpp"

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include <cstring>
#include <fstream>
#include <system_error>

#include "svip/error.hpp"

namespace svip {

Image::Image(int width, int height) : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("image dimensions must be positive, got " +
                          std::to_string(width) + "x" + std::to_string(height));
  }
  pixels_.assign(std::size_t(width) * height * 3, 0);
}

EquirectImage::EquirectImage(Image image) : image_(std::move(image)) {
  if (image_.empty() || image_.width() != 2 * image_.height()) {
    throw ValidationError(
        "equirectangular frame must be 2:1, got " +
        std::to_string(image_.width()) + "x" + std::to_string(image_.height()));
  }
}

Image load_image(const std::filesystem::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) {
    throw ParseError("cannot decode image " + path.string());
  }
  Image out(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) {
      out.at(x, y, 0) = row[x][2];
      out.at(x, y, 1) = row[x][1];
      out.at(x, y, 2) = row[x][0];
    }
  }
  return out;
}

std::vector<std::uint8_t> encode_image(const Image& image,
                                       const std::string& extension) {
  cv::Mat bgr(image.height(), image.width(), CV_8UC3);
  for (int y = 0; y < image.height(); ++y) {
    cv::Vec3b* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width(); ++x) {
      row[x][2] = image.at(x, y, 0);
      row[x][1] = image.at(x, y, 1);
      row[x][0] = image.at(x, y, 2);
    }
  }
  std::vector<std::uint8_t> buffer;
  std::string ext = extension;
  if (!ext.empty() && ext.front() != '.') ext = "." + ext;
  if (!cv::imencode(ext, bgr, buffer)) {
    throw Error("cannot encode image as " + ext);
  }
  return buffer;
}

void save_image(const Image& image, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes =
      encode_image(image, path.extension().string());
  namespace fs = std::filesystem;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot rename " + tmp.string() + " to " + path.string());
  }
}

}  // namespace svip
