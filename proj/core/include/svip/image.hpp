#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace svip {

/// 8-bit RGB image, row-major, interleaved channels.
class Image {
 public:
  Image() = default;
  Image(int width, int height);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  const std::uint8_t* data() const { return pixels_.data(); }
  std::uint8_t* data() { return pixels_.data(); }
  std::size_t size_bytes() const { return pixels_.size(); }

  std::uint8_t& at(int x, int y, int c) {
    return pixels_[(std::size_t(y) * width_ + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels_[(std::size_t(y) * width_ + x) * 3 + c];
  }

  bool operator==(const Image& other) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// A full spherical frame. Enforces the 2:1 equirectangular aspect.
class EquirectImage {
 public:
  explicit EquirectImage(Image image);

  const Image& image() const { return image_; }
  int width() const { return image_.width(); }
  int height() const { return image_.height(); }

 private:
  Image image_;
};

/// Reads a PNG or JPEG file as RGB. Throws ParseError on failure.
Image load_image(const std::filesystem::path& path);

/// Writes PNG or JPEG by extension, atomically (temp file + rename).
void save_image(const Image& image, const std::filesystem::path& path);

/// In-memory encode, used for atomic writes and tests.
std::vector<std::uint8_t> encode_image(const Image& image,
                                       const std::string& extension);

}  // namespace svip
