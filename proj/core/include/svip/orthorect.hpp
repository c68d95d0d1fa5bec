#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svip/image.hpp"

namespace svip {

enum class Side { Left, Right };

char side_letter(Side s);
Side side_from_string(const std::string& s);

/// One rectilinear crop of the sphere: a pinhole camera with the given
/// fields of view, rotated by yaw_offset (about the vertical axis, relative
/// to vehicle forward) and then pitch.
struct ViewSpec {
  Side side = Side::Left;
  double yaw_offset_deg = -90.0;
  double hfov_deg = 100.0;
  double vfov_deg = 67.0;
  int out_width = 1920;
  int out_height = 1280;
  double pitch_deg = 0.0;

  void validate() const;
};

ViewSpec default_view_spec(Side side);

/// Direction on the unit sphere, radians. lon in (-pi, pi], lat in
/// [-pi/2, pi/2].
struct SphericalDir {
  double lon = 0.0;
  double lat = 0.0;
};

/// Direction of the ray through output pixel coordinate (px, py). The
/// principal point (out_width/2, out_height/2) maps to
/// (yaw_offset, pitch) exactly.
SphericalDir gnomonic_ray(double px, double py, const ViewSpec& spec);

/// Inverse of gnomonic_ray. Returns the continuous pixel coordinate, or
/// nullopt when the direction is behind the camera plane. The coordinate
/// may lie outside [0, out_width) x [0, out_height).
std::optional<std::pair<double, double>> project_to_view(const SphericalDir& dir,
                                                         const ViewSpec& spec);

/// True when the direction lands inside the view's pixel bounds.
bool view_contains(const SphericalDir& dir, const ViewSpec& spec);

/// Standard equirectangular mapping: u = (lon/2pi + 0.5) * width,
/// v = (0.5 - lat/pi) * height.
std::pair<double, double> sphere_to_equirect_pixel(const SphericalDir& dir,
                                                   int width, int height);

SphericalDir equirect_pixel_to_sphere(double u, double v, int width, int height);

/// Precomputed sampling grid for one ViewSpec: the normalized
/// equirectangular coordinate of each output pixel center. Built once and
/// shared read-only across threads; independent of the source resolution.
class RayTable {
 public:
  explicit RayTable(const ViewSpec& spec);

  const ViewSpec& spec() const { return spec_; }

  /// Normalized (u, v), u in [0, 1], v in [0, 1].
  std::pair<float, float> lookup(int x, int y) const {
    const std::size_t i = (std::size_t(y) * spec_.out_width + x) * 2;
    return {coords_[i], coords_[i + 1]};
  }

 private:
  ViewSpec spec_;
  std::vector<float> coords_;
};

struct RectilinearView {
  std::string frame_id;
  Side side = Side::Left;
  Image image;
};

/// Resamples the equirectangular source through the ray table with bilinear
/// interpolation, wrapping at the longitude seam and clamping at the poles.
/// Deterministic byte-for-byte for fixed inputs.
Image orthorectify(const Image& equirect, const RayTable& table);
Image orthorectify(const EquirectImage& frame, const ViewSpec& spec);

RectilinearView orthorectify_view(std::string frame_id,
                                  const EquirectImage& frame,
                                  const RayTable& table);

}  // namespace svip
