#include "svip/orthorect.hpp"

#include <cmath>

#include "svip/error.hpp"

namespace svip {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;

struct Vec3 {
  double x, y, z;
};

// World frame: +y up, lon measured about +y with lon=0 at +z.
Vec3 dir_from_spherical(const SphericalDir& d) {
  const double cl = std::cos(d.lat);
  return {cl * std::sin(d.lon), std::sin(d.lat), cl * std::cos(d.lon)};
}

SphericalDir spherical_from_dir(const Vec3& v) {
  const double r = std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z);
  return {std::atan2(v.x, v.z), std::asin(v.y / r)};
}

// Tips the forward axis up by p: (0,0,1) -> (0, sin p, cos p).
Vec3 rotate_pitch(const Vec3& v, double p) {
  const double c = std::cos(p), s = std::sin(p);
  return {v.x, v.y * c + v.z * s, -v.y * s + v.z * c};
}

// Rotates forward toward +x: (0,0,1) -> (sin yaw, 0, cos yaw).
Vec3 rotate_yaw(const Vec3& v, double yaw) {
  const double c = std::cos(yaw), s = std::sin(yaw);
  return {v.x * c + v.z * s, v.y, -v.x * s + v.z * c};
}

double focal_x(const ViewSpec& s) {
  return (s.out_width / 2.0) / std::tan(s.hfov_deg * kDegToRad / 2.0);
}

double focal_y(const ViewSpec& s) {
  return (s.out_height / 2.0) / std::tan(s.vfov_deg * kDegToRad / 2.0);
}

inline int wrap_mod(int i, int n) {
  const int m = i % n;
  return m < 0 ? m + n : m;
}

inline std::uint8_t sample_bilinear(const Image& src, double u, double v, int c) {
  const int w = src.width(), h = src.height();
  const double x = u - 0.5, y = v - 0.5;
  const double xf = std::floor(x), yf = std::floor(y);
  const double fx = x - xf, fy = y - yf;
  const int x0 = wrap_mod(int(xf), w);
  const int x1 = wrap_mod(int(xf) + 1, w);
  int y0 = int(yf), y1 = int(yf) + 1;
  y0 = y0 < 0 ? 0 : (y0 >= h ? h - 1 : y0);
  y1 = y1 < 0 ? 0 : (y1 >= h ? h - 1 : y1);
  const double top = (1.0 - fx) * src.at(x0, y0, c) + fx * src.at(x1, y0, c);
  const double bot = (1.0 - fx) * src.at(x0, y1, c) + fx * src.at(x1, y1, c);
  const double value = (1.0 - fy) * top + fy * bot;
  return static_cast<std::uint8_t>(std::lround(value));
}

}  // namespace

char side_letter(Side s) { return s == Side::Left ? 'L' : 'R'; }

Side side_from_string(const std::string& s) {
  if (s == "L" || s == "Left" || s == "left") return Side::Left;
  if (s == "R" || s == "Right" || s == "right") return Side::Right;
  throw ParseError("unknown side \"" + s + "\", expected L or R");
}

void ViewSpec::validate() const {
  if (!(hfov_deg > 0.0 && hfov_deg < 180.0)) {
    throw ValidationError("hfov must be in (0, 180) degrees, got " +
                          std::to_string(hfov_deg));
  }
  if (!(vfov_deg > 0.0 && vfov_deg < 180.0)) {
    throw ValidationError("vfov must be in (0, 180) degrees, got " +
                          std::to_string(vfov_deg));
  }
  if (out_width <= 0 || out_height <= 0) {
    throw ValidationError("view output dimensions must be positive, got " +
                          std::to_string(out_width) + "x" +
                          std::to_string(out_height));
  }
}

ViewSpec default_view_spec(Side side) {
  ViewSpec spec;
  spec.side = side;
  spec.yaw_offset_deg = side == Side::Left ? -90.0 : 90.0;
  return spec;
}

SphericalDir gnomonic_ray(double px, double py, const ViewSpec& spec) {
  const double xc = (px - spec.out_width / 2.0) / focal_x(spec);
  const double yc = (spec.out_height / 2.0 - py) / focal_y(spec);
  Vec3 d{xc, yc, 1.0};
  d = rotate_pitch(d, spec.pitch_deg * kDegToRad);
  d = rotate_yaw(d, spec.yaw_offset_deg * kDegToRad);
  return spherical_from_dir(d);
}

std::optional<std::pair<double, double>> project_to_view(const SphericalDir& dir,
                                                         const ViewSpec& spec) {
  Vec3 d = dir_from_spherical(dir);
  d = rotate_yaw(d, -spec.yaw_offset_deg * kDegToRad);
  d = rotate_pitch(d, -spec.pitch_deg * kDegToRad);
  if (d.z <= 0.0) return std::nullopt;
  const double px = spec.out_width / 2.0 + focal_x(spec) * (d.x / d.z);
  const double py = spec.out_height / 2.0 - focal_y(spec) * (d.y / d.z);
  return std::make_pair(px, py);
}

bool view_contains(const SphericalDir& dir, const ViewSpec& spec) {
  const auto p = project_to_view(dir, spec);
  return p && p->first >= 0.0 && p->first < spec.out_width &&
         p->second >= 0.0 && p->second < spec.out_height;
}

std::pair<double, double> sphere_to_equirect_pixel(const SphericalDir& dir,
                                                   int width, int height) {
  return {(dir.lon / (2.0 * kPi) + 0.5) * width,
          (0.5 - dir.lat / kPi) * height};
}

SphericalDir equirect_pixel_to_sphere(double u, double v, int width,
                                      int height) {
  return {(u / width - 0.5) * 2.0 * kPi, (0.5 - v / height) * kPi};
}

RayTable::RayTable(const ViewSpec& spec) : spec_(spec) {
  spec_.validate();
  coords_.resize(std::size_t(spec_.out_width) * spec_.out_height * 2);
  std::size_t i = 0;
  for (int y = 0; y < spec_.out_height; ++y) {
    for (int x = 0; x < spec_.out_width; ++x) {
      const SphericalDir dir = gnomonic_ray(x + 0.5, y + 0.5, spec_);
      coords_[i++] = static_cast<float>(dir.lon / (2.0 * kPi) + 0.5);
      coords_[i++] = static_cast<float>(0.5 - dir.lat / kPi);
    }
  }
}

Image orthorectify(const Image& equirect, const RayTable& table) {
  const ViewSpec& spec = table.spec();
  Image out(spec.out_width, spec.out_height);
  for (int y = 0; y < spec.out_height; ++y) {
    for (int x = 0; x < spec.out_width; ++x) {
      const auto [un, vn] = table.lookup(x, y);
      const double u = double(un) * equirect.width();
      const double v = double(vn) * equirect.height();
      for (int c = 0; c < 3; ++c) {
        out.at(x, y, c) = sample_bilinear(equirect, u, v, c);
      }
    }
  }
  return out;
}

Image orthorectify(const EquirectImage& frame, const ViewSpec& spec) {
  return orthorectify(frame.image(), RayTable(spec));
}

RectilinearView orthorectify_view(std::string frame_id,
                                  const EquirectImage& frame,
                                  const RayTable& table) {
  return RectilinearView{std::move(frame_id), table.spec().side,
                         orthorectify(frame.image(), table)};
}

}  // namespace svip
