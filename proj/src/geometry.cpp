#include "daa/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace daa {

double wrap_heading_deg(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w < 0.0) w += 360.0;
  return w == 360.0 ? 0.0 : w;
}

double wrap_signed_deg(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w > 180.0) w -= 360.0;
  if (w <= -180.0) w += 360.0;
  return w;
}

double CameraModel::vfov_deg() const {
  const double half_h = 0.5 * hfov_deg * kDegToRad;
  const double aspect = static_cast<double>(image_height) / image_width;
  return 2.0 * std::atan(std::tan(half_h) * aspect) * kRadToDeg;
}

AircraftClass default_aircraft_class(AircraftClassName name) {
  switch (name) {
    case AircraftClassName::CessnaSkyhawk:
      return {name, 11.0, 8.3, 2.7};
    case AircraftClassName::Boeing737:
      return {name, 35.8, 39.5, 12.5};
    case AircraftClassName::KingAirC90:
      return {name, 15.3, 10.8, 4.3};
  }
  throw std::invalid_argument("unknown aircraft class");
}

const char* aircraft_class_name(AircraftClassName name) {
  switch (name) {
    case AircraftClassName::CessnaSkyhawk: return "CessnaSkyhawk";
    case AircraftClassName::Boeing737: return "Boeing737";
    case AircraftClassName::KingAirC90: return "KingAirC90";
  }
  return "?";
}

std::optional<AircraftClassName> parse_aircraft_class(const std::string& s) {
  if (s == "CessnaSkyhawk") return AircraftClassName::CessnaSkyhawk;
  if (s == "Boeing737") return AircraftClassName::Boeing737;
  if (s == "KingAirC90") return AircraftClassName::KingAirC90;
  return std::nullopt;
}

namespace {

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

// Body axes (x forward, y right, z down) expressed in NED coordinates for a
// compass heading, nose-up pitch, and right-wing-down roll.
struct BodyAxes {
  Vec3 x, y, z;
};

BodyAxes body_axes(const AircraftState& s) {
  const double psi = s.heading_deg * kDegToRad;
  const double theta = s.pitch_deg * kDegToRad;
  const double phi = s.roll_deg * kDegToRad;
  const double cpsi = std::cos(psi), spsi = std::sin(psi);
  const double cth = std::cos(theta), sth = std::sin(theta);
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  BodyAxes b;
  b.x = {cth * cpsi, cth * spsi, -sth};
  b.y = {-cphi * spsi + sphi * sth * cpsi, cphi * cpsi + sphi * sth * spsi,
         sphi * cth};
  b.z = {sphi * spsi + cphi * sth * cpsi, -sphi * cpsi + cphi * sth * spsi,
         cphi * cth};
  return b;
}

Vec3 enu_to_ned(double east, double north, double up) { return {north, east, -up}; }

// Camera-frame components (forward, right, down) of the ENU displacement.
Vec3 camera_components(const AircraftState& own, double de, double dn, double du) {
  const BodyAxes b = body_axes(own);
  const Vec3 d = enu_to_ned(de, dn, du);
  return {dot(b.x, d), dot(b.y, d), dot(b.z, d)};
}

double half_extent_fraction(double half_extent, double slant, double fov_rad) {
  return 2.0 * std::atan2(half_extent, slant) / fov_rad;
}

}  // namespace

RelativeGeometry relative_geometry(const AircraftState& own,
                                   const AircraftState& intr) {
  RelativeGeometry rel;
  const double de = intr.east - own.east;
  const double dn = intr.north - own.north;
  rel.horizontal_range = std::hypot(de, dn);
  rel.vertical_offset = intr.up - own.up;
  if (rel.horizontal_range > 0.0) {
    const double azimuth = std::atan2(de, dn) * kRadToDeg;
    rel.bearing_deg = wrap_signed_deg(azimuth - own.heading_deg);
    rel.elevation_deg = std::atan2(rel.vertical_offset, rel.horizontal_range) * kRadToDeg;
    const double vo_e = own.ground_speed * std::sin(own.heading_deg * kDegToRad);
    const double vo_n = own.ground_speed * std::cos(own.heading_deg * kDegToRad);
    const double vi_e = intr.ground_speed * std::sin(intr.heading_deg * kDegToRad);
    const double vi_n = intr.ground_speed * std::cos(intr.heading_deg * kDegToRad);
    const double dve = vi_e - vo_e;
    const double dvn = vi_n - vo_n;
    // d(range)/dt = (dp . dv) / |dp|; positive closing means range shrinking.
    rel.horizontal_closing_speed = -(de * dve + dn * dvn) / rel.horizontal_range;
  }
  return rel;
}

RelativeGeometry relative_geometry_camera(const AircraftState& own,
                                          const AircraftState& intr) {
  RelativeGeometry rel = relative_geometry(own, intr);
  const Vec3 c = camera_components(own, intr.east - own.east,
                                   intr.north - own.north, intr.up - own.up);
  if (c.x != 0.0 || c.y != 0.0 || c.z != 0.0) {
    rel.bearing_deg = std::atan2(c.y, c.x) * kRadToDeg;
    rel.elevation_deg = std::atan2(-c.z, c.x) * kRadToDeg;
  } else {
    rel.bearing_deg = 0.0;
    rel.elevation_deg = 0.0;
  }
  return rel;
}

bool in_field_of_view(const CameraModel& cam, const RelativeGeometry& rel) {
  return std::abs(rel.bearing_deg) <= 0.5 * cam.hfov_deg &&
         std::abs(rel.elevation_deg) <= 0.5 * cam.vfov_deg();
}

std::optional<BoundingBox> project_to_image(const CameraModel& cam,
                                            const AircraftState& own,
                                            const AircraftState& intr,
                                            const AircraftClass& cls) {
  const double de = intr.east - own.east;
  const double dn = intr.north - own.north;
  const double du = intr.up - own.up;
  const Vec3 c = camera_components(own, de, dn, du);
  if (c.x <= 0.0) return std::nullopt;

  const double hfov = cam.hfov_deg * kDegToRad;
  const double vfov = cam.vfov_deg() * kDegToRad;
  const double tan_half_h = std::tan(0.5 * hfov);
  const double tan_half_v = std::tan(0.5 * vfov);
  const double tx = c.y / c.x;  // right of boresight
  const double ty = c.z / c.x;  // below boresight
  if (std::abs(tx) > tan_half_h || std::abs(ty) > tan_half_v) return std::nullopt;

  const double slant = std::sqrt(de * de + dn * dn + du * du);
  BoundingBox box;
  box.center_x = 0.5 + 0.5 * tx / tan_half_h;
  box.center_y = 0.5 + 0.5 * ty / tan_half_v;
  box.width = half_extent_fraction(0.5 * cls.wingspan, slant, hfov);
  box.height = half_extent_fraction(0.5 * cls.height, slant, vfov);
  box.class_id = 0;
  box.confidence = 1.0;
  return box;
}

namespace {

struct BoxAngles {
  double bearing_rad;
  double elevation_rad;
  double slant;
};

BoxAngles invert_box(const CameraModel& cam, const BoundingBox& box,
                     const AircraftClass& cls) {
  if (!(box.width > 0.0)) throw std::invalid_argument("degenerate box: width <= 0");
  const double hfov = cam.hfov_deg * kDegToRad;
  const double vfov = cam.vfov_deg() * kDegToRad;
  BoxAngles a;
  a.bearing_rad = std::atan((2.0 * box.center_x - 1.0) * std::tan(0.5 * hfov));
  a.elevation_rad = -std::atan((2.0 * box.center_y - 1.0) * std::tan(0.5 * vfov));
  a.slant = 0.5 * cls.wingspan / std::tan(0.5 * box.width * hfov);
  return a;
}

}  // namespace

RelativeGeometry estimate_state_from_box(const CameraModel& cam,
                                         const BoundingBox& box,
                                         const AircraftClass& cls) {
  const BoxAngles a = invert_box(cam, box, cls);
  RelativeGeometry rel;
  rel.bearing_deg = a.bearing_rad * kRadToDeg;
  rel.elevation_deg = a.elevation_rad * kRadToDeg;
  rel.horizontal_range = a.slant * std::cos(a.elevation_rad);
  rel.vertical_offset = a.slant * std::sin(a.elevation_rad);
  rel.horizontal_closing_speed = 0.0;
  return rel;
}

RelativeGeometry estimate_state_from_box(const CameraModel& cam,
                                         const BoundingBox& box,
                                         const AircraftClass& cls,
                                         const AircraftState& own) {
  const BoxAngles a = invert_box(cam, box, cls);
  const std::array<double, 3> ray =
      camera_ray_to_world(own, a.bearing_rad * kRadToDeg, a.elevation_rad * kRadToDeg);
  const double de = a.slant * ray[0];
  const double dn = a.slant * ray[1];
  const double du = a.slant * ray[2];
  RelativeGeometry rel;
  rel.horizontal_range = std::hypot(de, dn);
  rel.vertical_offset = du;
  if (rel.horizontal_range > 0.0) {
    rel.bearing_deg = wrap_signed_deg(std::atan2(de, dn) * kRadToDeg - own.heading_deg);
    rel.elevation_deg = std::atan2(du, rel.horizontal_range) * kRadToDeg;
  }
  rel.horizontal_closing_speed = 0.0;
  return rel;
}

std::array<double, 3> camera_ray_to_world(const AircraftState& own,
                                          double bearing_deg,
                                          double elevation_deg) {
  // Body direction with unit forward component, then normalize.
  const double ty = std::tan(bearing_deg * kDegToRad);
  const double tz = -std::tan(elevation_deg * kDegToRad);
  const double norm = std::sqrt(1.0 + ty * ty + tz * tz);
  const Vec3 dir{1.0 / norm, ty / norm, tz / norm};
  const BodyAxes b = body_axes(own);
  // v_ned = dir.x * x_b + dir.y * y_b + dir.z * z_b
  const Vec3 ned{dir.x * b.x.x + dir.y * b.y.x + dir.z * b.z.x,
                 dir.x * b.x.y + dir.y * b.y.y + dir.z * b.z.y,
                 dir.x * b.x.z + dir.y * b.y.z + dir.z * b.z.z};
  return {ned.y, ned.x, -ned.z};  // ENU
}

BoundingBox clip_box(const BoundingBox& box) {
  const double lo_x = std::max(0.0, box.center_x - 0.5 * box.width);
  const double hi_x = std::min(1.0, box.center_x + 0.5 * box.width);
  const double lo_y = std::max(0.0, box.center_y - 0.5 * box.height);
  const double hi_y = std::min(1.0, box.center_y + 0.5 * box.height);
  BoundingBox out = box;
  out.center_x = 0.5 * (lo_x + hi_x);
  out.center_y = 0.5 * (lo_y + hi_y);
  out.width = std::max(0.0, hi_x - lo_x);
  out.height = std::max(0.0, hi_y - lo_y);
  return out;
}

}  // namespace daa
