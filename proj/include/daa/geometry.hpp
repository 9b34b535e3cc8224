#pragma once

#include <array>
#include <optional>
#include <string>

namespace daa {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;

// NMAC separation thresholds (500 ft horizontal, 100 ft vertical).
constexpr double kNmacHorizontalM = 152.4;
constexpr double kNmacVerticalM = 30.48;

double wrap_heading_deg(double deg);  // -> [0, 360)
double wrap_signed_deg(double deg);   // -> (-180, 180]

// One aircraft in a local east-north-up frame.
struct AircraftState {
  double east = 0.0;           // m
  double north = 0.0;          // m
  double up = 0.0;             // m
  double heading_deg = 0.0;    // compass, [0, 360)
  double pitch_deg = 0.0;      // nose-up positive
  double roll_deg = 0.0;       // right-wing-down positive
  double ground_speed = 0.0;   // m/s, horizontal
  double vertical_rate = 0.0;  // m/s, up positive
};

struct RelativeGeometry {
  double horizontal_range = 0.0;          // m, planar
  double vertical_offset = 0.0;           // m, intruder minus ownship
  double bearing_deg = 0.0;               // signed, right positive, (-180, 180]
  double elevation_deg = 0.0;             // signed, up positive
  double horizontal_closing_speed = 0.0;  // m/s, positive when closing
};

// Default FOV is wide enough that the encounter model's worst-case approach
// bearing (about +/-44 deg for relative headings in [100, 260]) stays inside
// the frustum; narrower cameras leave a slice of encounters undetectable by
// construction.
struct CameraModel {
  double hfov_deg = 90.0;
  int image_width = 1280;
  int image_height = 720;

  // Pinhole vertical FOV from the aspect ratio.
  double vfov_deg() const;
};

// Normalized image-space box. Boxes produced by project_to_image keep their
// geometric extent (the center is always inside [0,1]^2, the extent can spill
// past an edge); clip_box intersects with the frame for label output.
struct BoundingBox {
  double center_x = 0.0;
  double center_y = 0.0;
  double width = 0.0;
  double height = 0.0;
  int class_id = 0;
  double confidence = 1.0;  // 1.0 for ground truth
};

enum class AircraftClassName { CessnaSkyhawk = 0, Boeing737 = 1, KingAirC90 = 2 };
constexpr int kNumAircraftClasses = 3;

struct AircraftClass {
  AircraftClassName name = AircraftClassName::CessnaSkyhawk;
  double wingspan = 11.0;  // m
  double length = 8.3;     // m
  double height = 2.7;     // m
};

// Real-world reference extents; configurable, not calibration constants.
AircraftClass default_aircraft_class(AircraftClassName name);
const char* aircraft_class_name(AircraftClassName name);
std::optional<AircraftClassName> parse_aircraft_class(const std::string& s);

// Planar range, altitude offset, bearing from ownship heading (right
// positive), elevation above the horizontal plane, and the closing speed
// -d(range)/dt from the two horizontal velocity vectors. Coincident positions
// yield range 0 and bearing 0.
RelativeGeometry relative_geometry(const AircraftState& ownship,
                                   const AircraftState& intruder);

// Same ranges and closing speed, but bearing/elevation in the ownship camera
// frame: boresight along the body x axis, full heading/pitch/roll rotation.
// bearing = atan2(right, forward); elevation = atan2(up, forward), so the
// FOV test below is exactly the pinhole image-bounds test.
RelativeGeometry relative_geometry_camera(const AircraftState& ownship,
                                          const AircraftState& intruder);

// True iff |bearing| <= hfov/2 and |elevation| <= vfov/2 (inclusive edges).
bool in_field_of_view(const CameraModel& cam, const RelativeGeometry& rel);

// Ground-truth box for the intruder center seen through the ownship camera;
// nothing when the center is out of view. Extent comes from the class
// wingspan/height at the slant range, independent of intruder orientation.
std::optional<BoundingBox> project_to_image(const CameraModel& cam,
                                            const AircraftState& ownship,
                                            const AircraftState& intruder,
                                            const AircraftClass& cls);

// Inverse pinhole under a level camera: angles from the box center, slant
// range from the box width and the assumed wingspan. Closing speed is left 0
// (callers difference consecutive estimates). Throws std::invalid_argument on
// a degenerate box (width <= 0).
RelativeGeometry estimate_state_from_box(const CameraModel& cam,
                                         const BoundingBox& box,
                                         const AircraftClass& assumed_class);

// Attitude-aware inversion: maps the box back through the ownship camera
// orientation to world-frame relative geometry (exact inverse of
// project_to_image up to floating-point error).
RelativeGeometry estimate_state_from_box(const CameraModel& cam,
                                         const BoundingBox& box,
                                         const AircraftClass& assumed_class,
                                         const AircraftState& ownship);

// Unit ENU direction of the camera ray at the given camera-frame angles.
std::array<double, 3> camera_ray_to_world(const AircraftState& ownship,
                                          double bearing_deg,
                                          double elevation_deg);

// Intersect with [0,1]^2, preserving class id and confidence.
BoundingBox clip_box(const BoundingBox& box);

}  // namespace daa
