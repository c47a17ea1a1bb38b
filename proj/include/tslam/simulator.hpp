#ifndef TSLAM_SIMULATOR_HPP
#define TSLAM_SIMULATOR_HPP

#include "tslam/camera.hpp"
#include "tslam/image.hpp"
#include "tslam/map.hpp"
#include "tslam/se3.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tslam {

/// A planar text board in the world. The quad reported by the detection
/// oracle is the inner rectangle (frame plus glyphs), inset by the margin so
/// that it contains only smooth board texture.
struct BoardSpec {
    Vec3 center = Vec3::Zero();
    Vec3 normal = -Vec3::UnitZ(); // points toward the viewer side
    Vec3 up = Vec3::UnitY();
    double width = 1.0;  // meters
    double height = 0.5; // meters
    std::string text;
    std::uint64_t texture_seed = 0;
    bool duplicate_flag = false; // deliberately duplicated string

    Vec3 u_axis() const { return up.cross(normal).normalized(); }
    Vec3 v_axis() const { return normal.cross(u_axis()).normalized(); }
    double margin() const { return 0.07 * std::min(width, height); }
    /// World corners of the detection quad (inner rectangle), CCW seen from the front.
    std::array<Vec3, 4> quad_corners_world() const;
    std::array<Vec3, 4> board_corners_world() const;
};

struct ScenePoint {
    Vec3 position = Vec3::Zero();
    double intensity = 120.0;
};

enum class LightingMode { kConstant, kAffine, kAffineWave, kDayNight };

struct LightingSpec {
    LightingMode mode = LightingMode::kConstant;
    double a = 1.0;
    double b = 0.0;
    double a_amp = 0.0;
    double b_amp = 0.0;
    int period = 40;
    double gain = 1.0;
    double gamma = 1.0;
};

struct SceneSpec {
    std::vector<BoardSpec> boards;
    std::vector<ScenePoint> points;
    LightingSpec lighting;
    double background = 40.0;

    static SceneSpec load(const std::string& path);
    void save(const std::string& path) const;
};

/// Procedural board intensity at board-local coordinates (meters from the
/// bottom-left board corner), before lighting. Smooth (C1) everywhere.
double board_texture(const BoardSpec& board, double a, double b);

struct RenderResult {
    GrayImage image;
    std::vector<std::int16_t> board_mask; // per pixel board index, -1 none
    std::vector<float> depth;             // camera depth per pixel, inf when empty
    // per board:
    std::vector<bool> quad_valid;           // all quad corners project in front
    std::vector<TextQuad> projected_quads;  // quad corner projections (px)
    std::vector<double> visible_fraction;   // visible px / rasterizable px
    std::vector<double> orientation_factor; // |cos| between view ray and normal
};

RenderResult render_frame(const SceneSpec& scene, const RigidTransform& pose,
                          const PinholeIntrinsics& intrinsics, int width, int height,
                          int frame_index = 0);

struct DetectionNoise {
    double corner_sigma_px = 0.0;
    double char_corruption_prob = 0.0;
    double dropout_prob = 0.0;
    double min_visible_fraction = 0.25;
    double min_area_px = 400.0;
};

std::vector<TextDetection> emit_detections(const RenderResult& frame, const SceneSpec& scene,
                                           const DetectionNoise& noise, std::uint64_t seed,
                                           int frame_index);

/// Ground-truth board id for each detection emitted by emit_detections with
/// the same arguments (parallel vector; -1 never occurs).
std::vector<int> detection_board_ids(const RenderResult& frame, const SceneSpec& scene,
                                     const DetectionNoise& noise, std::uint64_t seed,
                                     int frame_index);

enum class TrajectoryPreset { kWaypoints, kOrbit, kCorridor, kFastShake };

struct Waypoint {
    Vec3 position = Vec3::Zero();
    Quat orientation = Quat::Identity();
    double speed = 1.0; // m/s toward the next waypoint
};

struct TrajectorySpec {
    double rate_hz = 30.0;
    TrajectoryPreset preset = TrajectoryPreset::kWaypoints;
    std::vector<Waypoint> waypoints;

    // orbit
    Vec3 orbit_center = Vec3::Zero();
    double orbit_radius = 3.0;
    double orbit_height = 0.0;
    double orbit_revolutions = 1.0;
    double orbit_speed = 0.5;

    // corridor
    Vec3 corridor_start = Vec3::Zero();
    Vec3 corridor_end = Vec3(0, 0, 8);
    double corridor_speed = 0.5;
    double corridor_sway = 0.15;
    double corridor_sway_period = 4.0; // seconds
    bool corridor_out_and_back = false;
    double corridor_turn_seconds = 3.0;

    // fast shake
    Vec3 shake_center = Vec3::Zero();
    double shake_yaw_amp = 0.5;   // rad
    double shake_pitch_amp = 0.2; // rad
    double shake_period = 0.5;    // seconds
    double shake_seconds = 5.0;

    static TrajectorySpec load(const std::string& path);
    void save(const std::string& path) const;
};

struct TimedPose {
    double timestamp = 0.0;
    RigidTransform pose;
};

std::vector<TimedPose> generate_trajectory(const TrajectorySpec& spec);

} // namespace tslam

#endif
