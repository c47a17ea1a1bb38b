#ifndef TSLAM_MAP_HPP
#define TSLAM_MAP_HPP

#include "tslam/camera.hpp"
#include "tslam/features.hpp"
#include "tslam/geometry.hpp"
#include "tslam/image.hpp"
#include "tslam/se3.hpp"
#include "tslam/semantics.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tslam {

/// Host-anchored inverse-depth point landmark.
struct MapPoint {
    int id = -1;
    int host_kf = -1;
    NormalizedPoint host_coords;
    double inverse_depth = 0.0;
    std::vector<std::pair<int, Vec2>> observations; // (keyframe id, pixel)
    bool outlier = false;
    BinaryDescriptor descriptor{};
    bool has_descriptor = false;

    bool observed_by(int kf_id) const {
        for (const auto& [kf, px] : observations)
            if (kf == kf_id) return true;
        return false;
    }
    const Vec2* observation_in(int kf_id) const {
        for (const auto& [kf, px] : observations)
            if (kf == kf_id) return &px;
        return nullptr;
    }
};

enum class TextStatus { kImmature, kInMap, kBad };

/// One text detection consumed from a dataset or the simulator.
struct TextDetection {
    TextQuad quad;
    double confidence = 1.0;
    std::string text;
};

struct TextFrameObservation {
    int kf_id = -1;
    TextQuad quad;
    std::string text;
    double confidence = 1.0;
};

/// Planar, bounded, semantically labeled landmark anchored to a host keyframe.
struct TextObject {
    int id = -1;
    int host_kf = -1;
    ThetaParams theta;
    bool has_theta = false;
    TextQuad quad; // host-image pixel coordinates
    RepresentativePixelSet pixels;
    bool has_pixels = false;
    SemanticState semantic;
    TextStatus status = TextStatus::kImmature;

    int frames_good = 0;
    int frames_bad = 0;
    int observed_frames = 0;
    double last_normal_change_deg = 180.0;
    bool outlier_in_last_frame = false;

    // seed corners in the host image tracked forward for theta bootstrap
    std::vector<Vec2> seed_host;
    std::vector<Vec2> seed_current;
    std::vector<bool> seed_alive;

    std::vector<TextFrameObservation> keyframe_observations;

    bool observed_by(int kf_id) const {
        for (const auto& o : keyframe_observations)
            if (o.kf_id == kf_id) return true;
        return false;
    }

    /// Unit plane normal in world coordinates.
    Vec3 world_normal(const RigidTransform& host_pose) const {
        const auto [n_host, d_host] = theta.plane();
        (void)d_host;
        return host_pose.rotation_matrix() * n_host;
    }

    /// Plane (n, d) in world coordinates with unit normal, n.p + d = 0.
    std::pair<Vec3, double> world_plane(const RigidTransform& host_pose) const {
        const auto [n_host, d_host] = theta.plane();
        const Vec3 n_world = host_pose.rotation_matrix() * n_host;
        const double d_world = d_host - n_world.dot(host_pose.translation);
        return {n_world, d_world};
    }

    /// 3D corners of the text quad in world coordinates.
    std::array<Vec3, 4> world_corners(const RigidTransform& host_pose,
                                      const PinholeIntrinsics& intr) const {
        std::array<Vec3, 4> out;
        for (size_t i = 0; i < 4; ++i) {
            const NormalizedPoint m = intr.to_normalized(quad.corners[i]);
            const double rho = inverse_depth(theta, m);
            out[i] = host_pose * (m.lift() / rho);
        }
        return out;
    }

    Vec3 world_center(const RigidTransform& host_pose, const PinholeIntrinsics& intr) const {
        const auto corners = world_corners(host_pose, intr);
        return (corners[0] + corners[1] + corners[2] + corners[3]) / 4.0;
    }
};

struct Keyframe {
    int id = -1;
    double timestamp = 0.0;
    RigidTransform pose;
    ImagePyramid pyramid;
    std::string image_path;
    std::vector<std::pair<int, Vec2>> point_observations; // (map point id, pixel)
    std::vector<int> text_observations;                    // text ids seen here
    std::vector<TextDetection> detections;
    std::map<int, int> covisibility; // keyframe id -> shared landmark count
    int parent = -1;                 // spanning-tree edge toward older keyframes
};

class Map {
public:
    std::map<int, Keyframe> keyframes;
    std::map<int, MapPoint> points;
    std::map<int, TextObject> texts;

    int add_keyframe(Keyframe kf);
    int add_point(MapPoint point);
    int add_text(TextObject text);

    Keyframe& kf(int id) { return keyframes.at(id); }
    const Keyframe& kf(int id) const { return keyframes.at(id); }

    void add_point_observation(int point_id, int kf_id, const Vec2& pixel);

    /// Recomputes covisibility counts (shared points and texts) for one keyframe
    /// and assigns its spanning-tree parent.
    void update_covisibility(int kf_id);

    /// Keyframe ids of the local window around (and including) kf_id: the
    /// strongest covisible neighbors first, capped at window_size.
    std::vector<int> local_window(int kf_id, int window_size) const;

    std::vector<int> covisible_keyframes(int kf_id) const;

    int last_keyframe_id() const {
        return keyframes.empty() ? -1 : keyframes.rbegin()->first;
    }

    Vec3 point_world(const MapPoint& p) const {
        return kf(p.host_kf).pose * (p.host_coords.lift() / p.inverse_depth);
    }

private:
    int next_kf_id_ = 0;
    int next_point_id_ = 0;
    int next_text_id_ = 0;
};

} // namespace tslam

#endif
