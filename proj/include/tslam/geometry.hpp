#ifndef TSLAM_GEOMETRY_HPP
#define TSLAM_GEOMETRY_HPP

#include "tslam/camera.hpp"
#include "tslam/errors.hpp"
#include "tslam/se3.hpp"

#include <array>
#include <utility>
#include <vector>

namespace tslam {

/// Compact three-parameter text plane, anchored to its host frame.
/// The plane n^T p + d = 0 is encoded as theta = -n / d, so the inverse
/// depth of a plane point with normalized coordinates m is theta . (u, v, 1).
struct ThetaParams {
    Vec3 theta{0.0, 0.0, 0.0};

    ThetaParams() = default;
    explicit ThetaParams(const Vec3& t) : theta(t) {}

    /// Unit plane normal and signed distance in the host frame.
    std::pair<Vec3, double> plane() const {
        const double n = theta.norm();
        if (n < 1e-12) throw DegenerateConfiguration("theta has zero norm");
        return {theta / n, -1.0 / n};
    }
};

/// Quadrilateral text boundary in host-image pixel coordinates, CCW order.
struct TextQuad {
    std::array<Vec2, 4> corners{};

    TextQuad() = default;
    explicit TextQuad(const std::array<Vec2, 4>& c) : corners(c) {}

    double area() const;
    bool contains(const Vec2& px) const;
    Vec2 centroid() const;
    /// Axis-aligned bounding box (min, max).
    std::pair<Vec2, Vec2> bounding_box() const;
    TextQuad scaled(double s) const;
};

/// Intersection-over-union of two convex quads, via polygon clipping.
double quad_iou(const TextQuad& a, const TextQuad& b);

/// rho = theta . (u, v, 1). Positive iff the plane point is in front of the host camera.
inline double inverse_depth(const ThetaParams& theta, const NormalizedPoint& m) {
    return theta.theta.dot(m.lift());
}

/// Least-squares theta from stacked inverse-depth samples. Needs >= 3
/// non-collinear points; rank checked by relative SVD cutoff 1e-8.
ThetaParams theta_from_inverse_depths(
    const std::vector<std::pair<NormalizedPoint, double>>& samples);

/// H = R + t theta^T with (R, t) from T = T_t^-1 T_h.
Mat3 text_homography(const RigidTransform& t_host, const RigidTransform& t_target,
                     const ThetaParams& theta);

/// Dehomogenized H m. Throws BehindCamera when the projected depth is non-positive.
NormalizedPoint project_text_point(const NormalizedPoint& m, const RigidTransform& t_host,
                                   const RigidTransform& t_target, const ThetaParams& theta);

/// Pixel-space variant: intrinsics applied on both ends.
Vec2 project_text_pixel(const Vec2& px, const PinholeIntrinsics& intr,
                        const RigidTransform& t_host, const RigidTransform& t_target,
                        const ThetaParams& theta);

/// Two-view theta bootstrap from point correspondences m <-> m' with known
/// relative rotation R and translation t (host to target). Each pair
/// contributes the rank-1 system [m']_x t m^T theta = -[m']_x R m.
ThetaParams init_theta_two_view(
    const std::vector<std::pair<NormalizedPoint, NormalizedPoint>>& correspondences,
    const Mat3& rotation, const Vec3& translation);

/// Host-frame 3D point from normalized coordinates and inverse depth.
Vec3 point_backproject(const NormalizedPoint& m, double rho);

/// Projects a host-anchored inverse-depth point into the target frame.
NormalizedPoint point_project(const NormalizedPoint& m, double rho,
                              const RigidTransform& t_host, const RigidTransform& t_target);

} // namespace tslam

#endif
