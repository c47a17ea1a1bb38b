#ifndef TSLAM_CAMERA_HPP
#define TSLAM_CAMERA_HPP

#include "tslam/errors.hpp"
#include "tslam/se3.hpp"

#include <cmath>

namespace tslam {

/// Point in normalized camera coordinates (z = 1 plane).
struct NormalizedPoint {
    double u = 0.0;
    double v = 0.0;

    NormalizedPoint() = default;
    NormalizedPoint(double u_, double v_) : u(u_), v(v_) {}
    explicit NormalizedPoint(const Vec2& m) : u(m.x()), v(m.y()) {}

    Vec2 vec() const { return {u, v}; }
    Vec3 lift() const { return {u, v, 1.0}; }
};

/// Pinhole model for pre-rectified images. No distortion.
struct PinholeIntrinsics {
    double fx = 0.0;
    double fy = 0.0;
    double cx = 0.0;
    double cy = 0.0;

    PinholeIntrinsics() = default;
    PinholeIntrinsics(double fx_, double fy_, double cx_, double cy_)
        : fx(fx_), fy(fy_), cx(cx_), cy(cy_) {
        if (fx <= 0.0 || fy <= 0.0) throw DatasetInvalid("focal length must be positive");
    }

    Vec2 to_pixel(const NormalizedPoint& m) const {
        return {fx * m.u + cx, fy * m.v + cy};
    }
    NormalizedPoint to_normalized(const Vec2& px) const {
        return {(px.x() - cx) / fx, (px.y() - cy) / fy};
    }

    // Intrinsics of pyramid level l under 2x2 box downsampling; pixel centers
    // map as x_l = (x + 0.5) / 2^l - 0.5.
    PinholeIntrinsics at_level(int level) const {
        const double s = static_cast<double>(1 << level);
        PinholeIntrinsics out;
        out.fx = fx / s;
        out.fy = fy / s;
        out.cx = (cx + 0.5) / s - 0.5;
        out.cy = (cy + 0.5) / s - 0.5;
        return out;
    }

    Mat3 matrix() const {
        Mat3 k = Mat3::Identity();
        k(0, 0) = fx;
        k(1, 1) = fy;
        k(0, 2) = cx;
        k(1, 2) = cy;
        return k;
    }
};

} // namespace tslam

#endif
