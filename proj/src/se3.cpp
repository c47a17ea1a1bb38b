#include "tslam/se3.hpp"

#include <cmath>

namespace tslam {

Mat3 so3_exp(const Vec3& phi) {
    const double angle = phi.norm();
    if (angle < 1e-12) {
        return Mat3::Identity() + skew(phi);
    }
    const Vec3 axis = phi / angle;
    return Eigen::AngleAxisd(angle, axis).toRotationMatrix();
}

Vec3 so3_log(const Mat3& r) {
    Eigen::AngleAxisd aa(r);
    return aa.angle() * aa.axis();
}

RigidTransform se3_exp(const Vec6& xi) {
    const Vec3 nu = xi.head<3>();
    const Vec3 phi = xi.tail<3>();
    const double angle = phi.norm();
    const Mat3 r = so3_exp(phi);
    Mat3 v;
    if (angle < 1e-9) {
        v = Mat3::Identity() + 0.5 * skew(phi);
    } else {
        const Mat3 s = skew(phi);
        v = Mat3::Identity() + (1.0 - std::cos(angle)) / (angle * angle) * s +
            (angle - std::sin(angle)) / (angle * angle * angle) * (s * s);
    }
    return RigidTransform(r, v * nu);
}

Vec6 se3_log(const RigidTransform& t) {
    const Vec3 phi = so3_log(t.rotation_matrix());
    const double angle = phi.norm();
    Mat3 v_inv;
    if (angle < 1e-9) {
        v_inv = Mat3::Identity() - 0.5 * skew(phi);
    } else {
        const Mat3 s = skew(phi);
        const double half = 0.5 * angle;
        const double half_cot = half * std::cos(half) / std::sin(half);
        v_inv = Mat3::Identity() - 0.5 * s + (1.0 - half_cot) / (angle * angle) * (s * s);
    }
    Vec6 xi;
    xi.head<3>() = v_inv * t.translation;
    xi.tail<3>() = phi;
    return xi;
}

} // namespace tslam
