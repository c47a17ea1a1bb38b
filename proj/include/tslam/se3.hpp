#ifndef TSLAM_SE3_HPP
#define TSLAM_SE3_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tslam {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;
using Quat = Eigen::Quaterniond;

inline Mat3 skew(const Vec3& v) {
    Mat3 s;
    s << 0, -v.z(), v.y(),
         v.z(), 0, -v.x(),
        -v.y(), v.x(), 0;
    return s;
}

/// Rigid body transform. Poses are stored frame-to-world: p_world = R p_cam + t.
struct RigidTransform {
    Quat rotation{1.0, 0.0, 0.0, 0.0};
    Vec3 translation{0.0, 0.0, 0.0};

    RigidTransform() = default;
    RigidTransform(const Quat& q, const Vec3& t) : rotation(q.normalized()), translation(t) {}
    RigidTransform(const Mat3& r, const Vec3& t) : rotation(Quat(r).normalized()), translation(t) {}

    static RigidTransform identity() { return {}; }

    Mat3 rotation_matrix() const { return rotation.toRotationMatrix(); }

    RigidTransform inverse() const {
        const Quat qi = rotation.conjugate();
        return {qi, -(qi * translation)};
    }

    RigidTransform operator*(const RigidTransform& rhs) const {
        return {rotation * rhs.rotation, rotation * rhs.translation + translation};
    }

    Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }

    Mat4 matrix() const {
        Mat4 m = Mat4::Identity();
        m.topLeftCorner<3, 3>() = rotation_matrix();
        m.topRightCorner<3, 1>() = translation;
        return m;
    }
};

/// Relative pose mapping host-frame coordinates into the target frame: T = T_t^-1 T_h.
inline RigidTransform relative_pose(const RigidTransform& host, const RigidTransform& target) {
    return target.inverse() * host;
}

Mat3 so3_exp(const Vec3& phi);
Vec3 so3_log(const Mat3& r);

/// xi = (translation part nu, rotation part phi).
RigidTransform se3_exp(const Vec6& xi);
Vec6 se3_log(const RigidTransform& t);

/// Similarity transform: p' = s * (R p) + t.
struct Sim3Transform {
    double scale = 1.0;
    Quat rotation{1.0, 0.0, 0.0, 0.0};
    Vec3 translation{0.0, 0.0, 0.0};

    static Sim3Transform identity() { return {}; }
    static Sim3Transform from_rigid(const RigidTransform& t, double s = 1.0) {
        Sim3Transform out;
        out.scale = s;
        out.rotation = t.rotation;
        out.translation = t.translation;
        return out;
    }

    Vec3 operator*(const Vec3& p) const { return scale * (rotation * p) + translation; }

    Sim3Transform operator*(const Sim3Transform& rhs) const {
        Sim3Transform out;
        out.scale = scale * rhs.scale;
        out.rotation = rotation * rhs.rotation;
        out.translation = scale * (rotation * rhs.translation) + translation;
        return out;
    }

    Sim3Transform inverse() const {
        Sim3Transform out;
        out.scale = 1.0 / scale;
        out.rotation = rotation.conjugate();
        out.translation = -out.scale * (out.rotation * translation);
        return out;
    }
};

} // namespace tslam

#endif
