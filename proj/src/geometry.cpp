#include "tslam/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace tslam {

namespace {
constexpr double kRankCutoff = 1e-8;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double polygon_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        a += cross2(poly[i], poly[(i + 1) % n]);
    }
    return 0.5 * a;
}

// Sutherland-Hodgman clip of subject polygon against convex clip polygon (CCW).
std::vector<Vec2> clip_polygon(std::vector<Vec2> subject, const std::vector<Vec2>& clip) {
    for (size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
        const Vec2 a = clip[i];
        const Vec2 b = clip[(i + 1) % clip.size()];
        const Vec2 edge = b - a;
        std::vector<Vec2> out;
        const size_t n = subject.size();
        for (size_t j = 0; j < n; ++j) {
            const Vec2 p = subject[j];
            const Vec2 q = subject[(j + 1) % n];
            const bool p_in = cross2(edge, p - a) >= 0.0;
            const bool q_in = cross2(edge, q - a) >= 0.0;
            if (p_in) out.push_back(p);
            if (p_in != q_in) {
                const double denom = cross2(edge, q - p);
                if (std::abs(denom) > 1e-15) {
                    const double t = cross2(edge, a - p) / denom;
                    out.push_back(p + t * (q - p));
                }
            }
        }
        subject = std::move(out);
    }
    return subject;
}

std::vector<Vec2> quad_as_ccw(const TextQuad& q) {
    std::vector<Vec2> poly(q.corners.begin(), q.corners.end());
    if (polygon_area(poly) < 0.0) std::reverse(poly.begin(), poly.end());
    return poly;
}
} // namespace

double TextQuad::area() const {
    std::vector<Vec2> poly(corners.begin(), corners.end());
    return std::abs(polygon_area(poly));
}

bool TextQuad::contains(const Vec2& px) const {
    const std::vector<Vec2> poly = quad_as_ccw(*this);
    for (size_t i = 0; i < 4; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % 4];
        if (cross2(b - a, px - a) < 0.0) return false;
    }
    return true;
}

Vec2 TextQuad::centroid() const {
    Vec2 c = Vec2::Zero();
    for (const Vec2& p : corners) c += p;
    return c / 4.0;
}

std::pair<Vec2, Vec2> TextQuad::bounding_box() const {
    Vec2 lo = corners[0];
    Vec2 hi = corners[0];
    for (const Vec2& p : corners) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return {lo, hi};
}

TextQuad TextQuad::scaled(double s) const {
    TextQuad out;
    for (size_t i = 0; i < 4; ++i) out.corners[i] = corners[i] * s;
    return out;
}

double quad_iou(const TextQuad& a, const TextQuad& b) {
    const std::vector<Vec2> pa = quad_as_ccw(a);
    const std::vector<Vec2> pb = quad_as_ccw(b);
    const std::vector<Vec2> inter = clip_polygon(pa, pb);
    if (inter.size() < 3) return 0.0;
    const double ai = std::abs(polygon_area(inter));
    const double au = a.area() + b.area() - ai;
    return au > 0.0 ? ai / au : 0.0;
}

ThetaParams theta_from_inverse_depths(
    const std::vector<std::pair<NormalizedPoint, double>>& samples) {
    if (samples.size() < 3) {
        throw DegenerateConfiguration("need at least 3 inverse-depth samples");
    }
    MatX a(samples.size(), 3);
    VecX b(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) {
        a.row(i) = samples[i].first.lift().transpose();
        b(i) = samples[i].second;
    }
    Eigen::JacobiSVD<MatX> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VecX sv = svd.singularValues();
    if (sv(2) < kRankCutoff * sv(0)) {
        throw DegenerateConfiguration("collinear inverse-depth samples");
    }
    return ThetaParams(svd.solve(b));
}

Mat3 text_homography(const RigidTransform& t_host, const RigidTransform& t_target,
                     const ThetaParams& theta) {
    const RigidTransform rel = relative_pose(t_host, t_target);
    return rel.rotation_matrix() + rel.translation * theta.theta.transpose();
}

NormalizedPoint project_text_point(const NormalizedPoint& m, const RigidTransform& t_host,
                                   const RigidTransform& t_target, const ThetaParams& theta) {
    const Mat3 h = text_homography(t_host, t_target, theta);
    const Vec3 g = h * m.lift();
    if (g.z() <= 0.0) throw BehindCamera("projected text point has non-positive depth");
    return {g.x() / g.z(), g.y() / g.z()};
}

Vec2 project_text_pixel(const Vec2& px, const PinholeIntrinsics& intr,
                        const RigidTransform& t_host, const RigidTransform& t_target,
                        const ThetaParams& theta) {
    return intr.to_pixel(project_text_point(intr.to_normalized(px), t_host, t_target, theta));
}

ThetaParams init_theta_two_view(
    const std::vector<std::pair<NormalizedPoint, NormalizedPoint>>& correspondences,
    const Mat3& rotation, const Vec3& translation) {
    if (correspondences.size() < 3) {
        throw DegenerateConfiguration("need at least 3 correspondences");
    }
    if (translation.norm() < 1e-9) {
        throw ZeroBaseline("plane depth unobservable without parallax");
    }
    const auto n = static_cast<Eigen::Index>(correspondences.size());
    MatX a(3 * n, 3);
    VecX b(3 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Vec3 m = correspondences[i].first.lift();
        const Vec3 mp = correspondences[i].second.lift();
        const Mat3 mpx = skew(mp);
        a.middleRows<3>(3 * i) = (mpx * translation) * m.transpose();
        b.segment<3>(3 * i) = -(mpx * rotation * m);
    }
    Eigen::JacobiSVD<MatX> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VecX sv = svd.singularValues();
    if (sv(2) < kRankCutoff * sv(0)) {
        throw DegenerateConfiguration("rank-deficient two-view theta system");
    }
    return ThetaParams(svd.solve(b));
}

Vec3 point_backproject(const NormalizedPoint& m, double rho) {
    if (!(rho > 0.0)) throw BehindCamera("inverse depth must be positive");
    return m.lift() / rho;
}

NormalizedPoint point_project(const NormalizedPoint& m, double rho,
                              const RigidTransform& t_host, const RigidTransform& t_target) {
    const Vec3 p = point_backproject(m, rho);
    const RigidTransform rel = relative_pose(t_host, t_target);
    const Vec3 pp = rel * p;
    if (pp.z() <= 0.0) throw BehindCamera("point projects behind the target camera");
    return {pp.x() / pp.z(), pp.y() / pp.z()};
}

} // namespace tslam
