#include "tslam/photometry.hpp"

#include <cmath>

namespace tslam {

NormalizedPatch normalize_patch(const std::vector<double>& raw) {
    const int n = static_cast<int>(raw.size());
    if (n < 8) throw DegeneratePatch("patch needs at least 8 samples");
    double mean = 0.0;
    for (double v : raw) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : raw) var += (v - mean) * (v - mean);
    const double sigma = std::sqrt(var / n);
    if (sigma < 1e-6) throw DegeneratePatch("constant patch");
    NormalizedPatch out;
    out.raw_mean = mean;
    out.raw_sigma = sigma;
    out.values.resize(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) out.values[i] = (raw[i] - mean) / sigma;
    return out;
}

double zncc(const NormalizedPatch& a, const NormalizedPatch& b) {
    if (a.size() != b.size()) throw SizeMismatch("patch sizes differ");
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) s += a.values[i] * b.values[i];
    return s / a.size();
}

double normalized_ssd(const NormalizedPatch& a, const NormalizedPatch& b) {
    if (a.size() != b.size()) throw SizeMismatch("patch sizes differ");
    double s = 0.0;
    for (int i = 0; i < a.size(); ++i) {
        const double d = a.values[i] - b.values[i];
        s += d * d;
    }
    return s;
}

TextPhotoEval text_photometric_error(const RepresentativePixelSet& pixels,
                                     const ImagePyramid& host_pyramid,
                                     const ImagePyramid& target_pyramid,
                                     const RigidTransform& t_host,
                                     const RigidTransform& t_target, const ThetaParams& theta,
                                     const PinholeIntrinsics& intrinsics, int level,
                                     const TextPhotoOptions& options) {
    const std::vector<Vec2>& pts = pixels.pixels[level];
    if (pts.empty()) throw TextNotVisible("no representative pixels at level");

    const GrayImage& host_img = host_pyramid.level(level);
    const GrayImage& target_img = target_pyramid.level(level);
    const PinholeIntrinsics intr = intrinsics.at_level(level);

    const RigidTransform rel = relative_pose(t_host, t_target);
    const Mat3 rot = rel.rotation_matrix();
    const Vec3 trans = rel.translation;
    const Mat3 h = rot + trans * theta.theta.transpose();

    struct Sample {
        int pixel;
        double host_value;
        Vec3 m_tilde;
        double rho;
        Vec3 g;
        Vec2 target_px;
        double target_value;
        bool valid;
    };
    std::vector<Sample> samples;
    samples.reserve(pts.size() * kResidualPattern.size());

    double host_sum = 0.0;
    int visible_centers = 0;
    for (size_t i = 0; i < pts.size(); ++i) {
        bool center_ok = false;
        for (size_t k = 0; k < kResidualPattern.size(); ++k) {
            const Vec2 px = pts[i] + Vec2(kResidualPattern[k][0], kResidualPattern[k][1]);
            if (!in_sampling_bounds(host_img, px.x(), px.y())) continue;
            Sample s;
            s.pixel = static_cast<int>(i);
            s.host_value = sample_bilinear(host_img, px.x(), px.y());
            s.m_tilde = intr.to_normalized(px).lift();
            s.rho = theta.theta.dot(s.m_tilde);
            s.g = h * s.m_tilde;
            s.valid = s.rho > 1e-9 && s.g.z() > 1e-9;
            if (s.valid) {
                const Vec2 tpx = intr.to_pixel({s.g.x() / s.g.z(), s.g.y() / s.g.z()});
                s.target_px = tpx;
                s.valid = in_sampling_bounds(target_img, tpx.x(), tpx.y(), 2.0);
                if (s.valid) s.target_value = sample_bilinear(target_img, tpx.x(), tpx.y());
            }
            if (s.valid && k == 0) center_ok = true;
            host_sum += s.host_value;
            samples.push_back(s);
        }
        if (center_ok) ++visible_centers;
    }
    if (samples.empty()) throw TextNotVisible("entire text pattern outside host image");

    TextPhotoEval eval;
    eval.total_pixels = static_cast<int>(pts.size());
    eval.visible_pixels = visible_centers;
    if (2 * visible_centers < eval.total_pixels) {
        throw TextNotVisible("more than half of the representative pixels are not visible");
    }

    // Host normalization covers the full host-side pattern set.
    const double host_mean = host_sum / samples.size();
    double host_var = 0.0;
    for (const Sample& s : samples) host_var += (s.host_value - host_mean) * (s.host_value - host_mean);
    const double host_sigma = std::sqrt(host_var / samples.size());
    if (host_sigma < 1e-6) throw DegeneratePatch("constant host text patch");

    // Target normalization covers the currently projected set unless frozen.
    PatchStats tstats;
    int n_valid = 0;
    if (options.fixed_target_stats) {
        tstats = *options.fixed_target_stats;
        for (const Sample& s : samples) n_valid += s.valid ? 1 : 0;
    } else {
        double tsum = 0.0;
        for (const Sample& s : samples) {
            if (!s.valid) continue;
            tsum += s.target_value;
            ++n_valid;
        }
        if (n_valid == 0) throw TextNotVisible("no valid projections");
        tstats.mean = tsum / n_valid;
        double tvar = 0.0;
        for (const Sample& s : samples) {
            if (s.valid) tvar += (s.target_value - tstats.mean) * (s.target_value - tstats.mean);
        }
        tstats.sigma = std::sqrt(tvar / n_valid);
        if (tstats.sigma < 1e-6) throw DegeneratePatch("constant projected target patch");
    }
    eval.target_stats = tstats;
    eval.dropped_samples = static_cast<int>(samples.size()) - n_valid;

    eval.residuals.reserve(n_valid);
    eval.pixel_of_residual.reserve(n_valid);
    eval.j_target.resize(n_valid, 6);
    eval.j_theta.resize(n_valid, 3);
    if (options.with_host_jacobian) eval.j_host.resize(n_valid, 6);

    // ZNCC between host and target over the valid pairs, both renormalized
    // over that subset (used by the tracking selection gate).
    double zh = 0.0, zt = 0.0, zhh = 0.0, ztt = 0.0, zht = 0.0;

    int row = 0;
    for (const Sample& s : samples) {
        if (!s.valid) continue;
        const double host_n = (s.host_value - host_mean) / host_sigma;
        const double target_n = (s.target_value - tstats.mean) / tstats.sigma;
        const double r = host_n - target_n;
        eval.residuals.push_back(r);
        eval.pixel_of_residual.push_back(s.pixel);
        eval.cost += options.huber(r * r);

        zh += s.host_value;
        zt += s.target_value;
        zhh += s.host_value * s.host_value;
        ztt += s.target_value * s.target_value;
        zht += s.host_value * s.target_value;

        const Vec2 grad = bilinear_gradient(target_img, s.target_px.x(), s.target_px.y());
        const double gz = s.g.z();
        Eigen::Matrix<double, 2, 3> dproj;
        dproj << 1.0 / gz, 0.0, -s.g.x() / (gz * gz),
                 0.0, 1.0 / gz, -s.g.y() / (gz * gz);
        // row vector: d target_n / d g
        const Eigen::RowVector3d a =
            (grad.transpose() * Eigen::DiagonalMatrix<double, 2>(intr.fx, intr.fy) * dproj) /
            tstats.sigma;

        // dr/dx = -a * dg/dx
        eval.j_theta.row(row) = -(a * trans) * s.m_tilde.transpose();
        eval.j_target.row(row).head<3>() = s.rho * a;
        eval.j_target.row(row).tail<3>() = -a * skew(s.g);
        if (options.with_host_jacobian) {
            eval.j_host.row(row).head<3>() = -s.rho * (a * rot);
            eval.j_host.row(row).tail<3>() = a * rot * skew(s.m_tilde);
        }
        ++row;
    }
    if (n_valid > 0) {
        const double mh = zh / n_valid;
        const double mt = zt / n_valid;
        const double sh = std::sqrt(std::max(0.0, zhh / n_valid - mh * mh));
        const double st = std::sqrt(std::max(0.0, ztt / n_valid - mt * mt));
        if (sh > 1e-9 && st > 1e-9) {
            eval.zncc_host_target = (zht / n_valid - mh * mt) / (sh * st);
        }
    }
    return eval;
}

} // namespace tslam
