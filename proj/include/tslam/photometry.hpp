#ifndef TSLAM_PHOTOMETRY_HPP
#define TSLAM_PHOTOMETRY_HPP

#include "tslam/camera.hpp"
#include "tslam/features.hpp"
#include "tslam/geometry.hpp"
#include "tslam/image.hpp"

#include <optional>
#include <vector>

namespace tslam {

/// Zero-mean, unit-power intensity samples over a pixel set. Sigma uses the
/// population (1/N) convention so that sum(values^2) == N.
struct NormalizedPatch {
    std::vector<double> values;
    double raw_mean = 0.0;
    double raw_sigma = 0.0;
    int size() const { return static_cast<int>(values.size()); }
};

NormalizedPatch normalize_patch(const std::vector<double>& raw);

/// (1/N) sum(a~ * b~), in [-1, 1].
double zncc(const NormalizedPatch& a, const NormalizedPatch& b);

/// sum((a~ - b~)^2) == 2N (1 - zncc).
double normalized_ssd(const NormalizedPatch& a, const NormalizedPatch& b);

/// Robust loss on the squared residual: phi(x) = x for x <= delta^2,
/// else 2 delta sqrt(x) - delta^2.
struct HuberLoss {
    double delta = 1.0;
    explicit HuberLoss(double d) : delta(d) {
        if (!(d > 0.0)) throw ConfigInvalid("huber delta must be positive");
    }
    HuberLoss() = default;

    double operator()(double squared) const {
        const double d2 = delta * delta;
        if (squared <= d2) return squared;
        return 2.0 * delta * std::sqrt(squared) - d2;
    }
    /// d phi / d x at x = squared residual (the IRLS weight).
    double weight(double squared) const {
        const double d2 = delta * delta;
        if (squared <= d2) return 1.0;
        return delta / std::sqrt(squared);
    }
};

struct PatchStats {
    double mean = 0.0;
    double sigma = 1.0;
};

struct TextPhotoOptions {
    HuberLoss huber{0.75};
    bool with_host_jacobian = false;
    // When set, the target patch is normalized with these frozen statistics
    // instead of the currently projected pixel set.
    std::optional<PatchStats> fixed_target_stats;
};

/// One residual per valid sample of the eight-pixel patterns.
struct TextPhotoEval {
    double cost = 0.0;                                   // sum of huber(r^2)
    std::vector<double> residuals;
    std::vector<int> pixel_of_residual;                  // representative pixel index
    Eigen::Matrix<double, Eigen::Dynamic, 6> j_target;   // d r / d xi_target
    Eigen::Matrix<double, Eigen::Dynamic, 3> j_theta;    // d r / d theta
    Eigen::Matrix<double, Eigen::Dynamic, 6> j_host;     // d r / d xi_host (optional)
    PatchStats target_stats;
    double zncc_host_target = 0.0;
    int dropped_samples = 0;
    int visible_pixels = 0;
    int total_pixels = 0;
};

/// Photometric residuals of one text object at one pyramid level, with
/// analytic Jacobians chained through the plane homography and bilinear
/// sampling. Pose increments are right-multiplied: T <- T * exp(xi).
TextPhotoEval text_photometric_error(const RepresentativePixelSet& pixels,
                                     const ImagePyramid& host_pyramid,
                                     const ImagePyramid& target_pyramid,
                                     const RigidTransform& t_host,
                                     const RigidTransform& t_target, const ThetaParams& theta,
                                     const PinholeIntrinsics& intrinsics, int level,
                                     const TextPhotoOptions& options = {});

} // namespace tslam

#endif
