#ifndef TSLAM_CONFIG_HPP
#define TSLAM_CONFIG_HPP

#include "tslam/errors.hpp"

#include <cstdint>
#include <string>

namespace tslam {

/// Engine configuration, read from a flat key=value text file. Unknown keys
/// are rejected so typos surface immediately.
struct Config {
    // pyramid / frontend
    int pyramid_levels = 3;           // pyramid.levels (fixed at 3)
    int klt_window = 21;              // klt.window
    double corner_threshold = 20.0;   // corner.threshold
    int corner_grid = 24;             // corner.grid
    int max_features = 600;           // track.max_features

    // robust losses
    double huber_text = 0.75;         // huber.text (normalized intensity)
    double huber_point = 2.0;         // huber.point (px)

    // tracking
    double point_chi2_gate = 5.991;   // track.point_chi2 (px^2, 2-dof 95%)
    double text_outlier_ratio = 0.99; // track.text_outlier_ratio
    double zncc_gate = 0.1;           // track.zncc_min
    double perpendicular_deg = 10.0;  // track.perpendicular_deg
    double sigma_rep = 1.0;           // weight.sigma_rep (px)
    double sigma_photo = 0.15;        // weight.sigma_photo (normalized units)
    int min_tracking_inliers = 8;     // track.min_inliers

    // keyframe policy
    double kf_min_ratio = 0.7;        // kf.min_ratio
    double kf_max_flow = 40.0;        // kf.max_flow (px)
    int kf_max_gap = 15;              // kf.max_gap (frames)

    // text lifecycle
    int text_min_obs = 4;             // text.min_obs
    double text_normal_max_deg = 25.0;// text.normal_max_deg
    int cull_max_bad = 40;            // cull.max_bad
    double cull_bad_ratio = 0.9;      // cull.bad_ratio
    int cull_min_good = 2;            // cull.min_good (#F_good must exceed this)

    // bundle adjustment
    int ba_window = 7;                // ba.window
    int ba_iterations = 15;           // ba.iterations
    double lm_lambda_init = 1e-4;     // lm.lambda_init
    double lm_lambda_up = 10.0;       // lm.lambda_up
    double lm_lambda_down = 0.3;      // lm.lambda_down

    // loop closing
    bool loop_enabled = true;         // loop.enabled
    int loop_scene_min = 2;           // loop.scene_min (2 indoor, 3 outdoor)
    int loop_min_inliers = 20;        // loop.min_inliers
    int loop_top_k = 10;              // loop.top_k
    int loop_sim3_min_inliers = 12;   // loop.sim3_min_inliers
    double loop_search_window = 10.0; // loop.search_window (px)
    int loop_hamming_max = 64;        // loop.hamming_max

    // evaluation / misc
    double loc_gt_radius = 2.0;       // loc.gt_radius (m)
    std::uint64_t seed = 1;           // seed

    double lambda_weight() const { return sigma_rep / sigma_photo; }

    static Config load(const std::string& path);
    void save(const std::string& path) const;
    void set(const std::string& key, const std::string& value);
};

} // namespace tslam

#endif
