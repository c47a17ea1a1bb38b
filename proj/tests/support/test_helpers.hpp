#ifndef TSLAM_TEST_HELPERS_HPP
#define TSLAM_TEST_HELPERS_HPP

#include "tslam/image.hpp"
#include "tslam/se3.hpp"

#include <random>

namespace tslam::testutil {

inline RigidTransform random_pose(std::mt19937& rng, double rot_scale = 0.5,
                                  double trans_scale = 1.0) {
    std::normal_distribution<double> n(0.0, 1.0);
    const Vec3 axis = Vec3(n(rng), n(rng), n(rng)).normalized();
    std::uniform_real_distribution<double> u(-rot_scale, rot_scale);
    const Quat q(Eigen::AngleAxisd(u(rng), axis));
    const Vec3 t(trans_scale * n(rng), trans_scale * n(rng), trans_scale * n(rng));
    return {q, t};
}

inline GrayImage random_image(std::mt19937& rng, int width, int height) {
    std::uniform_real_distribution<float> u(0.0f, 255.0f);
    GrayImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) img.at(x, y) = u(rng);
    return img;
}

// Smooth textured image: sum of random low-frequency cosines, good for
// sub-pixel tracking tests.
inline GrayImage smooth_texture(std::mt19937& rng, int width, int height, int waves = 24) {
    std::uniform_real_distribution<double> freq(0.02, 0.25);
    std::uniform_real_distribution<double> phase(0.0, 6.28318);
    std::uniform_real_distribution<double> amp(4.0, 18.0);
    std::vector<std::array<double, 5>> comps;
    for (int i = 0; i < waves; ++i) {
        comps.push_back({freq(rng), freq(rng), phase(rng), amp(rng), 0.0});
    }
    GrayImage img(width, height, 128.0f);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double v = 128.0;
            for (const auto& c : comps) v += c[3] * std::cos(c[0] * x + c[1] * y + c[2]);
            img.at(x, y) = static_cast<float>(std::clamp(v, 0.0, 255.0));
        }
    }
    return img;
}

} // namespace tslam::testutil

#endif
