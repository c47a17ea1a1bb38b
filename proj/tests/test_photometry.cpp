#include "tslam/photometry.hpp"

#include "support/test_helpers.hpp"

#include <doctest.h>

#include <random>

using namespace tslam;
using testutil::smooth_texture;

namespace {

std::vector<double> random_samples(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 255.0);
    std::vector<double> out(n);
    for (double& v : out) v = u(rng);
    return out;
}

// Pearson correlation with the population convention, computed from scratch.
double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    double ma = 0.0, mb = 0.0;
    for (int i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sa = 0.0, sb = 0.0, sab = 0.0;
    for (int i = 0; i < n; ++i) {
        sa += (a[i] - ma) * (a[i] - ma);
        sb += (b[i] - mb) * (b[i] - mb);
        sab += (a[i] - ma) * (b[i] - mb);
    }
    return sab / std::sqrt(sa * sb);
}

} // namespace

TEST_CASE("normalize_patch produces zero mean and unit power") {
    std::vector<double> two_level;
    for (int i = 0; i < 4; ++i) {
        two_level.push_back(0.0);
        two_level.push_back(2.0);
    }
    const NormalizedPatch p = normalize_patch(two_level);
    for (size_t i = 0; i < p.values.size(); i += 2) {
        CHECK(p.values[i] == doctest::Approx(-1.0));
        CHECK(p.values[i + 1] == doctest::Approx(1.0));
    }
    std::mt19937 rng(3);
    const std::vector<double> raw = random_samples(rng, 64);
    const NormalizedPatch q = normalize_patch(raw);
    double mean = 0.0, power = 0.0;
    for (double v : q.values) {
        mean += v;
        power += v * v;
    }
    CHECK(std::abs(mean / q.size()) < 1e-9);
    CHECK(std::abs(power - q.size()) < 1e-6);
}

TEST_CASE("normalization is affine invariant and rejects constant patches") {
    std::mt19937 rng(5);
    const std::vector<double> raw = random_samples(rng, 32);
    std::vector<double> affine(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) affine[i] = 1.7 * raw[i] + 11.0;
    const NormalizedPatch a = normalize_patch(raw);
    const NormalizedPatch b = normalize_patch(affine);
    for (int i = 0; i < a.size(); ++i) CHECK(std::abs(a.values[i] - b.values[i]) < 1e-9);
    CHECK_THROWS_AS(normalize_patch(std::vector<double>(16, 42.0)), DegeneratePatch);
    CHECK_THROWS_AS(normalize_patch({1.0, 2.0}), DegeneratePatch);
}

TEST_CASE("zncc limits and symmetry") {
    std::mt19937 rng(7);
    const std::vector<double> raw = random_samples(rng, 40);
    const NormalizedPatch a = normalize_patch(raw);
    std::vector<double> neg(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) neg[i] = -raw[i];
    const NormalizedPatch b = normalize_patch(neg);
    CHECK(zncc(a, a) == doctest::Approx(1.0));
    CHECK(zncc(a, b) == doctest::Approx(-1.0));
    const NormalizedPatch c = normalize_patch(random_samples(rng, 40));
    CHECK(zncc(a, c) == doctest::Approx(zncc(c, a)));
    CHECK_THROWS_AS(zncc(a, normalize_patch(random_samples(rng, 24))), SizeMismatch);
}

TEST_CASE("zncc equals a directly computed correlation") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<double> ra = random_samples(rng, 50);
        const std::vector<double> rb = random_samples(rng, 50);
        CHECK(std::abs(zncc(normalize_patch(ra), normalize_patch(rb)) - pearson(ra, rb)) < 1e-9);
    }
}

TEST_CASE("normalized ssd satisfies E = 2N(1 - zncc)") {
    std::mt19937 rng(13);
    const NormalizedPatch a = normalize_patch(random_samples(rng, 36));
    CHECK(normalized_ssd(a, a) == doctest::Approx(0.0));
    std::vector<double> neg(36);
    for (int i = 0; i < 36; ++i) neg[i] = -a.values[i];
    // b = -a: E = 4N from the identity with zncc = -1
    NormalizedPatch b = a;
    for (double& v : b.values) v = -v;
    CHECK(normalized_ssd(a, b) == doctest::Approx(4.0 * 36));
    for (int trial = 0; trial < 1000; ++trial) {
        const NormalizedPatch x = normalize_patch(random_samples(rng, 30));
        const NormalizedPatch y = normalize_patch(random_samples(rng, 30));
        const double e = normalized_ssd(x, y);
        CHECK(std::abs(e - 2.0 * 30 * (1.0 - zncc(x, y))) < 1e-6);
    }
}

TEST_CASE("huber loss is continuous and C1 at the knee") {
    const HuberLoss phi(0.75);
    const double knee = 0.75 * 0.75;
    CHECK(std::abs(phi(knee - 1e-9) - phi(knee + 1e-9)) < 1e-8);
    const double d_lo = (phi(knee) - phi(knee - 1e-6)) / 1e-6;
    const double d_hi = (phi(knee + 1e-6) - phi(knee)) / 1e-6;
    CHECK(std::abs(d_lo - d_hi) < 1e-4);
    CHECK(phi(0.25) == doctest::Approx(0.25));
    CHECK(phi(4.0) == doctest::Approx(2.0 * 0.75 * 2.0 - 0.5625));
    CHECK_THROWS_AS(HuberLoss(0.0), ConfigInvalid);
}

namespace {

struct PhotoFixture {
    PinholeIntrinsics intr{120.0, 120.0, 79.5, 59.5};
    ImagePyramid host;
    ImagePyramid target;
    RigidTransform t_host;
    RigidTransform t_target;
    ThetaParams theta{Vec3(0.02, -0.03, 0.5)}; // plane roughly 2 m ahead
    RepresentativePixelSet pixels;

    explicit PhotoFixture(std::mt19937& rng, double gain = 1.0, double bias = 0.0) {
        GrayImage base = smooth_texture(rng, 160, 120);
        host = build_pyramid(base);
        GrayImage mod(160, 120);
        for (int y = 0; y < 120; ++y)
            for (int x = 0; x < 160; ++x)
                mod.at(x, y) = static_cast<float>(gain * base.at(x, y) + bias);
        target = build_pyramid(mod);
        TextQuad quad;
        quad.corners = {Vec2(40, 30), Vec2(120, 30), Vec2(120, 90), Vec2(40, 90)};
        pixels = select_representative_pixels(quad, host);
    }
};

} // namespace

TEST_CASE("photometric error vanishes for an identical target") {
    std::mt19937 rng(17);
    PhotoFixture f(rng);
    for (int level = 0; level < 3; ++level) {
        const TextPhotoEval eval = text_photometric_error(
            f.pixels, f.host, f.target, f.t_host, f.t_target, f.theta, f.intr, level);
        CHECK(eval.cost < 1e-9);
        CHECK(eval.zncc_host_target > 0.999);
    }
}

TEST_CASE("photometric error is affine invariant") {
    std::mt19937 rng(19);
    PhotoFixture f(rng, 1.5, 20.0);
    const TextPhotoEval eval = text_photometric_error(f.pixels, f.host, f.target, f.t_host,
                                                      f.t_target, f.theta, f.intr, 0);
    CHECK(eval.cost < 1e-6);
}

TEST_CASE("photometric jacobians match central finite differences") {
    std::mt19937 rng(23);
    PhotoFixture f(rng);
    // small pose offset so residuals are non-trivial
    RigidTransform target = f.t_target;
    target.translation += Vec3(0.01, -0.008, 0.02);
    target.rotation = Quat(Eigen::AngleAxisd(0.01, Vec3::UnitY())) * target.rotation;

    TextPhotoOptions opts;
    opts.with_host_jacobian = true;
    const TextPhotoEval base = text_photometric_error(f.pixels, f.host, f.target, f.t_host,
                                                      target, f.theta, f.intr, 0, opts);
    // freeze target normalization so the finite differences probe exactly the
    // function the jacobians differentiate
    TextPhotoOptions frozen;
    frozen.fixed_target_stats = base.target_stats;

    const double h = 1e-6;
    auto residuals_at = [&](const RigidTransform& th, const RigidTransform& tt,
                            const ThetaParams& theta) {
        return text_photometric_error(f.pixels, f.host, f.target, th, tt, theta, f.intr, 0,
                                      frozen)
            .residuals;
    };

    int rows_checked = 0;
    for (int k = 0; k < 6; ++k) {
        Vec6 xi = Vec6::Zero();
        xi(k) = h;
        const auto plus = residuals_at(f.t_host, target * se3_exp(xi), f.theta);
        xi(k) = -h;
        const auto minus = residuals_at(f.t_host, target * se3_exp(xi), f.theta);
        REQUIRE(plus.size() == base.residuals.size());
        for (size_t r = 0; r < base.residuals.size(); ++r) {
            const double fd = (plus[r] - minus[r]) / (2.0 * h);
            const double an = base.j_target(static_cast<Eigen::Index>(r), k);
            if (std::abs(fd) > 1e-3) {
                CHECK(std::abs(an - fd) / std::max(1.0, std::abs(fd)) < 1e-4);
                ++rows_checked;
            }
        }
    }
    for (int k = 0; k < 3; ++k) {
        Vec3 dt = Vec3::Zero();
        dt(k) = h;
        const auto plus = residuals_at(f.t_host, target, ThetaParams(f.theta.theta + dt));
        const auto minus = residuals_at(f.t_host, target, ThetaParams(f.theta.theta - dt));
        for (size_t r = 0; r < base.residuals.size(); ++r) {
            const double fd = (plus[r] - minus[r]) / (2.0 * h);
            const double an = base.j_theta(static_cast<Eigen::Index>(r), k);
            if (std::abs(fd) > 1e-3) {
                CHECK(std::abs(an - fd) / std::max(1.0, std::abs(fd)) < 1e-4);
                ++rows_checked;
            }
        }
    }
    for (int k = 0; k < 6; ++k) {
        Vec6 xi = Vec6::Zero();
        xi(k) = h;
        const auto plus = residuals_at(f.t_host * se3_exp(xi), target, f.theta);
        xi(k) = -h;
        const auto minus = residuals_at(f.t_host * se3_exp(xi), target, f.theta);
        for (size_t r = 0; r < base.residuals.size(); ++r) {
            const double fd = (plus[r] - minus[r]) / (2.0 * h);
            const double an = base.j_host(static_cast<Eigen::Index>(r), k);
            if (std::abs(fd) > 1e-3) {
                CHECK(std::abs(an - fd) / std::max(1.0, std::abs(fd)) < 1e-4);
                ++rows_checked;
            }
        }
    }
    CHECK(rows_checked > 1000);
}

TEST_CASE("texts leaving the view raise TextNotVisible") {
    std::mt19937 rng(29);
    PhotoFixture f(rng);
    RigidTransform away = f.t_target;
    away.rotation = Quat(Eigen::AngleAxisd(2.5, Vec3::UnitY()));
    CHECK_THROWS_AS(text_photometric_error(f.pixels, f.host, f.target, f.t_host, away, f.theta,
                                           f.intr, 0),
                    TextNotVisible);
}
