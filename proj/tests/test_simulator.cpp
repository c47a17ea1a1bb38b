#include "tslam/simulator.hpp"

#include "tslam/geometry.hpp"
#include "tslam/photometry.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

using namespace tslam;

namespace {

SceneSpec one_board_scene() {
    SceneSpec scene;
    BoardSpec b;
    b.center = Vec3(0, 0, 2);
    b.normal = Vec3(0, 0, -1);
    b.up = Vec3(0, 1, 0);
    b.width = 1.0;
    b.height = 1.0;
    b.text = "LOBBY";
    b.texture_seed = 7;
    scene.boards.push_back(b);
    return scene;
}

const PinholeIntrinsics kIntr(400.0, 400.0, 319.5, 239.5);

} // namespace

TEST_CASE("fronto-parallel board covers the expected pixel footprint") {
    const SceneSpec scene = one_board_scene();
    const RenderResult r = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    // 1x1 m at z=2 with f=400 -> 200x200 px centered at the principal point
    std::int64_t count = 0;
    double sx = 0.0, sy = 0.0;
    for (int y = 0; y < 480; ++y) {
        for (int x = 0; x < 640; ++x) {
            if (r.board_mask[static_cast<size_t>(y) * 640 + x] == 0) {
                ++count;
                sx += x;
                sy += y;
            }
        }
    }
    CHECK(count == doctest::Approx(200.0 * 200.0).epsilon(0.02));
    CHECK(sx / count == doctest::Approx(319.5).epsilon(0.01));
    CHECK(sy / count == doctest::Approx(239.5).epsilon(0.01));
    CHECK(r.visible_fraction[0] == doctest::Approx(1.0));
    CHECK(r.orientation_factor[0] == doctest::Approx(1.0));
}

TEST_CASE("rendering is deterministic") {
    const SceneSpec scene = one_board_scene();
    const RenderResult a = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    const RenderResult b = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    REQUIRE(a.image.data().size() == b.image.data().size());
    CHECK(std::equal(a.image.data().begin(), a.image.data().end(), b.image.data().begin()));
}

TEST_CASE("affine lighting is an exact affine map of the base render") {
    SceneSpec scene = one_board_scene();
    const RenderResult base = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    scene.lighting.mode = LightingMode::kAffine;
    scene.lighting.a = 1.5;
    scene.lighting.b = 20.0;
    const RenderResult lit = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    std::vector<double> raw_base;
    std::vector<double> raw_lit;
    for (int y = 100; y < 380; ++y) {
        for (int x = 220; x < 420; ++x) {
            const double expected = 1.5 * base.image.at(x, y) + 20.0;
            if (expected < 254.0) {
                CHECK(lit.image.at(x, y) == doctest::Approx(expected).epsilon(1e-6));
            }
            if (base.board_mask[static_cast<size_t>(y) * 640 + x] == 0 && expected < 254.0) {
                raw_base.push_back(base.image.at(x, y));
                raw_lit.push_back(lit.image.at(x, y));
            }
        }
    }
    REQUIRE(raw_base.size() > 500);
    const double z = zncc(normalize_patch(raw_base), normalize_patch(raw_lit));
    CHECK(z == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("rendering respects the plane homography between two views") {
    // a large board with a short string keeps the texture well sampled, so
    // bilinear interpolation error stays within the 2-unit budget
    SceneSpec scene;
    BoardSpec big;
    big.center = Vec3(0, 0, 2);
    big.normal = Vec3(0, 0, -1);
    big.width = 2.0;
    big.height = 1.0;
    big.text = "GO";
    big.texture_seed = 4;
    scene.boards.push_back(big);
    const RigidTransform host; // at origin
    RigidTransform target;
    target.translation = Vec3(0.25, 0.1, 0.3);
    target.rotation = Quat(Eigen::AngleAxisd(0.12, Vec3(0, 1, 0)));

    const RenderResult rh = render_frame(scene, host, kIntr, 640, 480);
    const RenderResult rt = render_frame(scene, target, kIntr, 640, 480);

    // theta of the board plane in the host frame: z = 2 plane
    const ThetaParams theta(Vec3(0, 0, 0.5));
    int checked = 0;
    double max_err = 0.0;
    for (int y = 160; y < 320; y += 3) {
        for (int x = 240; x < 400; x += 3) {
            if (rh.board_mask[static_cast<size_t>(y) * 640 + x] != 0) continue;
            const Vec2 target_px =
                project_text_pixel(Vec2(x, y), kIntr, host, target, theta);
            if (!in_sampling_bounds(rt.image, target_px.x(), target_px.y(), 2.0)) continue;
            const size_t tidx = static_cast<size_t>(std::lround(target_px.y())) * 640 +
                                static_cast<size_t>(std::lround(target_px.x()));
            if (rt.board_mask[tidx] != 0) continue;
            const double sampled = sample_bilinear(rt.image, target_px.x(), target_px.y());
            const double expected = rh.image.at(x, y);
            max_err = std::max(max_err, std::abs(sampled - expected));
            ++checked;
        }
    }
    REQUIRE(checked > 1000);
    CHECK(max_err < 2.0);
}

TEST_CASE("occlusion produces a consistent id mask") {
    SceneSpec scene = one_board_scene();
    BoardSpec front;
    front.center = Vec3(0.2, 0, 1.2);
    front.normal = Vec3(0, 0, -1);
    front.width = 0.4;
    front.height = 0.4;
    front.text = "POST";
    front.texture_seed = 3;
    scene.boards.push_back(front);
    const RenderResult r = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    CHECK(r.visible_fraction[0] < 1.0);
    CHECK(r.visible_fraction[1] == doctest::Approx(1.0));
    // wherever both boards cover a pixel, the nearer one owns it
    std::int64_t front_px = 0;
    for (std::int16_t id : r.board_mask) front_px += id == 1 ? 1 : 0;
    // 0.4 m at z=1.2 -> 133 px square
    CHECK(front_px == doctest::Approx(133.33 * 133.33).epsilon(0.03));
}

TEST_CASE("detections are exact with zero noise") {
    const SceneSpec scene = one_board_scene();
    const RenderResult r = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    const auto dets = emit_detections(r, scene, DetectionNoise{}, 1, 0);
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].text == "LOBBY");
    CHECK(dets[0].confidence == doctest::Approx(1.0));
    // quad corners equal the exact projections of the inner rectangle
    const auto world = scene.boards[0].quad_corners_world();
    for (size_t i = 0; i < 4; ++i) {
        const Vec3 pc = world[i]; // identity pose
        const Vec2 px = kIntr.to_pixel({pc.x() / pc.z(), pc.y() / pc.z()});
        bool matched = false;
        for (const Vec2& c : dets[0].quad.corners) {
            if ((c - px).norm() < 1e-9) matched = true;
        }
        CHECK(matched);
    }
}

TEST_CASE("occluded boards get lower confidence") {
    SceneSpec scene = one_board_scene();
    BoardSpec front;
    front.center = Vec3(0.25, 0, 1.0);
    front.normal = Vec3(0, 0, -1);
    front.width = 0.5;
    front.height = 0.9;
    front.text = "PILLAR";
    front.texture_seed = 11;
    scene.boards.push_back(front);
    const RenderResult occluded = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    SceneSpec clear = one_board_scene();
    const RenderResult unoccluded = render_frame(clear, RigidTransform(), kIntr, 640, 480);
    const auto d_occ = emit_detections(occluded, scene, DetectionNoise{}, 1, 0);
    const auto d_clear = emit_detections(unoccluded, clear, DetectionNoise{}, 1, 0);
    REQUIRE(d_clear.size() == 1);
    double occ_conf = -1.0;
    for (const auto& d : d_occ) {
        if (d.text == "LOBBY") occ_conf = d.confidence;
    }
    REQUIRE(occ_conf >= 0.0);
    CHECK(occ_conf < d_clear[0].confidence);
}

TEST_CASE("character corruption rate matches the requested probability") {
    SceneSpec scene;
    BoardSpec b;
    b.center = Vec3(0, 0, 2);
    b.normal = Vec3(0, 0, -1);
    b.width = 1.2;
    b.height = 0.6;
    b.text = "STARBUCKS";
    scene.boards.push_back(b);
    const RenderResult r = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    DetectionNoise noise;
    noise.char_corruption_prob = 0.1;
    double corrupted = 0.0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const auto dets = emit_detections(r, scene, noise, 99, t);
        REQUIRE(dets.size() == 1);
        for (size_t i = 0; i < dets[0].text.size(); ++i) {
            if (dets[0].text[i] != b.text[i]) corrupted += 1.0;
        }
    }
    const double mean = corrupted / trials;
    CHECK(mean > 0.8);
    CHECK(mean < 1.0);
}

TEST_CASE("detections are deterministic under a seed") {
    const SceneSpec scene = one_board_scene();
    const RenderResult r = render_frame(scene, RigidTransform(), kIntr, 640, 480);
    DetectionNoise noise;
    noise.corner_sigma_px = 0.5;
    noise.char_corruption_prob = 0.2;
    const auto a = emit_detections(r, scene, noise, 5, 3);
    const auto b = emit_detections(r, scene, noise, 5, 3);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].text == b[i].text);
        for (size_t k = 0; k < 4; ++k) {
            CHECK((a[i].quad.corners[k] - b[i].quad.corners[k]).norm() == 0.0);
        }
    }
}

TEST_CASE("identical waypoints give a constant pose sequence") {
    TrajectorySpec spec;
    spec.rate_hz = 10.0;
    Waypoint w;
    w.position = Vec3(1, 2, 3);
    w.orientation = Quat(Eigen::AngleAxisd(0.3, Vec3(0, 1, 0)));
    spec.waypoints = {w, w};
    const auto poses = generate_trajectory(spec);
    REQUIRE(poses.size() >= 2);
    for (const TimedPose& p : poses) {
        CHECK((p.pose.translation - w.position).norm() < 1e-12);
        CHECK(p.pose.rotation.angularDistance(w.orientation) < 1e-12);
    }
}

TEST_CASE("orbit preset stays on the circle") {
    TrajectorySpec spec;
    spec.preset = TrajectoryPreset::kOrbit;
    spec.orbit_center = Vec3(1, 0, 5);
    spec.orbit_radius = 3.0;
    spec.orbit_height = 0.5;
    spec.orbit_revolutions = 1.0;
    spec.orbit_speed = 1.0;
    const auto poses = generate_trajectory(spec);
    REQUIRE(poses.size() > 10);
    for (const TimedPose& p : poses) {
        const Vec3 rel = p.pose.translation - spec.orbit_center - Vec3(0, 0.5, 0);
        CHECK(std::abs(rel.norm() - 3.0) < 1e-9);
    }
}

TEST_CASE("out-and-back corridor returns to its start") {
    TrajectorySpec spec;
    spec.preset = TrajectoryPreset::kCorridor;
    spec.corridor_start = Vec3(0, 0, 0);
    spec.corridor_end = Vec3(0, 0, 8);
    spec.corridor_speed = 1.0;
    spec.corridor_sway = 0.0;
    spec.corridor_out_and_back = true;
    const auto poses = generate_trajectory(spec);
    REQUIRE(poses.size() > 100);
    CHECK((poses.back().pose.translation - poses.front().pose.translation).norm() < 0.1);
    // timestamps strictly increasing at the requested rate
    for (size_t i = 1; i < poses.size(); ++i) {
        CHECK(poses[i].timestamp - poses[i - 1].timestamp == doctest::Approx(1.0 / 30.0));
    }
}

TEST_CASE("scene and trajectory specs round trip through files") {
    SceneSpec scene = one_board_scene();
    scene.lighting.mode = LightingMode::kDayNight;
    scene.lighting.gain = 0.3;
    scene.lighting.gamma = 1.4;
    scene.points.push_back({Vec3(1, 2, 3), 150.0});
    const std::string dir = std::filesystem::temp_directory_path().string();
    const std::string scene_path = dir + "/tslam_scene_rt.txt";
    scene.save(scene_path);
    const SceneSpec back = SceneSpec::load(scene_path);
    REQUIRE(back.boards.size() == 1);
    CHECK(back.boards[0].text == "LOBBY");
    CHECK(back.boards[0].width == doctest::Approx(1.0));
    CHECK(back.lighting.gain == doctest::Approx(0.3));
    REQUIRE(back.points.size() == 1);
    CHECK((back.points[0].position - Vec3(1, 2, 3)).norm() < 1e-12);

    TrajectorySpec traj;
    traj.preset = TrajectoryPreset::kCorridor;
    traj.corridor_end = Vec3(0, 0, 6);
    const std::string traj_path = dir + "/tslam_traj_rt.txt";
    traj.save(traj_path);
    const TrajectorySpec traj_back = TrajectorySpec::load(traj_path);
    CHECK(traj_back.preset == TrajectoryPreset::kCorridor);
    CHECK((traj_back.corridor_end - Vec3(0, 0, 6)).norm() < 1e-12);
    std::remove(scene_path.c_str());
    std::remove(traj_path.c_str());
}
