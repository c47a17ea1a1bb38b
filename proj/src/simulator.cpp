#include "tslam/simulator.hpp"

#include "tslam/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tslam {

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline double smoothstep01(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

// Smooth indicator of [x0, x1] with transition width tau on each side.
inline double smooth_interval(double x, double x0, double x1, double tau) {
    return smoothstep01((x - x0) / tau) * smoothstep01((x1 - x) / tau);
}

inline double smooth_rect(double a, double b, double a0, double a1, double b0, double b1,
                          double tau) {
    return smooth_interval(a, a0, a1, tau) * smooth_interval(b, b0, b1, tau);
}

struct GlyphLayout {
    double m;            // base margin
    double gx0, gx1;     // glyph area in board coords
    double gy0, gy1;
    int chars;
    double cell_w, cell_h; // sub-cell size (3 x 5 per character)
    double tau;
};

GlyphLayout glyph_layout(const BoardSpec& board) {
    GlyphLayout l{};
    l.m = board.margin();
    l.gx0 = 2.5 * l.m;
    l.gx1 = board.width - 2.5 * l.m;
    l.gy0 = 2.5 * l.m;
    l.gy1 = board.height - 2.5 * l.m;
    l.chars = std::max<int>(1, static_cast<int>(utf8_decode(board.text).size()));
    l.cell_w = (l.gx1 - l.gx0) / (3.0 * l.chars);
    l.cell_h = (l.gy1 - l.gy0) / 5.0;
    l.tau = 0.45 * std::min(l.cell_w, l.cell_h);
    return l;
}

bool glyph_bit(const BoardSpec& board, int char_idx, int bx, int by) {
    const std::uint64_t key =
        splitmix64(board.texture_seed ^ splitmix64(fnv1a(board.text))) ^
        splitmix64(static_cast<std::uint64_t>(char_idx) * 131 + bx * 17 + by);
    const bool bit = splitmix64(key) % 1000 < 420;
    if (!bit && bx == 1 && by == 2) {
        // make sure every character has at least its center element
        bool any = false;
        for (int x = 0; x < 3 && !any; ++x)
            for (int y = 0; y < 5 && !any; ++y) {
                const std::uint64_t k2 =
                    splitmix64(board.texture_seed ^ splitmix64(fnv1a(board.text))) ^
                    splitmix64(static_cast<std::uint64_t>(char_idx) * 131 + x * 17 + y);
                if (splitmix64(k2) % 1000 < 420) any = true;
            }
        return !any;
    }
    return bit;
}

} // namespace

std::array<Vec3, 4> BoardSpec::quad_corners_world() const {
    const double m = margin();
    const Vec3 u = u_axis();
    const Vec3 v = v_axis();
    const Vec3 o = center - 0.5 * width * u - 0.5 * height * v;
    return {o + m * u + m * v, o + (width - m) * u + m * v,
            o + (width - m) * u + (height - m) * v, o + m * u + (height - m) * v};
}

std::array<Vec3, 4> BoardSpec::board_corners_world() const {
    const Vec3 u = u_axis();
    const Vec3 v = v_axis();
    const Vec3 o = center - 0.5 * width * u - 0.5 * height * v;
    return {o, o + width * u, o + width * u + height * v, o + height * v};
}

double board_texture(const BoardSpec& board, double a, double b) {
    const GlyphLayout l = glyph_layout(board);
    const double tau_f = 0.7 * l.m;

    // dark frame band between inset m and 2m
    double coverage = smooth_rect(a, b, l.m, board.width - l.m, l.m, board.height - l.m, tau_f) -
                      smooth_rect(a, b, 2.0 * l.m, board.width - 2.0 * l.m, 2.0 * l.m,
                                  board.height - 2.0 * l.m, tau_f);
    coverage = std::max(0.0, coverage);

    // glyph sub-cells (3 columns x 5 rows per character)
    if (a > l.gx0 - l.cell_w && a < l.gx1 + l.cell_w && b > l.gy0 - l.cell_h &&
        b < l.gy1 + l.cell_h) {
        const int ci = static_cast<int>(std::floor((a - l.gx0) / l.cell_w));
        const int ri = static_cast<int>(std::floor((b - l.gy0) / l.cell_h));
        for (int dc = -1; dc <= 1; ++dc) {
            for (int dr = -1; dr <= 1; ++dr) {
                const int col = ci + dc;
                const int row = ri + dr;
                if (col < 0 || row < 0 || row >= 5 || col >= 3 * l.chars) continue;
                const int char_idx = col / 3;
                const int bx = col % 3;
                if (!glyph_bit(board, char_idx, bx, row)) continue;
                const double x0 = l.gx0 + col * l.cell_w;
                const double y0 = l.gy0 + row * l.cell_h;
                // sub-cells drawn slightly inset so neighbors stay separable
                coverage += smooth_rect(a, b, x0 + 0.15 * l.cell_w, x0 + 0.85 * l.cell_w,
                                        y0 + 0.15 * l.cell_h, y0 + 0.85 * l.cell_h, l.tau);
            }
        }
    }
    coverage = std::min(1.0, coverage);
    return 215.0 - 185.0 * coverage;
}

namespace {

void apply_lighting(GrayImage& img, const LightingSpec& light, int frame_index) {
    double a = 1.0;
    double b = 0.0;
    double gain = 1.0;
    double gamma = 1.0;
    switch (light.mode) {
        case LightingMode::kConstant:
            return;
        case LightingMode::kAffine:
            a = light.a;
            b = light.b;
            break;
        case LightingMode::kAffineWave: {
            const double phase = 2.0 * M_PI * frame_index / std::max(1, light.period);
            a = light.a + light.a_amp * std::sin(phase);
            b = light.b + light.b_amp * std::sin(phase + 1.0);
            break;
        }
        case LightingMode::kDayNight:
            gain = light.gain;
            gamma = light.gamma;
            break;
    }
    for (float& v : img.data()) {
        double out;
        if (light.mode == LightingMode::kDayNight) {
            out = 255.0 * gain * std::pow(std::max(0.0, static_cast<double>(v)) / 255.0, gamma);
        } else {
            out = a * v + b;
        }
        v = static_cast<float>(std::clamp(out, 0.0, 255.0));
    }
}

} // namespace

RenderResult render_frame(const SceneSpec& scene, const RigidTransform& pose,
                          const PinholeIntrinsics& intr, int width, int height,
                          int frame_index) {
    RenderResult out;
    out.image = GrayImage(width, height, static_cast<float>(scene.background));
    out.board_mask.assign(static_cast<size_t>(width) * height, -1);
    out.depth.assign(static_cast<size_t>(width) * height,
                     std::numeric_limits<float>::infinity());
    const size_t n_boards = scene.boards.size();
    out.quad_valid.assign(n_boards, false);
    out.projected_quads.assign(n_boards, TextQuad{});
    out.visible_fraction.assign(n_boards, 0.0);
    out.orientation_factor.assign(n_boards, 0.0);

    const RigidTransform world_to_cam = pose.inverse();
    const Mat3 r_wc = world_to_cam.rotation_matrix();

    struct BoardCam {
        Vec3 n;        // plane normal (camera frame)
        double d;      // n.p + d = 0
        Vec3 u, v;     // board axes (camera frame)
        Vec3 origin;   // bottom-left board corner (camera frame)
        int x0, x1, y0, y1; // rasterization bbox (may exceed the image)
        bool renderable = false;
        std::int64_t rasterizable = 0;
    };
    std::vector<BoardCam> cams(n_boards);

    for (size_t i = 0; i < n_boards; ++i) {
        const BoardSpec& b = scene.boards[i];
        BoardCam& bc = cams[i];
        bc.n = r_wc * b.normal.normalized();
        const Vec3 center_c = world_to_cam * b.center;
        bc.d = -bc.n.dot(center_c);
        bc.u = r_wc * b.u_axis();
        bc.v = r_wc * b.v_axis();
        bc.origin = center_c - 0.5 * b.width * bc.u - 0.5 * b.height * bc.v;

        const double cosv = center_c.norm() > 1e-9 ? bc.n.dot(center_c.normalized()) : 0.0;
        out.orientation_factor[i] = std::clamp(std::abs(cosv), 0.0, 1.0);
        if (cosv >= -1e-6) continue; // facing away (boards are one-sided)

        bool in_front = true;
        Vec2 lo(1e18, 1e18);
        Vec2 hi(-1e18, -1e18);
        const auto corners = b.board_corners_world();
        for (const Vec3& cw : corners) {
            const Vec3 pc = world_to_cam * cw;
            if (pc.z() < 0.05) {
                in_front = false;
                break;
            }
            const Vec2 px = intr.to_pixel({pc.x() / pc.z(), pc.y() / pc.z()});
            lo = lo.cwiseMin(px);
            hi = hi.cwiseMax(px);
        }
        if (!in_front) continue;

        const auto quad_corners = b.quad_corners_world();
        TextQuad q;
        bool quad_ok = true;
        for (size_t k = 0; k < 4; ++k) {
            const Vec3 pc = world_to_cam * quad_corners[k];
            if (pc.z() < 0.05) quad_ok = false;
            if (quad_ok) q.corners[k] = intr.to_pixel({pc.x() / pc.z(), pc.y() / pc.z()});
        }
        out.quad_valid[i] = quad_ok;
        if (quad_ok) out.projected_quads[i] = q;

        // bounded virtual bbox so edge-on boards stay cheap
        bc.x0 = std::max(static_cast<int>(std::floor(lo.x())) - 1, -2 * width);
        bc.y0 = std::max(static_cast<int>(std::floor(lo.y())) - 1, -2 * height);
        bc.x1 = std::min(static_cast<int>(std::ceil(hi.x())) + 1, 3 * width);
        bc.y1 = std::min(static_cast<int>(std::ceil(hi.y())) + 1, 3 * height);
        bc.renderable = true;
    }

    for (size_t i = 0; i < n_boards; ++i) {
        const BoardSpec& b = scene.boards[i];
        BoardCam& bc = cams[i];
        if (!bc.renderable) continue;
        for (int y = bc.y0; y <= bc.y1; ++y) {
            for (int x = bc.x0; x <= bc.x1; ++x) {
                const Vec3 ray((x - intr.cx) / intr.fx, (y - intr.cy) / intr.fy, 1.0);
                const double denom = bc.n.dot(ray);
                if (std::abs(denom) < 1e-12) continue;
                const double t = -bc.d / denom;
                if (t < 0.05) continue;
                const Vec3 pc = t * ray;
                const Vec3 rel = pc - bc.origin;
                const double a = rel.dot(bc.u);
                const double bb = rel.dot(bc.v);
                if (a < 0.0 || a > b.width || bb < 0.0 || bb > b.height) continue;
                ++bc.rasterizable;
                if (x < 0 || y < 0 || x >= width || y >= height) continue;
                const size_t idx = static_cast<size_t>(y) * width + x;
                if (t >= out.depth[idx]) continue;
                out.depth[idx] = static_cast<float>(t);
                out.board_mask[idx] = static_cast<std::int16_t>(i);
                out.image.at(x, y) = static_cast<float>(board_texture(b, a, bb));
            }
        }
    }

    std::vector<std::int64_t> visible(n_boards, 0);
    for (size_t idx = 0; idx < out.board_mask.size(); ++idx) {
        if (out.board_mask[idx] >= 0) ++visible[out.board_mask[idx]];
    }
    for (size_t i = 0; i < n_boards; ++i) {
        if (cams[i].rasterizable > 0) {
            out.visible_fraction[i] =
                static_cast<double>(visible[i]) / static_cast<double>(cams[i].rasterizable);
        }
    }

    // background points as small gaussian dots, z-tested against the boards
    for (const ScenePoint& p : scene.points) {
        const Vec3 pc = world_to_cam * p.position;
        if (pc.z() < 0.1) continue;
        const Vec2 px = intr.to_pixel({pc.x() / pc.z(), pc.y() / pc.z()});
        const int cx = static_cast<int>(std::lround(px.x()));
        const int cy = static_cast<int>(std::lround(px.y()));
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int x = cx + dx;
                const int y = cy + dy;
                if (x < 0 || y < 0 || x >= width || y >= height) continue;
                const size_t idx = static_cast<size_t>(y) * width + x;
                if (static_cast<double>(out.depth[idx]) < pc.z()) continue; // occluded
                const double r2 = (x - px.x()) * (x - px.x()) + (y - px.y()) * (y - px.y());
                const double w = std::exp(-r2 / (2.0 * 0.7 * 0.7));
                float& v = out.image.at(x, y);
                v = static_cast<float>(std::min(255.0, v + p.intensity * w));
            }
        }
    }

    apply_lighting(out.image, scene.lighting, frame_index);
    return out;
}

namespace {

struct EmittedDetection {
    TextDetection det;
    int board = -1;
};

std::vector<EmittedDetection> emit_internal(const RenderResult& frame, const SceneSpec& scene,
                                            const DetectionNoise& noise, std::uint64_t seed,
                                            int frame_index) {
    std::mt19937_64 rng = seeded_engine(seed, static_cast<std::uint64_t>(frame_index) + 77);
    std::normal_distribution<double> jitter(0.0, noise.corner_sigma_px);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> letter(0, 25);

    std::vector<EmittedDetection> out;
    for (size_t i = 0; i < scene.boards.size(); ++i) {
        if (!frame.quad_valid[i]) continue;
        if (frame.visible_fraction[i] < noise.min_visible_fraction) continue;
        const TextQuad& q = frame.projected_quads[i];
        if (q.area() < noise.min_area_px) continue;

        EmittedDetection e;
        e.board = static_cast<int>(i);
        e.det.quad = q;
        if (noise.corner_sigma_px > 0.0) {
            for (Vec2& c : e.det.quad.corners) c += Vec2(jitter(rng), jitter(rng));
        }
        e.det.confidence =
            std::clamp(frame.visible_fraction[i] * frame.orientation_factor[i], 0.0, 1.0);
        std::string text = scene.boards[i].text;
        if (noise.char_corruption_prob > 0.0) {
            for (char& c : text) {
                if (unit(rng) < noise.char_corruption_prob) {
                    char repl = static_cast<char>('A' + letter(rng));
                    if (repl == c) repl = (repl == 'Z') ? 'A' : static_cast<char>(repl + 1);
                    c = repl;
                }
            }
        }
        e.det.text = text;
        if (noise.dropout_prob > 0.0 && unit(rng) < noise.dropout_prob) continue;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

std::vector<TextDetection> emit_detections(const RenderResult& frame, const SceneSpec& scene,
                                           const DetectionNoise& noise, std::uint64_t seed,
                                           int frame_index) {
    std::vector<TextDetection> out;
    for (auto& e : emit_internal(frame, scene, noise, seed, frame_index)) {
        out.push_back(std::move(e.det));
    }
    return out;
}

std::vector<int> detection_board_ids(const RenderResult& frame, const SceneSpec& scene,
                                     const DetectionNoise& noise, std::uint64_t seed,
                                     int frame_index) {
    std::vector<int> out;
    for (const auto& e : emit_internal(frame, scene, noise, seed, frame_index)) {
        out.push_back(e.board);
    }
    return out;
}

namespace {

// Camera looks along +z with image-y pointing down in a y-up world.
RigidTransform look_at(const Vec3& eye, const Vec3& target, const Vec3& world_up = Vec3(0, 1, 0)) {
    const Vec3 z = (target - eye).normalized();
    Vec3 x = z.cross(world_up);
    if (x.norm() < 1e-9) x = z.cross(Vec3(1, 0, 0));
    x.normalize();
    const Vec3 y = z.cross(x);
    Mat3 r;
    r.col(0) = x;
    r.col(1) = y;
    r.col(2) = z;
    return {Quat(r).normalized(), eye};
}

Vec3 catmull_rom(const Vec3& p0, const Vec3& p1, const Vec3& p2, const Vec3& p3, double s) {
    const double s2 = s * s;
    const double s3 = s2 * s;
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * s + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * s2 +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * s3);
}

std::vector<TimedPose> orbit_trajectory(const TrajectorySpec& spec) {
    const double arc = 2.0 * M_PI * spec.orbit_radius * spec.orbit_revolutions;
    const double duration = arc / std::max(1e-9, spec.orbit_speed);
    const int n = std::max(2, static_cast<int>(std::floor(duration * spec.rate_hz)) + 1);
    std::vector<TimedPose> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double t = k / spec.rate_hz;
        const double phi = 2.0 * M_PI * spec.orbit_revolutions * (t / duration);
        const Vec3 eye = spec.orbit_center +
                         Vec3(spec.orbit_radius * std::cos(phi), spec.orbit_height,
                              spec.orbit_radius * std::sin(phi));
        out.push_back({t, look_at(eye, spec.orbit_center + Vec3(0, spec.orbit_height, 0))});
    }
    return out;
}

std::vector<TimedPose> corridor_trajectory(const TrajectorySpec& spec) {
    const Vec3 dir = (spec.corridor_end - spec.corridor_start).normalized();
    const double length = (spec.corridor_end - spec.corridor_start).norm();
    Vec3 side = dir.cross(Vec3(0, 1, 0));
    if (side.norm() < 1e-9) side = dir.cross(Vec3(1, 0, 0));
    side.normalize();
    const double t_leg = length / std::max(1e-9, spec.corridor_speed);
    const double t_turn = spec.corridor_out_and_back ? spec.corridor_turn_seconds : 0.0;
    const double total = spec.corridor_out_and_back ? 2.0 * t_leg + t_turn : t_leg;
    const int n = std::max(2, static_cast<int>(std::floor(total * spec.rate_hz)) + 1);

    std::vector<TimedPose> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double t = k / spec.rate_hz;
        double along;
        double heading; // 0 = outbound, pi = return
        if (!spec.corridor_out_and_back || t <= t_leg) {
            along = std::min(t, t_leg) * spec.corridor_speed;
            heading = 0.0;
        } else if (t <= t_leg + t_turn) {
            along = length;
            heading = M_PI * (t - t_leg) / t_turn;
        } else {
            along = std::max(0.0, length - (t - t_leg - t_turn) * spec.corridor_speed);
            heading = M_PI;
        }
        const double sway =
            spec.corridor_sway * std::sin(2.0 * M_PI * t / std::max(1e-9, spec.corridor_sway_period));
        const Vec3 eye = spec.corridor_start + along * dir + sway * side;
        const Vec3 fwd = Eigen::AngleAxisd(heading, Vec3(0, 1, 0)) * dir;
        out.push_back({t, look_at(eye, eye + fwd)});
    }
    return out;
}

std::vector<TimedPose> fastshake_trajectory(const TrajectorySpec& spec) {
    const int n = std::max(2, static_cast<int>(std::floor(spec.shake_seconds * spec.rate_hz)) + 1);
    std::vector<TimedPose> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double t = k / spec.rate_hz;
        const double yaw = spec.shake_yaw_amp * std::sin(2.0 * M_PI * t / spec.shake_period);
        const double pitch =
            spec.shake_pitch_amp * std::sin(2.0 * M_PI * t / (1.7 * spec.shake_period));
        const Quat q = Quat(Eigen::AngleAxisd(yaw, Vec3(0, 1, 0))) *
                       Quat(Eigen::AngleAxisd(pitch, Vec3(1, 0, 0)));
        out.push_back({t, RigidTransform(q, spec.shake_center)});
    }
    return out;
}

std::vector<TimedPose> waypoint_trajectory(const TrajectorySpec& spec) {
    const auto& wps = spec.waypoints;
    if (wps.size() < 2) throw ConfigInvalid("trajectory needs at least 2 waypoints");
    std::vector<double> durations(wps.size() - 1);
    double total = 0.0;
    for (size_t i = 0; i + 1 < wps.size(); ++i) {
        const double dist = (wps[i + 1].position - wps[i].position).norm();
        durations[i] = dist < 1e-12 ? 1.0 : dist / std::max(1e-9, wps[i].speed);
        total += durations[i];
    }
    const int n = std::max(2, static_cast<int>(std::floor(total * spec.rate_hz)) + 1);
    std::vector<TimedPose> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double t = std::min(k / spec.rate_hz, total - 1e-12);
        size_t seg = 0;
        double acc = 0.0;
        while (seg + 1 < durations.size() && acc + durations[seg] <= t) {
            acc += durations[seg];
            ++seg;
        }
        const double s = std::clamp((t - acc) / durations[seg], 0.0, 1.0);
        const Vec3& p1 = wps[seg].position;
        const Vec3& p2 = wps[seg + 1].position;
        const Vec3& p0 = seg > 0 ? wps[seg - 1].position : p1;
        const Vec3& p3 = seg + 2 < wps.size() ? wps[seg + 2].position : p2;
        const Vec3 pos = catmull_rom(p0, p1, p2, p3, s);
        const Quat q = wps[seg].orientation.slerp(s, wps[seg + 1].orientation);
        out.push_back({k / spec.rate_hz, RigidTransform(q, pos)});
    }
    return out;
}

} // namespace

std::vector<TimedPose> generate_trajectory(const TrajectorySpec& spec) {
    switch (spec.preset) {
        case TrajectoryPreset::kOrbit:
            return orbit_trajectory(spec);
        case TrajectoryPreset::kCorridor:
            return corridor_trajectory(spec);
        case TrajectoryPreset::kFastShake:
            return fastshake_trajectory(spec);
        case TrajectoryPreset::kWaypoints:
        default:
            return waypoint_trajectory(spec);
    }
}

// --- scene / trajectory spec files ------------------------------------------

SceneSpec SceneSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetInvalid("cannot open scene spec " + path);
    SceneSpec scene;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        std::string kind;
        if (!(ss >> kind)) continue;
        auto fail = [&](const std::string& why) {
            throw DatasetInvalid(path + ":" + std::to_string(line_no) + " " + why);
        };
        if (kind == "board") {
            BoardSpec b;
            if (!(ss >> b.text >> b.center.x() >> b.center.y() >> b.center.z() >>
                  b.normal.x() >> b.normal.y() >> b.normal.z() >> b.up.x() >> b.up.y() >>
                  b.up.z() >> b.width >> b.height >> b.texture_seed)) {
                fail("bad board line");
            }
            int dup = 0;
            if (ss >> dup) b.duplicate_flag = dup != 0;
            scene.boards.push_back(b);
        } else if (kind == "point") {
            ScenePoint p;
            if (!(ss >> p.position.x() >> p.position.y() >> p.position.z() >> p.intensity)) {
                fail("bad point line");
            }
            scene.points.push_back(p);
        } else if (kind == "points_random") {
            int count = 0;
            std::uint64_t seed = 0;
            Vec3 lo, hi;
            double imin, imax;
            if (!(ss >> count >> seed >> lo.x() >> lo.y() >> lo.z() >> hi.x() >> hi.y() >>
                  hi.z() >> imin >> imax)) {
                fail("bad points_random line");
            }
            std::mt19937_64 rng = seeded_engine(seed, 0);
            std::uniform_real_distribution<double> ux(lo.x(), hi.x());
            std::uniform_real_distribution<double> uy(lo.y(), hi.y());
            std::uniform_real_distribution<double> uz(lo.z(), hi.z());
            std::uniform_real_distribution<double> ui(imin, imax);
            for (int i = 0; i < count; ++i) {
                scene.points.push_back({Vec3(ux(rng), uy(rng), uz(rng)), ui(rng)});
            }
        } else if (kind == "background") {
            if (!(ss >> scene.background)) fail("bad background line");
        } else if (kind == "lighting") {
            std::string mode;
            ss >> mode;
            if (mode == "constant") {
                scene.lighting.mode = LightingMode::kConstant;
            } else if (mode == "affine") {
                scene.lighting.mode = LightingMode::kAffine;
                if (!(ss >> scene.lighting.a >> scene.lighting.b)) fail("bad affine lighting");
            } else if (mode == "affine_wave") {
                scene.lighting.mode = LightingMode::kAffineWave;
                if (!(ss >> scene.lighting.a >> scene.lighting.b >> scene.lighting.a_amp >>
                      scene.lighting.b_amp >> scene.lighting.period)) {
                    fail("bad affine_wave lighting");
                }
            } else if (mode == "daynight") {
                scene.lighting.mode = LightingMode::kDayNight;
                if (!(ss >> scene.lighting.gain >> scene.lighting.gamma)) {
                    fail("bad daynight lighting");
                }
            } else {
                fail("unknown lighting mode '" + mode + "'");
            }
        } else {
            fail("unknown directive '" + kind + "'");
        }
    }
    return scene;
}

void SceneSpec::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DatasetInvalid("cannot write scene spec " + path);
    out.precision(17);
    for (const BoardSpec& b : boards) {
        out << "board " << b.text << " " << b.center.x() << " " << b.center.y() << " "
            << b.center.z() << " " << b.normal.x() << " " << b.normal.y() << " " << b.normal.z()
            << " " << b.up.x() << " " << b.up.y() << " " << b.up.z() << " " << b.width << " "
            << b.height << " " << b.texture_seed << " " << (b.duplicate_flag ? 1 : 0) << "\n";
    }
    for (const ScenePoint& p : points) {
        out << "point " << p.position.x() << " " << p.position.y() << " " << p.position.z()
            << " " << p.intensity << "\n";
    }
    out << "background " << background << "\n";
    switch (lighting.mode) {
        case LightingMode::kConstant:
            out << "lighting constant\n";
            break;
        case LightingMode::kAffine:
            out << "lighting affine " << lighting.a << " " << lighting.b << "\n";
            break;
        case LightingMode::kAffineWave:
            out << "lighting affine_wave " << lighting.a << " " << lighting.b << " "
                << lighting.a_amp << " " << lighting.b_amp << " " << lighting.period << "\n";
            break;
        case LightingMode::kDayNight:
            out << "lighting daynight " << lighting.gain << " " << lighting.gamma << "\n";
            break;
    }
}

TrajectorySpec TrajectorySpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetInvalid("cannot open trajectory spec " + path);
    TrajectorySpec spec;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        std::string kind;
        if (!(ss >> kind)) continue;
        auto fail = [&](const std::string& why) {
            throw DatasetInvalid(path + ":" + std::to_string(line_no) + " " + why);
        };
        if (kind == "rate") {
            if (!(ss >> spec.rate_hz)) fail("bad rate");
        } else if (kind == "preset") {
            std::string name;
            ss >> name;
            if (name == "orbit") {
                spec.preset = TrajectoryPreset::kOrbit;
                if (!(ss >> spec.orbit_center.x() >> spec.orbit_center.y() >>
                      spec.orbit_center.z() >> spec.orbit_radius >> spec.orbit_height >>
                      spec.orbit_revolutions >> spec.orbit_speed)) {
                    fail("bad orbit preset");
                }
            } else if (name == "corridor") {
                spec.preset = TrajectoryPreset::kCorridor;
                int oab = 0;
                if (!(ss >> spec.corridor_start.x() >> spec.corridor_start.y() >>
                      spec.corridor_start.z() >> spec.corridor_end.x() >> spec.corridor_end.y() >>
                      spec.corridor_end.z() >> spec.corridor_speed >> spec.corridor_sway >>
                      spec.corridor_sway_period >> oab)) {
                    fail("bad corridor preset");
                }
                spec.corridor_out_and_back = oab != 0;
                if (!(ss >> spec.corridor_turn_seconds)) spec.corridor_turn_seconds = 3.0;
            } else if (name == "fastshake") {
                spec.preset = TrajectoryPreset::kFastShake;
                if (!(ss >> spec.shake_center.x() >> spec.shake_center.y() >>
                      spec.shake_center.z() >> spec.shake_yaw_amp >> spec.shake_pitch_amp >>
                      spec.shake_period >> spec.shake_seconds)) {
                    fail("bad fastshake preset");
                }
            } else {
                fail("unknown preset '" + name + "'");
            }
        } else if (kind == "waypoint") {
            Waypoint w;
            double qx, qy, qz, qw;
            if (!(ss >> w.position.x() >> w.position.y() >> w.position.z() >> qx >> qy >> qz >>
                  qw >> w.speed)) {
                fail("bad waypoint");
            }
            w.orientation = Quat(qw, qx, qy, qz).normalized();
            spec.waypoints.push_back(w);
        } else {
            fail("unknown directive '" + kind + "'");
        }
    }
    return spec;
}

void TrajectorySpec::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw DatasetInvalid("cannot write trajectory spec " + path);
    out.precision(17);
    out << "rate " << rate_hz << "\n";
    switch (preset) {
        case TrajectoryPreset::kOrbit:
            out << "preset orbit " << orbit_center.x() << " " << orbit_center.y() << " "
                << orbit_center.z() << " " << orbit_radius << " " << orbit_height << " "
                << orbit_revolutions << " " << orbit_speed << "\n";
            break;
        case TrajectoryPreset::kCorridor:
            out << "preset corridor " << corridor_start.x() << " " << corridor_start.y() << " "
                << corridor_start.z() << " " << corridor_end.x() << " " << corridor_end.y()
                << " " << corridor_end.z() << " " << corridor_speed << " " << corridor_sway
                << " " << corridor_sway_period << " " << (corridor_out_and_back ? 1 : 0) << " "
                << corridor_turn_seconds << "\n";
            break;
        case TrajectoryPreset::kFastShake:
            out << "preset fastshake " << shake_center.x() << " " << shake_center.y() << " "
                << shake_center.z() << " " << shake_yaw_amp << " " << shake_pitch_amp << " "
                << shake_period << " " << shake_seconds << "\n";
            break;
        case TrajectoryPreset::kWaypoints:
            for (const Waypoint& w : waypoints) {
                out << "waypoint " << w.position.x() << " " << w.position.y() << " "
                    << w.position.z() << " " << w.orientation.x() << " " << w.orientation.y()
                    << " " << w.orientation.z() << " " << w.orientation.w() << " " << w.speed
                    << "\n";
            }
            break;
    }
}

} // namespace tslam
