#include "tslam/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace tslam {

namespace {

constexpr std::array<std::array<int, 2>, 16> kCircle = {
    {{0, -3}, {1, -3}, {2, -2}, {3, -1}, {3, 0}, {3, 1}, {2, 2}, {1, 3},
     {0, 3}, {-1, 3}, {-2, 2}, {-3, 1}, {-3, 0}, {-3, -1}, {-2, -2}, {-1, -3}}};

// Returns a positive segment-test score (sum of |ring - center| over the
// qualifying arc) or 0 when the pixel is not a corner.
float segment_test_score(const GrayImage& img, int x, int y, const CornerParams& p) {
    const float c = img.at(x, y);
    std::array<int, 16> state{}; // +1 brighter, -1 darker, 0 similar
    std::array<float, 16> diff{};
    for (int i = 0; i < 16; ++i) {
        const float v = img.at(x + kCircle[i][0], y + kCircle[i][1]);
        diff[i] = v - c;
        if (diff[i] > p.threshold) state[i] = 1;
        else if (diff[i] < -p.threshold) state[i] = -1;
    }
    float best = 0.0f;
    for (int s : {1, -1}) {
        int run = 0;
        float acc = 0.0f;
        float run_best = 0.0f;
        // walk twice around the ring to handle wrap-around arcs
        for (int i = 0; i < 32; ++i) {
            const int k = i & 15;
            if (state[k] == s) {
                ++run;
                acc += std::abs(diff[k]);
                if (run >= p.min_arc) run_best = std::max(run_best, acc);
                if (run >= 16) break;
            } else {
                run = 0;
                acc = 0.0f;
            }
        }
        best = std::max(best, run_best);
    }
    return best;
}

struct ScoredCorner {
    Vec2 pt;
    float score;
};

std::vector<ScoredCorner> raw_corners(const GrayImage& img, const CornerParams& params) {
    std::vector<ScoredCorner> out;
    const int w = img.width();
    const int h = img.height();
    std::vector<float> scores(static_cast<size_t>(w) * h, 0.0f);
    for (int y = 3; y < h - 3; ++y) {
        for (int x = 3; x < w - 3; ++x) {
            scores[static_cast<size_t>(y) * w + x] = segment_test_score(img, x, y, params);
        }
    }
    // 3x3 non-max suppression
    for (int y = 3; y < h - 3; ++y) {
        for (int x = 3; x < w - 3; ++x) {
            const float s = scores[static_cast<size_t>(y) * w + x];
            if (s <= 0.0f) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    if (scores[static_cast<size_t>(y + dy) * w + (x + dx)] > s) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) out.push_back({Vec2(x, y), s});
        }
    }
    return out;
}

} // namespace

std::vector<Vec2> detect_corners(const GrayImage& img, int max_count, int grid_cells,
                                 const CornerParams& params) {
    std::vector<ScoredCorner> corners = raw_corners(img, params);
    if (corners.empty() || max_count <= 0) return {};
    grid_cells = std::max(1, grid_cells);
    const double cell_w = static_cast<double>(img.width()) / grid_cells;
    const double cell_h = static_cast<double>(img.height()) / grid_cells;

    std::vector<std::vector<ScoredCorner>> cells(static_cast<size_t>(grid_cells) * grid_cells);
    for (const ScoredCorner& c : corners) {
        const int gx = std::min(grid_cells - 1, static_cast<int>(c.pt.x() / cell_w));
        const int gy = std::min(grid_cells - 1, static_cast<int>(c.pt.y() / cell_h));
        cells[static_cast<size_t>(gy) * grid_cells + gx].push_back(c);
    }
    std::vector<std::vector<ScoredCorner>*> occupied;
    for (auto& cell : cells) {
        if (cell.empty()) continue;
        std::sort(cell.begin(), cell.end(),
                  [](const ScoredCorner& a, const ScoredCorner& b) { return a.score > b.score; });
        occupied.push_back(&cell);
    }
    std::sort(occupied.begin(), occupied.end(),
              [](const auto* a, const auto* b) { return a->front().score > b->front().score; });

    // round-robin over occupied cells so the budget is spread spatially
    std::vector<Vec2> out;
    size_t rank = 0;
    while (static_cast<int>(out.size()) < max_count) {
        bool any = false;
        for (const auto* cell : occupied) {
            if (rank < cell->size()) {
                out.push_back((*cell)[rank].pt);
                any = true;
                if (static_cast<int>(out.size()) >= max_count) break;
            }
        }
        if (!any) break;
        ++rank;
    }
    return out;
}

namespace {

// Tracks one point at one pyramid level; returns false on border exit or a
// degenerate structure tensor. `d` is the running displacement in level coords.
bool klt_level(const GrayImage& prev, const GrayImage& next, const Vec2& p, Vec2& d,
               const KltParams& params, double* rms_out) {
    const int half = params.window / 2;
    const int n = params.window * params.window;
    if (!in_sampling_bounds(prev, p.x() - half, p.y() - half, 1.0) ||
        !in_sampling_bounds(prev, p.x() + half, p.y() + half, 1.0)) {
        return false;
    }
    std::vector<float> tmpl(n);
    std::vector<Vec2> grad(n);
    Mat3::Scalar gxx = 0, gxy = 0, gyy = 0;
    int idx = 0;
    for (int dy = -half; dy <= half; ++dy) {
        for (int dx = -half; dx <= half; ++dx, ++idx) {
            const double x = p.x() + dx;
            const double y = p.y() + dy;
            tmpl[idx] = sample_bilinear(prev, x, y);
            grad[idx] = gradient(prev, x, y);
            gxx += grad[idx].x() * grad[idx].x();
            gxy += grad[idx].x() * grad[idx].y();
            gyy += grad[idx].y() * grad[idx].y();
        }
    }
    const double tr = gxx + gyy;
    const double det = gxx * gyy - gxy * gxy;
    const double eig_min = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4.0 * det)));
    if (eig_min / n < params.min_eigenvalue) return false;

    Eigen::Matrix2d g;
    g << gxx, gxy, gxy, gyy;
    const Eigen::Matrix2d g_inv = g.inverse();

    double rms = 0.0;
    for (int iter = 0; iter < params.max_iterations; ++iter) {
        const Vec2 q = p + d;
        if (!in_sampling_bounds(next, q.x() - half, q.y() - half, 0.0) ||
            !in_sampling_bounds(next, q.x() + half, q.y() + half, 0.0)) {
            return false;
        }
        Vec2 b = Vec2::Zero();
        double ssd = 0.0;
        idx = 0;
        for (int dy = -half; dy <= half; ++dy) {
            for (int dx = -half; dx <= half; ++dx, ++idx) {
                const double di = tmpl[idx] - sample_bilinear(next, q.x() + dx, q.y() + dy);
                b += grad[idx] * di;
                ssd += di * di;
            }
        }
        rms = std::sqrt(ssd / n);
        const Vec2 step = g_inv * b;
        d += step;
        if (step.norm() < params.epsilon) break;
    }
    if (rms_out) *rms_out = rms;
    return true;
}

} // namespace

std::vector<TrackedPoint> klt_track(const ImagePyramid& prev, const ImagePyramid& next,
                                    const std::vector<Vec2>& points,
                                    const std::vector<Vec2>* initial_guess,
                                    const KltParams& params) {
    std::vector<TrackedPoint> out(points.size());
    const int top = prev.num_levels() - 1;
    for (size_t i = 0; i < points.size(); ++i) {
        const Vec2 p0 = points[i];
        const Vec2 guess = initial_guess ? Vec2((*initial_guess)[i] - p0) : Vec2::Zero();
        const double level_scale = static_cast<double>(1 << top);
        Vec2 d = guess / level_scale;
        bool ok = true;
        double rms = 0.0;
        for (int l = top; l >= 0; --l) {
            const double s = static_cast<double>(1 << l);
            const Vec2 pl((p0.x() + 0.5) / s - 0.5, (p0.y() + 0.5) / s - 0.5);
            const bool level_ok = klt_level(prev.level(l), next.level(l), pl, d, params, &rms);
            if (!level_ok && l == 0) { // coarse levels only accelerate
                ok = false;
                break;
            }
            if (d.norm() > 2.0 * params.window) { // divergence
                ok = false;
                break;
            }
            if (l > 0) d *= 2.0;
        }
        if (ok && rms > params.max_rms_residual) ok = false;
        out[i].ok = ok;
        out[i].point = ok ? Vec2(p0 + d) : p0;
    }
    return out;
}

BriefPattern::BriefPattern(std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coord(-20, 20);
    for (auto& pair : pairs) {
        do {
            pair[0] = static_cast<std::int8_t>(coord(rng));
            pair[1] = static_cast<std::int8_t>(coord(rng));
            pair[2] = static_cast<std::int8_t>(coord(rng));
            pair[3] = static_cast<std::int8_t>(coord(rng));
        } while (pair[0] == pair[2] && pair[1] == pair[3]);
    }
}

bool descriptor_in_bounds(const GrayImage& img, const Vec2& point) {
    const int cx = static_cast<int>(std::lround(point.x()));
    const int cy = static_cast<int>(std::lround(point.y()));
    return cx - 24 >= 0 && cy - 24 >= 0 && cx + 24 < img.width() && cy + 24 < img.height();
}

namespace {
// 5x5 box mean at integer offset from the (rounded) center.
inline float smoothed(const GrayImage& img, int cx, int cy) {
    float s = 0.0f;
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) s += img.at(cx + dx, cy + dy);
    return s / 25.0f;
}
} // namespace

BinaryDescriptor brief_descriptor(const GrayImage& img, const Vec2& point,
                                  const BriefPattern& pattern) {
    if (!descriptor_in_bounds(img, point)) {
        throw OutOfBounds("descriptor patch outside image");
    }
    const int cx = static_cast<int>(std::lround(point.x()));
    const int cy = static_cast<int>(std::lround(point.y()));
    BinaryDescriptor desc{};
    for (size_t i = 0; i < pattern.pairs.size(); ++i) {
        const auto& p = pattern.pairs[i];
        const float a = smoothed(img, cx + p[0], cy + p[1]);
        const float b = smoothed(img, cx + p[2], cy + p[3]);
        if (a < b) desc[i >> 6] |= (std::uint64_t{1} << (i & 63));
    }
    return desc;
}

BinaryDescriptor brief_descriptor(const GrayImage& img, const Vec2& point,
                                  std::uint32_t pattern_seed) {
    if (pattern_seed == kDefaultBriefSeed) {
        static const BriefPattern default_pattern(kDefaultBriefSeed);
        return brief_descriptor(img, point, default_pattern);
    }
    return brief_descriptor(img, point, BriefPattern(pattern_seed));
}

int hamming_distance(const BinaryDescriptor& a, const BinaryDescriptor& b) {
    int d = 0;
    for (size_t i = 0; i < a.size(); ++i) d += std::popcount(a[i] ^ b[i]);
    return d;
}

namespace {

TextQuad quad_at_level(const TextQuad& quad, int level) {
    const double s = static_cast<double>(1 << level);
    TextQuad out;
    for (size_t i = 0; i < 4; ++i) {
        out.corners[i] = Vec2((quad.corners[i].x() + 0.5) / s - 0.5,
                              (quad.corners[i].y() + 0.5) / s - 0.5);
    }
    return out;
}

} // namespace

RepresentativePixelSet select_representative_pixels(const TextQuad& quad,
                                                    const ImagePyramid& pyramid,
                                                    const RepresentativePixelParams& params) {
    if (quad.area() < 25.0) throw EmptyTextRegion("quad area below 25 px^2");
    RepresentativePixelSet out;

    const GrayImage& base = pyramid.level(0);
    const auto [lo, hi] = quad.bounding_box();
    const int x0 = std::max(3, static_cast<int>(std::floor(lo.x())));
    const int y0 = std::max(3, static_cast<int>(std::floor(lo.y())));
    const int x1 = std::min(base.width() - 4, static_cast<int>(std::ceil(hi.x())));
    const int y1 = std::min(base.height() - 4, static_cast<int>(std::ceil(hi.y())));
    if (x1 <= x0 || y1 <= y0) throw OutOfBounds("text quad outside image");

    struct Cand {
        Vec2 pt;
        float score;
    };
    std::vector<Cand> cands;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (!quad.contains(Vec2(x, y))) continue;
            const float s = segment_test_score(base, x, y, params.corner);
            if (s > 0.0f) cands.push_back({Vec2(x, y), s});
        }
    }
    // crude 3x3 suppression: keep local best among collected candidates
    std::sort(cands.begin(), cands.end(),
              [](const Cand& a, const Cand& b) { return a.score > b.score; });
    std::vector<Cand> kept;
    for (const Cand& c : cands) {
        bool clear = true;
        for (const Cand& k : kept) {
            if (std::abs(k.pt.x() - c.pt.x()) <= 1.5 && std::abs(k.pt.y() - c.pt.y()) <= 1.5) {
                clear = false;
                break;
            }
        }
        if (clear) kept.push_back(c);
        if (static_cast<int>(kept.size()) >= params.max_level0) break;
    }
    if (static_cast<int>(kept.size()) < params.min_corner_count) {
        kept.clear();
        std::vector<Cand> grads;
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (!quad.contains(Vec2(x, y))) continue;
                grads.push_back({Vec2(x, y), static_cast<float>(gradient(base, x, y).norm())});
            }
        }
        std::sort(grads.begin(), grads.end(),
                  [](const Cand& a, const Cand& b) { return a.score > b.score; });
        for (const Cand& c : grads) {
            bool clear = true;
            for (const Cand& k : kept) {
                if (std::abs(k.pt.x() - c.pt.x()) <= 1.5 && std::abs(k.pt.y() - c.pt.y()) <= 1.5) {
                    clear = false;
                    break;
                }
            }
            if (clear) kept.push_back(c);
            if (static_cast<int>(kept.size()) >= params.fallback_count) break;
        }
    }
    if (kept.empty()) throw EmptyTextRegion("no usable pixels inside text quad");
    for (const Cand& c : kept) out.pixels[0].push_back(c.pt);
    const int n0 = static_cast<int>(out.pixels[0].size());

    for (int l = 1; l < pyramid.num_levels(); ++l) {
        const GrayImage& img = pyramid.level(l);
        const TextQuad ql = quad_at_level(quad, l);
        const auto [llo, lhi] = ql.bounding_box();
        const double bx0 = std::max(1.5, llo.x());
        const double by0 = std::max(1.5, llo.y());
        const double bx1 = std::min(img.width() - 2.5, lhi.x());
        const double by1 = std::min(img.height() - 2.5, lhi.y());
        if (bx1 <= bx0 || by1 <= by0) continue;

        const int cell_budget = n0 / (1 << (2 * l)) + 100;
        const double aspect = (bx1 - bx0) / (by1 - by0);
        int cols = std::max(1, static_cast<int>(std::round(std::sqrt(cell_budget * aspect))));
        int rows = std::max(1, (cell_budget + cols - 1) / cols);
        const double cw = (bx1 - bx0) / cols;
        const double ch = (by1 - by0) / rows;

        struct CellBest {
            Vec2 pt;
            double mag = -1.0;
        };
        std::vector<CellBest> best(static_cast<size_t>(rows) * cols);
        for (int y = static_cast<int>(std::ceil(by0)); y <= static_cast<int>(std::floor(by1)); ++y) {
            for (int x = static_cast<int>(std::ceil(bx0)); x <= static_cast<int>(std::floor(bx1)); ++x) {
                if (!ql.contains(Vec2(x, y))) continue;
                const int gx = std::min(cols - 1, static_cast<int>((x - bx0) / cw));
                const int gy = std::min(rows - 1, static_cast<int>((y - by0) / ch));
                const double mag = gradient(img, x, y).norm();
                CellBest& cb = best[static_cast<size_t>(gy) * cols + gx];
                if (mag > cb.mag) cb = {Vec2(x, y), mag};
            }
        }
        std::vector<CellBest> winners;
        for (const CellBest& cb : best) {
            if (cb.mag >= 0.0) winners.push_back(cb);
        }
        if (static_cast<int>(winners.size()) > cell_budget) {
            std::sort(winners.begin(), winners.end(),
                      [](const CellBest& a, const CellBest& b) { return a.mag > b.mag; });
            winners.resize(cell_budget);
        }
        for (const CellBest& cb : winners) out.pixels[l].push_back(cb.pt);
    }
    return out;
}

} // namespace tslam
