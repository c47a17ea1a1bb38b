#ifndef TSLAM_FEATURES_HPP
#define TSLAM_FEATURES_HPP

#include "tslam/geometry.hpp"
#include "tslam/image.hpp"

#include <array>
#include <bitset>
#include <cstdint>
#include <vector>

namespace tslam {

struct CornerParams {
    float threshold = 20.0f;  // intensity units for the segment test
    int min_arc = 9;          // contiguous circle pixels required
};

/// Segment-test corners on a 16-pixel Bresenham circle, grid-bucketed with
/// per-cell non-max suppression by corner score.
std::vector<Vec2> detect_corners(const GrayImage& img, int max_count, int grid_cells,
                                 const CornerParams& params = {});

struct KltParams {
    int window = 21;
    int max_iterations = 30;
    double epsilon = 0.01;          // px; convergence on the update norm
    double max_rms_residual = 25.0; // intensity units over the window
    double min_eigenvalue = 0.05;   // of the normalized structure tensor
};

struct TrackedPoint {
    Vec2 point = Vec2::Zero();
    bool ok = false;
};

/// Pyramidal Lucas-Kanade translation tracking.
std::vector<TrackedPoint> klt_track(const ImagePyramid& prev, const ImagePyramid& next,
                                    const std::vector<Vec2>& points,
                                    const std::vector<Vec2>* initial_guess = nullptr,
                                    const KltParams& params = {});

using BinaryDescriptor = std::array<std::uint64_t, 4>; // 256 bits

constexpr std::uint32_t kDefaultBriefSeed = 0x51f3a1u;

/// Fixed pseudo-random 256-pair comparison pattern.
struct BriefPattern {
    std::array<std::array<std::int8_t, 4>, 256> pairs{}; // x1, y1, x2, y2 offsets
    explicit BriefPattern(std::uint32_t seed = kDefaultBriefSeed);
};

/// 256-bit intensity-pair descriptor over a 48x48 patch, box-smoothed 5x5 first.
BinaryDescriptor brief_descriptor(const GrayImage& img, const Vec2& point,
                                  const BriefPattern& pattern);
BinaryDescriptor brief_descriptor(const GrayImage& img, const Vec2& point,
                                  std::uint32_t pattern_seed = kDefaultBriefSeed);

int hamming_distance(const BinaryDescriptor& a, const BinaryDescriptor& b);

/// Whether the 48x48 descriptor patch (plus smoothing margin) fits in the image.
bool descriptor_in_bounds(const GrayImage& img, const Vec2& point);

// DSO-style eight-pixel residual pattern around each representative pixel.
constexpr std::array<std::array<int, 2>, 8> kResidualPattern = {
    {{0, 0}, {-2, 0}, {2, 0}, {0, -2}, {0, 2}, {-1, -1}, {1, -1}, {-1, 1}}};

/// Pixels used to evaluate the text photometric error, per pyramid level.
struct RepresentativePixelSet {
    // pixels[l] are pixel locations at level l (level-l coordinates).
    std::array<std::vector<Vec2>, kPyramidLevels> pixels;
    int level0_count() const { return static_cast<int>(pixels[0].size()); }
};

struct RepresentativePixelParams {
    int max_level0 = 400;
    int min_corner_count = 25; // below this, fall back to top-gradient pixels
    int fallback_count = 200;
    CornerParams corner{};
};

/// Level 0: corner-like pixels inside the quad (gradient fallback); coarser
/// levels: one max-gradient pixel per cell of an N0/4^l + 100 grid over the
/// quad bounding box.
RepresentativePixelSet select_representative_pixels(const TextQuad& quad,
                                                    const ImagePyramid& pyramid,
                                                    const RepresentativePixelParams& params = {});

} // namespace tslam

#endif
