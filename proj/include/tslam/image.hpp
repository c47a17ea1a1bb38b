#ifndef TSLAM_IMAGE_HPP
#define TSLAM_IMAGE_HPP

#include "tslam/errors.hpp"
#include "tslam/se3.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tslam {

/// Row-major grayscale image with float intensities in [0, 255].
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, float fill = 0.0f)
        : width_(width), height_(height), data_(static_cast<size_t>(width) * height, fill) {}

    static GrayImage from_bytes(int width, int height, const std::vector<std::uint8_t>& bytes);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return data_.empty(); }

    float at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }
    float& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }

    const std::vector<float>& data() const { return data_; }
    std::vector<float>& data() { return data_; }

    double mean() const;
    std::vector<std::uint8_t> to_bytes() const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<float> data_;
};

constexpr int kPyramidLevels = 3;

/// Three-level pyramid; each coarser pixel is the 2x2 box average of the finer level.
class ImagePyramid {
public:
    ImagePyramid() = default;
    explicit ImagePyramid(const std::vector<GrayImage>& levels) : levels_(levels) {}

    const GrayImage& level(int l) const { return levels_[l]; }
    int num_levels() const { return static_cast<int>(levels_.size()); }
    bool empty() const { return levels_.empty(); }

private:
    std::vector<GrayImage> levels_;
};

ImagePyramid build_pyramid(const GrayImage& img);

/// Bilinear intensity at (x, y); requires 1 px of margin from the border.
double sample_bilinear(const GrayImage& img, double x, double y);

/// Central differences of bilinear samples with unit step.
Vec2 gradient(const GrayImage& img, double x, double y);

/// Exact derivative of the bilinear interpolant at (x, y); piecewise constant
/// per cell in x and y. This is what photometric Jacobians chain through.
Vec2 bilinear_gradient(const GrayImage& img, double x, double y);

inline bool in_sampling_bounds(const GrayImage& img, double x, double y, double margin = 1.0) {
    return x >= margin && y >= margin && x <= img.width() - 1 - margin &&
           y <= img.height() - 1 - margin;
}

// --- file I/O ---------------------------------------------------------------

/// Reads an 8-bit PNG or PGM image; RGB inputs are converted with luma
/// weights 0.299 / 0.587 / 0.114.
GrayImage load_image(const std::string& path);

void save_png(const GrayImage& img, const std::string& path);
void save_pgm(const GrayImage& img, const std::string& path);

} // namespace tslam

#endif
