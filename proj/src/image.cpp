#include "tslam/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tslam {

GrayImage GrayImage::from_bytes(int width, int height, const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() != static_cast<size_t>(width) * height) {
        throw SizeMismatch("byte buffer does not match image dimensions");
    }
    GrayImage img(width, height);
    std::copy(bytes.begin(), bytes.end(), img.data_.begin());
    return img;
}

double GrayImage::mean() const {
    if (data_.empty()) return 0.0;
    return std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

std::vector<std::uint8_t> GrayImage::to_bytes() const {
    std::vector<std::uint8_t> out(data_.size());
    for (size_t i = 0; i < data_.size(); ++i) {
        const float v = std::clamp(data_[i], 0.0f, 255.0f);
        out[i] = static_cast<std::uint8_t>(std::lround(v));
    }
    return out;
}

ImagePyramid build_pyramid(const GrayImage& img) {
    const int min_dim = 4 * (1 << (kPyramidLevels - 1));
    if (img.width() < min_dim || img.height() < min_dim) {
        throw ImageTooSmall("pyramid needs at least " + std::to_string(min_dim) +
                            " pixels per side");
    }
    std::vector<GrayImage> levels;
    levels.reserve(kPyramidLevels);
    levels.push_back(img);
    for (int l = 1; l < kPyramidLevels; ++l) {
        const GrayImage& fine = levels.back();
        GrayImage coarse(fine.width() / 2, fine.height() / 2);
        for (int y = 0; y < coarse.height(); ++y) {
            for (int x = 0; x < coarse.width(); ++x) {
                const float s = fine.at(2 * x, 2 * y) + fine.at(2 * x + 1, 2 * y) +
                                fine.at(2 * x, 2 * y + 1) + fine.at(2 * x + 1, 2 * y + 1);
                coarse.at(x, y) = 0.25f * s;
            }
        }
        levels.push_back(std::move(coarse));
    }
    return ImagePyramid(levels);
}

double sample_bilinear(const GrayImage& img, double x, double y) {
    if (x < 0.0 || y < 0.0 || x > img.width() - 1 || y > img.height() - 1) {
        throw OutOfBounds("bilinear sample outside image");
    }
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    x0 = std::min(x0, img.width() - 2);
    y0 = std::min(y0, img.height() - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = img.at(x0, y0);
    const double v10 = img.at(x0 + 1, y0);
    const double v01 = img.at(x0, y0 + 1);
    const double v11 = img.at(x0 + 1, y0 + 1);
    return (1.0 - fx) * (1.0 - fy) * v00 + fx * (1.0 - fy) * v10 + (1.0 - fx) * fy * v01 +
           fx * fy * v11;
}

Vec2 bilinear_gradient(const GrayImage& img, double x, double y) {
    if (x < 0.0 || y < 0.0 || x > img.width() - 1 || y > img.height() - 1) {
        throw OutOfBounds("gradient sample outside image");
    }
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    x0 = std::min(x0, img.width() - 2);
    y0 = std::min(y0, img.height() - 2);
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = img.at(x0, y0);
    const double v10 = img.at(x0 + 1, y0);
    const double v01 = img.at(x0, y0 + 1);
    const double v11 = img.at(x0 + 1, y0 + 1);
    const double gx = (1.0 - fy) * (v10 - v00) + fy * (v11 - v01);
    const double gy = (1.0 - fx) * (v01 - v00) + fx * (v11 - v10);
    return {gx, gy};
}

Vec2 gradient(const GrayImage& img, double x, double y) {
    if (!in_sampling_bounds(img, x, y)) {
        throw OutOfBounds("gradient needs 1 px margin");
    }
    const double gx = 0.5 * (sample_bilinear(img, x + 1.0, y) - sample_bilinear(img, x - 1.0, y));
    const double gy = 0.5 * (sample_bilinear(img, x, y + 1.0) - sample_bilinear(img, x, y - 1.0));
    return {gx, gy};
}

} // namespace tslam
