#pragma once

#include <cstdint>
#include <vector>

namespace fixsearch {

/// 2D scalar raster, row-major. Coordinate convention used project-wide:
/// x = column, y = row, origin at the top-left pixel.
struct GrayImage {
    int width = 0;
    int height = 0;
    double pitch_mm = 1.0;
    std::vector<double> data;

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0, double pitch = 1.0)
        : width(w), height(h), pitch_mm(pitch),
          data(static_cast<size_t>(w) * static_cast<size_t>(h), fill) {}

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
    size_t size() const { return data.size(); }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

/// A feature map is an image-shaped raster of feature responses.
using FeatureMap = GrayImage;

/// Gray levels reduced to integers in [0, levels).
struct QuantizedImage {
    int width = 0;
    int height = 0;
    int levels = 0;
    std::vector<int> data;

    QuantizedImage() = default;
    QuantizedImage(int w, int h, int g)
        : width(w), height(h), levels(g),
          data(static_cast<size_t>(w) * static_cast<size_t>(h), 0) {}

    int& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    int at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }
};

/// Throws ValidationError unless the image satisfies its invariants
/// (positive dimensions, data length, all values finite).
void validate(const GrayImage& img);

/// Linear min-max binning into `levels` gray levels:
///   q = floor((v - min) * levels / (max - min + eps)), clamped to [0, levels-1].
/// eps = max((max - min) * 2^-23, 1e-300), so the maximum never spills into
/// bin `levels` and a constant image maps entirely to level 0.
QuantizedImage quantize(const GrayImage& img, int levels);

/// Min-max rescale to [0, 255] rounded to nearest; a constant image maps to 0.
std::vector<uint8_t> normalize_to_u8(const GrayImage& img);

} // namespace fixsearch
