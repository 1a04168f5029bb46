#pragma once

#include <utility>
#include <vector>

#include "fixsearch/image.hpp"

namespace fixsearch {

/// Controls quantization depth, window geometry and pair offset for GLCM
/// feature extraction. stride == 0 means stride = window (tiling); stride 1
/// gives a dense per-pixel map.
struct GlcmConfig {
    int levels = 128;
    int window = 100;
    int stride = 0;
    int dx = 1;
    int dy = 0;

    int effective_stride() const { return stride == 0 ? window : stride; }
    void validate_or_throw() const;
};

/// Normalized joint gray-level pair histogram for one region and offset.
/// p is row-major levels x levels; p(i, j) with i the reference pixel's level
/// and j the neighbor's. Directed counting, no symmetrization.
struct Glcm {
    int levels = 0;
    std::vector<double> p;

    double at(int i, int j) const { return p[static_cast<size_t>(i) * levels + j]; }
};

/// Counts ordered (reference, neighbor) pairs over all positions where both
/// pixels fall inside the patch, then normalizes by the total pair count.
Glcm compute_glcm(const QuantizedImage& patch, std::pair<int, int> offset);

/// Same, over the half-open sub-rectangle [x0, x1) x [y0, y1) of qimg.
Glcm compute_glcm_rect(const QuantizedImage& qimg, int x0, int y0, int x1, int y1,
                       std::pair<int, int> offset);

/// Expected gray level of the reference pixel: sum_ij i * p(i, j).
double glcm_mean(const Glcm& g);

/// Expected squared level difference: sum_ij (i - j)^2 * p(i, j).
double glcm_contrast(const Glcm& g);

/// Per-window features on the stride grid. Cell (ix, iy) covers pixels
/// [ix*stride, (ix+1)*stride) x [iy*stride, ...) clipped to the image; its
/// sampling window is the window-sized rect centered on the cell, clipped to
/// the image. With stride == window the windows are exactly the tiles.
struct GlcmTileGrid {
    int width = 0, height = 0;
    int nx = 0, ny = 0;
    int window = 0, stride = 0;
    std::vector<double> mean, contrast; // row-major iy*nx + ix

    int cell_x0(int ix) const { return ix * stride; }
    int cell_y0(int iy) const { return iy * stride; }
    int cell_x1(int ix) const { return std::min((ix + 1) * stride, width); }
    int cell_y1(int iy) const { return std::min((iy + 1) * stride, height); }
    /// Pixel center of a cell, used as the tile's sampling site.
    std::pair<int, int> cell_center(int ix, int iy) const {
        return {(cell_x0(ix) + cell_x1(ix) - 1) / 2, (cell_y0(iy) + cell_y1(iy) - 1) / 2};
    }
    int cell_of_x(int x) const { return std::min(x / stride, nx - 1); }
    int cell_of_y(int y) const { return std::min(y / stride, ny - 1); }
};

/// Quantizes once globally, then computes both features for every grid cell.
GlcmTileGrid glcm_tile_features(const GrayImage& img, const GlcmConfig& cfg);

/// The grid features painted back to image resolution: every pixel carries
/// the value of its cell's window.
std::pair<FeatureMap, FeatureMap> glcm_feature_maps(const GrayImage& img, const GlcmConfig& cfg);

/// Both features on the window centered at each point, clipped to the image.
/// Quantization is global, consistent with the map path.
std::vector<std::pair<double, double>> glcm_at_points(const GrayImage& img,
                                                      const std::vector<std::pair<int, int>>& points,
                                                      const GlcmConfig& cfg);

} // namespace fixsearch
