#include "fixsearch/glcm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "fixsearch/errors.hpp"
#include "fixsearch/parallel.hpp"

namespace fixsearch {

namespace {

// Window of `window` pixels centered on the stride cell starting at base,
// clipped to [0, n). With stride == window this is the cell itself.
std::pair<int, int> window_span(int base, int stride, int window, int n) {
    int lo = base + (stride - window) / 2;
    int hi = lo + window;
    return {std::max(0, lo), std::min(n, hi)};
}

// Window centered on a single pixel (the stride == 1 case of window_span).
std::pair<int, int> point_span(int p, int window, int n) {
    return window_span(p, 1, window, n);
}

} // namespace

void GlcmConfig::validate_or_throw() const {
    if (levels < 2) throw ValidationError("GLCM config requires levels >= 2");
    if (window < 2) throw ValidationError("GLCM config requires window >= 2");
    if (stride < 0) throw ValidationError("GLCM config requires stride >= 1 (or 0 for stride = window)");
    if (std::abs(dx) >= window || std::abs(dy) >= window)
        throw ValidationError("GLCM offset must satisfy |dx| < window and |dy| < window");
    if (dx == 0 && dy == 0) throw ValidationError("GLCM offset must be non-zero");
}

Glcm compute_glcm_rect(const QuantizedImage& qimg, int x0, int y0, int x1, int y1,
                       std::pair<int, int> offset) {
    const auto [dx, dy] = offset;
    // Reference pixel range such that both (x, y) and (x+dx, y+dy) stay inside
    // the rect.
    const int rx0 = std::max(x0, x0 - dx);
    const int rx1 = std::min(x1, x1 - dx);
    const int ry0 = std::max(y0, y0 - dy);
    const int ry1 = std::min(y1, y1 - dy);
    if (rx0 >= rx1 || ry0 >= ry1) throw ValidationError("empty co-occurrence domain");

    const int g = qimg.levels;
    std::vector<uint64_t> counts(static_cast<size_t>(g) * g, 0);
    uint64_t total = 0;
    for (int y = ry0; y < ry1; ++y) {
        for (int x = rx0; x < rx1; ++x) {
            const int i = qimg.at(x, y);
            const int j = qimg.at(x + dx, y + dy);
            ++counts[static_cast<size_t>(i) * g + j];
            ++total;
        }
    }

    Glcm out;
    out.levels = g;
    out.p.resize(counts.size());
    const double inv = 1.0 / static_cast<double>(total);
    for (size_t k = 0; k < counts.size(); ++k)
        out.p[k] = static_cast<double>(counts[k]) * inv;
    return out;
}

Glcm compute_glcm(const QuantizedImage& patch, std::pair<int, int> offset) {
    return compute_glcm_rect(patch, 0, 0, patch.width, patch.height, offset);
}

double glcm_mean(const Glcm& g) {
    double acc = 0.0;
    for (int i = 0; i < g.levels; ++i) {
        double row = 0.0;
        for (int j = 0; j < g.levels; ++j) row += g.at(i, j);
        acc += static_cast<double>(i) * row;
    }
    return acc;
}

double glcm_contrast(const Glcm& g) {
    double acc = 0.0;
    for (int i = 0; i < g.levels; ++i)
        for (int j = 0; j < g.levels; ++j) {
            const double d = static_cast<double>(i - j);
            acc += d * d * g.at(i, j);
        }
    return acc;
}

GlcmTileGrid glcm_tile_features(const GrayImage& img, const GlcmConfig& cfg) {
    cfg.validate_or_throw();
    if (img.width < cfg.window || img.height < cfg.window)
        throw ValidationError("image smaller than GLCM window");

    const int stride = cfg.effective_stride();
    const QuantizedImage q = quantize(img, cfg.levels);

    GlcmTileGrid grid;
    grid.width = img.width;
    grid.height = img.height;
    grid.window = cfg.window;
    grid.stride = stride;
    grid.nx = (img.width + stride - 1) / stride;
    grid.ny = (img.height + stride - 1) / stride;
    grid.mean.assign(static_cast<size_t>(grid.nx) * grid.ny, 0.0);
    grid.contrast.assign(static_cast<size_t>(grid.nx) * grid.ny, 0.0);

    const std::pair<int, int> offset{cfg.dx, cfg.dy};
    parallel_chunks(static_cast<int64_t>(grid.nx) * grid.ny, [&](int64_t lo, int64_t hi) {
        for (int64_t t = lo; t < hi; ++t) {
            const int ix = static_cast<int>(t % grid.nx);
            const int iy = static_cast<int>(t / grid.nx);
            const auto [wx0, wx1] = window_span(ix * stride, stride, cfg.window, img.width);
            const auto [wy0, wy1] = window_span(iy * stride, stride, cfg.window, img.height);
            const Glcm g = compute_glcm_rect(q, wx0, wy0, wx1, wy1, offset);
            grid.mean[t] = glcm_mean(g);
            grid.contrast[t] = glcm_contrast(g);
        }
    });
    return grid;
}

std::pair<FeatureMap, FeatureMap> glcm_feature_maps(const GrayImage& img, const GlcmConfig& cfg) {
    const GlcmTileGrid grid = glcm_tile_features(img, cfg);
    FeatureMap mean(img.width, img.height, 0.0, img.pitch_mm);
    FeatureMap contrast(img.width, img.height, 0.0, img.pitch_mm);
    for (int y = 0; y < img.height; ++y) {
        const int iy = grid.cell_of_y(y);
        for (int x = 0; x < img.width; ++x) {
            const size_t t = static_cast<size_t>(iy) * grid.nx + grid.cell_of_x(x);
            mean.at(x, y) = grid.mean[t];
            contrast.at(x, y) = grid.contrast[t];
        }
    }
    return {std::move(mean), std::move(contrast)};
}

std::vector<std::pair<double, double>> glcm_at_points(const GrayImage& img,
                                                      const std::vector<std::pair<int, int>>& points,
                                                      const GlcmConfig& cfg) {
    cfg.validate_or_throw();
    validate(img);
    if (points.empty()) return {};

    for (const auto& [px, py] : points)
        if (!img.in_bounds(px, py)) throw ValidationError("GLCM sample point outside image");

    const QuantizedImage q = quantize(img, cfg.levels);
    const std::pair<int, int> offset{cfg.dx, cfg.dy};
    std::vector<std::pair<double, double>> out(points.size());
    parallel_chunks(static_cast<int64_t>(points.size()), [&](int64_t lo, int64_t hi) {
        for (int64_t k = lo; k < hi; ++k) {
            const auto [px, py] = points[k];
            const auto [wx0, wx1] = point_span(px, cfg.window, img.width);
            const auto [wy0, wy1] = point_span(py, cfg.window, img.height);
            const Glcm g = compute_glcm_rect(q, wx0, wy0, wx1, wy1, offset);
            out[k] = {glcm_mean(g), glcm_contrast(g)};
        }
    });
    return out;
}

} // namespace fixsearch
