#pragma once

#include <string>
#include <vector>

#include "fixsearch/image.hpp"

namespace fixsearch {

/// One Gabor filter: isotropic Gaussian envelope (FWHM convention, width ws)
/// times an oriented cosine carrier.
struct GaborParams {
    double ws = 50.0;      // envelope width, pixels (FWHM)
    double fc = 0.02;      // carrier frequency, cycles per pixel
    double theta = 0.0;    // carrier orientation, radians
    double phi = 0.0;      // carrier phase, radians
    int support = 75;      // kernel side length, odd

    void validate_or_throw() const;
};

struct GaborBankConfig {
    std::vector<GaborParams> filters;

    /// Four orientations {0, pi/4, pi/2, 3pi/4} sharing ws, fc = 1/ws, phi = 0.
    /// ws defaults to the phantom lesion diameter in pixels.
    static GaborBankConfig default_bank(double ws = 50.0);

    void validate_or_throw() const;
};

struct Kernel {
    int support = 0;
    std::vector<double> values; // row-major support x support

    double at(int x, int y) const { return values[static_cast<size_t>(y) * support + x]; }
};

/// Channels of equal dimensions, one per bank filter.
struct FeatureStack {
    std::vector<FeatureMap> channels;
    std::vector<std::string> names;

    int width() const { return channels.empty() ? 0 : channels.front().width; }
    int height() const { return channels.empty() ? 0 : channels.front().height; }
};

/// Samples
///   exp(-4 ln2 ((x-x0)^2 + (y-y0)^2) / ws^2)
///     * cos(2 pi fc ((x-x0) cos theta + (y-y0) sin theta) + phi)
/// on a support x support grid with (x0, y0) at the kernel center.
Kernel make_kernel(const GaborParams& p);

/// Cross-correlation of the image with every bank kernel, "same" output size,
/// zero-padded borders. The isotropic envelope makes each kernel the sum of
/// two separable products, so each channel is computed as two separable
/// passes; the result matches direct correlation to ~1e-12.
FeatureStack apply_bank(const GrayImage& img, const GaborBankConfig& bank);

} // namespace fixsearch
