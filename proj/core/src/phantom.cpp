#include "fixsearch/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fixsearch/errors.hpp"
#include "fixsearch/parallel.hpp"
#include "fixsearch/rng.hpp"

namespace fixsearch {

namespace {

// Counter-RNG stream ids.
constexpr uint64_t kStreamBlobX = 1;
constexpr uint64_t kStreamBlobY = 2;
constexpr uint64_t kStreamLesionAngle = 3;

struct DensityFactors {
    double n_scale;
    double amp_scale;
};

// Ordered so that measured background variance is strictly
// heterogeneous > scattered > fatty.
DensityFactors density_factors(DensityClass d) {
    switch (d) {
        case DensityClass::Fatty: return {0.5, 0.6};
        case DensityClass::Scattered: return {1.0, 1.0};
        case DensityClass::Heterogeneous: return {1.75, 1.5};
    }
    return {1.0, 1.0};
}

} // namespace

DensityClass density_class_from_string(const std::string& s) {
    if (s == "fatty") return DensityClass::Fatty;
    if (s == "scattered") return DensityClass::Scattered;
    if (s == "heterogeneous") return DensityClass::Heterogeneous;
    throw ValidationError("density class must be 'fatty', 'scattered' or 'heterogeneous'");
}

std::string to_string(DensityClass d) {
    switch (d) {
        case DensityClass::Fatty: return "fatty";
        case DensityClass::Scattered: return "scattered";
        case DensityClass::Heterogeneous: return "heterogeneous";
    }
    return "scattered";
}

void PhantomSpec::validate_or_throw() const {
    if (width < 1 || height < 1) throw ValidationError("phantom dimensions must be positive");
    if (n_blobs < 0) throw ValidationError("phantom requires n_blobs >= 0");
    if (!(blob_sigma > 0.0)) throw ValidationError("phantom requires blob_sigma > 0");
    if (!(lesion.radius > 0.0)) throw ValidationError("lesion radius must be > 0");
    if (lesion.spicules < 0) throw ValidationError("lesion spicule count must be >= 0");
    const double extent = lesion.radius + spicule_length();
    if (lesion.cx - extent < 0.0 || lesion.cx + extent >= width ||
        lesion.cy - extent < 0.0 || lesion.cy + extent >= height)
        throw ValidationError("lesion outside bounds: center must be at least radius + spicule length from every edge");
}

GrayImage generate_background(const PhantomSpec& spec) {
    spec.validate_or_throw();
    const DensityFactors f = density_factors(spec.density_class);
    const int nb = static_cast<int>(std::lround(spec.n_blobs * f.n_scale));
    const double amp = spec.blob_amp * f.amp_scale;
    const double sigma = spec.blob_sigma;
    const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
    const double reach = 4.0 * sigma;

    std::vector<double> bx(nb), by(nb);
    for (int i = 0; i < nb; ++i) {
        bx[i] = counter_u01(spec.seed, kStreamBlobX, static_cast<uint64_t>(i)) * spec.width;
        by[i] = counter_u01(spec.seed, kStreamBlobY, static_cast<uint64_t>(i)) * spec.height;
    }

    GrayImage img(spec.width, spec.height, 0.0, spec.pitch_mm);
    // Per-pixel accumulation order is blob index ascending regardless of the
    // row partitioning, so the output is thread-count independent.
    parallel_chunks(spec.height, [&](int64_t y0, int64_t y1) {
        for (int y = static_cast<int>(y0); y < y1; ++y) {
            for (int i = 0; i < nb; ++i) {
                const double dy = y - by[i];
                if (std::abs(dy) > reach) continue;
                const int x0 = std::max(0, static_cast<int>(std::floor(bx[i] - reach)));
                const int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(bx[i] + reach)));
                for (int x = x0; x <= x1; ++x) {
                    const double dx = x - bx[i];
                    img.at(x, y) += amp * std::exp(-(dx * dx + dy * dy) * inv2s2);
                }
            }
        }
    });
    return img;
}

std::pair<GrayImage, LesionTruth> generate(const PhantomSpec& spec) {
    GrayImage img = generate_background(spec);

    const LesionSpec& le = spec.lesion;
    const double r = le.radius;
    const double len = spec.spicule_length();
    const double ridge_w = 1.2; // spicule Gaussian cross-section, pixels
    const double ridge_r0 = 0.95 * r;
    const double ridge_r1 = r + len;
    const double base_angle =
        2.0 * std::numbers::pi * counter_u01(spec.seed, kStreamLesionAngle, 0);

    std::vector<double> ux(le.spicules), uy(le.spicules);
    for (int j = 0; j < le.spicules; ++j) {
        const double a = base_angle + 2.0 * std::numbers::pi * j / le.spicules;
        ux[j] = std::cos(a);
        uy[j] = std::sin(a);
    }

    const double extent = ridge_r1 + 4.0 * ridge_w;
    const int y0 = std::max(0, static_cast<int>(std::floor(le.cy - extent)));
    const int y1 = std::min(spec.height - 1, static_cast<int>(std::ceil(le.cy + extent)));
    const int x0 = std::max(0, static_cast<int>(std::floor(le.cx - extent)));
    const int x1 = std::min(spec.width - 1, static_cast<int>(std::ceil(le.cx + extent)));

    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - le.cx;
            const double dy = y - le.cy;
            const double rr = std::sqrt(dx * dx + dy * dy);
            double add = 0.0;
            if (rr <= r) {
                const double u = rr / r;
                add += le.contrast * (1.0 - u * u); // radially decaying disk
            }
            for (int j = 0; j < le.spicules; ++j) {
                const double t = dx * ux[j] + dy * uy[j];
                if (t < ridge_r0 || t > ridge_r1) continue;
                const double px = dx - t * ux[j];
                const double py = dy - t * uy[j];
                const double perp2 = px * px + py * py;
                const double taper = 1.0 - (t - ridge_r0) / (ridge_r1 - ridge_r0);
                add += 0.8 * le.contrast * taper * std::exp(-perp2 / (2.0 * ridge_w * ridge_w));
            }
            img.at(x, y) += add;
        }
    }

    return {std::move(img), LesionTruth{le.cx, le.cy, le.radius}};
}

} // namespace fixsearch
