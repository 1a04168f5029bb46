#pragma once

#include <cstdint>
#include <string>

#include "fixsearch/image.hpp"

namespace fixsearch {

/// Breast-density presets ordered by background business; they scale the
/// blob count and amplitude (see density_factors in phantom.cpp).
enum class DensityClass { Fatty, Scattered, Heterogeneous };

DensityClass density_class_from_string(const std::string& s);
std::string to_string(DensityClass d);

struct LesionSpec {
    double cx = 256.0;
    double cy = 256.0;
    double radius = 25.0;   // pixels
    double contrast = 3.0;  // peak added intensity at the lesion center
    int spicules = 12;      // thin radial ridges; 0 for a plain blob
};

/// Synthetic 2D test image: a lumpy background of seeded Gaussian blobs plus
/// an inserted lesion at a known location. Deterministic per seed; blob i's
/// parameters depend only on (seed, i) via splitmix64 counter mixing.
struct PhantomSpec {
    int width = 512;
    int height = 512;
    uint64_t seed = 0;
    int n_blobs = 160;       // base count, scaled by the density preset
    double blob_sigma = 12.0;
    double blob_amp = 1.0;   // base amplitude, scaled by the density preset
    DensityClass density_class = DensityClass::Scattered;
    double pitch_mm = 0.4;   // desk-scale stand-in geometry
    LesionSpec lesion;

    /// Spicule ridges run from 0.95 r to r + spicule_length().
    double spicule_length() const { return lesion.spicules > 0 ? lesion.radius * 0.5 : 0.0; }
    void validate_or_throw() const;
};

struct LesionTruth {
    double cx = 0.0, cy = 0.0;
    double radius = 0.0;
};

/// Background only (all blobs, no lesion).
GrayImage generate_background(const PhantomSpec& spec);

/// Background plus lesion; returns the image and the ground-truth descriptor.
std::pair<GrayImage, LesionTruth> generate(const PhantomSpec& spec);

} // namespace fixsearch
