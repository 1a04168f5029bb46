#pragma once

#include <string>

#include "fixsearch/image.hpp"

namespace fixsearch {

struct CandidateSet;

enum class ImageFormat { Pgm8, Pgm16, RawF32 };

/// Picks the on-disk format from the file: .raw -> RawF32, .pgm -> Pgm8 or
/// Pgm16 depending on the stored maxval.
ImageFormat detect_format(const std::string& path);

/// Values are loaded exactly as stored, no rescale. RawF32 expects a
/// little-endian float payload plus a sidecar JSON header at <path>.json
/// with {"width", "height", "pitch_mm"}.
GrayImage load_image(const std::string& path, ImageFormat format);
GrayImage load_image(const std::string& path); // detect_format + load

/// PGM "P5", binary. bits must be 8 or 16; 16-bit samples are big-endian.
/// Values must already be integers in range, so that load(save(x)) == x.
void save_pgm(const GrayImage& img, const std::string& path, int bits);

/// Little-endian f32 payload + sidecar JSON header at <path>.json.
void save_raw_f32(const GrayImage& img, const std::string& path);

/// Feature maps are persisted as raw-f32.
void save_feature_map(const FeatureMap& map, const std::string& path);

/// Renders the min-max normalized image with white (255) cross markers
/// burned in at candidate coordinates. Format by extension: .png or .pgm.
void save_overlay(const GrayImage& img, const CandidateSet& candidates,
                  const std::string& path, int marker_radius = 5);

/// 8-bit grayscale writers used by save_overlay; gray.size() == w*h.
void save_png8(const std::vector<uint8_t>& gray, int w, int h, const std::string& path);

} // namespace fixsearch
