#include "fixsearch/image.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixsearch/errors.hpp"

namespace fixsearch {

void validate(const GrayImage& img) {
    if (img.width < 1 || img.height < 1)
        throw ValidationError("image dimensions must satisfy width >= 1 and height >= 1");
    if (img.data.size() != static_cast<size_t>(img.width) * static_cast<size_t>(img.height))
        throw ValidationError("image data length must equal width * height");
    for (double v : img.data)
        if (!std::isfinite(v))
            throw ValidationError("image values must be finite");
}

QuantizedImage quantize(const GrayImage& img, int levels) {
    if (levels < 2) throw ValidationError("quantize requires levels >= 2");
    validate(img);

    const auto [mn_it, mx_it] = std::minmax_element(img.data.begin(), img.data.end());
    const double mn = *mn_it, mx = *mx_it;
    const double eps = std::max((mx - mn) * 0x1.0p-23, 1e-300);
    const double scale = static_cast<double>(levels) / (mx - mn + eps);

    QuantizedImage q(img.width, img.height, levels);
    for (size_t i = 0; i < img.data.size(); ++i) {
        int v = static_cast<int>(std::floor((img.data[i] - mn) * scale));
        q.data[i] = std::clamp(v, 0, levels - 1);
    }
    return q;
}

std::vector<uint8_t> normalize_to_u8(const GrayImage& img) {
    validate(img);
    const auto [mn_it, mx_it] = std::minmax_element(img.data.begin(), img.data.end());
    const double mn = *mn_it, mx = *mx_it;
    std::vector<uint8_t> out(img.data.size(), 0);
    if (mx > mn) {
        const double scale = 255.0 / (mx - mn);
        for (size_t i = 0; i < img.data.size(); ++i)
            out[i] = static_cast<uint8_t>(std::lround((img.data[i] - mn) * scale));
    }
    return out;
}

} // namespace fixsearch
