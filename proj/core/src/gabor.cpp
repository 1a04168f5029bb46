#include "fixsearch/gabor.hpp"

#include <cmath>
#include <numbers>

#include "fixsearch/errors.hpp"
#include "fixsearch/parallel.hpp"

namespace fixsearch {

namespace {

constexpr double kFourLn2 = 4.0 * std::numbers::ln2;

// 1D correlation along rows: out(x, y) = sum_d taps[d+h] * img(x+d, y),
// zero-padded.
void correlate_rows(const GrayImage& in, const std::vector<double>& taps, GrayImage& out) {
    const int h = static_cast<int>(taps.size()) / 2;
    parallel_chunks(in.height, [&](int64_t y0, int64_t y1) {
        for (int y = static_cast<int>(y0); y < y1; ++y) {
            for (int x = 0; x < in.width; ++x) {
                double acc = 0.0;
                const int d0 = std::max(-h, -x);
                const int d1 = std::min(h, in.width - 1 - x);
                for (int d = d0; d <= d1; ++d) acc += taps[d + h] * in.at(x + d, y);
                out.at(x, y) = acc;
            }
        }
    });
}

// 1D correlation along columns.
void correlate_cols(const GrayImage& in, const std::vector<double>& taps, GrayImage& out) {
    const int h = static_cast<int>(taps.size()) / 2;
    parallel_chunks(in.height, [&](int64_t y0, int64_t y1) {
        for (int y = static_cast<int>(y0); y < y1; ++y) {
            const int d0 = std::max(-h, -y);
            const int d1 = std::min(h, in.height - 1 - y);
            for (int x = 0; x < in.width; ++x) {
                double acc = 0.0;
                for (int d = d0; d <= d1; ++d) acc += taps[d + h] * in.at(x, y + d);
                out.at(x, y) = acc;
            }
        }
    });
}

} // namespace

void GaborParams::validate_or_throw() const {
    if (!(ws > 0.0)) throw ValidationError("Gabor filter requires ws > 0");
    if (fc < 0.0) throw ValidationError("Gabor filter requires fc >= 0");
    if (support < 3 || support % 2 == 0)
        throw ValidationError("Gabor filter requires odd support >= 3");
}

GaborBankConfig GaborBankConfig::default_bank(double ws) {
    GaborBankConfig bank;
    const double fc = 1.0 / ws;
    const int support = 2 * static_cast<int>(std::lround(0.75 * ws)) + 1;
    for (int i = 0; i < 4; ++i) {
        GaborParams p;
        p.ws = ws;
        p.fc = fc;
        p.theta = i * std::numbers::pi / 4.0;
        p.phi = 0.0;
        p.support = support;
        bank.filters.push_back(p);
    }
    return bank;
}

void GaborBankConfig::validate_or_throw() const {
    if (filters.empty()) throw ValidationError("Gabor bank must contain at least one filter");
    for (const auto& f : filters) f.validate_or_throw();
}

Kernel make_kernel(const GaborParams& p) {
    p.validate_or_throw();
    Kernel k;
    k.support = p.support;
    k.values.resize(static_cast<size_t>(p.support) * p.support);
    const int c = p.support / 2;
    const double inv_ws2 = 1.0 / (p.ws * p.ws);
    const double ct = std::cos(p.theta), st = std::sin(p.theta);
    for (int iy = 0; iy < p.support; ++iy) {
        const double dy = iy - c;
        for (int ix = 0; ix < p.support; ++ix) {
            const double dx = ix - c;
            const double envelope = std::exp(-kFourLn2 * (dx * dx + dy * dy) * inv_ws2);
            const double carrier = std::cos(2.0 * std::numbers::pi * p.fc * (dx * ct + dy * st) + p.phi);
            k.values[static_cast<size_t>(iy) * p.support + ix] = envelope * carrier;
        }
    }
    return k;
}

FeatureStack apply_bank(const GrayImage& img, const GaborBankConfig& bank) {
    bank.validate_or_throw();
    validate(img);
    for (const auto& f : bank.filters)
        if (f.support > img.width || f.support > img.height)
            throw ValidationError("Gabor kernel support exceeds image");

    FeatureStack stack;
    stack.channels.reserve(bank.filters.size());
    GrayImage tmp(img.width, img.height);
    GrayImage term(img.width, img.height);

    for (size_t ch = 0; ch < bank.filters.size(); ++ch) {
        const GaborParams& p = bank.filters[ch];
        const int c = p.support / 2;
        const double inv_ws2 = 1.0 / (p.ws * p.ws);
        const double cx = 2.0 * std::numbers::pi * p.fc * std::cos(p.theta);
        const double cy = 2.0 * std::numbers::pi * p.fc * std::sin(p.theta);

        // cos(cx dx + cy dy + phi) = cos(cx dx + phi) cos(cy dy)
        //                          - sin(cx dx + phi) sin(cy dy),
        // so the isotropic-envelope kernel splits into two separable terms.
        std::vector<double> ax_cos(p.support), ax_sin(p.support);
        std::vector<double> by_cos(p.support), by_sin(p.support);
        for (int i = 0; i < p.support; ++i) {
            const double d = i - c;
            const double env = std::exp(-kFourLn2 * d * d * inv_ws2);
            ax_cos[i] = env * std::cos(cx * d + p.phi);
            ax_sin[i] = env * std::sin(cx * d + p.phi);
            by_cos[i] = env * std::cos(cy * d);
            by_sin[i] = env * std::sin(cy * d);
        }

        FeatureMap channel(img.width, img.height, 0.0, img.pitch_mm);
        correlate_rows(img, ax_cos, tmp);
        correlate_cols(tmp, by_cos, channel);
        correlate_rows(img, ax_sin, tmp);
        correlate_cols(tmp, by_sin, term);
        for (size_t i = 0; i < channel.data.size(); ++i) channel.data[i] -= term.data[i];

        stack.channels.push_back(std::move(channel));
        stack.names.push_back("gabor_" + std::to_string(ch));
    }
    return stack;
}

} // namespace fixsearch
