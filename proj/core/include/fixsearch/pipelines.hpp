#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fixsearch/gabor.hpp"
#include "fixsearch/glcm.hpp"
#include "fixsearch/gmm.hpp"
#include "fixsearch/image.hpp"
#include "fixsearch/peaks.hpp"

namespace fixsearch {

struct PeaksConfig {
    int margin = -1;             // -1: max kernel support / 2
    double min_separation = -1;  // -1: max bank ws / 2
};

struct ThresholdConfig {
    double tau = 0.0;
    ChannelRule rule = ChannelRule::Max;
};

/// Everything a pipeline run needs. GMM seeds are derived from `seed` by
/// labeled hashing at run time; negative peaks fields resolve against the
/// Gabor bank.
struct RunConfig {
    uint64_t seed = 0;
    GlcmConfig glcm;
    GaborBankConfig gabor = GaborBankConfig::default_bank();
    GmmConfig gmm_a;
    GmmConfig gmm_b;
    PeaksConfig peaks;
    ThresholdConfig threshold;
    std::optional<std::pair<double, double>> lesion_hint;
    bool mask_override_all = false; // diagnostic: screen against an all-true mask

    RunConfig() {
        gmm_a.k = 5;
        gmm_b.k = 3;
    }

    int resolved_margin() const;
    double resolved_min_separation() const;
    void validate_or_throw() const;
};

struct Mask {
    int width = 0, height = 0;
    std::vector<uint8_t> bits;

    bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    size_t count() const;
};

struct PipelineReport {
    std::string pipeline; // "A", "B" or "threshold"
    CandidateSet initial;
    CandidateSet final;
    std::optional<Mask> mask;
    std::optional<ClusterLabels> labels;
    std::optional<int> lesion_cluster;
    std::optional<GmmModel> gmm;
    RunConfig config_echo;
    std::vector<std::pair<std::string, double>> timings_ms;
    std::vector<std::string> warnings;
};

/// Inputs for picking "the cluster that contains the lesion". One entry per
/// labeled member (tile or candidate): its position, its max-channel Gabor
/// response and its GLCM mean. `rects` optionally gives exact containment
/// regions (tiles); hints resolve by containment first, nearest position
/// otherwise.
struct ClusterSelectionContext {
    int width = 0, height = 0;
    std::vector<std::pair<double, double>> positions;
    std::vector<double> gabor_score;
    std::vector<double> glcm_mean;
    std::vector<std::array<int, 4>> rects; // x0, y0, x1, y1 half-open; may be empty
};

/// With a hint: the label of the member at/nearest the hint. Blind: the
/// cluster with the highest mean Gabor score, excluding the background
/// cluster (the one with the lowest mean GLCM mean).
int select_lesion_cluster(const std::vector<int>& labels, int k,
                          const std::optional<std::pair<double, double>>& hint,
                          const ClusterSelectionContext& ctx);

/// Texture-first screening: GLCM tile features -> k-group GMM -> mask from
/// the lesion-containing cluster; Gabor bank maxima screened by the mask.
PipelineReport pipeline_a(const GrayImage& img, const RunConfig& cfg);

/// Gabor-first: bank maxima, GLCM features at the candidate locations, GMM
/// over the six per-candidate features, keep the lesion-containing cluster.
PipelineReport pipeline_b(const GrayImage& img, const RunConfig& cfg);

/// Baseline: bank maxima kept above a score threshold.
PipelineReport pipeline_threshold(const GrayImage& img, const RunConfig& cfg);

} // namespace fixsearch
