#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fixsearch/gabor.hpp"
#include "fixsearch/image.hpp"

namespace fixsearch {

/// One fixation candidate. `scores` holds the per-channel responses sampled
/// at (x, y); `source_channel` is the channel whose regional maximum produced
/// the candidate. `stage_tags` records which pipeline stages produced or kept
/// it ("initial", "mask-pass", "gmm-keep", "thresh-pass").
struct Candidate {
    int x = 0;
    int y = 0;
    int source_channel = 0;
    std::vector<double> scores;
    std::optional<int> cluster;
    std::vector<std::string> stage_tags;

    /// Ordering key: the maximum over all sampled channels.
    double primary_score() const;
};

struct CandidateSet {
    std::vector<Candidate> candidates;
    int width = 0;
    int height = 0;
    int margin = 0;
    /// Set when the input had no usable structure (e.g. a constant map).
    bool degenerate_input = false;

    size_t size() const { return candidates.size(); }
};

/// Sorts candidates by descending primary score, then y, then x, then
/// source_channel. The deterministic order every CandidateSet carries.
void sort_candidates(std::vector<Candidate>& candidates);

/// Regional maxima of a map (8-connectivity): each connected plateau of equal
/// values that is strictly greater than all of its outer neighbors yields one
/// candidate at the plateau centroid, rounded to the nearest pixel inside the
/// plateau. Maxima within `margin` pixels of the border are discarded; of two
/// survivors closer than min_separation only the higher-scored one is kept.
/// A constant map yields an empty set with degenerate_input set.
CandidateSet regional_maxima(const FeatureMap& map, int margin, double min_separation);

/// Per-channel regional maxima, unioned with source_channel recorded, full
/// score vectors sampled from every channel, then cross-channel
/// min_separation suppression keeping the highest max-channel score.
CandidateSet bank_maxima(const FeatureStack& stack, int margin, double min_separation);

enum class ChannelRule { Any, All, Max };

ChannelRule channel_rule_from_string(const std::string& s);
std::string to_string(ChannelRule rule);

/// Keeps candidates whose score under the rule exceeds tau:
/// Any: some channel > tau; All: every channel > tau; Max: max channel > tau.
CandidateSet threshold_candidates(const CandidateSet& set, double tau, ChannelRule rule);

} // namespace fixsearch
