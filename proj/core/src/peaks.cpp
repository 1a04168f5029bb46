#include "fixsearch/peaks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixsearch/errors.hpp"

namespace fixsearch {

namespace {

constexpr int kDx[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kDy[8] = {-1, -1, -1, 0, 0, 1, 1, 1};

bool within_margin(int x, int y, int w, int h, int margin) {
    return x >= margin && x < w - margin && y >= margin && y < h - margin;
}

// Greedy pass over sorted candidates: a candidate survives unless a kept one
// lies strictly closer than min_separation.
std::vector<Candidate> suppress(std::vector<Candidate> sorted, double min_separation) {
    std::vector<Candidate> kept;
    for (auto& c : sorted) {
        bool ok = true;
        for (const auto& k : kept) {
            const double dx = c.x - k.x, dy = c.y - k.y;
            if (std::sqrt(dx * dx + dy * dy) < min_separation) {
                ok = false;
                break;
            }
        }
        if (ok) kept.push_back(std::move(c));
    }
    return kept;
}

} // namespace

double Candidate::primary_score() const {
    double best = -std::numeric_limits<double>::infinity();
    for (double s : scores) best = std::max(best, s);
    return best;
}

void sort_candidates(std::vector<Candidate>& candidates) {
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        const double sa = a.primary_score(), sb = b.primary_score();
        if (sa != sb) return sa > sb;
        if (a.y != b.y) return a.y < b.y;
        if (a.x != b.x) return a.x < b.x;
        return a.source_channel < b.source_channel;
    });
}

CandidateSet regional_maxima(const FeatureMap& map, int margin, double min_separation) {
    validate(map);
    if (margin < 0) throw ValidationError("regional_maxima requires margin >= 0");
    if (min_separation < 0) throw ValidationError("regional_maxima requires min_separation >= 0");

    const int w = map.width, h = map.height;
    const size_t npix = map.size();

    CandidateSet out;
    out.width = w;
    out.height = h;
    out.margin = margin;

    // Flood every equal-value plateau once; a plateau is a regional maximum
    // iff no outer neighbor holds a strictly greater value.
    std::vector<int> component(npix, -1);
    std::vector<size_t> stack, plateau;
    std::vector<Candidate> found;
    int next_id = 0;

    for (size_t start = 0; start < npix; ++start) {
        if (component[start] >= 0) continue;
        const double value = map.data[start];
        const int id = next_id++;
        bool is_max = true;
        plateau.clear();
        stack.assign(1, start);
        component[start] = id;
        while (!stack.empty()) {
            const size_t p = stack.back();
            stack.pop_back();
            plateau.push_back(p);
            const int px = static_cast<int>(p % w), py = static_cast<int>(p / w);
            for (int k = 0; k < 8; ++k) {
                const int nx = px + kDx[k], ny = py + kDy[k];
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                const size_t q = static_cast<size_t>(ny) * w + nx;
                const double qv = map.data[q];
                if (qv == value) {
                    if (component[q] < 0) {
                        component[q] = id;
                        stack.push_back(q);
                    }
                } else if (qv > value) {
                    is_max = false;
                }
            }
        }
        if (!is_max) continue;
        if (plateau.size() == npix) {
            // Constant map: one full-image plateau with no outer neighbors.
            out.degenerate_input = true;
            continue;
        }

        double sx = 0.0, sy = 0.0;
        for (size_t p : plateau) {
            sx += static_cast<double>(p % w);
            sy += static_cast<double>(p / w);
        }
        const double cx = sx / static_cast<double>(plateau.size());
        const double cy = sy / static_cast<double>(plateau.size());
        int rx = static_cast<int>(std::lround(cx));
        int ry = static_cast<int>(std::lround(cy));
        if (component[static_cast<size_t>(ry) * w + rx] != id) {
            // Centroid fell outside a non-convex plateau: take the plateau
            // pixel nearest to it (ties by y then x).
            double best = std::numeric_limits<double>::infinity();
            int bx = 0, by = 0;
            for (size_t p : plateau) {
                const int px = static_cast<int>(p % w), py = static_cast<int>(p / w);
                const double d = (px - cx) * (px - cx) + (py - cy) * (py - cy);
                if (d < best || (d == best && (py < by || (py == by && px < bx)))) {
                    best = d;
                    bx = px;
                    by = py;
                }
            }
            rx = bx;
            ry = by;
        }
        if (!within_margin(rx, ry, w, h, margin)) continue;

        Candidate c;
        c.x = rx;
        c.y = ry;
        c.source_channel = 0;
        c.scores = {value};
        found.push_back(std::move(c));
    }

    sort_candidates(found);
    out.candidates = suppress(std::move(found), min_separation);
    return out;
}

CandidateSet bank_maxima(const FeatureStack& stack, int margin, double min_separation) {
    if (stack.channels.empty()) throw ValidationError("bank_maxima requires a non-empty stack");

    CandidateSet out;
    out.width = stack.width();
    out.height = stack.height();
    out.margin = margin;

    std::vector<Candidate> all;
    for (size_t ch = 0; ch < stack.channels.size(); ++ch) {
        CandidateSet per = regional_maxima(stack.channels[ch], margin, min_separation);
        out.degenerate_input = out.degenerate_input || per.degenerate_input;
        for (auto& c : per.candidates) {
            c.source_channel = static_cast<int>(ch);
            c.scores.resize(stack.channels.size());
            for (size_t s = 0; s < stack.channels.size(); ++s)
                c.scores[s] = stack.channels[s].at(c.x, c.y);
            all.push_back(std::move(c));
        }
    }

    sort_candidates(all);
    out.candidates = suppress(std::move(all), min_separation);
    return out;
}

ChannelRule channel_rule_from_string(const std::string& s) {
    if (s == "any") return ChannelRule::Any;
    if (s == "all") return ChannelRule::All;
    if (s == "max") return ChannelRule::Max;
    throw ValidationError("channel rule must be 'any', 'all' or 'max'");
}

std::string to_string(ChannelRule rule) {
    switch (rule) {
        case ChannelRule::Any: return "any";
        case ChannelRule::All: return "all";
        case ChannelRule::Max: return "max";
    }
    return "max";
}

CandidateSet threshold_candidates(const CandidateSet& set, double tau, ChannelRule rule) {
    CandidateSet out = set;
    out.candidates.clear();
    for (const auto& c : set.candidates) {
        bool keep = false;
        switch (rule) {
            case ChannelRule::Any:
                for (double s : c.scores) keep = keep || s > tau;
                break;
            case ChannelRule::All:
                keep = !c.scores.empty();
                for (double s : c.scores) keep = keep && s > tau;
                break;
            case ChannelRule::Max:
                keep = c.primary_score() > tau;
                break;
        }
        if (keep) out.candidates.push_back(c);
    }
    return out;
}

} // namespace fixsearch
