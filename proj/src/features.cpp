#include "bchange/features.hpp"

#include <stdexcept>

namespace bchange::features {

std::vector<double> ChangeFeatures::vector() const {
    std::vector<double> v;
    v.reserve(action_hist.size() + content_hist.size());
    v.insert(v.end(), action_hist.begin(), action_hist.end());
    v.insert(v.end(), content_hist.begin(), content_hist.end());
    return v;
}

int bin_index(double value, int bins) {
    int idx = static_cast<int>(value * bins);
    if (idx >= bins) idx = bins - 1;
    if (idx < 0) idx = 0;
    // Nudge onto the half-open edge semantics in case the multiply rounded
    // across an edge: bin i covers [i/bins, (i+1)/bins).
    while (idx > 0 && value < static_cast<double>(idx) / bins) --idx;
    while (idx + 1 < bins && value >= static_cast<double>(idx + 1) / bins) ++idx;
    return idx;
}

std::vector<double> build_histogram(const std::vector<double>& distances, int bins,
                                    bool normalize) {
    if (bins < 1) throw std::invalid_argument("bins must be positive");
    if (distances.empty()) return {};

    std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
    for (double d : distances) hist[static_cast<std::size_t>(bin_index(d, bins))] += 1.0;
    if (normalize) {
        const double total = static_cast<double>(distances.size());
        for (double& h : hist) h /= total;
    }
    return hist;
}

AccountOutcome account_features(const bloc::BlocDocument& doc,
                                const segment::ChangeSetting& setting, const Options& opts) {
    AccountOutcome out;

    const auto segments = segment::segment_document(doc, setting);
    if (segments.size() < 3) {
        out.result = Exclusion{doc.account_id, ExclusionReason::insufficient_segments,
                               segments.size()};
        return out;
    }

    const auto pairs = segment::select_pairs(segments, setting.selection);
    std::vector<double> action_ds;
    std::vector<double> content_ds;
    action_ds.reserve(pairs->size());
    content_ds.reserve(pairs->size());
    for (const auto& pair : *pairs) {
        const auto d = distance::pair_distances(pair, setting);
        if (d.action) action_ds.push_back(d.action->value);
        if (d.content)
            content_ds.push_back(d.content->value);
        else
            ++out.degenerate_content_pairs;
    }

    if (content_ds.empty() && !opts.action_only) {
        out.result = Exclusion{doc.account_id, ExclusionReason::degenerate_content,
                               segments.size()};
        return out;
    }

    ChangeFeatures feats;
    feats.account_id = doc.account_id;
    feats.n_action_distances = action_ds.size();
    feats.n_content_distances = content_ds.size();
    feats.action_hist = build_histogram(action_ds, opts.bins, opts.normalize);
    if (content_ds.empty())
        feats.content_hist.assign(static_cast<std::size_t>(opts.bins), 0.0);
    else
        feats.content_hist = build_histogram(content_ds, opts.bins, opts.normalize);
    out.result = std::move(feats);
    return out;
}

const char* to_string(ExclusionReason r) {
    switch (r) {
        case ExclusionReason::insufficient_segments: return "insufficient_segments";
        case ExclusionReason::degenerate_content: return "degenerate_content";
    }
    return "?";
}

}  // namespace bchange::features
