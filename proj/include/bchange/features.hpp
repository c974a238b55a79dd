// The 20-feature behavioral-change vector: one 10-bin histogram of action
// distances and one of content distances per account.
#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "bchange/distance.hpp"

namespace bchange::features {

constexpr int kDefaultBins = 10;

struct ChangeFeatures {
    std::string account_id;
    std::vector<double> action_hist;   // `bins` entries
    std::vector<double> content_hist;  // `bins` entries
    std::size_t n_action_distances = 0;
    std::size_t n_content_distances = 0;

    // action_hist followed by content_hist (2 * bins values, 20 by default).
    std::vector<double> vector() const;
};

// Equal-width bins over [0, 1]; bin i covers [i/bins, (i+1)/bins) and the
// last bin also includes 1.0. Normalized bins hold relative frequencies, raw
// bins hold counts. Empty input returns an empty vector (typed empty outcome).
std::vector<double> build_histogram(const std::vector<double>& distances, int bins = kDefaultBins,
                                    bool normalize = true);

// Bin index for one value; exposed for the histogram oracle tests.
int bin_index(double value, int bins);

enum class ExclusionReason { insufficient_segments, degenerate_content };

struct Exclusion {
    std::string account_id;
    ExclusionReason reason = ExclusionReason::insufficient_segments;
    std::size_t n_segments = 0;
};

struct Options {
    int bins = kDefaultBins;
    bool normalize = true;
    // Keep accounts whose content pairs were all degenerate; their content
    // histogram is all zeros. Off by default: such accounts are excluded.
    bool action_only = false;
};

struct AccountOutcome {
    std::variant<ChangeFeatures, Exclusion> result;
    std::size_t degenerate_content_pairs = 0;

    bool excluded() const { return std::holds_alternative<Exclusion>(result); }
    const ChangeFeatures& features() const { return std::get<ChangeFeatures>(result); }
    const Exclusion& exclusion() const { return std::get<Exclusion>(result); }
};

// Full per-account pipeline: segmentation, pair selection, distances, two
// histograms. Accounts with fewer than three segments (two distance values)
// are excluded with a typed reason.
AccountOutcome account_features(const bloc::BlocDocument& doc,
                                const segment::ChangeSetting& setting, const Options& opts = {});

const char* to_string(ExclusionReason r);

}  // namespace bchange::features
