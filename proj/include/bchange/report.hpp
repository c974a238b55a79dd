// Run aggregation: per-setting result rows, class-conditional histogram
// exports, exclusion tallies, and lossless JSON serialization of run reports.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bchange/classify.hpp"
#include "bchange/codec.hpp"
#include "bchange/events.hpp"
#include "bchange/features.hpp"

namespace bchange::report {

struct ClassHistograms {
    std::size_t n_positive = 0;
    std::size_t n_negative = 0;
    std::vector<double> positive_action;
    std::vector<double> positive_content;
    std::vector<double> negative_action;
    std::vector<double> negative_content;
};

// Arithmetic mean of member histograms per class and view. Throws
// std::invalid_argument when a class is empty.
ClassHistograms class_histograms(const std::vector<features::ChangeFeatures>& feats,
                                 const std::vector<ingest::Label>& labels);

// Delimited export: class,view,n_accounts,b0..b{bins-1}.
std::string class_histograms_csv(const ClassHistograms& ch);

struct RunReport {
    std::string dataset_id;
    std::string campaign;  // empty for automation runs, "mean" for the average row
    segment::ChangeSetting setting;
    std::uint64_t seed = 0;
    int bins = features::kDefaultBins;
    bool normalize = true;
    codec::Params codec_params;

    std::size_t accounts_loaded = 0;
    std::size_t accounts_in = 0;
    std::map<std::string, std::size_t> excluded;  // reason -> count
    std::size_t degenerate_content_pairs = 0;

    std::optional<classify::EvalReport> eval;
    std::optional<classify::Metrics> mean_metrics;  // campaign-average rows only
    std::string failure;                            // non-empty when the run could not evaluate
};

std::string to_json_string(const RunReport& r, int indent = 2);
RunReport report_from_json_string(const std::string& text);

// CSV rows keyed by (segmentation, selection, distance); the best-F1 row per
// segmentation group among summary rows carries a marker, per-campaign rows
// follow the same columns.
std::string results_table(const std::vector<RunReport>& reports);

// Full per-K table: one row per (dataset, campaign, segmentation, selection,
// distance, k).
std::string per_k_table(const std::vector<RunReport>& reports);

// Feature export rows: account_id,label,a0..,c0..
std::string features_csv(const std::vector<features::ChangeFeatures>& feats,
                         const std::vector<ingest::Label>& labels);

}  // namespace bchange::report
