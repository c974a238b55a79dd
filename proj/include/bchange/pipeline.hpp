// End-to-end orchestration: event files through feature extraction to
// cross-validated evaluation and report files.
//
// The per-account feature kernel and the per-test-point prediction loops are
// OpenMP-parallel; a serial path is kept as the reference implementation and
// results are reduced in account order, so output is identical for any
// worker count.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bchange/bloc.hpp"
#include "bchange/classify.hpp"
#include "bchange/events.hpp"
#include "bchange/features.hpp"
#include "bchange/report.hpp"

namespace bchange::pipeline {

enum class Execution { serial, parallel };

struct ExtractionResult {
    std::vector<features::ChangeFeatures> feats;  // accepted accounts, input order
    std::map<std::string, std::size_t> excluded;  // reason -> count
    std::size_t degenerate_content_pairs = 0;
};

// encode -> segment -> pair distances -> histograms, per account.
ExtractionResult extract_features(const std::vector<ingest::AccountTimeline>& accounts,
                                  const segment::ChangeSetting& setting,
                                  const features::Options& opts,
                                  Execution exec = Execution::parallel,
                                  std::int64_t pause_floor = bloc::alphabet::kDefaultPauseFloor);

struct ExperimentConfig {
    std::string events_path;
    std::string labels_path;
    std::string out_dir;
    std::string dataset_id;  // defaults to the events file stem

    ingest::Task task = ingest::Task::automation;
    segment::ChangeSetting setting;
    std::int64_t pause_floor = bloc::alphabet::kDefaultPauseFloor;

    std::size_t min_posts = 20;
    std::size_t max_posts = 300;

    int bins = features::kDefaultBins;
    bool normalize = true;
    bool action_only = false;

    // Protocol defaults follow the task: automation -> stratified 5-fold,
    // coordination -> LOOCV per campaign.
    std::optional<classify::Protocol> protocol;
    int folds = 5;
    int k_min = 1;
    int k_max = 10;
    std::uint64_t seed = 42;

    int interval_days = 14;
    std::size_t target_accounts = 10;
    bool cap_before_windowing = false;

    bool parallel = true;
    bool write_outputs = true;
};

classify::Protocol effective_protocol(const ExperimentConfig& config);

struct LoadedData {
    std::vector<ingest::AccountTimeline> accounts;
    ingest::LoadReport load_report;
    ingest::LabelReport label_report;
    std::string dataset_id;
};

LoadedData load_dataset(const ExperimentConfig& config);

// Runs one change setting. Coordination data with campaign tags produces one
// report per campaign plus a "mean" report; everything else produces one.
std::vector<report::RunReport> run_on_loaded(const LoadedData& data,
                                             const ExperimentConfig& config);

// load_dataset + run_on_loaded + output files in config.out_dir.
std::vector<report::RunReport> run_experiment(const ExperimentConfig& config);

// One run per setting over the same loaded data; per-setting failures are
// recorded in the report row instead of aborting the sweep.
std::vector<report::RunReport> sweep(const ExperimentConfig& config,
                                     const std::vector<segment::ChangeSetting>& grid);

// The full setting grid: {pauses, weeks, sets-of-k} x {adjacent, cumulative} x
// {cosine, compression}; weeks rows are dropped for coordination unless
// include_weeks is set (sparse controls rarely post in consecutive weeks).
std::vector<segment::ChangeSetting> default_grid(const ExperimentConfig& config,
                                                 bool include_weeks);

}  // namespace bchange::pipeline
