#include "bchange/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <variant>

#include "bchange/rng.hpp"

namespace bchange::pipeline {

namespace {

namespace fs = std::filesystem;

std::string stem_of(const std::string& path) {
    const auto stem = fs::path(path).stem().string();
    return stem.empty() ? path : stem;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

// Slug for per-campaign / per-setting file names.
std::string slug(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s.empty() ? std::string("all") : s;
}

struct EvaluatedGroup {
    report::RunReport run;
    std::vector<features::ChangeFeatures> feats;
    std::vector<ingest::Label> labels;
};

// Eligibility + extraction + CV for one account group (whole dataset for
// automation, one campaign for coordination).
EvaluatedGroup evaluate_group(std::vector<ingest::AccountTimeline> accounts,
                              const ExperimentConfig& config, const std::string& campaign,
                              std::map<std::string, std::size_t> pre_excluded) {
    EvaluatedGroup group;
    report::RunReport& run = group.run;
    run.dataset_id = config.dataset_id.empty() ? stem_of(config.events_path) : config.dataset_id;
    run.campaign = campaign;
    run.setting = config.setting;
    run.seed = config.seed;
    run.bins = config.bins;
    run.normalize = config.normalize;
    run.codec_params = codec::params();
    run.excluded = std::move(pre_excluded);
    run.accounts_loaded = accounts.size();
    for (const auto& [reason, count] : run.excluded) run.accounts_loaded += count;

    std::vector<ingest::AccountTimeline> eligible;
    eligible.reserve(accounts.size());
    for (auto& account : accounts) {
        auto outcome = ingest::apply_eligibility(std::move(account), config.min_posts,
                                                 config.max_posts);
        if (std::holds_alternative<ingest::Rejection>(outcome)) {
            ++run.excluded["too_few_posts"];
            continue;
        }
        eligible.push_back(std::move(std::get<ingest::AccountTimeline>(outcome)));
    }

    features::Options opts;
    opts.bins = config.bins;
    opts.normalize = config.normalize;
    opts.action_only = config.action_only;
    auto extraction = extract_features(eligible, config.setting, opts,
                                       config.parallel ? Execution::parallel : Execution::serial,
                                       config.pause_floor);
    for (const auto& [reason, count] : extraction.excluded) run.excluded[reason] += count;
    run.degenerate_content_pairs = extraction.degenerate_content_pairs;

    std::map<std::string, ingest::Label> label_of;
    for (const auto& a : eligible)
        if (a.label) label_of[a.account_id] = a.label->label;

    classify::Dataset dataset;
    for (auto& f : extraction.feats) {
        auto it = label_of.find(f.account_id);
        if (it == label_of.end()) {
            ++run.excluded["unlabeled"];
            continue;
        }
        dataset.push_back({f.vector(), it->second == ingest::Label::positive});
        group.feats.push_back(std::move(f));
        group.labels.push_back(it->second);
    }
    run.accounts_in = dataset.size();

    classify::EvalOptions eopts;
    eopts.k_min = config.k_min;
    eopts.k_max = config.k_max;
    eopts.parallel = config.parallel;
    try {
        if (effective_protocol(config) == classify::Protocol::stratified_kfold)
            run.eval = classify::stratified_kfold(dataset, config.folds, config.seed, eopts);
        else
            run.eval = classify::loocv(dataset, eopts);
    } catch (const classify::EvalError& e) {
        run.failure = e.what();
    }
    return group;
}

void write_group_outputs(const fs::path& dir, const EvaluatedGroup& group) {
    const std::string tag = slug(group.run.campaign);
    write_file(dir / ("report_" + tag + ".json"), report::to_json_string(group.run));
    if (!group.feats.empty())
        write_file(dir / ("features_" + tag + ".csv"),
                   report::features_csv(group.feats, group.labels));
    bool pos = false, neg = false;
    for (auto l : group.labels) (l == ingest::Label::positive ? pos : neg) = true;
    if (pos && neg)
        write_file(dir / ("class_histograms_" + tag + ".csv"),
                   report::class_histograms_csv(
                       report::class_histograms(group.feats, group.labels)));
}

}  // namespace

classify::Protocol effective_protocol(const ExperimentConfig& config) {
    if (config.protocol) return *config.protocol;
    return config.task == ingest::Task::automation ? classify::Protocol::stratified_kfold
                                                   : classify::Protocol::loocv;
}

ExtractionResult extract_features(const std::vector<ingest::AccountTimeline>& accounts,
                                  const segment::ChangeSetting& setting,
                                  const features::Options& opts, Execution exec,
                                  std::int64_t pause_floor) {
    const std::size_t n = accounts.size();
    std::vector<features::AccountOutcome> outcomes(n);

    const auto kernel = [&](std::size_t i) {
        const auto doc = bloc::encode(accounts[i], pause_floor);
        outcomes[i] = features::account_features(doc, setting, opts);
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::size_t i = 0; i < n; ++i) kernel(i);
    } else {
        for (std::size_t i = 0; i < n; ++i) kernel(i);
    }

    // Deterministic merge in account order.
    ExtractionResult result;
    for (auto& outcome : outcomes) {
        result.degenerate_content_pairs += outcome.degenerate_content_pairs;
        if (outcome.excluded())
            ++result.excluded[features::to_string(outcome.exclusion().reason)];
        else
            result.feats.push_back(std::move(std::get<features::ChangeFeatures>(outcome.result)));
    }
    return result;
}

LoadedData load_dataset(const ExperimentConfig& config) {
    LoadedData data;
    auto loaded = ingest::load_events(config.events_path);
    data.accounts = std::move(loaded.accounts);
    data.load_report = loaded.report;
    if (!config.labels_path.empty())
        data.label_report = ingest::attach_labels(data.accounts, config.labels_path);
    data.dataset_id = config.dataset_id.empty() ? stem_of(config.events_path) : config.dataset_id;
    return data;
}

std::vector<report::RunReport> run_on_loaded(const LoadedData& data,
                                             const ExperimentConfig& config) {
    // Accounts relevant to the task; others are tallied, not silently dropped.
    std::map<std::string, std::size_t> pre_excluded;
    std::vector<ingest::AccountTimeline> in_task;
    for (const auto& a : data.accounts) {
        if (!a.label)
            ++pre_excluded["unlabeled"];
        else if (a.label->task != config.task)
            ++pre_excluded["other_task"];
        else
            in_task.push_back(a);
    }

    std::vector<EvaluatedGroup> groups;
    if (config.task == ingest::Task::automation) {
        groups.push_back(evaluate_group(std::move(in_task), config, "", pre_excluded));
    } else {
        std::map<std::string, std::vector<ingest::AccountTimeline>> campaigns;
        for (auto& a : in_task) campaigns[a.label->campaign].push_back(std::move(a));
        for (auto& [name, members] : campaigns) {
            // Dataset-level tallies (unlabeled, other task) land on the mean
            // row for multi-campaign runs, or on the single group otherwise.
            std::map<std::string, std::size_t> excluded;
            if (campaigns.size() == 1) excluded = pre_excluded;
            if (name.empty()) {
                // Untagged coordination data is one single group, no windowing.
                groups.push_back(evaluate_group(std::move(members), config, "all", excluded));
                continue;
            }
            std::vector<ingest::AccountTimeline> windowed_input;
            if (config.cap_before_windowing) {
                for (auto& m : members) {
                    auto outcome = ingest::apply_eligibility(std::move(m), config.min_posts,
                                                             config.max_posts);
                    if (std::holds_alternative<ingest::Rejection>(outcome)) {
                        ++excluded["too_few_posts"];
                        continue;
                    }
                    windowed_input.push_back(std::move(std::get<ingest::AccountTimeline>(outcome)));
                }
            } else {
                windowed_input = std::move(members);
            }
            auto window = ingest::window_campaign(windowed_input, config.interval_days,
                                                  config.target_accounts,
                                                  rng::derive_seed(config.seed, "window|" + name));
            excluded["not_windowed"] += windowed_input.size() - window.accounts.size();
            groups.push_back(evaluate_group(std::move(window.accounts), config, name, excluded));
        }
    }

    std::vector<report::RunReport> reports;
    for (const auto& g : groups) reports.push_back(g.run);

    // Mean row across campaigns.
    if (config.task == ingest::Task::coordination && groups.size() > 1) {
        report::RunReport mean;
        mean.dataset_id = data.dataset_id;
        mean.campaign = "mean";
        mean.setting = config.setting;
        mean.seed = config.seed;
        mean.bins = config.bins;
        mean.normalize = config.normalize;
        mean.codec_params = codec::params();
        for (const auto& [reason, count] : pre_excluded) {
            mean.excluded[reason] += count;
            mean.accounts_loaded += count;
        }
        classify::Metrics sum;
        std::size_t evaluated = 0;
        for (const auto& g : groups) {
            mean.accounts_loaded += g.run.accounts_loaded;
            mean.accounts_in += g.run.accounts_in;
            for (const auto& [reason, count] : g.run.excluded) mean.excluded[reason] += count;
            mean.degenerate_content_pairs += g.run.degenerate_content_pairs;
            if (g.run.eval) {
                const auto& m = g.run.eval->at_best().metrics;
                sum.precision += m.precision;
                sum.recall += m.recall;
                sum.f1 += m.f1;
                ++evaluated;
            }
        }
        if (evaluated > 0) {
            mean.mean_metrics = classify::Metrics{sum.precision / evaluated,
                                                  sum.recall / evaluated, sum.f1 / evaluated};
        } else {
            mean.failure = "no campaign produced an evaluation";
        }
        reports.push_back(std::move(mean));
    }

    if (config.write_outputs && !config.out_dir.empty()) {
        const fs::path dir(config.out_dir);
        fs::create_directories(dir);
        for (const auto& g : groups) write_group_outputs(dir, g);
        for (const auto& r : reports)
            if (r.campaign == "mean")
                write_file(dir / "report_mean.json", report::to_json_string(r));
        write_file(dir / "results.csv", report::results_table(reports));
        write_file(dir / "per_k.csv", report::per_k_table(reports));
    }
    return reports;
}

std::vector<report::RunReport> run_experiment(const ExperimentConfig& config) {
    const LoadedData data = load_dataset(config);
    return run_on_loaded(data, config);
}

std::vector<report::RunReport> sweep(const ExperimentConfig& config,
                                     const std::vector<segment::ChangeSetting>& grid) {
    if (grid.empty()) throw std::invalid_argument("sweep grid is empty");
    const LoadedData data = load_dataset(config);

    std::vector<report::RunReport> all;
    for (const auto& setting : grid) {
        ExperimentConfig one = config;
        one.setting = setting;
        if (!config.out_dir.empty())
            one.out_dir = (fs::path(config.out_dir) / slug(segment::setting_key(setting))).string();
        try {
            auto reports = run_on_loaded(data, one);
            all.insert(all.end(), reports.begin(), reports.end());
        } catch (const std::exception& e) {
            report::RunReport failed;
            failed.dataset_id = data.dataset_id;
            failed.setting = setting;
            failed.seed = config.seed;
            failed.bins = config.bins;
            failed.normalize = config.normalize;
            failed.codec_params = codec::params();
            failed.failure = e.what();
            all.push_back(std::move(failed));
        }
    }

    if (config.write_outputs && !config.out_dir.empty()) {
        fs::create_directories(config.out_dir);
        write_file(fs::path(config.out_dir) / "results.csv", report::results_table(all));
    }
    return all;
}

std::vector<segment::ChangeSetting> default_grid(const ExperimentConfig& config,
                                                 bool include_weeks) {
    std::vector<segment::Segmentation> segs = {segment::Segmentation::sets_of_k,
                                               segment::Segmentation::pauses};
    if (config.task == ingest::Task::automation || include_weeks)
        segs.push_back(segment::Segmentation::weeks);

    std::vector<segment::ChangeSetting> grid;
    for (auto seg : segs)
        for (auto sel : {segment::Selection::adjacent, segment::Selection::cumulative})
            for (auto dist : {segment::DistanceMeasure::cosine,
                              segment::DistanceMeasure::compression}) {
                segment::ChangeSetting s = config.setting;
                s.segmentation = seg;
                s.selection = sel;
                s.distance = dist;
                grid.push_back(s);
            }
    return grid;
}

}  // namespace bchange::pipeline
