// bchange: measure how accounts' behavior changes over time and classify
// automated / coordinated accounts from the change distributions.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "bchange/pipeline.hpp"
#include "bchange/report.hpp"
#include "bchange/rng.hpp"
#include "bchange/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bchange;

struct CliSettings {
    pipeline::ExperimentConfig config;
    std::string segmentation = "sets-of-k";
    std::string selection = "cumulative";
    std::string distance = "compression";
    std::string cv;  // "", "stratified5" or "loocv"
    std::string normalize_bins = "on";
    std::string task = "automation";
    int threads = 0;
    bool serial = false;
};

void add_setting_options(CLI::App* cmd, CliSettings& s) {
    cmd->add_option("--segmentation", s.segmentation, "pauses, weeks or sets-of-k")
        ->check(CLI::IsMember({"pauses", "weeks", "sets-of-k"}));
    cmd->add_option("--k", s.config.setting.k, "segment length for sets-of-k")
        ->check(CLI::Range(2, 1000000));
    cmd->add_option("--pause-threshold", s.config.setting.pause_threshold,
                    "session boundary gap in seconds (pauses segmentation)");
    cmd->add_option("--selection", s.selection, "adjacent or cumulative")
        ->check(CLI::IsMember({"adjacent", "cumulative"}));
    cmd->add_option("--distance", s.distance, "cosine or compression")
        ->check(CLI::IsMember({"cosine", "compression"}));
    cmd->add_flag("--count-pauses-in-k", s.config.setting.count_pauses_in_k,
                  "count pause symbols toward k in sets-of-k");
    cmd->add_option("--bins", s.config.bins, "histogram bins per view")
        ->check(CLI::Range(1, 1000));
    cmd->add_option("--normalize-bins", s.normalize_bins, "on: relative frequencies, off: counts")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_flag("--action-only", s.config.action_only,
                  "keep accounts whose content pairs were all degenerate");
    cmd->add_option("--pause-floor", s.config.pause_floor,
                    "gaps at or below this emit no pause symbol (seconds)");
    cmd->add_option("--min-posts", s.config.min_posts, "eligibility floor");
    cmd->add_option("--max-posts", s.config.max_posts, "most recent posts kept");
    cmd->add_option("--seed", s.config.seed, "seed for folds / sampling");
    cmd->add_option("--threads", s.threads, "OpenMP worker count (0 = default)");
    cmd->add_flag("--serial", s.serial, "run the serial reference implementation");
}

void add_eval_options(CLI::App* cmd, CliSettings& s) {
    cmd->add_option("--task", s.task, "automation or coordination")
        ->check(CLI::IsMember({"automation", "coordination"}));
    cmd->add_option("--cv", s.cv, "stratified5 or loocv (default follows task)")
        ->check(CLI::IsMember({"stratified5", "loocv"}));
    cmd->add_option("--folds", s.config.folds, "folds for stratified CV")
        ->check(CLI::Range(2, 1000));
    cmd->add_option("--k-min", s.config.k_min)->check(CLI::Range(1, 1000));
    cmd->add_option("--k-max", s.config.k_max)->check(CLI::Range(1, 1000));
    cmd->add_option("--interval-days", s.config.interval_days, "campaign windowing interval")
        ->check(CLI::Range(1, 10000));
    cmd->add_option("--target-accounts", s.config.target_accounts,
                    "positives accumulated before the window closes");
    cmd->add_flag("--cap-before-windowing", s.config.cap_before_windowing,
                  "apply the post cap before campaign windowing");
}

void finalize(CliSettings& s) {
    s.config.setting.segmentation = *segment::parse_segmentation(s.segmentation);
    s.config.setting.selection = *segment::parse_selection(s.selection);
    s.config.setting.distance = *segment::parse_distance(s.distance);
    s.config.normalize = s.normalize_bins == "on";
    s.config.task = s.task == "automation" ? ingest::Task::automation
                                           : ingest::Task::coordination;
    if (s.cv == "stratified5")
        s.config.protocol = classify::Protocol::stratified_kfold;
    else if (s.cv == "loocv")
        s.config.protocol = classify::Protocol::loocv;
    s.config.parallel = !s.serial;
#ifdef _OPENMP
    if (s.threads > 0) omp_set_num_threads(s.threads);
#endif
}

void print_reports(const std::vector<report::RunReport>& reports) {
    for (const auto& r : reports) {
        std::cout << segment::setting_key(r.setting);
        if (!r.campaign.empty()) std::cout << "  campaign=" << r.campaign;
        std::cout << "  in=" << r.accounts_in;
        if (!r.failure.empty()) {
            std::cout << "  FAILED: " << r.failure << "\n";
            continue;
        }
        if (r.eval) {
            const auto& best = r.eval->at_best();
            std::cout << "  best_k=" << r.eval->best_k << "  precision=" << best.metrics.precision
                      << "  recall=" << best.metrics.recall << "  f1=" << best.metrics.f1;
        } else if (r.mean_metrics) {
            std::cout << "  mean_precision=" << r.mean_metrics->precision
                      << "  mean_recall=" << r.mean_metrics->recall
                      << "  mean_f1=" << r.mean_metrics->f1;
        }
        std::cout << "\n";
    }
}

bool all_failed(const std::vector<report::RunReport>& reports) {
    for (const auto& r : reports)
        if (r.failure.empty() && (r.eval || r.mean_metrics)) return false;
    return true;
}

int cmd_encode(const std::string& events_path, const std::string& account,
               std::int64_t pause_floor) {
    auto loaded = ingest::load_events(events_path);
    for (const auto& tl : loaded.accounts) {
        if (!account.empty() && tl.account_id != account) continue;
        const auto doc = bloc::encode(tl, pause_floor);
        std::cout << tl.account_id << "\n  action:  " << bloc::render(doc, bloc::View::action)
                  << "\n  content: " << bloc::render(doc, bloc::View::content) << "\n";
    }
    if (loaded.report.malformed_total > 0)
        std::cerr << loaded.report.malformed_total << " malformed line(s) skipped\n";
    return 0;
}

int cmd_features(CliSettings& s) {
    finalize(s);
    auto data = pipeline::load_dataset(s.config);

    std::vector<ingest::AccountTimeline> eligible;
    for (auto& a : data.accounts) {
        auto outcome = ingest::apply_eligibility(std::move(a), s.config.min_posts,
                                                 s.config.max_posts);
        if (std::holds_alternative<ingest::AccountTimeline>(outcome))
            eligible.push_back(std::move(std::get<ingest::AccountTimeline>(outcome)));
    }
    features::Options opts{s.config.bins, s.config.normalize, s.config.action_only};
    auto extraction = pipeline::extract_features(
        eligible, s.config.setting, opts,
        s.config.parallel ? pipeline::Execution::parallel : pipeline::Execution::serial,
        s.config.pause_floor);

    std::map<std::string, ingest::Label> label_of;
    for (const auto& a : eligible)
        if (a.label) label_of[a.account_id] = a.label->label;
    std::vector<features::ChangeFeatures> feats;
    std::vector<ingest::Label> labels;
    std::size_t unlabeled = 0;
    for (auto& f : extraction.feats) {
        auto it = label_of.find(f.account_id);
        if (it == label_of.end()) {
            ++unlabeled;
            continue;
        }
        labels.push_back(it->second);
        feats.push_back(std::move(f));
    }
    if (unlabeled > 0) std::cerr << "skipped " << unlabeled << " unlabeled account(s)\n";

    const std::string csv = report::features_csv(feats, labels);
    if (s.config.out_dir.empty()) {
        std::cout << csv;
    } else {
        fs::create_directories(s.config.out_dir);
        std::ofstream out(fs::path(s.config.out_dir) / "features.csv");
        out << csv;
        std::cout << "wrote " << feats.size() << " feature rows ("
                  << segment::setting_key(s.config.setting) << ")\n";
        for (const auto& [reason, count] : extraction.excluded)
            std::cout << "  excluded " << count << ": " << reason << "\n";
    }
    return 0;
}

int cmd_run(CliSettings& s) {
    finalize(s);
    auto reports = pipeline::run_experiment(s.config);
    print_reports(reports);
    return all_failed(reports) ? 2 : 0;
}

int cmd_sweep(CliSettings& s, bool include_weeks, const std::string& grid_arg) {
    finalize(s);
    std::vector<segment::ChangeSetting> grid;
    if (grid_arg.empty()) {
        grid = pipeline::default_grid(s.config, include_weeks);
    } else {
        std::stringstream ss(grid_arg);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto a = item.find('/');
            const auto b = item.rfind('/');
            if (a == std::string::npos || b == a)
                throw std::runtime_error("grid entries look like pauses/adjacent/cosine");
            segment::ChangeSetting setting = s.config.setting;
            auto seg = segment::parse_segmentation(item.substr(0, a));
            auto sel = segment::parse_selection(item.substr(a + 1, b - a - 1));
            auto dist = segment::parse_distance(item.substr(b + 1));
            if (!seg || !sel || !dist) throw std::runtime_error("bad grid entry: " + item);
            setting.segmentation = *seg;
            setting.selection = *sel;
            setting.distance = *dist;
            grid.push_back(setting);
        }
    }
    auto reports = pipeline::sweep(s.config, grid);
    std::cout << report::results_table(reports);
    return all_failed(reports) ? 2 : 0;
}

struct SynthArgs {
    std::string out_dir;
    std::string mix;  // e.g. stable_human=200,repetitive_bot=200
    int events_per_account = 64;
    std::uint64_t seed = 1;
    int campaigns = 0;
    int accounts_per_campaign = 10;
    int switch_points = 3;
};

int cmd_synth(const SynthArgs& args) {
    std::vector<ingest::AccountTimeline> accounts;

    std::stringstream ss(args.mix);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("mix entries look like stable_human=200");
        const std::string name = item.substr(0, eq);
        const int count = std::stoi(item.substr(eq + 1));
        synth::RegimeSpec spec;
        if (name == "stable_human") spec.regime = synth::Regime::stable_human;
        else if (name == "repetitive_bot") spec.regime = synth::Regime::repetitive_bot;
        else if (name == "erratic_bot") spec.regime = synth::Regime::erratic_bot;
        else throw std::runtime_error("unknown regime: " + name);
        spec.n_accounts = count;
        spec.n_events = args.events_per_account;
        spec.seed = rng::derive_seed(args.seed, "mix|" + name);
        spec.switch_points = args.switch_points;
        for (auto& a : synth::generate(spec)) accounts.push_back(std::move(a));
    }

    for (int c = 0; c < args.campaigns; ++c) {
        synth::CampaignSpec spec;
        spec.name = "campaign_" + std::string(c < 10 ? "0" : "") + std::to_string(c);
        spec.n_positive = args.accounts_per_campaign;
        spec.n_controls = args.accounts_per_campaign;
        spec.n_events = args.events_per_account;
        spec.seed = rng::derive_seed(args.seed, "campaign|" + spec.name);
        for (auto& a : synth::generate_campaign(spec)) accounts.push_back(std::move(a));
    }

    if (accounts.empty()) throw std::runtime_error("nothing to generate: pass --mix or --campaigns");

    fs::create_directories(args.out_dir);
    const auto events_path = fs::path(args.out_dir) / "events.jsonl";
    const auto labels_path = fs::path(args.out_dir) / "labels.csv";
    synth::write_events_file(events_path.string(), accounts);
    synth::write_labels_file(labels_path.string(), accounts);

    std::size_t n_events = 0;
    for (const auto& a : accounts) n_events += a.events.size();
    std::cout << "wrote " << accounts.size() << " accounts, " << n_events << " events to "
              << args.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"behavior-change measurement and account classification"};
    app.set_config("--config", "", "key=value config file; flags override it");
    app.require_subcommand(1);

    CliSettings s;
    std::string encode_events, encode_account;
    std::int64_t encode_floor = bloc::alphabet::kDefaultPauseFloor;
    bool include_weeks = false;
    std::string grid_arg;
    SynthArgs synth_args;

    auto* enc = app.add_subcommand("encode", "print BLOC strings for accounts in an event file");
    enc->add_option("--events", encode_events, "event-lines file")->required();
    enc->add_option("--account", encode_account, "only this account");
    enc->add_option("--pause-floor", encode_floor, "seconds");

    auto* feat = app.add_subcommand("features", "export change-feature vectors");
    feat->add_option("--events", s.config.events_path)->required();
    feat->add_option("--labels", s.config.labels_path)->required();
    feat->add_option("--out", s.config.out_dir, "output directory (stdout when omitted)");
    add_setting_options(feat, s);

    auto* run = app.add_subcommand("run", "run one change setting end to end");
    run->add_option("--events", s.config.events_path)->required();
    run->add_option("--labels", s.config.labels_path)->required();
    run->add_option("--out", s.config.out_dir)->required();
    run->add_option("--dataset-id", s.config.dataset_id);
    add_setting_options(run, s);
    add_eval_options(run, s);

    auto* sw = app.add_subcommand("sweep", "run a grid of change settings");
    sw->add_option("--events", s.config.events_path)->required();
    sw->add_option("--labels", s.config.labels_path)->required();
    sw->add_option("--out", s.config.out_dir)->required();
    sw->add_option("--dataset-id", s.config.dataset_id);
    sw->add_flag("--include-weeks", include_weeks, "keep weeks rows for coordination");
    sw->add_option("--grid", grid_arg, "comma-separated seg/sel/dist entries");
    add_setting_options(sw, s);
    add_eval_options(sw, s);

    auto* sy = app.add_subcommand("synth", "generate synthetic event and label files");
    sy->add_option("--out", synth_args.out_dir)->required();
    sy->add_option("--mix", synth_args.mix, "regime=count list, e.g. stable_human=200");
    sy->add_option("--events-per-account", synth_args.events_per_account)
        ->check(CLI::Range(20, 300));
    sy->add_option("--seed", synth_args.seed);
    sy->add_option("--campaigns", synth_args.campaigns, "coordinated campaigns to generate")
        ->check(CLI::Range(0, 1000));
    sy->add_option("--accounts-per-campaign", synth_args.accounts_per_campaign)
        ->check(CLI::Range(1, 10000));
    sy->add_option("--switch-points", synth_args.switch_points)->check(CLI::Range(1, 100));

    try {
        app.parse(argc, argv);
        if (enc->parsed()) return cmd_encode(encode_events, encode_account, encode_floor);
        if (feat->parsed()) return cmd_features(s);
        if (run->parsed()) return cmd_run(s);
        if (sw->parsed()) return cmd_sweep(s, include_weeks, grid_arg);
        if (sy->parsed()) return cmd_synth(synth_args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const classify::EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
