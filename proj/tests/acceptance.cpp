// Acceptance suite: one line per criterion, nonzero exit when any fails.
// Criterion 9 needs real labeled data (BCHANGE_BOTREPO_EVENTS /
// BCHANGE_BOTREPO_LABELS environment variables) and is skipped otherwise.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bchange/calendar.hpp"
#include "bchange/pipeline.hpp"
#include "bchange/rng.hpp"
#include "bchange/synth.hpp"

using namespace bchange;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    enum Status { pass, fail, skip } status = pass;
    std::string detail;
};

Outcome ok() { return {}; }
Outcome failed(const std::string& why) { return {Outcome::fail, why}; }
Outcome skipped(const std::string& why) { return {Outcome::skip, why}; }

#define REQUIRE_TRUE(cond, why)                      \
    do {                                             \
        if (!(cond)) return failed(why);             \
    } while (0)

std::string random_symbols(rng::Pcg32& gen, std::size_t n, const char* alpha, std::size_t m) {
    std::string s;
    for (std::size_t i = 0; i < n; ++i) s.push_back(alpha[gen.bounded(static_cast<std::uint32_t>(m))]);
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ---------------------------------------------------------------- 1
Outcome fig2_golden() {
    ingest::AccountTimeline tl;
    tl.account_id = "nasa";
    tl.events = {
        {1000, ingest::Action::reply, {.text_terms = 1, .media = 1, .mentions = 1}},
        {1120, ingest::Action::post, {.text_terms = 1, .mentions = 2}},
        {1300, ingest::Action::reshare, {.text_terms = 1, .links = 1, .mentions = 5}},
    };
    const auto doc = bloc::encode(tl);
    REQUIRE_TRUE(bloc::render(doc, bloc::View::action) == "p.T.r",
                 "action view != p.T.r, got " + bloc::render(doc, bloc::View::action));
    REQUIRE_TRUE(bloc::render(doc, bloc::View::content) == "(Emt)(mmt)(mmmmmUt)",
                 "content view mismatch, got " + bloc::render(doc, bloc::View::content));
    return ok();
}

// ---------------------------------------------------------------- 2
// Independent ISO week oracle (year/week-number route).
std::pair<int, int> iso_year_week(std::int64_t ts) {
    const std::int64_t days = cal::days_from_epoch_seconds(ts);
    const auto d = cal::civil_from_days(days);
    const int dow = cal::weekday_from_days(days) + 1;
    const int doy = static_cast<int>(days - cal::days_from_civil(d.year, 1, 1)) + 1;
    const auto p = [](int y) { return (y + y / 4 - y / 100 + y / 400) % 7; };
    const auto weeks_in = [&](int y) { return 52 + ((p(y) == 4 || p(y - 1) == 3) ? 1 : 0); };
    int week = (doy - dow + 10) / 7;
    int year = d.year;
    if (week < 1) {
        --year;
        week = weeks_in(year);
    } else if (week > weeks_in(year)) {
        ++year;
        week = 1;
    }
    return {year, week};
}

Outcome segmentation_conservation() {
    rng::Pcg32 gen(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 2 + static_cast<int>(gen.bounded(80));
        ingest::AccountTimeline tl;
        tl.account_id = "r";
        std::int64_t t = 1 + gen.int_in(0, 2000000000LL);
        for (int i = 0; i < n; ++i) {
            tl.events.push_back({t, static_cast<ingest::Action>(gen.bounded(3)),
                                 {.text_terms = gen.bounded(2)}});
            t += gen.int_in(1, 4000000);
        }
        const auto doc = bloc::encode(tl);

        const std::int64_t threshold = 3600;
        const int k = 2 + static_cast<int>(gen.bounded(6));

        // Brute-force expected event partitions, derived from raw timestamps.
        std::vector<std::vector<std::size_t>> expected[3];
        {
            std::vector<std::size_t> cur;
            for (int i = 0; i < n; ++i) {
                cur.push_back(static_cast<std::size_t>(i));
                const bool boundary =
                    i + 1 < n &&
                    tl.events[static_cast<std::size_t>(i) + 1].timestamp -
                            tl.events[static_cast<std::size_t>(i)].timestamp > threshold;
                if (boundary || i + 1 == n) {
                    expected[0].push_back(cur);
                    cur.clear();
                }
            }
            for (int i = 0; i < n; ++i) {
                cur.push_back(static_cast<std::size_t>(i));
                const bool boundary =
                    i + 1 < n && iso_year_week(tl.events[static_cast<std::size_t>(i)].timestamp) !=
                                     iso_year_week(tl.events[static_cast<std::size_t>(i) + 1].timestamp);
                if (boundary || i + 1 == n) {
                    expected[1].push_back(cur);
                    cur.clear();
                }
            }
            for (int i = 0; i < n; ++i) {
                cur.push_back(static_cast<std::size_t>(i));
                if (static_cast<int>(cur.size()) == k || i + 1 == n) {
                    expected[2].push_back(cur);
                    cur.clear();
                }
            }
        }

        segment::ChangeSetting setting;
        setting.pause_threshold = threshold;
        setting.k = k;
        for (int method = 0; method < 3; ++method) {
            setting.segmentation = method == 0   ? segment::Segmentation::pauses
                                   : method == 1 ? segment::Segmentation::weeks
                                                 : segment::Segmentation::sets_of_k;
            const auto segs = segment::segment_document(doc, setting);
            REQUIRE_TRUE(segs.size() == expected[method].size(), "segment count mismatch");
            std::size_t total_actions = 0;
            for (std::size_t s = 0; s < segs.size(); ++s) {
                std::size_t actions = 0;
                for (char c : segs[s].action_symbols)
                    if (bloc::alphabet::is_action(c)) ++actions;
                REQUIRE_TRUE(actions == expected[method][s].size(),
                             "per-segment action count mismatch");
                total_actions += actions;
            }
            REQUIRE_TRUE(total_actions == static_cast<std::size_t>(n),
                         "action symbols not conserved");
            if (segs.size() >= 2) {
                for (auto sel : {segment::Selection::adjacent, segment::Selection::cumulative}) {
                    const auto pairs = segment::select_pairs(segs, sel);
                    REQUIRE_TRUE(pairs && pairs->size() == segs.size() - 1,
                                 "pair count != segments - 1");
                }
            }
        }
    }
    return ok();
}

// ---------------------------------------------------------------- 3
Outcome distance_properties() {
    static const char kAction[] = {'T', 'r', 'p', '.', 'd', 'D', 'Y'};
    rng::Pcg32 gen(3033);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto a = random_symbols(gen, 1 + gen.bounded(120), kAction, 7);
        const auto b = random_symbols(gen, 1 + gen.bounded(120), kAction, 7);
        const double dab = *distance::cosine_distance(a, b);
        REQUIRE_TRUE(*distance::cosine_distance(a, a) == 0.0, "cosine self-distance != 0");
        REQUIRE_TRUE(dab == *distance::cosine_distance(b, a), "cosine asymmetric");
        REQUIRE_TRUE(dab >= 0.0 && dab <= 1.0, "cosine out of range");
        std::vector<char> perm(a.begin(), a.end());
        gen.shuffle(perm);
        REQUIRE_TRUE(*distance::cosine_distance(std::string(perm.begin(), perm.end()), b) == dab,
                     "cosine not permutation-invariant");
    }
    rng::Pcg32 gen2(3044);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 16 + gen2.bounded(200);
        const auto a = random_symbols(gen2, n, kAction, 7);
        const auto b = random_symbols(gen2, n, kAction, 7);
        const double self = *distance::compression_distance(a, a);
        const double cross = *distance::compression_distance(a, b);
        REQUIRE_TRUE(self < cross, "NCD self-distance not below NCD vs random");
        REQUIRE_TRUE(self >= 0.0 && self <= 1.0 && cross >= 0.0 && cross <= 1.0,
                     "NCD out of [0,1]");
    }
    return ok();
}

// ---------------------------------------------------------------- 4
Outcome histogram_oracle() {
    rng::Pcg32 gen(4055);
    for (int i = 0; i < 10000; ++i) {
        const double v = gen.next_double();
        int expect = 9;
        for (int b = 0; b < 10; ++b) {
            if (v >= b / 10.0 && v < (b + 1) / 10.0) {
                expect = b;
                break;
            }
        }
        REQUIRE_TRUE(features::bin_index(v, 10) == expect, "bin assignment mismatch");
    }
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> ds;
        const int n = 1 + static_cast<int>(gen.bounded(300));
        for (int i = 0; i < n; ++i) ds.push_back(gen.next_double());
        const auto h = features::build_histogram(ds, 10);
        double sum = 0;
        for (double b : h) sum += b;
        REQUIRE_TRUE(std::abs(sum - 1.0) <= 1e-9, "histogram mass not 1");
    }
    return ok();
}

// ---------------------------------------------------------------- 5
bool knn_oracle(const classify::Dataset& train, int k, const std::vector<double>& x) {
    std::vector<bool> used(train.size(), false);
    std::vector<std::size_t> picked;
    for (int round = 0; round < k; ++round) {
        std::size_t best = train.size();
        double best_d = 0;
        for (std::size_t i = 0; i < train.size(); ++i) {
            if (used[i]) continue;
            const double d = classify::feature_cosine_distance(train[i].features, x);
            if (best == train.size() || d < best_d) {
                best = i;
                best_d = d;
            }
        }
        used[best] = true;
        picked.push_back(best);
    }
    int pos = 0;
    for (std::size_t i : picked)
        if (train[i].positive) ++pos;
    if (2 * pos == k) return train[picked[0]].positive;
    return 2 * pos > k;
}

Outcome classifier_oracle() {
    rng::Pcg32 gen(5066);
    const auto random_features = [&] {
        std::vector<double> v(20);
        for (int half = 0; half < 2; ++half) {
            double sum = 0;
            for (int b = 0; b < 10; ++b) {
                v[static_cast<std::size_t>(half * 10 + b)] = gen.next_double();
                sum += v[static_cast<std::size_t>(half * 10 + b)];
            }
            for (int b = 0; b < 10; ++b) v[static_cast<std::size_t>(half * 10 + b)] /= sum;
        }
        return v;
    };
    for (int trial = 0; trial < 200; ++trial) {
        classify::Dataset train;
        const int n = 3 + static_cast<int>(gen.bounded(30));
        for (int i = 0; i < n; ++i) train.push_back({random_features(), gen.chance(0.5)});
        const auto x = random_features();
        const int k = 1 + static_cast<int>(gen.bounded(static_cast<std::uint32_t>(std::min(10, n))));
        classify::KnnModel model{train, k};
        REQUIRE_TRUE(classify::knn_predict(model, x) == knn_oracle(train, k, x),
                     "knn_predict disagrees with brute force");
    }
    for (int trial = 0; trial < 1000; ++trial) {
        classify::Confusion c{gen.bounded(100), gen.bounded(100), gen.bounded(100),
                              gen.bounded(100)};
        if (c.total() == 0) c.tn = 1;
        const auto m = classify::macro_metrics(c);
        const auto safe = [](double num, double den) { return den == 0 ? 0.0 : num / den; };
        const double pp = safe(double(c.tp), double(c.tp + c.fp));
        const double rp = safe(double(c.tp), double(c.tp + c.fn));
        const double pn = safe(double(c.tn), double(c.tn + c.fn));
        const double rn = safe(double(c.tn), double(c.tn + c.fp));
        const double expect = (safe(2 * pp * rp, pp + rp) + safe(2 * pn * rn, pn + rn)) / 2;
        REQUIRE_TRUE(std::abs(m.f1 - expect) < 1e-12, "macro-F1 disagrees with hand computation");
    }
    return ok();
}

// ---------------------------------------------------------------- 6 & 8
struct MixDataset {
    fs::path dir;
    fs::path events;
    fs::path labels;
};

MixDataset write_mix_dataset() {
    MixDataset d;
    d.dir = fs::path("/tmp/bchange_acceptance_mix");
    fs::remove_all(d.dir);
    fs::create_directories(d.dir);
    d.events = d.dir / "events.jsonl";
    d.labels = d.dir / "labels.csv";

    std::vector<ingest::AccountTimeline> accounts;
    const auto add = [&](synth::Regime regime, std::uint64_t seed) {
        synth::RegimeSpec spec;
        spec.regime = regime;
        spec.n_accounts = 200;
        spec.n_events = 64;
        spec.seed = seed;
        for (auto& a : synth::generate(spec)) accounts.push_back(std::move(a));
    };
    add(synth::Regime::stable_human, 601);
    add(synth::Regime::repetitive_bot, 602);
    add(synth::Regime::erratic_bot, 603);
    synth::write_events_file(d.events.string(), accounts);
    synth::write_labels_file(d.labels.string(), accounts);
    return d;
}

Outcome qualitative_reproduction() {
    const auto dataset = write_mix_dataset();
    auto loaded = ingest::load_events(dataset.events.string());
    ingest::attach_labels(loaded.accounts, dataset.labels.string());

    // Distance-mass regimes under the analysis setting (sets-of-4,
    // cumulative, cosine).
    segment::ChangeSetting analysis;
    analysis.distance = segment::DistanceMeasure::cosine;
    const auto mass_of = [&](const std::string& prefix, bool content, int lo, int hi) {
        std::vector<ingest::AccountTimeline> members;
        for (const auto& a : loaded.accounts)
            if (a.account_id.rfind(prefix, 0) == 0) members.push_back(a);
        const auto ext = pipeline::extract_features(members, analysis, {});
        double in_range = 0, total = 0;
        for (const auto& f : ext.feats) {
            const auto& h = content ? f.content_hist : f.action_hist;
            const double n =
                static_cast<double>(content ? f.n_content_distances : f.n_action_distances);
            for (int b = 0; b < 10; ++b) {
                total += h[static_cast<std::size_t>(b)] * n;
                if (b >= lo && b <= hi) in_range += h[static_cast<std::size_t>(b)] * n;
            }
        }
        return in_range / total;
    };

    const double rep_low = mass_of("repbot_", false, 0, 2);
    REQUIRE_TRUE(rep_low >= 0.90,
                 "repetitive action mass in bins 0-2 is " + std::to_string(rep_low));
    const double err_high = mass_of("errbot_", true, 7, 9);
    REQUIRE_TRUE(err_high >= 0.50,
                 "erratic content mass in bins 7-9 is " + std::to_string(err_high));

    // Classifier at the reference automation setting.
    pipeline::ExperimentConfig config;
    config.events_path = dataset.events.string();
    config.labels_path = dataset.labels.string();
    config.out_dir = (dataset.dir / "out").string();
    config.seed = 606;
    const auto reports = pipeline::run_experiment(config);
    REQUIRE_TRUE(reports.size() == 1 && reports[0].eval.has_value(), "run failed");
    const double f1 = reports[0].eval->at_best().metrics.f1;
    REQUIRE_TRUE(f1 >= 0.95, "sets-of-4/cumulative/compression macro-F1 = " + std::to_string(f1));
    return ok();
}

Outcome determinism() {
    const auto dataset = write_mix_dataset();
    pipeline::ExperimentConfig config;
    config.events_path = dataset.events.string();
    config.labels_path = dataset.labels.string();
    config.seed = 606;

    config.out_dir = (dataset.dir / "det1").string();
    (void)pipeline::run_experiment(config);
    config.out_dir = (dataset.dir / "det2").string();
    (void)pipeline::run_experiment(config);

    for (const char* name : {"report_all.json", "results.csv", "per_k.csv", "features_all.csv",
                             "class_histograms_all.csv"}) {
        REQUIRE_TRUE(slurp(dataset.dir / "det1" / name) == slurp(dataset.dir / "det2" / name),
                     std::string("outputs differ: ") + name);
    }
    return ok();
}

// ---------------------------------------------------------------- 7
Outcome coordination_reproduction() {
    const fs::path dir("/tmp/bchange_acceptance_coord");
    fs::remove_all(dir);
    fs::create_directories(dir);

    std::vector<ingest::AccountTimeline> accounts;
    for (int c = 0; c < 3; ++c) {
        synth::CampaignSpec spec;
        spec.name = "campaign_0" + std::to_string(c);
        spec.seed = 700 + static_cast<std::uint64_t>(c);
        for (auto& a : synth::generate_campaign(spec)) accounts.push_back(std::move(a));
    }
    synth::write_events_file((dir / "events.jsonl").string(), accounts);
    synth::write_labels_file((dir / "labels.csv").string(), accounts);

    pipeline::ExperimentConfig config;
    config.events_path = (dir / "events.jsonl").string();
    config.labels_path = (dir / "labels.csv").string();
    config.out_dir = (dir / "out").string();
    config.task = ingest::Task::coordination;
    config.setting.segmentation = segment::Segmentation::pauses;
    config.setting.selection = segment::Selection::adjacent;
    config.setting.distance = segment::DistanceMeasure::compression;
    config.min_posts = 10;
    config.seed = 707;

    const auto reports = pipeline::run_experiment(config);
    REQUIRE_TRUE(reports.size() == 4, "expected 3 campaign reports plus a mean row");
    for (const auto& r : reports)
        if (r.campaign != "mean")
            REQUIRE_TRUE(r.eval && r.eval->n_predictions == 20,
                         "campaign should hold out 20 accounts");
    REQUIRE_TRUE(reports.back().mean_metrics.has_value(), "missing mean metrics");
    const double mean_f1 = reports.back().mean_metrics->f1;
    REQUIRE_TRUE(mean_f1 >= 0.90, "mean campaign macro-F1 = " + std::to_string(mean_f1));
    return ok();
}

// ---------------------------------------------------------------- 9
Outcome real_data_check() {
    const char* events = std::getenv("BCHANGE_BOTREPO_EVENTS");
    const char* labels = std::getenv("BCHANGE_BOTREPO_LABELS");
    if (events == nullptr || labels == nullptr)
        return skipped("set BCHANGE_BOTREPO_EVENTS / BCHANGE_BOTREPO_LABELS to enable");

    pipeline::ExperimentConfig config;
    config.events_path = events;
    config.labels_path = labels;
    config.write_outputs = false;
    config.seed = 909;
    const auto grid = pipeline::default_grid(config, true);
    const auto reports = pipeline::sweep(config, grid);

    // Within each segmentation group the best row must be
    // cumulative+compression, and sets-of-4/cumulative/compression must land
    // within +-0.05 of the 0.86 reference score.
    std::map<std::string, std::pair<double, const report::RunReport*>> best;
    for (const auto& r : reports) {
        if (!r.eval) continue;
        const std::string group = segment::to_string(r.setting.segmentation);
        const double f1 = r.eval->at_best().metrics.f1;
        if (!best.count(group) || f1 > best[group].first) best[group] = {f1, &r};
    }
    REQUIRE_TRUE(best.size() == 3, "a segmentation group produced no evaluation");
    for (const auto& [group, entry] : best) {
        const auto* r = entry.second;
        REQUIRE_TRUE(r->setting.selection == segment::Selection::cumulative &&
                         r->setting.distance == segment::DistanceMeasure::compression,
                     "best setting in group " + group + " is not cumulative+compression");
    }
    for (const auto& r : reports) {
        if (r.setting.segmentation == segment::Segmentation::sets_of_k &&
            r.setting.selection == segment::Selection::cumulative &&
            r.setting.distance == segment::DistanceMeasure::compression) {
            REQUIRE_TRUE(r.eval.has_value(), "reference setting failed");
            const double f1 = r.eval->at_best().metrics.f1;
            REQUIRE_TRUE(std::abs(f1 - 0.86) <= 0.05,
                         "sets-of-4/cumulative/compression F1 = " + std::to_string(f1));
        }
    }
    return ok();
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = no budget stated
    std::function<Outcome()> fn;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "fig2-golden-encoding", 1.0, fig2_golden},
        {2, "segmentation-conservation", 10.0, segmentation_conservation},
        {3, "distance-properties", 30.0, distance_properties},
        {4, "histogram-oracle", 0.0, histogram_oracle},
        {5, "classifier-oracle", 0.0, classifier_oracle},
        {6, "qualitative-reproduction", 300.0, qualitative_reproduction},
        {7, "coordination-reproduction", 120.0, coordination_reproduction},
        {8, "determinism", 0.0, determinism},
        {9, "real-data-sweep", 0.0, real_data_check},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.fn();
        } catch (const std::exception& e) {
            outcome = failed(std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (outcome.status == Outcome::pass && c.budget_seconds > 0 && secs > c.budget_seconds)
            outcome = failed("runtime " + std::to_string(secs) + "s over budget");

        const char* tag = outcome.status == Outcome::pass   ? "PASS"
                          : outcome.status == Outcome::skip ? "SKIP"
                                                            : "FAIL";
        std::printf("[%s] %d %-28s (%.2fs)%s%s\n", tag, c.id, c.name, secs,
                    outcome.detail.empty() ? "" : "  ", outcome.detail.c_str());
        if (outcome.status == Outcome::fail) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
