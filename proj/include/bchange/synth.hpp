// Seeded synthetic account and campaign generator. Regimes are calibrated to
// the qualitative behaviors the pipeline is meant to separate: stable humans
// drift mildly, repetitive bots cycle, erratic bots switch vocabulary and
// tempo at seeded points, coordinated groups share one jittered template.
// The generator emits the same event/label file formats ingest consumes; it
// sits upstream of the pipeline, not inside it.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bchange/events.hpp"

namespace bchange::synth {

enum class Regime { stable_human, repetitive_bot, erratic_bot, coordinated_group };

// 2021-01-04T00:00:00Z, a Monday.
constexpr std::int64_t kDefaultStart = 18631LL * 86400;

struct RegimeSpec {
    Regime regime = Regime::stable_human;
    int n_accounts = 10;
    int n_events = 64;  // per account, in [20, 300] so eligibility passes untouched
    std::uint64_t seed = 1;
    int switch_points = 3;  // erratic_bot: number of abrupt regime switches
    double perturbation = 0.02;  // repetitive/coordinated deviation probability
    std::int64_t start_time = kDefaultStart;
    std::string id_prefix;  // defaults to a regime-specific prefix
    std::string campaign;   // coordinated_group label bookkeeping
};

// Labeled timelines (stable_human -> negative, bots/coordinated -> positive).
// Deterministic under the seed. Throws std::invalid_argument on bad ranges.
std::vector<ingest::AccountTimeline> generate(const RegimeSpec& spec);

struct CampaignSpec {
    std::string name = "campaign_00";
    int n_positive = 10;
    int n_controls = 10;
    int n_events = 64;
    std::uint64_t seed = 1;
    std::int64_t start_time = kDefaultStart;
};

// One coordinated group plus stable-human controls, all carrying the
// coordination task and the campaign tag.
std::vector<ingest::AccountTimeline> generate_campaign(const CampaignSpec& spec);

// Event-lines (JSONL) and label files in the ingest formats; output is
// byte-stable for a fixed input.
void write_events_file(const std::string& path,
                       const std::vector<ingest::AccountTimeline>& accounts);
void write_labels_file(const std::string& path,
                       const std::vector<ingest::AccountTimeline>& accounts);

const char* to_string(Regime r);
std::vector<std::string> regime_names();

}  // namespace bchange::synth
