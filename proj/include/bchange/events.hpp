// Event-log ingestion: normalized post events, account timelines, label
// attachment, eligibility filters, campaign windowing.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bchange::ingest {

enum class Action { post, reshare, reply };

struct ContentCounts {
    std::uint32_t text_terms = 0;
    std::uint32_t links = 0;
    std::uint32_t hashtags = 0;
    std::uint32_t media = 0;
    std::uint32_t mentions = 0;
};

struct PostEvent {
    std::int64_t timestamp = 0;  // epoch seconds UTC, > 0
    Action action = Action::post;
    ContentCounts content;
};

enum class Task { automation, coordination };
enum class Label { positive, negative };

struct AccountLabel {
    Label label = Label::negative;
    Task task = Task::automation;
    std::string campaign;  // empty unless the label file carries one
};

struct AccountTimeline {
    std::string account_id;
    std::vector<PostEvent> events;  // non-decreasing timestamps, ties keep input order
    std::optional<AccountLabel> label;
};

struct MalformedLine {
    std::size_t line_no = 0;  // 1-based
    std::string reason;
};

struct LoadReport {
    std::size_t lines_total = 0;
    std::size_t blank_lines = 0;
    std::size_t records_ok = 0;
    std::size_t malformed_total = 0;
    std::vector<MalformedLine> malformed;  // detail capped at kMaxMalformedDetail
    std::size_t accounts = 0;
};

constexpr std::size_t kMaxMalformedDetail = 100;

struct LoadResult {
    std::vector<AccountTimeline> accounts;  // sorted by account_id
    LoadReport report;
};

enum class FileFormat { event_lines };

// Reads a JSON-lines event file. Malformed records are reported, not dropped
// silently; an unreadable file throws std::runtime_error.
LoadResult load_events(const std::string& path, FileFormat format = FileFormat::event_lines);

struct LabelReport {
    std::size_t labels_total = 0;
    std::size_t attached = 0;
    std::size_t unmatched = 0;  // labels whose account is not in the event file
    std::vector<MalformedLine> malformed;
};

// Reads a delimited label file with header account_id,label,task[,campaign]
// and attaches labels onto the matching timelines.
LabelReport attach_labels(std::vector<AccountTimeline>& accounts, const std::string& path);

// "2021-03-04T05:06:07Z" (or offset / space separator / date-only) -> epoch
// seconds. Returns nullopt on anything unparseable.
std::optional<std::int64_t> parse_iso8601(const std::string& text);

enum class RejectReason { too_few_posts };

struct Rejection {
    RejectReason reason = RejectReason::too_few_posts;
    std::size_t n_events = 0;
};

// Keeps the most recent max_posts events; accounts with fewer than min_posts
// events are rejected. Rejection is a typed outcome, not an error.
std::variant<AccountTimeline, Rejection> apply_eligibility(AccountTimeline timeline,
                                                           std::size_t min_posts = 20,
                                                           std::size_t max_posts = 300);

struct CampaignWindow {
    std::vector<AccountTimeline> accounts;  // positives then sampled controls, by id
    std::int64_t window_start = 0;          // inclusive
    std::int64_t window_end = 0;            // exclusive
    std::size_t positives = 0;
    std::size_t controls = 0;
    bool warning = false;  // fewer than target_accounts positives existed
};

// Accumulates positive-account activity in interval_days-sized intervals
// (skipping empty ones) until target_accounts distinct positives have
// appeared, then extends the window to the end of that calendar year. An
// equal number of control accounts is sampled with the seeded generator.
CampaignWindow window_campaign(const std::vector<AccountTimeline>& accounts,
                               int interval_days = 14, std::size_t target_accounts = 10,
                               std::uint64_t seed = 0);

const char* to_string(Action a);
const char* to_string(Label l);
const char* to_string(Task t);

}  // namespace bchange::ingest
