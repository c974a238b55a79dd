#include "bchange/events.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "bchange/calendar.hpp"
#include "bchange/rng.hpp"

namespace bchange::ingest {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::optional<Action> parse_action(const std::string& s) {
    if (s == "post") return Action::post;
    if (s == "reshare") return Action::reshare;
    if (s == "reply") return Action::reply;
    return std::nullopt;
}

std::optional<Label> parse_label_value(const std::string& raw) {
    const std::string s = lower(raw);
    if (s == "positive" || s == "bot" || s == "io") return Label::positive;
    if (s == "negative" || s == "human" || s == "control") return Label::negative;
    return std::nullopt;
}

std::optional<Task> parse_task_value(const std::string& raw) {
    const std::string s = lower(raw);
    if (s == "automation") return Task::automation;
    if (s == "coordination") return Task::coordination;
    return std::nullopt;
}

bool parse_uint_field(const json& j, const char* key, std::uint32_t& out, std::string& err) {
    if (!j.contains(key)) {
        err = std::string("missing field '") + key + "'";
        return false;
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
        err = std::string("field '") + key + "' must be a non-negative integer";
        return false;
    }
    out = static_cast<std::uint32_t>(v.get<std::int64_t>());
    return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

const char* to_string(Action a) {
    switch (a) {
        case Action::post: return "post";
        case Action::reshare: return "reshare";
        case Action::reply: return "reply";
    }
    return "?";
}

const char* to_string(Label l) { return l == Label::positive ? "positive" : "negative"; }

const char* to_string(Task t) { return t == Task::automation ? "automation" : "coordination"; }

std::optional<std::int64_t> parse_iso8601(const std::string& text) {
    // YYYY-MM-DD[{T,space}HH:MM:SS[.frac]][Z|±HH[:]MM]
    const char* p = text.c_str();
    auto digits = [&](int n, long long& out) -> bool {
        out = 0;
        for (int i = 0; i < n; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(*p))) return false;
            out = out * 10 + (*p - '0');
            ++p;
        }
        return true;
    };
    long long y, mo, d, h = 0, mi = 0, s = 0;
    if (!digits(4, y) || *p++ != '-' || !digits(2, mo) || *p++ != '-' || !digits(2, d))
        return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31) return std::nullopt;
    if (*p == 'T' || *p == 't' || *p == ' ') {
        ++p;
        if (!digits(2, h) || *p++ != ':' || !digits(2, mi) || *p++ != ':' || !digits(2, s))
            return std::nullopt;
        if (h > 23 || mi > 59 || s > 60) return std::nullopt;
        if (*p == '.') {
            ++p;
            while (std::isdigit(static_cast<unsigned char>(*p))) ++p;
        }
    }
    long long offset = 0;
    if (*p == 'Z' || *p == 'z') {
        ++p;
    } else if (*p == '+' || *p == '-') {
        const int sign = (*p == '+') ? 1 : -1;
        ++p;
        long long oh, om;
        if (!digits(2, oh)) return std::nullopt;
        if (*p == ':') ++p;
        if (!digits(2, om)) return std::nullopt;
        offset = sign * (oh * 3600 + om * 60);
    }
    if (*p != '\0') return std::nullopt;
    const std::int64_t days = cal::days_from_civil(static_cast<int>(y), static_cast<unsigned>(mo),
                                                   static_cast<unsigned>(d));
    return days * cal::kSecondsPerDay + h * 3600 + mi * 60 + s - offset;
}

LoadResult load_events(const std::string& path, FileFormat format) {
    (void)format;  // event_lines is the only format
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open event file: " + path);

    LoadResult result;
    LoadReport& report = result.report;

    // Grouping preserves per-account input order so timestamp ties stay stable.
    std::map<std::string, std::vector<PostEvent>> grouped;

    std::string line;
    std::size_t line_no = 0;
    auto record_error = [&](const std::string& reason) {
        ++report.malformed_total;
        if (report.malformed.size() < kMaxMalformedDetail)
            report.malformed.push_back({line_no, reason});
    };

    while (std::getline(in, line)) {
        ++line_no;
        ++report.lines_total;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            ++report.blank_lines;
            continue;
        }
        json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            record_error("not a JSON object");
            continue;
        }
        if (!j.contains("account_id") || !j.at("account_id").is_string()) {
            record_error("missing field 'account_id'");
            continue;
        }
        const std::string account_id = j.at("account_id").get<std::string>();
        if (account_id.empty()) {
            record_error("empty account_id");
            continue;
        }

        PostEvent ev;
        if (!j.contains("timestamp")) {
            record_error("missing field 'timestamp'");
            continue;
        }
        const auto& ts = j.at("timestamp");
        if (ts.is_number_integer()) {
            ev.timestamp = ts.get<std::int64_t>();
        } else if (ts.is_string()) {
            auto parsed = parse_iso8601(ts.get<std::string>());
            if (!parsed) {
                record_error("unparseable timestamp");
                continue;
            }
            ev.timestamp = *parsed;
        } else {
            record_error("timestamp must be integer seconds or ISO-8601 string");
            continue;
        }
        if (ev.timestamp <= 0) {
            record_error("timestamp must be positive");
            continue;
        }

        if (!j.contains("action") || !j.at("action").is_string()) {
            record_error("missing field 'action'");
            continue;
        }
        auto action = parse_action(j.at("action").get<std::string>());
        if (!action) {
            record_error("action must be one of post/reshare/reply");
            continue;
        }
        ev.action = *action;

        std::string err;
        if (!parse_uint_field(j, "text_terms", ev.content.text_terms, err) ||
            !parse_uint_field(j, "links", ev.content.links, err) ||
            !parse_uint_field(j, "hashtags", ev.content.hashtags, err) ||
            !parse_uint_field(j, "media", ev.content.media, err) ||
            !parse_uint_field(j, "mentions", ev.content.mentions, err)) {
            record_error(err);
            continue;
        }

        ++report.records_ok;
        grouped[account_id].push_back(ev);
    }

    result.accounts.reserve(grouped.size());
    for (auto& [id, events] : grouped) {
        std::stable_sort(events.begin(), events.end(),
                         [](const PostEvent& a, const PostEvent& b) {
                             return a.timestamp < b.timestamp;
                         });
        AccountTimeline tl;
        tl.account_id = id;
        tl.events = std::move(events);
        result.accounts.push_back(std::move(tl));
    }
    report.accounts = result.accounts.size();
    return result;
}

LabelReport attach_labels(std::vector<AccountTimeline>& accounts, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path);

    std::unordered_map<std::string, AccountTimeline*> by_id;
    for (auto& a : accounts) by_id[a.account_id] = &a;

    LabelReport report;
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) return report;
    ++line_no;
    auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "account_id" || header[1] != "label" ||
        header[2] != "task")
        throw std::runtime_error("label file must start with header account_id,label,task[,campaign]");
    const bool has_campaign = header.size() >= 4 && header[3] == "campaign";

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fields = split_csv_line(line);
        if (fields.size() < 3) {
            report.malformed.push_back({line_no, "expected at least 3 fields"});
            continue;
        }
        auto label = parse_label_value(fields[1]);
        auto task = parse_task_value(fields[2]);
        if (!label || !task) {
            report.malformed.push_back({line_no, "bad label or task value"});
            continue;
        }
        ++report.labels_total;
        auto it = by_id.find(fields[0]);
        if (it == by_id.end()) {
            ++report.unmatched;
            continue;
        }
        AccountLabel al;
        al.label = *label;
        al.task = *task;
        if (has_campaign && fields.size() >= 4) al.campaign = fields[3];
        it->second->label = al;
        ++report.attached;
    }
    return report;
}

std::variant<AccountTimeline, Rejection> apply_eligibility(AccountTimeline timeline,
                                                           std::size_t min_posts,
                                                           std::size_t max_posts) {
    if (timeline.events.size() < min_posts)
        return Rejection{RejectReason::too_few_posts, timeline.events.size()};
    if (timeline.events.size() > max_posts) {
        timeline.events.erase(timeline.events.begin(),
                              timeline.events.end() - static_cast<std::ptrdiff_t>(max_posts));
    }
    return timeline;
}

CampaignWindow window_campaign(const std::vector<AccountTimeline>& accounts, int interval_days,
                               std::size_t target_accounts, std::uint64_t seed) {
    CampaignWindow result;

    std::vector<const AccountTimeline*> positives;
    std::vector<const AccountTimeline*> controls;
    for (const auto& a : accounts) {
        if (!a.label || a.events.empty()) continue;
        (a.label->label == Label::positive ? positives : controls).push_back(&a);
    }
    if (positives.empty()) {
        result.warning = true;
        return result;
    }

    // Interval grid anchored at the UTC day of the earliest positive event.
    std::int64_t earliest = positives.front()->events.front().timestamp;
    std::int64_t last_positive = 0;
    for (const auto* p : positives) {
        earliest = std::min(earliest, p->events.front().timestamp);
        last_positive = std::max(last_positive, p->events.back().timestamp);
    }
    const std::int64_t anchor = cal::start_of_day(earliest);
    const std::int64_t interval_len = static_cast<std::int64_t>(interval_days) * cal::kSecondsPerDay;

    // First in-window event per positive account, ordered by (interval, time).
    std::vector<std::pair<std::int64_t, const AccountTimeline*>> first_seen;
    first_seen.reserve(positives.size());
    for (const auto* p : positives) first_seen.emplace_back(p->events.front().timestamp, p);
    std::sort(first_seen.begin(), first_seen.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return a.second->account_id < b.second->account_id;
              });

    std::int64_t window_end;
    if (first_seen.size() >= target_accounts) {
        // The interval in which the target-th distinct positive appears pins
        // the year the window runs to the end of. An interval straddling a
        // year boundary counts as the year it ends in.
        const std::int64_t reach_ts = first_seen[target_accounts - 1].first;
        const std::int64_t interval_idx = (reach_ts - anchor) / interval_len;
        const std::int64_t interval_last = anchor + (interval_idx + 1) * interval_len - 1;
        window_end = cal::end_of_year(interval_last);
    } else {
        result.warning = true;
        window_end = cal::end_of_year(last_positive);
    }
    result.window_start = anchor;
    result.window_end = window_end;

    auto trim = [&](const AccountTimeline& a) {
        AccountTimeline t;
        t.account_id = a.account_id;
        t.label = a.label;
        for (const auto& ev : a.events)
            if (ev.timestamp >= anchor && ev.timestamp < window_end) t.events.push_back(ev);
        return t;
    };

    std::vector<AccountTimeline> kept_positives;
    for (const auto* p : positives) {
        AccountTimeline t = trim(*p);
        if (!t.events.empty()) kept_positives.push_back(std::move(t));
    }

    std::vector<AccountTimeline> eligible_controls;
    for (const auto* c : controls) {
        AccountTimeline t = trim(*c);
        if (!t.events.empty()) eligible_controls.push_back(std::move(t));
    }
    std::sort(eligible_controls.begin(), eligible_controls.end(),
              [](const auto& a, const auto& b) { return a.account_id < b.account_id; });

    const std::size_t n_controls = std::min(eligible_controls.size(), kept_positives.size());
    rng::Pcg32 gen(seed);
    auto picks = gen.sample_indices(eligible_controls.size(), n_controls);
    std::sort(picks.begin(), picks.end());

    std::sort(kept_positives.begin(), kept_positives.end(),
              [](const auto& a, const auto& b) { return a.account_id < b.account_id; });

    result.positives = kept_positives.size();
    result.controls = n_controls;
    result.accounts = std::move(kept_positives);
    for (std::size_t idx : picks) result.accounts.push_back(std::move(eligible_controls[idx]));
    return result;
}

}  // namespace bchange::ingest
