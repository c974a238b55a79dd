// BLOC encoding: an account timeline becomes a paired action/pause symbol
// string and one content word per event.
//
// Action symbols: T = post, r = reshare, p = reply.
// Pause symbols, by inter-event gap (upper edges inclusive):
//   '.'  (pause_floor, 1 hour]    'd'  (1 hour, 1 day]
//   'D'  (1 day, 30 days]         'Y'  longer than 30 days
// Gaps at or below pause_floor (default 60 s) emit no symbol.
// Content symbols, emitted per event in the fixed order E m U H t:
//   E media, m mention, U link, H hashtag (repeated per count),
//   t a single trailing symbol when the post has any text.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bchange/events.hpp"

namespace bchange::bloc {

namespace alphabet {
constexpr char kPost = 'T';
constexpr char kReshare = 'r';
constexpr char kReply = 'p';
constexpr char kPauseHour = '.';
constexpr char kPauseDay = 'd';
constexpr char kPauseMonth = 'D';
constexpr char kPauseLong = 'Y';
constexpr char kText = 't';
constexpr char kLink = 'U';
constexpr char kHashtag = 'H';
constexpr char kMedia = 'E';
constexpr char kMention = 'm';

constexpr std::int64_t kDefaultPauseFloor = 60;
constexpr std::int64_t kHour = 3600;
constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kMonth = 30 * kDay;

constexpr bool is_action(char c) { return c == kPost || c == kReshare || c == kReply; }
constexpr bool is_pause(char c) {
    return c == kPauseHour || c == kPauseDay || c == kPauseMonth || c == kPauseLong;
}
}  // namespace alphabet

char action_symbol(ingest::Action a);

// Pause symbol for a gap, or '\0' when the gap is at or below the floor.
char pause_symbol(std::int64_t gap_seconds, std::int64_t pause_floor = alphabet::kDefaultPauseFloor);

struct BlocDocument {
    std::string account_id;
    std::string action_string;               // action symbols interleaved with pauses
    std::vector<std::string> content_words;  // one per event, parentheses not stored
    std::vector<std::size_t> event_offsets;  // event i -> position of its action symbol
    std::vector<std::int64_t> event_times;   // epoch seconds per event

    std::size_t n_events() const { return event_times.size(); }

    // Pause symbol between event i and i+1, or '\0' when the gap emitted none.
    char pause_after(std::size_t i) const {
        const std::size_t next = event_offsets[i + 1];
        return next > event_offsets[i] + 1 ? action_string[event_offsets[i] + 1] : '\0';
    }
};

struct EmptyTimelineError : std::runtime_error {
    EmptyTimelineError() : std::runtime_error("cannot encode an empty timeline") {}
};

// Throws EmptyTimelineError on an empty timeline; the timeline must be sorted.
BlocDocument encode(const ingest::AccountTimeline& timeline,
                    std::int64_t pause_floor = alphabet::kDefaultPauseFloor);

std::string content_word(const ingest::ContentCounts& content);

enum class View { action, content };

// Action view is the raw symbol sequence; content view wraps each word in
// parentheses, e.g. "(Emt)(mmt)(mmmmmUt)".
std::string render(const BlocDocument& doc, View view);

}  // namespace bchange::bloc
