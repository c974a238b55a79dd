#include "bchange/bloc.hpp"

namespace bchange::bloc {

char action_symbol(ingest::Action a) {
    switch (a) {
        case ingest::Action::post: return alphabet::kPost;
        case ingest::Action::reshare: return alphabet::kReshare;
        case ingest::Action::reply: return alphabet::kReply;
    }
    return '?';
}

char pause_symbol(std::int64_t gap_seconds, std::int64_t pause_floor) {
    if (gap_seconds <= pause_floor) return '\0';
    if (gap_seconds <= alphabet::kHour) return alphabet::kPauseHour;
    if (gap_seconds <= alphabet::kDay) return alphabet::kPauseDay;
    if (gap_seconds <= alphabet::kMonth) return alphabet::kPauseMonth;
    return alphabet::kPauseLong;
}

std::string content_word(const ingest::ContentCounts& content) {
    std::string word;
    word.append(content.media, alphabet::kMedia);
    word.append(content.mentions, alphabet::kMention);
    word.append(content.links, alphabet::kLink);
    word.append(content.hashtags, alphabet::kHashtag);
    if (content.text_terms > 0) word.push_back(alphabet::kText);
    return word;
}

BlocDocument encode(const ingest::AccountTimeline& timeline, std::int64_t pause_floor) {
    if (timeline.events.empty()) throw EmptyTimelineError();

    BlocDocument doc;
    doc.account_id = timeline.account_id;
    doc.content_words.reserve(timeline.events.size());
    doc.event_offsets.reserve(timeline.events.size());
    doc.event_times.reserve(timeline.events.size());

    for (std::size_t i = 0; i < timeline.events.size(); ++i) {
        const auto& ev = timeline.events[i];
        if (i > 0) {
            const char pause = pause_symbol(ev.timestamp - timeline.events[i - 1].timestamp,
                                            pause_floor);
            if (pause != '\0') doc.action_string.push_back(pause);
        }
        doc.event_offsets.push_back(doc.action_string.size());
        doc.action_string.push_back(action_symbol(ev.action));
        doc.content_words.push_back(content_word(ev.content));
        doc.event_times.push_back(ev.timestamp);
    }
    return doc;
}

std::string render(const BlocDocument& doc, View view) {
    if (view == View::action) return doc.action_string;
    std::string out;
    for (const auto& word : doc.content_words) {
        out.push_back('(');
        out += word;
        out.push_back(')');
    }
    return out;
}

}  // namespace bchange::bloc
