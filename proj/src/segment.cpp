#include "bchange/segment.hpp"

#include "bchange/calendar.hpp"

namespace bchange::segment {

namespace {

// Materializes doc events [first, last] as one segment. When
// carry_trailing_pause is set, a pause symbol following the last event stays
// with the segment instead of being dropped at the boundary.
Segment make_segment(const bloc::BlocDocument& doc, std::size_t first, std::size_t last,
                     std::size_t index, bool carry_trailing_pause) {
    Segment seg;
    seg.index = index;
    seg.n_events = last - first + 1;
    seg.start_time = doc.event_times[first];
    seg.end_time = doc.event_times[last];
    for (std::size_t e = first; e <= last; ++e) {
        seg.action_symbols.push_back(doc.action_string[doc.event_offsets[e]]);
        if (e < last) {
            const char pause = doc.pause_after(e);
            if (pause != '\0') seg.action_symbols.push_back(pause);
        }
        seg.content_symbols += doc.content_words[e];
    }
    if (carry_trailing_pause && last + 1 < doc.n_events()) {
        const char pause = doc.pause_after(last);
        if (pause != '\0') seg.action_symbols.push_back(pause);
    }
    return seg;
}

// Splits at event boundaries flagged by `boundary_after(i)`; boundary pause
// symbols are dropped.
template <class BoundaryAfter>
std::vector<Segment> split_at(const bloc::BlocDocument& doc, BoundaryAfter boundary_after) {
    std::vector<Segment> segments;
    std::size_t first = 0;
    for (std::size_t i = 0; i + 1 < doc.n_events(); ++i) {
        if (boundary_after(i)) {
            segments.push_back(make_segment(doc, first, i, segments.size(), false));
            first = i + 1;
        }
    }
    segments.push_back(make_segment(doc, first, doc.n_events() - 1, segments.size(), false));
    return segments;
}

}  // namespace

std::vector<Segment> segment_by_pauses(const bloc::BlocDocument& doc, std::int64_t threshold) {
    return split_at(doc, [&](std::size_t i) {
        return doc.event_times[i + 1] - doc.event_times[i] > threshold;
    });
}

std::vector<Segment> segment_by_weeks(const bloc::BlocDocument& doc) {
    return split_at(doc, [&](std::size_t i) {
        return cal::iso_week_key(doc.event_times[i]) != cal::iso_week_key(doc.event_times[i + 1]);
    });
}

std::vector<Segment> segment_by_sets_of_k(const bloc::BlocDocument& doc, int k,
                                          bool count_pauses) {
    std::vector<Segment> segments;
    const std::size_t n = doc.n_events();
    std::size_t first = 0;
    std::size_t weight = 0;
    for (std::size_t i = 0; i < n; ++i) {
        weight += 1;
        if (count_pauses && i + 1 < n && doc.pause_after(i) != '\0') weight += 1;
        if (weight >= static_cast<std::size_t>(k)) {
            segments.push_back(make_segment(doc, first, i, segments.size(), true));
            first = i + 1;
            weight = 0;
        }
    }
    if (first < n) segments.push_back(make_segment(doc, first, n - 1, segments.size(), true));
    return segments;
}

std::vector<Segment> segment_document(const bloc::BlocDocument& doc,
                                      const ChangeSetting& setting) {
    switch (setting.segmentation) {
        case Segmentation::pauses: return segment_by_pauses(doc, setting.pause_threshold);
        case Segmentation::weeks: return segment_by_weeks(doc);
        case Segmentation::sets_of_k:
            return segment_by_sets_of_k(doc, setting.k, setting.count_pauses_in_k);
    }
    return {};
}

std::optional<std::vector<SegmentPair>> select_pairs(const std::vector<Segment>& segments,
                                                     Selection selection) {
    if (segments.size() < 2) return std::nullopt;

    std::vector<SegmentPair> pairs;
    pairs.reserve(segments.size() - 1);
    if (selection == Selection::adjacent) {
        for (std::size_t i = 0; i + 1 < segments.size(); ++i)
            pairs.push_back({segments[i], segments[i + 1]});
        return pairs;
    }

    // Cumulative: left side is the concatenation of all prior segments, with
    // no synthetic symbol at the junctions.
    Segment history = segments.front();
    for (std::size_t i = 1; i < segments.size(); ++i) {
        pairs.push_back({history, segments[i]});
        history.action_symbols += segments[i].action_symbols;
        history.content_symbols += segments[i].content_symbols;
        history.end_time = segments[i].end_time;
        history.n_events += segments[i].n_events;
        history.index = segments[i].index;
    }
    return pairs;
}

const char* to_string(Segmentation s) {
    switch (s) {
        case Segmentation::pauses: return "pauses";
        case Segmentation::weeks: return "weeks";
        case Segmentation::sets_of_k: return "sets-of-k";
    }
    return "?";
}

const char* to_string(Selection s) {
    return s == Selection::adjacent ? "adjacent" : "cumulative";
}

const char* to_string(DistanceMeasure d) {
    return d == DistanceMeasure::cosine ? "cosine" : "compression";
}

std::optional<Segmentation> parse_segmentation(const std::string& s) {
    if (s == "pauses") return Segmentation::pauses;
    if (s == "weeks") return Segmentation::weeks;
    if (s == "sets-of-k" || s == "sets_of_k") return Segmentation::sets_of_k;
    return std::nullopt;
}

std::optional<Selection> parse_selection(const std::string& s) {
    if (s == "adjacent") return Selection::adjacent;
    if (s == "cumulative") return Selection::cumulative;
    return std::nullopt;
}

std::optional<DistanceMeasure> parse_distance(const std::string& s) {
    if (s == "cosine") return DistanceMeasure::cosine;
    if (s == "compression") return DistanceMeasure::compression;
    return std::nullopt;
}

std::string setting_key(const ChangeSetting& setting) {
    std::string seg = setting.segmentation == Segmentation::sets_of_k
                          ? "sets-of-" + std::to_string(setting.k)
                          : to_string(setting.segmentation);
    return seg + "/" + to_string(setting.selection) + "/" + to_string(setting.distance);
}

}  // namespace bchange::segment
