// Partitioning of BLOC documents into segments and selection of segment
// pairs for distance measurement.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bchange/bloc.hpp"

namespace bchange::segment {

struct Segment {
    std::size_t index = 0;       // ordinal within the document
    std::string action_symbols;  // pauses inside the segment retained
    std::string content_symbols; // concatenated content words, no parentheses
    std::int64_t start_time = 0;
    std::int64_t end_time = 0;
    std::size_t n_events = 0;
};

// left may be the concatenation of several segments (cumulative selection);
// its index is the ordinal of the last segment that contributed to it.
struct SegmentPair {
    Segment left;
    Segment right;
};

enum class Segmentation { pauses, weeks, sets_of_k };
enum class Selection { adjacent, cumulative };
enum class DistanceMeasure { cosine, compression };

struct ChangeSetting {
    Segmentation segmentation = Segmentation::sets_of_k;
    int k = 4;                            // sets_of_k only, >= 2
    std::int64_t pause_threshold = 3600;  // pauses only, seconds
    Selection selection = Selection::cumulative;
    DistanceMeasure distance = DistanceMeasure::compression;
    bool count_pauses_in_k = false;       // default counts action symbols only
};

// One segment per activity session; a boundary is placed at every inter-event
// gap longer than the threshold and the boundary pause symbol is dropped.
std::vector<Segment> segment_by_pauses(const bloc::BlocDocument& doc, std::int64_t threshold);

// One segment per ISO-8601 calendar week (UTC) with activity; pause symbols
// spanning a week boundary are dropped.
std::vector<Segment> segment_by_weeks(const bloc::BlocDocument& doc);

// Boundaries after every k-th action symbol; pause symbols ride with their
// preceding action and a trailing remainder shorter than k is retained.
std::vector<Segment> segment_by_sets_of_k(const bloc::BlocDocument& doc, int k,
                                          bool count_pauses = false);

std::vector<Segment> segment_document(const bloc::BlocDocument& doc, const ChangeSetting& setting);

// nullopt when fewer than two segments exist (account excluded downstream).
std::optional<std::vector<SegmentPair>> select_pairs(const std::vector<Segment>& segments,
                                                     Selection selection);

const char* to_string(Segmentation s);
const char* to_string(Selection s);
const char* to_string(DistanceMeasure d);
std::optional<Segmentation> parse_segmentation(const std::string& s);
std::optional<Selection> parse_selection(const std::string& s);
std::optional<DistanceMeasure> parse_distance(const std::string& s);

// Human-readable setting key, e.g. "sets-of-4/cumulative/compression".
std::string setting_key(const ChangeSetting& setting);

}  // namespace bchange::segment
