// Behavioral distance between two symbol strings, in [0, 1]: cosine distance
// over unigram symbol frequencies, or normalized compression distance under
// the pinned codec.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>

#include "bchange/segment.hpp"

namespace bchange::distance {

// Sparse symbol -> count map; counts sum to the string length.
using SymbolFrequencyVector = std::map<char, std::uint64_t>;

SymbolFrequencyVector frequency_vector(std::string_view s);

enum class View { action, content };

struct DistanceValue {
    double value = 0.0;  // clamped to [0, 1]
    segment::DistanceMeasure measure = segment::DistanceMeasure::cosine;
    View view = View::action;
};

// 1 - cos(v_a, v_b) over unigram frequencies. nullopt when either string is
// empty (degenerate segment; the pair is skipped and counted upstream).
std::optional<double> cosine_distance(std::string_view a, std::string_view b);

// NCD(a,b) = (C(ab) - min(C(a), C(b))) / max(C(a), C(b)), concatenation in
// left-then-right order, clamped to [0, 1]. nullopt on empty input.
std::optional<double> compression_distance(std::string_view a, std::string_view b);

std::optional<double> measure_distance(segment::DistanceMeasure measure, std::string_view a,
                                       std::string_view b);

struct PairDistances {
    std::optional<DistanceValue> action;   // absent when a side was degenerate
    std::optional<DistanceValue> content;
};

// Applies the configured measure to the action and content views of the pair.
PairDistances pair_distances(const segment::SegmentPair& pair,
                             const segment::ChangeSetting& setting);

}  // namespace bchange::distance
