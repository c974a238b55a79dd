#include "bchange/distance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bchange/codec.hpp"

namespace bchange::distance {

SymbolFrequencyVector frequency_vector(std::string_view s) {
    SymbolFrequencyVector v;
    for (char c : s) ++v[c];
    return v;
}

std::optional<double> cosine_distance(std::string_view a, std::string_view b) {
    if (a.empty() || b.empty()) return std::nullopt;

    const SymbolFrequencyVector va = frequency_vector(a);
    const SymbolFrequencyVector vb = frequency_vector(b);

    // Integer accumulation keeps the measure exactly symmetric and makes the
    // self-distance exactly zero.
    std::uint64_t dot = 0, na = 0, nb = 0;
    for (const auto& [sym, count] : va) {
        na += count * count;
        auto it = vb.find(sym);
        if (it != vb.end()) dot += count * it->second;
    }
    for (const auto& [sym, count] : vb) nb += count * count;

    const double cos = static_cast<double>(dot) /
                       std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
    return 1.0 - cos;
}

std::optional<double> compression_distance(std::string_view a, std::string_view b) {
    if (a.empty() || b.empty()) return std::nullopt;

    const double ca = static_cast<double>(codec::compressed_size(a));
    const double cb = static_cast<double>(codec::compressed_size(b));
    std::string ab;
    ab.reserve(a.size() + b.size());
    ab.append(a);
    ab.append(b);
    const double cab = static_cast<double>(codec::compressed_size(ab));

    const double ncd = (cab - std::min(ca, cb)) / std::max(ca, cb);
    return std::clamp(ncd, 0.0, 1.0);
}

std::optional<double> measure_distance(segment::DistanceMeasure measure, std::string_view a,
                                       std::string_view b) {
    return measure == segment::DistanceMeasure::cosine ? cosine_distance(a, b)
                                                       : compression_distance(a, b);
}

PairDistances pair_distances(const segment::SegmentPair& pair,
                             const segment::ChangeSetting& setting) {
    PairDistances out;
    if (auto d = measure_distance(setting.distance, pair.left.action_symbols,
                                  pair.right.action_symbols))
        out.action = DistanceValue{*d, setting.distance, View::action};
    if (auto d = measure_distance(setting.distance, pair.left.content_symbols,
                                  pair.right.content_symbols))
        out.content = DistanceValue{*d, setting.distance, View::content};
    return out;
}

}  // namespace bchange::distance
