// Deterministic lossless codec used for normalized compression distance.
//
// Greedy LZ77 over a 32 KiB window encoded as a single RFC 1951 fixed-Huffman
// block. Every parameter is pinned, there is no heuristic tied to input size
// or build flags, so compressed output is byte-identical across platforms and
// runs. The stream is standard raw deflate and inflates with any RFC 1951
// decoder.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bchange::codec {

struct Params {
    std::string name = "lz77-greedy/fixed-huffman";
    std::size_t window_size = 32768;
    std::size_t min_match = 3;
    std::size_t max_match = 258;
    std::size_t max_chain = 64;
    int version = 1;
};

const Params& params();

// Raw deflate stream (single fixed-Huffman block, BFINAL=1).
std::vector<std::uint8_t> deflate(std::string_view input);

// Decodes a stream produced by deflate() (or any raw-deflate stream limited
// to stored/fixed blocks). Throws std::runtime_error on malformed input.
std::string inflate(const std::vector<std::uint8_t>& stream);

// Compressed length in bytes; the C(.) of the NCD formula.
std::size_t compressed_size(std::string_view input);

}  // namespace bchange::codec
