#include "bchange/codec.hpp"

#include <array>
#include <cstring>
#include <stdexcept>

namespace bchange::codec {

namespace {

constexpr std::size_t kWindowSize = 32768;
constexpr std::size_t kMinMatch = 3;
constexpr std::size_t kMaxMatch = 258;
constexpr std::size_t kMaxChain = 64;
constexpr std::size_t kHashBits = 15;
constexpr std::size_t kHashSize = 1u << kHashBits;

// Length code table: code 257..285, base length and extra bits.
struct LengthCode {
    int code;
    int extra_bits;
    int base;
};
constexpr std::array<LengthCode, 29> kLengthCodes = {{
    {257, 0, 3},   {258, 0, 4},   {259, 0, 5},   {260, 0, 6},   {261, 0, 7},
    {262, 0, 8},   {263, 0, 9},   {264, 0, 10},  {265, 1, 11},  {266, 1, 13},
    {267, 1, 15},  {268, 1, 17},  {269, 2, 19},  {270, 2, 23},  {271, 2, 27},
    {272, 2, 31},  {273, 3, 35},  {274, 3, 43},  {275, 3, 51},  {276, 3, 59},
    {277, 4, 67},  {278, 4, 83},  {279, 4, 99},  {280, 4, 115}, {281, 5, 131},
    {282, 5, 163}, {283, 5, 195}, {284, 5, 227}, {285, 0, 258},
}};

struct DistCode {
    int code;
    int extra_bits;
    int base;
};
constexpr std::array<DistCode, 30> kDistCodes = {{
    {0, 0, 1},      {1, 0, 2},      {2, 0, 3},     {3, 0, 4},     {4, 1, 5},
    {5, 1, 7},      {6, 2, 9},      {7, 2, 13},    {8, 3, 17},    {9, 3, 25},
    {10, 4, 33},    {11, 4, 49},    {12, 5, 65},   {13, 5, 97},   {14, 6, 129},
    {15, 6, 193},   {16, 7, 257},   {17, 7, 385},  {18, 8, 513},  {19, 8, 769},
    {20, 9, 1025},  {21, 9, 1537},  {22, 10, 2049}, {23, 10, 3073}, {24, 11, 4097},
    {25, 11, 6145}, {26, 12, 8193}, {27, 12, 12289}, {28, 13, 16385}, {29, 13, 24577},
}};

const LengthCode& length_code_for(std::size_t len) {
    // Codes are ordered by base; linear scan from the back.
    for (std::size_t i = kLengthCodes.size(); i-- > 0;) {
        if (static_cast<int>(len) >= kLengthCodes[i].base) return kLengthCodes[i];
    }
    throw std::logic_error("match length below minimum");
}

const DistCode& dist_code_for(std::size_t dist) {
    for (std::size_t i = kDistCodes.size(); i-- > 0;) {
        if (static_cast<int>(dist) >= kDistCodes[i].base) return kDistCodes[i];
    }
    throw std::logic_error("distance below minimum");
}

// LSB-first bit writer; Huffman codes are fed MSB-first per RFC 1951.
class BitWriter {
public:
    void write_bits(std::uint32_t value, int count) {
        bits_ |= static_cast<std::uint64_t>(value) << nbits_;
        nbits_ += count;
        while (nbits_ >= 8) {
            out_.push_back(static_cast<std::uint8_t>(bits_ & 0xff));
            bits_ >>= 8;
            nbits_ -= 8;
        }
    }

    void write_huffman(std::uint32_t code, int count) {
        std::uint32_t rev = 0;
        for (int i = 0; i < count; ++i) rev |= ((code >> i) & 1u) << (count - 1 - i);
        write_bits(rev, count);
    }

    std::vector<std::uint8_t> finish() {
        if (nbits_ > 0) {
            out_.push_back(static_cast<std::uint8_t>(bits_ & 0xff));
            bits_ = 0;
            nbits_ = 0;
        }
        return std::move(out_);
    }

private:
    std::vector<std::uint8_t> out_;
    std::uint64_t bits_ = 0;
    int nbits_ = 0;
};

void write_fixed_symbol(BitWriter& bw, int sym) {
    if (sym < 144) {
        bw.write_huffman(0x30 + sym, 8);
    } else if (sym < 256) {
        bw.write_huffman(0x190 + (sym - 144), 9);
    } else if (sym < 280) {
        bw.write_huffman(sym - 256, 7);
    } else {
        bw.write_huffman(0xc0 + (sym - 280), 8);
    }
}

std::uint32_t hash3(const std::uint8_t* p) {
    std::uint32_t v = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                      (static_cast<std::uint32_t>(p[2]) << 16);
    return (v * 2654435761u) >> (32 - kHashBits);
}

// LSB-first bit reader for inflate.
class BitReader {
public:
    explicit BitReader(const std::vector<std::uint8_t>& data) : data_(data) {}

    std::uint32_t read_bits(int count) {
        while (nbits_ < count) {
            if (pos_ >= data_.size()) throw std::runtime_error("deflate stream truncated");
            bits_ |= static_cast<std::uint64_t>(data_[pos_++]) << nbits_;
            nbits_ += 8;
        }
        std::uint32_t v = static_cast<std::uint32_t>(bits_ & ((1ull << count) - 1));
        bits_ >>= count;
        nbits_ -= count;
        return v;
    }

    void align_to_byte() {
        int drop = nbits_ % 8;
        bits_ >>= drop;
        nbits_ -= drop;
    }

    std::uint8_t read_byte() {
        return static_cast<std::uint8_t>(read_bits(8));
    }

private:
    const std::vector<std::uint8_t>& data_;
    std::size_t pos_ = 0;
    std::uint64_t bits_ = 0;
    int nbits_ = 0;
};

// Fixed-tree literal/length decode: read bits MSB-first until a code matches.
int read_fixed_symbol(BitReader& br) {
    std::uint32_t code = 0;
    int len = 0;
    auto take = [&](int n) {
        for (int i = 0; i < n; ++i) code = (code << 1) | br.read_bits(1);
        len += n;
    };
    take(7);
    if (code <= 0x17) return 256 + static_cast<int>(code);  // 7-bit: 256..279
    take(1);
    if (code >= 0x30 && code <= 0xbf) return static_cast<int>(code) - 0x30;   // 8-bit: 0..143
    if (code >= 0xc0 && code <= 0xc7) return 280 + static_cast<int>(code) - 0xc0;
    take(1);
    if (code >= 0x190 && code <= 0x1ff) return 144 + static_cast<int>(code) - 0x190;
    throw std::runtime_error("invalid fixed-huffman code");
}

}  // namespace

const Params& params() {
    static const Params p;
    return p;
}

std::vector<std::uint8_t> deflate(std::string_view input) {
    const auto* data = reinterpret_cast<const std::uint8_t*>(input.data());
    const std::size_t n = input.size();

    BitWriter bw;
    bw.write_bits(1, 1);  // BFINAL
    bw.write_bits(1, 2);  // BTYPE = 01, fixed Huffman

    std::vector<std::int64_t> head(kHashSize, -1);
    std::vector<std::int64_t> prev(n, -1);

    std::size_t i = 0;
    while (i < n) {
        std::size_t best_len = 0;
        std::size_t best_dist = 0;

        if (i + kMinMatch <= n) {
            std::uint32_t h = hash3(data + i);
            std::int64_t cand = head[h];
            std::size_t chain = 0;
            const std::size_t limit = std::min(kMaxMatch, n - i);
            while (cand >= 0 && chain < kMaxChain &&
                   i - static_cast<std::size_t>(cand) <= kWindowSize) {
                const std::uint8_t* p = data + cand;
                const std::uint8_t* q = data + i;
                std::size_t len = 0;
                while (len < limit && p[len] == q[len]) ++len;
                if (len > best_len) {
                    best_len = len;
                    best_dist = i - static_cast<std::size_t>(cand);
                    if (len == limit) break;
                }
                cand = prev[cand];
                ++chain;
            }
        }

        if (best_len >= kMinMatch) {
            const LengthCode& lc = length_code_for(best_len);
            write_fixed_symbol(bw, lc.code);
            if (lc.extra_bits > 0)
                bw.write_bits(static_cast<std::uint32_t>(best_len - lc.base), lc.extra_bits);
            const DistCode& dc = dist_code_for(best_dist);
            bw.write_huffman(static_cast<std::uint32_t>(dc.code), 5);
            if (dc.extra_bits > 0)
                bw.write_bits(static_cast<std::uint32_t>(best_dist - dc.base), dc.extra_bits);
            // Index every position covered by the match.
            const std::size_t end = i + best_len;
            while (i < end) {
                if (i + kMinMatch <= n) {
                    std::uint32_t h = hash3(data + i);
                    prev[i] = head[h];
                    head[h] = static_cast<std::int64_t>(i);
                }
                ++i;
            }
        } else {
            write_fixed_symbol(bw, data[i]);
            if (i + kMinMatch <= n) {
                std::uint32_t h = hash3(data + i);
                prev[i] = head[h];
                head[h] = static_cast<std::int64_t>(i);
            }
            ++i;
        }
    }

    write_fixed_symbol(bw, 256);  // end of block
    return bw.finish();
}

std::string inflate(const std::vector<std::uint8_t>& stream) {
    BitReader br(stream);
    std::string out;
    for (;;) {
        std::uint32_t bfinal = br.read_bits(1);
        std::uint32_t btype = br.read_bits(2);
        if (btype == 0) {
            br.align_to_byte();
            std::uint32_t len = br.read_byte();
            len |= static_cast<std::uint32_t>(br.read_byte()) << 8;
            std::uint32_t nlen = br.read_byte();
            nlen |= static_cast<std::uint32_t>(br.read_byte()) << 8;
            if ((len ^ 0xffffu) != nlen) throw std::runtime_error("stored block length mismatch");
            for (std::uint32_t k = 0; k < len; ++k) out.push_back(static_cast<char>(br.read_byte()));
        } else if (btype == 1) {
            for (;;) {
                int sym = read_fixed_symbol(br);
                if (sym < 256) {
                    out.push_back(static_cast<char>(sym));
                } else if (sym == 256) {
                    break;
                } else {
                    if (sym > 285) throw std::runtime_error("invalid length code");
                    const LengthCode& lc = kLengthCodes[sym - 257];
                    std::size_t len = static_cast<std::size_t>(lc.base);
                    if (lc.extra_bits > 0) len += br.read_bits(lc.extra_bits);
                    std::uint32_t dcode = 0;
                    for (int b = 0; b < 5; ++b) dcode = (dcode << 1) | br.read_bits(1);
                    if (dcode > 29) throw std::runtime_error("invalid distance code");
                    const DistCode& dc = kDistCodes[dcode];
                    std::size_t dist = static_cast<std::size_t>(dc.base);
                    if (dc.extra_bits > 0) dist += br.read_bits(dc.extra_bits);
                    if (dist > out.size()) throw std::runtime_error("distance beyond output");
                    std::size_t from = out.size() - dist;
                    for (std::size_t k = 0; k < len; ++k) out.push_back(out[from + k]);
                }
            }
        } else {
            throw std::runtime_error("unsupported block type");
        }
        if (bfinal) break;
    }
    return out;
}

std::size_t compressed_size(std::string_view input) {
    return deflate(input).size();
}

}  // namespace bchange::codec
