#include "chaoscipher/entropy.hpp"

#include <algorithm>
#include <bit>

#include "chaoscipher/errors.hpp"

namespace chaoscipher {

namespace {

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

std::vector<std::uint8_t> parse_hex(std::string_view hex) {
    std::vector<std::uint8_t> out;
    int pending = -1;
    for (char c : hex) {
        if (c == ' ' || c == '\n' || c == '\r' || c == '\t') continue;
        const int d = hex_digit(c);
        if (d < 0) throw InvalidArgument(std::string("invalid hex digit '") + c + "'");
        if (pending < 0) {
            pending = d;
        } else {
            out.push_back(static_cast<std::uint8_t>(pending << 4 | d));
            pending = -1;
        }
    }
    if (pending >= 0) throw InvalidArgument("odd number of hex digits");
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

FixedEntropy FixedEntropy::from_hex(std::string_view hex) { return FixedEntropy(parse_hex(hex)); }

void FixedEntropy::fill(std::span<std::uint8_t> out) {
    if (out.size() > remaining()) {
        throw InsufficientEntropy("fixed entropy exhausted: needed " + std::to_string(out.size()) +
                                  " more bytes, " + std::to_string(remaining()) + " left");
    }
    std::copy_n(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_), out.size(), out.begin());
    pos_ += out.size();
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
        if (buffered_ == 0) {
            buffer_ = engine_();
            buffered_ = 8;
        }
        --buffered_;
        b = static_cast<std::uint8_t>(buffer_ >> (8 * buffered_));
    }
}

std::uint64_t draw_below(EntropySource& source, std::uint64_t bound) {
    if (bound == 0) throw InvalidArgument("draw bound must be positive");
    if (bound == 1) return 0;
    const unsigned bits = static_cast<unsigned>(std::bit_width(bound - 1));
    const unsigned nbytes = (bits + 7) / 8;
    const std::uint64_t mask = bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    std::uint8_t buf[8];
    for (;;) {
        source.fill(std::span(buf, nbytes));
        std::uint64_t v = 0;
        for (unsigned i = 0; i < nbytes; ++i) v = v << 8 | buf[i];
        v &= mask;
        if (v < bound) return v;
    }
}

std::uint32_t draw_word(EntropySource& source, unsigned m, bool nonzero) {
    for (;;) {
        const auto v = static_cast<std::uint32_t>(draw_below(source, std::uint64_t{1} << m));
        if (!nonzero || v != 0) return v;
    }
}

}  // namespace chaoscipher
