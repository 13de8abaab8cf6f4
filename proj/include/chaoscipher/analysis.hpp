#pragma once

// Measurement battery for ciphertext quality: slot entropy profile, byte
// flatness, order-0 Huffman complexity, phase-space occupancy and the
// single-bit combiner table.

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chaoscipher/fxchaos.hpp"

namespace chaoscipher::analysis {

inline constexpr std::size_t kDefaultSlots = 30000;

// Value v of an m-bit word falls in slot floor(v * slots / 2^m).
struct SlotHistogram {
    std::size_t slots = 0;
    unsigned width = 16;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    static SlotHistogram build(std::span<const FxWord> words, std::size_t slots);
    static std::size_t slot_of(std::uint32_t raw, unsigned width, std::size_t slots) {
        return static_cast<std::size_t>((std::uint64_t{raw} * slots) >> width);
    }
};

// -sum p_j log2 p_j over occupied slots.
double shannon_entropy(const SlotHistogram& hist);
double shannon_entropy(std::span<const std::uint64_t> counts);

struct EntropyProfile {
    std::vector<double> cumulative;  // running entropy in ascending slot order
    double total_bits = 0.0;
    double r_squared = 0.0;          // least-squares line through (i, cumulative[i])
};

EntropyProfile entropy_profile(std::span<const FxWord> words, std::size_t slots = kDefaultSlots);

// Coefficient of determination of the best straight line through
// (i, values[i]); 0 when values are constant.
double linear_r_squared(std::span<const double> values);

struct Flatness {
    std::array<std::uint64_t, 256> counts{};
    std::uint64_t min_count = 0;
    std::uint64_t max_count = 0;
    double ratio = 0.0;           // max/min, +inf when some byte never occurs
    bool missing_values = false;  // true when ratio is infinite
    double max_deviation = 0.0;   // max |count - mean| / mean
    double chi_square = 0.0;      // informational only, 255 d.o.f.
};

Flatness byte_flatness(std::span<const std::uint8_t> bytes);

// Canonical order-0 Huffman code over bytes. Tree built by repeatedly merging
// the two lightest nodes; equal weights are ordered by the smallest symbol in
// the subtree. A one-symbol alphabet gets a 1-bit code.
class HuffmanCode {
public:
    static HuffmanCode from_frequencies(const std::array<std::uint64_t, 256>& freq);
    static HuffmanCode from_lengths(const std::array<std::uint8_t, 256>& lengths);

    const std::array<std::uint8_t, 256>& lengths() const noexcept { return lengths_; }
    std::uint64_t code(std::uint8_t symbol) const { return codes_[symbol]; }

    // Sum over used symbols of 2^-length; at most 1 for a prefix code.
    long double kraft_sum() const;

    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> bytes, std::uint64_t& bit_count) const;
    std::vector<std::uint8_t> decode(std::span<const std::uint8_t> bits, std::size_t symbol_count) const;

private:
    void assign_canonical();

    std::array<std::uint8_t, 256> lengths_{};
    std::array<std::uint64_t, 256> codes_{};
};

struct HuffmanResult {
    double ratio = 0.0;            // original / (coded + table)
    std::uint64_t coded_bytes = 0;
    std::uint64_t table_bytes = 256;
    bool round_trip_ok = false;
};

HuffmanResult huffman_complexity(std::span<const std::uint8_t> bytes);
inline double huffman_ratio(std::span<const std::uint8_t> bytes) { return huffman_complexity(bytes).ratio; }

// Fraction of g*g cells hit by consecutive pairs (w_i, w_{i+1}).
double phase_occupancy(std::span<const FxWord> words, std::size_t grid);

struct CombinerRow {
    int x, xprime, p, y, c, y_equals_c;
};

struct CombinerTable {
    std::array<CombinerRow, 8> rows{};
    std::array<double, 6> balance{};  // percentage of ones per column
};

CombinerTable combiner_table();
std::string format_combiner_table(const CombinerTable& table);

// Pass/fail thresholds applied by the report.
struct Thresholds {
    double min_r_squared = 0.99;
    double max_byte_deviation = 0.10;
    double max_huffman_ratio = 1.00;
    double min_occupancy = 0.50;
};

struct AnalysisReport {
    EntropyProfile entropy;
    Flatness flatness;
    HuffmanResult huffman;
    double occupancy = 0.0;
    std::size_t grid = 64;
    bool entropy_pass = false;
    bool flatness_pass = false;
    bool complexity_pass = false;
    bool occupancy_pass = false;
};

// bytes are also read as m-bit big-endian words for the word-level checks.
// Requires at least 256 bytes.
AnalysisReport analyze(std::span<const std::uint8_t> bytes, unsigned m, std::size_t slots = kDefaultSlots,
                       std::size_t grid = 64, const Thresholds& thresholds = {});

void write_profile_csv(std::ostream& out, const EntropyProfile& profile);
void write_verdicts(std::ostream& out, const AnalysisReport& report, const Thresholds& thresholds = {});

}  // namespace chaoscipher::analysis
