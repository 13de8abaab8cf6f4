#pragma once

// Byte sources feeding key generation and sealing. All draws are made
// from these, so a fixed source makes every output reproducible.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace chaoscipher {

class EntropySource {
public:
    virtual ~EntropySource() = default;
    virtual void fill(std::span<std::uint8_t> out) = 0;
};

// Yields exactly the given bytes, then throws InsufficientEntropy.
class FixedEntropy final : public EntropySource {
public:
    explicit FixedEntropy(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

    static FixedEntropy from_hex(std::string_view hex);

    void fill(std::span<std::uint8_t> out) override;
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

// Unbounded deterministic stream from std::mt19937_64, whose output sequence
// is fixed by the C++ standard. Each engine word is emitted big-endian.
class SeededEntropy final : public EntropySource {
public:
    explicit SeededEntropy(std::uint64_t seed) : engine_(seed) {}

    void fill(std::span<std::uint8_t> out) override;

private:
    std::mt19937_64 engine_;
    std::uint64_t buffer_ = 0;
    unsigned buffered_ = 0;
};

// Uniform integer in [0, bound) by masked rejection sampling on whole bytes.
std::uint64_t draw_below(EntropySource& source, std::uint64_t bound);

// Uniform m-bit value; optionally rejects zero.
std::uint32_t draw_word(EntropySource& source, unsigned m, bool nonzero);

std::vector<std::uint8_t> parse_hex(std::string_view hex);
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace chaoscipher
