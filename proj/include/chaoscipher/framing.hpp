#pragma once

// Container layout (every word big-endian in ceil(m/8) bytes):
//
//   "CHS1" | dummy region, D words | body words
//
// The dummy region is filler noise with the session word of round r at slot
// (o + r*s) mod D. The body is the encryption of
//
//   pack(u64be(len) || plaintext)
//
// with one sentinel word (0x00A5) inserted after every 256 payload words and
// after the trailing partial block. D, m, n and the slots come from the key.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "chaoscipher/entropy.hpp"
#include "chaoscipher/fxchaos.hpp"
#include "chaoscipher/keyspace.hpp"

namespace chaoscipher {

inline constexpr std::string_view kContainerMagic = "CHS1";
inline constexpr std::size_t kBlockWords = 256;
inline constexpr std::uint32_t kSentinelRaw = 0x00A5;

inline std::size_t bytes_per_word(unsigned m) { return (m + 7) / 8; }
inline FxWord sentinel_word(unsigned m) { return FxWord(kSentinelRaw & width_mask(m), m); }

// Bit-level big-endian packing, m bits per word, final word zero-padded.
std::vector<FxWord> pack_words(std::span<const std::uint8_t> bytes, unsigned m);
// Inverse of pack_words; byte_len must be consistent with the word count.
std::vector<std::uint8_t> unpack_words(std::span<const FxWord> words, std::size_t byte_len);

// Word serialization, ceil(m/8) big-endian bytes per word.
void serialize_words(std::span<const FxWord> words, std::vector<std::uint8_t>& out);
std::vector<FxWord> deserialize_words(std::span<const std::uint8_t> bytes, unsigned m);

// Plaintext word stream fed to the cipher: header, payload, sentinels.
std::vector<FxWord> frame_plaintext(std::span<const std::uint8_t> plaintext, unsigned m);

std::vector<std::uint8_t> seal(const CipherKey& key, std::span<const std::uint8_t> plaintext,
                               EntropySource& entropy);

// Same as seal with caller-chosen session words and dummy filler source.
std::vector<std::uint8_t> seal_with_session(const CipherKey& key, std::span<const std::uint8_t> plaintext,
                                            const SessionSeed& session, EntropySource& filler);

std::vector<std::uint8_t> open(const CipherKey& key, std::span<const std::uint8_t> container);

// Pieces of a container located with the key's geometry.
struct ContainerView {
    SessionSeed session;
    std::vector<FxWord> dummy;
    std::vector<FxWord> body;
};

ContainerView split_container(const CipherKey& key, std::span<const std::uint8_t> container);

// Decrypts the body and reports, per block, whether its sentinel decrypted
// to 0x00A5. Unlike open, keeps going past the first mismatch.
std::vector<bool> check_sentinels(const CipherKey& key, std::span<const std::uint8_t> container);

}  // namespace chaoscipher
