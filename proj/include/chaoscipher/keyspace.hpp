#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "chaoscipher/entropy.hpp"
#include "chaoscipher/fxchaos.hpp"

namespace chaoscipher {

enum class XprimeMode : std::uint8_t {
    derived = 0,      // x'_1 = logistic_step(x_1)
    independent = 1,  // x'_1 per round is key material
};

// Long-term secret. Per-message starting values live in SessionSeed.
struct CipherKey {
    unsigned m = 16;
    unsigned k = 16;
    XprimeMode xprime_mode = XprimeMode::derived;
    std::uint32_t dummy_len = 32;
    std::uint32_t offset = 0;
    std::uint32_t stride = 1;
    std::vector<std::uint64_t> lambda_raw;   // one per round
    std::vector<std::uint32_t> xprime_raw;   // one per round, independent mode only

    std::size_t rounds() const noexcept { return lambda_raw.size(); }
    Lambda lambda(std::size_t round) const { return Lambda(lambda_raw.at(round), k); }
    // Dummy-region slot holding the session word of `round`.
    std::uint32_t seed_slot(std::size_t round) const;

    friend bool operator==(const CipherKey&, const CipherKey&) = default;
};

struct SessionSeed {
    std::vector<FxWord> words;  // x_1 per round, all nonzero
};

struct KeygenParams {
    unsigned m = 16;
    unsigned k = 16;
    unsigned rounds = 1;
    std::uint32_t dummy_len = 32;
    XprimeMode xprime_mode = XprimeMode::derived;
};

// Throws InvalidArgument naming the first violated invariant.
void validate_key(const CipherKey& key);

CipherKey keygen(const KeygenParams& params, EntropySource& entropy);

// Word substituted whenever the free-running trajectory lands on 0:
// the top m bits of 0x5A5A5A5A.
inline FxWord zero_repair_word(unsigned m) { return FxWord(0x5A5A5A5Au >> (32 - m), m); }

// x'_1 from x_1; rejects x_1 == 0.
FxWord derive_xprime(FxWord x1, Lambda lambda);

// Draws one nonzero m-bit word per round.
SessionSeed draw_session(const CipherKey& key, EntropySource& entropy);

// Line-oriented `name=hex`, LF endings, fixed field order.
std::string serialize_key(const CipherKey& key);
CipherKey parse_key(std::string_view text);

}  // namespace chaoscipher
