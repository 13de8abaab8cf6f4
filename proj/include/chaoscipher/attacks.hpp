#pragma once

// Desk-scale attacks: exhaustive known-plaintext key search, P_n = 0
// scanning, and trajectory divergence under session perturbation.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "chaoscipher/cipher.hpp"
#include "chaoscipher/entropy.hpp"
#include "chaoscipher/keyspace.hpp"

namespace chaoscipher::attacks {

using u128 = unsigned __int128;

inline constexpr u128 kDefaultMaxSpace = u128{1} << 26;

struct SearchSpace {
    unsigned m = 8;
    unsigned k = 8;
    XprimeMode xprime_mode = XprimeMode::derived;
    std::uint64_t lambda_lo = 0;  // inclusive
    std::uint64_t lambda_hi = 0;  // inclusive

    // Whole chaotic band [ceil(0.99*2^k), 2^k].
    static SearchSpace chaotic_band(unsigned m, unsigned k, XprimeMode mode);

    std::uint64_t lambda_count() const { return lambda_hi - lambda_lo + 1; }
    // |lambda| * 2^m (derived) or |lambda| * 2^(2m) (independent).
    u128 size() const;
    double log2_size() const;
};

// Exponent of the textbook count 2^(n(2m+k)) for n rounds.
inline unsigned full_keyspace_log2(unsigned m, unsigned k, unsigned rounds) { return rounds * (2 * m + k); }

struct Candidate {
    std::uint64_t lambda_raw;
    std::uint32_t x;       // state at the start of the known window
    std::uint32_t xprime;

    friend bool operator==(const Candidate&, const Candidate&) = default;
    friend auto operator<=>(const Candidate&, const Candidate&) = default;
};

struct AttackResult {
    std::vector<Candidate> candidates;  // sorted by lambda, then x, then x'
    u128 attempts = 0;
    double elapsed_seconds = 0.0;
};

struct BruteForceOptions {
    u128 max_space = kDefaultMaxSpace;
    unsigned threads = 0;  // 0 = hardware concurrency
};

// Enumerates every (lambda, x[, x']) in the space and keeps those that map
// known_plain to observed_cipher word for word. In derived mode the window
// must start at the first word of the stream; the x = 0 state is tried with
// the repaired x'.
AttackResult brute_force(std::span<const FxWord> known_plain, std::span<const FxWord> observed_cipher,
                         const SearchSpace& space, const BruteForceOptions& options = {});

// True when the state reproduces the window exactly.
bool reproduces(CipherState state, std::span<const FxWord> known_plain, std::span<const FxWord> observed_cipher);

struct ZeroScan {
    std::vector<std::size_t> positions;  // plain[i] == cipher[i]
    double rate = 0.0;
    double expected_rate = 0.0;          // 2^-m
};

ZeroScan zero_pn_scan(std::span<const FxWord> plain, std::span<const FxWord> cipher);

struct DivergenceCurve {
    std::vector<double> fraction;  // popcount(Ca ^ Cb) / m per word
    double mean_beyond(std::size_t skip) const;
};

inline constexpr std::size_t kDivergenceSkip = 16;

DivergenceCurve divergence(const CipherKey& key, const SessionSeed& session_a, const SessionSeed& session_b,
                           std::span<const FxWord> plaintext);

struct AvalancheSummary {
    std::vector<double> mean_curve;  // averaged over trials
    std::vector<double> trial_means; // mean_beyond(skip) per trial
    double mean = 0.0;
};

// Each trial draws a session, flips one random bit of one random round word,
// and measures divergence on the same plaintext.
AvalancheSummary avalanche(const CipherKey& key, std::span<const FxWord> plaintext, std::size_t trials,
                           EntropySource& entropy, std::size_t skip = kDivergenceSkip);

std::string to_string(u128 v);

}  // namespace chaoscipher::attacks
