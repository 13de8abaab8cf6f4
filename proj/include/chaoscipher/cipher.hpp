#pragma once

// Chaos-mixing stream cipher state machine.
//
// Per word:   x_next  = F(x)           x'_next = F(x')
//             P       = x ^ x'         C       = P ^ y
//             x       = x_next ^ C     x'      = x'_next (0 repaired)
// where F is the fixed-point logistic step. Encryption and decryption
// perform the identical state update driven by C.

#include <span>
#include <vector>

#include "chaoscipher/fxchaos.hpp"
#include "chaoscipher/keyspace.hpp"

namespace chaoscipher {

struct CipherState {
    FxWord x;       // perturbed by ciphertext feedback
    FxWord xprime;  // free-running, never 0
    Lambda lambda;

    // P_n for the next word to be processed.
    FxWord difference() const { return x ^ xprime; }

    friend bool operator==(const CipherState&, const CipherState&) = default;
};

namespace detail {

inline void advance(CipherState& s, FxWord c) {
    const FxWord x_next = logistic_step(s.x, s.lambda);
    const FxWord xp_next = logistic_step(s.xprime, s.lambda);
    s.x = x_next ^ c;
    s.xprime = xp_next.is_zero() ? zero_repair_word(xp_next.width()) : xp_next;
}

}  // namespace detail

inline FxWord encrypt_word(CipherState& state, FxWord y) {
    const FxWord c = state.difference() ^ y;
    detail::advance(state, c);
    return c;
}

inline FxWord decrypt_word(CipherState& state, FxWord c) {
    const FxWord y = state.difference() ^ c;
    detail::advance(state, c);
    return y;
}

// One CipherState per round; round r's ciphertext is round r+1's plaintext.
class RoundPipeline {
public:
    explicit RoundPipeline(std::vector<CipherState> states);

    std::size_t rounds() const noexcept { return states_.size(); }
    const CipherState& state(std::size_t round) const { return states_.at(round); }
    CipherState& state(std::size_t round) { return states_.at(round); }

    std::vector<FxWord> encrypt(std::span<const FxWord> words);
    std::vector<FxWord> decrypt(std::span<const FxWord> words);

private:
    std::vector<CipherState> states_;
};

// x = session word r, x' = derived or key-supplied per round.
RoundPipeline cipher_init(const CipherKey& key, const SessionSeed& session);

inline std::vector<FxWord> encrypt_stream(RoundPipeline& pipeline, std::span<const FxWord> words) {
    return pipeline.encrypt(words);
}

inline std::vector<FxWord> decrypt_stream(RoundPipeline& pipeline, std::span<const FxWord> words) {
    return pipeline.decrypt(words);
}

}  // namespace chaoscipher
