#include "chaoscipher/cipher.hpp"

namespace chaoscipher {

RoundPipeline::RoundPipeline(std::vector<CipherState> states) : states_(std::move(states)) {
    if (states_.empty()) throw InvalidArgument("pipeline needs at least one round");
    for (const auto& s : states_) {
        if (s.x.width() != states_.front().x.width() || s.xprime.width() != s.x.width()) {
            throw InvalidArgument("pipeline states must share one word width");
        }
    }
}

std::vector<FxWord> RoundPipeline::encrypt(std::span<const FxWord> words) {
    std::vector<FxWord> data(words.begin(), words.end());
    for (auto& s : states_) {
        for (auto& w : data) w = encrypt_word(s, w);
    }
    return data;
}

std::vector<FxWord> RoundPipeline::decrypt(std::span<const FxWord> words) {
    std::vector<FxWord> data(words.begin(), words.end());
    for (auto it = states_.rbegin(); it != states_.rend(); ++it) {
        for (auto& w : data) w = decrypt_word(*it, w);
    }
    return data;
}

RoundPipeline cipher_init(const CipherKey& key, const SessionSeed& session) {
    validate_key(key);
    if (session.words.size() != key.rounds()) {
        throw InvalidArgument("session has " + std::to_string(session.words.size()) + " words, key has " +
                              std::to_string(key.rounds()) + " rounds");
    }
    std::vector<CipherState> states;
    states.reserve(key.rounds());
    for (std::size_t r = 0; r < key.rounds(); ++r) {
        const FxWord x1 = session.words[r];
        if (x1.width() != key.m) throw InvalidArgument("session word width does not match key");
        if (x1.is_zero()) throw InvalidArgument("session word " + std::to_string(r) + " is zero");
        const Lambda lambda = key.lambda(r);
        const FxWord xprime = key.xprime_mode == XprimeMode::independent ? FxWord(key.xprime_raw[r], key.m)
                                                                         : derive_xprime(x1, lambda);
        states.push_back(CipherState{x1, xprime, lambda});
    }
    return RoundPipeline(std::move(states));
}

}  // namespace chaoscipher
