#include "chaoscipher/attacks.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

namespace chaoscipher::attacks {

SearchSpace SearchSpace::chaotic_band(unsigned m, unsigned k, XprimeMode mode) {
    require_width(m, "word");
    require_width(k, "lambda");
    return SearchSpace{m, k, mode, chaotic_band_floor(k), std::uint64_t{1} << k};
}

u128 SearchSpace::size() const {
    const unsigned seed_bits = xprime_mode == XprimeMode::independent ? 2 * m : m;
    return u128{lambda_count()} << seed_bits;
}

double SearchSpace::log2_size() const {
    const unsigned seed_bits = xprime_mode == XprimeMode::independent ? 2 * m : m;
    return std::log2(static_cast<double>(lambda_count())) + seed_bits;
}

std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v != 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
        v /= 10;
    }
    return {s.rbegin(), s.rend()};
}

bool reproduces(CipherState state, std::span<const FxWord> known_plain, std::span<const FxWord> observed_cipher) {
    for (std::size_t i = 0; i < known_plain.size(); ++i) {
        if (encrypt_word(state, known_plain[i]) != observed_cipher[i]) return false;
    }
    return true;
}

AttackResult brute_force(std::span<const FxWord> known_plain, std::span<const FxWord> observed_cipher,
                         const SearchSpace& space, const BruteForceOptions& options) {
    if (known_plain.size() != observed_cipher.size()) throw InvalidArgument("known plaintext and ciphertext lengths differ");
    if (known_plain.size() < 4) throw InvalidArgument("known plaintext window must be at least 4 words");
    require_width(space.m, "word");
    require_width(space.k, "lambda");
    if (space.lambda_lo > space.lambda_hi || space.lambda_hi > (std::uint64_t{1} << space.k)) {
        throw InvalidArgument("lambda range outside [0, 2^k]");
    }
    for (std::size_t i = 0; i < known_plain.size(); ++i) {
        if (known_plain[i].width() != space.m || observed_cipher[i].width() != space.m) {
            throw InvalidArgument("window word width does not match the search space");
        }
    }
    if (space.size() > options.max_space) {
        std::ostringstream msg;
        msg << "search space of 2^" << space.log2_size() << " states (" << to_string(space.size())
            << ") exceeds the cap of 2^" << std::log2(static_cast<double>(options.max_space))
            << "; the full key space is 2^(2m+k) = 2^" << full_keyspace_log2(space.m, space.k, 1) << " per round";
        throw SpaceTooLarge(msg.str(), space.log2_size());
    }

    const auto start = std::chrono::steady_clock::now();
    const unsigned m = space.m;
    const std::uint64_t seeds = std::uint64_t{1} << m;
    const bool independent = space.xprime_mode == XprimeMode::independent;

    std::atomic<std::uint64_t> next_lambda{space.lambda_lo};
    std::mutex sink_mutex;
    AttackResult result;

    auto worker = [&] {
        std::vector<Candidate> local;
        u128 attempts = 0;
        for (;;) {
            const std::uint64_t lam = next_lambda.fetch_add(1);
            if (lam > space.lambda_hi) break;
            const Lambda lambda(lam, space.k);
            for (std::uint64_t x = 0; x < seeds; ++x) {
                const FxWord xw(x, m);
                if (independent) {
                    for (std::uint64_t xp = 0; xp < seeds; ++xp) {
                        ++attempts;
                        if (reproduces(CipherState{xw, FxWord(xp, m), lambda}, known_plain, observed_cipher)) {
                            local.push_back({lam, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(xp)});
                        }
                    }
                } else {
                    ++attempts;
                    const FxWord xp = x == 0 ? zero_repair_word(m) : derive_xprime(xw, lambda);
                    if (reproduces(CipherState{xw, xp, lambda}, known_plain, observed_cipher)) {
                        local.push_back({lam, static_cast<std::uint32_t>(x), xp.raw()});
                    }
                }
            }
        }
        std::lock_guard lock(sink_mutex);
        result.candidates.insert(result.candidates.end(), local.begin(), local.end());
        result.attempts += attempts;
    };

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, space.lambda_count()));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::sort(result.candidates.begin(), result.candidates.end());
    result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

ZeroScan zero_pn_scan(std::span<const FxWord> plain, std::span<const FxWord> cipher) {
    if (plain.size() != cipher.size()) throw InvalidArgument("plaintext and ciphertext lengths differ");
    ZeroScan scan;
    for (std::size_t i = 0; i < plain.size(); ++i) {
        if (plain[i] == cipher[i]) scan.positions.push_back(i);
    }
    if (!plain.empty()) {
        scan.rate = static_cast<double>(scan.positions.size()) / static_cast<double>(plain.size());
        scan.expected_rate = std::ldexp(1.0, -static_cast<int>(plain.front().width()));
    }
    return scan;
}

double DivergenceCurve::mean_beyond(std::size_t skip) const {
    if (fraction.size() <= skip) return 0.0;
    double sum = 0.0;
    for (std::size_t i = skip; i < fraction.size(); ++i) sum += fraction[i];
    return sum / static_cast<double>(fraction.size() - skip);
}

DivergenceCurve divergence(const CipherKey& key, const SessionSeed& session_a, const SessionSeed& session_b,
                           std::span<const FxWord> plaintext) {
    auto pa = cipher_init(key, session_a);
    auto pb = cipher_init(key, session_b);
    const auto ca = encrypt_stream(pa, plaintext);
    const auto cb = encrypt_stream(pb, plaintext);
    DivergenceCurve curve;
    curve.fraction.reserve(ca.size());
    for (std::size_t i = 0; i < ca.size(); ++i) {
        curve.fraction.push_back(static_cast<double>(std::popcount((ca[i] ^ cb[i]).raw())) / key.m);
    }
    return curve;
}

AvalancheSummary avalanche(const CipherKey& key, std::span<const FxWord> plaintext, std::size_t trials,
                           EntropySource& entropy, std::size_t skip) {
    if (trials == 0) throw InvalidArgument("avalanche needs at least one trial");
    AvalancheSummary summary;
    summary.mean_curve.assign(plaintext.size(), 0.0);
    for (std::size_t t = 0; t < trials; ++t) {
        const auto a = draw_session(key, entropy);
        auto b = a;
        const auto round = static_cast<std::size_t>(draw_below(entropy, key.rounds()));
        FxWord flipped;
        do {
            const auto bit = draw_below(entropy, key.m);
            flipped = b.words[round] ^ FxWord(std::uint64_t{1} << bit, key.m);
        } while (flipped.is_zero());
        b.words[round] = flipped;

        const auto curve = divergence(key, a, b, plaintext);
        for (std::size_t i = 0; i < curve.fraction.size(); ++i) summary.mean_curve[i] += curve.fraction[i];
        summary.trial_means.push_back(curve.mean_beyond(skip));
    }
    for (auto& v : summary.mean_curve) v /= static_cast<double>(trials);
    for (double v : summary.trial_means) summary.mean += v;
    summary.mean /= static_cast<double>(trials);
    return summary;
}

}  // namespace chaoscipher::attacks
