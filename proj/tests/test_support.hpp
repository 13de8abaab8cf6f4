#pragma once

#include <cstdint>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "chaoscipher/fxchaos.hpp"
#include "chaoscipher/keyspace.hpp"

namespace testing {

inline std::string fixture_path(const std::string& name) { return std::string(CHAOSCIPHER_FIXTURE_DIR) + "/" + name; }

inline std::vector<std::uint8_t> read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name), std::ios::binary);
    if (!in) throw std::runtime_error("missing fixture " + name);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string read_fixture_text(const std::string& name) {
    const auto bytes = read_fixture(name);
    return {bytes.begin(), bytes.end()};
}

inline std::vector<std::uint8_t> random_bytes(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng());
    return out;
}

inline std::vector<chaoscipher::FxWord> random_words(std::mt19937_64& rng, std::size_t n, unsigned m, bool nonzero = false) {
    std::vector<chaoscipher::FxWord> out;
    out.reserve(n);
    const std::uint64_t mask = chaoscipher::width_mask(m);
    while (out.size() < n) {
        const std::uint64_t v = rng() & mask;
        if (nonzero && v == 0) continue;
        out.emplace_back(v, m);
    }
    return out;
}

inline chaoscipher::CipherKey fixture_key() {
    return chaoscipher::parse_key(read_fixture_text("fixture.key"));
}

// Simple valid key without drawing from an entropy source.
inline chaoscipher::CipherKey make_key(unsigned m, unsigned k, std::vector<std::uint64_t> lambdas,
                                       std::uint32_t dummy_len = 32, std::uint32_t offset = 3,
                                       std::uint32_t stride = 1) {
    chaoscipher::CipherKey key;
    key.m = m;
    key.k = k;
    key.lambda_raw = std::move(lambdas);
    key.dummy_len = dummy_len;
    key.offset = offset;
    key.stride = stride;
    return key;
}

}  // namespace testing
