#include "chaoscipher/keyspace.hpp"

#include <array>
#include <charconv>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

namespace chaoscipher {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw InvalidArgument(message);
}

std::vector<std::uint32_t> eligible_strides(std::uint32_t dummy_len, std::size_t rounds) {
    std::vector<std::uint32_t> out;
    if (dummy_len == 0 || rounds == 0) return out;
    const std::uint64_t max_stride = (std::uint64_t{dummy_len} - 1) / rounds;
    for (std::uint64_t s = 1; s <= max_stride; ++s) {
        if (std::gcd(s, std::uint64_t{dummy_len}) == 1) out.push_back(static_cast<std::uint32_t>(s));
    }
    return out;
}

std::string hex_of(std::uint64_t v) {
    std::array<char, 20> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, 16);
    return std::string(buf.data(), end);
}

}  // namespace

std::uint32_t CipherKey::seed_slot(std::size_t round) const {
    return static_cast<std::uint32_t>((std::uint64_t{offset} + std::uint64_t{round} * stride) % dummy_len);
}

void validate_key(const CipherKey& key) {
    require(key.m >= kMinWidth && key.m <= kMaxWidth, "m out of range");
    require(key.k >= kMinWidth && key.k <= kMaxWidth, "k out of range");
    require(key.rounds() >= 1, "n out of range: at least one round required");
    const std::uint64_t lo = chaotic_band_floor(key.k);
    const std::uint64_t hi = std::uint64_t{1} << key.k;
    for (auto raw : key.lambda_raw) require(raw >= lo && raw <= hi, "lambda out of range");
    if (key.xprime_mode == XprimeMode::independent) {
        require(key.xprime_raw.size() == key.rounds(), "xprime count must equal round count");
        for (auto raw : key.xprime_raw) {
            require(raw != 0 && raw <= width_mask(key.m), "xprime out of range");
        }
    } else {
        require(key.xprime_raw.empty(), "xprime given for derived mode");
    }
    require(key.dummy_len >= 1, "D out of range");
    require(key.stride >= 1, "s out of range");
    require(key.offset < key.dummy_len, "o out of range");
    require(std::gcd(key.stride, key.dummy_len) == 1, "s must be coprime with D");
    require(std::uint64_t{key.dummy_len} >= std::uint64_t{key.rounds()} * key.stride + 1,
            "D too small: need D >= n*s + 1");
}

CipherKey keygen(const KeygenParams& params, EntropySource& entropy) {
    require(params.m >= kMinWidth && params.m <= kMaxWidth, "m out of range");
    require(params.k >= kMinWidth && params.k <= kMaxWidth, "k out of range");
    require(params.rounds >= 1, "n out of range: at least one round required");
    const auto strides = eligible_strides(params.dummy_len, params.rounds);
    require(!strides.empty(), "D too small: " + std::to_string(params.rounds) +
                                  " seeds cannot fit a dummy region of " +
                                  std::to_string(params.dummy_len) + " words");

    CipherKey key;
    key.m = params.m;
    key.k = params.k;
    key.xprime_mode = params.xprime_mode;
    key.dummy_len = params.dummy_len;

    const std::uint64_t lo = chaotic_band_floor(params.k);
    const std::uint64_t band = (std::uint64_t{1} << params.k) - lo + 1;
    for (unsigned r = 0; r < params.rounds; ++r) key.lambda_raw.push_back(lo + draw_below(entropy, band));
    if (params.xprime_mode == XprimeMode::independent) {
        for (unsigned r = 0; r < params.rounds; ++r) key.xprime_raw.push_back(draw_word(entropy, params.m, true));
    }
    key.offset = static_cast<std::uint32_t>(draw_below(entropy, params.dummy_len));
    key.stride = strides[draw_below(entropy, strides.size())];
    validate_key(key);
    return key;
}

FxWord derive_xprime(FxWord x1, Lambda lambda) {
    if (x1.is_zero()) throw InvalidArgument("session word must be nonzero");
    const FxWord next = logistic_step(x1, lambda);
    return next.is_zero() ? zero_repair_word(x1.width()) : next;
}

SessionSeed draw_session(const CipherKey& key, EntropySource& entropy) {
    SessionSeed seed;
    for (std::size_t r = 0; r < key.rounds(); ++r) seed.words.emplace_back(draw_word(entropy, key.m, true), key.m);
    return seed;
}

std::string serialize_key(const CipherKey& key) {
    validate_key(key);
    std::ostringstream out;
    out << "m=" << hex_of(key.m) << '\n'
        << "k=" << hex_of(key.k) << '\n'
        << "n=" << hex_of(key.rounds()) << '\n'
        << "xprime_mode=" << hex_of(static_cast<unsigned>(key.xprime_mode)) << '\n'
        << "D=" << hex_of(key.dummy_len) << '\n'
        << "o=" << hex_of(key.offset) << '\n'
        << "s=" << hex_of(key.stride) << '\n';
    for (std::size_t r = 0; r < key.rounds(); ++r) out << "lambda[" << r << "]=" << hex_of(key.lambda_raw[r]) << '\n';
    for (std::size_t r = 0; r < key.xprime_raw.size(); ++r) {
        out << "xprime[" << r << "]=" << hex_of(key.xprime_raw[r]) << '\n';
    }
    return out.str();
}

namespace {

using Kind = KeyParseError::Kind;

struct Field {
    std::uint64_t value;
    std::size_t line;
};

// Splits "lambda[3]" into ("lambda", 3); plain names get no index.
bool split_indexed(std::string_view name, std::string_view& base, std::optional<std::size_t>& index) {
    const auto open = name.find('[');
    if (open == std::string_view::npos) {
        base = name;
        index.reset();
        return true;
    }
    if (name.back() != ']' || open + 2 > name.size() - 1) return false;
    std::size_t idx = 0;
    const auto digits = name.substr(open + 1, name.size() - open - 2);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return false;
    base = name.substr(0, open);
    index = idx;
    return true;
}

}  // namespace

CipherKey parse_key(std::string_view text) {
    std::map<std::string, Field> scalars;
    std::map<std::string, std::map<std::size_t, Field>> arrays;
    static const std::array<std::string_view, 7> scalar_names{"m", "k", "n", "xprime_mode", "D", "o", "s"};

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos || eq == 0 || eq + 1 == line.size()) {
            throw KeyParseError(Kind::malformed_line, line_no, "malformed line, expected name=hex");
        }
        const auto name = line.substr(0, eq);
        const auto hex = line.substr(eq + 1);
        if (hex.size() > 16) throw KeyParseError(Kind::out_of_range, line_no, "value too long");
        std::uint64_t value = 0;
        auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
        if (ec != std::errc{} || ptr != hex.data() + hex.size()) {
            throw KeyParseError(Kind::malformed_line, line_no, "malformed hex value '" + std::string(hex) + "'");
        }

        std::string_view base;
        std::optional<std::size_t> index;
        if (!split_indexed(name, base, index)) {
            throw KeyParseError(Kind::malformed_line, line_no, "malformed field name '" + std::string(name) + "'");
        }
        if (index) {
            if (base != "lambda" && base != "xprime") {
                throw KeyParseError(Kind::unknown_field, line_no, "unknown field '" + std::string(name) + "'");
            }
            auto& slot = arrays[std::string(base)];
            if (!slot.emplace(*index, Field{value, line_no}).second) {
                throw KeyParseError(Kind::duplicate_field, line_no, "duplicate field '" + std::string(name) + "'");
            }
        } else {
            bool known = false;
            for (auto n : scalar_names) known |= n == base;
            if (!known) throw KeyParseError(Kind::unknown_field, line_no, "unknown field '" + std::string(name) + "'");
            if (!scalars.emplace(std::string(base), Field{value, line_no}).second) {
                throw KeyParseError(Kind::duplicate_field, line_no, "duplicate field '" + std::string(name) + "'");
            }
        }
    }

    for (auto n : scalar_names) {
        if (!scalars.count(std::string(n))) {
            throw KeyParseError(Kind::missing_field, 0, "missing field '" + std::string(n) + "'");
        }
    }
    auto scalar = [&](const char* name, std::uint64_t lo, std::uint64_t hi) {
        const auto& f = scalars.at(name);
        if (f.value < lo || f.value > hi) {
            throw KeyParseError(Kind::out_of_range, f.line, std::string(name) + " out of range");
        }
        return f.value;
    };

    CipherKey key;
    key.m = static_cast<unsigned>(scalar("m", kMinWidth, kMaxWidth));
    key.k = static_cast<unsigned>(scalar("k", kMinWidth, kMaxWidth));
    const auto rounds = static_cast<std::size_t>(scalar("n", 1, 0xFFFF));
    key.xprime_mode = static_cast<XprimeMode>(scalar("xprime_mode", 0, 1));
    key.dummy_len = static_cast<std::uint32_t>(scalar("D", 1, 0xFFFFFFFF));
    key.offset = static_cast<std::uint32_t>(scalar("o", 0, key.dummy_len - 1));
    key.stride = static_cast<std::uint32_t>(scalar("s", 1, 0xFFFFFFFF));
    if (std::gcd(key.stride, key.dummy_len) != 1 ||
        std::uint64_t{key.dummy_len} < std::uint64_t{rounds} * key.stride + 1) {
        throw KeyParseError(Kind::out_of_range, scalars.at("s").line,
                            "s out of range: must be coprime with D and satisfy D >= n*s + 1");
    }

    auto read_array = [&](const std::string& name, bool expected, auto&& check) {
        const auto it = arrays.find(name);
        if (!expected) {
            if (it != arrays.end()) {
                throw KeyParseError(Kind::unknown_field, it->second.begin()->second.line,
                                    "field '" + name + "' not allowed in derived mode");
            }
            return;
        }
        for (std::size_t r = 0; r < rounds; ++r) {
            if (it == arrays.end() || !it->second.count(r)) {
                throw KeyParseError(Kind::missing_field, 0, "missing field '" + name + "[" + std::to_string(r) + "]'");
            }
        }
        for (const auto& [idx, f] : it->second) {
            if (idx >= rounds) {
                throw KeyParseError(Kind::unknown_field, f.line,
                                    "field '" + name + "[" + std::to_string(idx) + "]' beyond round count");
            }
            check(f);
        }
    };

    const std::uint64_t lam_lo = chaotic_band_floor(key.k);
    const std::uint64_t lam_hi = std::uint64_t{1} << key.k;
    read_array("lambda", true, [&](const Field& f) {
        if (f.value < lam_lo || f.value > lam_hi) throw KeyParseError(Kind::out_of_range, f.line, "lambda out of range");
        key.lambda_raw.push_back(f.value);
    });
    read_array("xprime", key.xprime_mode == XprimeMode::independent, [&](const Field& f) {
        if (f.value == 0 || f.value > width_mask(key.m)) throw KeyParseError(Kind::out_of_range, f.line, "xprime out of range");
        key.xprime_raw.push_back(static_cast<std::uint32_t>(f.value));
    });

    validate_key(key);
    return key;
}

}  // namespace chaoscipher
