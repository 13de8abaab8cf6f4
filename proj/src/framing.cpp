#include "chaoscipher/framing.hpp"

#include <algorithm>

#include "chaoscipher/cipher.hpp"

namespace chaoscipher {

namespace {

using Kind = ContainerError::Kind;

std::size_t words_for_bytes(std::size_t byte_len, unsigned m) { return (byte_len * 8 + m - 1) / m; }

std::size_t block_count(std::size_t payload_words) { return (payload_words + kBlockWords - 1) / kBlockWords; }

// Splits a decrypted body into payload words, checking each sentinel.
struct Deframed {
    std::vector<FxWord> payload;
    std::vector<bool> sentinel_ok;
};

Deframed deframe(std::span<const FxWord> body, unsigned m) {
    Deframed out;
    const FxWord sentinel = sentinel_word(m);
    std::size_t pos = 0;
    while (pos < body.size()) {
        const std::size_t take = std::min(kBlockWords, body.size() - pos - 1);
        out.payload.insert(out.payload.end(), body.begin() + pos, body.begin() + pos + take);
        pos += take;
        out.sentinel_ok.push_back(body[pos] == sentinel);
        ++pos;
    }
    return out;
}

std::vector<FxWord> decrypt_body(const CipherKey& key, const ContainerView& view) {
    auto pipeline = cipher_init(key, view.session);
    return decrypt_stream(pipeline, view.body);
}

}  // namespace

std::vector<FxWord> pack_words(std::span<const std::uint8_t> bytes, unsigned m) {
    require_width(m, "word");
    std::vector<FxWord> words;
    words.reserve(words_for_bytes(bytes.size(), m));
    std::uint64_t acc = 0;
    unsigned nbits = 0;
    for (auto b : bytes) {
        acc = acc << 8 | b;
        nbits += 8;
        while (nbits >= m) {
            nbits -= m;
            words.emplace_back((acc >> nbits) & width_mask(m), m);
            acc &= width_mask(nbits);
        }
    }
    if (nbits > 0) words.emplace_back((acc << (m - nbits)) & width_mask(m), m);
    return words;
}

std::vector<std::uint8_t> unpack_words(std::span<const FxWord> words, std::size_t byte_len) {
    if (words.empty()) {
        if (byte_len != 0) throw InvalidArgument("byte length inconsistent with word count");
        return {};
    }
    const unsigned m = words.front().width();
    if (words_for_bytes(byte_len, m) != words.size()) {
        throw InvalidArgument("byte length " + std::to_string(byte_len) + " inconsistent with " +
                              std::to_string(words.size()) + " words of " + std::to_string(m) + " bits");
    }
    std::vector<std::uint8_t> bytes;
    bytes.reserve(byte_len);
    std::uint64_t acc = 0;
    unsigned nbits = 0;
    for (const auto& w : words) {
        if (w.width() != m) throw InvalidArgument("mixed word widths");
        acc = acc << m | w.raw();
        nbits += m;
        while (nbits >= 8 && bytes.size() < byte_len) {
            nbits -= 8;
            bytes.push_back(static_cast<std::uint8_t>(acc >> nbits));
        }
        acc &= width_mask(nbits);
    }
    return bytes;
}

void serialize_words(std::span<const FxWord> words, std::vector<std::uint8_t>& out) {
    for (const auto& w : words) {
        const auto n = bytes_per_word(w.width());
        for (std::size_t i = n; i-- > 0;) out.push_back(static_cast<std::uint8_t>(w.raw() >> (8 * i)));
    }
}

std::vector<FxWord> deserialize_words(std::span<const std::uint8_t> bytes, unsigned m) {
    const auto n = bytes_per_word(m);
    if (bytes.size() % n != 0) {
        throw ContainerError(Kind::truncated, "word data is not a multiple of " + std::to_string(n) + " bytes");
    }
    std::vector<FxWord> words;
    words.reserve(bytes.size() / n);
    for (std::size_t i = 0; i < bytes.size(); i += n) {
        std::uint64_t v = 0;
        for (std::size_t j = 0; j < n; ++j) v = v << 8 | bytes[i + j];
        if (v > width_mask(m)) throw ContainerError(Kind::malformed, "word value exceeds " + std::to_string(m) + " bits");
        words.emplace_back(v, m);
    }
    return words;
}

std::vector<FxWord> frame_plaintext(std::span<const std::uint8_t> plaintext, unsigned m) {
    const std::uint64_t len = plaintext.size();
    if (len >= (std::uint64_t{1} << 61)) throw InvalidArgument("plaintext too large");
    std::vector<std::uint8_t> payload;
    payload.reserve(8 + plaintext.size());
    for (int i = 7; i >= 0; --i) payload.push_back(static_cast<std::uint8_t>(len >> (8 * i)));
    payload.insert(payload.end(), plaintext.begin(), plaintext.end());

    const auto words = pack_words(payload, m);
    const FxWord sentinel = sentinel_word(m);
    std::vector<FxWord> framed;
    framed.reserve(words.size() + block_count(words.size()));
    for (std::size_t i = 0; i < words.size(); ++i) {
        framed.push_back(words[i]);
        if ((i + 1) % kBlockWords == 0 || i + 1 == words.size()) framed.push_back(sentinel);
    }
    return framed;
}

std::vector<std::uint8_t> seal_with_session(const CipherKey& key, std::span<const std::uint8_t> plaintext,
                                            const SessionSeed& session, EntropySource& filler) {
    validate_key(key);
    auto pipeline = cipher_init(key, session);
    const auto body = encrypt_stream(pipeline, frame_plaintext(plaintext, key.m));

    std::vector<FxWord> dummy(key.dummy_len);
    std::vector<bool> is_seed(key.dummy_len, false);
    for (std::size_t r = 0; r < key.rounds(); ++r) {
        const auto slot = key.seed_slot(r);
        dummy[slot] = session.words[r];
        is_seed[slot] = true;
    }
    for (std::size_t i = 0; i < dummy.size(); ++i) {
        if (!is_seed[i]) dummy[i] = FxWord(draw_word(filler, key.m, false), key.m);
    }

    std::vector<std::uint8_t> out(kContainerMagic.begin(), kContainerMagic.end());
    out.reserve(4 + (dummy.size() + body.size()) * bytes_per_word(key.m));
    serialize_words(dummy, out);
    serialize_words(body, out);
    return out;
}

std::vector<std::uint8_t> seal(const CipherKey& key, std::span<const std::uint8_t> plaintext,
                               EntropySource& entropy) {
    validate_key(key);
    const auto session = draw_session(key, entropy);
    return seal_with_session(key, plaintext, session, entropy);
}

ContainerView split_container(const CipherKey& key, std::span<const std::uint8_t> container) {
    validate_key(key);
    if (container.size() < kContainerMagic.size() ||
        !std::equal(kContainerMagic.begin(), kContainerMagic.end(), container.begin())) {
        throw ContainerError(Kind::bad_magic, "bad magic, not a CHS1 container");
    }
    const auto bpw = bytes_per_word(key.m);
    const std::size_t dummy_bytes = std::size_t{key.dummy_len} * bpw;
    if (container.size() < kContainerMagic.size() + dummy_bytes) {
        throw ContainerError(Kind::truncated, "container truncated inside the dummy region");
    }
    ContainerView view;
    view.dummy = deserialize_words(container.subspan(kContainerMagic.size(), dummy_bytes), key.m);
    view.body = deserialize_words(container.subspan(kContainerMagic.size() + dummy_bytes), key.m);
    if (view.body.size() < 2 || view.body.size() % (kBlockWords + 1) == 1) {
        throw ContainerError(Kind::truncated, "container body truncated");
    }
    for (std::size_t r = 0; r < key.rounds(); ++r) {
        const FxWord seed = view.dummy[key.seed_slot(r)];
        // A zero seed can never have been sealed; treat it like a wrong key.
        if (seed.is_zero()) throw ContainerError(Kind::sentinel_mismatch, "sentinel mismatch: invalid session slot");
        view.session.words.push_back(seed);
    }
    return view;
}

std::vector<std::uint8_t> open(const CipherKey& key, std::span<const std::uint8_t> container) {
    const auto view = split_container(key, container);
    const auto framed = deframe(decrypt_body(key, view), key.m);
    for (std::size_t b = 0; b < framed.sentinel_ok.size(); ++b) {
        if (!framed.sentinel_ok[b]) {
            throw ContainerError(Kind::sentinel_mismatch, "sentinel mismatch in block " + std::to_string(b));
        }
    }
    const auto& payload = framed.payload;
    const std::size_t header_words = words_for_bytes(8, key.m);
    if (payload.size() < header_words) throw ContainerError(Kind::truncated, "payload shorter than length header");

    const auto header = unpack_words(std::span(payload).first(header_words), header_words * key.m / 8);
    std::uint64_t len = 0;
    for (int i = 0; i < 8; ++i) len = len << 8 | header[static_cast<std::size_t>(i)];
    const std::uint64_t available_bits = std::uint64_t{payload.size()} * key.m;
    if (len >= (std::uint64_t{1} << 61) || (8 + len) * 8 > available_bits) {
        throw ContainerError(Kind::length_overflow, "length header " + std::to_string(len) + " exceeds available payload");
    }
    if (words_for_bytes(8 + len, key.m) != payload.size()) {
        throw ContainerError(Kind::malformed, "payload has trailing words beyond the length header");
    }
    auto bytes = unpack_words(payload, 8 + len);
    return std::vector<std::uint8_t>(bytes.begin() + 8, bytes.end());
}

std::vector<bool> check_sentinels(const CipherKey& key, std::span<const std::uint8_t> container) {
    const auto view = split_container(key, container);
    return deframe(decrypt_body(key, view), key.m).sentinel_ok;
}

}  // namespace chaoscipher
