#pragma once

// Fixed-point logistic map x' = 4*lambda*x*(1-x).
//
// States are m-bit unsigned fractions raw/2^m in [0, 1). The control
// parameter carries k+1 bits so lambda = 1 is exact. One step is a single
// floor of an exact 128-bit product, so orbits are bit-identical on every
// platform.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chaoscipher/errors.hpp"

namespace chaoscipher {

inline constexpr unsigned kMinWidth = 4;
inline constexpr unsigned kMaxWidth = 32;

inline void require_width(unsigned width, const char* what) {
    if (width < kMinWidth || width > kMaxWidth) {
        throw InvalidArgument(std::string(what) + " width " + std::to_string(width) +
                              " outside [4, 32]");
    }
}

inline constexpr std::uint64_t width_mask(unsigned m) { return (std::uint64_t{1} << m) - 1; }

class FxWord {
public:
    FxWord() = default;

    FxWord(std::uint64_t raw, unsigned width) : raw_(static_cast<std::uint32_t>(raw)), width_(width) {
        require_width(width, "word");
        if (raw > width_mask(width)) {
            throw InvalidArgument("word value " + std::to_string(raw) + " does not fit in " +
                                  std::to_string(width) + " bits");
        }
    }

    std::uint32_t raw() const noexcept { return raw_; }
    unsigned width() const noexcept { return width_; }
    double value() const noexcept { return static_cast<double>(raw_) / static_cast<double>(std::uint64_t{1} << width_); }
    bool is_zero() const noexcept { return raw_ == 0; }

    friend FxWord operator^(FxWord a, FxWord b) {
        if (a.width_ != b.width_) throw InvalidArgument("xor of words with different widths");
        FxWord r;
        r.raw_ = a.raw_ ^ b.raw_;
        r.width_ = a.width_;
        return r;
    }

    friend bool operator==(const FxWord&, const FxWord&) = default;

private:
    std::uint32_t raw_ = 0;
    unsigned width_ = 16;
};

class Lambda {
public:
    Lambda() = default;

    Lambda(std::uint64_t raw, unsigned width) : raw_(raw), width_(width) {
        require_width(width, "lambda");
        if (raw > (std::uint64_t{1} << width)) {
            throw InvalidArgument("lambda out of range: " + std::to_string(raw) + " > 2^" +
                                  std::to_string(width));
        }
    }

    static Lambda one(unsigned width) { return Lambda(std::uint64_t{1} << width, width); }

    std::uint64_t raw() const noexcept { return raw_; }
    unsigned width() const noexcept { return width_; }
    double value() const noexcept { return static_cast<double>(raw_) / static_cast<double>(std::uint64_t{1} << width_); }

    friend bool operator==(const Lambda&, const Lambda&) = default;

private:
    std::uint64_t raw_ = std::uint64_t{1} << 16;
    unsigned width_ = 16;
};

// Smallest lambda raw value admitted as key material: ceil(0.99 * 2^k).
inline constexpr std::uint64_t chaotic_band_floor(unsigned k) {
    return ((std::uint64_t{99} << k) + 99) / 100;
}

// floor(numerator * 2^m / denominator).
FxWord fx_from_rational(std::uint64_t numerator, std::uint64_t denominator, unsigned m);

// floor(lambda.raw * x.raw * (2^m - x.raw) / 2^(k+m-2)), clamped to 2^m - 1.
inline FxWord logistic_step(FxWord x, Lambda lambda) {
    using u128 = unsigned __int128;
    const unsigned m = x.width();
    const unsigned k = lambda.width();
    const std::uint64_t xr = x.raw();
    const u128 product = u128{lambda.raw()} * xr * ((std::uint64_t{1} << m) - xr);
    const u128 stepped = product >> (k + m - 2);
    const std::uint64_t max = width_mask(m);
    return FxWord(stepped > max ? max : static_cast<std::uint64_t>(stepped), m);
}

// [x1, ..., x_count], each the step of the previous one.
std::vector<FxWord> logistic_orbit(FxWord x0, Lambda lambda, std::size_t count);

}  // namespace chaoscipher
