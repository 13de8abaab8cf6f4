#include "chaoscipher/fxchaos.hpp"

namespace chaoscipher {

FxWord fx_from_rational(std::uint64_t numerator, std::uint64_t denominator, unsigned m) {
    require_width(m, "word");
    if (denominator == 0) throw InvalidArgument("denominator must be positive");
    if (numerator >= denominator) throw InvalidArgument("numerator must be below denominator");
    using u128 = unsigned __int128;
    const u128 scaled = (u128{numerator} << m) / denominator;
    return FxWord(static_cast<std::uint64_t>(scaled), m);
}

std::vector<FxWord> logistic_orbit(FxWord x0, Lambda lambda, std::size_t count) {
    if (count == 0) throw InvalidArgument("orbit length must be positive");
    std::vector<FxWord> orbit;
    orbit.reserve(count);
    FxWord x = x0;
    for (std::size_t i = 0; i < count; ++i) {
        x = logistic_step(x, lambda);
        orbit.push_back(x);
    }
    return orbit;
}

}  // namespace chaoscipher
