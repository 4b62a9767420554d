#include "qtime/rng.hpp"

#include <cmath>
#include <numbers>

namespace qtime {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_id)
    : key_(splitmix64_mix(seed ^ splitmix64_mix(stream_id + kGoldenGamma))) {}

CounterRng::result_type CounterRng::operator()() {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kGoldenGamma);
}

double CounterRng::uniform() {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

} // namespace qtime
