#pragma once

#include <cstdint>
#include <limits>

namespace qtime {

// Counter-based generator: the i-th output of stream (seed, stream_id) is
// splitmix64_mix(key + i * golden_gamma) with key derived from both ids.
// Any sample can therefore be regenerated without replaying earlier ones,
// which keeps ensemble results independent of execution order.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream_id);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    // Standard normal via Box-Muller.
    double normal();

    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

} // namespace qtime
