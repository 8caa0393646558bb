#pragma once

#include <cstdint>
#include <random>

namespace pmeq {

// Seedable deterministic uniform source. Independent replications use
// substreams derived as seed + stream index so they never share state.
// The uniform mapping is explicit (not generate_canonical) to keep the
// draw sequence identical across standard library implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(seed + stream), draws_(0) {}

    // Uniform variate strictly inside (0, 1).
    double uniform01() {
        ++draws_;
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform01()) / rate; }

    std::uint64_t draws() const { return draws_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t draws_;
};

}  // namespace pmeq
