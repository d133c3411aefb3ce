#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace greylift {

// Seeded deterministic stream. (seed, stream_id) fully determines the
// sequence; one owner at a time.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream_id),
                          static_cast<std::uint32_t>(stream_id >> 32), 0x67726579u};
        engine_.seed(seq);
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double normal() { return normal_(engine_); }

    // Exp(1), never 0 or infinite.
    double exponential() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return -std::log(u);
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline RngStream make_stream(std::uint64_t seed, std::uint64_t stream_id) {
    return RngStream(seed, stream_id);
}

// Stream ids used by the generators. Path p draws its Gaussian noise from
// path_stream(seed, p) and its subordinator from subordinator_stream(seed, p),
// so a grey ensemble divided by sqrt(Y) reproduces the Gaussian ensemble of
// the same seed exactly.
inline RngStream path_stream(std::uint64_t seed, std::uint64_t path) { return make_stream(seed, path); }

inline RngStream subordinator_stream(std::uint64_t seed, std::uint64_t path) {
    return make_stream(seed, path | (std::uint64_t{1} << 62));
}

}  // namespace greylift
