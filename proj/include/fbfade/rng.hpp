#pragma once

#include <cstdint>
#include <random>

namespace fbfade {

struct RngSpec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// SplitMix64 finalizer; used to derive engine seeds and child streams.
std::uint64_t splitmix64(std::uint64_t x);

/// Spec for the i-th child of `parent`, e.g. one per Monte Carlo block or realization.
RngSpec child_stream(const RngSpec& parent, std::uint64_t index);

/// mt19937_64 seeded from (seed, stream). The engine and every transformation below are fully
/// specified, so a given RngSpec produces the same sequence on every platform.
class Rng {
public:
    explicit Rng(const RngSpec& spec);

    std::uint64_t next() { return engine_(); }
    /// Uniform on the open interval (0, 1), 53 random bits.
    double uniform();
    /// Standard normal (Marsaglia polar method).
    double normal();
    /// Gamma(shape, 1) by Marsaglia-Tsang; shapes below one use Gamma(shape+1) * U^(1/shape).
    double gamma(double shape);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace fbfade
