#pragma once

#include <cstdint>
#include <string_view>

namespace fatou {

/// Counter-based generator: output k of stream (seed, stream) is splitmix64 of a keyed
/// counter, so draws never depend on global state or thread scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    /// Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);
    /// Standard normal via Box-Muller.
    double normal();

    static std::uint64_t mix(std::uint64_t x);

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

} // namespace fatou
