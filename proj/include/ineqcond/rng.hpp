#pragma once

#include <cmath>
#include <cstdint>

namespace ineqcond {

/// Counter-based generator built on the splitmix64 mixing function.
/// The value at counter i is a pure function of (key, i), so streams can be
/// split by index and results are independent of evaluation order and
/// thread scheduling.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : key_(mix(seed ^ 0x9e3779b97f4a7c15ull)) {}

    /// Derive an independent substream. stream(i) != stream(j) mix into
    /// unrelated keys for i != j.
    CounterRng stream(std::uint64_t stream_id) const {
        CounterRng r(0);
        r.key_ = mix(key_ + 0xbf58476d1ce4e5b9ull * (stream_id + 1));
        r.counter_ = 0;
        return r;
    }

    std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * (++counter_)); }

    /// Uniform in [0, 1), 53 bits of mantissa.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; consumes two counters per draw.
    double next_gaussian() {
        double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ineqcond
