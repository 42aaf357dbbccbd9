#pragma once

#include <cstdint>
#include <stdexcept>

namespace thinkrank {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stateless 64-bit finalizer (the splitmix64 output function).
inline std::uint64_t mix64(std::uint64_t x) {
    std::uint64_t s = x;
    return splitmix64(s);
}

/// Splittable random stream: stream `i` under a seed yields the same draws no
/// matter which thread consumes it, so parallel sampling stays byte-identical
/// to the serial path.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(seed + 0x632be59bd9b4e019ULL) ^ mix64(stream * 0xd1b54a32d192ed03ULL + 1)) {}

    std::uint64_t next_u64() { return splitmix64(state_); }

    /// Uniform in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Index drawn proportionally to non-negative weights (need not sum to 1).
    int categorical(const double* w, int n) {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += w[i];
        if (!(total > 0.0)) throw std::invalid_argument("categorical: weights sum to zero");
        double u = next_unit() * total;
        int last_positive = -1;
        for (int i = 0; i < n; ++i) {
            if (w[i] <= 0.0) continue;
            last_positive = i;
            u -= w[i];
            if (u < 0.0) return i;
        }
        return last_positive;  // guard against rounding at u ~ total
    }

private:
    std::uint64_t state_;
};

}  // namespace thinkrank
