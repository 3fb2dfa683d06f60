#pragma once

#include <cstdint>
#include <random>

namespace wcsed::detail {

// Deterministic uniform draws for the corpus generator. The raw engine
// output sequence is pinned by the standard; the distribution adapters
// are not, so the mapping to doubles is done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // [0, 1)
    double unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // inclusive bounds
    int uniform_int(int lo, int hi) {
        const int span = hi - lo + 1;
        int v = lo + static_cast<int>(unit() * span);
        return v > hi ? hi : v;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace wcsed::detail
