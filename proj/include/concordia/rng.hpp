#pragma once

#include <cstdint>
#include <random>

namespace concordia {

// Seeded generator with a platform-independent stream: the mt19937_64
// sequence is fixed by the standard and the [0,1) mapping uses the top 53
// bits explicitly, so the same seed gives the same doubles everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double unif01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace concordia
