#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace obc {

// SplitMix64 (Steele, Lea & Flood; Vigna's reference implementation).
// Chosen as the project-wide generator because its output sequence is fixed
// by the algorithm alone, so fold plans and synthetic corpora reproduce on
// any platform. Reference sequence for seed 42, first five outputs:
//   13679457532755275413, 2949826092126892291, 5139283748462763858,
//   6349198060258255764, 701532786141963250
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Rejection sampling keeps the draw unbiased.
    uint64_t below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t x = next();
            if (x >= threshold) return x % n;
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool coin(double p) { return unit() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    uint64_t state_;
};

}  // namespace obc
