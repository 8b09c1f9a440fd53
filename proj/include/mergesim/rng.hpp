#pragma once
#include <cstdint>

namespace mergesim {

// splitmix64. Deterministic across platforms, cheap to reseed per episode,
// statistically fine for the sampling done here (assignments, jitter, He init).
class Rng {
  public:
    Rng() = default;
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // [0, 1)
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // [0, n); n > 0. Modulo bias is irrelevant at the n used here.
    std::uint32_t uniform_index(std::uint32_t n) {
        return static_cast<std::uint32_t>(next_u64() % n);
    }

    std::uint64_t state() const { return state_; }

  private:
    std::uint64_t state_ = 0;
};

} // namespace mergesim
