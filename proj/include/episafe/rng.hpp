#pragma once

#include <cstdint>
#include <vector>

namespace episafe {

/// Counter-based pseudo-random generator (splitmix64 over a keyed counter).
///
/// Output i of a stream is a pure function of (key, i), so independent
/// substreams can be handed to parallel workers and the aggregate result is
/// identical for any worker count. Substreams are derived by hashing the
/// parent key with caller-chosen indices.
class CounterRng {
public:
    explicit CounterRng(uint64_t key) : key_(key) {}

    uint64_t next() { return mix(key_ + (++counter_) * kGamma); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). Rejection sampling, unbiased.
    uint64_t uniform_int(uint64_t n) {
        if (n == 0) return 0;
        const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
        uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    /// Child stream keyed by (a, b); independent of this stream's counter.
    CounterRng derive(uint64_t a, uint64_t b = 0) const {
        return CounterRng(mix(mix(key_ ^ mix(a + 0x632BE59BD9B4E019ull)) + mix(b + 0x9E6C63D0876A9A62ull)));
    }

    uint64_t key() const { return key_; }

    /// In-place Fisher-Yates shuffle; sequence depends only on the stream state.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ull;

    static uint64_t mix(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace episafe
