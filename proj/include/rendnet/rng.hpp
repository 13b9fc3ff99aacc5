#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace rendnet {

// mt19937_64 with hand-rolled distributions. The standard distributions are
// implementation-defined, which would make seeds non-portable across
// compilers; the raw engine output is pinned by the standard.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n) by rejection; exact and portable.
    uint64_t below(uint64_t n) {
        if (n == 0) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do { v = engine_(); } while (v >= limit);
        return v % n;
    }

    // Box-Muller; consumes two draws per pair, caches the second.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * 3.14159265358979323846 * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// FNV-1a, used for config digests and document-derived seeds.
inline uint64_t fnv1a64(std::string_view bytes, uint64_t seed = 14695981039346656037ULL) {
    uint64_t h = seed;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace rendnet
