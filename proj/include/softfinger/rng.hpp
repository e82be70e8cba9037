#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace softfinger {

// Deterministic random source. Every stochastic step in the library draws
// through this wrapper so results depend only on (seed, stream), not on
// implementation-defined standard-library distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : gen_(make_engine(seed, stream)) {}

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double gaussian(double sigma) { return sigma * gaussian(); }

    std::uint64_t next_u64() { return gen_(); }

    /// Unbiased draw in [0, n).
    std::size_t bounded(std::size_t n) {
        const std::uint64_t all = ~std::uint64_t{0};
        const std::uint64_t limit = all - all % n;
        std::uint64_t r = gen_();
        while (r >= limit) r = gen_();
        return static_cast<std::size_t>(r % n);
    }

    // Fisher-Yates; std::shuffle leaves the draw pattern up to the
    // implementation, this does not.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[bounded(i)]);
        }
    }

private:
    static std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed),
                          static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
        return std::mt19937_64(seq);
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace softfinger
