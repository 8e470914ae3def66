#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qnc {

// Uniform double in [0, 1) built from the top 53 bits of the generator
// output. std::uniform_real_distribution is not pinned by the standard,
// this mapping is, so seeded runs reproduce across toolchains.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

// splitmix64 step, used to derive independent child seeds from one
// user-facing seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Marsaglia polar method would need rejection; plain Box-Muller is fully
// deterministic per draw pair.
class GaussianSource {
  public:
    explicit GaussianSource(std::mt19937_64& rng) : rng_(rng) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_unit(rng_);
        while (u1 <= 0.0) u1 = uniform_unit(rng_);
        const double u2 = uniform_unit(rng_);
        const double mag = std::sqrt(-2.0 * std::log(u1));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        have_spare_ = true;
        return mag * std::cos(two_pi * u2);
    }

  private:
    std::mt19937_64& rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace qnc
