#ifndef ADIASIM_RNG_HPP
#define ADIASIM_RNG_HPP

/* Seedable, splittable randomness with a fixed, named algorithm stack so
   every sampled result is reproducible from (seed, stream index) alone:
   streams are derived by a splitmix64 finalizer over the pair, draws come
   from mt19937_64, gaussians from Box-Muller over 53-bit uniforms. */

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace adiasim::rng {

inline constexpr const char* kGeneratorName = "mt19937_64";
inline constexpr const char* kStreamDerivation = "splitmix64";
inline constexpr const char* kGaussianMethod = "box-muller";

// splitmix64 finalizer over a (seed, index) pair.
inline std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Independent generator for stream `index` under a master seed.
inline std::mt19937_64 derive_stream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(mix(seed, index));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Standard normal draws; keeps the spare Box-Muller sample.
class Gaussian {
public:
    explicit Gaussian(std::mt19937_64 gen) : gen_(std::move(gen)) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(gen_);  // (0, 1], keeps log finite
        const double u2 = uniform01(gen_);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace adiasim::rng

#endif  // ADIASIM_RNG_HPP
