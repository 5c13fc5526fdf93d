#ifndef CCDF_RNG_HPP
#define CCDF_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ccdf {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of replication `rep` under master seed `seed`:
/// splitmix64(splitmix64(seed) ^ (rep + 1)). Streams do not depend on how
/// replications are scheduled across threads.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t rep) noexcept {
  return splitmix64(splitmix64(seed) ^ (rep + 1));
}

/// mt19937_64 with portable variate generation: uniforms use the top 53 bits
/// and normals use Box-Muller, so draws do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_{0.0};
  bool has_spare_{false};
};

}  // namespace ccdf

#endif  // CCDF_RNG_HPP
