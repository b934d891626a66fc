#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace swlab::rng {

// Pinned generator identity, recorded in run metadata. Child streams are
// derived from the 64-bit master seed with the splitmix64 finalizer (an
// avalanche-quality 64-bit mixer) applied to (master, stream-tag).
inline constexpr std::string_view kGeneratorName = "xoshiro256++";
inline constexpr std::string_view kSeedMixerName = "splitmix64";

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Avalanche mix of (master, tag) -> child seed. Two finalizer rounds so that
// adjacent tags land far apart even for adjacent masters.
constexpr std::uint64_t mix_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t s = master ^ (0xD2B74407B1CE6E93ULL * (tag + 0x632BE59BD9B4E019ULL));
  std::uint64_t a = splitmix64_next(s);
  return splitmix64_next(s) ^ (a << 1);
}

// Stream tags for the fixed sub-streams of an experiment.
enum StreamTag : std::uint64_t {
  kTagNoise = 1,
  kTagSpike = 2,
  kTagStart = 3,
  kTagChain = 4,
  kTagOuter = 5,   // per-step Gaussian of the z-field recursion
  kTagPower = 6,   // power-iteration start vector
  kTagTrialBase = 0x100,  // trial k uses kTagTrialBase + k
};

class Xoshiro256pp {
 public:
  explicit constexpr Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64_next(sm);
  }

  constexpr std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on (0, 1] from the top 53 bits (never 0, so log() is safe).
  double uniform01() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

  // Uniform on (-1, 1].
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  // Unbiased integer in [0, n) by masked rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t mask = mask_for(n);
    for (;;) {
      const std::uint64_t v = next() & mask;
      if (v < n) return v;
    }
  }

  // Standard normal via Box-Muller (pair cached; part of the stream state).
  double gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  static constexpr std::uint64_t mask_for(std::uint64_t n) {
    std::uint64_t m = n - 1;
    m |= m >> 1;
    m |= m >> 2;
    m |= m >> 4;
    m |= m >> 8;
    m |= m >> 16;
    m |= m >> 32;
    return m;
  }

  std::uint64_t s_[4]{};
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace swlab::rng
