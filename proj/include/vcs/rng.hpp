#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Repo-wide pseudo-random source. Every stochastic operation in this project
// takes an explicit 64-bit seed and draws from the generator below, so results
// replay exactly for a given seed. The generator is xoshiro256++ seeded
// through splitmix64; normals come from the Marsaglia polar method.

namespace vcs {

constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer; also the repo-wide integer mixer.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed-derivation hash used wherever a sub-stream is addressed by index
// (grid cells, Monte-Carlo sample banks). Not cryptographic.
inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a + kGolden64 + mix64(b + kGolden64));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) {
      sm += kGolden64;
      w = mix64(sm);
    }
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = kGolden64;
  }

  std::uint64_t next_u64() {
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

  // Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe to pass to log().
  double uniform_pos() { return 1.0 - uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

  // Knuth's product method; adequate for the moderate rates used here.
  long poisson(double rate) {
    if (rate <= 0.0) throw std::invalid_argument("poisson rate must be positive");
    if (rate > 500.0) throw std::invalid_argument("poisson rate too large for product sampler");
    const double limit = std::exp(-rate);
    long k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform_pos();
    } while (p > limit);
    return k - 1;
  }

  // Marsaglia-Tsang for shape >= 1, power boost below.
  double gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma shape must be positive");
    if (shape < 1.0) {
      const double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double chi_squared(double dof) { return 2.0 * gamma(dof / 2.0); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace vcs
