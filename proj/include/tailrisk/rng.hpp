#pragma once

#include <cstdint>
#include <random>

namespace tailrisk {

// SplitMix64 finalizer; used to derive independent stream seeds from a base
// seed and a stream index (per chunk, per trial block, per grid cell).
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return mix_seed(mix_seed(base) ^ mix_seed(stream + 0x632be59bd9b4e019ULL));
}

/// Seeded pseudo-random source shared by every sampler.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. All variates are derived here from raw 64-bit words instead of
/// the std:: distribution objects (whose algorithms are implementation
/// defined), so a seed reproduces the same stream on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1]: 53-bit grid shifted up by one ulp step, never 0.
  double uniform_pos() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1), both ends excluded.
  double uniform_open() {
    for (;;) {
      const double u = uniform();
      if (u > 0.0) return u;
    }
  }

  // Uniform integer in [0, n) by rejection, n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    for (;;) {
      const std::uint64_t r = engine_();
      if (r < limit) return r % n;
    }
  }

  bool bernoulli(double p) { return uniform() < p; }

  double exponential(double rate);

  // Standard normal via Box-Muller; one variate per call, the twin is dropped
  // so the stream position depends only on the call count.
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace tailrisk
