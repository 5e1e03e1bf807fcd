#pragma once

#include <cstdint>
#include <random>

namespace qwork {

// splitmix64 finalizer (Vigna). Used to decorrelate (seed, index) pairs
// before feeding the per-sample engine.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent stream for one Monte Carlo sample. Streams depend only on
// (seed, index), never on thread placement, so any worker count yields the
// same sample sequence.
inline std::mt19937_64 sample_stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s0 = mix64(seed);
  std::uint64_t s1 = mix64(s0 ^ mix64(index));
  return std::mt19937_64(s1);
}

// Marsaglia polar method. std::normal_distribution is implementation
// defined, which would tie output files to one standard library; this keeps
// the draw sequence pinned to the engine itself.
class NormalSampler {
 public:
  template <class Engine>
  double operator()(Engine& eng) {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform(eng) - 1.0;
      v = 2.0 * uniform(eng) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  template <class Engine>
  static double uniform(Engine& eng) {
    // 53-bit mantissa double in [0, 1)
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
  }

 private:
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qwork
