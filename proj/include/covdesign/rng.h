#ifndef COVDESIGN_RNG_H_
#define COVDESIGN_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace covdesign {

// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

// Seed for the stream identified by `path` under `base`. Streams for distinct
// paths are statistically independent, and derivation is order-free with
// respect to how work is scheduled, so serial and parallel runs agree.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path);

// One random stream. Not thread-safe; give each worker its own.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  bool coin() { return (engine_() >> 63) != 0; }
  double normal() { return normal_(engine_); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace covdesign

#endif  // COVDESIGN_RNG_H_
