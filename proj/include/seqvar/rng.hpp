#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace seqvar {

// Seeded random source used everywhere in this project.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard, and all variates are produced by explicit inverse-CDF /
// Box-Muller transforms on the raw 64-bit stream. Results are therefore
// reproducible bit-for-bit across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1): 53 random bits offset by half an ulp,
  // so log() below never sees 0 or 1.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Exponential with the given mean (inverse CDF). Always > 0.
  double exponential(double mean) { return -mean * std::log(uniform01()); }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Lognormal parameterized by median and log-space shape:
  // X = median * exp(shape * Z).
  double lognormal(double median, double shape) {
    return median * std::exp(shape * normal());
  }

  // Uniform integer in [0, n), unbiased (rejection).
  std::size_t below(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives the seed for one purpose-tagged stream from a master seed.
// Scheme: splitmix64-style finalizer over (master, fnv1a64(purpose), index).
// Streams for different (purpose, index) pairs never move when other streams
// are added, so growing an experiment grid keeps existing rows and columns.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view purpose,
                          std::uint64_t index);

}  // namespace seqvar
