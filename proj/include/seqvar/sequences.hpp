#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "seqvar/model.hpp"
#include "seqvar/rng.hpp"

namespace seqvar {

class Rng;

// An i.i.d.-ized copy of seq: same initial state, same up and down duration
// multisets, same total duration (bit-exact), with each multiset permuted by
// an independent Fisher-Yates pass. With paired=true, (up,down) couples are
// permuted jointly instead, preserving the up<->down coupling.
UpDownSequence shuffle(const UpDownSequence& seq, std::uint64_t seed,
                       bool paired = false);

// Duration law for the synthetic generators. Text forms:
//   "exp:10"         exponential with mean 10
//   "lognorm:5:0.8"  lognormal with median 5, log-space shape 0.8
//   "fixed:3"        constant 3
// Inside composite specs the name and first parameter may be fused
// ("exp0.5") so that colon-delimited specs stay unambiguous.
struct DistSpec {
  enum class Kind { Exponential, Lognormal, Fixed };

  Kind kind = Kind::Fixed;
  double a = 0.0;  // mean / median / value
  double b = 0.0;  // lognormal shape

  static DistSpec parse(std::string_view text);
  double sample(Rng& rng) const;
  std::string to_string() const;

  bool operator==(const DistSpec&) const = default;
};

// Alternating i.i.d. draws (starting UP) until the horizon is covered; the
// final span is truncated so total_duration == horizon exactly.
UpDownSequence gen_iid(const DistSpec& up_law, const DistSpec& down_law,
                       double horizon, std::uint64_t seed);

// Same draws as gen_iid for the same seed, with the down durations rearranged
// into runs of similar values: the sorted down multiset is cut into
// consecutive blocks of block_size, and blocks are placed in the order their
// earliest member was originally drawn (ascending within each block).
// block_size == 1 reproduces the i.i.d. order unchanged.
UpDownSequence gen_autocorrelated(const DistSpec& up_law,
                                  const DistSpec& down_law, int block_size,
                                  double horizon, std::uint64_t seed);

// The block rearrangement on its own (exposed for direct testing).
std::vector<double> autocorrelate_downs(const std::vector<double>& draws,
                                        int block_size);

// Deterministic maintenance downs of maint_duration at the end of every
// period, plus Poisson(noise_rate)-placed downs drawn from noise_down_law.
// Overlapping or touching downs are merged.
UpDownSequence gen_periodic_maintenance(double period, double maint_duration,
                                        const DistSpec& noise_down_law,
                                        double noise_rate, double horizon,
                                        std::uint64_t seed);

// Builds a sequence from a composite generator spec:
//   "iid:<up_law>:<down_law>"
//   "autocorr:<up_law>:<down_law>:<block_size>"
//   "periodic:<period>:<maint_duration>:<noise_law>:<noise_rate>"
// e.g. "periodic:168:8:exp0.5:0.02".
UpDownSequence gen_from_spec(std::string_view spec, double horizon,
                             std::uint64_t seed);

}  // namespace seqvar
