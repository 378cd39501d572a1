#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqvar/errors.hpp"

// Domain types. All times are in hours, stored as double; event times are
// computed, never rounded, and compared exactly.

namespace seqvar {

enum class ToolState { UP, DOWN };

inline ToolState flipped(ToolState s) {
  return s == ToolState::UP ? ToolState::DOWN : ToolState::UP;
}

std::string to_string(ToolState s);
ToolState tool_state_from_string(const std::string& s);

// An alternating sequence of strictly positive up/down spans covering a
// wall-clock horizon.
//
// total_duration() is the authoritative horizon and up_total() the up-time
// within it; both are fixed at construction. reordered() transfers them
// unchanged to a permutation of the same spans, so a shuffled copy reports
// bit-identical totals and availability (a straight re-summation would
// differ in the last ulps depending on the order of the spans).
class UpDownSequence {
 public:
  UpDownSequence(ToolState initial_state, std::vector<double> durations);

  // Reconstructs a sequence with explicitly given totals (deserialization,
  // permutations). The totals must agree with the spans to ~1e-9 relative.
  static UpDownSequence restore(ToolState initial_state,
                                std::vector<double> durations,
                                double total_duration, double up_total);

  // Same spans in a different order; the new durations must be a permutation
  // (up and down multisets checked separately). Totals carry over bit-exact.
  UpDownSequence reordered(std::vector<double> new_durations) const;

  ToolState initial_state() const { return initial_state_; }
  const std::vector<double>& durations() const { return durations_; }
  std::size_t span_count() const { return durations_.size(); }
  ToolState state_of_span(std::size_t k) const {
    return (k % 2 == 0) ? initial_state_ : flipped(initial_state_);
  }

  double total_duration() const { return total_duration_; }
  double up_total() const { return up_total_; }
  double availability() const { return up_total_ / total_duration_; }

  // Durations of one state, in sequence order.
  std::vector<double> durations_of(ToolState s) const;

  bool operator==(const UpDownSequence&) const = default;

 private:
  UpDownSequence() = default;

  ToolState initial_state_ = ToolState::UP;
  std::vector<double> durations_;
  double total_duration_ = 0.0;
  double up_total_ = 0.0;
};

// A materialized Poisson arrival stream over [0, horizon). Regenerating with
// the same (seed, mean_interarrival, horizon) reproduces the times exactly.
class ArrivalScenario {
 public:
  static ArrivalScenario generate(int scenario_id, std::uint64_t seed,
                                  double mean_interarrival, double horizon);

  int scenario_id() const { return scenario_id_; }
  std::uint64_t seed() const { return seed_; }
  double mean_interarrival() const { return mean_interarrival_; }
  double horizon() const { return horizon_; }
  const std::vector<double>& arrival_times() const { return arrival_times_; }

  bool operator==(const ArrivalScenario&) const = default;

 private:
  int scenario_id_ = 0;
  std::uint64_t seed_ = 0;
  double mean_interarrival_ = 0.0;
  double horizon_ = 0.0;
  std::vector<double> arrival_times_;
};

// Whether target utilization is measured against up-time capacity
// (u = lambda*p / availability) or wall-clock capacity (u = lambda*p).
enum class UtilizationBasis { Uptime, Wallclock };

std::string to_string(UtilizationBasis b);
UtilizationBasis utilization_basis_from_string(const std::string& s);

struct SimConfig {
  double process_time = 1.0;     // constant service time p, hours
  double utilization = 0.8;      // target utilization, in (0,1)
  long max_budget = 10000;       // total simulation-run cap
  int min_sequences = 20;        // n0: i.i.d. permutations to start with
  int min_scenarios = 20;        // m0: arrival scenarios to start with
  double alpha_scale = 2.0;      // the "2 sigma" interval multiplier
  double ttest_alpha = 0.05;     // per-scenario t-test level
  bool paired_shuffle = false;   // permute (up,down) pairs instead of
                                 // permuting ups and downs independently
  UtilizationBasis utilization_basis = UtilizationBasis::Uptime;

  void validate() const;  // throws Error on any bad field

  bool operator==(const SimConfig&) const = default;
};

// Mean cycle time of one simulation run, sequence i on scenario j.
struct RunResult {
  int sequence_id = 0;  // 0 is the historical sequence
  int scenario_id = 0;
  double mean_cycle_time = 0.0;
  std::int64_t agent_count = 0;

  bool operator==(const RunResult&) const = default;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double center() const { return 0.5 * (lo + hi); }
  bool contains(const Interval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }
  bool entirely_below(double x) const { return hi < x; }
  bool entirely_above(double x) const { return lo > x; }

  bool operator==(const Interval&) const = default;
};

// Everything measured about one tested sequence: the effect of the sequence
// itself (ct0_*), the population of its permutations (mu, sigma), and the
// three nested confidence bands derived from them.
struct EffectEstimate {
  double ct0_bar = 0.0;  // mean over scenarios of the sequence's run means
  double sigma0 = 0.0;   // sample std-dev of those run means
  int m = 0;             // number of scenarios
  double mu = 0.0;       // mean of the permutations' scenario-averaged means
  double sigma = 0.0;    // their sample std-dev
  int n = 0;             // number of permutations
  Interval ct0_interval; // ct0_bar -+ 2*sigma0/sqrt(m)
  Interval i95;          // mu -+ 2*sigma
  Interval i95_inner;    // i95 shrunk by the estimation error
  Interval i95_outer;    // i95 widened by the estimation error

  bool operator==(const EffectEstimate&) const = default;
};

enum class Verdict {
  SIGNIFICANT_NEGATIVE,  // sequence produces lower cycle times than i.i.d.
  NOT_SIGNIFICANT,
  SIGNIFICANT_POSITIVE,  // sequence produces higher cycle times than i.i.d.
  UNDECIDED,             // uncertainty bands still overlap at budget cap
};

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

// Table-style flag: YES (significant), NO (not), NA (undecided).
std::string verdict_flag(Verdict v);

// Per-scenario t-test outcome counts: in how many scenarios the tested
// sequence's run mean was statistically smaller / indistinguishable / higher
// than the permutation population for that scenario.
struct TTestTriplet {
  int lower = 0;
  int nondiff = 0;
  int higher = 0;

  int total() const { return lower + nondiff + higher; }

  bool operator==(const TTestTriplet&) const = default;
};

// Report values rescaled so the i.i.d. mean mu reads 100.
struct NormalizedSummary {
  double ct0 = 0.0;        // 100 * ct0_bar / mu
  double delta_pct = 0.0;  // ct0 - 100
  Interval i95_star;       // outer band if ct0_bar falls outside it, inner
                           // band otherwise (the one that decided)
  Interval ct0_interval;

  bool operator==(const NormalizedSummary&) const = default;
};

struct ExperimentReport {
  EffectEstimate effect;
  Verdict verdict = Verdict::UNDECIDED;
  TTestTriplet triplet;
  NormalizedSummary normalized;
  long runs_used = 0;
  SimConfig config;
  std::uint64_t master_seed = 0;
  double mean_interarrival = 0.0;        // derived from utilization
  double horizon = 0.0;                  // tested sequence's total duration
  std::string scenario_fingerprint;      // hash of the shared arrival set

  bool operator==(const ExperimentReport&) const = default;
};

// One raw-valued point of an operational curve (cycle time vs utilization).
struct SweepRow {
  double utilization = 0.0;
  double mu = 0.0;
  Interval i95;
  double ct0_bar = 0.0;
  Interval ct0_interval;
  Verdict verdict = Verdict::UNDECIDED;

  bool operator==(const SweepRow&) const = default;
};

}  // namespace seqvar
