#include "seqvar/model.hpp"

#include <algorithm>
#include <cmath>

#include "seqvar/rng.hpp"

namespace seqvar {

std::string to_string(ToolState s) { return s == ToolState::UP ? "UP" : "DOWN"; }

ToolState tool_state_from_string(const std::string& s) {
  if (s == "UP") return ToolState::UP;
  if (s == "DOWN") return ToolState::DOWN;
  throw BadFormat("unknown tool state: '" + s + "'");
}

namespace {

void check_durations(const std::vector<double>& durations) {
  if (durations.empty())
    throw InvalidSequence("a sequence needs at least one span");
  for (double d : durations)
    if (!(d > 0.0) || !std::isfinite(d))
      throw InvalidSequence("every span duration must be finite and > 0");
}

double sum_where(const std::vector<double>& durations, std::size_t first,
                 std::size_t step) {
  double s = 0.0;
  for (std::size_t k = first; k < durations.size(); k += step) s += durations[k];
  return s;
}

}  // namespace

UpDownSequence::UpDownSequence(ToolState initial_state,
                               std::vector<double> durations) {
  check_durations(durations);
  initial_state_ = initial_state;
  durations_ = std::move(durations);
  const std::size_t up_offset = initial_state == ToolState::UP ? 0 : 1;
  up_total_ = sum_where(durations_, up_offset, 2);
  total_duration_ = sum_where(durations_, 0, 1);
}

UpDownSequence UpDownSequence::restore(ToolState initial_state,
                                       std::vector<double> durations,
                                       double total_duration, double up_total) {
  check_durations(durations);
  UpDownSequence seq;
  seq.initial_state_ = initial_state;
  seq.durations_ = std::move(durations);
  const std::size_t up_offset = initial_state == ToolState::UP ? 0 : 1;
  const double up_sum = sum_where(seq.durations_, up_offset, 2);
  const double all_sum = sum_where(seq.durations_, 0, 1);
  if (std::abs(all_sum - total_duration) > 1e-9 * std::max(1.0, all_sum) ||
      std::abs(up_sum - up_total) > 1e-9 * std::max(1.0, all_sum))
    throw InvalidSequence("restored totals disagree with the spans");
  seq.total_duration_ = total_duration;
  seq.up_total_ = up_total;
  return seq;
}

UpDownSequence UpDownSequence::reordered(std::vector<double> new_durations) const {
  if (new_durations.size() != durations_.size())
    throw InvalidSequence("reordered: span count changed");
  for (int phase = 0; phase < 2; ++phase) {
    std::vector<double> a, b;
    for (std::size_t k = static_cast<std::size_t>(phase); k < durations_.size(); k += 2) {
      a.push_back(durations_[k]);
      b.push_back(new_durations[k]);
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw InvalidSequence("reordered: multiset changed");
  }
  UpDownSequence seq;
  seq.initial_state_ = initial_state_;
  seq.durations_ = std::move(new_durations);
  seq.total_duration_ = total_duration_;
  seq.up_total_ = up_total_;
  return seq;
}

std::vector<double> UpDownSequence::durations_of(ToolState s) const {
  std::vector<double> out;
  const std::size_t first = (s == initial_state_) ? 0 : 1;
  for (std::size_t k = first; k < durations_.size(); k += 2)
    out.push_back(durations_[k]);
  return out;
}

ArrivalScenario ArrivalScenario::generate(int scenario_id, std::uint64_t seed,
                                          double mean_interarrival,
                                          double horizon) {
  if (!(mean_interarrival > 0.0))
    throw Error("mean_interarrival must be > 0");
  if (!(horizon > 0.0)) throw Error("horizon must be > 0");
  ArrivalScenario sc;
  sc.scenario_id_ = scenario_id;
  sc.seed_ = seed;
  sc.mean_interarrival_ = mean_interarrival;
  sc.horizon_ = horizon;
  Rng rng(seed);
  double t = 0.0;
  for (;;) {
    t += rng.exponential(mean_interarrival);
    if (!(t < horizon)) break;
    sc.arrival_times_.push_back(t);
  }
  return sc;
}

std::string to_string(UtilizationBasis b) {
  return b == UtilizationBasis::Uptime ? "uptime" : "wallclock";
}

UtilizationBasis utilization_basis_from_string(const std::string& s) {
  if (s == "uptime") return UtilizationBasis::Uptime;
  if (s == "wallclock") return UtilizationBasis::Wallclock;
  throw BadFormat("unknown utilization basis: '" + s + "'");
}

void SimConfig::validate() const {
  if (!(process_time > 0.0)) throw Error("process_time must be > 0");
  if (!(utilization > 0.0 && utilization < 1.0))
    throw Error("utilization must be in (0,1)");
  if (min_sequences < 2) throw Error("min_sequences must be >= 2");
  if (min_scenarios < 2) throw Error("min_scenarios must be >= 2");
  if (!(alpha_scale > 0.0)) throw Error("alpha_scale must be > 0");
  if (!(ttest_alpha > 0.0 && ttest_alpha < 1.0))
    throw Error("ttest_alpha must be in (0,1)");
  const long initial = static_cast<long>(min_sequences + 1) * min_scenarios;
  if (max_budget < initial)
    throw Error("max_budget must cover the minimum grid of " +
                std::to_string(initial) + " runs");
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::SIGNIFICANT_NEGATIVE: return "SIGNIFICANT_NEGATIVE";
    case Verdict::NOT_SIGNIFICANT: return "NOT_SIGNIFICANT";
    case Verdict::SIGNIFICANT_POSITIVE: return "SIGNIFICANT_POSITIVE";
    case Verdict::UNDECIDED: return "UNDECIDED";
  }
  return "UNDECIDED";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "SIGNIFICANT_NEGATIVE") return Verdict::SIGNIFICANT_NEGATIVE;
  if (s == "NOT_SIGNIFICANT") return Verdict::NOT_SIGNIFICANT;
  if (s == "SIGNIFICANT_POSITIVE") return Verdict::SIGNIFICANT_POSITIVE;
  if (s == "UNDECIDED") return Verdict::UNDECIDED;
  throw BadFormat("unknown verdict: '" + s + "'");
}

std::string verdict_flag(Verdict v) {
  switch (v) {
    case Verdict::SIGNIFICANT_NEGATIVE:
    case Verdict::SIGNIFICANT_POSITIVE: return "YES";
    case Verdict::NOT_SIGNIFICANT: return "NO";
    case Verdict::UNDECIDED: return "NA";
  }
  return "NA";
}

}  // namespace seqvar
