#include "seqvar/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "seqvar/des_engine.hpp"
#include "seqvar/io.hpp"
#include "seqvar/rng.hpp"
#include "seqvar/sequences.hpp"
#include "seqvar/stats.hpp"

namespace seqvar {

double interarrival_for_utilization(double u, const UpDownSequence& seq,
                                    double process_time,
                                    UtilizationBasis basis) {
  if (!(u > 0.0 && u < 1.0)) throw Error("utilization must be in (0,1)");
  if (!(process_time > 0.0)) throw Error("process_time must be > 0");
  if (basis == UtilizationBasis::Wallclock) return process_time / u;
  const double availability = seq.availability();
  if (!(availability > 0.0))
    throw ZeroAvailability("sequence has no up time");
  return process_time / (u * availability);
}

BudgetGains budget_gains(const BudgetState& state, double sigma, double sigma0,
                         double alpha_scale) {
  if (state.n < 2 || state.m < 2) throw Error("budget_gains needs n, m >= 2");
  BudgetGains g;
  const double m = state.m;
  g.gain_scenario = 2.0 * alpha_scale * sigma0 *
                    (1.0 / std::sqrt(m) - 1.0 / std::sqrt(m + 1.0));
  g.cost_scenario = state.n + 1;
  auto edge_error = [&](double n) {
    return sigma / std::sqrt(n) + alpha_scale * sigma / std::sqrt(2.0 * (n - 1.0));
  };
  const double n = state.n;
  g.gain_sequence = 2.0 * (edge_error(n) - edge_error(n + 1.0));
  g.cost_sequence = state.m;
  return g;
}

BudgetAction next_budget_action(const BudgetState& state, double sigma,
                                double sigma0, double alpha_scale) {
  const BudgetGains g = budget_gains(state, sigma, sigma0, alpha_scale);
  const long remaining = state.max_budget - state.runs_used;
  const bool can_scenario = g.cost_scenario <= remaining;
  const bool can_sequence = g.cost_sequence <= remaining;
  if (!can_scenario && !can_sequence) return BudgetAction::STOP;
  if (!can_sequence) return BudgetAction::ADD_SCENARIO;
  if (!can_scenario) return BudgetAction::ADD_SEQUENCE;
  const double per_run_scenario = g.gain_scenario / static_cast<double>(g.cost_scenario);
  const double per_run_sequence = g.gain_sequence / static_cast<double>(g.cost_sequence);
  return per_run_scenario > per_run_sequence ? BudgetAction::ADD_SCENARIO
                                             : BudgetAction::ADD_SEQUENCE;
}

namespace {

// Runs fn(0..count-1) on up to `jobs` threads. Any worker exception is
// rethrown on the calling thread.
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= count) return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

ExperimentReport run_experiment(const UpDownSequence& s0,
                                const SimConfig& config,
                                std::uint64_t master_seed, int jobs,
                                const ProgressFn& progress) {
  config.validate();
  const double interarrival = interarrival_for_utilization(
      config.utilization, s0, config.process_time, config.utilization_basis);
  const double horizon = s0.total_duration();

  int n = config.min_sequences;
  int m = config.min_scenarios;

  std::vector<ArrivalScenario> scenarios;
  scenarios.reserve(m);
  for (int j = 0; j < m; ++j)
    scenarios.push_back(ArrivalScenario::generate(
        j, derive_seed(master_seed, "arrival", j), interarrival, horizon));

  std::vector<UpDownSequence> sequences;
  sequences.reserve(n + 1);
  sequences.push_back(s0);
  for (int i = 1; i <= n; ++i)
    sequences.push_back(shuffle(s0, derive_seed(master_seed, "perm", i),
                                config.paired_shuffle));

  // ct[i][j]: mean cycle time of sequence i on scenario j.
  std::vector<std::vector<double>> ct(n + 1);
  for (auto& row : ct) row.resize(m);
  parallel_for(static_cast<std::size_t>(n + 1) * m, jobs, [&](std::size_t k) {
    const std::size_t i = k / m;
    const std::size_t j = k % m;
    ct[i][j] = simulate_run(sequences[i], scenarios[j], config.process_time,
                            static_cast<int>(i))
                   .mean_cycle_time;
  });

  EffectOfS0 eff;
  IidBand band;
  Verdict verdict = Verdict::UNDECIDED;
  auto evaluate = [&] {
    eff = effect_of_s0(ct[0], config.alpha_scale);
    std::vector<double> ct_bars(n);
    for (int i = 1; i <= n; ++i) ct_bars[i - 1] = sample_mean(ct[i]);
    band = iid_band(ct_bars, config.alpha_scale);
    verdict = classify(eff.ct0_interval, band.i95_inner, band.i95_outer);
  };

  evaluate();
  if (progress) progress(static_cast<long>(n + 1) * m, config.max_budget, n, m);

  while (verdict == Verdict::UNDECIDED) {
    const BudgetState state{n, m, static_cast<long>(n + 1) * m, config.max_budget};
    const BudgetAction action =
        next_budget_action(state, band.sigma, eff.sigma0, config.alpha_scale);
    if (action == BudgetAction::STOP) break;

    if (action == BudgetAction::ADD_SCENARIO) {
      scenarios.push_back(ArrivalScenario::generate(
          m, derive_seed(master_seed, "arrival", m), interarrival, horizon));
      for (auto& row : ct) row.push_back(0.0);
      parallel_for(static_cast<std::size_t>(n + 1), jobs, [&](std::size_t i) {
        ct[i][m] = simulate_run(sequences[i], scenarios[m], config.process_time,
                                static_cast<int>(i))
                       .mean_cycle_time;
      });
      ++m;
    } else {
      sequences.push_back(shuffle(s0, derive_seed(master_seed, "perm", n + 1),
                                  config.paired_shuffle));
      ct.emplace_back(m);
      parallel_for(static_cast<std::size_t>(m), jobs, [&](std::size_t j) {
        ct[n + 1][j] = simulate_run(sequences[n + 1], scenarios[j],
                                    config.process_time, n + 1)
                           .mean_cycle_time;
      });
      ++n;
    }
    evaluate();
    if (progress) progress(static_cast<long>(n + 1) * m, config.max_budget, n, m);
  }

  std::vector<std::vector<double>> populations(m);
  for (int j = 0; j < m; ++j) {
    populations[j].resize(n);
    for (int i = 1; i <= n; ++i) populations[j][i - 1] = ct[i][j];
  }

  ExperimentReport report;
  report.effect.ct0_bar = eff.ct0_bar;
  report.effect.sigma0 = eff.sigma0;
  report.effect.m = m;
  report.effect.mu = band.mu;
  report.effect.sigma = band.sigma;
  report.effect.n = n;
  report.effect.ct0_interval = eff.ct0_interval;
  report.effect.i95 = band.i95;
  report.effect.i95_inner = band.i95_inner;
  report.effect.i95_outer = band.i95_outer;
  report.verdict = verdict;
  report.triplet = ttest_triplet(populations, ct[0], config.ttest_alpha);
  report.runs_used = static_cast<long>(n + 1) * m;
  report.config = config;
  report.master_seed = master_seed;
  report.mean_interarrival = interarrival;
  report.horizon = horizon;
  report.scenario_fingerprint = scenario_fingerprint(scenarios);
  return normalize_report(std::move(report));
}

std::vector<ExperimentReport> sweep(const UpDownSequence& s0,
                                    const std::vector<double>& rates,
                                    const SimConfig& config,
                                    std::uint64_t master_seed, int jobs,
                                    const ProgressFn& progress) {
  std::vector<ExperimentReport> reports;
  reports.reserve(rates.size());
  for (std::size_t idx = 0; idx < rates.size(); ++idx) {
    SimConfig rate_config = config;
    rate_config.utilization = rates[idx];
    reports.push_back(run_experiment(s0, rate_config,
                                     derive_seed(master_seed, "sweep", idx),
                                     jobs, progress));
  }
  return reports;
}

SweepRow sweep_row(const ExperimentReport& report) {
  return SweepRow{report.config.utilization, report.effect.mu,
                  report.effect.i95,         report.effect.ct0_bar,
                  report.effect.ct0_interval, report.verdict};
}

std::string scenario_fingerprint(std::span<const ArrivalScenario> scenarios) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix_bytes = [&](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t k = 0; k < len; ++k) {
      h ^= bytes[k];
      h *= 0x100000001b3ULL;
    }
  };
  for (const ArrivalScenario& sc : scenarios) {
    const std::uint64_t count = sc.arrival_times().size();
    mix_bytes(&count, sizeof count);
    for (double t : sc.arrival_times()) mix_bytes(&t, sizeof t);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace seqvar
