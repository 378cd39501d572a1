#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "seqvar/model.hpp"

// Orchestration of a full sequence test: shared arrival scenarios (common
// random numbers), the (n+1) x m simulation grid, and adaptive growth of the
// grid until the verdict is decisive or the run budget is spent.

namespace seqvar {

// Mean inter-arrival time that loads the tool at utilization u. With the
// uptime basis, utilization is measured against available capacity:
// u = lambda * p / availability.
double interarrival_for_utilization(double u, const UpDownSequence& seq,
                                    double process_time,
                                    UtilizationBasis basis = UtilizationBasis::Uptime);

struct BudgetState {
  int n = 0;            // i.i.d. sequences simulated so far
  int m = 0;            // arrival scenarios so far
  long runs_used = 0;   // always (n+1)*m: the grid stays complete
  long max_budget = 0;
};

enum class BudgetAction { ADD_SCENARIO, ADD_SEQUENCE, STOP };

// Uncertainty-width reduction per action. Another scenario narrows the
// ct0 interval (total width 2*a*sigma0/sqrt(m)) at the cost of running every
// sequence on it; another sequence narrows the gap between the outer and
// inner bands at the cost of running it on every scenario.
struct BudgetGains {
  double gain_scenario = 0.0;
  long cost_scenario = 0;  // n+1 runs
  double gain_sequence = 0.0;
  long cost_sequence = 0;  // m runs
};

BudgetGains budget_gains(const BudgetState& state, double sigma, double sigma0,
                         double alpha_scale = 2.0);

// Picks the affordable action with the larger gain per run; STOP when
// neither fits in the remaining budget. Ties go to ADD_SEQUENCE.
BudgetAction next_budget_action(const BudgetState& state, double sigma,
                                double sigma0, double alpha_scale = 2.0);

// Called after the initial grid and after every extension.
using ProgressFn = std::function<void(long runs_used, long max_budget, int n, int m)>;

// Runs the full experiment for one sequence. jobs > 1 dispatches grid cells
// to that many worker threads; the report is bit-identical regardless.
ExperimentReport run_experiment(const UpDownSequence& s0,
                                const SimConfig& config,
                                std::uint64_t master_seed, int jobs = 1,
                                const ProgressFn& progress = {});

// One full experiment per utilization rate, each with its own derived seed.
std::vector<ExperimentReport> sweep(const UpDownSequence& s0,
                                    const std::vector<double>& rates,
                                    const SimConfig& config,
                                    std::uint64_t master_seed, int jobs = 1,
                                    const ProgressFn& progress = {});

SweepRow sweep_row(const ExperimentReport& report);

// FNV-1a over the raw bits of every arrival time; proves all sequences saw
// the identical scenario set.
std::string scenario_fingerprint(std::span<const ArrivalScenario> scenarios);

}  // namespace seqvar
