#include "doctest.h"

#include <cmath>
#include <vector>

#include "seqvar/experiment.hpp"
#include "seqvar/io.hpp"
#include "seqvar/rng.hpp"
#include "seqvar/sequences.hpp"
#include "seqvar/stats.hpp"

using namespace seqvar;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.process_time = 1.0;
  c.utilization = 0.7;
  c.min_sequences = 4;
  c.min_scenarios = 4;
  c.max_budget = 200;
  return c;
}

UpDownSequence small_fixture() {
  return gen_iid(DistSpec::parse("exp:30"), DistSpec::parse("lognorm:3:0.8"),
                 600.0, 77);
}

}  // namespace

TEST_CASE("interarrival_for_utilization") {
  UpDownSequence all_up(ToolState::UP, {100.0});
  CHECK(interarrival_for_utilization(0.8, all_up, 1.0) == 1.25);

  UpDownSequence mostly_up(ToolState::UP, {90.0, 10.0});
  CHECK(interarrival_for_utilization(0.8, mostly_up, 1.0) ==
        doctest::Approx(1.3888888888888888).epsilon(1e-12));

  // saturated relative to uptime: u -> 1 with A = 0.5 gives 2p
  UpDownSequence half_up(ToolState::UP, {50.0, 50.0});
  CHECK(interarrival_for_utilization(1.0 - 1e-9, half_up, 1.0) ==
        doctest::Approx(2.0).epsilon(1e-6));

  // wall-clock basis ignores availability
  CHECK(interarrival_for_utilization(0.8, half_up, 1.0,
                                     UtilizationBasis::Wallclock) == 1.25);

  UpDownSequence all_down(ToolState::DOWN, {100.0});
  CHECK_THROWS_AS(interarrival_for_utilization(0.8, all_down, 1.0),
                  ZeroAvailability);
  CHECK_THROWS_AS(interarrival_for_utilization(1.2, all_up, 1.0), Error);
}

TEST_CASE("budget gains match the reference evaluation") {
  // n=20, m=20, sigma=sigma0=10: another sequence wins
  const BudgetState st{20, 20, 420, 10000};
  const BudgetGains g = budget_gains(st, 10.0, 10.0);
  CHECK(g.gain_scenario / g.cost_scenario ==
        doctest::Approx(0.010264585740926807).epsilon(1e-12));
  CHECK(g.gain_sequence / g.cost_sequence ==
        doctest::Approx(0.01360398375867371).epsilon(1e-12));
  CHECK(g.cost_scenario == 21);
  CHECK(g.cost_sequence == 20);
  CHECK(next_budget_action(st, 10.0, 10.0) == BudgetAction::ADD_SEQUENCE);
}

TEST_CASE("budget action corner cases") {
  const BudgetState st{20, 20, 420, 10000};
  // no scenario spread left: only sequences help
  CHECK(next_budget_action(st, 10.0, 0.0) == BudgetAction::ADD_SEQUENCE);
  // no sequence spread: only scenarios help
  CHECK(next_budget_action(st, 0.0, 10.0) == BudgetAction::ADD_SCENARIO);
  // cannot afford either extension
  CHECK(next_budget_action({20, 20, 420, 430}, 10.0, 10.0) ==
        BudgetAction::STOP);
  // can only afford the cheaper one (m=20 < n+1=31)
  CHECK(next_budget_action({30, 20, 620, 645}, 10.0, 10.0) ==
        BudgetAction::ADD_SEQUENCE);
  // very large sigma0 prefers scenarios
  CHECK(next_budget_action(st, 1.0, 100.0) == BudgetAction::ADD_SCENARIO);
}

TEST_CASE("run_experiment report invariants") {
  const UpDownSequence s0 = small_fixture();
  const SimConfig config = small_config();
  const ExperimentReport r = run_experiment(s0, config, 42);

  CHECK(r.effect.n >= config.min_sequences);
  CHECK(r.effect.m >= config.min_scenarios);
  CHECK(r.runs_used == static_cast<long>(r.effect.n + 1) * r.effect.m);
  CHECK(r.runs_used <= std::max(config.max_budget,
                                static_cast<long>(config.min_sequences + 1) *
                                    config.min_scenarios));
  CHECK(r.triplet.total() == r.effect.m);
  CHECK(r.horizon == s0.total_duration());
  CHECK(r.master_seed == 42);

  // the verdict is reproducible from the stored intervals
  CHECK(classify(r.effect.ct0_interval, r.effect.i95_inner,
                 r.effect.i95_outer) == r.verdict);

  // normalized block consistency
  CHECK(r.normalized.ct0 ==
        doctest::Approx(100.0 * r.effect.ct0_bar / r.effect.mu).epsilon(1e-12));
  CHECK(r.normalized.delta_pct ==
        doctest::Approx(r.normalized.ct0 - 100.0).epsilon(1e-9));

  // raw and normalized intervals classify identically
  const double s = 100.0 / r.effect.mu;
  const Interval inner_n{r.effect.i95_inner.lo * s, r.effect.i95_inner.hi * s};
  const Interval outer_n{r.effect.i95_outer.lo * s, r.effect.i95_outer.hi * s};
  CHECK(classify(r.normalized.ct0_interval, inner_n, outer_n) == r.verdict);

  // the scenario fingerprint reproduces from the reported seeds
  std::vector<ArrivalScenario> scenarios;
  for (int j = 0; j < r.effect.m; ++j)
    scenarios.push_back(ArrivalScenario::generate(
        j, derive_seed(r.master_seed, "arrival", j), r.mean_interarrival,
        r.horizon));
  CHECK(scenario_fingerprint(scenarios) == r.scenario_fingerprint);
}

TEST_CASE("run_experiment is deterministic and worker-count invariant") {
  const UpDownSequence s0 = small_fixture();
  const SimConfig config = small_config();
  const ExperimentReport a = run_experiment(s0, config, 7, 1);
  const ExperimentReport b = run_experiment(s0, config, 7, 1);
  const ExperimentReport c = run_experiment(s0, config, 7, 3);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(write_report(a) == write_report(c));
  const ExperimentReport other = run_experiment(s0, config, 8, 1);
  CHECK(other.scenario_fingerprint != a.scenario_fingerprint);
}

TEST_CASE("budget exhaustion yields UNDECIDED with a complete grid") {
  const UpDownSequence s0 = small_fixture();
  SimConfig config = small_config();
  config.max_budget = (config.min_sequences + 1) * config.min_scenarios;  // 20
  bool saw_undecided = false;
  for (std::uint64_t seed = 0; seed < 20 && !saw_undecided; ++seed) {
    const ExperimentReport r = run_experiment(s0, config, seed);
    CHECK(r.runs_used == config.max_budget);  // no growth was possible
    if (r.verdict == Verdict::UNDECIDED) saw_undecided = true;
  }
  CHECK(saw_undecided);
}

TEST_CASE("sweep of a single rate equals a plain experiment at that rate") {
  const UpDownSequence s0 = small_fixture();
  const SimConfig config = small_config();
  const std::vector<ExperimentReport> reports =
      sweep(s0, {0.8}, config, 99);
  REQUIRE(reports.size() == 1);
  SimConfig at_rate = config;
  at_rate.utilization = 0.8;
  const ExperimentReport direct =
      run_experiment(s0, at_rate, derive_seed(99, "sweep", 0));
  CHECK(reports[0] == direct);
}

TEST_CASE("config variants run end to end and land in the report echo") {
  const UpDownSequence s0 = small_fixture();
  SimConfig config = small_config();
  config.paired_shuffle = true;
  config.utilization_basis = UtilizationBasis::Wallclock;
  config.alpha_scale = 1.5;
  const ExperimentReport r = run_experiment(s0, config, 21);
  CHECK(r.config == config);
  // wall-clock basis: interarrival ignores availability
  CHECK(r.mean_interarrival == config.process_time / config.utilization);
  // alpha-scale 1.5 narrows the raw band to mu -+ 1.5 sigma
  CHECK(r.effect.i95.hi - r.effect.i95.lo ==
        doctest::Approx(3.0 * r.effect.sigma).epsilon(1e-12));
  // paired shuffling changes the permutation stream but not the arrival
  // streams, which depend only on (seed, interarrival, horizon)
  SimConfig independent = config;
  independent.paired_shuffle = false;
  const ExperimentReport r2 = run_experiment(s0, independent, 21);
  CHECK(r2.mean_interarrival == r.mean_interarrival);
  for (int j = 0; j < std::min(r.effect.m, r2.effect.m); ++j)
    CHECK(ArrivalScenario::generate(j, derive_seed(21, "arrival", j),
                                    r.mean_interarrival, r.horizon) ==
          ArrivalScenario::generate(j, derive_seed(21, "arrival", j),
                                    r2.mean_interarrival, r2.horizon));
  CHECK(r2.effect.mu != r.effect.mu);
}

TEST_CASE("a decisive verdict does not flip sign on a larger minimum grid") {
  const UpDownSequence positive = gen_autocorrelated(
      DistSpec::parse("exp:50"), DistSpec::parse("lognorm:3:1"), 8, 8760.0, 404);
  const UpDownSequence negative = gen_periodic_maintenance(
      168.0, 8.0, DistSpec::parse("exp:0.5"), 0.02, 8760.0, 505);
  SimConfig base;
  SimConfig larger;
  larger.min_sequences = 30;
  larger.min_scenarios = 30;

  const ExperimentReport p20 = run_experiment(positive, base, 404, 2);
  const ExperimentReport p30 = run_experiment(positive, larger, 404, 2);
  REQUIRE(p20.verdict == Verdict::SIGNIFICANT_POSITIVE);
  CHECK(p30.verdict != Verdict::SIGNIFICANT_NEGATIVE);

  const ExperimentReport n20 = run_experiment(negative, base, 505, 2);
  const ExperimentReport n30 = run_experiment(negative, larger, 505, 2);
  REQUIRE(n20.verdict == Verdict::SIGNIFICANT_NEGATIVE);
  CHECK(n30.verdict != Verdict::SIGNIFICANT_POSITIVE);
}

TEST_CASE("sweep emits one report per rate with the rate echoed") {
  const UpDownSequence s0 = small_fixture();
  const std::vector<double> rates{0.3, 0.6};
  const std::vector<ExperimentReport> reports =
      sweep(s0, rates, small_config(), 5);
  REQUIRE(reports.size() == 2);
  for (std::size_t k = 0; k < rates.size(); ++k) {
    CHECK(reports[k].config.utilization == rates[k]);
    const SweepRow row = sweep_row(reports[k]);
    CHECK(row.utilization == rates[k]);
    CHECK(row.mu == reports[k].effect.mu);
    CHECK(row.verdict == reports[k].verdict);
  }
  // mean cycle time grows with utilization
  CHECK(reports[1].effect.mu > reports[0].effect.mu);
}
