#include "seqvar/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "seqvar/experiment.hpp"
#include "seqvar/io.hpp"
#include "seqvar/model.hpp"
#include "seqvar/rng.hpp"
#include "seqvar/sequences.hpp"

namespace seqvar {

namespace {

int default_jobs() {
  if (const char* env = std::getenv("SEQVAR_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

struct CommonOptions {
  std::string log_path;
  std::string synth_spec;
  double horizon = 8760.0;  // one year, for synthetic inputs
  double utilization = 0.8;
  double process_time = 1.0;
  std::uint64_t seed = 1;
  std::string min_grid = "20x20";
  long max_budget = 10000;
  double alpha_scale = 2.0;
  double ttest_alpha = 0.05;
  bool paired_shuffle = false;
  std::string utilization_basis = "uptime";
  bool coalesce = false;
  int jobs = default_jobs();
  std::string out_path;
};

void add_common_options(CLI::App& cmd, CommonOptions& o) {
  cmd.add_option("log", o.log_path, "event-log CSV (header state,start,end)");
  cmd.add_option("--synth", o.synth_spec,
                 "synthetic input instead of a log, e.g. "
                 "iid:exp:50:lognorm:3:1 or periodic:168:8:exp0.5:0.02");
  cmd.add_option("--horizon", o.horizon,
                 "horizon in hours for --synth inputs")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--utilization", o.utilization, "target utilization in (0,1)");
  cmd.add_option("--process-time", o.process_time, "constant process time, hours")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", o.seed, "master seed; everything derives from it");
  cmd.add_option("--min-grid", o.min_grid, "minimum grid as NxM (sequences x scenarios)");
  cmd.add_option("--max-budget", o.max_budget, "total simulation-run cap");
  cmd.add_option("--alpha-scale", o.alpha_scale, "confidence band multiplier");
  cmd.add_option("--ttest-alpha", o.ttest_alpha, "per-scenario t-test level");
  cmd.add_flag("--paired-shuffle", o.paired_shuffle,
               "permute (up,down) pairs jointly instead of independently");
  cmd.add_option("--utilization-basis", o.utilization_basis,
                 "uptime (u = lambda*p/availability) or wallclock (u = lambda*p)")
      ->check(CLI::IsMember({"uptime", "wallclock"}));
  cmd.add_flag("--coalesce", o.coalesce,
               "merge consecutive same-state log rows instead of rejecting");
  cmd.add_option("--jobs", o.jobs, "worker threads (env SEQVAR_JOBS)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--out", o.out_path, "output file (default: stdout row only)");
}

SimConfig config_from(const CommonOptions& o) {
  SimConfig c;
  c.process_time = o.process_time;
  c.utilization = o.utilization;
  c.max_budget = o.max_budget;
  int n = 0, m = 0;
  if (std::sscanf(o.min_grid.c_str(), "%dx%d", &n, &m) != 2)
    throw Error("--min-grid must look like 20x20");
  c.min_sequences = n;
  c.min_scenarios = m;
  c.alpha_scale = o.alpha_scale;
  c.ttest_alpha = o.ttest_alpha;
  c.paired_shuffle = o.paired_shuffle;
  c.utilization_basis = utilization_basis_from_string(o.utilization_basis);
  return c;
}

UpDownSequence load_input(const CommonOptions& o) {
  const bool have_log = !o.log_path.empty();
  const bool have_synth = !o.synth_spec.empty();
  if (have_log == have_synth)
    throw Error("provide exactly one input: a log file or --synth");
  if (have_synth)
    return gen_from_spec(o.synth_spec, o.horizon,
                         derive_seed(o.seed, "synth", 0));
  std::ifstream in(o.log_path);
  if (!in) throw Error("no such input: " + o.log_path);
  return parse_event_log(in, o.coalesce);
}

void write_text_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
  if (!out) throw Error("failed writing output file: " + path);
}

ProgressFn stderr_progress() {
  return [](long runs, long budget, int n, int m) {
    std::fprintf(stderr, "progress: runs=%ld/%ld n=%d m=%d\n", runs, budget, n, m);
  };
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> rates;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    char* end = nullptr;
    const double r = std::strtod(piece.c_str(), &end);
    if (piece.empty() || end != piece.c_str() + piece.size())
      throw Error("bad rate '" + piece + "'");
    if (!(r > 0.0 && r < 1.0))
      throw Error("rates must be in (0,1), got " + piece);
    rates.push_back(r);
  }
  if (rates.empty()) throw Error("--rates needs at least one value");
  return rates;
}

int cmd_test(const CommonOptions& o) {
  const UpDownSequence s0 = load_input(o);
  const SimConfig config = config_from(o);
  const ExperimentReport report =
      run_experiment(s0, config, o.seed, o.jobs, stderr_progress());
  if (!o.out_path.empty()) write_text_output(o.out_path, write_report(report));
  std::cout << report_summary_line(report) << "\n";
  return report.verdict == Verdict::UNDECIDED ? 2 : 0;
}

int cmd_sweep(const CommonOptions& o, const std::string& rates_text) {
  const std::vector<double> rates = parse_rates(rates_text);
  const UpDownSequence s0 = load_input(o);
  const SimConfig config = config_from(o);
  const std::vector<ExperimentReport> reports =
      sweep(s0, rates, config, o.seed, o.jobs, stderr_progress());
  std::vector<SweepRow> rows;
  rows.reserve(reports.size());
  bool any_undecided = false;
  for (const ExperimentReport& r : reports) {
    rows.push_back(sweep_row(r));
    any_undecided = any_undecided || r.verdict == Verdict::UNDECIDED;
    std::fprintf(stderr, "u=%.3g %s\n", r.config.utilization,
                 report_summary_line(r).c_str());
  }
  write_text_output(o.out_path, write_sweep(rows));
  return any_undecided ? 2 : 0;
}

int cmd_synth(const std::string& spec, double horizon, std::uint64_t seed,
              const std::string& out_path) {
  const UpDownSequence seq =
      gen_from_spec(spec, horizon, derive_seed(seed, "synth", 0));
  write_text_output(out_path, write_event_log(seq));
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"seqvar: does the ordering of a machine's up/down events "
               "carry cycle-time variability beyond their distribution?"};
  app.require_subcommand(1);

  CommonOptions test_opts;
  CLI::App* test = app.add_subcommand(
      "test", "run the permutation experiment on one sequence");
  add_common_options(*test, test_opts);

  CommonOptions sweep_opts;
  std::string rates_text = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "run experiments across utilization rates (operational curve)");
  add_common_options(*sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--rates", rates_text, "comma-separated rates in (0,1)");

  std::string synth_spec;
  double synth_horizon = 8760.0;
  std::uint64_t synth_seed = 1;
  std::string synth_out;
  CLI::App* synth = app.add_subcommand(
      "synth", "materialize a synthetic sequence as an event-log CSV");
  synth->add_option("spec", synth_spec, "generator spec (iid/autocorr/periodic)")
      ->required();
  synth->add_option("--horizon", synth_horizon, "horizon in hours")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "master seed");
  synth->add_option("--out", synth_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
    if (test->parsed()) return cmd_test(test_opts);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_opts, rates_text);
    if (synth->parsed())
      return cmd_synth(synth_spec, synth_horizon, synth_seed, synth_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
}

}  // namespace seqvar
