#include "seqvar/des_engine.hpp"

namespace seqvar {

namespace {

void check_inputs(const UpDownSequence& sequence,
                  const ArrivalScenario& arrivals, double process_time) {
  if (arrivals.arrival_times().empty())
    throw EmptyScenario("no arrivals: mean cycle time is undefined");
  if (arrivals.horizon() != sequence.total_duration())
    throw HorizonMismatch("scenario horizon differs from sequence duration");
  if (!(process_time > 0.0)) throw Error("process_time must be > 0");
}

}  // namespace

RunResult simulate_run(const UpDownSequence& sequence,
                       const ArrivalScenario& arrivals, double process_time,
                       int sequence_id) {
  check_inputs(sequence, arrivals, process_time);
  double ct_sum = 0.0;
  engine_detail::drive(sequence, arrivals.arrival_times(), process_time,
                       [&](std::size_t, double arrival, double exit) {
                         ct_sum += exit - arrival;
                       });
  const auto count = static_cast<std::int64_t>(arrivals.arrival_times().size());
  return RunResult{sequence_id, arrivals.scenario_id(),
                   ct_sum / static_cast<double>(count), count};
}

std::vector<double> simulate_cycle_times(const UpDownSequence& sequence,
                                         const ArrivalScenario& arrivals,
                                         double process_time) {
  check_inputs(sequence, arrivals, process_time);
  std::vector<double> cts(arrivals.arrival_times().size());
  engine_detail::drive(sequence, arrivals.arrival_times(), process_time,
                       [&](std::size_t k, double arrival, double exit) {
                         cts[k] = exit - arrival;
                       });
  return cts;
}

}  // namespace seqvar
