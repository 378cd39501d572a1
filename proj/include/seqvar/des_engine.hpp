#pragma once

#include <cassert>
#include <limits>
#include <span>
#include <vector>

#include "seqvar/model.hpp"

// One tool, an infinite FIFO queue, constant process time, and a wall-clock
// up/down calendar. Downtime preempts service; the interrupted agent keeps
// its remaining work and resumes on repair. After the calendar ends the tool
// stays up until the queue drains (arrivals already stop at the horizon by
// construction of ArrivalScenario).

namespace seqvar {

// Mean cycle time (exit - arrival) over all agents.
// Throws EmptyScenario when there are no arrivals, HorizonMismatch when the
// scenario horizon differs from the sequence's total duration.
RunResult simulate_run(const UpDownSequence& sequence,
                       const ArrivalScenario& arrivals, double process_time,
                       int sequence_id = 0);

// Same simulation, returning every agent's cycle time in arrival order.
std::vector<double> simulate_cycle_times(const UpDownSequence& sequence,
                                         const ArrivalScenario& arrivals,
                                         double process_time);

namespace engine_detail {

// Event loop shared by both entry points. Calls on_exit(agent_index,
// arrival_time, exit_time) once per agent, in FIFO (= arrival) order.
//
// Simultaneous events are processed in a fixed order: calendar transition,
// then service completion, then arrival. A service whose remaining work
// reaches exactly zero at a transition has already received its full work,
// so it exits at that instant rather than being suspended with nothing left.
template <class OnExit>
void drive(const UpDownSequence& seq, std::span<const double> arrivals,
           double process_time, OnExit&& on_exit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  const std::vector<double>& dur = seq.durations();
  const std::size_t n_arrivals = arrivals.size();

  std::size_t next_arrival = 0;  // arrivals not yet in the system
  std::size_t completed = 0;     // agents served; the one in service is `completed`
  bool busy = false;
  double remaining = 0.0;  // work left on the agent in service
  double resume = 0.0;     // when its current service segment began
  std::size_t span = 0;
  bool up = seq.initial_state() == ToolState::UP;
  double span_end = dur[0];
  double clock = 0.0;

  auto try_start = [&] {
    if (up && !busy && completed < next_arrival) {
      busy = true;
      remaining = process_time;
      resume = clock;
    }
  };

  while (completed < n_arrivals) {
    const double t_cal = span < dur.size() ? span_end : kInf;
    const double t_done = (busy && up) ? resume + remaining : kInf;
    const double t_arr = next_arrival < n_arrivals ? arrivals[next_arrival] : kInf;

    if (t_cal <= t_done && t_cal <= t_arr) {
      clock = t_cal;
      if (busy && up) {
        remaining -= clock - resume;
        if (remaining <= 0.0) {
          on_exit(completed, arrivals[completed], clock);
          ++completed;
          busy = false;
        }
      }
      ++span;
      if (span < dur.size()) {
        span_end += dur[span];
        up = !up;
      } else {
        up = true;  // calendar exhausted: tool stays up for the drain
      }
      if (up && busy) resume = clock;
      try_start();
    } else if (t_done <= t_arr) {
      clock = t_done;
      on_exit(completed, arrivals[completed], clock);
      ++completed;
      busy = false;
      try_start();
    } else {
      clock = t_arr;
      ++next_arrival;
      try_start();
    }
    // Non-idling audit: an up tool with waiting agents must be serving.
    assert(!(up && !busy && completed < next_arrival));
  }
}

}  // namespace engine_detail
}  // namespace seqvar
