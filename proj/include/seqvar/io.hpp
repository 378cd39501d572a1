#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "seqvar/model.hpp"

namespace seqvar {

// Event-log CSV dialect: header `state,start,end`, state UP or DOWN, times
// as decimal hours or ISO-8601 timestamps (converted to hours relative to
// the first row). Rows must be chronological, contiguous and alternating;
// coalesce=true merges consecutive same-state rows instead of rejecting.
UpDownSequence parse_event_log(std::istream& in, bool coalesce = false);
UpDownSequence parse_event_log_text(const std::string& text, bool coalesce = false);

std::string write_event_log(const UpDownSequence& seq);

// Report document (JSON, schema tag "seqvar-report/1"). write/parse
// round-trip bit-exactly.
std::string write_report(const ExperimentReport& report);
ExperimentReport parse_report(const std::string& json_text);

// Recomputes the normalized block from the raw effect so that mu reads 100.
// Idempotent; the verdict is untouched.
ExperimentReport normalize_report(ExperimentReport report);

// Operational-curve CSV:
// utilization,mu,i95_lo,i95_hi,ct0,ct0_lo,ct0_hi,verdict
std::string write_sweep(std::span<const SweepRow> rows);
std::vector<SweepRow> parse_sweep(const std::string& csv_text);

// Compact JSON forms for the in-memory types; all round-trip bit-exactly.
// A scenario is stored as its (id, seed, mean_interarrival, horizon) tuple
// and re-materialized on parse.
std::string write_sequence_json(const UpDownSequence& seq);
UpDownSequence parse_sequence_json(const std::string& text);
std::string write_scenario_json(const ArrivalScenario& scenario);
ArrivalScenario parse_scenario_json(const std::string& text);
std::string write_run_json(const RunResult& run);
RunResult parse_run_json(const std::string& text);

// One Table-style summary line of the normalized report values.
std::string report_summary_line(const ExperimentReport& report);

}  // namespace seqvar
