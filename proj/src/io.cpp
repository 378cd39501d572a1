#include "seqvar/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <sstream>

#include "json.hpp"

namespace seqvar {

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(trimmed(line.substr(start)));
      return fields;
    }
    fields.push_back(trimmed(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

bool parse_decimal(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

// Days since 1970-01-01 for a proleptic Gregorian date.
long long days_from_civil(long long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

// "YYYY-MM-DD[T ]HH:MM[:SS[.frac]][Z]" -> hours since the Unix epoch.
bool parse_iso8601(const std::string& s, double& hours_out) {
  int y = 0, mo = 0, d = 0, hh = 0, mi = 0, consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) != 3 ||
      consumed != 10)
    return false;
  if (s.size() <= 10 || (s[10] != 'T' && s[10] != ' ')) return false;
  int after_minutes = 0;
  if (std::sscanf(s.c_str() + 11, "%2d:%2d%n", &hh, &mi, &after_minutes) != 2 ||
      after_minutes != 5)
    return false;
  std::size_t pos = 11 + 5;
  double ss = 0.0;
  if (pos < s.size() && s[pos] == ':') {
    int sec_len = 0;
    if (std::sscanf(s.c_str() + pos + 1, "%lf%n", &ss, &sec_len) != 1) return false;
    pos += 1 + static_cast<std::size_t>(sec_len);
  }
  if (pos < s.size() && s[pos] == 'Z') ++pos;
  if (pos != s.size()) return false;
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || hh > 23 || mi > 59 || ss < 0.0 ||
      ss >= 61.0)
    return false;
  hours_out = static_cast<double>(days_from_civil(y, mo, d)) * 24.0 + hh +
              mi / 60.0 + ss / 3600.0;
  return true;
}

double parse_time_field(const std::string& s) {
  double v = 0.0;
  if (parse_decimal(s, v)) return v;
  if (parse_iso8601(s, v)) return v;
  throw BadTimestamp("cannot parse time '" + s + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

UpDownSequence parse_event_log(std::istream& in, bool coalesce) {
  std::string line;
  bool saw_header = false;
  bool have_rows = false;
  ToolState initial = ToolState::UP;
  ToolState prev_state = ToolState::UP;
  double epoch = 0.0;
  double prev_end = 0.0;
  std::vector<double> durations;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;
    if (!saw_header) {
      if (trimmed(line) != "state,start,end")
        throw BadFormat("expected header 'state,start,end', got '" + line + "'");
      saw_header = true;
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 3)
      throw BadFormat("expected 3 fields, got " + std::to_string(fields.size()) +
                      " in '" + line + "'");
    const ToolState state = tool_state_from_string(fields[0]);
    double start = parse_time_field(fields[1]);
    double end = parse_time_field(fields[2]);

    if (!have_rows) {
      epoch = start;
      initial = state;
      prev_end = 0.0;
    }
    start -= epoch;
    end -= epoch;
    if (end <= start)
      throw OverlapInLog("row ends at or before its start: '" + line + "'");
    if (have_rows) {
      if (start > prev_end)
        throw GapInLog("row starts after the previous row ended: '" + line + "'");
      if (start < prev_end)
        throw OverlapInLog("row starts before the previous row ended: '" + line + "'");
      if (state == prev_state) {
        if (!coalesce)
          throw NonAlternating("consecutive rows share state " +
                               to_string(state));
        durations.back() += end - start;
        prev_end = end;
        continue;
      }
    }
    durations.push_back(end - start);
    prev_state = state;
    prev_end = end;
    have_rows = true;
  }
  if (!have_rows) throw EmptyLog("no event rows");
  return UpDownSequence(initial, std::move(durations));
}

UpDownSequence parse_event_log_text(const std::string& text, bool coalesce) {
  std::istringstream in(text);
  return parse_event_log(in, coalesce);
}

std::string write_event_log(const UpDownSequence& seq) {
  std::string out = "state,start,end\n";
  double cursor = 0.0;
  for (std::size_t k = 0; k < seq.span_count(); ++k) {
    const double next = cursor + seq.durations()[k];
    out += to_string(seq.state_of_span(k));
    out += ',';
    out += format_double(cursor);
    out += ',';
    out += format_double(next);
    out += '\n';
    cursor = next;
  }
  return out;
}

// --- JSON report ----------------------------------------------------------

namespace {

using nlohmann::json;

json interval_to_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

Interval interval_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw BadFormat("interval must be a [lo,hi] array");
  return Interval{j[0].get<double>(), j[1].get<double>()};
}

json config_to_json(const SimConfig& c) {
  return json{{"process_time", c.process_time},
              {"utilization", c.utilization},
              {"max_budget", c.max_budget},
              {"min_sequences", c.min_sequences},
              {"min_scenarios", c.min_scenarios},
              {"alpha_scale", c.alpha_scale},
              {"ttest_alpha", c.ttest_alpha},
              {"paired_shuffle", c.paired_shuffle},
              {"utilization_basis", to_string(c.utilization_basis)}};
}

SimConfig config_from_json(const json& j) {
  SimConfig c;
  c.process_time = j.at("process_time").get<double>();
  c.utilization = j.at("utilization").get<double>();
  c.max_budget = j.at("max_budget").get<long>();
  c.min_sequences = j.at("min_sequences").get<int>();
  c.min_scenarios = j.at("min_scenarios").get<int>();
  c.alpha_scale = j.at("alpha_scale").get<double>();
  c.ttest_alpha = j.at("ttest_alpha").get<double>();
  c.paired_shuffle = j.at("paired_shuffle").get<bool>();
  c.utilization_basis =
      utilization_basis_from_string(j.at("utilization_basis").get<std::string>());
  return c;
}

}  // namespace

std::string write_report(const ExperimentReport& r) {
  json j;
  j["schema"] = "seqvar-report/1";
  j["master_seed"] = r.master_seed;
  j["scenario_fingerprint"] = r.scenario_fingerprint;
  j["runs_used"] = r.runs_used;
  j["mean_interarrival"] = r.mean_interarrival;
  j["horizon"] = r.horizon;
  j["config"] = config_to_json(r.config);
  j["effect"] = json{{"ct0_bar", r.effect.ct0_bar},
                     {"sigma0", r.effect.sigma0},
                     {"m", r.effect.m},
                     {"mu", r.effect.mu},
                     {"sigma", r.effect.sigma},
                     {"n", r.effect.n},
                     {"ct0_interval", interval_to_json(r.effect.ct0_interval)},
                     {"i95", interval_to_json(r.effect.i95)},
                     {"i95_inner", interval_to_json(r.effect.i95_inner)},
                     {"i95_outer", interval_to_json(r.effect.i95_outer)}};
  j["verdict"] = to_string(r.verdict);
  j["triplet"] = json{{"lower", r.triplet.lower},
                      {"nondiff", r.triplet.nondiff},
                      {"higher", r.triplet.higher}};
  j["normalized"] = json{{"ct0", r.normalized.ct0},
                         {"delta_pct", r.normalized.delta_pct},
                         {"i95_star", interval_to_json(r.normalized.i95_star)},
                         {"ct0_interval",
                          interval_to_json(r.normalized.ct0_interval)}};
  return j.dump(2) + "\n";
}

ExperimentReport parse_report(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw BadFormat(std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("schema").get<std::string>() != "seqvar-report/1")
      throw BadFormat("unsupported report schema");
    ExperimentReport r;
    r.master_seed = j.at("master_seed").get<std::uint64_t>();
    r.scenario_fingerprint = j.at("scenario_fingerprint").get<std::string>();
    r.runs_used = j.at("runs_used").get<long>();
    r.mean_interarrival = j.at("mean_interarrival").get<double>();
    r.horizon = j.at("horizon").get<double>();
    r.config = config_from_json(j.at("config"));
    const json& e = j.at("effect");
    r.effect.ct0_bar = e.at("ct0_bar").get<double>();
    r.effect.sigma0 = e.at("sigma0").get<double>();
    r.effect.m = e.at("m").get<int>();
    r.effect.mu = e.at("mu").get<double>();
    r.effect.sigma = e.at("sigma").get<double>();
    r.effect.n = e.at("n").get<int>();
    r.effect.ct0_interval = interval_from_json(e.at("ct0_interval"));
    r.effect.i95 = interval_from_json(e.at("i95"));
    r.effect.i95_inner = interval_from_json(e.at("i95_inner"));
    r.effect.i95_outer = interval_from_json(e.at("i95_outer"));
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    const json& t = j.at("triplet");
    r.triplet = TTestTriplet{t.at("lower").get<int>(), t.at("nondiff").get<int>(),
                             t.at("higher").get<int>()};
    const json& nz = j.at("normalized");
    r.normalized.ct0 = nz.at("ct0").get<double>();
    r.normalized.delta_pct = nz.at("delta_pct").get<double>();
    r.normalized.i95_star = interval_from_json(nz.at("i95_star"));
    r.normalized.ct0_interval = interval_from_json(nz.at("ct0_interval"));
    return r;
  } catch (const json::exception& e) {
    throw BadFormat(std::string("malformed report: ") + e.what());
  }
}

ExperimentReport normalize_report(ExperimentReport report) {
  const double mu = report.effect.mu;
  if (!(mu > 0.0)) throw ZeroMu("cannot normalize a report with mu <= 0");
  const double scale = 100.0 / mu;
  NormalizedSummary nz;
  nz.ct0 = report.effect.ct0_bar * scale;
  nz.delta_pct = nz.ct0 - 100.0;
  // The band actually compared against: the outer one when ct0_bar escaped
  // it, the inner one otherwise.
  const bool outside_outer = report.effect.ct0_bar < report.effect.i95_outer.lo ||
                             report.effect.ct0_bar > report.effect.i95_outer.hi;
  const Interval& star =
      outside_outer ? report.effect.i95_outer : report.effect.i95_inner;
  nz.i95_star = {star.lo * scale, star.hi * scale};
  nz.ct0_interval = {report.effect.ct0_interval.lo * scale,
                     report.effect.ct0_interval.hi * scale};
  report.normalized = nz;
  return report;
}

namespace {

json parse_json_or_throw(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw BadFormat(std::string(what) + ": " + e.what());
  }
}

}  // namespace

std::string write_sequence_json(const UpDownSequence& seq) {
  const json j{{"initial_state", to_string(seq.initial_state())},
               {"durations", seq.durations()},
               {"total_duration", seq.total_duration()},
               {"up_total", seq.up_total()}};
  return j.dump() + "\n";
}

UpDownSequence parse_sequence_json(const std::string& text) {
  const json j = parse_json_or_throw(text, "sequence");
  try {
    return UpDownSequence::restore(
        tool_state_from_string(j.at("initial_state").get<std::string>()),
        j.at("durations").get<std::vector<double>>(),
        j.at("total_duration").get<double>(), j.at("up_total").get<double>());
  } catch (const json::exception& e) {
    throw BadFormat(std::string("malformed sequence: ") + e.what());
  }
}

std::string write_scenario_json(const ArrivalScenario& scenario) {
  const json j{{"scenario_id", scenario.scenario_id()},
               {"seed", scenario.seed()},
               {"mean_interarrival", scenario.mean_interarrival()},
               {"horizon", scenario.horizon()}};
  return j.dump() + "\n";
}

ArrivalScenario parse_scenario_json(const std::string& text) {
  const json j = parse_json_or_throw(text, "scenario");
  try {
    return ArrivalScenario::generate(j.at("scenario_id").get<int>(),
                                     j.at("seed").get<std::uint64_t>(),
                                     j.at("mean_interarrival").get<double>(),
                                     j.at("horizon").get<double>());
  } catch (const json::exception& e) {
    throw BadFormat(std::string("malformed scenario: ") + e.what());
  }
}

std::string write_run_json(const RunResult& run) {
  const json j{{"sequence_id", run.sequence_id},
               {"scenario_id", run.scenario_id},
               {"mean_cycle_time", run.mean_cycle_time},
               {"agent_count", run.agent_count}};
  return j.dump() + "\n";
}

RunResult parse_run_json(const std::string& text) {
  const json j = parse_json_or_throw(text, "run result");
  try {
    return RunResult{j.at("sequence_id").get<int>(),
                     j.at("scenario_id").get<int>(),
                     j.at("mean_cycle_time").get<double>(),
                     j.at("agent_count").get<std::int64_t>()};
  } catch (const json::exception& e) {
    throw BadFormat(std::string("malformed run result: ") + e.what());
  }
}

// --- sweep CSV --------------------------------------------------------------

namespace {
constexpr const char* kSweepHeader =
    "utilization,mu,i95_lo,i95_hi,ct0,ct0_lo,ct0_hi,verdict";
}

std::string write_sweep(std::span<const SweepRow> rows) {
  std::string out = std::string(kSweepHeader) + "\n";
  for (const SweepRow& r : rows) {
    out += format_double(r.utilization);
    out += ',';
    out += format_double(r.mu);
    out += ',';
    out += format_double(r.i95.lo);
    out += ',';
    out += format_double(r.i95.hi);
    out += ',';
    out += format_double(r.ct0_bar);
    out += ',';
    out += format_double(r.ct0_interval.lo);
    out += ',';
    out += format_double(r.ct0_interval.hi);
    out += ',';
    out += to_string(r.verdict);
    out += '\n';
  }
  return out;
}

std::vector<SweepRow> parse_sweep(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string line;
  bool saw_header = false;
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trimmed(line).empty()) continue;
    if (!saw_header) {
      if (trimmed(line) != kSweepHeader)
        throw BadFormat("bad sweep header: '" + line + "'");
      saw_header = true;
      continue;
    }
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 8)
      throw BadFormat("sweep rows need 8 fields: '" + line + "'");
    SweepRow r;
    double vals[7];
    for (int k = 0; k < 7; ++k)
      if (!parse_decimal(f[k], vals[k]))
        throw BadFormat("bad number '" + f[k] + "' in sweep row");
    r.utilization = vals[0];
    r.mu = vals[1];
    r.i95 = {vals[2], vals[3]};
    r.ct0_bar = vals[4];
    r.ct0_interval = {vals[5], vals[6]};
    r.verdict = verdict_from_string(f[7]);
    rows.push_back(r);
  }
  if (!saw_header) throw BadFormat("sweep CSV has no header");
  return rows;
}

std::string report_summary_line(const ExperimentReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "CT0=%.4g dCT0=%+.3g%% I95*=[%.4g,%.4g] [CT0]=[%.4g,%.4g] "
                "s=%s triplet=(%d-%d-%d) runs=%ld verdict=%s",
                r.normalized.ct0, r.normalized.delta_pct,
                r.normalized.i95_star.lo, r.normalized.i95_star.hi,
                r.normalized.ct0_interval.lo, r.normalized.ct0_interval.hi,
                verdict_flag(r.verdict).c_str(), r.triplet.lower,
                r.triplet.nondiff, r.triplet.higher, r.runs_used,
                to_string(r.verdict).c_str());
  return buf;
}

}  // namespace seqvar
