#include "seqvar/sequences.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace seqvar {

namespace {

void fisher_yates(std::vector<double>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.below(i)]);
}

// Rebuilds a span vector by parity from the two phase vectors.
std::vector<double> interleave(const std::vector<double>& phase0,
                               const std::vector<double>& phase1) {
  std::vector<double> out(phase0.size() + phase1.size());
  for (std::size_t k = 0; k < phase0.size(); ++k) out[2 * k] = phase0[k];
  for (std::size_t k = 0; k < phase1.size(); ++k) out[2 * k + 1] = phase1[k];
  return out;
}

}  // namespace

UpDownSequence shuffle(const UpDownSequence& seq, std::uint64_t seed,
                       bool paired) {
  Rng rng(seed);
  const std::vector<double>& dur = seq.durations();

  if (paired) {
    // Permute (span 2k, span 2k+1) couples jointly; a trailing unpaired
    // span keeps its place at the end.
    const std::size_t pairs = dur.size() / 2;
    std::vector<std::size_t> order(pairs);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = pairs; i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);
    std::vector<double> out;
    out.reserve(dur.size());
    for (std::size_t p : order) {
      out.push_back(dur[2 * p]);
      out.push_back(dur[2 * p + 1]);
    }
    if (dur.size() % 2 != 0) out.push_back(dur.back());
    return seq.reordered(std::move(out));
  }

  // Independent uniform permutation of each phase, even spans first.
  std::vector<double> phase0, phase1;
  for (std::size_t k = 0; k < dur.size(); ++k)
    (k % 2 == 0 ? phase0 : phase1).push_back(dur[k]);
  fisher_yates(phase0, rng);
  fisher_yates(phase1, rng);
  return seq.reordered(interleave(phase0, phase1));
}

// --- duration laws -----------------------------------------------------

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(text.substr(start));
      return out;
    }
    out.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_number(const std::string& s) {
  if (s.empty()) throw InvalidLawParams("empty number in law spec");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(v))
    throw InvalidLawParams("bad number in law spec: '" + s + "'");
  return v;
}

void validate_law(const DistSpec& law) {
  switch (law.kind) {
    case DistSpec::Kind::Exponential:
      if (!(law.a > 0.0)) throw InvalidLawParams("exp mean must be > 0");
      break;
    case DistSpec::Kind::Lognormal:
      if (!(law.a > 0.0) || !(law.b >= 0.0))
        throw InvalidLawParams("lognorm needs median > 0 and shape >= 0");
      break;
    case DistSpec::Kind::Fixed:
      if (!(law.a > 0.0)) throw InvalidLawParams("fixed value must be > 0");
      break;
  }
}

// Parses one law from a colon-token stream starting at pos. The first token
// is the law name, optionally fused with its first parameter ("exp0.5");
// remaining parameters come from the following tokens.
DistSpec parse_law_tokens(const std::vector<std::string>& tokens,
                          std::size_t& pos) {
  if (pos >= tokens.size()) throw InvalidLawParams("missing law spec");
  const std::string& head = tokens[pos++];
  std::size_t name_len = 0;
  while (name_len < head.size() &&
         std::isalpha(static_cast<unsigned char>(head[name_len])))
    ++name_len;
  const std::string name = head.substr(0, name_len);

  DistSpec law;
  std::size_t arity = 0;
  if (name == "exp") {
    law.kind = DistSpec::Kind::Exponential;
    arity = 1;
  } else if (name == "lognorm") {
    law.kind = DistSpec::Kind::Lognormal;
    arity = 2;
  } else if (name == "fixed") {
    law.kind = DistSpec::Kind::Fixed;
    arity = 1;
  } else {
    throw InvalidLawParams("unknown law '" + name + "'");
  }

  std::vector<double> params;
  if (name_len < head.size()) {
    for (const std::string& piece : split(head.substr(name_len), ','))
      params.push_back(parse_number(piece));
  }
  while (params.size() < arity) {
    if (pos >= tokens.size())
      throw InvalidLawParams("law '" + name + "' needs more parameters");
    params.push_back(parse_number(tokens[pos++]));
  }
  if (params.size() != arity)
    throw InvalidLawParams("law '" + name + "' takes " +
                           std::to_string(arity) + " parameter(s)");
  law.a = params[0];
  if (arity > 1) law.b = params[1];
  validate_law(law);
  return law;
}

}  // namespace

DistSpec DistSpec::parse(std::string_view text) {
  const std::vector<std::string> tokens = split(text, ':');
  std::size_t pos = 0;
  DistSpec law = parse_law_tokens(tokens, pos);
  if (pos != tokens.size())
    throw InvalidLawParams("trailing tokens in law spec: '" +
                           std::string(text) + "'");
  return law;
}

double DistSpec::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Exponential: return rng.exponential(a);
    case Kind::Lognormal: return rng.lognormal(a, b);
    case Kind::Fixed: return a;
  }
  return a;
}

std::string DistSpec::to_string() const {
  char buf[64];
  switch (kind) {
    case Kind::Exponential: std::snprintf(buf, sizeof buf, "exp:%.17g", a); break;
    case Kind::Lognormal:
      std::snprintf(buf, sizeof buf, "lognorm:%.17g:%.17g", a, b);
      break;
    case Kind::Fixed: std::snprintf(buf, sizeof buf, "fixed:%.17g", a); break;
  }
  return buf;
}

// --- generators ---------------------------------------------------------

namespace {

// Constructs the sequence and pins its cached total to the horizon; the last
// span absorbs the (at most ulp-sized) summation residue.
UpDownSequence with_exact_horizon(ToolState initial, std::vector<double> durs,
                                  double horizon) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    UpDownSequence seq(initial, durs);
    if (seq.total_duration() == horizon) return seq;
    durs.back() += horizon - seq.total_duration();
    if (!(durs.back() > 0.0))
      throw InvalidLawParams("horizon too short for the final span");
  }
  throw Error("could not pin sequence total to the horizon");
}

}  // namespace

UpDownSequence gen_iid(const DistSpec& up_law, const DistSpec& down_law,
                       double horizon, std::uint64_t seed) {
  validate_law(up_law);
  validate_law(down_law);
  if (!(horizon > 0.0)) throw InvalidLawParams("horizon must be > 0");

  Rng rng(seed);
  std::vector<double> durs;
  double cum = 0.0;
  bool up = true;
  for (;;) {
    const double draw = (up ? up_law : down_law).sample(rng);
    if (cum + draw >= horizon) {
      durs.push_back(horizon - cum);
      break;
    }
    durs.push_back(draw);
    cum += draw;
    up = !up;
  }
  return with_exact_horizon(ToolState::UP, std::move(durs), horizon);
}

std::vector<double> autocorrelate_downs(const std::vector<double>& draws,
                                        int block_size) {
  if (block_size < 1) throw InvalidLawParams("block_size must be >= 1");
  const std::size_t k = draws.size();
  if (k <= 1) return draws;

  // Stable value sort, remembering where each draw came from.
  std::vector<std::size_t> by_value(k);
  std::iota(by_value.begin(), by_value.end(), std::size_t{0});
  std::stable_sort(by_value.begin(), by_value.end(),
                   [&](std::size_t a, std::size_t b) {
                     return draws[a] < draws[b];
                   });

  // Cut the sorted order into blocks and replay the blocks in the order
  // their earliest member was drawn.
  const std::size_t bs = static_cast<std::size_t>(block_size);
  const std::size_t n_blocks = (k + bs - 1) / bs;
  std::vector<std::size_t> block_order(n_blocks);
  std::iota(block_order.begin(), block_order.end(), std::size_t{0});
  auto first_drawn = [&](std::size_t blk) {
    std::size_t lo = k;
    for (std::size_t i = blk * bs; i < std::min(k, (blk + 1) * bs); ++i)
      lo = std::min(lo, by_value[i]);
    return lo;
  };
  std::sort(block_order.begin(), block_order.end(),
            [&](std::size_t a, std::size_t b) {
              return first_drawn(a) < first_drawn(b);
            });

  std::vector<double> out;
  out.reserve(k);
  for (std::size_t blk : block_order)
    for (std::size_t i = blk * bs; i < std::min(k, (blk + 1) * bs); ++i)
      out.push_back(draws[by_value[i]]);
  return out;
}

UpDownSequence gen_autocorrelated(const DistSpec& up_law,
                                  const DistSpec& down_law, int block_size,
                                  double horizon, std::uint64_t seed) {
  if (block_size < 1) throw InvalidLawParams("block_size must be >= 1");
  const UpDownSequence base = gen_iid(up_law, down_law, horizon, seed);
  const std::vector<double> downs = base.durations_of(ToolState::DOWN);
  const std::vector<double> rearranged = autocorrelate_downs(downs, block_size);

  std::vector<double> durs = base.durations();
  std::size_t next_down = 0;
  for (std::size_t k = 1; k < durs.size(); k += 2) durs[k] = rearranged[next_down++];
  return base.reordered(std::move(durs));
}

UpDownSequence gen_periodic_maintenance(double period, double maint_duration,
                                        const DistSpec& noise_down_law,
                                        double noise_rate, double horizon,
                                        std::uint64_t seed) {
  if (!(maint_duration > 0.0) || !(period > maint_duration))
    throw InvalidLawParams("need period > maint_duration > 0");
  if (!(horizon > 0.0)) throw InvalidLawParams("horizon must be > 0");
  if (!(noise_rate >= 0.0)) throw InvalidLawParams("noise_rate must be >= 0");
  if (noise_rate > 0.0) validate_law(noise_down_law);

  struct Down {
    double start, end;
  };
  std::vector<Down> downs;

  // Maintenance at the end of every full period inside the horizon.
  for (long k = 1; static_cast<double>(k) * period - maint_duration < horizon; ++k) {
    const double end = static_cast<double>(k) * period;
    downs.push_back({end - maint_duration, std::min(end, horizon)});
  }

  // Random failures as a Poisson process with per-event durations.
  if (noise_rate > 0.0) {
    Rng rng(seed);
    double t = 0.0;
    for (;;) {
      t += rng.exponential(1.0 / noise_rate);
      if (!(t < horizon)) break;
      const double d = noise_down_law.sample(rng);
      downs.push_back({t, std::min(t + d, horizon)});
    }
  }

  std::sort(downs.begin(), downs.end(),
            [](const Down& a, const Down& b) { return a.start < b.start; });
  std::vector<Down> merged;
  for (const Down& d : downs) {
    if (!merged.empty() && d.start <= merged.back().end)
      merged.back().end = std::max(merged.back().end, d.end);
    else
      merged.push_back(d);
  }

  std::vector<double> durs;
  ToolState initial = ToolState::UP;
  double cursor = 0.0;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (i == 0 && merged[0].start <= 0.0) {
      initial = ToolState::DOWN;
    } else {
      durs.push_back(merged[i].start - cursor);
    }
    durs.push_back(merged[i].end - merged[i].start);
    cursor = merged[i].end;
  }
  if (cursor < horizon) durs.push_back(horizon - cursor);
  if (durs.empty()) durs.push_back(horizon);  // no downs at all

  return with_exact_horizon(initial, std::move(durs), horizon);
}

UpDownSequence gen_from_spec(std::string_view spec, double horizon,
                             std::uint64_t seed) {
  const std::vector<std::string> tokens = split(spec, ':');
  if (tokens.empty() || tokens[0].empty())
    throw InvalidLawParams("empty generator spec");
  const std::string& kind = tokens[0];
  std::size_t pos = 1;

  auto expect_end = [&] {
    if (pos != tokens.size())
      throw InvalidLawParams("trailing tokens in generator spec: '" +
                             std::string(spec) + "'");
  };
  auto next_number = [&]() -> double {
    if (pos >= tokens.size())
      throw InvalidLawParams("generator spec '" + kind + "' is incomplete");
    return parse_number(tokens[pos++]);
  };

  if (kind == "iid") {
    const DistSpec up = parse_law_tokens(tokens, pos);
    const DistSpec down = parse_law_tokens(tokens, pos);
    expect_end();
    return gen_iid(up, down, horizon, seed);
  }
  if (kind == "autocorr") {
    const DistSpec up = parse_law_tokens(tokens, pos);
    const DistSpec down = parse_law_tokens(tokens, pos);
    const double block = next_number();
    expect_end();
    if (block < 1.0 || block != std::floor(block))
      throw InvalidLawParams("block size must be a positive integer");
    return gen_autocorrelated(up, down, static_cast<int>(block), horizon, seed);
  }
  if (kind == "periodic") {
    const double period = next_number();
    const double maint = next_number();
    const DistSpec noise = parse_law_tokens(tokens, pos);
    const double rate = next_number();
    expect_end();
    return gen_periodic_maintenance(period, maint, noise, rate, horizon, seed);
  }
  throw InvalidLawParams("unknown generator '" + kind +
                         "' (expected iid, autocorr, or periodic)");
}

}  // namespace seqvar
