#include "seqvar/stats.hpp"

#include <algorithm>
#include <cmath>

namespace seqvar {

double sample_mean(std::span<const double> values) {
  if (values.empty()) throw TooFewSamples("mean of an empty sample");
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw TooFewSamples("std-dev needs at least 2 values");
  const double m = sample_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

EffectOfS0 effect_of_s0(std::span<const double> ct0_by_scenario,
                        double alpha_scale) {
  const std::size_t m = ct0_by_scenario.size();
  if (m < 2) throw TooFewSamples("effect_of_s0 needs at least 2 scenarios");
  EffectOfS0 out;
  out.ct0_bar = sample_mean(ct0_by_scenario);
  out.sigma0 = sample_stddev(ct0_by_scenario);
  const double half = alpha_scale * out.sigma0 / std::sqrt(static_cast<double>(m));
  out.ct0_interval = {out.ct0_bar - half, out.ct0_bar + half};
  return out;
}

IidBand iid_band(std::span<const double> ct_bars, double alpha_scale) {
  const std::size_t n = ct_bars.size();
  if (n < 2) throw TooFewSamples("iid_band needs at least 2 sequences");
  IidBand out;
  out.mu = sample_mean(ct_bars);
  out.sigma = sample_stddev(ct_bars);
  const double half = alpha_scale * out.sigma;
  const double err = out.sigma / std::sqrt(static_cast<double>(n)) +
                     alpha_scale * out.sigma /
                         std::sqrt(2.0 * static_cast<double>(n - 1));
  const double inner_half = std::max(0.0, half - err);
  out.i95 = {out.mu - half, out.mu + half};
  out.i95_inner = {out.mu - inner_half, out.mu + inner_half};
  out.i95_outer = {out.mu - (half + err), out.mu + (half + err)};
  return out;
}

Verdict classify(const Interval& ct0_interval, const Interval& i95_inner,
                 const Interval& i95_outer) {
  for (const Interval* iv : {&ct0_interval, &i95_inner, &i95_outer})
    if (!(iv->lo <= iv->hi)) throw MalformedInterval("interval with lo > hi");
  if (ct0_interval.entirely_below(i95_outer.lo))
    return Verdict::SIGNIFICANT_NEGATIVE;
  if (ct0_interval.entirely_above(i95_outer.hi))
    return Verdict::SIGNIFICANT_POSITIVE;
  if (i95_inner.contains(ct0_interval)) return Verdict::NOT_SIGNIFICANT;
  return Verdict::UNDECIDED;
}

TTestTriplet ttest_triplet(const std::vector<std::vector<double>>& populations,
                           std::span<const double> ct0_values, double alpha) {
  if (populations.size() != ct0_values.size())
    throw TooFewSamples("one population per scenario required");
  if (populations.empty()) throw TooFewSamples("no scenarios to test");

  TTestTriplet triplet;
  double cached_crit = -1.0;
  std::size_t cached_n = 0;
  for (std::size_t j = 0; j < populations.size(); ++j) {
    const std::vector<double>& pop = populations[j];
    const std::size_t n = pop.size();
    if (n < 2) throw TooFewSamples("population needs at least 2 values");
    const double mean = sample_mean(pop);
    const double s = sample_stddev(pop);
    const double ct0 = ct0_values[j];
    if (s == 0.0) {
      // Degenerate population: all permutation runs coincided.
      if (ct0 == mean)
        ++triplet.nondiff;
      else if (ct0 > mean)
        ++triplet.higher;
      else
        ++triplet.lower;
      continue;
    }
    if (n != cached_n) {
      cached_crit = student_t_critical(static_cast<double>(n - 1), alpha);
      cached_n = n;
    }
    const double t = (ct0 - mean) / (s / std::sqrt(static_cast<double>(n)));
    if (t > cached_crit)
      ++triplet.higher;
    else if (t < -cached_crit)
      ++triplet.lower;
    else
      ++triplet.nondiff;
  }
  return triplet;
}

double family_false_positive(int num_tests, int threshold, double p) {
  if (num_tests < 0 || threshold < 0 || threshold > num_tests)
    throw Error("need 0 <= threshold <= num_tests");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("p must be in [0,1]");
  if (threshold == 0) return 1.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  const double q = 1.0 - p;
  // First term C(N,k) p^k q^(N-k), then the pmf recurrence upward.
  double binom = 1.0;
  for (int i = 1; i <= threshold; ++i)
    binom *= static_cast<double>(num_tests - threshold + i) / i;
  double term = binom * std::pow(p, threshold) * std::pow(q, num_tests - threshold);
  double sum = term;
  for (int i = threshold; i < num_tests; ++i) {
    term *= (static_cast<double>(num_tests - i) / (i + 1)) * (p / q);
    sum += term;
  }
  return std::min(sum, 1.0);
}

// --- Student t ----------------------------------------------------------

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw Error("incomplete beta needs a, b > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw Error("t distribution needs df > 0");
  const double x = df / (df + t * t);
  const double half_tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? 1.0 - half_tail : half_tail;
}

double student_t_critical(double df, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must be in (0,1)");
  const double target = 1.0 - alpha / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  while (student_t_cdf(hi, df) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, df) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace seqvar
