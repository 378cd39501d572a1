#pragma once

#include <span>
#include <vector>

#include "seqvar/model.hpp"

// Estimators, confidence bands, verdict classification, and the per-scenario
// t-tests. Standard deviations are sample estimates (divisor n-1) throughout.

namespace seqvar {

double sample_mean(std::span<const double> values);
double sample_stddev(std::span<const double> values);  // needs >= 2 values

struct EffectOfS0 {
  double ct0_bar = 0.0;
  double sigma0 = 0.0;
  Interval ct0_interval;  // ct0_bar -+ alpha_scale*sigma0/sqrt(m)
};

EffectOfS0 effect_of_s0(std::span<const double> ct0_by_scenario,
                        double alpha_scale = 2.0);

struct IidBand {
  double mu = 0.0;
  double sigma = 0.0;
  Interval i95;        // mu -+ alpha_scale*sigma
  Interval i95_inner;  // shrunk by the band's estimation error
  Interval i95_outer;  // widened by it
};

// The estimation error of the band edge combines one standard error of the
// mean (sigma/sqrt(n)) and alpha_scale standard errors of the std-dev
// (sigma/sqrt(2(n-1))). For very small n the inner band would invert; it is
// clamped to the point {mu}.
IidBand iid_band(std::span<const double> ct_bars, double alpha_scale = 2.0);

// Three-way comparison of the tested sequence's uncertainty interval against
// the nested i.i.d. bands: decisively outside the outer band, decisively
// inside the inner band, or undecided.
Verdict classify(const Interval& ct0_interval, const Interval& i95_inner,
                 const Interval& i95_outer);

// Per-scenario two-sided one-sample t-test of H0: the permutation population
// of scenario j has mean CT0_j. Counts scenarios where CT0_j was
// significantly smaller / indistinguishable / significantly higher.
TTestTriplet ttest_triplet(const std::vector<std::vector<double>>& populations,
                           std::span<const double> ct0_values,
                           double alpha = 0.05);

// Exact binomial upper tail P(X >= threshold), X ~ Binomial(num_tests, p),
// by direct summation. The chance of seeing that many positives by luck.
double family_false_positive(int num_tests, int threshold, double p);

// Student t machinery (regularized incomplete beta under the hood).
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
// Two-sided critical value: F^{-1}(1 - alpha/2).
double student_t_critical(double df, double alpha);

}  // namespace seqvar
