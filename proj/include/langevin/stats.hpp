#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "langevin/types.hpp"

namespace langevin::stats {

// Standard normal CDF.
double normal_cdf(double x);

// Regularized incomplete beta function I_x(a, b).
double betainc_reg(double a, double b, double x);

// Regularized upper incomplete gamma function Q(a, x).
double gammainc_upper_reg(double a, double x);

// One-sided upper confidence bound on a binomial proportion at the given
// confidence level (Clopper–Pearson): smallest p that would put `successes`
// or fewer in its lower tail with probability 1 - level.
double clopper_pearson_upper(std::int64_t successes, std::int64_t trials,
                             double level = 0.99);

// Two-sided Kolmogorov–Smirnov statistic of `samples` against the CDF.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// log(sum(exp(v))) without overflow.
double log_sum_exp(std::span<const double> v);

double mean(std::span<const double> v);
double variance(std::span<const double> v);  // unbiased, two-pass

// Standard error of a statistic under nonparametric bootstrap resampling.
// Deterministic for a given seed; n_resamples defaults to 200.
double bootstrap_se(std::span<const double> values,
                    const std::function<double(std::span<const double>)>& statistic,
                    std::uint64_t seed, int n_resamples = 200);

}  // namespace langevin::stats
