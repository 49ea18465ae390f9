#include "langevin/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "langevin/errors.hpp"
#include "langevin/rng.hpp"

namespace langevin::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
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
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error("betainc_reg: continued fraction failed to converge");
}

}  // namespace

double betainc_reg(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("betainc_reg: a, b must be positive");
  if (x < 0.0 || x > 1.0) throw DomainError("betainc_reg: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
  // Use the representation that converges fast on each side of the mean.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double gammainc_upper_reg(double a, double x) {
  if (!(a > 0.0)) throw DomainError("gammainc_upper_reg: a must be positive");
  if (x < 0.0) throw DomainError("gammainc_upper_reg: x must be >= 0");
  if (x == 0.0) return 1.0;
  const double lg = std::lgamma(a);
  if (x < a + 1.0) {
    // Lower series, then complement.
    double ap = a, sum = 1.0 / a, del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 3e-16)
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    throw Error("gammainc_upper_reg: series failed to converge");
  }
  // Upper continued fraction (modified Lentz).
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / kTiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 3e-16)
      return h * std::exp(-x + a * std::log(x) - lg);
  }
  throw Error("gammainc_upper_reg: continued fraction failed to converge");
}

double clopper_pearson_upper(std::int64_t successes, std::int64_t trials, double level) {
  if (trials <= 0) throw DomainError("clopper_pearson_upper: trials must be positive");
  if (successes < 0 || successes > trials)
    throw DomainError("clopper_pearson_upper: successes out of range");
  if (!(level > 0.0 && level < 1.0))
    throw DomainError("clopper_pearson_upper: level must lie in (0, 1)");
  if (successes == trials) return 1.0;
  // Upper bound solves I_p(k+1, n-k) = level; I_p is increasing in p.
  const double a = static_cast<double>(successes) + 1.0;
  const double b = static_cast<double>(trials - successes);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (betainc_reg(a, b, mid) < level)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max((static_cast<double>(i) + 1.0) / n - f,
                             f - static_cast<double>(i) / n));
  }
  return d;
}

double log_sum_exp(std::span<const double> v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;  // all -inf, or a stray inf dominates
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double mean(std::span<const double> v) {
  if (v.empty()) throw DomainError("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double variance(std::span<const double> v) {
  if (v.size() < 2) throw DomainError("variance: need at least two values");
  const double mu = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return s / static_cast<double>(v.size() - 1);
}

double bootstrap_se(std::span<const double> values,
                    const std::function<double(std::span<const double>)>& statistic,
                    std::uint64_t seed, int n_resamples) {
  if (values.size() < 2) throw DomainError("bootstrap_se: need at least two values");
  if (n_resamples < 2) throw DomainError("bootstrap_se: need at least two resamples");
  rng::Stream rs(seed, 0, rng::Domain::bootstrap);
  const std::size_t n = values.size();
  std::vector<double> resample(n), stats(static_cast<std::size_t>(n_resamples));
  for (int b = 0; b < n_resamples; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      // Index by rejection-free scaling of a 53-bit uniform.
      const std::size_t j = static_cast<std::size_t>(rs.uniform() * static_cast<double>(n));
      resample[i] = values[j < n ? j : n - 1];
    }
    stats[static_cast<std::size_t>(b)] = statistic(resample);
  }
  return std::sqrt(variance(stats));
}

}  // namespace langevin::stats
