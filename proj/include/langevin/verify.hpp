#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "langevin/bounds.hpp"
#include "langevin/sampler.hpp"

namespace langevin::verify {

// Tail confrontation: theoretical radius vs empirical exceedance frequency,
// one row per target probability delta.
struct TailReport {
  std::vector<double> deltas;
  std::vector<double> radii;
  std::vector<double> empirical_p;
  std::vector<double> ci_upper;  // one-sided 99% Clopper-Pearson upper bound
  std::vector<bool> verdicts;    // PASS iff ci_upper <= delta
  std::string caveat;            // non-empty when stationarity is assumed, not certified
  bool all_pass() const;
};

// Checks P[|X - x*| >= radius(delta)] <= delta for each delta. The bound is
// one-sided, so empirical tails far below delta still PASS. radius_scale
// shrinks every radius by a common factor; values well below 1 turn the test
// into a sensitivity demonstration (the scaled "envelope" should FAIL).
// Requires one record per chain (independent draws) and
// N >= 10 / min(deltas).
TailReport check_tail(const sampler::SampleEnsemble& ens,
                      const bounds::ConcentrationEnvelope& env,
                      const std::vector<double>& deltas,
                      double radius_scale = 1.0);

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;  // 1.63 / sqrt(N), 1% asymptotic level
  bool pass = false;
};

// Kolmogorov-Smirnov test of a d=1 quadratic ensemble against its exactly
// known stationary law N(x*, 2 eta / (1 - c^2)).
KsResult ks_check_1d_quadratic(const sampler::SampleEnsemble& ens, double rho);

struct MgfResult {
  double empirical_log_mean = 0.0;
  double log_bound = 0.0;
  double bootstrap_se = 0.0;       // of the log-mean, 200 resamples
  std::uint64_t bootstrap_seed = 0;
  bool pass = false;  // empirical <= bound + 3 se
};

// Empirical log E[Phi_{d,lambda}(X - x*)] via log-sum-exp, compared against a
// theoretical log-bound (stationary_mgf_bound_sc or _convex).
MgfResult check_stationary_mgf(const sampler::SampleEnsemble& ens, double lambda,
                               double log_bound);

// Direct numerical sweep of the per-step inequalities behind the envelopes:
// contraction (m > 0), non-expansiveness (m = 0), drift progress for
// huber-like potentials past r1, and the interpolation bound
// log phi(c z) <= c log phi(z). Points are Gaussian (sd 5) plus deterministic
// radial extremes at radii 1e-3..1e3.
struct SweepReport {
  struct Entry {
    std::string name;
    double max_violation = 0.0;  // relative; negative means slack everywhere
    std::int64_t n_points = 0;
  };
  std::vector<Entry> entries;
  std::uint64_t seed = 0;
  bool pass = false;  // all violations <= 1e-10
};

SweepReport sweep_lemma_inequalities(const potential::PotentialSpec& p, double eta,
                                     std::int64_t n_points, std::uint64_t seed);

}  // namespace langevin::verify
