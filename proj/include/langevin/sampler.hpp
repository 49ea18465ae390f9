#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "langevin/errors.hpp"
#include "langevin/potential.hpp"
#include "langevin/types.hpp"

namespace langevin::sampler {

struct ChainConfig {
  double eta = 0.0;
  int dim = 0;
  std::int64_t n_chains = 1;
  std::int64_t burn_in = 0;
  std::int64_t record_every = 1;
  std::int64_t records_per_chain = 1;
  std::uint64_t seed = 0;
  std::optional<Vec> init;  // starting point; defaults to the minimizer
};

struct SampleEnsemble {
  // Row chain * records_per_chain + record holds one recorded state.
  Mat samples;
  ChainConfig config;
  potential::PotentialSpec potential;
  std::string potential_digest;
  bool exact_oracle = false;  // true when drawn from the closed-form law
};

// One deterministic gradient-descent step x - eta grad f(x).
Vec gd_step(const potential::PotentialSpec& p, const Eigen::Ref<const Vec>& x,
            double eta);

// One chain transition: gd_step plus sqrt(2 eta) times the supplied
// standard-normal vector.
Vec step(const potential::PotentialSpec& p, const Eigen::Ref<const Vec>& x,
         double eta, const Eigen::Ref<const Vec>& noise);

// Runs cfg.n_chains independent chains. Chain i draws from an RNG stream
// derived from (cfg.seed, i), so the ensemble is bit-reproducible for a given
// seed no matter how many threads execute it (n_threads = 0 picks the
// hardware count). The state after burn_in steps is the first record; each
// subsequent record follows record_every further steps.
// Throws DivergenceError naming chain and iteration if a state goes
// non-finite (step size too large or potential misdeclared).
SampleEnsemble run_ensemble(const potential::PotentialSpec& p,
                            const ChainConfig& cfg, int n_threads = 0);

// Burn-in driving the geometric initialization bias below 1e-12: with
// per-step contraction c, returns ceil(log(1e12) / (-log c)). Requires
// strong convexity; m = 0 gives no rate, so the caller must choose burn_in
// (BurnInUnavailableError).
std::int64_t default_burn_in(const potential::PotentialSpec& p, double eta);

// Draws cfg.n_chains * cfg.records_per_chain independent samples from the
// exact stationary law of the quadratic chain (coordinate-wise
// N(x*_j, 2 eta / (1 - c_j^2)) with c_j = |1 - eta rho_j|), bypassing the
// sampler entirely. Separates envelope errors from sampling errors in tests.
SampleEnsemble exact_quadratic_stationary_ensemble(
    const potential::PotentialSpec& p, const ChainConfig& cfg);

}  // namespace langevin::sampler
