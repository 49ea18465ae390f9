#include "langevin/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "langevin/bounds.hpp"
#include "langevin/rng.hpp"

namespace langevin::sampler {

namespace {

struct ChainFailure {
  bool failed = false;
  std::int64_t chain = 0;
  std::int64_t iteration = 0;
};

// Scalar kernels keep the d=1 hot loop free of Eigen temporaries; they draw
// exactly one normal per step, matching the generic path's per-step
// consumption, so kernel choice never changes the bit stream.
template <typename Drift>
void run_chain_scalar(Drift&& drift, const ChainConfig& cfg, std::int64_t chain,
                      double x0, Mat& out, ChainFailure& fail) {
  rng::Stream rs(cfg.seed, static_cast<std::uint64_t>(chain), rng::Domain::chains);
  const double s = std::sqrt(2.0 * cfg.eta);
  double x = x0;
  std::int64_t it = 0;
  for (std::int64_t rec = 0; rec < cfg.records_per_chain; ++rec) {
    const std::int64_t steps = rec == 0 ? cfg.burn_in : cfg.record_every;
    for (std::int64_t t = 0; t < steps; ++t) {
      x = drift(x) + s * rs.normal();
      ++it;
      if (!std::isfinite(x)) {
        fail = {true, chain, it};
        return;
      }
    }
    out(chain * cfg.records_per_chain + rec, 0) = x;
  }
}

void run_chain_generic(const potential::PotentialSpec& p, const ChainConfig& cfg,
                       std::int64_t chain, const Vec& x0, Mat& out,
                       ChainFailure& fail) {
  rng::Stream rs(cfg.seed, static_cast<std::uint64_t>(chain), rng::Domain::chains);
  const double s = std::sqrt(2.0 * cfg.eta);
  const double b2 = p.huber_beta * p.huber_beta;
  Vec x = x0, z(p.dim);
  std::int64_t it = 0;
  for (std::int64_t rec = 0; rec < cfg.records_per_chain; ++rec) {
    const std::int64_t steps = rec == 0 ? cfg.burn_in : cfg.record_every;
    for (std::int64_t t = 0; t < steps; ++t) {
      rs.fill_normal(z);
      switch (p.kind) {
        case potential::Kind::Quadratic:
          x -= cfg.eta * p.curvatures.cwiseProduct(x - p.minimizer);
          break;
        case potential::Kind::HuberLike: {
          const double r = x.norm();
          x *= 1.0 - cfg.eta * (r <= 1.0 ? b2 : p.huber_beta / r);
          break;
        }
        case potential::Kind::Custom:
          x -= cfg.eta * p.custom_grad(x);
          break;
      }
      x += s * z;
      ++it;
      if (!x.allFinite()) {
        fail = {true, chain, it};
        return;
      }
    }
    out.row(chain * cfg.records_per_chain + rec) = x;
  }
}

void run_block(const potential::PotentialSpec& p, const ChainConfig& cfg,
               std::int64_t lo, std::int64_t hi, const Vec& x0, Mat& out,
               ChainFailure& fail) {
  for (std::int64_t chain = lo; chain < hi; ++chain) {
    if (p.dim == 1 && p.kind == potential::Kind::Quadratic) {
      const double a = 1.0 - cfg.eta * p.curvatures[0];
      const double xstar = p.minimizer[0];
      run_chain_scalar([=](double x) { return xstar + a * (x - xstar); }, cfg,
                       chain, x0[0], out, fail);
    } else if (p.dim == 1 && p.kind == potential::Kind::HuberLike) {
      const double beta = p.huber_beta, b2 = beta * beta, eta = cfg.eta;
      run_chain_scalar(
          [=](double x) {
            const double g = std::abs(x) <= 1.0 ? b2 * x : std::copysign(beta, x);
            return x - eta * g;
          },
          cfg, chain, x0[0], out, fail);
    } else {
      run_chain_generic(p, cfg, chain, x0, out, fail);
    }
    if (fail.failed) return;
  }
}

Vec resolve_init(const potential::PotentialSpec& p, const ChainConfig& cfg) {
  if (!cfg.init) return p.minimizer;
  if (cfg.init->size() != p.dim)
    throw DimensionError("run_ensemble: init point dimension mismatch");
  return *cfg.init;
}

void validate_config(const potential::PotentialSpec& p, const ChainConfig& cfg) {
  if (cfg.dim != p.dim)
    throw DimensionError("run_ensemble: config dimension does not match potential");
  if (!(cfg.eta > 0.0)) throw InvalidParameterError("run_ensemble: need eta > 0");
  if (!(cfg.eta < 2.0 / p.M))
    throw InvalidParameterError(
        "run_ensemble: eta must satisfy eta < 2/M; larger steps are transient");
  if (cfg.n_chains < 1) throw InvalidParameterError("run_ensemble: need n_chains >= 1");
  if (cfg.burn_in < 0) throw InvalidParameterError("run_ensemble: need burn_in >= 0");
  if (cfg.record_every < 1)
    throw InvalidParameterError("run_ensemble: need record_every >= 1");
  if (cfg.records_per_chain < 1)
    throw InvalidParameterError("run_ensemble: need records_per_chain >= 1");
}

}  // namespace

Vec gd_step(const potential::PotentialSpec& p, const Eigen::Ref<const Vec>& x,
            double eta) {
  return x - eta * potential::grad(p, x);
}

Vec step(const potential::PotentialSpec& p, const Eigen::Ref<const Vec>& x,
         double eta, const Eigen::Ref<const Vec>& noise) {
  if (noise.size() != x.size())
    throw DimensionError("step: noise dimension does not match state");
  return gd_step(p, x, eta) + std::sqrt(2.0 * eta) * noise;
}

SampleEnsemble run_ensemble(const potential::PotentialSpec& p,
                            const ChainConfig& cfg, int n_threads) {
  validate_config(p, cfg);
  const Vec x0 = resolve_init(p, cfg);

  SampleEnsemble ens;
  ens.config = cfg;
  ens.potential = p;
  ens.potential_digest = p.digest();
  ens.samples.resize(cfg.n_chains * cfg.records_per_chain, p.dim);

  std::int64_t workers = n_threads > 0
                             ? n_threads
                             : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<std::int64_t>(workers, cfg.n_chains);

  std::vector<ChainFailure> fails(static_cast<std::size_t>(workers));
  if (workers == 1) {
    run_block(p, cfg, 0, cfg.n_chains, x0, ens.samples, fails[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t per = (cfg.n_chains + workers - 1) / workers;
    for (std::int64_t w = 0; w < workers; ++w) {
      const std::int64_t lo = w * per;
      const std::int64_t hi = std::min(cfg.n_chains, lo + per);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi, w] {
        run_block(p, cfg, lo, hi, x0, ens.samples,
                  fails[static_cast<std::size_t>(w)]);
      });
    }
    for (auto& t : pool) t.join();
  }

  const ChainFailure* worst = nullptr;
  for (const auto& f : fails)
    if (f.failed && (!worst || f.chain < worst->chain)) worst = &f;
  if (worst)
    throw DivergenceError(worst->chain, worst->iteration,
                          "run_ensemble: chain " + std::to_string(worst->chain) +
                              " diverged at iteration " +
                              std::to_string(worst->iteration) +
                              " (eta too large or potential misdeclared)");
  return ens;
}

std::int64_t default_burn_in(const potential::PotentialSpec& p, double eta) {
  if (!(p.m > 0.0))
    throw BurnInUnavailableError(
        "default_burn_in: no contraction rate for m = 0; set burn_in explicitly");
  const double c = bounds::contraction_coefficient(p.m, p.M, eta);
  if (c <= 0.0) return 1;
  return std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::log(1e12) / (-std::log(c)))));
}

SampleEnsemble exact_quadratic_stationary_ensemble(
    const potential::PotentialSpec& p, const ChainConfig& cfg) {
  if (p.kind != potential::Kind::Quadratic)
    throw InapplicableError(
        "exact_quadratic_stationary_ensemble: closed-form law exists only for "
        "quadratic potentials");
  validate_config(p, cfg);

  Vec sd(p.dim);
  for (Index j = 0; j < p.dim; ++j) {
    const double c = std::abs(1.0 - cfg.eta * p.curvatures[j]);
    sd[j] = std::sqrt(2.0 * cfg.eta / (1.0 - c * c));
  }

  SampleEnsemble ens;
  ens.config = cfg;
  ens.potential = p;
  ens.potential_digest = p.digest();
  ens.exact_oracle = true;
  ens.samples.resize(cfg.n_chains * cfg.records_per_chain, p.dim);
  for (std::int64_t chain = 0; chain < cfg.n_chains; ++chain) {
    rng::Stream rs(cfg.seed, static_cast<std::uint64_t>(chain),
                   rng::Domain::exact_oracle);
    for (std::int64_t rec = 0; rec < cfg.records_per_chain; ++rec)
      for (Index j = 0; j < p.dim; ++j)
        ens.samples(chain * cfg.records_per_chain + rec, j) =
            p.minimizer[j] + sd[j] * rs.normal();
  }
  return ens;
}

}  // namespace langevin::sampler
