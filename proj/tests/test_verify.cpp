#include <doctest.h>

#include <langevin/bounds.hpp>
#include <langevin/errors.hpp>
#include <langevin/lyapunov.hpp>
#include <langevin/potential.hpp>
#include <langevin/sampler.hpp>
#include <langevin/stats.hpp>
#include <langevin/verify.hpp>

#include <cmath>
#include <string>

using namespace langevin;
namespace sp = langevin::sampler;
namespace bd = langevin::bounds;
namespace vf = langevin::verify;

namespace {

sp::SampleEnsemble point_mass_ensemble(int dim, std::int64_t n) {
  Vec rho = Vec::Ones(dim);
  auto p = potential::make_quadratic(dim, rho);
  sp::ChainConfig cfg;
  cfg.eta = 0.1;
  cfg.dim = dim;
  cfg.n_chains = n;
  cfg.seed = 1;
  sp::SampleEnsemble ens;
  ens.samples = Mat::Zero(n, dim);
  ens.config = cfg;
  ens.potential = p;
  ens.potential_digest = p.digest();
  return ens;
}

}  // namespace

TEST_CASE("check_tail: a point mass at the center passes every level") {
  auto ens = point_mass_ensemble(2, 1000);
  bd::ConcentrationEnvelope env = bd::subgaussian_envelope(2, 0.1, 0.9);
  auto rep = vf::check_tail(ens, env, {0.1, 0.01});
  REQUIRE(rep.deltas.size() == 2);
  CHECK(rep.empirical_p[0] == 0.0);
  CHECK(rep.empirical_p[1] == 0.0);
  // zero hits in 1000 trials: exact 99% upper bound is 1 - 0.01^(1/1000)
  CHECK(rep.ci_upper[0] == doctest::Approx(1.0 - std::pow(0.01, 1e-3)).epsilon(1e-10));
  CHECK(rep.verdicts[0]);
  CHECK(rep.verdicts[1]);
  CHECK(rep.all_pass());
  // quadratic potential with m > 0: no stationarity caveat
  CHECK(rep.caveat.empty());
  // radii grow as delta shrinks
  CHECK(rep.radii[1] > rep.radii[0]);
}

TEST_CASE("check_tail: preconditions") {
  auto ens = point_mass_ensemble(2, 1000);
  bd::ConcentrationEnvelope env = bd::subgaussian_envelope(2, 0.1, 0.9);
  CHECK_THROWS_AS(vf::check_tail(ens, env, {}), InvalidParameterError);
  CHECK_THROWS_AS(vf::check_tail(ens, env, {0.0}), InvalidParameterError);
  CHECK_THROWS_AS(vf::check_tail(ens, env, {0.1, 1.0}), InvalidParameterError);
  // N floor: deltas of 0.001 need at least 10/0.001 = 10000 samples
  CHECK_THROWS_AS(vf::check_tail(ens, env, {0.001}), InvalidParameterError);
  CHECK_THROWS_AS(vf::check_tail(ens, env, {0.1}, 0.0), InvalidParameterError);
  CHECK_THROWS_AS(vf::check_tail(ens, env, {0.1}, -1.0), InvalidParameterError);

  bd::ConcentrationEnvelope wrong_dim = bd::subgaussian_envelope(3, 0.1, 0.9);
  CHECK_THROWS_AS(vf::check_tail(ens, wrong_dim, {0.1}), DimensionError);

  // correlated records (> 1 per chain) are not independent draws
  auto corr = point_mass_ensemble(2, 500);
  corr.config.records_per_chain = 2;
  corr.config.n_chains = 500;
  corr.samples = Mat::Zero(1000, 2);
  try {
    vf::check_tail(corr, env, {0.1});
    FAIL("expected InapplicableError");
  } catch (const InapplicableError& e) {
    CHECK(std::string(e.what()).find("records_per_chain") != std::string::npos);
  }
}

TEST_CASE("check_tail: exact stationary law respects the envelope and the chi-square tail") {
  Vec rho = Vec::Ones(5);
  auto p = potential::make_quadratic(5, rho);
  sp::ChainConfig cfg;
  cfg.eta = 0.1;
  cfg.dim = 5;
  cfg.n_chains = 20000;
  cfg.seed = 17;
  auto ens = sp::exact_quadratic_stationary_ensemble(p, cfg);

  bd::ConcentrationEnvelope env = bd::subgaussian_envelope(5, 0.1, 0.9);
  auto rep = vf::check_tail(ens, env, {0.3, 0.1, 0.01});
  CHECK(rep.all_pass());
  CHECK(rep.caveat.empty());  // closed-form draw: stationarity is exact
  // the envelope is conservative: the true law concentrates far inside it
  for (double pe : rep.empirical_p) CHECK(pe == 0.0);

  // shrink the radius to where the exact law has known mass:
  // |X|^2 / s^2 is chi-square(5), so P[|X| >= r] = Q(5/2, r^2/(2 s^2)).
  const double s2 = bd::exact_stationary_1d_quadratic(1.0, 0.1);
  const double target = 8.0;  // r^2 / s^2
  const double r = std::sqrt(target * s2);
  const double scale = r / bd::envelope_radius(env, 0.5);
  auto rep2 = vf::check_tail(ens, env, {0.5}, scale);
  const double p_true = stats::gammainc_upper_reg(2.5, target / 2.0);
  const double se = std::sqrt(p_true * (1.0 - p_true) / 20000.0);
  CHECK(rep2.radii[0] == doctest::Approx(r).epsilon(1e-12));
  CHECK(std::abs(rep2.empirical_p[0] - p_true) < 4.5 * se);
  CHECK(rep2.empirical_p[0] <= rep2.ci_upper[0]);
}

TEST_CASE("check_tail: m = 0 ensembles carry a stationarity caveat") {
  auto p = potential::make_huber_like(0.5, 1);
  sp::ChainConfig cfg;
  cfg.eta = 1.0;
  cfg.dim = 1;
  cfg.n_chains = 2000;
  cfg.burn_in = 2000;
  cfg.seed = 3;
  auto ens = sp::run_ensemble(p, cfg, 1);

  auto fit = potential::exact_superlinear(p);
  bd::ConcentrationEnvelope env =
      bd::subexp_envelope(1, 1.0, fit, lyapunov::estimate_r0(1));
  auto rep = vf::check_tail(ens, env, {0.1, 0.01});
  CHECK(rep.all_pass());
  CHECK_FALSE(rep.caveat.empty());
  CHECK(rep.caveat.find("burn-in") != std::string::npos);
}

TEST_CASE("ks check against the exact 1d law") {
  Vec rho(1);
  rho << 1.0;
  auto p = potential::make_quadratic(1, rho);
  sp::ChainConfig cfg;
  cfg.eta = 0.1;
  cfg.dim = 1;
  cfg.n_chains = 100000;
  cfg.seed = 23;
  auto ens = sp::exact_quadratic_stationary_ensemble(p, cfg);

  auto res = vf::ks_check_1d_quadratic(ens, 1.0);
  CHECK(res.critical == doctest::Approx(1.63 / std::sqrt(1e5)).epsilon(1e-12));
  CHECK(res.statistic < res.critical);
  CHECK(res.pass);

  // inflate the spread by 22%: the distribution gap (~0.049) dwarfs the
  // critical value, so the check must fail
  auto bad = ens;
  bad.samples *= std::sqrt(1.5);
  auto res2 = vf::ks_check_1d_quadratic(bad, 1.0);
  CHECK_FALSE(res2.pass);
  CHECK(res2.statistic > 0.03);
}

TEST_CASE("ks check applicability") {
  auto h = potential::make_huber_like(0.5, 1);
  sp::ChainConfig cfg;
  cfg.eta = 1.0;
  cfg.dim = 1;
  cfg.n_chains = 100;
  cfg.burn_in = 10;
  cfg.seed = 1;
  auto hub = sp::run_ensemble(h, cfg, 1);
  CHECK_THROWS_AS(vf::ks_check_1d_quadratic(hub, 1.0), InapplicableError);

  Vec rho2(2);
  rho2 << 1.0, 1.0;
  auto p2 = potential::make_quadratic(2, rho2);
  sp::ChainConfig cfg2;
  cfg2.eta = 0.1;
  cfg2.dim = 2;
  cfg2.n_chains = 100;
  cfg2.seed = 1;
  auto e2 = sp::exact_quadratic_stationary_ensemble(p2, cfg2);
  CHECK_THROWS_AS(vf::ks_check_1d_quadratic(e2, 1.0), InapplicableError);

  Vec rho1(1);
  rho1 << 1.0;
  auto p1 = potential::make_quadratic(1, rho1);
  sp::ChainConfig cfg1;
  cfg1.eta = 0.1;
  cfg1.dim = 1;
  cfg1.n_chains = 100;
  cfg1.seed = 1;
  auto e1 = sp::exact_quadratic_stationary_ensemble(p1, cfg1);
  CHECK_THROWS_AS(vf::ks_check_1d_quadratic(e1, 2.0), InapplicableError);

  auto corr = e1;
  corr.config.records_per_chain = 2;
  corr.config.n_chains = 50;
  CHECK_THROWS_AS(vf::ks_check_1d_quadratic(corr, 1.0), InapplicableError);
}

TEST_CASE("stationary mgf check against the contraction bound") {
  Vec rho = Vec::Ones(2);
  auto p = potential::make_quadratic(2, rho);
  sp::ChainConfig cfg;
  cfg.eta = 0.1;
  cfg.dim = 2;
  cfg.n_chains = 20000;
  cfg.seed = 29;
  auto ens = sp::exact_quadratic_stationary_ensemble(p, cfg);

  const double c = bd::contraction_coefficient(1.0, 1.0, 0.1);
  const double bound = bd::stationary_mgf_bound_sc(0.1, c, 1.0);
  auto res = vf::check_stationary_mgf(ens, 1.0, bound);
  CHECK(res.log_bound == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(res.pass);
  // true value: log E exp(lambda X_1) = lambda^2 var / 2 = 0.5263, well under the bound
  CHECK(res.empirical_log_mean > 0.40);
  CHECK(res.empirical_log_mean < 0.65);
  CHECK(res.bootstrap_se > 0.0);
  CHECK(res.bootstrap_se < 0.05);
  CHECK(res.bootstrap_seed == 29);

  auto res2 = vf::check_stationary_mgf(ens, 1.0, bound);
  CHECK(res.empirical_log_mean == res2.empirical_log_mean);
  CHECK(res.bootstrap_se == res2.bootstrap_se);

  // a vanishing lambda sends both sides to zero, preserving the inequality
  auto tiny = vf::check_stationary_mgf(ens, 1e-8, bd::stationary_mgf_bound_sc(0.1, c, 1e-8));
  CHECK(tiny.pass);
  CHECK(tiny.empirical_log_mean >= 0.0);
  CHECK(tiny.empirical_log_mean < 1e-12);

  // an absurdly small claimed bound must fail
  auto fail = vf::check_stationary_mgf(ens, 1.0, 0.01);
  CHECK_FALSE(fail.pass);

  CHECK_THROWS_AS(vf::check_stationary_mgf(ens, 0.0, 1.0), InvalidParameterError);
  CHECK_THROWS_AS(vf::check_stationary_mgf(ens, -1.0, 1.0), InvalidParameterError);
  auto corr = ens;
  corr.config.records_per_chain = 2;
  corr.config.n_chains = 10000;
  CHECK_THROWS_AS(vf::check_stationary_mgf(corr, 1.0, 1.0), InapplicableError);
}

TEST_CASE("lemma sweep: strict equality case and huber branches") {
  // isotropic quadratic: the contraction inequality is an identity, so the
  // sweep exercises the boundary of the PASS region
  Vec rho = Vec::Ones(2);
  auto p = potential::make_quadratic(2, rho);
  auto rep = vf::sweep_lemma_inequalities(p, 0.1, 2000, 5);
  CHECK(rep.pass);
  CHECK(rep.seed == 5);
  bool saw_contraction = false;
  for (const auto& e : rep.entries) {
    CHECK(e.max_violation <= 1e-10);
    CHECK(e.n_points >= 2000);
    if (e.name == "contraction") {
      saw_contraction = true;
      // identity up to roundoff: violation is tiny but can graze zero
      CHECK(std::abs(e.max_violation) < 1e-12);
    }
  }
  CHECK(saw_contraction);

  auto h = potential::make_huber_like(0.5, 3);
  auto hrep = vf::sweep_lemma_inequalities(h, 1.0, 2000, 6);
  CHECK(hrep.pass);
  bool saw_nonexp = false, saw_progress = false, saw_interp = false;
  for (const auto& e : hrep.entries) {
    if (e.name == "non_expansiveness") saw_nonexp = true;
    if (e.name == "drift_progress") saw_progress = true;
    if (e.name == "phi_interpolation") saw_interp = true;
  }
  CHECK(saw_nonexp);
  CHECK(saw_progress);
  CHECK(saw_interp);

  // anisotropic strongly convex case
  Vec rho3(3);
  rho3 << 0.5, 1.0, 2.0;
  auto p3 = potential::make_quadratic(3, rho3);
  auto rep3 = vf::sweep_lemma_inequalities(p3, 0.3, 2000, 7);
  CHECK(rep3.pass);

  // determinism
  auto rep3b = vf::sweep_lemma_inequalities(p3, 0.3, 2000, 7);
  for (std::size_t i = 0; i < rep3.entries.size(); ++i)
    CHECK(rep3.entries[i].max_violation == rep3b.entries[i].max_violation);

  CHECK_THROWS_AS(vf::sweep_lemma_inequalities(p, 0.1, 999, 5), InvalidParameterError);
  CHECK_THROWS_AS(vf::sweep_lemma_inequalities(p, 3.0, 2000, 5), TransienceError);
}
