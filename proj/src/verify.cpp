#include "langevin/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "langevin/lyapunov.hpp"
#include "langevin/rng.hpp"
#include "langevin/stats.hpp"

namespace langevin::verify {

namespace {

void require_independent_records(const sampler::SampleEnsemble& ens,
                                 const char* op) {
  if (ens.config.records_per_chain != 1)
    throw InapplicableError(std::string(op) +
                            ": records within a chain are correlated; rerun "
                            "with records_per_chain = 1");
}

std::string stationarity_caveat(const sampler::SampleEnsemble& ens) {
  if (ens.exact_oracle || ens.potential.m > 0.0) return {};
  return "burn-in was user-chosen (m = 0 gives no mixing rate); "
         "stationarity is assumed, not certified";
}

Vec centered_norms(const sampler::SampleEnsemble& ens) {
  return (ens.samples.rowwise() - ens.potential.minimizer.transpose())
      .rowwise()
      .norm();
}

}  // namespace

bool TailReport::all_pass() const {
  return !verdicts.empty() &&
         std::all_of(verdicts.begin(), verdicts.end(), [](bool v) { return v; });
}

TailReport check_tail(const sampler::SampleEnsemble& ens,
                      const bounds::ConcentrationEnvelope& env,
                      const std::vector<double>& deltas, double radius_scale) {
  require_independent_records(ens, "check_tail");
  if (deltas.empty()) throw InvalidParameterError("check_tail: no deltas given");
  double dmin = 1.0;
  for (double d : deltas) {
    if (!(d > 0.0 && d < 1.0))
      throw InvalidParameterError("check_tail: deltas must lie in (0, 1)");
    dmin = std::min(dmin, d);
  }
  if (bounds::envelope_dim(env) != ens.samples.cols())
    throw DimensionError("check_tail: envelope dimension does not match ensemble");
  const std::int64_t n = ens.samples.rows();
  if (static_cast<double>(n) < 10.0 / dmin)
    throw InvalidParameterError(
        "check_tail: need at least 10/min(deltas) independent samples");
  if (!(radius_scale > 0.0))
    throw InvalidParameterError("check_tail: radius_scale must be positive");

  const Vec norms = centered_norms(ens);
  TailReport rep;
  rep.caveat = stationarity_caveat(ens);
  for (double delta : deltas) {
    const double radius = radius_scale * bounds::envelope_radius(env, delta);
    std::int64_t k = 0;
    for (Index i = 0; i < norms.size(); ++i)
      if (norms[i] >= radius) ++k;
    const double ci = stats::clopper_pearson_upper(k, n, 0.99);
    rep.deltas.push_back(delta);
    rep.radii.push_back(radius);
    rep.empirical_p.push_back(static_cast<double>(k) / static_cast<double>(n));
    rep.ci_upper.push_back(ci);
    rep.verdicts.push_back(ci <= delta);
  }
  return rep;
}

KsResult ks_check_1d_quadratic(const sampler::SampleEnsemble& ens, double rho) {
  if (ens.potential.kind != potential::Kind::Quadratic)
    throw InapplicableError("ks_check_1d_quadratic: quadratic potentials only");
  if (ens.samples.cols() != 1)
    throw InapplicableError("ks_check_1d_quadratic: one-dimensional ensembles only");
  require_independent_records(ens, "ks_check_1d_quadratic");
  if (std::abs(ens.potential.curvatures[0] - rho) >
      1e-12 * std::max(1.0, std::abs(rho)))
    throw InapplicableError(
        "ks_check_1d_quadratic: curvature does not match the ensemble's potential");

  const double sd =
      std::sqrt(bounds::exact_stationary_1d_quadratic(rho, ens.config.eta));
  const double center = ens.potential.minimizer[0];
  std::vector<double> v(ens.samples.col(0).data(),
                        ens.samples.col(0).data() + ens.samples.rows());
  KsResult res;
  res.statistic = stats::ks_statistic(
      std::move(v), [&](double x) { return stats::normal_cdf((x - center) / sd); });
  res.critical = 1.63 / std::sqrt(static_cast<double>(ens.samples.rows()));
  res.pass = res.statistic < res.critical;
  return res;
}

MgfResult check_stationary_mgf(const sampler::SampleEnsemble& ens, double lambda,
                               double log_bound) {
  require_independent_records(ens, "check_stationary_mgf");
  if (!(lambda > 0.0))
    throw InvalidParameterError("check_stationary_mgf: need lambda > 0");
  const int d = static_cast<int>(ens.samples.cols());
  const Vec norms = centered_norms(ens);
  std::vector<double> lp(static_cast<std::size_t>(norms.size()));
  for (Index i = 0; i < norms.size(); ++i)
    lp[static_cast<std::size_t>(i)] = lyapunov::log_phi(d, lambda * norms[i]);

  const double logn = std::log(static_cast<double>(lp.size()));
  MgfResult res;
  res.empirical_log_mean = stats::log_sum_exp(lp) - logn;
  res.log_bound = log_bound;
  res.bootstrap_seed = ens.config.seed;
  res.bootstrap_se = stats::bootstrap_se(
      lp,
      [&](std::span<const double> r) { return stats::log_sum_exp(r) - logn; },
      res.bootstrap_seed);
  res.pass = res.empirical_log_mean <= log_bound + 3.0 * res.bootstrap_se;
  return res;
}

SweepReport sweep_lemma_inequalities(const potential::PotentialSpec& p, double eta,
                                     std::int64_t n_points, std::uint64_t seed) {
  if (n_points < 1000)
    throw InvalidParameterError("sweep_lemma_inequalities: need n_points >= 1000");

  const int d = static_cast<int>(p.dim);
  rng::Stream rs(seed, 0, rng::Domain::sweep_points);

  std::vector<Vec> points;
  points.reserve(static_cast<std::size_t>(n_points) + 7 * 8);
  Vec z(p.dim);
  for (std::int64_t i = 0; i < n_points; ++i) {
    rs.fill_normal(z);
    points.push_back(p.minimizer + 5.0 * z);
  }
  for (int e = -3; e <= 3; ++e) {
    const double r = std::pow(10.0, e);
    for (int k = 0; k < 8; ++k)
      points.push_back(p.minimizer + r * rs.unit_vector(p.dim));
  }

  const double c = bounds::contraction_coefficient(p.m, p.M, eta);

  SweepReport rep;
  rep.seed = seed;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double contraction_v = neg_inf, progress_v = neg_inf, interp_v = neg_inf;
  std::int64_t progress_n = 0;

  double r1 = 0.0;
  const bool huber = p.kind == potential::Kind::HuberLike;
  if (huber) {
    const auto fit = potential::exact_superlinear(p);
    r1 = 2.0 * fit.alpha / fit.beta;
  }
  const bool progress_applies = huber && eta <= 1.0 / p.M;

  const double interp_cs[] = {0.1, 0.5, 0.9, c};
  for (const Vec& x : points) {
    const Vec gd = sampler::gd_step(p, x, eta);
    const double before = (x - p.minimizer).norm();
    const double after = (gd - p.minimizer).norm();

    // m > 0: after <= c * before; m = 0: the same line with c = 1 is
    // non-expansiveness.
    const double rhs = c * before;
    contraction_v = std::max(contraction_v, (after - rhs) / std::max(1.0, rhs));

    if (progress_applies && before >= r1) {
      const double prhs = before - eta * p.huber_beta / 4.0;
      progress_v = std::max(progress_v, (after - prhs) / std::max(1.0, std::abs(prhs)));
      ++progress_n;
    }

    for (double ic : interp_cs) {
      if (!(ic > 0.0) || ic > 1.0 || before <= 0.0) continue;
      const double lhs = lyapunov::log_phi(d, ic * before);
      const double irhs = ic * lyapunov::log_phi(d, before);
      interp_v = std::max(interp_v, (lhs - irhs) / std::max(1.0, std::abs(irhs)));
    }
  }

  const std::int64_t total = static_cast<std::int64_t>(points.size());
  rep.entries.push_back(
      {p.m > 0.0 ? "contraction" : "non_expansiveness", contraction_v, total});
  if (progress_applies)
    rep.entries.push_back({"drift_progress", progress_v, progress_n});
  rep.entries.push_back({"phi_interpolation", interp_v, total});

  rep.pass = true;
  for (const auto& e : rep.entries)
    if (!(e.max_violation <= 1e-10)) rep.pass = false;
  return rep;
}

}  // namespace langevin::verify
