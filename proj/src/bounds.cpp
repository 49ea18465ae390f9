#include "langevin/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "langevin/lyapunov.hpp"

namespace langevin::bounds {

double contraction_coefficient(double m, double M, double eta) {
  if (!(M > 0.0) || !(m >= 0.0) || m > M)
    throw InvalidParameterError("contraction_coefficient: need 0 <= m <= M, M > 0");
  if (!(eta > 0.0)) throw InvalidParameterError("contraction_coefficient: need eta > 0");
  if (eta > 2.0 / M)
    throw TransienceError("contraction_coefficient: eta > 2/M makes the chain transient");
  return std::max(std::abs(1.0 - eta * m), std::abs(1.0 - eta * M));
}

double SubGaussianEnvelope::radius(double delta) const {
  if (!(delta > 0.0 && delta < 1.0))
    throw InvalidParameterError("SubGaussianEnvelope::radius: delta must lie in (0, 1)");
  return 4.0 * std::sqrt(eta / (1.0 - c)) *
         (std::sqrt(2.0 * dim) + std::sqrt(std::log(1.0 / delta)));
}

double SubExponentialEnvelope::radius(double delta) const {
  if (!(delta > 0.0))
    throw InvalidParameterError("SubExponentialEnvelope::radius: delta must be positive");
  return R + C * std::log(A / delta);
}

bool SubExponentialEnvelope::proof_valid() const {
  return A > 1.0 && R >= r1 && lambda * R >= r0;
}

double envelope_radius(const ConcentrationEnvelope& env, double delta) {
  return std::visit([&](const auto& e) { return e.radius(delta); }, env);
}

const char* envelope_kind_name(const ConcentrationEnvelope& env) {
  return std::holds_alternative<SubGaussianEnvelope>(env) ? "subgaussian"
                                                          : "subexponential";
}

int envelope_dim(const ConcentrationEnvelope& env) {
  return std::visit([](const auto& e) { return e.dim; }, env);
}

SubGaussianEnvelope subgaussian_envelope(int dim, double eta, double c) {
  if (dim < 1) throw DimensionError("subgaussian_envelope: dimension must be >= 1");
  if (!(eta > 0.0)) throw InvalidParameterError("subgaussian_envelope: need eta > 0");
  if (!(c >= 0.0))
    throw InvalidParameterError("subgaussian_envelope: contraction coefficient must be >= 0");
  if (c >= 1.0)
    throw UnavailableError(
        "subgaussian_envelope: requires contraction c < 1 (strong convexity)");
  return {dim, eta, c, 2.0 * eta / (1.0 - c)};
}

double exact_stationary_1d_quadratic(double rho, double eta) {
  if (!(rho > 0.0))
    throw InvalidParameterError("exact_stationary_1d_quadratic: need rho > 0");
  if (!(eta > 0.0))
    throw InvalidParameterError("exact_stationary_1d_quadratic: need eta > 0");
  if (eta >= 2.0 / rho)
    throw TransienceError("exact_stationary_1d_quadratic: eta >= 2/rho is transient");
  const double c = std::abs(1.0 - eta * rho);
  return 2.0 * eta / (1.0 - c * c);
}

SubExponentialEnvelope subexp_envelope(int dim, double eta,
                                       const potential::SuperlinearFit& fit,
                                       double r0) {
  if (dim < 1) throw DimensionError("subexp_envelope: dimension must be >= 1");
  if (!(eta > 0.0)) throw InvalidParameterError("subexp_envelope: need eta > 0");
  if (!(fit.beta > 0.0))
    throw UnavailableError(
        "subexp_envelope: growth certificate has beta <= 0; potential too flat "
        "(refit with a larger probe_radius)");
  if (!(fit.alpha >= 0.0))
    throw InvalidParameterError("subexp_envelope: fit.alpha must be >= 0");
  if (!(r0 > 0.0)) throw InvalidParameterError("subexp_envelope: need r0 > 0");

  SubExponentialEnvelope env;
  env.dim = dim;
  env.eta = eta;
  env.alpha = fit.alpha;
  env.beta = fit.beta;
  env.r0 = r0;
  env.r1 = 2.0 * fit.alpha / fit.beta;
  env.lambda = fit.beta / 16.0;
  const double x = eta * fit.beta * fit.beta / 256.0;
  env.A = std::exp(x) / (-std::expm1(-x));
  env.C = 2.0 / env.lambda;
  env.R = std::max(r0 / env.lambda + eta * fit.beta / 4.0, env.r1);
  return env;
}

double stationary_mgf_bound_sc(double eta, double c, double lambda) {
  if (!(eta > 0.0)) throw InvalidParameterError("stationary_mgf_bound_sc: need eta > 0");
  if (!(c >= 0.0) || c >= 1.0)
    throw UnavailableError("stationary_mgf_bound_sc: requires contraction c in [0, 1)");
  if (!(lambda >= 0.0))
    throw InvalidParameterError("stationary_mgf_bound_sc: need lambda >= 0");
  return eta * lambda * lambda / (1.0 - c);
}

double stationary_mgf_bound_convex(const SubExponentialEnvelope& env) {
  return std::log(env.A) + lyapunov::log_phi(env.dim, env.lambda * env.R);
}

}  // namespace langevin::bounds
