#pragma once

#include <variant>

#include "langevin/errors.hpp"
#include "langevin/potential.hpp"

namespace langevin::bounds {

// One gradient-descent step x -> x - eta grad f(x) on an (m, M)-potential
// contracts distances to the minimizer by c = max(|1 - eta m|, |1 - eta M|).
// Throws TransienceError for eta > 2/M (iterates escape), and
// InvalidParameterError for malformed (m, M, eta).
double contraction_coefficient(double m, double M, double eta);

// High-probability tail envelope for strongly convex potentials:
// P[|X - x*| >= radius(delta)] <= delta under the stationary law.
struct SubGaussianEnvelope {
  int dim = 0;
  double eta = 0.0;
  double c = 0.0;              // contraction coefficient, in [0, 1)
  double variance_proxy = 0.0; // 2 eta / (1 - c)

  // 4 sqrt(eta/(1-c)) (sqrt(2d) + sqrt(log(1/delta))), delta in (0,1).
  double radius(double delta) const;
};

// Tail envelope for convex (possibly non-strongly-convex) potentials with a
// linear-growth certificate f(x) >= beta |x - x*| - alpha.
struct SubExponentialEnvelope {
  int dim = 0;
  double eta = 0.0;
  double alpha = 0.0, beta = 0.0; // growth certificate constants
  double r0 = 0.0;                // radius where phi_d grows at rate >= 1/2
  double r1 = 0.0;                // 2 alpha / beta: drift kicks in past here
  double lambda = 0.0;            // beta / 16
  double A = 0.0;                 // e^x / (1 - e^{-x}), x = eta beta^2 / 256
  double C = 0.0;                 // 2 / lambda
  double R = 0.0;                 // max(r0/lambda + eta beta/4, r1)

  // R + C log(A/delta); any delta > 0 is accepted (delta = A gives R).
  double radius(double delta) const;

  // Certificate that the constants satisfy the derivation's requirements:
  // A > 1, R >= r1, lambda R >= r0. Holds by construction for envelopes
  // built by subexp_envelope; doctored constants can fail it.
  bool proof_valid() const;
};

using ConcentrationEnvelope = std::variant<SubGaussianEnvelope, SubExponentialEnvelope>;

double envelope_radius(const ConcentrationEnvelope& env, double delta);
const char* envelope_kind_name(const ConcentrationEnvelope& env);
int envelope_dim(const ConcentrationEnvelope& env);

// Builds the strongly-convex envelope. Throws UnavailableError when c >= 1
// (contraction, hence strong convexity, is required).
SubGaussianEnvelope subgaussian_envelope(int dim, double eta, double c);

// Stationary variance 2 eta / (1 - c^2) of the d=1 chain on f = rho x^2 / 2;
// the stationary law is exactly N(0, that). Throws TransienceError for
// eta >= 2/rho.
double exact_stationary_1d_quadratic(double rho, double eta);

// Builds the convex-case envelope from a growth certificate and r0.
// Caller is responsible for the progress condition eta <= 1/M on the
// potential the fit came from. Throws UnavailableError when fit.beta <= 0.
SubExponentialEnvelope subexp_envelope(int dim, double eta,
                                       const potential::SuperlinearFit& fit,
                                       double r0);

// log-bound on log E[Phi_{d,lambda}(X - x*)] under the stationary law.
// Strongly convex case: eta lambda^2 / (1 - c).
double stationary_mgf_bound_sc(double eta, double c, double lambda);

// Convex case: log A + log phi_dim(lambda R). The derivation needs
// lambda R >= r0; callers should surface env.proof_valid() to the user
// rather than rely on this function to police it.
double stationary_mgf_bound_convex(const SubExponentialEnvelope& env);

}  // namespace langevin::bounds
