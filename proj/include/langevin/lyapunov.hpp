#pragma once

#include <cstdint>
#include <utility>

#include "langevin/errors.hpp"
#include "langevin/types.hpp"

namespace langevin::lyapunov {

// Query record for the rotation-invariant MGF machinery: phi_d and its
// Phi_{d,lambda}(x) = phi_d(lambda |x|) form, evaluated in log space.
struct LyapunovQuery {
  int dim;
  double alpha_order;  // (dim - 2) / 2, stored for clarity
  double lambda;

  LyapunovQuery(int d, double lam)
      : dim(d), alpha_order((d - 2) / 2.0), lambda(lam) {
    if (d < 1) throw DimensionError("LyapunovQuery: dim must be >= 1");
    if (!(lam > 0.0)) throw DomainError("LyapunovQuery: lambda must be positive");
  }
};

// log phi_d(z), overflow-free for z up to 1e6.
//   d = 1: log cosh z.
//   d >= 2: log Gamma(a+1) + a log(2/z) + log I_a(z), a = (d-2)/2, with the
//   power series in summed form for moderate z and the large-argument
//   asymptotic expansion (4 correction terms) beyond a validated crossover.
double log_phi(int d, double z);

// Independent oracle: log phi_d via adaptive quadrature of the sphere-average
// integral (theta substitution of the interval form), d >= 2 only.
double phi_quadrature_oracle(int d, double z);

// Monte Carlo sanity oracle: mean and standard error of e^{z <v, e1>} over n
// uniform sphere points. Linear space; intended for moderate z.
std::pair<double, double> phi_mc_oracle(int d, double z, std::int64_t n,
                                        std::uint64_t seed);

// log Phi_{d,lambda}(x) = log phi_d(lambda |x|). Rotation invariance is
// structural: only the norm of x enters.
template <typename Derived>
double big_phi_log(int d, double lambda, const Eigen::MatrixBase<Derived>& x) {
  if (!(lambda > 0.0)) throw DomainError("big_phi_log: lambda must be positive");
  return log_phi(d, lambda * x.norm());
}

// d/dz log phi_d(z) = I_{a+1}(z) / I_a(z) for d >= 2, tanh z for d = 1.
// Lies in (0, 1) and increases in z.
double log_derivative(int d, double z);

// Smallest grid value r (step 1e-3 on [0, 40 max(1, sqrt d)]) such that
// log_derivative(d, z) >= rate for every grid z >= r. Certifies the growth
// property phi_d(r + D) >= e^{rate D} phi_d(r) for all D > 0 at r and beyond.
double estimate_r0(int d, double rate = 0.5);

enum class ConvMethod { quadrature, monte_carlo };

struct ConvolutionCheck {
  double lhs_log;    // log E_{Z ~ N(0, sigma^2 I)} Phi_{d,lambda}(x + Z)
  double rhs_log;    // lambda^2 sigma^2 / 2 + log Phi_{d,lambda}(x)
  double mc_se_log;  // standard error of lhs_log (monte_carlo only, else 0)
};

// Checks the Gaussian-convolution identity for Phi by computing both sides.
ConvolutionCheck convolution_identity_check(int d, double lambda, const Vec& x,
                                            double sigma, ConvMethod method,
                                            std::uint64_t seed = 0,
                                            std::int64_t n = 1000000);

}  // namespace langevin::lyapunov
