#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "langevin/types.hpp"

namespace langevin::potential {

enum class Kind { Quadratic, HuberLike, Custom };

// A convex potential with gradient and curvature metadata. Immutable after
// construction; eval/grad are pure, so concurrent use is safe.
struct PotentialSpec {
  Kind kind;
  Index dim;
  Vec curvatures;          // Quadratic: per-coordinate rho_i
  double huber_beta = 0;   // HuberLike: slope parameter in (0, 1)
  std::function<double(const Vec&)> custom_eval;
  std::function<Vec(const Vec&)> custom_grad;
  double m = 0;            // strong-convexity modulus (0 = merely convex)
  double M = 0;            // smoothness modulus
  Vec minimizer;
  double min_value = 0;

  // Short stable identifier for provenance in exported files.
  std::string digest() const;
};

// f(x) = sum_i rho_i x_i^2 / 2, all rho_i > 0.
PotentialSpec make_quadratic(Index dim, const Vec& curvatures);

// Radial huber-like potential, beta in (0, 1):
//   f(x) = beta^2 r^2 / 2        for r = |x| <= 1,
//   f(x) = beta r - alpha        for r >= 1, with alpha = beta - beta^2/2
// so f is continuous at r = 1. The gradient jumps from beta^2 x to beta x/r
// across r = 1 (the two branch slopes differ by beta - beta^2); within the
// quadratic branch f has curvature exactly beta^2 = M. m = 0.
PotentialSpec make_huber_like(double beta, Index dim);

// Caller supplies eval/grad plus m, M and the minimizer; the library validates
// them statistically in tests but does not infer them. Integrability of
// exp(-f) is assumed, not checked.
PotentialSpec make_custom(Index dim, std::function<double(const Vec&)> eval,
                          std::function<Vec(const Vec&)> grad, double m, double M,
                          Vec minimizer, double min_value);

double eval(const PotentialSpec& p, const Eigen::Ref<const Vec>& x);
Vec grad(const PotentialSpec& p, const Eigen::Ref<const Vec>& x);

// Growth certificate f(x) >= -alpha + beta * |x| (after centering at the
// minimizer), fitted on random directions and a log-spaced radial grid.
struct SuperlinearFit {
  double alpha;
  double beta;
  double fit_radius;
};

// beta = 0.9 * min over n_directions random unit v of f(probe_radius v)/probe_radius;
// alpha = max over {64 log-spaced radii in [1e-3, probe_radius]} x {the same
// directions} of (beta |x| - f(x)), floored at 0. Throws FitFailureError when
// the fitted slope is not positive (probe_radius too small for the potential).
SuperlinearFit fit_superlinear(const PotentialSpec& p, double probe_radius,
                               int n_directions, std::uint64_t rng_seed);

// Closed-form growth constants where the potential family provides them
// exactly (HuberLike: alpha = beta - beta^2/2, slope beta).
SuperlinearFit exact_superlinear(const PotentialSpec& p);

}  // namespace langevin::potential
