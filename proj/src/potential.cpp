#include "langevin/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "langevin/errors.hpp"
#include "langevin/rng.hpp"

namespace langevin::potential {

namespace {

void check_dim(const PotentialSpec& p, const Eigen::Ref<const Vec>& x, const char* op) {
  if (x.size() != p.dim)
    throw DimensionError(std::string(op) + ": point has dimension " +
                         std::to_string(x.size()) + ", potential expects " +
                         std::to_string(p.dim));
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string PotentialSpec::digest() const {
  char buf[64];
  std::string desc;
  switch (kind) {
    case Kind::Quadratic: {
      desc = "quadratic:d=" + std::to_string(dim) + ":rho=";
      for (Index i = 0; i < curvatures.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,", curvatures[i]);
        desc += buf;
      }
      break;
    }
    case Kind::HuberLike:
      std::snprintf(buf, sizeof buf, "huber:d=%lld:beta=%.17g",
                    static_cast<long long>(dim), huber_beta);
      desc = buf;
      break;
    case Kind::Custom:
      std::snprintf(buf, sizeof buf, "custom:d=%lld:m=%.17g:M=%.17g",
                    static_cast<long long>(dim), m, M);
      desc = buf;
      break;
  }
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(desc)));
  return buf;
}

PotentialSpec make_quadratic(Index dim, const Vec& curvatures) {
  if (dim < 1) throw InvalidParameterError("make_quadratic: dim must be >= 1");
  if (curvatures.size() != dim)
    throw DimensionError("make_quadratic: need one curvature per coordinate");
  for (Index i = 0; i < dim; ++i)
    if (!(curvatures[i] > 0.0))
      throw InvalidParameterError("make_quadratic: curvatures must be strictly positive");
  PotentialSpec p;
  p.kind = Kind::Quadratic;
  p.dim = dim;
  p.curvatures = curvatures;
  p.m = curvatures.minCoeff();
  p.M = curvatures.maxCoeff();
  p.minimizer = Vec::Zero(dim);
  p.min_value = 0.0;
  return p;
}

PotentialSpec make_huber_like(double beta, Index dim) {
  if (dim < 1) throw InvalidParameterError("make_huber_like: dim must be >= 1");
  if (!(beta > 0.0 && beta < 1.0))
    throw InvalidParameterError("make_huber_like: beta must lie in (0, 1)");
  PotentialSpec p;
  p.kind = Kind::HuberLike;
  p.dim = dim;
  p.huber_beta = beta;
  p.m = 0.0;
  p.M = beta * beta;
  p.minimizer = Vec::Zero(dim);
  p.min_value = 0.0;
  return p;
}

PotentialSpec make_custom(Index dim, std::function<double(const Vec&)> eval_fn,
                          std::function<Vec(const Vec&)> grad_fn, double m, double M,
                          Vec minimizer, double min_value) {
  if (dim < 1) throw InvalidParameterError("make_custom: dim must be >= 1");
  if (!(M > 0.0) || m < 0.0 || m > M)
    throw InvalidParameterError("make_custom: need 0 <= m <= M, M > 0");
  if (minimizer.size() != dim) throw DimensionError("make_custom: minimizer dimension");
  if (!eval_fn || !grad_fn) throw InvalidParameterError("make_custom: eval/grad required");
  PotentialSpec p;
  p.kind = Kind::Custom;
  p.dim = dim;
  p.custom_eval = std::move(eval_fn);
  p.custom_grad = std::move(grad_fn);
  p.m = m;
  p.M = M;
  p.minimizer = std::move(minimizer);
  p.min_value = min_value;
  return p;
}

double eval(const PotentialSpec& p, const Eigen::Ref<const Vec>& x) {
  check_dim(p, x, "eval");
  switch (p.kind) {
    case Kind::Quadratic:
      return 0.5 * (p.curvatures.array() * x.array().square()).sum();
    case Kind::HuberLike: {
      const double b = p.huber_beta;
      const double r = x.norm();
      if (r <= 1.0) return 0.5 * b * b * r * r;
      return b * r - (b - 0.5 * b * b);
    }
    case Kind::Custom:
      return p.custom_eval(x);
  }
  throw Error("eval: unreachable");
}

Vec grad(const PotentialSpec& p, const Eigen::Ref<const Vec>& x) {
  check_dim(p, x, "grad");
  switch (p.kind) {
    case Kind::Quadratic:
      return (p.curvatures.array() * x.array()).matrix();
    case Kind::HuberLike: {
      const double b = p.huber_beta;
      const double r = x.norm();
      if (r <= 1.0) return b * b * x;  // quadratic branch owns the breakpoint
      return (b / r) * x;
    }
    case Kind::Custom:
      return p.custom_grad(x);
  }
  throw Error("grad: unreachable");
}

SuperlinearFit fit_superlinear(const PotentialSpec& p, double probe_radius,
                               int n_directions, std::uint64_t rng_seed) {
  if (!(probe_radius > 0.0))
    throw InvalidParameterError("fit_superlinear: probe_radius must be positive");
  if (n_directions < 1)
    throw InvalidParameterError("fit_superlinear: need at least one direction");

  // Work on the centered potential: x* at the origin, minimum value zero.
  const auto f0 = [&](const Vec& y) { return eval(p, y + p.minimizer) - p.min_value; };

  rng::Stream rs(rng_seed, 0, rng::Domain::fit_directions);
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(n_directions));
  for (int i = 0; i < n_directions; ++i) dirs.push_back(rs.unit_vector(p.dim));

  double slope_min = std::numeric_limits<double>::infinity();
  for (const Vec& v : dirs)
    slope_min = std::min(slope_min, f0(probe_radius * v) / probe_radius);
  const double beta = 0.9 * slope_min;
  if (!(beta > 0.0))
    throw FitFailureError(
        "fit_superlinear: fitted slope is not positive; the potential is too flat "
        "at this probe_radius — increase it");

  constexpr int kRadii = 64;
  const double lr0 = std::log(1e-3), lr1 = std::log(probe_radius);
  double alpha = 0.0;  // floor at 0
  for (int j = 0; j < kRadii; ++j) {
    const double r =
        std::exp(lr0 + (lr1 - lr0) * static_cast<double>(j) / (kRadii - 1));
    for (const Vec& v : dirs) alpha = std::max(alpha, beta * r - f0(r * v));
  }
  return SuperlinearFit{alpha, beta, probe_radius};
}

SuperlinearFit exact_superlinear(const PotentialSpec& p) {
  if (p.kind != Kind::HuberLike)
    throw InapplicableError("exact_superlinear: closed form only for HuberLike");
  const double b = p.huber_beta;
  return SuperlinearFit{b - 0.5 * b * b, b, 0.0};
}

}  // namespace langevin::potential
