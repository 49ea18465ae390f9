#include <doctest.h>

#include <langevin/bounds.hpp>
#include <langevin/errors.hpp>
#include <langevin/lyapunov.hpp>
#include <langevin/potential.hpp>
#include <langevin/rng.hpp>

#include <cmath>

using namespace langevin;
namespace bd = langevin::bounds;

TEST_CASE("contraction coefficient: closed forms and parameter policing") {
  CHECK(bd::contraction_coefficient(1.0, 1.0, 0.1) == doctest::Approx(0.9).epsilon(1e-15));
  CHECK(bd::contraction_coefficient(1.0, 4.0, 0.4) == doctest::Approx(0.6).epsilon(1e-15));
  // small steps: the M side is inactive, c = 1 - eta m
  CHECK(bd::contraction_coefficient(0.5, 2.0, 0.25) == doctest::Approx(0.875).epsilon(1e-15));
  // merely convex: no contraction, but no expansion either
  CHECK(bd::contraction_coefficient(0.0, 0.25, 1.0) == 1.0);
  // eta = 2/M sits exactly at the boundary
  CHECK(bd::contraction_coefficient(1.0, 1.0, 2.0) == 1.0);

  CHECK_THROWS_AS(bd::contraction_coefficient(1.0, 1.0, 2.5), TransienceError);
  CHECK_THROWS_AS(bd::contraction_coefficient(-0.1, 1.0, 0.1), InvalidParameterError);
  CHECK_THROWS_AS(bd::contraction_coefficient(2.0, 1.0, 0.1), InvalidParameterError);
  CHECK_THROWS_AS(bd::contraction_coefficient(1.0, 1.0, 0.0), InvalidParameterError);
  CHECK_THROWS_AS(bd::contraction_coefficient(1.0, 1.0, -0.5), InvalidParameterError);
}

TEST_CASE("subgaussian envelope: pinned radii and structure") {
  auto env = bd::subgaussian_envelope(2, 0.1, 0.9);
  CHECK(env.variance_proxy == doctest::Approx(2.0).epsilon(1e-15));
  // delta = 1/e makes the radius exactly 4 (sqrt(2d) + 1) sqrt(eta/(1-c)) = 12
  CHECK(env.radius(std::exp(-1.0)) == doctest::Approx(12.0).epsilon(1e-12));

  // d = 5, eta = 0.1, c = 0.9 at the three standard confidence levels
  auto e5 = bd::subgaussian_envelope(5, 0.1, 0.9);
  CHECK(e5.radius(0.3) == doctest::Approx(17.038138422451).epsilon(1e-10));
  CHECK(e5.radius(0.1) == doctest::Approx(18.7188191582141).epsilon(1e-10));
  CHECK(e5.radius(0.01) == doctest::Approx(21.2329747458309).epsilon(1e-10));

  // delta -> 1 leaves only the dimension term
  CHECK(e5.radius(1.0 - 1e-12) ==
        doctest::Approx(4.0 * std::sqrt(10.0) * std::sqrt(0.1 / 0.1)).epsilon(1e-5));

  // radius grows as the target tail probability shrinks
  double prev = 0.0;
  for (double d : {0.5, 0.3, 0.1, 0.01, 1e-6}) {
    const double r = e5.radius(d);
    CHECK(r > prev);
    prev = r;
  }

  CHECK_THROWS_AS(env.radius(0.0), InvalidParameterError);
  CHECK_THROWS_AS(env.radius(1.0), InvalidParameterError);
  CHECK_THROWS_AS(env.radius(-0.1), InvalidParameterError);
  CHECK_THROWS_AS(bd::subgaussian_envelope(2, 0.1, 1.0), UnavailableError);
  CHECK_THROWS_AS(bd::subgaussian_envelope(2, 0.1, -0.1), InvalidParameterError);
  CHECK_THROWS_AS(bd::subgaussian_envelope(2, 0.0, 0.9), InvalidParameterError);
  CHECK_THROWS_AS(bd::subgaussian_envelope(0, 0.1, 0.9), DimensionError);
}

TEST_CASE("exact 1d quadratic stationary variance") {
  CHECK(bd::exact_stationary_1d_quadratic(1.0, 0.1) ==
        doctest::Approx(1.0526315789473684211).epsilon(1e-14));
  CHECK(bd::exact_stationary_1d_quadratic(1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(bd::exact_stationary_1d_quadratic(2.0, 0.3) ==
        doctest::Approx(0.71428571428571428571).epsilon(1e-14));
  // continuous-time limit: variance -> 1/rho as eta -> 0
  CHECK(bd::exact_stationary_1d_quadratic(1.0, 1e-8) == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(bd::exact_stationary_1d_quadratic(1.0, 2.0), TransienceError);
  CHECK_THROWS_AS(bd::exact_stationary_1d_quadratic(0.0, 0.1), InvalidParameterError);
  CHECK_THROWS_AS(bd::exact_stationary_1d_quadratic(1.0, 0.0), InvalidParameterError);
}

TEST_CASE("variance proxy brackets the exact quadratic variance") {
  // 2 eta/(1-c) >= 2 eta/(1-c^2) >= eta/(1-c): proxy within a factor 2
  rng::Stream s(31, 0, rng::Domain::sweep_points);
  for (int k = 0; k < 20; ++k) {
    const double rho = 0.1 + 4.9 * s.uniform();
    const double eta = (0.05 + 0.9 * s.uniform()) / rho;  // keep eta <= 0.95/rho
    const double c = bd::contraction_coefficient(rho, rho, eta);
    const double exact = bd::exact_stationary_1d_quadratic(rho, eta);
    const double proxy = 2.0 * eta / (1.0 - c);
    CHECK(exact <= proxy * (1 + 1e-12));
    CHECK(proxy <= 2.0 * exact * (1 + 1e-12));
  }
}

TEST_CASE("subexponential envelope: pinned worked example") {
  potential::SuperlinearFit fit{0.5, 1.0, 0.0};  // alpha = 1/2, slope 1
  const double r0 = 0.5493061443340548457;       // atanh(1/2)
  auto env = bd::subexp_envelope(1, 0.5, fit, r0);
  CHECK(env.lambda == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(env.C == doctest::Approx(32.0).epsilon(1e-15));
  CHECK(env.r1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(env.R == doctest::Approx(8.9138983093448775312).epsilon(1e-13));
  CHECK(env.A == doctest::Approx(513.50211779399732145).epsilon(1e-12));
  CHECK(env.radius(0.01) == doctest::Approx(355.99947717596519128).epsilon(1e-12));
  CHECK(env.radius(env.A) == doctest::Approx(env.R).epsilon(1e-12));
  CHECK(env.proof_valid());

  // radius decreases in delta, accepts delta > 1
  CHECK(env.radius(0.5) > env.radius(0.9));
  CHECK(env.radius(2.0) < env.radius(0.5));
  CHECK_THROWS_AS(env.radius(0.0), InvalidParameterError);

  // doubling the slope halves the moment scale C and the drift radius r1
  potential::SuperlinearFit fit2{0.5, 2.0, 0.0};
  auto env2 = bd::subexp_envelope(1, 0.5, fit2, r0);
  CHECK(env2.C == doctest::Approx(16.0).epsilon(1e-15));  // C = 2/(beta/16) = 32/beta
  CHECK(env2.r1 == doctest::Approx(0.5).epsilon(1e-15));

  potential::SuperlinearFit bad{0.5, 0.0, 0.0};
  CHECK_THROWS_AS(bd::subexp_envelope(1, 0.5, bad, r0), UnavailableError);
  CHECK_THROWS_AS(bd::subexp_envelope(1, 0.0, fit, r0), InvalidParameterError);
  CHECK_THROWS_AS(bd::subexp_envelope(0, 0.5, fit, r0), DimensionError);
}

TEST_CASE("subexponential envelope for the huber-like chain") {
  auto p = potential::make_huber_like(0.5, 1);
  auto fit = potential::exact_superlinear(p);
  const double r0 = lyapunov::estimate_r0(1);
  auto env = bd::subexp_envelope(1, 1.0, fit, r0);
  CHECK(env.lambda == doctest::Approx(1.0 / 32.0).epsilon(1e-15));
  CHECK(env.lambda * env.R == doctest::Approx(0.55390625).epsilon(1e-13));
  CHECK(env.proof_valid());
  CHECK(env.radius(0.1) == doctest::Approx(608.798388966852431599).epsilon(1e-11));
  CHECK(env.radius(0.01) == doctest::Approx(756.163834918471355376).epsilon(1e-11));

  const double bound = bd::stationary_mgf_bound_convex(env);
  CHECK(bound == doctest::Approx(7.07908562186166745839).epsilon(1e-10));
}

TEST_CASE("stationary mgf bound, strongly convex route") {
  CHECK(bd::stationary_mgf_bound_sc(0.1, 0.9, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bd::stationary_mgf_bound_sc(0.1, 0.9, 0.0) == 0.0);
  const double b1 = bd::stationary_mgf_bound_sc(0.2, 0.5, 1.5);
  const double b2 = bd::stationary_mgf_bound_sc(0.2, 0.5, 3.0);
  CHECK(b2 == doctest::Approx(4.0 * b1).epsilon(1e-13));
  CHECK_THROWS_AS(bd::stationary_mgf_bound_sc(0.1, 1.0, 1.0), UnavailableError);
  CHECK_THROWS_AS(bd::stationary_mgf_bound_sc(0.1, -0.1, 1.0), UnavailableError);
  CHECK_THROWS_AS(bd::stationary_mgf_bound_sc(0.0, 0.9, 1.0), InvalidParameterError);
  CHECK_THROWS_AS(bd::stationary_mgf_bound_sc(0.1, 0.9, -1.0), InvalidParameterError);
}

TEST_CASE("stationary mgf bound, convex route on doctored constants") {
  bd::SubExponentialEnvelope env;
  env.dim = 1;
  env.lambda = 1.0;
  env.R = 1.0;
  env.A = 513.50211779399732145;
  env.r0 = 0.5;
  env.r1 = 0.5;
  // log(A cosh 1)
  CHECK(bd::stationary_mgf_bound_convex(env) ==
        doctest::Approx(std::log(env.A * std::cosh(1.0))).epsilon(1e-13));
  CHECK(env.proof_valid());

  env.r1 = 2.0;  // R < r1 now
  CHECK_FALSE(env.proof_valid());
  env.r1 = 0.5;
  env.r0 = 5.0;  // lambda R < r0 now
  CHECK_FALSE(env.proof_valid());
  env.r0 = 0.5;
  env.A = 1.0;  // A must exceed 1
  CHECK_FALSE(env.proof_valid());
}

TEST_CASE("envelope variant helpers") {
  bd::ConcentrationEnvelope sg = bd::subgaussian_envelope(3, 0.1, 0.9);
  potential::SuperlinearFit fit{0.5, 1.0, 0.0};
  bd::ConcentrationEnvelope se = bd::subexp_envelope(2, 0.5, fit, 0.55);

  CHECK(std::string(bd::envelope_kind_name(sg)) == "subgaussian");
  CHECK(std::string(bd::envelope_kind_name(se)) == "subexponential");
  CHECK(bd::envelope_dim(sg) == 3);
  CHECK(bd::envelope_dim(se) == 2);
  CHECK(bd::envelope_radius(sg, 0.1) ==
        doctest::Approx(std::get<bd::SubGaussianEnvelope>(sg).radius(0.1)).epsilon(1e-15));
  CHECK(bd::envelope_radius(se, 0.1) ==
        doctest::Approx(std::get<bd::SubExponentialEnvelope>(se).radius(0.1)).epsilon(1e-15));
}
