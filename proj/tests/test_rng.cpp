#include <doctest.h>

#include <langevin/rng.hpp>
#include <langevin/stats.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

using namespace langevin;
using rng::Domain;
using rng::Stream;

TEST_CASE("ziggurat tables satisfy their defining identities") {
  CHECK(rng::detail::ziggurat_tables_consistent());
}

TEST_CASE("counter generator is reproducible and keyed on seed/stream/domain") {
  Stream a(42, 0, Domain::chains);
  Stream b(42, 0, Domain::chains);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  // Regression pins: these values identify this generator configuration.
  // The contract is determinism plus the statistical checks below; if the
  // keying scheme ever changes these must be re-derived deliberately.
  Stream s(42, 0, Domain::chains);
  const std::uint64_t expect[6] = {
      1350887118657991639ull,  11307114055752567099ull, 9479895171082356475ull,
      18220193170249641213ull, 11118663562267567449ull, 15234554000252034507ull};
  for (int i = 0; i < 6; ++i) CHECK(s.next_u64() == expect[i]);

  CHECK(Stream(42, 1, Domain::chains).next_u64() == 4280865203436667036ull);
  CHECK(Stream(43, 0, Domain::chains).next_u64() == 11571292325727716230ull);
  CHECK(Stream(42, 0, Domain::bootstrap).next_u64() == 6035641689163637088ull);
}

TEST_CASE("normal and uniform streams are pinned") {
  Stream s(42, 0, Domain::chains);
  const double normals[6] = {-0.53311999108032182, -1.8738058576762877,
                             0.045432954615903069, 0.30275104178724804,
                             -0.61378837662571628, -0.35211481449349874};
  for (int i = 0; i < 6; ++i) CHECK(s.normal() == doctest::Approx(normals[i]).epsilon(1e-15));

  Stream u(7, 3, Domain::chains);
  const double uniforms[6] = {0.16271346262651054, 0.59258024979470825,
                              0.07129251643135126, 0.58739464321636414,
                              0.3009655453133776,  0.37289476835121271};
  for (int i = 0; i < 6; ++i) CHECK(u.uniform() == doctest::Approx(uniforms[i]).epsilon(1e-15));
}

TEST_CASE("uniforms live in [0,1) with the right first two moments") {
  Stream s(11, 0, Domain::chains);
  const long n = 2000000;
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < n; ++i) {
    const double x = s.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 2e-3);
  CHECK(std::abs(var - 1.0 / 12.0) < 2e-3);
}

TEST_CASE("normal moments match N(0,1) out to kurtosis") {
  Stream s(3, 0, Domain::chains);
  const long n = 20000000;
  double m1 = 0, m2 = 0, m3 = 0, m4 = 0;
  for (long i = 0; i < n; ++i) {
    const double x = s.normal();
    m1 += x;
    m2 += x * x;
    m3 += x * x * x;
    m4 += x * x * x * x;
  }
  m1 /= n; m2 /= n; m3 /= n; m4 /= n;
  // tolerances are ~4-5 standard errors at n = 2e7
  CHECK(std::abs(m1) < 1.0e-3);
  CHECK(std::abs(m2 - 1.0) < 2.0e-3);
  CHECK(std::abs(m3) < 4.0e-3);
  CHECK(std::abs(m4 - 3.0) < 1.0e-2);
}

TEST_CASE("normal tail frequency beyond 3 sigma") {
  Stream s(5, 0, Domain::chains);
  const long n = 20000000;
  long hits = 0;
  for (long i = 0; i < n; ++i)
    if (std::abs(s.normal()) > 3.0) ++hits;
  const double p = 2.0 * (1.0 - stats::normal_cdf(3.0));
  const double se = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(double(hits) / n - p) < 5.0 * se);
}

TEST_CASE("normal sample passes a KS test against the standard normal") {
  Stream s(17, 0, Domain::chains);
  std::vector<double> xs(1000000);
  for (auto& x : xs) x = s.normal();
  const double d = stats::ks_statistic(xs, [](double t) { return stats::normal_cdf(t); });
  CHECK(d < 1.63 / std::sqrt(double(xs.size())));
}

TEST_CASE("distinct streams are uncorrelated") {
  Stream a(9, 0, Domain::chains);
  Stream b(9, 1, Domain::chains);
  const long n = 1000000;
  double sxy = 0, sx = 0, sy = 0, sxx = 0, syy = 0;
  for (long i = 0; i < n; ++i) {
    const double x = a.normal(), y = b.normal();
    sxy += x * y; sx += x; sy += y; sxx += x * x; syy += y * y;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double corr = cov / std::sqrt((sxx / n - (sx / n) * (sx / n)) * (syy / n - (sy / n) * (sy / n)));
  CHECK(std::abs(corr) < 4.5e-3);
}

TEST_CASE("fill_normal matches scalar draws in order") {
  Stream a(21, 4, Domain::chains);
  Stream b(21, 4, Domain::chains);
  Vec v(7);
  a.fill_normal(v);
  for (Index i = 0; i < v.size(); ++i) CHECK(v[i] == b.normal());
}

TEST_CASE("unit_vector is uniform on the sphere") {
  Stream s(2, 0, Domain::fit_directions);
  for (int d : {1, 2, 3, 7}) {
    Vec v = s.unit_vector(d);
    REQUIRE(v.size() == d);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // d = 1 must hit both signs
  bool plus = false, minus = false;
  for (int i = 0; i < 64; ++i) {
    const double x = s.unit_vector(1)[0];
    CHECK(std::abs(std::abs(x) - 1.0) < 1e-15);
    (x > 0 ? plus : minus) = true;
  }
  CHECK(plus);
  CHECK(minus);
  // coordinate of a d = 3 unit vector has mean 0, variance 1/3
  double sum = 0, sumsq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = s.unit_vector(3)[0];
    sum += x;
    sumsq += x * x;
  }
  CHECK(std::abs(sum / n) < 6e-3);
  CHECK(std::abs(sumsq / n - 1.0 / 3.0) < 6e-3);
}
