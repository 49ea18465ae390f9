#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

#include "langevin/errors.hpp"
#include "langevin/types.hpp"

namespace langevin::rng {

// Counter-based generator (Philox-style 4x32, 10 rounds). A stream is keyed by
// the 64-bit master seed; the 128-bit counter carries (block, stream id, domain
// tag), so any (seed, stream, domain) triple yields the same bits regardless of
// how work is scheduled across threads. That is the whole reproducibility story:
// chain i always reads stream i, auxiliary consumers (probe directions, oracles,
// bootstrap, ...) read disjoint domain tags.
enum class Domain : std::uint32_t {
  chains = 0,
  fit_directions = 1,
  sphere_oracle = 2,
  sweep_points = 3,
  bootstrap = 4,
  convolution_mc = 5,
  exact_oracle = 6,
};

struct Philox4x32 {
  std::uint32_t k0, k1;    // key = master seed
  std::uint64_t block;     // counter words 0..1, incremented per 128-bit block
  std::uint32_t c2, c3;    // counter words 2..3: stream id and domain tag

  Philox4x32(std::uint64_t seed, std::uint64_t stream, Domain domain)
      : k0(static_cast<std::uint32_t>(seed)),
        k1(static_cast<std::uint32_t>(seed >> 32)),
        block(0),
        c2(static_cast<std::uint32_t>(stream)),
        c3(static_cast<std::uint32_t>(stream >> 32) +
           (static_cast<std::uint32_t>(domain) << 28)) {}

  static inline void round(std::uint32_t& x0, std::uint32_t& x1, std::uint32_t& x2,
                           std::uint32_t& x3, std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = 0xD2511F53ull * x0;
    const std::uint64_t p1 = 0xCD9E8D57ull * x2;
    x0 = static_cast<std::uint32_t>(p1 >> 32) ^ x1 ^ k0;
    const std::uint32_t nx1 = static_cast<std::uint32_t>(p1);
    x2 = static_cast<std::uint32_t>(p0 >> 32) ^ x3 ^ k1;
    x3 = static_cast<std::uint32_t>(p0);
    x1 = nx1;
  }

  inline void next4(std::uint32_t out[4]) {
    std::uint32_t x0 = static_cast<std::uint32_t>(block);
    std::uint32_t x1 = static_cast<std::uint32_t>(block >> 32);
    std::uint32_t x2 = c2, x3 = c3;
    std::uint32_t K0 = k0, K1 = k1;
    for (int r = 0; r < 9; ++r) {
      round(x0, x1, x2, x3, K0, K1);
      K0 += 0x9E3779B9u;
      K1 += 0xBB67AE85u;
    }
    round(x0, x1, x2, x3, K0, K1);
    out[0] = x0;
    out[1] = x1;
    out[2] = x2;
    out[3] = x3;
    ++block;
  }
};

namespace detail {
// Ziggurat tables for the standard normal: 256 layers, 52-bit mantissa path.
// x[0] is the base strip's pseudo-width v/f(R), x[1] = R, widths then decrease
// to x[256] = 0; f[i] = exp(-x_i^2/2); k[i] is the fast-accept threshold on
// the raw 52-bit mantissa.
struct ZigTables {
  double x[257];
  double f[257];
  std::uint64_t k[256];
  ZigTables();
};
extern const double zig_r;
extern const ZigTables zig;
// Table self-checks (monotone widths, strip-area consistency); used by tests.
bool ziggurat_tables_consistent();
}  // namespace detail

// One reproducible random stream: uniforms, standard normals, sphere points.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream = 0, Domain domain = Domain::chains)
      : px_(seed, stream, domain) {}

  inline std::uint64_t next_u64() {
    if (have_ == 0) {
      std::uint32_t o[4];
      px_.next4(o);
      buf_[0] = (static_cast<std::uint64_t>(o[0]) << 32) | o[1];
      buf_[1] = (static_cast<std::uint64_t>(o[2]) << 32) | o[3];
      have_ = 2;
    }
    return buf_[--have_];
  }

  // Uniform on [0, 1) with 53 random bits.
  inline double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1p-53; }

  // Standard normal via 256-layer ziggurat; wedge and tail are exact rejections.
  inline double normal() {
    const detail::ZigTables& zt = detail::zig;
    for (;;) {
      std::uint64_t r = next_u64();
      const int idx = static_cast<int>(r & 0xff);
      r >>= 8;
      const int sign = static_cast<int>(r & 1);
      const std::uint64_t rabs = (r >> 1) & 0xfffffffffffffull;  // 52 bits
      const double x = static_cast<double>(rabs) * 0x1p-52 * zt.x[idx];
      if (rabs < zt.k[idx]) return sign ? -x : x;
      if (idx == 0) {
        double xx, yy;
        do {
          xx = -std::log1p(-uniform()) / detail::zig_r;
          yy = -std::log1p(-uniform());
        } while (yy + yy <= xx * xx);
        return sign ? -(detail::zig_r + xx) : (detail::zig_r + xx);
      }
      if ((zt.f[idx] - zt.f[idx + 1]) * uniform() + zt.f[idx + 1] <
          std::exp(-0.5 * x * x))
        return sign ? -x : x;
    }
  }

  template <typename Derived>
  void fill_normal(Eigen::MatrixBase<Derived> const& out_) {
    auto& out = const_cast<Eigen::MatrixBase<Derived>&>(out_);
    for (Index i = 0; i < out.size(); ++i) out.derived().data()[i] = normal();
  }

  // Uniform point on the unit sphere S^{d-1} (normalized Gaussian vector).
  Vec unit_vector(Index d) {
    if (d < 1) throw DimensionError("unit_vector: dimension must be >= 1");
    Vec v(d);
    double n2;
    do {
      fill_normal(v);
      n2 = v.squaredNorm();
    } while (!(n2 > 1e-24));
    return v / std::sqrt(n2);
  }

 private:
  Philox4x32 px_;
  std::uint64_t buf_[2] = {0, 0};
  int have_ = 0;
};

}  // namespace langevin::rng
