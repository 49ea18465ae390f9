#include "langevin/rng.hpp"

#include <cmath>

namespace langevin::rng::detail {

const double zig_r = 3.6541528853610088;

ZigTables::ZigTables() {
  const double r = zig_r;
  const double v = 0.00492867323399;  // area of each of the 256 strips
  x[0] = v / std::exp(-0.5 * r * r);  // base strip pseudo-width
  x[1] = r;
  x[256] = 0.0;
  for (int i = 2; i < 256; ++i)
    x[i] = std::sqrt(-2.0 * std::log(v / x[i - 1] + std::exp(-0.5 * x[i - 1] * x[i - 1])));
  for (int i = 0; i <= 256; ++i) f[i] = std::exp(-0.5 * x[i] * x[i]);
  const double m = 4503599627370496.0;  // 2^52
  k[0] = static_cast<std::uint64_t>((r / x[0]) * m);
  for (int i = 1; i < 256; ++i) k[i] = static_cast<std::uint64_t>((x[i + 1] / x[i]) * m);
}

const ZigTables zig;

bool ziggurat_tables_consistent() {
  // Widths strictly decreasing and finite.
  for (int i = 0; i < 256; ++i) {
    if (!std::isfinite(zig.x[i]) || !(zig.x[i] > zig.x[i + 1])) return false;
  }
  // Strip areas: by construction x_i * (f_{i+1} - f_i) == v for i in [1,255);
  // the top strip closes the recursion, so check it lands on the same area.
  const double v = 0.00492867323399;
  const double top = zig.x[255] * (1.0 - zig.f[255]);
  if (std::abs(top - v) > 1e-5 * v) return false;
  // Base strip: rectangle part has width R out of pseudo-width x[0].
  if (!(zig.x[0] > zig_r)) return false;
  return true;
}

}  // namespace langevin::rng::detail
