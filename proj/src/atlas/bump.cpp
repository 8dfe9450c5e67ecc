#include "bgt/atlas.hpp"

#include <array>
#include <cmath>

namespace bgt::atlas {

namespace {

double flat(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

}  // namespace

double bump(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 1.5) return 0.0;
  const double a = flat(1.5 - t);
  const double b = flat(t - 1.0);
  return a / (a + b);
}

Vec halton(std::uint64_t i, int d, const Vec& shift) {
  static constexpr std::array<std::uint64_t, 4> primes{2, 3, 5, 7};
  Vec u(d);
  for (int k = 0; k < d; ++k) {
    const std::uint64_t b = primes[static_cast<size_t>(k)];
    double f = 1.0, r = 0.0;
    for (std::uint64_t j = i; j > 0; j /= b) {
      f /= static_cast<double>(b);
      r += f * static_cast<double>(j % b);
    }
    r += shift(k);
    u(k) = r - std::floor(r);
  }
  return u;
}

}  // namespace bgt::atlas
