#include "bgt/atlas.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace bgt::atlas {

namespace {

// Distance when it is below `bound`, +inf when it is certainly not.
double distance_below(const Space& s, const Point& p, const Point& q, double bound) {
  if (auto d = s.exact_distance(p, q)) return *d < bound ? *d : std::numeric_limits<double>::infinity();
  if (s.distance_lower_bound(p, q) >= bound) return std::numeric_limits<double>::infinity();
  const double d = flows::distance(s, p, q);
  return d < bound ? d : std::numeric_limits<double>::infinity();
}

int default_pool(int dim) {
  switch (dim) {
    case 1: return 2000;
    case 2: return 6000;
    default: return 20000;
  }
}

}  // namespace

std::vector<Point> build_separated_net(const Space& space, double sep, std::uint64_t seed,
                                       const NetOptions& opts,
                                       const std::function<bool(const Point&)>& accept) {
  if (!(sep > 0.0)) throw Error(ErrorKind::invalid_argument, "net separation must be positive");
  const int d = space.dim();
  const int pool = opts.pool > 0 ? opts.pool : default_pool(d);

  geometry::Rng rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec shift(d);
  for (int k = 0; k < d; ++k) shift(k) = u01(rng);

  std::vector<Point> net;
  for (int i = 0; i < pool; ++i) {
    const Point p = space.canonical(space.from_unit(halton(static_cast<std::uint64_t>(i), d, shift),
                                                    opts.inflate));
    if (accept && !accept(p)) continue;
    // Ties at exactly sep count as separated despite roundoff.
    bool far = true;
    for (const Point& q : net)
      if (std::isfinite(distance_below(space, p, q, sep * (1.0 - 1e-12)))) {
        far = false;
        break;
      }
    if (far) net.push_back(p);
  }

  // Pool-maximality only certifies the pool; check coverage independently.
  geometry::Rng check(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int s = 0; s < opts.coverage_samples; ++s) {
    const Point p = space.canonical(space.sample(check, 0.0));
    if (accept && !accept(p)) continue;
    bool covered = false;
    for (const Point& q : net)
      if (std::isfinite(distance_below(space, p, q, 2.0 * sep))) {
        covered = true;
        break;
      }
    if (!covered)
      throw Error(ErrorKind::budget_exhausted,
                  space.name() + ": candidate pool of " + std::to_string(pool) +
                      " points does not certify a covering net");
  }
  return net;
}

}  // namespace bgt::atlas
