#include "bgt/presets.hpp"
#include "bgt/spaces.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bgt;
using namespace bgt::spaces;

namespace {

constexpr double kPi = 3.141592653589793;

ManifoldFunction torus_sine() {
  return {"sin", [](const Point& p) { return Complex(std::sin(2 * kPi * p(0)), 0.0); }, "sin"};
}

// Direct quadrature of sum_alpha ||h_alpha f o kappa_alpha||_{L2}^2 on the chart grids.
double quadrature_l2(const ManifoldFunction& f, const atlas::Trivialization& t, int res) {
  double sum = 0.0;
  for (int a = 0; a < t.size(); ++a) {
    const ChartSamples cs = sample_chart(t, a, res);
    double chart = 0.0;
    for (size_t i = 0; i < cs.points.size(); ++i) chart += std::norm(cs.cutoff[i] * f(cs.points[i]));
    sum += chart * cs.grid.cell_volume();
  }
  return std::sqrt(sum);
}

}  // namespace

TEST(LocalizedNorm, ZeroFunctionIsZero) {
  auto t = atlas::build_geodesic_trivialization(geometry::make_sphere2(), kPi / 4, 1);
  for (NormKind k : {NormKind::H, NormKind::B, NormKind::F})
    EXPECT_EQ(localized_norm(zero_function(), *t, k, 1.0, 2.0, 2.0, 64).value, 0.0) << to_string(k);
}

TEST(LocalizedNorm, OrderZeroMatchesQuadrature) {
  auto m = geometry::make_sphere2();
  auto t = atlas::build_geodesic_trivialization(m, kPi / 4, 1);
  const auto family = smooth_family(*m, 3, 11);
  for (const auto& f : family) {
    const double want = quadrature_l2(f, *t, 128);
    EXPECT_NEAR(localized_norm(f, *t, NormKind::H, 0.0, 2.0, 2.0, 128).value, want, 1e-8 * want) << f.id;
  }
}

TEST(LocalizedNorm, Homogeneous) {
  auto m = geometry::make_sphere2();
  auto t = atlas::build_geodesic_trivialization(m, kPi / 4, 1);
  const ManifoldFunction f = smooth_family(*m, 1, 3)[0];
  const ManifoldFunction g{"scaled", [f](const Point& p) { return -3.0 * f(p); }, "smooth"};
  const double a = localized_norm(f, *t, NormKind::H, 1.0, 2.0, 2.0, 128).value;
  EXPECT_NEAR(localized_norm(g, *t, NormKind::H, 1.0, 2.0, 2.0, 128).value, 3.0 * a, 1e-12 * a);
}

TEST(LocalizedNorm, CircleSineFirstOrderBand) {
  auto t = atlas::build_geodesic_trivialization(geometry::make_flat_torus(1), 0.3, 1);
  // ||f||^2 + ||f'||^2 on the unit circle.
  const double classical = std::sqrt(0.5 + 2 * kPi * kPi);
  const double coarse = localized_norm(torus_sine(), *t, NormKind::H, 1.0, 2.0, 2.0, 128).value;
  const double fine = localized_norm(torus_sine(), *t, NormKind::H, 1.0, 2.0, 2.0, 256).value;
  EXPECT_GT(coarse / classical, 0.2);
  EXPECT_LT(coarse / classical, 5.0);
  EXPECT_LT(std::abs(fine - coarse) / fine, 1e-3);
}

TEST(LocalizedNorm, PerChartContributionsCombine) {
  auto t = atlas::build_geodesic_trivialization(geometry::make_flat_torus(2), 0.3, 1);
  const auto family = trig_family(2, 2, 5);
  NormRequest req;
  req.s = {0.5};
  req.p = 3.0;
  req.kind = NormKind::H;
  req.res = 128;
  std::vector<std::vector<std::vector<double>>> parts;
  const auto values = localized_norms(family, *t, req, &parts);
  for (size_t f = 0; f < family.size(); ++f) {
    double sum = 0.0;
    for (double c : parts[f][0]) sum += std::pow(c, 3.0);
    EXPECT_NEAR(values[f][0], std::cbrt(sum), 1e-12 * values[f][0]);
  }
}

TEST(CovariantNorm, ConstantOnSphereIsRootArea) {
  auto t = atlas::build_geodesic_trivialization(geometry::make_sphere2(), kPi / 4, 1);
  EXPECT_NEAR(covariant_norm(constant_function(1.0), *t, 0, 2.0, 128), std::sqrt(4 * kPi), 1e-4);
  // Derivatives of a constant vanish, so higher orders add nothing.
  EXPECT_NEAR(covariant_norm(constant_function(1.0), *t, 2, 2.0, 128), std::sqrt(4 * kPi), 1e-4);
}

TEST(CovariantNorm, CircleSineFirstOrder) {
  auto t = atlas::build_geodesic_trivialization(geometry::make_flat_torus(1), 0.3, 1);
  const double want = std::sqrt(0.5) * (1 + 2 * kPi);
  EXPECT_NEAR(covariant_norm(torus_sine(), *t, 1, 2.0, 256), want, 1e-4 * want);
}

TEST(Trace, ConstantRestrictsToConstant) {
  auto n = geometry::make_sphere_latitude(geometry::make_sphere2(), kPi / 2);
  auto t = atlas::build_fermi_trivialization(n, 1);
  const ManifoldFunction tr = trace(constant_function(1.0), t);
  for (double s : {0.0, 1.0, 2.5, 4.0, 6.0}) EXPECT_NEAR(std::abs(tr(n->canonical(make_vec({s})))), 1.0, 1e-10);
}

TEST(Trace, EqualsRestrictionAndIsLinear) {
  auto m = geometry::make_sphere2();
  auto n = geometry::make_sphere_latitude(m, kPi / 2);
  auto t = atlas::build_fermi_trivialization(n, 1);
  const auto family = smooth_family(*m, 2, 7);
  const ManifoldFunction sum{"sum", [&](const Point& p) { return family[0](p) + 2.0 * family[1](p); }, "smooth"};
  const ManifoldFunction t0 = trace(family[0], t), t1 = trace(family[1], t), ts = trace(sum, t);
  geometry::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Point q = n->canonical(n->sample(rng));
    EXPECT_NEAR(std::abs(t0(q) - family[0](n->include(q))), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(ts(q) - t0(q) - 2.0 * t1(q)), 0.0, 1e-12);
  }
}

TEST(Trace, AmbientPointOffSubmanifoldThrows) {
  auto m = geometry::make_sphere2();
  auto t = atlas::build_fermi_trivialization(geometry::make_sphere_latitude(m, kPi / 2), 1);
  EXPECT_NEAR(std::abs(trace_at_ambient(constant_function(2.0), *t, make_vec({1.0, 0.0, 0.0}))), 2.0, 1e-12);
  EXPECT_THROW(trace_at_ambient(constant_function(2.0), *t, make_vec({0.0, 0.6, 0.8})), Error);
}

TEST(Extension, ZeroAndConstantOnEquator) {
  auto m = geometry::make_sphere2();
  auto n = geometry::make_sphere_latitude(m, kPi / 2);
  auto t = atlas::build_fermi_trivialization(n, 1);
  const ManifoldFunction z = extend(zero_function(), t);
  const ManifoldFunction one = extend(constant_function(1.0), t);
  geometry::Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const Point p = m->sample(rng);
    EXPECT_EQ(z(p), Complex(0.0, 0.0));
    const Point q = n->canonical(n->sample(rng));
    EXPECT_NEAR(std::abs(one(n->include(q)) - 1.0), 0.0, 1e-8);
  }
}

TEST(Extension, VanishesOutsideTube) {
  auto n = geometry::make_sphere_latitude(geometry::make_sphere2(), kPi / 2);
  auto t = atlas::build_fermi_trivialization(n, 1);
  const ManifoldFunction one = extend(constant_function(1.0), t);
  // The poles sit at distance pi/2 = 2R from the equator.
  EXPECT_EQ(one(make_vec({0.0, 0.0, 1.0})), Complex(0.0, 0.0));
  EXPECT_EQ(one(make_vec({0.0, 0.0, -1.0})), Complex(0.0, 0.0));
}

TEST(Extension, TraceOfExtensionRecoversBandLimited) {
  auto n = geometry::make_sphere_latitude(geometry::make_sphere2(), kPi / 2);
  auto t = atlas::build_fermi_trivialization(n, 1);
  for (const auto& f : band_limited_family(2 * kPi, 3, 9)) {
    const ManifoldFunction tr = trace(extend(f, t), t);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 64; ++i) {
      const Point q = n->canonical(make_vec({2 * kPi * i / 64}));
      num += std::norm(tr(q) - f(q));
      den += std::norm(f(q));
    }
    EXPECT_LT(std::sqrt(num / den), 1e-6) << f.id;
  }
}

TEST(Equivalence, SameTrivializationGivesUnitRatios) {
  auto m = geometry::make_sphere2();
  auto t = atlas::build_geodesic_trivialization(m, kPi / 4, 1);
  NormRequest req;
  req.s = {0.0, 1.0};
  req.res = 128;
  const auto bands = equivalence_experiment(smooth_family(*m, 4, 2), *t, *t, req);
  ASSERT_EQ(bands.size(), 2u);
  for (const auto& b : bands) {
    for (double r : b.ratios) EXPECT_EQ(r, 1.0);
    EXPECT_EQ(b.spread, 1.0);
  }
}

TEST(Equivalence, BandOfScaledFamilyIsUnchanged) {
  const Band a = make_band({1.0, 2.0, 3.0}, {2.0, 2.0, 2.0});
  const Band b = make_band({5.0, 10.0, 15.0}, {10.0, 10.0, 10.0});
  EXPECT_DOUBLE_EQ(a.spread, 3.0);
  EXPECT_DOUBLE_EQ(a.spread, b.spread);
  EXPECT_DOUBLE_EQ(a.min, 0.5);
  EXPECT_DOUBLE_EQ(a.max, 1.5);
}
