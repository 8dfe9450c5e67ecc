#include "bgt/geometry.hpp"
#include "bgt/presets.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bgt;
using namespace bgt::geometry;

namespace {

constexpr double kPi = 3.141592653589793;

// Pullback of the Euclidean metric along an embedding, by central differences.
Mat embedded_metric(const std::function<Eigen::VectorXd(const Vec&)>& emb, const Vec& x, double h = 1e-6) {
  const int n = static_cast<int>(x.size());
  std::vector<Eigen::VectorXd> d;
  for (int i = 0; i < n; ++i) {
    Vec a = x, b = x;
    a(i) += h;
    b(i) -= h;
    d.push_back((emb(a) - emb(b)) / (2 * h));
  }
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = d[i].dot(d[j]);
  return g;
}

Eigen::VectorXd sphere_embedding(const Vec& x) {
  Eigen::VectorXd p(3);
  p << std::sin(x(0)) * std::cos(x(1)), std::sin(x(0)) * std::sin(x(1)), std::cos(x(0));
  return p;
}

}  // namespace

TEST(Metric, EuclideanIsIdentity) {
  auto m = make_euclidean(3);
  EXPECT_TRUE(metric_at(m->chart(0), make_vec({0.3, -1.2, 4.0})).isApprox(Mat::Identity(3, 3)));
}

TEST(Metric, SpherePolarAtQuarterPi) {
  auto m = make_sphere2();
  const Vec x = make_vec({kPi / 4, 0.0});
  const Mat g = metric_at(m->chart(0), x);
  const Mat oracle = embedded_metric(sphere_embedding, x);
  EXPECT_NEAR(g(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(g(1, 1), 0.5, 1e-12);
  EXPECT_NEAR(g(0, 1), 0.0, 1e-12);
  EXPECT_LT((g - oracle).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Metric, HyperbolicHalfPlaneAtUnitHeight) {
  auto m = make_hyperbolic2();
  const Mat g = metric_at(m->chart(0), make_vec({0.0, 1.0}));
  EXPECT_TRUE(g.isApprox(Mat::Identity(2, 2), 1e-14));
  const Mat g2 = metric_at(m->chart(0), make_vec({0.7, 2.0}));
  EXPECT_NEAR(g2(0, 0), 0.25, 1e-14);
}

TEST(Metric, OutsideDomainThrows) {
  auto m = make_sphere2();
  EXPECT_THROW(metric_at(m->chart(0), make_vec({0.0, 0.0})), Error);
}

TEST(Metric, SymmetricPositiveDefiniteOnAllPresets) {
  Rng rng(3);
  for (const auto& name : preset_names()) {
    auto m = make_preset(name, 2);
    for (int i = 0; i < 1000; ++i) {
      const ChartPoint c = m->locate_or_throw(m->sample(rng));
      const Mat g = metric_at(m->chart(c.chart), c.x);
      ASSERT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-14) << name;
      ASSERT_GT(min_eigenvalue(g), 0.0) << name;
    }
  }
}

TEST(Christoffel, ZeroForFlatPresets) {
  auto e = make_euclidean(2);
  auto t = make_flat_torus(2);
  EXPECT_EQ(christoffel(e->chart(0), make_vec({0.5, 0.5})).max_abs(), 0.0);
  EXPECT_EQ(christoffel(t->chart(0), make_vec({0.1, 0.2})).max_abs(), 0.0);
}

TEST(Christoffel, SphereThetaPhiPhi) {
  auto m = make_sphere2();
  const Vec x = make_vec({kPi / 4, 0.3});
  EXPECT_NEAR(christoffel(m->chart(0), x, 0.0)(0, 1, 1), -0.5, 1e-15);
  EXPECT_NEAR(christoffel_fd(m->chart(0), x)(0, 1, 1), -0.5, 1e-6);
}

TEST(Christoffel, SymmetricAndMatchesAnalyticSymbols) {
  Rng rng(5);
  for (auto m : {make_sphere2(), make_hyperbolic2()}) {
    for (int s = 0; s < 100; ++s) {
      const ChartPoint c = m->locate_or_throw(m->sample(rng));
      const Christoffel a = christoffel(m->chart(c.chart), c.x);
      const Christoffel f = christoffel_fd(m->chart(c.chart), c.x);
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            ASSERT_EQ(f(k, i, j), f(k, j, i));
            ASSERT_NEAR(a(k, i, j), f(k, i, j), 1e-6) << m->name();
          }
    }
  }
}

TEST(Transitions, TorusTranslationsAreIsometric) {
  const auto r = check_transition_consistency(*make_flat_torus(2), 200);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(r.max_residual, 1e-8);
}

TEST(Transitions, ConsistentOnAllPresets) {
  for (const auto& name : preset_names()) {
    const auto r = check_transition_consistency(*make_preset(name, 2), 200);
    EXPECT_TRUE(r.pass) << name << " residual " << r.max_residual;
    EXPECT_LT(r.max_residual, 1e-6) << name;
  }
}

TEST(Transitions, CorruptedTransitionFails) {
  auto m = make_sphere2();
  std::vector<TransitionMap> bad = m->transitions();
  ASSERT_FALSE(bad.empty());
  auto inner = bad[0].map;
  bad[0].map = [inner](const Vec& x) -> std::optional<Vec> {
    auto y = inner(x);
    if (y) (*y)(0) += 0.1 * x(0) * x(0);
    return y;
  };
  const auto r = check_transition_consistency(*m, bad, 200, 1e-5, 1e-6, 1);
  EXPECT_FALSE(r.pass);
}

TEST(MeanCurvature, EquatorIsTotallyGeodesic) {
  auto n = make_sphere_latitude(make_sphere2(), kPi / 2);
  EXPECT_LT(mean_curvature_tensor(*n, {0, make_vec({0.4})}).norm, 1e-6);
}

TEST(MeanCurvature, LatitudeQuarterPiHasUnitNorm) {
  auto n = make_sphere_latitude(make_sphere2(), kPi / 4);
  for (double s : {0.0, 0.5, 1.0})
    EXPECT_NEAR(mean_curvature_tensor(*n, {0, make_vec({s})}).norm, 1.0, 1e-5);
}

TEST(MeanCurvature, LatitudeMatchesCotangent) {
  auto m = make_sphere2();
  for (double theta : {0.6, 1.0, 2.0})
    EXPECT_NEAR(mean_curvature_tensor(*make_sphere_latitude(m, theta), {0, make_vec({0.2})}).norm,
                std::abs(std::cos(theta) / std::sin(theta)), 1e-5);
}

TEST(MeanCurvature, EuclideanLineIsFlat) {
  auto n = make_euclidean_subspace(make_euclidean(2), 1);
  EXPECT_LT(mean_curvature_tensor(*n, {0, make_vec({0.3})}).norm, 1e-8);
}

TEST(Presets, InjectivityAndCollarRadiiPositive) {
  for (const auto& name : preset_names()) {
    auto m = make_preset(name, 2);
    EXPECT_GT(m->injectivity_radius(), 0.0) << name;
    auto n = make_default_submanifold(m, name);
    EXPECT_GT(n->injectivity_radius(), 0.0) << name;
    EXPECT_GT(n->collar_radius(), 0.0) << name;
  }
}

TEST(Presets, ReferenceChartsCoverSampledPoints) {
  Rng rng(9);
  for (const auto& name : preset_names()) {
    auto m = make_preset(name, 2);
    for (int i = 0; i < 1000; ++i) ASSERT_TRUE(m->locate(m->sample(rng)).has_value()) << name;
  }
}

TEST(Presets, UnknownNameThrows) { EXPECT_THROW(make_preset("klein-bottle"), Error); }
