#include "bgt/euclid.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <random>

using namespace bgt;
using namespace bgt::euclid;

namespace {

constexpr double kPi = 3.141592653589793;

GridFunction gaussian_1d(double half, int res, double sigma = 1.0) {
  return GridFunction::sample(make_vec({0.0}), make_vec({half}), {res}, [sigma](const Vec& x) {
    return Complex(std::exp(-x(0) * x(0) / (2 * sigma * sigma)), 0.0);
  });
}

// Smooth envelope times a few low modes; spectrum well inside |xi| < 6.
GridFunction random_band_limited(std::mt19937& rng, double half = 16.0, int res = 256) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> w(0.0, 3.0);
  double a[3], k[3];
  for (int i = 0; i < 3; ++i) {
    a[i] = u(rng);
    k[i] = w(rng);
  }
  return GridFunction::sample(make_vec({0.0}), make_vec({half}), {res}, [&](const Vec& x) {
    double v = 0.0;
    for (int i = 0; i < 3; ++i) v += a[i] * std::cos(k[i] * x(0) + i);
    return Complex(v * std::exp(-x(0) * x(0) / 8.0), 0.0);
  });
}

// Direct O(N^2) DFT: ||((1+xi^2)^{s/2} f^)^v||_{L2}^2 = dx/N sum_k (1+xi_k^2)^s |F_k|^2.
double direct_bessel_l2(const GridFunction& f, double s) {
  const int n = f.res[0];
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j < n; ++j) acc += f.values[j] * std::polar(1.0, -2 * kPi * j * k / n);
    const int m = k < n / 2 ? k : k - n;
    const double xi = 2 * kPi * m / (2 * f.half(0));
    sum += std::pow(1 + xi * xi, s) * std::norm(acc);
  }
  return std::sqrt(f.spacing(0) / n * sum);
}

double rel_l2_diff(const GridFunction& a, const GridFunction& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.values[i] - b.values[i]);
    den += std::norm(b.values[i]);
  }
  return std::sqrt(num / den);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::invalid_argument;
}

}  // namespace

TEST(Grid, RejectsBadResolutionAndBudget) {
  EXPECT_THROW(GridFunction(make_vec({0.0}), make_vec({1.0}), {100}), Error);
  EXPECT_THROW(GridFunction(make_vec({0.0}), make_vec({1.0}), {4}), Error);
  EXPECT_EQ(kind_of([] { GridFunction(make_vec({0.0, 0.0}), make_vec({1.0, 1.0}), {64, 64}, 1000); }),
            ErrorKind::budget_exhausted);
}

TEST(LpNorm, ZeroAndHomogeneity) {
  const GridFunction z(make_vec({0.0}), make_vec({10.0}), {64});
  EXPECT_EQ(lp_norm(z, 2.0), 0.0);
  GridFunction g = gaussian_1d(10.0, 256);
  const double base = lp_norm(g, 3.0);
  for (auto& v : g.values) v *= 2.5;
  EXPECT_NEAR(lp_norm(g, 3.0), 2.5 * base, 1e-12 * base);
}

TEST(LpNorm, GaussianL2) {
  EXPECT_NEAR(lp_norm(gaussian_1d(10.0, 1024), 2.0), std::pow(kPi, 0.25), 1e-10);
}

TEST(LpNorm, SupNormIsMax) { EXPECT_NEAR(lp_norm(gaussian_1d(10.0, 256), kInf), 1.0, 1e-15); }

TEST(BesselNorm, OrderZeroIsLp) {
  std::mt19937 rng(1);
  for (int i = 0; i < 5; ++i) {
    const GridFunction f = random_band_limited(rng);
    for (double p : {1.5, 2.0, 4.0}) {
      const double lp = lp_norm(f, p);
      EXPECT_NEAR(bessel_norm(f, 0.0, p), lp, 1e-10 * lp);
    }
  }
}

TEST(BesselNorm, SingleModeScaling) {
  const double len = 2.0;
  const GridFunction f = GridFunction::sample(make_vec({0.0}), make_vec({len / 2}), {64}, [&](const Vec& x) {
    return Complex(std::sin(2 * kPi * x(0) / len), 0.0);
  });
  const double l2 = lp_norm(f, 2.0);
  for (double s : {-1.0, 0.5, 1.0, 2.5}) {
    const double want = std::pow(1 + std::pow(2 * kPi / len, 2), s / 2) * l2;
    EXPECT_NEAR(bessel_norm(f, s, 2.0), want, 1e-10 * want) << s;
  }
}

TEST(BesselNorm, GaussianMatchesDirectSpectralSum) {
  const GridFunction g = gaussian_1d(12.0, 256);
  for (double s : {1.0, 2.0}) {
    const double want = direct_bessel_l2(g, s);
    EXPECT_NEAR(bessel_norm(g, s, 2.0), want, 1e-8 * want) << s;
  }
  // At s = 2 the multiplier is (1 + xi^2)^2: ||f||^2 + 2||f'||^2 + ||f''||^2 = sqrt(pi) (1 + 1 + 3/4).
  EXPECT_NEAR(bessel_norm(g, 2.0, 2.0), std::sqrt(std::sqrt(kPi) * 2.75), 1e-8);
}

TEST(BesselNorm, MonotoneInSmoothnessAtP2) {
  std::mt19937 rng(2);
  const GridFunction f = random_band_limited(rng);
  const auto v = bessel_norms(f, {-1.0, 0.0, 0.5, 1.0, 2.0}, 2.0);
  for (size_t i = 1; i < v.size(); ++i) EXPECT_GE(v[i], v[i - 1]);
}

TEST(BesselNorm, RejectsEndpointExponents) {
  const GridFunction g = gaussian_1d(10.0, 64);
  EXPECT_THROW(bessel_norm(g, 1.0, 1.0), Error);
  EXPECT_THROW(bessel_norm(g, 1.0, kInf), Error);
}

TEST(Guards, AliasingAndDecay) {
  const GridFunction high = GridFunction::sample(make_vec({0.0}), make_vec({0.5}), {128}, [](const Vec& x) {
    return Complex(std::cos(2 * kPi * 60 * x(0)), 0.0);
  });
  EXPECT_EQ(kind_of([&] { bessel_norm(high, 1.0, 2.0); }), ErrorKind::aliasing_suspected);
  EXPECT_NO_THROW(bessel_norm(high, 1.0, 2.0, false));

  const GridFunction one = GridFunction::sample(make_vec({0.0}), make_vec({1.0}), {64},
                                                [](const Vec&) { return Complex(1.0, 0.0); });
  EXPECT_EQ(kind_of([&] { check_decay(one); }), ErrorKind::decay_violation);
  EXPECT_NO_THROW(check_decay(gaussian_1d(10.0, 256)));
}

TEST(Dyadic, ZeroHasZeroPieces) {
  const GridFunction z(make_vec({0.0}), make_vec({10.0}), {128});
  for (const auto& piece : dyadic_decompose(z).pieces) EXPECT_EQ(piece.max_abs(), 0.0);
  EXPECT_EQ(besov_norm(z, 1.0, 2.0, 2.0), 0.0);
  EXPECT_EQ(triebel_norm(z, 1.0, 2.0, 2.0), 0.0);
}

TEST(Dyadic, LowFrequencyIsSinglePiece) {
  const GridFunction f = gaussian_1d(200.0, 256, 20.0);
  const auto d = dyadic_decompose(f);
  EXPECT_LT(rel_l2_diff(d.pieces[0], f), 1e-12);
  for (int j = 1; j <= d.levels; ++j) EXPECT_LT(d.pieces[static_cast<size_t>(j)].max_abs(), 1e-12);
}

TEST(Dyadic, TwoModesReconstruct) {
  const GridFunction f = GridFunction::sample(make_vec({0.0}), make_vec({32.0}), {512}, [](const Vec& x) {
    return Complex((std::cos(0.5 * x(0)) + std::cos(12.0 * x(0))) * std::exp(-x(0) * x(0) / 32.0), 0.0);
  });
  const auto d = dyadic_decompose(f);
  GridFunction sum(f.center, f.half, f.res);
  std::vector<double> l2;
  for (const auto& piece : d.pieces) {
    for (size_t i = 0; i < sum.size(); ++i) sum.values[i] += piece.values[i];
    l2.push_back(lp_norm(piece, 2.0));
  }
  EXPECT_LT(rel_l2_diff(sum, f), 1e-8);
  // Energy sits at j = 0 (|xi| ~ 0.5) and j = 4 (|xi| ~ 12); other pieces are tails.
  const double total = lp_norm(f, 2.0);
  int dominant = 0;
  for (double v : l2) dominant += v > 0.2 * total;
  EXPECT_EQ(dominant, 2);
  EXPECT_GT(l2[0], 0.2 * total);
  EXPECT_GT(l2[4], 0.2 * total);
}

TEST(Dyadic, MultipliersSumToOne) {
  for (double xi : {0.0, 0.7, 1.3, 5.0, 40.0}) {
    double sum = 0.0;
    for (int j = 0; j < 10; ++j) sum += dyadic_multiplier(j, xi);
    EXPECT_NEAR(sum, 1.0, 1e-15) << xi;
  }
}

TEST(BesovTriebel, DiagonalScalesAgree) {
  std::mt19937 rng(3);
  for (int i = 0; i < 5; ++i) {
    const GridFunction f = random_band_limited(rng);
    for (double s : {0.0, 0.5, 1.5})
      EXPECT_EQ(besov_norm(f, s, 2.0, 2.0), triebel_norm(f, s, 2.0, 2.0)) << s;
  }
}

TEST(BesovTriebel, TriebelP2Q2TracksBessel) {
  std::mt19937 rng(4);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GridFunction f = random_band_limited(rng);
    const double r = triebel_norm(f, 1.0, 2.0, 2.0) / bessel_norm(f, 1.0, 2.0);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  EXPECT_LT(hi / lo, 10.0);
}

TEST(Trace, GaussianRestrictsToAxis) {
  const GridFunction f = GridFunction::sample(make_vec({0.0, 0.0}), make_vec({8.0, 8.0}), {64, 64}, [](const Vec& x) {
    return Complex(std::exp(-(x(0) * x(0) + x(1) * x(1)) / 2), 0.0);
  });
  const GridFunction tr = euclid_trace(f, 1);
  ASSERT_EQ(tr.dim(), 1);
  ASSERT_EQ(tr.res[0], 64);
  for (int i = 0; i < 64; ++i) {
    const double x = tr.node(0, i);
    EXPECT_NEAR(tr.values[static_cast<size_t>(i)].real(), std::exp(-x * x / 2), 1e-12);
  }
}

TEST(Trace, ConstantAndSeparable) {
  const GridFunction c = GridFunction::sample(make_vec({0.0, 1.0}), make_vec({2.0, 2.0}), {16, 16},
                                              [](const Vec&) { return Complex(3.0, 0.0); });
  for (const auto& v : euclid_trace(c, 1).values) EXPECT_EQ(v, Complex(3.0, 0.0));
  const GridFunction s = GridFunction::sample(make_vec({0.0, 0.0}), make_vec({4.0, 4.0}), {32, 32}, [](const Vec& x) {
    return Complex(std::cos(3 * x(0)) * std::sin(x(1)), 0.0);
  });
  const GridFunction tr = euclid_trace(s, 1);
  for (int i = 0; i < 32; ++i)
    EXPECT_NEAR(tr.values[static_cast<size_t>(i)].real(), std::sin(tr.node(0, i)), 1e-15);
}

TEST(Trace, SliceOffGridThrows) {
  const GridFunction f(make_vec({0.01, 0.0}), make_vec({1.0, 1.0}), {16, 16});
  EXPECT_EQ(kind_of([&] { euclid_trace(f, 1); }), ErrorKind::slice_not_on_grid);
}

TEST(ExtensionProfile, NormalizedAndTabulated) {
  const ExtensionProfile rho;
  EXPECT_NEAR(rho(0.0), 1.0, 1e-14);
  EXPECT_NEAR(rho.exact(0.0), 1.0, 1e-14);
  for (double t : {0.3, 1.7, 4.2, 11.0}) EXPECT_NEAR(rho(t), rho.exact(t), 1e-10) << t;
  EXPECT_LT(std::abs(rho(200.0)), 1e-6);
}

TEST(Extension, ZeroExtendsToZero) {
  const GridFunction z(make_vec({0.0}), make_vec({8.0}), {32});
  const GridFunction ex = euclid_extend(z, 2);
  EXPECT_EQ(ex.dim(), 2);
  EXPECT_EQ(ex.max_abs(), 0.0);
}

TEST(Extension, TraceRecoversBandLimitedInput) {
  std::mt19937 rng(5);
  for (int i = 0; i < 5; ++i) {
    const GridFunction f = random_band_limited(rng, 16.0, 128);
    EXPECT_LT(rel_l2_diff(euclid_trace(euclid_extend(f, 2), 1), f), 1e-8);
  }
}

TEST(Extension, LowModeIsProfileProduct) {
  const GridFunction f = gaussian_1d(200.0, 64, 20.0);
  const GridFunction ex = euclid_extend(f, 2);
  const ExtensionProfile rho;
  std::mt19937 rng(6);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(ex.size()) - 1);
  for (int k = 0; k < 200; ++k) {
    const size_t i = static_cast<size_t>(pick(rng));
    const Vec x = ex.point(i);
    const double want = std::exp(-x(1) * x(1) / 800.0) * rho(x(0));
    EXPECT_NEAR(ex.values[i].real(), want, 1e-10);
  }
}

TEST(Extension, BoundedFromHalfOrderBesov) {
  std::mt19937 rng(7);
  // The default t-box is too coarse for the upper slabs rho(2^j t) at this resolution.
  ExtensionOptions opts;
  opts.t_half = 32.0;
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 20; ++i) {
    const GridFunction f = random_band_limited(rng, 16.0, 128);
    const double r = bessel_norm(euclid_extend(f, 2, {}, opts), 1.0, 2.0) / besov_norm(f, 0.5, 2.0, 2.0);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  EXPECT_LT(hi / lo, 10.0);
}

TEST(Upsample, KeepsNodesAndInterpolatesSmoothly) {
  const GridFunction g = gaussian_1d(10.0, 128);
  const GridFunction u = upsample(g, 2);
  ASSERT_EQ(u.res[0], 256);
  for (int i = 0; i < 128; ++i) EXPECT_NEAR(std::abs(u.values[2 * i] - g.values[i]), 0.0, 1e-12);
  for (int i = 1; i < 256; i += 2) {
    const double x = u.node(0, i);
    EXPECT_NEAR(u.values[static_cast<size_t>(i)].real(), std::exp(-x * x / 2), 1e-10);
  }
  EXPECT_THROW(upsample(g, 3), Error);
}

TEST(Interpolate, OffNodeAndOutside) {
  const GridFunction g = gaussian_1d(10.0, 256);
  for (double x : {0.013, -1.37, 2.5})
    EXPECT_NEAR(interpolate(g, make_vec({x})).real(), std::exp(-x * x / 2), 1e-6) << x;
  EXPECT_EQ(interpolate(g, make_vec({11.0})), Complex(0.0, 0.0));
}

TEST(Container, BinaryRoundTrip) {
  const GridFunction f = GridFunction::sample(make_vec({0.5, -1.0}), make_vec({2.0, 3.0}), {8, 16}, [](const Vec& x) {
    return Complex(x(0), x(1) * x(1));
  });
  const std::string path = ::testing::TempDir() + "grid_roundtrip.bin";
  write_binary(f, path);
  const GridFunction g = read_binary(path);
  std::remove(path.c_str());
  EXPECT_EQ(g.res, f.res);
  EXPECT_EQ(g.center, f.center);
  EXPECT_EQ(g.half, f.half);
  EXPECT_EQ(g.values, f.values);
}
