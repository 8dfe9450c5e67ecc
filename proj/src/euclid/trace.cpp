#include "bgt/euclid.hpp"

#include <cmath>

namespace bgt::euclid {

namespace {

double profile_bump(double tau) {
  const double u = 1.0 - 4.0 * tau * tau;
  return u > 0.0 ? std::exp(-1.0 / (u * u)) : 0.0;
}

// Trapezoid on [0, 1/2] of b(tau) cos(2 pi tau t). The spacing keeps the first
// alias of the oscillation far out in the (rapidly decaying) spectrum of b.
double cosine_integral(double t) {
  const double dt = 1.0 / (2.0 * std::abs(t) + 512.0);
  const int m = static_cast<int>(std::ceil(0.5 / dt));
  const double h = 0.5 / m;
  double acc = 0.5 * profile_bump(0.0);
  for (int i = 1; i < m; ++i) {
    const double tau = i * h;
    acc += profile_bump(tau) * std::cos(2.0 * M_PI * tau * t);
  }
  return acc * h;
}

}  // namespace

constexpr int kTableSize = 1 << 18;
constexpr double kTableStep = 1.0 / 16.0;

// rho(m / 16) for m in [0, kTableSize / 2): with tau spacing 1 / (kTableSize * kTableStep)
// the trapezoid sums for all m are one DFT of the sampled bump.
const std::vector<double>& profile_table() {
  static const std::vector<double> table = [] {
    GridFunction g(make_vec({0.0}), make_vec({0.5 * kTableSize}), {kTableSize});
    const double dtau = 1.0 / (kTableSize * kTableStep);
    for (int k = 0; k * dtau < 0.5; ++k) {
      const double b = profile_bump(k * dtau);
      g.values[static_cast<size_t>(k)] = b;
      if (k > 0) g.values[static_cast<size_t>(kTableSize - k)] = b;
    }
    const std::vector<Complex> spec = forward_fft(g);
    std::vector<double> out(kTableSize / 2);
    for (int m = 0; m < kTableSize / 2; ++m) out[static_cast<size_t>(m)] = spec[static_cast<size_t>(m)].real() / spec[0].real();
    out[0] = 1.0;
    return out;
  }();
  return table;
}

double ExtensionProfile::operator()(double t) const {
  if (t == 0.0) return 1.0;
  const std::vector<double>& table = profile_table();
  const double u = std::abs(t) / kTableStep;
  const int last = static_cast<int>(table.size()) - 5;
  if (u >= last) return 0.0;
  const int i0 = static_cast<int>(std::floor(u)) - 3;
  double acc = 0.0;
  for (int k = 0; k < 8; ++k) {
    double w = 1.0;
    for (int m = 0; m < 8; ++m)
      if (m != k) w *= (u - (i0 + m)) / static_cast<double>(k - m);
    acc += w * table[static_cast<size_t>(std::abs(i0 + k))];
  }
  return acc;
}

double ExtensionProfile::exact(double t) const {
  if (t == 0.0) return 1.0;
  static const double norm = cosine_integral(0.0);
  return cosine_integral(t) / norm;
}

GridFunction euclid_trace(const GridFunction& f, int k) {
  const int n = f.dim();
  if (k < 1 || k >= n) throw Error(ErrorKind::invalid_argument, "trace needs 1 <= k < n");
  const int c = n - k;
  std::vector<int> slice(static_cast<size_t>(c));
  for (int d = 0; d < c; ++d) {
    const double u = (f.half(d) - f.center(d)) / f.spacing(d);
    const double i = std::round(u);
    if (std::abs(u - i) > 1e-9 || i < 0 || i >= f.res[static_cast<size_t>(d)])
      throw Error(ErrorKind::slice_not_on_grid, "no grid node at t = 0 on axis " + std::to_string(d));
    slice[static_cast<size_t>(d)] = static_cast<int>(i);
  }
  GridFunction g(f.center.tail(k), f.half.tail(k),
                 std::vector<int>(f.res.begin() + c, f.res.end()),
                 std::numeric_limits<std::size_t>::max());
  std::vector<int> idx(static_cast<size_t>(n));
  for (int d = 0; d < c; ++d) idx[static_cast<size_t>(d)] = slice[static_cast<size_t>(d)];
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t r = i;
    for (int d = n - 1; d >= c; --d) {
      const auto res = static_cast<std::size_t>(f.res[static_cast<size_t>(d)]);
      idx[static_cast<size_t>(d)] = static_cast<int>(r % res);
      r /= res;
    }
    g.values[i] = f.values[f.flat_index(idx)];
  }
  return g;
}

GridFunction euclid_extend(const GridFunction& f, int n, const ExtensionProfile& rho,
                           const ExtensionOptions& opts) {
  const int k = f.dim();
  const int c = n - k;
  if (c < 1 || n > kMaxDim) throw Error(ErrorKind::invalid_argument, "extension needs k < n <= 4");
  if (std::abs(rho(opts.t_half)) > opts.tail_tol)
    throw Error(ErrorKind::box_too_small,
                "extension profile is " + std::to_string(std::abs(rho(opts.t_half))) +
                    " at the edge of the normal box");

  Vec center(n), half(n);
  center.head(c).setZero();
  half.head(c).setConstant(opts.t_half);
  center.tail(k) = f.center;
  half.tail(k) = f.half;
  std::vector<int> res(static_cast<size_t>(c), opts.t_res);
  res.insert(res.end(), f.res.begin(), f.res.end());
  GridFunction g(center, half, res);

  const DyadicDecomposition dd = dyadic_decompose(f);
  const int tr = opts.t_res;
  // rho(2^j t_i) per level and normal node; rho is even, so mirror the nonnegative half.
  std::vector<std::vector<double>> prof(static_cast<size_t>(dd.levels + 1),
                                        std::vector<double>(static_cast<size_t>(tr)));
  for (int j = 0; j <= dd.levels; ++j)
    for (int i = tr / 2; i < tr; ++i) {
      const double t = g.node(0, i);
      const double v = rho(std::ldexp(t, j));
      prof[static_cast<size_t>(j)][static_cast<size_t>(i)] = v;
      const int mirror = tr - i;
      if (mirror < tr && mirror != i) prof[static_cast<size_t>(j)][static_cast<size_t>(mirror)] = v;
    }
  for (int j = 0; j <= dd.levels; ++j)
    prof[static_cast<size_t>(j)][0] = rho(std::ldexp(g.node(0, 0), j));

  const std::size_t tangential = f.size();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const std::size_t xi = i % tangential;
    std::size_t r = i / tangential;
    Complex acc(0.0, 0.0);
    for (int j = 0; j <= dd.levels; ++j) {
      double w = 1.0;
      std::size_t rr = r;
      for (int d = 0; d < c; ++d) {
        w *= prof[static_cast<size_t>(j)][rr % static_cast<size_t>(tr)];
        rr /= static_cast<size_t>(tr);
      }
      acc += w * dd.pieces[static_cast<size_t>(j)].values[xi];
    }
    g.values[i] = acc;
  }
  return g;
}

}  // namespace bgt::euclid
