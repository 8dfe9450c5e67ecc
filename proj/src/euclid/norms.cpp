#include "bgt/atlas.hpp"
#include "bgt/euclid.hpp"

#include <cmath>

namespace bgt::euclid {

namespace {

void require_exponent(double p, const char* what) {
  if (!(p > 0.0)) throw Error(ErrorKind::invalid_argument, std::string(what) + " must be positive");
}

// sum_x |f|^2 dV computed from the spectrum, weighted per bin.
template <class W>
double plancherel(const GridFunction& f, const std::vector<Complex>& spec, W&& weight) {
  double acc = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) acc += weight(i) * std::norm(spec[i]);
  return acc * f.cell_volume() / static_cast<double>(spec.size());
}

// Shared kernel of B^s_{p,p} and F^s_{p,p}: (sum_j 2^{jsp} ||f_j||_p^p)^{1/p}.
double diagonal_norm(const GridFunction& f, double s, double p) {
  if (std::isinf(p)) {
    const DyadicDecomposition dd = dyadic_decompose(f);
    double m = 0.0;
    for (int j = 0; j <= dd.levels; ++j)
      m = std::max(m, std::exp2(j * s) * dd.pieces[static_cast<size_t>(j)].max_abs());
    return m;
  }
  if (p == 2.0) {
    const std::vector<Complex> spec = forward_fft(f);
    const std::vector<double> xi2 = squared_frequencies(f);
    const int levels = dyadic_levels(f);
    double acc = 0.0;
    for (int j = 0; j <= levels; ++j) {
      const double e = plancherel(f, spec, [&](std::size_t i) {
        const double phi = dyadic_multiplier(j, std::sqrt(xi2[i]));
        return phi * phi;
      });
      acc += std::exp2(2.0 * j * s) * e;
    }
    return std::sqrt(acc);
  }
  const DyadicDecomposition dd = dyadic_decompose(f);
  double acc = 0.0;
  for (int j = 0; j <= dd.levels; ++j)
    acc += std::exp2(j * s * p) * std::pow(lp_norm(dd.pieces[static_cast<size_t>(j)], p), p);
  return std::pow(acc, 1.0 / p);
}

}  // namespace

double lp_norm(const GridFunction& f, double p) {
  require_exponent(p, "p");
  if (std::isinf(p)) return f.max_abs();
  double acc = 0.0;
  if (p == 2.0)
    for (const Complex& v : f.values) acc += std::norm(v);
  else
    for (const Complex& v : f.values) acc += std::pow(std::abs(v), p);
  return std::pow(acc * f.cell_volume(), 1.0 / p);
}

std::vector<double> bessel_norms(const GridFunction& f, const std::vector<double>& s, double p,
                                 bool check_alias) {
  if (!(p > 1.0) || std::isinf(p))
    throw Error(ErrorKind::invalid_argument, "Bessel potential norms need 1 < p < inf");
  const std::vector<Complex> spec = forward_fft(f);
  if (check_alias) check_aliasing(f, spec);
  const std::vector<double> xi2 = squared_frequencies(f);
  std::vector<double> out;
  for (double si : s) {
    if (p == 2.0) {
      out.push_back(std::sqrt(plancherel(f, spec, [&](std::size_t i) { return std::pow(1.0 + xi2[i], si); })));
      continue;
    }
    std::vector<Complex> m = spec;
    for (std::size_t i = 0; i < m.size(); ++i) m[i] *= std::pow(1.0 + xi2[i], 0.5 * si);
    out.push_back(lp_norm(inverse_fft(f, std::move(m)), p));
  }
  return out;
}

double bessel_norm(const GridFunction& f, double s, double p, bool check_alias) {
  return bessel_norms(f, {s}, p, check_alias).front();
}

int dyadic_levels(const GridFunction& f) {
  double xi_max = 0.0;
  for (int d = 0; d < f.dim(); ++d) {
    const double x = frequency(f, d, f.res[static_cast<size_t>(d)] / 2);
    xi_max += x * x;
  }
  xi_max = std::sqrt(xi_max);
  return xi_max <= 1.0 ? 0 : static_cast<int>(std::ceil(std::log2(xi_max)));
}

double dyadic_multiplier(int j, double abs_xi) {
  if (j == 0) return atlas::bump(abs_xi);
  return atlas::bump(std::ldexp(abs_xi, -j)) - atlas::bump(std::ldexp(abs_xi, 1 - j));
}

DyadicDecomposition dyadic_decompose(const GridFunction& f) {
  DyadicDecomposition dd;
  dd.levels = dyadic_levels(f);
  const std::vector<Complex> spec = forward_fft(f);
  const std::vector<double> xi2 = squared_frequencies(f);
  for (int j = 0; j <= dd.levels; ++j) {
    std::vector<Complex> piece(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i)
      piece[i] = spec[i] * dyadic_multiplier(j, std::sqrt(xi2[i]));
    dd.pieces.push_back(inverse_fft(f, std::move(piece)));
  }
  return dd;
}

double besov_norm(const GridFunction& f, double s, double p, double q) {
  require_exponent(p, "p");
  require_exponent(q, "q");
  if (p == q) return diagonal_norm(f, s, p);
  const DyadicDecomposition dd = dyadic_decompose(f);
  double acc = 0.0;
  for (int j = 0; j <= dd.levels; ++j) {
    const double a = std::exp2(j * s) * lp_norm(dd.pieces[static_cast<size_t>(j)], p);
    acc = std::isinf(q) ? std::max(acc, a) : acc + std::pow(a, q);
  }
  return std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
}

double triebel_norm(const GridFunction& f, double s, double p, double q) {
  require_exponent(p, "p");
  require_exponent(q, "q");
  if (p == q) return diagonal_norm(f, s, p);
  if (std::isinf(p))
    throw Error(ErrorKind::invalid_argument, "Triebel-Lizorkin norms need p < inf unless p = q = inf");
  const DyadicDecomposition dd = dyadic_decompose(f);
  GridFunction g = f;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double acc = 0.0;
    for (int j = 0; j <= dd.levels; ++j) {
      const double a = std::exp2(j * s) * std::abs(dd.pieces[static_cast<size_t>(j)].values[i]);
      acc = std::isinf(q) ? std::max(acc, a) : acc + std::pow(a, q);
    }
    g.values[i] = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
  }
  return lp_norm(g, p);
}

}  // namespace bgt::euclid
