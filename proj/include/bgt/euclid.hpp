#pragma once

#include "bgt/core.hpp"

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace bgt::euclid {

using Complex = std::complex<double>;

inline constexpr std::size_t kDefaultSampleBudget = std::size_t{1} << 24;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Samples of a function on the box center +- half, axis d holding nodes
// center_d - half_d + i * 2 half_d / res_d, i = 0 .. res_d - 1. Row-major, the
// last axis varies fastest.
struct GridFunction {
  Vec center;
  Vec half;
  std::vector<int> res;
  std::vector<Complex> values;

  GridFunction() = default;
  // Zero function; throws invalid-argument unless every res is a power of two >= 8
  // and budget-exhausted when the sample count exceeds `budget`.
  GridFunction(Vec center, Vec half, std::vector<int> res,
               std::size_t budget = kDefaultSampleBudget);

  int dim() const { return static_cast<int>(res.size()); }
  std::size_t size() const { return values.size(); }
  double spacing(int d) const { return 2.0 * half(d) / res[static_cast<size_t>(d)]; }
  double node(int d, int i) const { return center(d) - half(d) + i * spacing(d); }
  double cell_volume() const;
  Vec point(std::size_t flat) const;
  std::size_t flat_index(const std::vector<int>& idx) const;
  double max_abs() const;

  static GridFunction sample(const Vec& center, const Vec& half, const std::vector<int>& res,
                             const std::function<Complex(const Vec&)>& f,
                             std::size_t budget = kDefaultSampleBudget);
};

// Angular frequency of discrete mode m (m in [-res/2, res/2)) along axis d.
double frequency(const GridFunction& f, int d, int m);
// Signed mode number of FFT bin i along an axis of length res.
int signed_mode(int i, int res);

// Unnormalized forward DFT over all axes (FFTW ordering) and its inverse divided by N.
std::vector<Complex> forward_fft(const GridFunction& f);
GridFunction inverse_fft(const GridFunction& like, std::vector<Complex> spectrum);

// |xi|^2 at each FFT bin.
std::vector<double> squared_frequencies(const GridFunction& f);

// Throws decay-violation when |f| >= tol on the outer 10% shell of the box.
void check_decay(const GridFunction& f, double tol = 1e-8);
// Throws aliasing-suspected when the top 10% of modes (per axis) carry more
// than `fraction` of the spectral energy.
void check_aliasing(const GridFunction& f, const std::vector<Complex>& spectrum,
                    double fraction = 1e-6);

double lp_norm(const GridFunction& f, double p);

// ||((1 + |xi|^2)^{s/2} f^)^v||_{L_p}, 1 < p < inf.
double bessel_norm(const GridFunction& f, double s, double p, bool check_alias = true);
// Same norm for several s sharing one forward transform.
std::vector<double> bessel_norms(const GridFunction& f, const std::vector<double>& s, double p,
                                 bool check_alias = true);

struct DyadicDecomposition {
  int levels = 0;  // J, pieces j = 0 .. J
  std::vector<GridFunction> pieces;
};

// phi_0(xi) = chi(|xi|), phi_j(xi) = chi(2^-j |xi|) - chi(2^{1-j} |xi|), where chi is
// the atlas bump; J is the first level with chi(2^-J |xi|) = 1 on the whole grid.
int dyadic_levels(const GridFunction& f);
double dyadic_multiplier(int j, double abs_xi);
DyadicDecomposition dyadic_decompose(const GridFunction& f);

// p, q in (0, inf]; Triebel-Lizorkin requires p < inf unless p = q = inf.
double besov_norm(const GridFunction& f, double s, double p, double q);
double triebel_norm(const GridFunction& f, double s, double p, double q);

// Restriction to the slice x_1 = ... = x_{n-k} = 0; throws slice-not-on-grid.
GridFunction euclid_trace(const GridFunction& f, int k);

// rho(t) = int b(tau) cos(2 pi tau t) dtau / int b with the smooth bump
// b(tau) = exp(-1/(1 - 4 tau^2)^2) on |tau| < 1/2; rho(0) = 1.
class ExtensionProfile {
 public:
  // Interpolated from a table on t in [0, 8192) with spacing 1/16 (one FFT);
  // 0 beyond the table, where rho is far below double precision.
  double operator()(double t) const;
  // Direct trapezoid quadrature.
  double exact(double t) const;
};

struct ExtensionOptions {
  double t_half = 256.0;  // half-width of each normal axis
  int t_res = 1024;
  double tail_tol = 1e-6;
};

// Ex f'(t, x') = sum_j f'_j(x') prod_i rho(2^j t_i) on a grid whose first n-k
// axes are the normal directions t (centered at 0). Throws box-too-small when
// rho does not decay to tail_tol at the edge of the t-box.
GridFunction euclid_extend(const GridFunction& f, int n, const ExtensionProfile& rho = {},
                           const ExtensionOptions& opts = {});

// Band-limited refinement by `factor` (spectral zero padding).
GridFunction upsample(const GridFunction& f, int factor);
// Tensor 8-point Lagrange interpolation; zero outside the box.
Complex interpolate(const GridFunction& f, const Vec& x);

// Little-endian container: "BGTG", u32 n, n doubles center, n doubles half,
// n u32 res, then interleaved complex doubles.
void write_binary(const GridFunction& f, const std::string& path);
GridFunction read_binary(const std::string& path);
// Columns x0..x{n-1}, re, im.
void write_csv(const GridFunction& f, const std::string& path);

}  // namespace bgt::euclid
