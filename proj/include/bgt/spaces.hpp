#pragma once

#include "bgt/atlas.hpp"
#include "bgt/euclid.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace bgt::spaces {

using atlas::FermiTrivialization;
using atlas::Trivialization;
using euclid::Complex;
using euclid::GridFunction;
using geometry::Space;
using geometry::Submanifold;

// Smooth function on a space, evaluated at canonical points.
struct ManifoldFunction {
  std::string id;
  std::function<Complex(const Point&)> eval;
  std::string family;

  Complex operator()(const Point& p) const { return eval(p); }
};

ManifoldFunction zero_function();
ManifoldFunction constant_function(double c);

// sum_j a_j cos(w_j . A(p) + phase_j) with A the ambient embedding, |w_j| <= 2.
std::vector<ManifoldFunction> smooth_family(const Space& m, int count, std::uint64_t seed);
// Real trigonometric polynomials in x in R^n with integer frequencies |k|_inf <= max_mode,
// so they are Z^n-periodic on raw coordinates.
std::vector<ManifoldFunction> trig_family(int n, int count, std::uint64_t seed, int max_mode = 2);
// Band-limited functions of the intrinsic parameter of a closed curve of the given period.
std::vector<ManifoldFunction> band_limited_family(double period, int count, std::uint64_t seed,
                                                  int max_mode = 3);

enum class NormKind { H, B, F, W };
const char* to_string(NormKind kind);

struct NormRequest {
  NormKind kind = NormKind::H;
  std::vector<double> s{0.0};
  double p = 2.0;
  double q = 2.0;  // ignored for H; B uses q = p
  int res = 64;
  bool check_alias = true;
};

struct NormReport {
  NormKind kind = NormKind::H;
  double s = 0.0, p = 2.0, q = 2.0;
  std::string trivialization;  // kind of trivialization
  std::string manifest_id;
  int res = 0;
  double value = 0.0;
  std::vector<double> contributions;  // per chart, value = (sum contribution^p)^{1/p}
  double seconds = 0.0;
};

// Grid nodes of chart alpha where the pulled-back cutoff is nonzero. The grid box is
// the cutoff support box with a 20% zero margin per side, zero-extended outside the domain.
struct ChartSamples {
  GridFunction grid;            // zero template
  std::vector<std::size_t> index;
  std::vector<Vec> coords;
  std::vector<Point> points;    // kappa_alpha(x)
  std::vector<double> cutoff;   // (h_alpha o kappa_alpha)(x)
};

ChartSamples sample_chart(const Trivialization& t, int alpha, int res);

// Localized norms of every family member for every s in the request:
// result[f][i] = (sum_alpha ||(h_alpha f) o kappa_alpha||^p)^{1/p} at s = request.s[i].
// When `contributions` is given it receives the per-chart terms [f][i][alpha].
std::vector<std::vector<double>> localized_norms(
    const std::vector<ManifoldFunction>& family, const Trivialization& t, const NormRequest& req,
    std::vector<std::vector<std::vector<double>>>* contributions = nullptr);

NormReport localized_norm(const ManifoldFunction& f, const Trivialization& t, NormKind kind,
                          double s, double p, double q, int res);

// Sum_{l <= k} ||nabla^l f||_{L_p(M)} with derivatives taken in reference charts
// (second differences with step fd_step plus Christoffel corrections) and the
// integral assembled from the charts and cutoffs of t.
std::vector<double> covariant_norms(const std::vector<ManifoldFunction>& family,
                                    const Trivialization& t, int k, double p, int res,
                                    double fd_step = 1e-3);
double covariant_norm(const ManifoldFunction& f, const Trivialization& t, int k, double p,
                      int res, double fd_step = 1e-3);

// (Tr f)(q) = sum over Fermi charts alpha of (h_alpha f)(kappa_alpha(0, x_alpha)),
// x_alpha = kappa'_alpha^{-1}(q). The result is a function on N (intrinsic points).
ManifoldFunction trace(const ManifoldFunction& f, std::shared_ptr<const FermiTrivialization> t);
// Trace at an ambient point, which must lie on N (point-not-on-N otherwise).
Complex trace_at_ambient(const ManifoldFunction& f, const FermiTrivialization& t, const Point& p,
                         double tol = 1e-9);

struct ExtensionOptions {
  int res = 1024;        // samples per axis of each boundary-chart grid
  int oversample = 4;    // band-limited refinement before interpolation
};

// Ex f' = sum_alpha [psi * Ex_{R^n}((h'_alpha f') o kappa'_alpha)] o kappa_alpha^{-1} on the
// 2R-tube, 0 elsewhere; psi(t, x) = chi(|x| / R) chi(1 + (|t| - 3R/2) / R).
ManifoldFunction extend(const ManifoldFunction& f, std::shared_ptr<const FermiTrivialization> t,
                        const ExtensionOptions& opts = {});

struct Band {
  std::vector<double> ratios;
  double min = 0.0;
  double max = 0.0;
  double spread = 0.0;  // max / min
};

Band make_band(const std::vector<double>& numer, const std::vector<double>& denom);

// Ratio bands of localized norms under t1 and t2, one band per s in the request.
std::vector<Band> equivalence_experiment(const std::vector<ManifoldFunction>& family,
                                         const Trivialization& t1, const Trivialization& t2,
                                         const NormRequest& req);

}  // namespace bgt::spaces
