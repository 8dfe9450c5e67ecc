#include "bgt/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace bgt::spaces {

ManifoldFunction zero_function() {
  return {"zero", [](const Point&) { return Complex(0.0, 0.0); }, "constant"};
}

ManifoldFunction constant_function(double c) {
  return {"const", [c](const Point&) { return Complex(c, 0.0); }, "constant"};
}

std::vector<ManifoldFunction> smooth_family(const Space& m, int count, std::uint64_t seed) {
  geometry::Rng rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
  const Space* space = &m;
  const auto dim = m.ambient(m.canonical(m.from_unit(Vec::Constant(m.dim(), 0.5), 0.0))).size();
  std::vector<ManifoldFunction> out;
  for (int i = 0; i < count; ++i) {
    struct Term {
      double a;
      Eigen::VectorXd w;
      double phase;
    };
    std::vector<Term> terms;
    for (int j = 0; j < 3; ++j) {
      Eigen::VectorXd w(dim);
      for (Eigen::Index d = 0; d < dim; ++d) w(d) = gauss(rng);
      w *= 2.0 * std::uniform_real_distribution<double>(0.2, 1.0)(rng) / w.norm();
      terms.push_back({gauss(rng), w, uni(rng)});
    }
    out.push_back({"smooth-" + std::to_string(i),
                   [space, terms](const Point& p) {
                     const Eigen::VectorXd a = space->ambient(p);
                     double v = 0.0;
                     for (const Term& t : terms) v += t.a * std::cos(t.w.dot(a) + t.phase);
                     return Complex(v, 0.0);
                   },
                   "smooth"});
  }
  return out;
}

std::vector<ManifoldFunction> trig_family(int n, int count, std::uint64_t seed, int max_mode) {
  geometry::Rng rng(seed);
  std::normal_distribution<double> gauss;
  const int side = 2 * max_mode + 1;
  int modes = 1;
  for (int d = 0; d < n; ++d) modes *= side;
  std::vector<ManifoldFunction> out;
  for (int i = 0; i < count; ++i) {
    std::vector<std::pair<Vec, std::pair<double, double>>> terms;
    for (int m = 0; m < modes; ++m) {
      Vec k(n);
      int norm1 = 0;
      for (int d = 0, r = m; d < n; ++d, r /= side) {
        k(d) = r % side - max_mode;
        norm1 += std::abs(r % side - max_mode);
      }
      // Geometric decay keeps the family smooth and comparable across members.
      const double scale = std::pow(0.5, norm1);
      terms.push_back({k, {scale * gauss(rng), scale * gauss(rng)}});
    }
    out.push_back({"trig-" + std::to_string(i),
                   [terms](const Point& x) {
                     double v = 0.0;
                     for (const auto& [k, c] : terms) {
                       const double arg = 2.0 * M_PI * k.dot(x);
                       v += c.first * std::cos(arg) + c.second * std::sin(arg);
                     }
                     return Complex(v, 0.0);
                   },
                   "trig"});
  }
  return out;
}

std::vector<ManifoldFunction> band_limited_family(double period, int count, std::uint64_t seed,
                                                  int max_mode) {
  geometry::Rng rng(seed);
  std::normal_distribution<double> gauss;
  std::vector<ManifoldFunction> out;
  for (int i = 0; i < count; ++i) {
    std::vector<std::pair<double, double>> c;
    for (int m = 0; m <= max_mode; ++m) c.emplace_back(gauss(rng), m == 0 ? 0.0 : gauss(rng));
    out.push_back({"band-" + std::to_string(i),
                   [c, period](const Point& q) {
                     double v = 0.0;
                     for (size_t m = 0; m < c.size(); ++m) {
                       const double arg = 2.0 * M_PI * static_cast<double>(m) * q(0) / period;
                       v += c[m].first * std::cos(arg) + c[m].second * std::sin(arg);
                     }
                     return Complex(v, 0.0);
                   },
                   "band-limited"});
  }
  return out;
}

const char* to_string(NormKind kind) {
  switch (kind) {
    case NormKind::H: return "H";
    case NormKind::B: return "B";
    case NormKind::F: return "F";
    case NormKind::W: return "W";
  }
  return "?";
}

ChartSamples sample_chart(const Trivialization& t, int alpha, int res) {
  const geometry::Chart& chart = t.chart(alpha);
  const geometry::Domain& dom = chart.domain();
  const int n = dom.dim();
  ChartSamples cs;
  // The box is sized by the cutoff support, leaving a zero margin of 20% per side.
  const Vec w = t.support_half_width(alpha);
  cs.grid = GridFunction(dom.center, w / 0.8, std::vector<int>(static_cast<size_t>(n), res));

  std::vector<int> lo(static_cast<size_t>(n)), hi(static_cast<size_t>(n));
  for (int d = 0; d < n; ++d) {
    const double start = cs.grid.center(d) - cs.grid.half(d);
    lo[static_cast<size_t>(d)] = std::max(0, static_cast<int>(std::ceil((dom.center(d) - w(d) - start) / cs.grid.spacing(d))));
    hi[static_cast<size_t>(d)] = std::min(res - 1, static_cast<int>(std::floor((dom.center(d) + w(d) - start) / cs.grid.spacing(d))));
    if (lo[static_cast<size_t>(d)] > hi[static_cast<size_t>(d)]) return cs;
  }
  std::vector<int> idx = lo;
  Vec x(n);
  while (true) {
    for (int d = 0; d < n; ++d) x(d) = cs.grid.node(d, idx[static_cast<size_t>(d)]);
    if (chart.contains(x)) {
      const double h = t.pulled_cutoff(alpha, x);
      if (h > 0.0) {
        try {
          cs.points.push_back(chart.forward(x));
        } catch (const Error& e) {
          throw Error(ErrorKind::chart_evaluation_failure, chart.id() + ": " + e.what());
        }
        cs.index.push_back(cs.grid.flat_index(idx));
        cs.coords.push_back(x);
        cs.cutoff.push_back(h);
      }
    }
    int d = n - 1;
    while (d >= 0 && ++idx[static_cast<size_t>(d)] > hi[static_cast<size_t>(d)]) {
      idx[static_cast<size_t>(d)] = lo[static_cast<size_t>(d)];
      --d;
    }
    if (d < 0) break;
  }
  return cs;
}

Band make_band(const std::vector<double>& numer, const std::vector<double>& denom) {
  if (numer.size() != denom.size() || numer.empty())
    throw Error(ErrorKind::invalid_argument, "ratio band needs matching nonempty families");
  Band b;
  for (size_t i = 0; i < numer.size(); ++i) b.ratios.push_back(numer[i] / denom[i]);
  b.min = *std::min_element(b.ratios.begin(), b.ratios.end());
  b.max = *std::max_element(b.ratios.begin(), b.ratios.end());
  b.spread = b.max / b.min;
  return b;
}

std::vector<Band> equivalence_experiment(const std::vector<ManifoldFunction>& family,
                                         const Trivialization& t1, const Trivialization& t2,
                                         const NormRequest& req) {
  const auto a = localized_norms(family, t1, req);
  const auto b = &t1 == &t2 ? a : localized_norms(family, t2, req);
  std::vector<Band> out;
  for (size_t i = 0; i < req.s.size(); ++i) {
    std::vector<double> na, nb;
    for (size_t f = 0; f < family.size(); ++f) {
      na.push_back(a[f][i]);
      nb.push_back(b[f][i]);
    }
    out.push_back(make_band(na, nb));
  }
  return out;
}

}  // namespace bgt::spaces
