#include "bgt/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace bgt::atlas {

namespace {

using Values = Eigen::VectorXd;
using Field = std::function<std::optional<Values>(const Vec&)>;

// Five-point stencil weights on offsets -2..2 for derivative orders 0..3 (times h^-order).
constexpr double kWeights[4][5] = {
    {0.0, 0.0, 1.0, 0.0, 0.0},
    {0.0, -0.5, 0.0, 0.5, 0.0},
    {0.0, 1.0, -2.0, 1.0, 0.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
};

int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Max |D^a F_i(x)| per order |a| = 0..k_max by tensor-product central differences.
std::optional<std::vector<double>> derivative_maxima(const Field& f, const Vec& x, double h,
                                                     int k_max) {
  const int n = static_cast<int>(x.size());
  const int grid = ipow(5, n);
  std::vector<Values> vals(static_cast<size_t>(grid));
  std::vector<int> idx(static_cast<size_t>(n));
  for (int g = 0; g < grid; ++g) {
    Vec y = x;
    for (int d = 0, r = g; d < n; ++d, r /= 5) y(d) += h * (r % 5 - 2);
    auto v = f(y);
    if (!v) return std::nullopt;
    vals[static_cast<size_t>(g)] = *v;
  }
  std::vector<double> out(static_cast<size_t>(k_max + 1), 0.0);
  const int m = static_cast<int>(vals[0].size());
  for (int a = 0; a < ipow(4, n); ++a) {
    int order = 0;
    std::vector<int> ord(static_cast<size_t>(n));
    for (int d = 0, r = a; d < n; ++d, r /= 4) {
      ord[static_cast<size_t>(d)] = r % 4;
      order += r % 4;
    }
    if (order > k_max) continue;
    Values acc = Values::Zero(m);
    for (int g = 0; g < grid; ++g) {
      double w = 1.0;
      for (int d = 0, r = g; d < n && w != 0.0; ++d, r /= 5) w *= kWeights[ord[static_cast<size_t>(d)]][r % 5];
      if (w != 0.0) acc += w * vals[static_cast<size_t>(g)];
    }
    const double v = acc.cwiseAbs().maxCoeff() / std::pow(h, order);
    auto& slot = out[static_cast<size_t>(order)];
    slot = std::isfinite(v) ? std::max(slot, v) : v;
  }
  return out;
}

// Accumulates per-order maxima at steps h and h/2 and compares them.
class OrderTable {
 public:
  explicit OrderTable(int k_max) : coarse_(static_cast<size_t>(k_max + 1), 0.0),
                                   fine_(static_cast<size_t>(k_max + 1), 0.0) {}

  void add(const Field& f, const Vec& x, double h, int k_max) {
    auto c = derivative_maxima(f, x, h, k_max);
    auto q = derivative_maxima(f, x, 0.5 * h, k_max);
    if (!c || !q) return;
    for (size_t k = 0; k < coarse_.size(); ++k) {
      merge(coarse_[k], (*c)[k]);
      merge(fine_[k], (*q)[k]);
    }
    ++samples_;
  }

  DerivativeReport finish(std::string what, double step, double floor) const {
    DerivativeReport r;
    r.what = std::move(what);
    r.samples = samples_;
    r.step = step;
    r.pass = samples_ > 0;
    for (size_t k = 0; k < coarse_.size(); ++k) {
      OrderEstimate e;
      e.order = static_cast<int>(k);
      e.coarse = coarse_[k];
      e.fine = fine_[k];
      e.finite = std::isfinite(e.coarse) && std::isfinite(e.fine);
      if (e.finite) {
        const double hi = std::max({e.coarse, e.fine, floor});
        const double lo = std::max(std::min(e.coarse, e.fine), floor);
        e.ratio = hi / lo;
      } else {
        e.ratio = std::numeric_limits<double>::infinity();
      }
      e.stable = e.finite && e.ratio < 2.0;
      r.pass = r.pass && e.stable;
      r.orders.push_back(e);
    }
    return r;
  }

 private:
  static void merge(double& slot, double v) {
    if (!std::isfinite(v) || !std::isfinite(slot)) slot = std::isfinite(slot) ? v : slot;
    else slot = std::max(slot, v);
  }

  std::vector<double> coarse_;
  std::vector<double> fine_;
  int samples_ = 0;
};

// Representative subset of chart indices: all when few, otherwise evenly strided,
// split between Fermi and complement charts when the trivialization has both.
std::vector<int> chart_sample(const Trivialization& t, int max_charts) {
  auto strided = [](int lo, int hi, int count, std::vector<int>& out) {
    const int span = hi - lo;
    if (span <= 0) return;
    if (span <= count) {
      for (int a = lo; a < hi; ++a) out.push_back(a);
      return;
    }
    for (int i = 0; i < count; ++i) out.push_back(lo + static_cast<int>(static_cast<long>(i) * span / count));
  };
  std::vector<int> out;
  if (const auto* f = dynamic_cast<const FermiTrivialization*>(&t)) {
    const int near = f->near_count();
    const int far = t.size() - near;
    const int near_budget = std::max(max_charts - std::min(far, max_charts / 2), max_charts / 2);
    strided(0, near, near_budget, out);
    strided(near, t.size(), max_charts - std::min(near, near_budget), out);
  } else {
    strided(0, t.size(), max_charts, out);
  }
  return out;
}

// Odd lattice (always containing 0 on each axis) over the support box of chart alpha.
std::vector<Vec> support_lattice(const Trivialization& t, int alpha, int per_axis) {
  const Vec w = t.support_half_width(alpha);
  const int n = static_cast<int>(w.size());
  const int m = per_axis | 1;
  std::vector<Vec> out;
  for (int g = 0; g < ipow(m, n); ++g) {
    Vec x(n);
    for (int d = 0, r = g; d < n; ++d, r /= m)
      x(d) = m == 1 ? 0.0 : w(d) * (2.0 * (r % m) / (m - 1) - 1.0);
    out.push_back(x);
  }
  return out;
}

bool stencil_inside(const geometry::Domain& dom, const Vec& x, double reach) {
  const int n = dom.dim();
  for (int corner = 0; corner < (1 << n); ++corner) {
    Vec y = x;
    for (int d = 0; d < n; ++d) y(d) += (corner >> d & 1) ? reach : -reach;
    if (!dom.contains(y)) return false;
  }
  return true;
}

double chart_step(const Trivialization& t, int alpha, double rel) {
  return rel * t.support_half_width(alpha).minCoeff();
}

}  // namespace

PartitionReport check_partition(const Trivialization& t, int samples, std::uint64_t seed,
                                double tol) {
  PartitionReport r;
  r.min_cutoff = 1.0;
  const Space& m = t.space();
  geometry::Rng rng(seed);
  CutoffList list;
  for (int s = 0; s < samples; ++s) {
    const Point p = m.canonical(m.sample(rng, 0.0));
    t.cutoffs(p, list);
    double sum = 0.0;
    for (const auto& [a, h] : list) {
      sum += h;
      r.min_cutoff = std::min(r.min_cutoff, h);
      r.max_cutoff = std::max(r.max_cutoff, h);
      if (!t.in_domain(a, p)) ++r.support_violations;
    }
    if (list.empty()) ++r.uncovered;
    r.max_sum_error = std::max(r.max_sum_error, std::abs(sum - 1.0));

    int count = 0;
    for (int a = 0; a < t.size(); ++a) {
      if (m.distance_lower_bound(p, t.center(a)) >= t.domain_reach(a) * (1 + 1e-9)) continue;
      if (t.in_domain(a, p)) ++count;
    }
    r.max_multiplicity = std::max(r.max_multiplicity, count);
    ++r.samples;
  }
  if (r.samples == 0) r.min_cutoff = 0.0;
  r.pass = r.max_sum_error < tol && r.support_violations == 0 && r.uncovered == 0 &&
           r.min_cutoff >= 0.0 && r.max_cutoff <= 1.0 + tol &&
           r.max_multiplicity <= t.multiplicity_bound();
  return r;
}

double fermi_slice_residual(const FermiTrivialization& t, int samples_per_chart) {
  const Submanifold& n = t.submanifold();
  const int k = n.dim();
  const int c = n.codim();
  const double reach = 1.9 * t.radius();
  geometry::Rng rng(5);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int a = 0; a < t.near_count(); ++a) {
    const GeodesicChartMap& nm = t.boundary().chart_map(a);
    for (int i = 0; i < samples_per_chart; ++i) {
      Vec dir(k);
      for (int d = 0; d < k; ++d) dir(d) = gauss(rng);
      dir.normalize();
      const double s = samples_per_chart == 1 ? 0.0
                                              : reach * (2.0 * i / (samples_per_chart - 1) - 1.0);
      const Vec x = s * dir;
      const Point p = n.include(nm.forward(x));
      auto tx = t.fermi_map(a).inverse(p);
      if (!tx) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, tx->head(c).cwiseAbs().maxCoeff());
      worst = std::max(worst, (tx->tail(k) - x).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

AdmissibilityReport admissibility_report(const Trivialization& t, const Trivialization& t_geo,
                                         int k_max, const DiagnosticOptions& opts) {
  if (k_max < 0 || k_max > 3) throw Error(ErrorKind::invalid_argument, "k_max must lie in [0, 3]");
  const Space& m = t.space();
  const auto charts = chart_sample(t, opts.max_charts);

  struct Probe {
    int alpha, beta;
    Vec x;
  };
  std::vector<Probe> probes;
  for (int a : charts) {
    const Chart& ca = t.chart(a);
    const double h = chart_step(t, a, opts.step);
    for (const Vec& x : support_lattice(t, a, opts.lattice)) {
      if (!stencil_inside(ca.domain(), x, 2.0 * h)) continue;
      const Point p = ca.forward(x);
      for (int b = 0; b < t_geo.size(); ++b) {
        if (&t == &t_geo && a == b) continue;
        if (m.distance_lower_bound(p, t_geo.center(b)) >= t_geo.radius()) continue;
        const Chart& cb = t_geo.chart(b);
        auto y = cb.inverse(p);
        if (!y || cb.domain().depth(*y) < 0.25) continue;
        probes.push_back({a, b, x});
      }
    }
  }
  if (probes.empty())
    throw Error(ErrorKind::insufficient_overlap_samples, "no overlapping chart pairs found");
  if (static_cast<int>(probes.size()) > opts.max_pairs) {
    geometry::Rng rng(opts.seed);
    std::shuffle(probes.begin(), probes.end(), rng);
    probes.resize(static_cast<size_t>(opts.max_pairs));
  }

  AdmissibilityReport r;
  OrderTable b1(k_max);
  for (const Probe& pr : probes) {
    const Chart& ca = t.chart(pr.alpha);
    const Chart& cb = t_geo.chart(pr.beta);
    b1.add([&](const Vec& x) -> std::optional<Values> {
             auto y = cb.inverse(ca.forward(x));
             if (!y) return std::nullopt;
             return Values(*y);
           },
           pr.x,
           chart_step(t, pr.alpha, opts.step), k_max);
  }
  r.transitions = b1.finish("transition derivatives", opts.step, opts.noise_floor);

  OrderTable b2(k_max);
  for (int a : charts) {
    const double h = chart_step(t, a, opts.step);
    const Field f = [&t, a](const Vec& x) -> std::optional<Values> {
      return Values::Constant(1, t.pulled_cutoff(a, x));
    };
    const Chart& ca = t.chart(a);
    for (const Vec& x : support_lattice(t, a, opts.lattice)) {
      // The partition is only certified on the region of interest.
      if (ca.contains(x) && !m.in_region(ca.forward(x))) continue;
      b2.add(f, x, h, k_max);
    }
  }
  r.cutoffs = b2.finish("cutoff derivatives", opts.step, opts.noise_floor);
  r.pass = r.transitions.pass && r.cutoffs.pass;
  return r;
}

BoundedGeometryReport bounded_geometry_report(const Trivialization& t, int k_max,
                                              const DiagnosticOptions& opts) {
  if (k_max < 0 || k_max > 3) throw Error(ErrorKind::invalid_argument, "k_max must lie in [0, 3]");
  OrderTable gt(k_max), gi(k_max);
  for (int a : chart_sample(t, opts.max_charts)) {
    const Chart& c = t.chart(a);
    const double h = chart_step(t, a, opts.step);
    const Field g = [&c](const Vec& x) -> std::optional<Values> {
      const Eigen::MatrixXd m = c.map().metric(x);
      return Values(m.reshaped());
    };
    const Field ginv = [&c](const Vec& x) -> std::optional<Values> {
      const Eigen::MatrixXd m = c.map().metric(x).inverse();
      return Values(m.reshaped());
    };
    for (const Vec& x : support_lattice(t, a, opts.lattice)) {
      if (!stencil_inside(c.domain(), x, 2.0 * h)) continue;
      gt.add(g, x, h, k_max);
      gi.add(ginv, x, h, k_max);
    }
  }
  BoundedGeometryReport r;
  r.metric = gt.finish("metric derivatives", opts.step, opts.noise_floor);
  r.inverse_metric = gi.finish("inverse metric derivatives", opts.step, opts.noise_floor);
  r.pass = r.metric.pass && r.inverse_metric.pass;
  return r;
}

}  // namespace bgt::atlas
