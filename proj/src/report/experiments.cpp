#include "bgt/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace bgt::experiments {

std::vector<Point> curve_points(double period, int count) {
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back(make_vec({period * i / count}));
  return out;
}

TraceResult trace_restriction(const std::vector<ManifoldFunction>& family,
                              std::shared_ptr<const atlas::FermiTrivialization> t, int points,
                              std::uint64_t seed) {
  const geometry::Submanifold& n = t->submanifold();
  geometry::Rng rng(seed);
  std::vector<Point> qs;
  for (int i = 0; i < points; ++i) qs.push_back(n.canonical(n.sample(rng)));
  TraceResult r;
  r.points = points;
  for (const auto& f : family) {
    const ManifoldFunction tr = spaces::trace(f, t);
    double err = 0.0;
    for (const Point& q : qs) err = std::max(err, std::abs(tr(q) - f(n.include(q))));
    r.per_function.push_back(err);
    r.sup_error = std::max(r.sup_error, err);
  }
  return r;
}

RightInverseResult right_inverse(const std::vector<ManifoldFunction>& family,
                                 std::shared_ptr<const atlas::FermiTrivialization> t, double period,
                                 int points, const spaces::ExtensionOptions& opts) {
  const geometry::Submanifold& n = t->submanifold();
  const std::vector<Point> qs = curve_points(period, points);
  RightInverseResult r;
  r.points = points;
  for (const auto& f : family) {
    const ManifoldFunction ex = spaces::extend(f, t, opts);
    const ManifoldFunction tr = spaces::trace(ex, t);
    double num = 0.0, den = 0.0;
    for (const Point& q : qs) {
      const Point qc = n.canonical(q);
      const double e = std::abs(tr(qc) - f(qc));
      num += e * e;
      den += std::norm(f(qc));
      r.sup_error = std::max(r.sup_error, e);
    }
    const double rel = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    r.per_function.push_back(rel);
    r.max_relative_l2 = std::max(r.max_relative_l2, rel);
  }
  return r;
}

Band coincidence_band(const std::vector<ManifoldFunction>& family, const atlas::Trivialization& t,
                      int res) {
  const std::vector<double> w = spaces::covariant_norms(family, t, 2, 2.0, res);
  spaces::NormRequest req;
  req.s = {2.0};
  req.res = res;
  const auto h = spaces::localized_norms(family, t, req);
  std::vector<double> hv;
  for (const auto& row : h) hv.push_back(row[0]);
  return spaces::make_band(w, hv);
}

Band trace_norm_band(const std::vector<ManifoldFunction>& family,
                     std::shared_ptr<const atlas::FermiTrivialization> t, double s, double p,
                     int res) {
  const int codim = t->submanifold().codim();
  if (!(s > codim / p))
    throw Error(ErrorKind::invalid_argument, "trace norms need s > (n - k) / p");
  std::vector<ManifoldFunction> traces;
  for (const auto& f : family) traces.push_back(spaces::trace(f, t));

  spaces::NormRequest on_n;
  on_n.kind = spaces::NormKind::B;
  on_n.s = {s - codim / p};
  on_n.p = on_n.q = p;
  on_n.res = res;
  const auto bn = spaces::localized_norms(traces, t->boundary(), on_n);

  spaces::NormRequest on_m;
  on_m.s = {s};
  on_m.p = p;
  on_m.res = res;
  const auto hm = spaces::localized_norms(family, *t, on_m);

  std::vector<double> num, den;
  for (size_t i = 0; i < family.size(); ++i) {
    num.push_back(bn[i][0]);
    den.push_back(hm[i][0]);
  }
  return spaces::make_band(num, den);
}

SymmetryResult symmetry_band(const std::vector<ManifoldFunction>& family,
                             std::shared_ptr<const atlas::Trivialization> base,
                             const std::vector<double>& s, double p, int res, int budget) {
  const int n = base->space().dim();
  const symmetry::GroupAction group(n);
  // Periodic functions seen on the torus through canonical residues.
  spaces::NormRequest req;
  req.s = s;
  req.p = p;
  req.res = res;
  const auto torus = spaces::localized_norms(family, *base, req);

  auto weighted = [&](int b) {
    const auto lifted = symmetry::lift_trivialization(base, group, b);
    const symmetry::AdaptedWeight w = symmetry::build_weight(lifted);
    std::vector<symmetry::WeightedNormReport> out;
    for (const auto& f : family) out.push_back(symmetry::weighted_periodic_norm(f, w, s, p, res));
    return out;
  };
  const auto at_budget = weighted(budget);
  const auto at_double = weighted(2 * budget);

  SymmetryResult r;
  r.budget = budget;
  for (size_t i = 0; i < s.size(); ++i) {
    std::vector<double> num, den;
    double change = 0.0, tail = 0.0;
    for (size_t f = 0; f < family.size(); ++f) {
      num.push_back(torus[f][i]);
      den.push_back(at_budget[f].values[i]);
      change = std::max(change, std::abs(at_double[f].values[i] - at_budget[f].values[i]) /
                                    at_budget[f].values[i]);
      tail = std::max(tail, at_budget[f].tail_bounds[i]);
    }
    r.bands.push_back(spaces::make_band(num, den));
    r.budget_change.push_back(change);
    r.tail_bounds.push_back(tail);
  }
  return r;
}

}  // namespace bgt::experiments
