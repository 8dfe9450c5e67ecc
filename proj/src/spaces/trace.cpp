#include "bgt/spaces.hpp"

#include <cmath>

namespace bgt::spaces {

namespace {

Complex trace_intrinsic(const ManifoldFunction& f, const FermiTrivialization& t, const Point& q_in) {
  const Submanifold& n = t.submanifold();
  const Point q = n.canonical(q_in);
  const int c = n.codim();
  atlas::CutoffList list;
  t.boundary().cutoffs(q, list);
  Complex acc(0.0, 0.0);
  for (const auto& [a, hq] : list) {
    auto x = t.boundary().chart_map(a).inverse(q);
    if (!x) continue;
    Vec tx = Vec::Zero(c + n.dim());
    tx.tail(n.dim()) = *x;
    const double h = t.pulled_cutoff(a, tx);
    if (h == 0.0) continue;
    acc += h * f(t.chart(a).forward(tx));
  }
  return acc;
}

// Dyadic pieces of (h'_alpha f') o kappa'_alpha, refined for interpolation.
struct ChartPieces {
  std::vector<GridFunction> pieces;
};

}  // namespace

ManifoldFunction trace(const ManifoldFunction& f, std::shared_ptr<const FermiTrivialization> t) {
  return {"Tr(" + f.id + ")",
          [f, t](const Point& q) { return trace_intrinsic(f, *t, q); }, f.family};
}

Complex trace_at_ambient(const ManifoldFunction& f, const FermiTrivialization& t, const Point& p,
                         double tol) {
  const Submanifold& n = t.submanifold();
  const double d = n.distance_to(p);
  if (!(d <= tol))
    throw Error(ErrorKind::point_not_on_submanifold,
                "distance " + std::to_string(d) + " from " + n.name());
  return trace_intrinsic(f, t, n.foot(p));
}

ManifoldFunction extend(const ManifoldFunction& f, std::shared_ptr<const FermiTrivialization> t,
                        const ExtensionOptions& opts) {
  const Submanifold& n = t->submanifold();
  const double r = t->radius();
  const int k = n.dim();
  const int c = n.codim();
  // psi_2 vanishes for |t| >= 2R, which must stay inside the Fermi chart and the collar.
  const double tube = 2.0 * r;
  if (t->near_count() > 0 && t->chart(0).domain().radii(0) < tube * (1.0 - 1e-12))
    throw Error(ErrorKind::tube_escape, "normal cutoff support exceeds the Fermi chart domain");
  if (tube > n.collar_radius() * (1.0 + 1e-12))
    throw Error(ErrorKind::tube_escape, "normal cutoff support exceeds the collar");

  auto charts = std::make_shared<std::vector<ChartPieces>>();
  const atlas::GeodesicTrivialization& bt = t->boundary();
  for (int a = 0; a < t->near_count(); ++a) {
    const geometry::Domain& dom = bt.chart(a).domain();
    GridFunction g(dom.center, 1.25 * dom.radii, std::vector<int>(static_cast<size_t>(k), opts.res));
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Vec x = g.point(i);
      const double h = bt.pulled_cutoff(a, x);
      if (h > 0.0) g.values[i] = h * f(bt.chart(a).forward(x));
    }
    ChartPieces cp;
    for (GridFunction& piece : euclid::dyadic_decompose(g).pieces)
      cp.pieces.push_back(euclid::upsample(piece, opts.oversample));
    charts->push_back(std::move(cp));
  }

  return {"Ex(" + f.id + ")",
          [t, charts, r, k, c](const Point& p) {
            const Submanifold& n = t->submanifold();
            const double d = n.distance_to(p);
            if (!(d < 2.0 * r)) return Complex(0.0, 0.0);
            const Point q = n.foot(p);
            const euclid::ExtensionProfile rho;
            Complex acc(0.0, 0.0);
            for (int a = 0; a < t->near_count(); ++a) {
              if (n.distance_lower_bound(q, t->boundary().center(a)) >= 1.5 * r) continue;
              auto tx = t->fermi_map(a).inverse(p);
              if (!tx) continue;
              const Vec tn = tx->head(c);
              const Vec x = tx->tail(k);
              const double psi = atlas::bump(x.norm() / r) * atlas::bump(1.0 + (tn.norm() - 1.5 * r) / r);
              if (psi == 0.0) continue;
              const auto& pieces = (*charts)[static_cast<size_t>(a)].pieces;
              Complex v(0.0, 0.0);
              for (size_t j = 0; j < pieces.size(); ++j) {
                double w = 1.0;
                for (int i = 0; i < c; ++i) w *= rho(std::ldexp(tn(i), static_cast<int>(j)));
                if (w != 0.0) v += w * euclid::interpolate(pieces[j], x);
              }
              acc += psi * v;
            }
            return acc;
          },
          f.family};
}

}  // namespace bgt::spaces
