#include "bgt/flows.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace bgt::flows {

using geometry::Chart;
using geometry::Christoffel;

namespace {

constexpr int kChartExpSteps = 32;

Christoffel gamma_at(const Chart& c, const Vec& x) {
  if (c.map().has_christoffel()) return c.map().christoffel(x);
  return geometry::christoffel_fd(c, x, 1e-5);
}

Vec contract(const Christoffel& g, const Vec& a, const Vec& b) {
  const int n = g.n;
  Vec out = Vec::Zero(n);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += g(k, i, j) * a(i) * b(j);
    out(k) = s;
  }
  return out;
}

struct State {
  int chart = -1;
  Vec x, v, w;
  bool transport = false;
};

void rk4_step(const Chart& c, State& s, double h) {
  struct D {
    Vec dx, dv, dw;
  };
  auto deriv = [&](const Vec& x, const Vec& v, const Vec& w) {
    const Christoffel g = gamma_at(c, x);
    D d;
    d.dx = v;
    d.dv = -contract(g, v, v);
    if (s.transport) d.dw = -contract(g, v, w);
    return d;
  };
  const Vec w0 = s.transport ? s.w : Vec();
  const D k1 = deriv(s.x, s.v, w0);
  const D k2 = deriv(s.x + 0.5 * h * k1.dx, s.v + 0.5 * h * k1.dv,
                     s.transport ? Vec(w0 + 0.5 * h * k1.dw) : w0);
  const D k3 = deriv(s.x + 0.5 * h * k2.dx, s.v + 0.5 * h * k2.dv,
                     s.transport ? Vec(w0 + 0.5 * h * k2.dw) : w0);
  const D k4 = deriv(s.x + h * k3.dx, s.v + h * k3.dv, s.transport ? Vec(w0 + h * k3.dw) : w0);
  s.x += h / 6.0 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx);
  s.v += h / 6.0 * (k1.dv + 2 * k2.dv + 2 * k3.dv + k4.dv);
  if (s.transport) s.w += h / 6.0 * (k1.dw + 2 * k2.dw + 2 * k3.dw + k4.dw);
}

// Moves the state to the deepest reference chart once it has left the safe
// domain of the current one. Returns the previous chart when a switch happened.
std::optional<int> reanchor(const Space& m, State& s) {
  const Chart& c = m.chart(s.chart);
  if (c.safe().contains(s.x)) return std::nullopt;
  const Point p = c.forward(s.x);
  auto loc = m.locate(p);
  if (!loc) throw Error(ErrorKind::left_atlas, m.name() + ": geodesic left every reference chart");
  const Chart& d = m.chart(loc->chart);
  const Mat j = geometry::jacobian(
      [&](const Vec& y) -> Vec {
        auto z = d.inverse(c.forward(y));
        if (!z) throw Error(ErrorKind::left_atlas, "transition undefined during re-anchoring");
        return *z;
      },
      s.x, 1e-5);
  const int prev = s.chart;
  s.chart = loc->chart;
  s.v = j * s.v;
  if (s.transport) s.w = j * s.w;
  s.x = loc->x;
  return prev;
}

double energy_of(const Space& m, const State& s) {
  return s.v.dot(m.chart(s.chart).map().metric(s.x) * s.v);
}

struct RunResult {
  State end;
  double max_drift = 0.0;
};

RunResult run(const Space& m, State s, double duration, int steps, double drift_tol,
              GeodesicPath* path) {
  RunResult r;
  const double h = steps > 0 ? duration / steps : 0.0;
  const double e0 = energy_of(m, s);
  if (path) {
    path->step = h;
    if (path->samples.capacity() == 0 && steps < 2000000) path->samples.reserve(steps + 1);
    path->samples.push_back({0.0, s.chart, s.x, s.v});
  }
  for (int i = 0; i < steps; ++i) {
    rk4_step(m.chart(s.chart), s, h);
    const double t = (i + 1) * h;
    if (auto prev = reanchor(m, s); prev && path) path->anchors.push_back({t, *prev, s.chart});
    if (e0 > 0.0 && std::isfinite(drift_tol)) {
      const double drift = std::abs(energy_of(m, s) - e0) / e0;
      r.max_drift = std::max(r.max_drift, drift);
      if (!(drift <= drift_tol))
        throw Error(ErrorKind::step_too_large,
                    "energy drift " + std::to_string(drift) + " exceeds tolerance");
    }
    if (path) path->samples.push_back({t, s.chart, s.x, s.v});
  }
  r.end = s;
  return r;
}

int steps_for(double duration, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::invalid_argument, "step must be positive");
  return std::max(1, static_cast<int>(std::ceil(duration / step - 1e-9)));
}

}  // namespace

double energy(const Space& m, const TangentVector& tv) {
  return tv.v.dot(m.chart(tv.chart).map().metric(tv.x) * tv.v);
}

GeodesicPath integrate_geodesic(const Space& m, const TangentVector& start, double duration,
                                const FlowOptions& opts) {
  if (!(duration >= 0.0)) throw Error(ErrorKind::invalid_argument, "duration must be >= 0");
  if (!m.chart(start.chart).contains(start.x))
    throw Error(ErrorKind::point_outside_domain, "geodesic start outside its chart");
  GeodesicPath path;
  path.start = start;
  path.duration = duration;
  State s{start.chart, start.x, start.v, Vec(), false};
  const int steps = duration > 0.0 ? steps_for(duration, opts.step) : 0;
  const RunResult r = run(m, s, duration, steps, opts.drift_tolerance,
                          opts.keep_samples ? &path : nullptr);
  path.step = steps > 0 ? duration / steps : 0.0;
  path.max_drift = r.max_drift;
  path.end = TangentVector{r.end.chart, r.end.x, r.end.v};
  return path;
}

Point exp_numeric(const Space& m, const ChartPoint& z, const Vec& v, const FlowOptions& opts) {
  FlowOptions o = opts;
  o.keep_samples = false;
  const GeodesicPath path = integrate_geodesic(m, {z.chart, z.x, v}, 1.0, o);
  return m.canonical(m.chart(path.end.chart).forward(path.end.x));
}

Point exp_map(const Space& m, const ChartPoint& z, const Vec& v, const FlowOptions& opts) {
  const double len = std::sqrt(std::max(0.0, energy(m, {z.chart, z.x, v})));
  if (len > m.injectivity_radius() * (1.0 + 1e-12))
    throw Error(ErrorKind::vector_exceeds_injectivity_radius,
                "|v|_g = " + std::to_string(len) + " exceeds r_M");
  if (auto p = m.exact_exp(z, v)) return m.canonical(*p);
  return exp_numeric(m, z, v, opts);
}

Transported parallel_transport(const Space& m, const GeodesicPath& path, const Vec& w0) {
  State s{path.start.chart, path.start.x, path.start.v, w0, true};
  const int steps = path.duration > 0.0 ? steps_for(path.duration, path.step) : 0;
  const RunResult r = run(m, s, path.duration, steps, std::numeric_limits<double>::infinity(),
                          nullptr);
  return Transported{{r.end.chart, r.end.x, r.end.v}, r.end.w};
}

Point chart_exp(const Space& m, const ChartPoint& base, const Vec& v) {
  if (auto p = m.exact_exp(base, v)) return m.canonical(*p);
  State s{base.chart, base.x, v, Vec(), false};
  const RunResult r = run(m, s, 1.0, kChartExpSteps, std::numeric_limits<double>::infinity(),
                          nullptr);
  return m.canonical(m.chart(r.end.chart).forward(r.end.x));
}

std::optional<Vec> chart_log(const Space& m, const ChartPoint& base, const Point& q) {
  if (auto v = m.exact_log(base, q)) return v;
  const Chart& c = m.chart(base.chart);
  const auto target = c.inverse(q);
  if (!target) return std::nullopt;
  auto residual = [&](const Vec& v) -> std::optional<Vec> {
    Point p;
    try {
      p = chart_exp(m, base, v);
    } catch (const Error& e) {
      // Newton iterates can wander off the atlas when q is far from the base.
      if (e.kind() == ErrorKind::left_atlas || e.kind() == ErrorKind::step_too_large) return std::nullopt;
      throw;
    }
    auto y = c.inverse(p);
    if (!y) return std::nullopt;
    return Vec(*y - *target);
  };
  Vec v = *target - base.x;
  const int n = static_cast<int>(v.size());
  auto f = residual(v);
  if (!f) return std::nullopt;
  // One finite-difference Jacobian, then Broyden updates (one exp per iteration).
  const double h = 1e-6;
  Mat j(n, n);
  for (int i = 0; i < n; ++i) {
    Vec a = v, b = v;
    a(i) += h;
    b(i) -= h;
    auto fa = residual(a), fb = residual(b);
    if (!fa || !fb) return std::nullopt;
    j.col(i) = (*fa - *fb) / (2 * h);
  }
  const double start = f->norm();
  // RK4 with chart switches leaves a residual floor near 1e-13.
  const double tol = 1e-12 * (1.0 + v.norm());
  Vec best = v;
  double best_norm = start;
  for (int it = 0; it < 40 && best_norm >= tol; ++it) {
    const Vec dv = -j.fullPivLu().solve(*f);
    if (!dv.allFinite()) break;
    v += dv;
    auto fn = residual(v);
    if (!fn || fn->norm() > 10.0 * start + 0.5) break;
    if (fn->norm() < best_norm) {
      best = v;
      best_norm = fn->norm();
    }
    const double dd = dv.squaredNorm();
    if (dd == 0.0) break;
    j += (*fn - *f - j * dv) * dv.transpose() / dd;
    f = fn;
  }
  if (best_norm < 1e-10) return best;
  return std::nullopt;
}

double distance(const Space& m, const Point& p, const Point& q) {
  if (auto d = m.exact_distance(p, q)) return *d;
  const ChartPoint base = m.locate_or_throw(p);
  auto v = chart_log(m, base, q);
  if (!v) throw Error(ErrorKind::chart_evaluation_failure, "logarithm did not converge");
  return std::sqrt(std::max(0.0, energy(m, {base.chart, base.x, *v})));
}

Mat ambient_jacobian(const Space& m, const ChartPoint& p) {
  const Chart& c = m.chart(p.chart);
  return geometry::jacobian([&](const Vec& x) -> Vec { return m.ambient(c.forward(x)); }, p.x,
                            1e-5);
}

NormalFrame normal_frame(const Submanifold& n, const ChartPoint& y) {
  const int dim_m = n.ambient_space().dim();
  const int k = n.dim();
  auto tan = n.tangent(y);
  const Mat g = n.ambient_space().chart(tan.m.chart).map().metric(tan.m.x);
  const Mat gn = tan.columns.transpose() * g * tan.columns;
  if (!(geometry::min_eigenvalue(gn) > 1e-10 * gn.norm()))
    throw Error(ErrorKind::degenerate_tangent_space, n.name() + ": induced metric nearly singular");
  Mat cand(dim_m, k + dim_m);
  cand << tan.columns, Mat::Identity(dim_m, dim_m);
  const Mat e = geometry::gram_schmidt(g, cand, dim_m);
  if (e.cols() != dim_m)
    throw Error(ErrorKind::degenerate_tangent_space, n.name() + ": frame construction failed");
  return NormalFrame{tan.m, tan.columns, e.rightCols(dim_m - k)};
}

NormalFrame aligned_normal_frame(const Submanifold& n, const ChartPoint& y, const Mat& reference) {
  NormalFrame f = normal_frame(n, y);
  const Space& m = n.ambient_space();
  const int dim_m = m.dim();
  const int codim = dim_m - n.dim();
  const Mat g = m.chart(f.m.chart).map().metric(f.m.x);
  const Mat a = ambient_jacobian(m, f.m);
  const Eigen::MatrixXd ata = a.transpose() * a;
  Mat cand(dim_m, reference.cols() + codim);
  for (Eigen::Index i = 0; i < reference.cols(); ++i) {
    const Eigen::VectorXd rhs = a.transpose() * reference.col(i);
    const Eigen::VectorXd v = ata.ldlt().solve(rhs);
    // project onto the normal space
    cand.col(i) = f.normal * (f.normal.transpose() * g * Vec(v));
  }
  cand.rightCols(codim) = f.normal;
  const Mat e = geometry::gram_schmidt(g, cand, codim);
  f.normal = e;
  return f;
}

FlowJacobianReport flow_jacobian_bound(const Space& m, int base_points, double fraction,
                                       std::uint64_t seed) {
  geometry::Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  FlowJacobianReport rep;
  const double len = fraction * m.injectivity_radius();
  for (int b = 0; b < base_points; ++b) {
    const Point p = m.sample(rng, 0.0);
    const ChartPoint z = m.locate_or_throw(p);
    Vec v(m.dim());
    for (int i = 0; i < m.dim(); ++i) v(i) = gauss(rng);
    const double nv = std::sqrt(energy(m, {z.chart, z.x, v}));
    v *= len / nv;
    const ChartPoint end = m.locate_or_throw(exp_map(m, z, v));
    const Chart& ec = m.chart(end.chart);
    for (double h : {1e-4, 1e-5}) {
      Mat j(m.dim(), m.dim());
      for (int i = 0; i < m.dim(); ++i) {
        Vec a = v, c = v;
        a(i) += h;
        c(i) -= h;
        auto ya = ec.inverse(exp_map(m, z, a)), yc = ec.inverse(exp_map(m, z, c));
        if (!ya || !yc) throw Error(ErrorKind::chart_evaluation_failure, "flow Jacobian probe");
        j.col(i) = (*ya - *yc) / (2 * h);
      }
      double& slot = h > 5e-5 ? rep.max_coarse : rep.max_fine;
      slot = std::max(slot, j.norm());
    }
    ++rep.base_points;
  }
  const double lo = std::min(rep.max_coarse, rep.max_fine);
  rep.ratio = lo > 0 ? std::max(rep.max_coarse, rep.max_fine) / lo : 1.0;
  rep.pass = std::isfinite(rep.max_coarse) && std::isfinite(rep.max_fine) && rep.ratio < 2.0;
  return rep;
}

}  // namespace bgt::flows
