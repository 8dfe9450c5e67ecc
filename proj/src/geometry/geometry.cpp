#include "bgt/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace bgt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::point_outside_domain: return "point-outside-domain";
    case ErrorKind::point_too_close_to_boundary: return "point-too-close-to-boundary";
    case ErrorKind::singular_metric: return "singular-metric";
    case ErrorKind::left_atlas: return "left-atlas";
    case ErrorKind::step_too_large: return "step-too-large";
    case ErrorKind::vector_exceeds_injectivity_radius: return "vector-exceeds-injectivity-radius";
    case ErrorKind::degenerate_tangent_space: return "degenerate-tangent-space";
    case ErrorKind::budget_exhausted: return "budget-exhausted";
    case ErrorKind::radius_exceeds_injectivity_radius: return "radius-exceeds-injectivity-radius";
    case ErrorKind::no_collar_metadata: return "no-collar-metadata";
    case ErrorKind::coverage_gap: return "coverage-gap";
    case ErrorKind::insufficient_overlap_samples: return "insufficient-overlap-samples";
    case ErrorKind::aliasing_suspected: return "aliasing-suspected";
    case ErrorKind::slice_not_on_grid: return "slice-not-on-grid";
    case ErrorKind::box_too_small: return "box-too-small";
    case ErrorKind::decay_violation: return "decay-violation";
    case ErrorKind::chart_evaluation_failure: return "chart-evaluation-failure";
    case ErrorKind::point_not_on_submanifold: return "point-not-on-N";
    case ErrorKind::tube_escape: return "tube-escape";
    case ErrorKind::fd_step_underflow: return "FD-step-underflow";
    case ErrorKind::not_group_invariant: return "not-G-invariant";
    case ErrorKind::truncation_tail_too_large: return "truncation-tail-too-large";
    case ErrorKind::budget_too_small_for_domain: return "budget-too-small-for-domain";
    case ErrorKind::invalid_argument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace bgt

namespace bgt::geometry {

// --- Domain -------------------------------------------------------------

bool Domain::contains(const Vec& x, double shrink) const {
  if (x.size() != center.size()) return false;
  const Vec d = x - center;
  switch (shape) {
    case DomainShape::box:
      for (Eigen::Index i = 0; i < d.size(); ++i)
        if (!(std::abs(d(i)) < shrink * radii(i))) return false;
      return true;
    case DomainShape::ball:
      return d.norm() < shrink * radii(0);
    case DomainShape::split_ball: {
      const Eigen::Index s = split;
      return d.head(s).norm() < shrink * radii(0) &&
             d.tail(d.size() - s).norm() < shrink * radii(d.size() - 1);
    }
  }
  return false;
}

double Domain::depth(const Vec& x) const {
  const Vec d = x - center;
  switch (shape) {
    case DomainShape::box: {
      double m = 1.0;
      for (Eigen::Index i = 0; i < d.size(); ++i) m = std::min(m, 1.0 - std::abs(d(i)) / radii(i));
      return m;
    }
    case DomainShape::ball:
      return 1.0 - d.norm() / radii(0);
    case DomainShape::split_ball: {
      const Eigen::Index s = split;
      return std::min(1.0 - d.head(s).norm() / radii(0),
                      1.0 - d.tail(d.size() - s).norm() / radii(d.size() - 1));
    }
  }
  return -1.0;
}

Domain Domain::box(Vec center, Vec radii) {
  return Domain{std::move(center), std::move(radii), DomainShape::box, 0};
}

Domain Domain::ball(Vec center, double radius) {
  Vec r = Vec::Constant(center.size(), radius);
  return Domain{std::move(center), std::move(r), DomainShape::ball, 0};
}

Domain Domain::split_ball(int split, double radius_first, double radius_second, int n) {
  Vec r(n);
  for (int i = 0; i < n; ++i) r(i) = i < split ? radius_first : radius_second;
  return Domain{Vec::Zero(n), std::move(r), DomainShape::split_ball, split};
}

const char* to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::geodesic: return "geodesic";
    case ChartKind::fermi: return "fermi";
    case ChartKind::generic: return "generic";
  }
  return "generic";
}

double Christoffel::max_abs() const {
  double m = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m = std::max(m, std::abs((*this)(k, i, j)));
  return m;
}

Christoffel ChartMap::christoffel(const Vec&) const {
  throw Error(ErrorKind::invalid_argument, "chart map has no analytic Christoffel symbols");
}

// --- Chart --------------------------------------------------------------

Chart::Chart(std::string id, Domain domain, Domain safe, std::shared_ptr<const ChartMap> map,
             ChartKind kind)
    : id_(std::move(id)), domain_(std::move(domain)), safe_(std::move(safe)),
      map_(std::move(map)), kind_(kind) {}

std::optional<Vec> Chart::coordinates(const Point& p) const {
  auto x = map_->inverse(p);
  if (x && domain_.contains(*x)) return x;
  return std::nullopt;
}

// --- Space --------------------------------------------------------------

std::optional<ChartPoint> Space::locate(const Point& p) const {
  std::optional<ChartPoint> best;
  double best_depth = 0.0;
  for (size_t i = 0; i < charts_.size(); ++i) {
    const auto& c = charts_[i];
    auto x = c.inverse(p);
    if (!x || !c.safe().contains(*x)) continue;
    const double d = c.safe().depth(*x);
    if (!best || d > best_depth) {
      best = ChartPoint{static_cast<int>(i), *x};
      best_depth = d;
    }
  }
  return best;
}

ChartPoint Space::locate_or_throw(const Point& p) const {
  auto cp = locate(p);
  if (!cp) throw Error(ErrorKind::left_atlas, name() + ": no reference chart contains the point");
  return *cp;
}

std::optional<Point> Space::exact_exp(const ChartPoint&, const Vec&) const { return std::nullopt; }
std::optional<Vec> Space::exact_log(const ChartPoint&, const Point&) const { return std::nullopt; }
std::optional<double> Space::exact_distance(const Point&, const Point&) const {
  return std::nullopt;
}

double Space::distance_lower_bound(const Point& p, const Point& q) const {
  if (auto d = exact_distance(p, q)) return *d;
  if (ambient_chord_bound()) return (ambient(p) - ambient(q)).norm();
  return 0.0;
}

double Space::distance_upper_bound(const Point& p, const Point& q) const {
  if (auto d = exact_distance(p, q)) return *d;
  static constexpr std::array<double, 4> x{0.1834346424956498, 0.5255324099163290,
                                           0.7966664774136267, 0.9602898564975363};
  static constexpr std::array<double, 4> w{0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};
  const auto a = locate(p);
  if (!a) return std::numeric_limits<double>::infinity();
  const Chart& c = chart(a->chart);
  const auto b = c.coordinates(q);
  // Box domains are convex, so the segment stays in the chart.
  if (!b || c.domain().shape != DomainShape::box) return std::numeric_limits<double>::infinity();
  const Vec dx = *b - a->x;
  double len = 0.0;
  for (size_t i = 0; i < x.size(); ++i)
    for (double sgn : {-1.0, 1.0}) {
      const Vec y = a->x + 0.5 * (1.0 + sgn * x[i]) * dx;
      len += 0.5 * w[i] * std::sqrt(std::max(0.0, dx.dot(c.map().metric(y) * dx)));
    }
  // Margin for the quadrature error of the 8-point rule.
  return len * (1.0 + 1e-6);
}

Point Space::sample(Rng& rng, double inflate) const {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  Vec u(dim());
  for (int i = 0; i < dim(); ++i) u(i) = u01(rng);
  return from_unit(u, inflate);
}

void Space::set_injectivity_radius(double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::invalid_argument, "injectivity radius must be positive");
  injectivity_radius_ = r;
}

void Space::build_transitions(int samples, std::uint64_t seed) {
  transitions_.clear();
  const size_t nc = charts_.size();
  std::vector<std::vector<int>> hits(nc * nc, std::vector<int>{});
  std::vector<char> overlap(nc * nc, 0);
  Rng rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Point p = sample(rng, 0.0);
    std::vector<size_t> in;
    for (size_t i = 0; i < nc; ++i) {
      auto x = charts_[i].inverse(p);
      if (x && charts_[i].safe().contains(*x)) in.push_back(i);
    }
    for (size_t a : in)
      for (size_t b : in)
        if (a != b) overlap[a * nc + b] = 1;
  }
  for (size_t a = 0; a < nc; ++a)
    for (size_t b = 0; b < nc; ++b) {
      if (!overlap[a * nc + b]) continue;
      const Chart* from = &charts_[a];
      const Chart* to = &charts_[b];
      transitions_.push_back(TransitionMap{
          static_cast<int>(a), static_cast<int>(b),
          [from, to](const Vec& x) -> std::optional<Vec> { return to->inverse(from->forward(x)); }});
    }
}

// --- Submanifold --------------------------------------------------------

void Submanifold::set_collar_radius(double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::no_collar_metadata, "collar radius must be positive");
  collar_radius_ = r;
}

Submanifold::Tangent Submanifold::tangent(const ChartPoint& y, double step) const {
  const Chart& nc = chart(y.chart);
  const Point image = include(nc.forward(y.x));
  ChartPoint m = ambient_->locate_or_throw(image);
  const Chart& mc = ambient_->chart(m.chart);
  auto lifted = [&](const Vec& yy) -> Vec {
    auto z = mc.inverse(include(nc.forward(yy)));
    if (!z) throw Error(ErrorKind::chart_evaluation_failure, "inclusion left the ambient chart");
    return *z;
  };
  return Tangent{m, jacobian(lifted, y.x, step)};
}

InducedChartMap::InducedChartMap(const Submanifold* sub, std::shared_ptr<const ChartMap> param)
    : sub_(sub), param_(std::move(param)) {}

Mat InducedChartMap::metric(const Vec& x) const {
  const Point image = sub_->include(param_->forward(x));
  const ChartPoint m = sub_->ambient_space().locate_or_throw(image);
  const Chart& mc = sub_->ambient_space().chart(m.chart);
  auto lifted = [&](const Vec& y) -> Vec {
    auto z = mc.inverse(sub_->include(param_->forward(y)));
    if (!z) throw Error(ErrorKind::chart_evaluation_failure, "inclusion left the ambient chart");
    return *z;
  };
  const Mat j = jacobian(lifted, x, 1e-4);
  const Mat g = mc.map().metric(m.x);
  return j.transpose() * g * j;
}

// --- operations ---------------------------------------------------------

double min_eigenvalue(const Mat& g) {
  Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

Mat metric_at(const Chart& chart, const Vec& x) {
  if (!chart.contains(x)) throw Error(ErrorKind::point_outside_domain, "metric_at in " + chart.id());
  Mat g = chart.map().metric(x);
  if (!(min_eigenvalue(g) > 0.0)) throw Error(ErrorKind::singular_metric, "metric_at in " + chart.id());
  return g;
}

Christoffel christoffel_fd(const Chart& chart, const Vec& x, double h) {
  const int n = chart.dim();
  for (int i = 0; i < n; ++i) {
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    if (!chart.contains(xp) || !chart.contains(xm))
      throw Error(ErrorKind::point_too_close_to_boundary, "christoffel in " + chart.id());
  }
  const Mat g = chart.map().metric(x);
  Eigen::LDLT<Mat> ldlt(g);
  if (ldlt.info() != Eigen::Success || !(min_eigenvalue(g) > 1e-14))
    throw Error(ErrorKind::singular_metric, "christoffel in " + chart.id());
  const Mat ginv = ldlt.solve(Mat::Identity(n, n));

  // dg[l](i,j) = d_l g_ij
  std::array<Mat, kMaxDim> dg;
  for (int l = 0; l < n; ++l) {
    Vec xp = x, xm = x;
    xp(l) += h;
    xm(l) -= h;
    dg[l] = (chart.map().metric(xp) - chart.map().metric(xm)) / (2.0 * h);
  }
  Christoffel gam(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(k, l) * (dg[j](i, l) + dg[i](j, l) - dg[l](i, j));
        gam(k, i, j) = 0.5 * s;
        gam(k, j, i) = 0.5 * s;
      }
  return gam;
}

Christoffel christoffel(const Chart& chart, const Vec& x, double h) {
  if (h <= 0.0 && chart.map().has_christoffel()) {
    if (!chart.contains(x)) throw Error(ErrorKind::point_outside_domain, "christoffel in " + chart.id());
    return chart.map().christoffel(x);
  }
  return christoffel_fd(chart, x, h > 0.0 ? h : 1e-5);
}

Mat jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
  const Vec f0 = f(x);
  Mat j(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x, c = x, d = x;
    a(i) += 2 * h;
    b(i) += h;
    c(i) -= h;
    d(i) -= 2 * h;
    j.col(i) = (-f(a) + 8.0 * f(b) - 8.0 * f(c) + f(d)) / (12.0 * h);
  }
  return j;
}

namespace {

Mat central_jacobian(const std::function<std::optional<Vec>(const Vec&)>& f, const Vec& x,
                     double h, bool& ok) {
  ok = true;
  Mat j;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec a = x, b = x;
    a(i) += h;
    b(i) -= h;
    auto fa = f(a), fb = f(b);
    if (!fa || !fb) {
      ok = false;
      return j;
    }
    if (i == 0) j.resize(fa->size(), x.size());
    j.col(i) = (*fa - *fb) / (2.0 * h);
  }
  return j;
}

}  // namespace

TransitionReport check_transition_consistency(const Space& m, int samples, double fd_step,
                                              double tol, std::uint64_t seed) {
  return check_transition_consistency(m, m.transitions(), samples, fd_step, tol, seed);
}

TransitionReport check_transition_consistency(const Space& m,
                                              const std::vector<TransitionMap>& transitions,
                                              int samples, double fd_step, double tol,
                                              std::uint64_t seed) {
  TransitionReport rep;
  rep.tolerance = tol;
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (const auto& t : transitions) {
    const Chart& a = m.chart(t.from);
    const Chart& b = m.chart(t.to);
    double worst = 0.0;
    int used = 0;
    // reverse transition, if listed, for the bijection check
    const TransitionMap* back = nullptr;
    for (const auto& r : transitions)
      if (r.from == t.to && r.to == t.from) back = &r;
    for (int attempt = 0; attempt < 50 * samples && used < samples; ++attempt) {
      Vec x(a.dim());
      for (int i = 0; i < a.dim(); ++i) x(i) = a.safe().center(i) + u(rng) * a.safe().radii(i);
      if (!a.safe().contains(x)) continue;
      auto y = t.map(x);
      if (!y || !b.safe().contains(*y)) continue;
      bool ok = false;
      const Mat j = central_jacobian(t.map, x, fd_step, ok);
      if (!ok) continue;
      const Mat ga = a.map().metric(x);
      const Mat gb = b.map().metric(*y);
      const double res = (ga - j.transpose() * gb * j).cwiseAbs().maxCoeff();
      worst = std::max(worst, res);
      if (back) {
        auto xb = back->map(*y);
        rep.max_roundtrip = std::max(rep.max_roundtrip,
                                     xb ? (*xb - x).cwiseAbs().maxCoeff()
                                        : std::numeric_limits<double>::infinity());
      }
      ++used;
    }
    rep.samples += used;
    rep.per_transition.push_back(worst);
    rep.max_residual = std::max(rep.max_residual, worst);
  }
  rep.pass = (transitions.empty() || rep.samples > 0) && rep.max_residual < tol && rep.max_roundtrip < tol;
  return rep;
}

Mat gram_schmidt(const Mat& g, const Mat& candidates, int count, double drop) {
  const Eigen::Index n = candidates.rows();
  Mat out(n, count);
  int have = 0;
  for (Eigen::Index c = 0; c < candidates.cols() && have < count; ++c) {
    Vec v = candidates.col(c);
    const double len0 = std::sqrt(std::max(0.0, double(v.transpose() * g * v)));
    if (len0 == 0.0) continue;
    for (int k = 0; k < have; ++k) {
      const Vec e = out.col(k);
      v -= double(e.transpose() * g * v) * e;
    }
    const double len = std::sqrt(std::max(0.0, double(v.transpose() * g * v)));
    if (len < drop * len0) continue;
    out.col(have++) = v / len;
  }
  out.conservativeResize(n, have);
  return out;
}

MeanCurvature mean_curvature_tensor(const Submanifold& sub, const ChartPoint& y) {
  const Chart& nc = sub.chart(y.chart);
  if (!nc.contains(y.x)) throw Error(ErrorKind::point_outside_domain, "mean curvature on N");
  const Space& m = sub.ambient_space();
  const int k = sub.dim();
  const int n = m.dim();

  const auto tan = sub.tangent(y, 1e-5);
  const Chart& mc = m.chart(tan.m.chart);
  auto lifted = [&](const Vec& yy) -> Vec {
    auto z = mc.inverse(sub.include(nc.forward(yy)));
    if (!z) throw Error(ErrorKind::chart_evaluation_failure, "inclusion left the ambient chart");
    return *z;
  };
  const double h = 1e-4;
  const Vec z0 = tan.m.x;
  const Mat g = mc.map().metric(z0);
  const Christoffel gam = christoffel(mc, z0, 1e-5);
  const Mat& t = tan.columns;

  // second derivatives of the lifted inclusion
  auto second = [&](int i, int j) -> Vec {
    if (i == j) {
      Vec a = y.x, b = y.x;
      a(i) += h;
      b(i) -= h;
      return (lifted(a) - 2.0 * z0 + lifted(b)) / (h * h);
    }
    Vec pp = y.x, pm = y.x, mp = y.x, mm = y.x;
    pp(i) += h; pp(j) += h;
    pm(i) += h; pm(j) -= h;
    mp(i) -= h; mp(j) += h;
    mm(i) -= h; mm(j) -= h;
    return (lifted(pp) - lifted(pm) - lifted(mp) + lifted(mm)) / (4.0 * h * h);
  };

  // projector onto the g-normal space: P = I - T (T^T g T)^{-1} T^T g
  const Mat gn = t.transpose() * g * t;
  if (!(min_eigenvalue(gn) > 1e-12))
    throw Error(ErrorKind::degenerate_tangent_space, "induced metric is singular");
  const Mat proj = Mat::Identity(n, n) - t * gn.ldlt().solve(t.transpose() * g);

  // g-orthonormal frame of TN in N coordinates
  const Mat e = gram_schmidt(gn, Mat::Identity(k, k), k);

  std::vector<Vec> l_coord(static_cast<size_t>(k * k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Vec cov = second(i, j);
      for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) s += gam(a, b, c) * t(b, i) * t(c, j);
        cov(a) += s;
      }
      l_coord[static_cast<size_t>(i * k + j)] = proj * cov;
    }

  MeanCurvature out;
  out.m = tan.m;
  double norm2 = 0.0;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      Vec v = Vec::Zero(n);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) v += e(i, a) * e(j, b) * l_coord[static_cast<size_t>(i * k + j)];
      norm2 += double(v.transpose() * g * v);
      out.values.push_back(v);
    }
  out.norm = std::sqrt(std::max(0.0, norm2));
  return out;
}

}  // namespace bgt::geometry
