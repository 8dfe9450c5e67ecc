#include "bgt/spaces.hpp"

#include <array>
#include <chrono>
#include <cmath>

namespace bgt::spaces {

namespace {

std::vector<double> chart_norms(const GridFunction& g, const NormRequest& req) {
  switch (req.kind) {
    case NormKind::H: return euclid::bessel_norms(g, req.s, req.p, req.check_alias);
    case NormKind::B: {
      std::vector<double> out;
      for (double s : req.s) out.push_back(euclid::besov_norm(g, s, req.p, req.p));
      return out;
    }
    case NormKind::F: {
      std::vector<double> out;
      for (double s : req.s) out.push_back(euclid::triebel_norm(g, s, req.p, req.q));
      return out;
    }
    case NormKind::W: break;
  }
  throw Error(ErrorKind::invalid_argument, "W norms are computed by covariant_norm");
}

double power_sum(double c, double p) { return std::isinf(p) ? c : std::pow(c, p); }

}  // namespace

std::vector<std::vector<double>> localized_norms(
    const std::vector<ManifoldFunction>& family, const Trivialization& t, const NormRequest& req,
    std::vector<std::vector<std::vector<double>>>* contributions) {
  const size_t ns = req.s.size();
  std::vector<std::vector<double>> acc(family.size(), std::vector<double>(ns, 0.0));
  if (contributions)
    contributions->assign(family.size(), std::vector<std::vector<double>>(ns));
  for (int a = 0; a < t.size(); ++a) {
    const ChartSamples cs = sample_chart(t, a, req.res);
    for (size_t f = 0; f < family.size(); ++f) {
      GridFunction g = cs.grid;
      bool nonzero = false;
      for (size_t i = 0; i < cs.index.size(); ++i) {
        const Complex v = cs.cutoff[i] * family[f](cs.points[i]);
        g.values[cs.index[i]] = v;
        nonzero = nonzero || v != Complex(0.0, 0.0);
      }
      const std::vector<double> c = nonzero ? chart_norms(g, req) : std::vector<double>(ns, 0.0);
      for (size_t i = 0; i < ns; ++i) {
        acc[f][i] = std::isinf(req.p) ? std::max(acc[f][i], c[i]) : acc[f][i] + power_sum(c[i], req.p);
        if (contributions) (*contributions)[f][i].push_back(c[i]);
      }
    }
  }
  for (auto& row : acc)
    for (double& v : row)
      if (!std::isinf(req.p)) v = std::pow(v, 1.0 / req.p);
  return acc;
}

NormReport localized_norm(const ManifoldFunction& f, const Trivialization& t, NormKind kind,
                          double s, double p, double q, int res) {
  const auto start = std::chrono::steady_clock::now();
  NormRequest req;
  req.kind = kind;
  req.s = {s};
  req.p = p;
  req.q = kind == NormKind::B ? p : q;
  req.res = res;
  std::vector<std::vector<std::vector<double>>> parts;
  const auto v = localized_norms({f}, t, req, &parts);
  NormReport r;
  r.kind = kind;
  r.s = s;
  r.p = p;
  r.q = req.q;
  r.trivialization = atlas::to_string(t.kind());
  r.manifest_id = t.manifest_id();
  r.res = res;
  r.value = v[0][0];
  r.contributions = parts[0][0];
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

struct Jet {
  double grad2 = 0.0;  // |nabla f|_g^2
  double hess2 = 0.0;  // |nabla^2 f|_g^2
};

// Covariant derivatives of a real function in the reference chart around p.
Jet covariant_jet(const std::function<double(const Point&)>& f, const Space& m,
                  const geometry::ChartPoint& ref, int k, double step) {
  const geometry::Chart& chart = m.chart(ref.chart);
  const int n = m.dim();
  double h = step;
  auto fits = [&](double hh) {
    for (int i = 0; i < n; ++i)
      for (int sgn : {-1, 1}) {
        Vec y = ref.x;
        y(i) += sgn * hh;
        for (int j = 0; j < n; ++j) {
          Vec z = y;
          z(j) += hh;
          if (!chart.contains(z)) return false;
          z(j) -= 2 * hh;
          if (!chart.contains(z)) return false;
        }
      }
    return true;
  };
  while (!fits(h)) {
    h *= 0.5;
    if (h < 1e-8) throw Error(ErrorKind::fd_step_underflow, "stencil does not fit chart " + chart.id());
  }
  auto F = [&](const Vec& y) { return f(m.canonical(chart.forward(y))); };
  const double f0 = F(ref.x);
  Vec df(n);
  Mat d2(n, n);
  std::vector<double> fp(static_cast<size_t>(n)), fm(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    Vec y = ref.x;
    y(i) += h;
    fp[static_cast<size_t>(i)] = F(y);
    y(i) -= 2 * h;
    fm[static_cast<size_t>(i)] = F(y);
    df(i) = (fp[static_cast<size_t>(i)] - fm[static_cast<size_t>(i)]) / (2 * h);
  }
  const Mat ginv = geometry::metric_at(chart, ref.x).inverse();
  Jet jet;
  jet.grad2 = df.dot(ginv * df);
  if (k < 2) return jet;
  for (int i = 0; i < n; ++i) {
    d2(i, i) = (fp[static_cast<size_t>(i)] - 2 * f0 + fm[static_cast<size_t>(i)]) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      auto at = [&](int si, int sj) {
        Vec y = ref.x;
        y(i) += si * h;
        y(j) += sj * h;
        return F(y);
      };
      d2(i, j) = d2(j, i) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
    }
  }
  const geometry::Christoffel gam =
      geometry::christoffel(chart, ref.x, chart.map().has_christoffel() ? 0.0 : 1e-5);
  Mat hess(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = d2(i, j);
      for (int l = 0; l < n; ++l) v -= gam(l, i, j) * df(l);
      hess(i, j) = v;
    }
  jet.hess2 = (ginv * hess * ginv * hess.transpose()).trace();
  return jet;
}

}  // namespace

std::vector<double> covariant_norms(const std::vector<ManifoldFunction>& family,
                                    const Trivialization& t, int k, double p, int res,
                                    double fd_step) {
  if (k < 0 || k > 2) throw Error(ErrorKind::invalid_argument, "covariant norms support k <= 2");
  if (!(p >= 1.0) || std::isinf(p)) throw Error(ErrorKind::invalid_argument, "need 1 <= p < inf");
  const Space& m = t.space();
  // integral[f][l] of |nabla^l f|^p
  std::vector<std::array<double, 3>> integral(family.size(), {0.0, 0.0, 0.0});
  for (int a = 0; a < t.size(); ++a) {
    const ChartSamples cs = sample_chart(t, a, res);
    const double dv = cs.grid.cell_volume();
    const geometry::Chart& chart = t.chart(a);
    for (size_t i = 0; i < cs.index.size(); ++i) {
      const double vol = std::sqrt(chart.map().metric(cs.coords[i]).determinant());
      const double w = cs.cutoff[i] * vol * dv;
      const Point& pt = cs.points[i];
      const geometry::ChartPoint ref = m.locate_or_throw(pt);
      for (size_t f = 0; f < family.size(); ++f) {
        const Complex v = family[f](pt);
        integral[f][0] += w * std::pow(std::abs(v), p);
        if (k == 0) continue;
        Jet re = covariant_jet([&](const Point& q) { return family[f](q).real(); }, m, ref, k, fd_step);
        Jet im;
        if (v.imag() != 0.0)
          im = covariant_jet([&](const Point& q) { return family[f](q).imag(); }, m, ref, k, fd_step);
        integral[f][1] += w * std::pow(std::max(0.0, re.grad2 + im.grad2), 0.5 * p);
        if (k == 2) integral[f][2] += w * std::pow(std::max(0.0, re.hess2 + im.hess2), 0.5 * p);
      }
    }
  }
  std::vector<double> out;
  for (const auto& in : integral) {
    double v = 0.0;
    for (int l = 0; l <= k; ++l) v += std::pow(in[static_cast<size_t>(l)], 1.0 / p);
    out.push_back(v);
  }
  return out;
}

double covariant_norm(const ManifoldFunction& f, const Trivialization& t, int k, double p, int res,
                      double fd_step) {
  return covariant_norms({f}, t, k, p, res, fd_step).front();
}

}  // namespace bgt::spaces
