// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Usage: bgt_acceptance [criterion ...]   (default: all)

#include "bgt/atlas.hpp"
#include "bgt/euclid.hpp"
#include "bgt/experiments.hpp"
#include "bgt/flows.hpp"
#include "bgt/presets.hpp"
#include "bgt/spaces.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace bgt;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::shared_ptr<const geometry::Space> preset(const std::string& name) {
  return geometry::make_preset(name, 2);
}

// Geodesic chart radius used for each preset in the runs below.
double chart_radius(const std::string& name) {
  if (name == "euclidean") return 1.0;
  if (name == "flat-torus") return 0.3;
  if (name == "hyperbolic2") return 0.5;
  return kPi / 4;
}

Outcome partition_exactness() {
  Outcome o;
  o.pass = true;
  std::ostringstream os;
  for (const auto& name : geometry::preset_names()) {
    auto m = preset(name);
    auto geo = atlas::build_geodesic_trivialization(m, chart_radius(name), 1);
    auto fermi = atlas::build_fermi_trivialization(geometry::make_default_submanifold(m, name), 1);
    for (const atlas::Trivialization* t : {static_cast<const atlas::Trivialization*>(geo.get()),
                                           static_cast<const atlas::Trivialization*>(fermi.get())}) {
      const auto r = atlas::check_partition(*t, 10000, 17, 1e-10);
      const bool ok = r.max_sum_error < 1e-10 && r.support_violations == 0 && r.uncovered == 0 &&
                      r.max_multiplicity <= t->multiplicity_bound();
      o.pass = o.pass && ok;
      os << name << "/" << atlas::to_string(t->kind()) << " err=" << fmt("%.1e", r.max_sum_error)
         << " L=" << r.max_multiplicity << "<=" << t->multiplicity_bound() << (ok ? "" : " (FAIL)") << "; ";
    }
  }
  o.detail = os.str();
  return o;
}

Outcome geodesic_correctness() {
  Outcome o;
  std::ostringstream os;
  auto s2 = geometry::make_sphere2();
  flows::FlowOptions opts;
  opts.step = 1e-3;
  // Start on the equator of the z-polar chart, unit speed along the equator.
  const flows::TangentVector start{0, make_vec({kPi / 2, 0.0}), make_vec({0.0, 1.0})};
  double endpoint = 0.0;
  for (double t_end : {kPi / 2, kPi}) {
    const auto path = flows::integrate_geodesic(*s2, start, t_end, opts);
    const Point p = s2->chart(path.end.chart).forward(path.end.x);
    endpoint = std::max(endpoint, (p - make_vec({std::cos(t_end), std::sin(t_end), 0.0})).norm());
  }
  double drift = 0.0;
  for (const auto& name : geometry::preset_names()) {
    auto m = preset(name);
    geometry::Rng rng(5);
    for (int i = 0; i < 5; ++i) {
      const Point p = m->canonical(m->sample(rng));
      const auto cp = m->locate_or_throw(p);
      Vec v(m->dim());
      std::normal_distribution<double> g;
      for (int d = 0; d < m->dim(); ++d) v(d) = g(rng);
      flows::TangentVector tv{cp.chart, cp.x, v};
      tv.v /= std::sqrt(flows::energy(*m, tv));
      const auto path = flows::integrate_geodesic(*m, tv, 4.0, opts);
      drift = std::max(drift, path.max_drift);
    }
  }
  o.pass = endpoint < 1e-6 && drift < 1e-6;
  os << "great-circle endpoint err=" << fmt("%.2e", endpoint) << " max energy drift=" << fmt("%.2e", drift);
  o.detail = os.str();
  return o;
}

Outcome euclidean_identities() {
  using euclid::GridFunction;
  Outcome o;
  std::ostringstream os;
  double lp_err = 0.0;
  geometry::Rng rng(3);
  std::normal_distribution<double> g;
  for (int n : {1, 2}) {
    for (int trial = 0; trial < 5; ++trial) {
      Vec c(n);
      for (int d = 0; d < n; ++d) c(d) = 0.3 * g(rng);
      const double a = 1.0 + 0.5 * std::abs(g(rng));
      const auto f = GridFunction::sample(Vec::Zero(n), Vec::Constant(n, 10.0),
                                          std::vector<int>(static_cast<size_t>(n), n == 1 ? 512 : 128),
                                          [&](const Vec& x) {
                                            return euclid::Complex(std::exp(-a * (x - c).squaredNorm()), 0.0);
                                          });
      for (double p : {1.5, 2.0, 3.0}) {
        const double l = euclid::lp_norm(f, p);
        lp_err = std::max(lp_err, std::abs(euclid::bessel_norm(f, 0.0, p) - l) / l);
      }
    }
  }
  // Single mode sin(2 pi k x / L) on a periodic grid of length L.
  double mode_err = 0.0;
  const double length = 4.0;
  for (int k : {1, 3, 7}) {
    const auto f = GridFunction::sample(make_vec({0.0}), make_vec({length / 2}), {64}, [&](const Vec& x) {
      return euclid::Complex(std::sin(2 * kPi * k * x(0) / length), 0.0);
    });
    const double l2 = euclid::lp_norm(f, 2.0);
    const double xi2 = std::pow(2 * kPi * k / length, 2);
    for (double s : {-1.0, 0.5, 1.0, 2.0}) {
      const double expect = std::pow(1 + xi2, s / 2) * l2;
      mode_err = std::max(mode_err, std::abs(euclid::bessel_norm(f, s, 2.0, false) - expect) / expect);
    }
  }
  bool bit_equal = true;
  for (int trial = 0; trial < 5; ++trial) {
    const double w = 1.0 + std::abs(g(rng));
    const auto f = GridFunction::sample(Vec::Zero(2), Vec::Constant(2, 8.0), {64, 64}, [&](const Vec& x) {
      return euclid::Complex(std::exp(-w * x.squaredNorm()) * std::cos(3 * x(0)), 0.0);
    });
    for (double s : {0.0, 0.5, 1.5})
      for (double p : {1.5, 2.0, 4.0})
        bit_equal = bit_equal && euclid::besov_norm(f, s, p, p) == euclid::triebel_norm(f, s, p, p);
  }
  o.pass = lp_err < 1e-10 && mode_err < 1e-10 && bit_equal;
  os << "H^0_p vs L_p rel err=" << fmt("%.1e", lp_err) << " single-mode rel err=" << fmt("%.1e", mode_err)
     << " B_pp==F_pp " << (bit_equal ? "bit-equal" : "DIFFER");
  o.detail = os.str();
  return o;
}

struct TraceConfig {
  std::string label;
  std::shared_ptr<const geometry::Submanifold> sub;
  double period;
};

std::vector<TraceConfig> trace_configs() {
  auto s2 = geometry::make_sphere2();
  auto t2 = geometry::make_flat_torus(2);
  return {{"sphere2/equator", geometry::make_sphere_latitude(s2, kPi / 2), 2 * kPi},
          {"flat-torus/circle", geometry::make_torus_circle(t2), 1.0}};
}

Outcome trace_restriction() {
  Outcome o;
  o.pass = true;
  std::ostringstream os;
  for (const auto& c : trace_configs()) {
    auto t = atlas::build_fermi_trivialization(c.sub, 1);
    const auto family = spaces::smooth_family(c.sub->ambient_space(), 10, 21);
    const auto r = experiments::trace_restriction(family, t, 1000, 9);
    o.pass = o.pass && r.sup_error < 1e-6;
    os << c.label << " sup err=" << fmt("%.2e", r.sup_error) << "; ";
  }
  o.detail = os.str();
  return o;
}

Outcome right_inverse() {
  Outcome o;
  o.pass = true;
  std::ostringstream os;
  for (const auto& c : trace_configs()) {
    auto t = atlas::build_fermi_trivialization(c.sub, 1);
    const auto family = spaces::band_limited_family(c.period, 10, 23);
    const auto r = experiments::right_inverse(family, t, c.period, 512);
    o.pass = o.pass && r.max_relative_l2 < 1e-6;
    os << c.label << " rel L2 err=" << fmt("%.2e", r.max_relative_l2) << "; ";
  }
  o.detail = os.str();
  return o;
}

Outcome independence() {
  Outcome o;
  std::ostringstream os;
  auto s2 = geometry::make_sphere2();
  auto geo = atlas::build_geodesic_trivialization(s2, kPi / 4, 1);
  auto fermi = atlas::build_fermi_trivialization(geometry::make_sphere_latitude(s2, kPi / 2), 1);
  const auto family = spaces::smooth_family(*s2, 20, 31);
  spaces::NormRequest req;
  req.s = {0.0, 1.0, 2.0};
  std::vector<std::vector<spaces::Band>> bands;
  for (int res : {128, 256}) {
    req.res = res;
    bands.push_back(spaces::equivalence_experiment(family, *geo, *fermi, req));
  }
  o.pass = true;
  for (size_t i = 0; i < req.s.size(); ++i) {
    const double a = bands[0][i].spread, b = bands[1][i].spread;
    const double change = std::abs(b - a) / a;
    o.pass = o.pass && a < 10 && b < 10 && change < 0.1;
    os << "s=" << req.s[i] << " spread " << fmt("%.3f", a) << "->" << fmt("%.3f", b) << " (change "
       << fmt("%.1e", change) << "); ";
  }
  o.detail = os.str();
  return o;
}

Outcome coincidence() {
  Outcome o;
  std::ostringstream os;
  auto torus = geometry::make_flat_torus(2);
  auto t = atlas::build_geodesic_trivialization(torus, 0.3, 1);
  const auto family = spaces::smooth_family(*torus, 10, 41);
  const auto coarse = experiments::coincidence_band(family, *t, 128);
  const auto fine = experiments::coincidence_band(family, *t, 256);
  const double change = std::abs(fine.spread - coarse.spread) / coarse.spread;
  o.pass = coarse.spread < 10 && fine.spread < 10 && change < 0.1;
  os << "W^2_2/H^2_2 spread " << fmt("%.3f", coarse.spread) << "->" << fmt("%.3f", fine.spread)
     << " (change " << fmt("%.1e", change) << ")";
  o.detail = os.str();
  return o;
}

Outcome admissibility() {
  Outcome o;
  o.pass = true;
  std::ostringstream os;
  auto s2 = geometry::make_sphere2();
  auto rev = geometry::make_surface_of_revolution();
  const std::vector<std::pair<std::string, std::shared_ptr<const geometry::Submanifold>>> configs{
      {"sphere2/equator", geometry::make_sphere_latitude(s2, kPi / 2)},
      {"revolution/parallel", geometry::make_parallel(rev, 0.5)}};
  std::shared_ptr<const atlas::Trivialization> sphere_fermi;
  std::shared_ptr<const atlas::Trivialization> sphere_geo;
  for (const auto& [label, sub] : configs) {
    auto fermi = atlas::build_fermi_trivialization(sub, 1);
    auto geo = atlas::build_geodesic_trivialization(sub->ambient_ptr(), kPi / 4, 2);
    const auto r = atlas::admissibility_report(*fermi, *geo, 3);
    o.pass = o.pass && r.pass;
    double worst = 1.0;
    for (const auto* d : {&r.transitions, &r.cutoffs})
      for (const auto& e : d->orders) worst = std::max(worst, e.ratio);
    os << label << (r.pass ? " pass" : " FAIL") << " (worst ratio " << fmt("%.3f", worst) << "); ";
    if (!sphere_fermi) {
      sphere_fermi = fermi;
      sphere_geo = geo;
    }
  }
  const auto corrupted = atlas::make_corrupted(sphere_fermi);
  const auto bad = atlas::admissibility_report(*corrupted, *sphere_geo, 3);
  o.pass = o.pass && !bad.pass;
  os << "corrupted fixture " << (bad.pass ? "NOT flagged" : "flagged");
  o.detail = os.str();
  return o;
}

Outcome symmetry_equivalence() {
  Outcome o;
  std::ostringstream os;
  auto torus = geometry::make_flat_torus(1);
  auto base = atlas::build_geodesic_trivialization(torus, 0.3, 1);
  const auto family = spaces::trig_family(1, 10, 51);
  const auto r = experiments::symmetry_band(family, base, {0.0, 1.0}, 2.0, 256, 8);
  o.pass = true;
  for (size_t i = 0; i < r.bands.size(); ++i) {
    o.pass = o.pass && r.bands[i].spread < 10 && r.budget_change[i] < 0.01;
    os << "s=" << i << " spread " << fmt("%.3f", r.bands[i].spread) << " budget-doubling change "
       << fmt("%.1e", r.budget_change[i]) << "; ";
  }
  o.detail = os.str();
  return o;
}

Outcome trace_norm_band() {
  Outcome o;
  o.pass = true;
  std::ostringstream os;
  for (const auto& c : trace_configs()) {
    auto t = atlas::build_fermi_trivialization(c.sub, 1);
    const auto family = spaces::smooth_family(c.sub->ambient_space(), 10, 61);
    const auto coarse = experiments::trace_norm_band(family, t, 1.5, 2.0, 128);
    const auto fine = experiments::trace_norm_band(family, t, 1.5, 2.0, 256);
    const double change = std::abs(fine.spread - coarse.spread) / coarse.spread;
    o.pass = o.pass && std::isfinite(fine.spread) && coarse.spread < 10 && fine.spread < 10 && change < 0.1;
    os << c.label << " spread " << fmt("%.3f", coarse.spread) << "->" << fmt("%.3f", fine.spread) << "; ";
  }
  o.detail = os.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "partition-of-unity exactness", 30, partition_exactness},
      {2, "geodesic correctness", 60, geodesic_correctness},
      {3, "euclidean norm identities", 60, euclidean_identities},
      {4, "trace equals restriction", 60, trace_restriction},
      {5, "extension is a right inverse", 120, right_inverse},
      {6, "trivialization independence", 300, independence},
      {7, "W^2_2 and H^2_2 coincidence", 120, coincidence},
      {8, "Fermi admissibility", 120, admissibility},
      {9, "symmetry equivalence", 120, symmetry_equivalence},
      {10, "trace-norm boundedness band", 180, trace_norm_band},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s %2d %-30s %7.1fs (limit %.0fs)%s | %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.limit_seconds, in_time ? "" : " TOO SLOW", o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
