#include "bgt/commands.hpp"

#include "bgt/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <optional>

namespace bgt::report {

namespace {

constexpr double kPi = 3.141592653589793;

std::shared_ptr<const geometry::Space> make_space(const ExperimentConfig& c) {
  return geometry::make_preset(c.preset, c.dim, c.profile);
}

std::shared_ptr<const geometry::Submanifold> make_sub(const ExperimentConfig& c,
                                                      std::shared_ptr<const geometry::Space> m) {
  if (c.submanifold == "latitude") {
    if (c.preset != "sphere2") throw ConfigError("submanifold 'latitude' needs the sphere2 preset");
    return geometry::make_sphere_latitude(m, c.latitude);
  }
  return geometry::make_default_submanifold(m, c.preset);
}

double radius_of(const ExperimentConfig& c) {
  return c.radius > 0.0 ? c.radius : default_radius(c.preset);
}

// Parameter period of the default closed curves, none for open submanifolds.
std::optional<double> curve_period(const ExperimentConfig& c) {
  if (c.preset == "sphere2" || c.preset == "surface-of-revolution") return 2 * kPi;
  if (c.preset == "flat-torus" && c.dim == 2) return 1.0;
  return std::nullopt;
}

Json header(const std::string& name, const ExperimentConfig& c) {
  return {{"command", name}, {"config", c.experiment_json()}, {"config_hash", c.hash()}};
}

std::vector<double> column(const std::vector<std::vector<double>>& rows, size_t i) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[i]);
  return out;
}

double safe_ratio(double a, double b) { return b != 0.0 ? a / b : 0.0; }

}  // namespace

double default_radius(const std::string& preset) {
  if (preset == "euclidean") return 1.0;
  if (preset == "flat-torus") return 0.3;
  if (preset == "hyperbolic2") return 0.5;
  return kPi / 4;
}

std::vector<spaces::ManifoldFunction> make_family(const ExperimentConfig& c, const geometry::Space& m) {
  if (c.family == "smooth") return spaces::smooth_family(m, c.family_count, c.family_seed);
  if (c.family == "trig") return spaces::trig_family(m.dim(), c.family_count, c.family_seed);
  if (c.family == "sin")
    return {{"sin", [](const Point& p) { return spaces::Complex(std::sin(2 * kPi * p(0)), 0.0); }, "sin"}};
  std::vector<spaces::ManifoldFunction> out;
  for (int i = 0; i < c.family_count; ++i) {
    auto f = spaces::zero_function();
    f.id = "zero-" + std::to_string(i);
    out.push_back(f);
  }
  return out;
}

CommandResult cmd_norm(const ExperimentConfig& c) {
  const auto m = make_space(c);
  const auto t = atlas::build_geodesic_trivialization(m, radius_of(c), c.seed);
  const auto family = make_family(c, *m);
  CommandResult r{"norm", header("norm", c), "", true};
  r.report["manifest_id"] = t->manifest_id();
  r.report["trivialization"] = to_string(t->kind());
  Json results = Json::array();
  std::vector<CsvRow> rows;
  for (double p : c.p) {
    spaces::NormRequest l2;
    l2.s = {0.0};
    l2.p = p;
    l2.res = c.res;
    const auto base = spaces::localized_norms(family, *t, l2);
    for (spaces::NormKind kind : {spaces::NormKind::H, spaces::NormKind::B, spaces::NormKind::F}) {
      spaces::NormRequest req;
      req.kind = kind;
      req.s = c.s;
      req.p = p;
      req.q = kind == spaces::NormKind::B ? p : c.q;
      req.res = c.res;
      const auto v = spaces::localized_norms(family, *t, req);
      for (size_t f = 0; f < family.size(); ++f)
        for (size_t i = 0; i < c.s.size(); ++i) {
          results.push_back({{"function_id", family[f].id}, {"space", spaces::to_string(kind)},
                             {"s", c.s[i]}, {"p", p}, {"q", req.q}, {"value", v[f][i]}});
          rows.push_back({family[f].id, c.s[i], p, std::string(spaces::to_string(kind)) + ":geodesic",
                          v[f][i], safe_ratio(v[f][i], base[f][0])});
        }
    }
  }
  r.report["results"] = results;
  r.csv = to_csv(rows);
  return r;
}

CommandResult cmd_equiv(const ExperimentConfig& c) {
  const auto m = make_space(c);
  const auto t1 = atlas::build_geodesic_trivialization(m, radius_of(c), c.seed);
  std::shared_ptr<const atlas::Trivialization> t2 = t1;
  if (c.compare == "fermi")
    t2 = atlas::build_fermi_trivialization(make_sub(c, m), c.seed);
  else if (c.compare == "seed")
    t2 = atlas::build_geodesic_trivialization(m, radius_of(c), c.seed2);
  const auto family = make_family(c, *m);
  CommandResult r{"equiv", header("equiv", c), "", true};
  r.report["manifest_id"] = t1->manifest_id();
  r.report["manifest_ids"] = {t1->manifest_id(), t2->manifest_id()};
  r.report["trivializations"] = {to_string(t1->kind()), to_string(t2->kind())};
  const std::string label = std::string(to_string(t1->kind())) + "/" + to_string(t2->kind());
  Json bands = Json::array();
  std::vector<CsvRow> rows;
  for (double p : c.p) {
    spaces::NormRequest req;
    req.s = c.s;
    req.p = p;
    req.res = c.res;
    const auto a = spaces::localized_norms(family, *t1, req);
    const auto b = t2 == t1 ? a : spaces::localized_norms(family, *t2, req);
    for (size_t i = 0; i < c.s.size(); ++i) {
      const spaces::Band band = spaces::make_band(column(a, i), column(b, i));
      Json j = to_json(band);
      j["s"] = c.s[i];
      j["p"] = p;
      j["within_band"] = band.spread < 10.0;
      r.pass = r.pass && band.spread < 10.0;
      bands.push_back(j);
      for (size_t f = 0; f < family.size(); ++f)
        rows.push_back({family[f].id, c.s[i], p, label, a[f][i], safe_ratio(a[f][i], b[f][i])});
    }
  }
  r.report["bands"] = bands;
  r.report["pass"] = r.pass;
  r.csv = to_csv(rows);
  return r;
}

CommandResult cmd_trace(const ExperimentConfig& c) {
  const auto m = make_space(c);
  const auto sub = make_sub(c, m);
  const auto t = atlas::build_fermi_trivialization(sub, c.seed);
  const auto family = make_family(c, *m);
  CommandResult r{"trace", header("trace", c), "", true};
  r.report["manifest_id"] = t->manifest_id();
  r.report["submanifold"] = sub->name();

  const auto tr = experiments::trace_restriction(family, t, 1000, c.seed2);
  r.report["restriction"] = {{"points", tr.points}, {"sup_error", tr.sup_error},
                             {"per_function", tr.per_function},
                             {"pass", tr.sup_error < c.tolerance}};
  r.pass = tr.sup_error < c.tolerance;
  std::vector<CsvRow> rows;
  for (size_t f = 0; f < family.size(); ++f)
    rows.push_back({family[f].id, 0.0, 0.0, "trace-restriction", tr.per_function[f], 0.0});

  if (const auto period = curve_period(c)) {
    const auto curve_family = spaces::band_limited_family(*period, c.family_count, c.family_seed);
    const auto ri = experiments::right_inverse(curve_family, t, *period, 512);
    r.report["right_inverse"] = {{"points", ri.points}, {"max_relative_l2", ri.max_relative_l2},
                                 {"sup_error", ri.sup_error}, {"per_function", ri.per_function},
                                 {"pass", ri.max_relative_l2 < c.tolerance}};
    r.pass = r.pass && ri.max_relative_l2 < c.tolerance;
    for (size_t f = 0; f < curve_family.size(); ++f)
      rows.push_back({curve_family[f].id, 0.0, 0.0, "right-inverse", ri.per_function[f], 0.0});
  }

  Json bands = Json::array();
  const int codim = sub->codim();
  bool zero = true;
  for (const auto& f : family) zero = zero && f.family == "zero";
  for (double p : c.p)
    for (double s : c.s) {
      if (!(s > codim / p) || zero) continue;
      const spaces::Band band = experiments::trace_norm_band(family, t, s, p, c.res);
      Json j = to_json(band);
      j["s"] = s;
      j["p"] = p;
      bands.push_back(j);
      for (size_t f = 0; f < family.size(); ++f)
        rows.push_back({family[f].id, s, p, "trace-norm", band.ratios[f], band.ratios[f]});
    }
  r.report["trace_norm_bands"] = bands;
  r.report["pass"] = r.pass;
  r.csv = to_csv(rows);
  return r;
}

CommandResult cmd_admissibility(const ExperimentConfig& c) {
  const auto m = make_space(c);
  const auto sub = make_sub(c, m);
  std::shared_ptr<const atlas::Trivialization> t = atlas::build_fermi_trivialization(sub, c.seed);
  if (c.corrupted) t = atlas::make_corrupted(t);
  const auto geo = atlas::build_geodesic_trivialization(m, radius_of(c), c.seed2);
  CommandResult r{"admissibility", header("admissibility", c), "", true};
  r.report["manifest_id"] = t->manifest_id();
  r.report["reference_manifest_id"] = geo->manifest_id();
  r.report["trivialization"] = to_string(t->kind());

  const auto adm = atlas::admissibility_report(*t, *geo, c.k_max);
  const auto part = atlas::check_partition(*t, 2000, c.seed2);
  const auto bg = atlas::bounded_geometry_report(*t, c.k_max);
  r.report["admissibility"] = to_json(adm);
  r.report["partition"] = to_json(part);
  r.report["bounded_geometry"] = to_json(bg);
  r.pass = adm.pass && part.pass && bg.pass;
  r.report["flag"] = r.pass ? "pass" : "fail";

  std::vector<CsvRow> rows;
  const std::string label = to_string(t->kind());
  for (const auto* d : {&adm.transitions, &adm.cutoffs, &bg.metric, &bg.inverse_metric})
    for (const auto& o : d->orders)
      rows.push_back({d->what + " order " + std::to_string(o.order), 0.0, 0.0, label, o.fine, o.ratio});
  r.csv = to_csv(rows);
  return r;
}

CommandResult cmd_symmetry(const ExperimentConfig& c) {
  if (c.preset != "flat-torus") throw ConfigError("symmetry needs the flat-torus preset");
  if (c.family == "smooth") throw ConfigError("symmetry needs a periodic family (trig, sin or zero)");
  const auto m = make_space(c);
  const auto base = atlas::build_geodesic_trivialization(m, radius_of(c), c.seed);
  const auto family = make_family(c, *m);
  CommandResult r{"symmetry", header("symmetry", c), "", true};
  r.report["manifest_id"] = base->manifest_id();
  Json bands = Json::array();
  std::vector<CsvRow> rows;
  for (double p : c.p) {
    const auto sym = experiments::symmetry_band(family, base, c.s, p, c.res, c.budget);
    for (size_t i = 0; i < c.s.size(); ++i) {
      Json j = to_json(sym.bands[i]);
      j["s"] = c.s[i];
      j["p"] = p;
      j["budget"] = sym.budget;
      j["budget_change"] = sym.budget_change[i];
      j["tail_bound"] = sym.tail_bounds[i];
      const bool ok = sym.bands[i].spread < 10.0 && sym.budget_change[i] < 0.01;
      j["pass"] = ok;
      r.pass = r.pass && ok;
      bands.push_back(j);
      for (size_t f = 0; f < family.size(); ++f)
        rows.push_back({family[f].id, c.s[i], p, "torus/weighted", sym.bands[i].ratios[f],
                        sym.bands[i].ratios[f]});
    }
  }
  r.report["bands"] = bands;
  r.report["pass"] = r.pass;
  r.csv = to_csv(rows);
  return r;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"norm", "equiv", "trace", "admissibility", "symmetry"};
  return names;
}

CommandResult run_command(const std::string& name, const ExperimentConfig& c) {
  if (name == "norm") return cmd_norm(c);
  if (name == "equiv") return cmd_equiv(c);
  if (name == "trace") return cmd_trace(c);
  if (name == "admissibility") return cmd_admissibility(c);
  if (name == "symmetry") return cmd_symmetry(c);
  throw ConfigError("unknown command '" + name + "'");
}

void write_result(const std::string& dir, const CommandResult& r) {
  std::filesystem::create_directories(dir);
  write_text(dir + "/" + r.name + ".json", dump(r.report));
  write_text(dir + "/" + r.name + ".csv", r.csv);
}

}  // namespace bgt::report
