#include "bgt/report.hpp"

#include "bgt/presets.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bgt::report {

namespace {

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Json ExperimentConfig::to_json() const {
  Json j;
  j["manifold"] = {{"preset", preset}, {"n", dim}, {"profile", {{"r", profile.r}, {"z", profile.z}}}};
  j["submanifold"] = {{"preset", submanifold}, {"latitude", latitude}};
  j["trivialization"] = {{"seed", seed}, {"seed2", seed2}, {"radius", radius},
                         {"compare", compare}, {"corrupted", corrupted}, {"k_max", k_max}};
  j["space"] = {{"s", s}, {"p", p}, {"q", q}};
  j["grid"] = {{"res", res}};
  j["family"] = {{"kind", family}, {"count", family_count}, {"seed", family_seed}};
  j["symmetry"] = {{"budget", budget}};
  j["tolerance"] = tolerance;
  j["output"] = {{"dir", out}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> sections{"manifold", "submanifold", "trivialization", "space",
                                                 "grid", "family", "symmetry", "tolerance", "output"};
  for (const auto& [key, value] : j.items())
    if (std::find(sections.begin(), sections.end(), key) == sections.end())
      throw ConfigError("unknown config section '" + key + "'");
  ExperimentConfig c;
  auto section = [&](const char* name) -> Json {
    if (!j.contains(name)) return Json::object();
    if (!j.at(name).is_object()) throw ConfigError(std::string("config section '") + name + "' must be an object");
    return j.at(name);
  };
  const Json m = section("manifold");
  if (j.contains("manifold") && !m.contains("preset")) throw ConfigError("manifold.preset is missing");
  read(m, "preset", c.preset);
  read(m, "n", c.dim);
  if (m.contains("profile")) {
    read(m.at("profile"), "r", c.profile.r);
    read(m.at("profile"), "z", c.profile.z);
  }
  const Json sub = section("submanifold");
  read(sub, "preset", c.submanifold);
  read(sub, "latitude", c.latitude);
  const Json t = section("trivialization");
  read(t, "seed", c.seed);
  read(t, "seed2", c.seed2);
  read(t, "radius", c.radius);
  read(t, "compare", c.compare);
  read(t, "corrupted", c.corrupted);
  read(t, "k_max", c.k_max);
  const Json sp = section("space");
  read(sp, "s", c.s);
  read(sp, "p", c.p);
  read(sp, "q", c.q);
  read(section("grid"), "res", c.res);
  const Json fam = section("family");
  read(fam, "kind", c.family);
  read(fam, "count", c.family_count);
  read(fam, "seed", c.family_seed);
  read(section("symmetry"), "budget", c.budget);
  read(j, "tolerance", c.tolerance);
  read(section("output"), "dir", c.out);
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  const auto& names = geometry::preset_names();
  if (std::find(names.begin(), names.end(), preset) == names.end())
    throw ConfigError("unknown manifold preset '" + preset + "'");
  if (dim < 1 || dim > 3) throw ConfigError("manifold dimension must lie in [1, 3]");
  if (submanifold != "default" && submanifold != "latitude")
    throw ConfigError("submanifold preset must be 'default' or 'latitude'");
  if (!(latitude > 0.0 && latitude < 3.141592653589793)) throw ConfigError("latitude must lie in (0, pi)");
  if (radius < 0.0) throw ConfigError("radius must be nonnegative");
  if (s.empty() || p.empty()) throw ConfigError("space.s and space.p must be nonempty");
  for (double pi : p)
    if (!(pi > 1.0)) throw ConfigError("every p must exceed 1");
  if (!(q > 0.0)) throw ConfigError("q must be positive");
  if (res < 8 || (res & (res - 1)) != 0) throw ConfigError("grid.res must be a power of two >= 8");
  if (family != "smooth" && family != "trig" && family != "sin" && family != "zero")
    throw ConfigError("family.kind must be smooth, trig, sin or zero");
  if (family_count < 1) throw ConfigError("family.count must be positive");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (compare != "fermi" && compare != "self" && compare != "seed")
    throw ConfigError("trivialization.compare must be fermi, self or seed");
  if (k_max < 0 || k_max > 3) throw ConfigError("trivialization.k_max must lie in [0, 3]");
  if (budget < 1) throw ConfigError("symmetry.budget must be positive");
}

Json ExperimentConfig::experiment_json() const {
  Json j = to_json();
  j.erase("output");
  return j;
}

std::string ExperimentConfig::hash() const { return fnv1a_hex(experiment_json().dump()); }

Json to_json(const spaces::NormReport& r) {
  return {{"space", spaces::to_string(r.kind)}, {"s", r.s}, {"p", r.p}, {"q", r.q},
          {"trivialization", r.trivialization}, {"manifest_id", r.manifest_id}, {"res", r.res},
          {"value", r.value}, {"contributions", r.contributions}};
}

Json to_json(const spaces::Band& b) {
  return {{"ratios", b.ratios}, {"min", b.min}, {"max", b.max}, {"spread", b.spread}};
}

Json to_json(const atlas::PartitionReport& r) {
  return {{"samples", r.samples}, {"max_sum_error", r.max_sum_error}, {"min_cutoff", r.min_cutoff},
          {"max_cutoff", r.max_cutoff}, {"support_violations", r.support_violations},
          {"uncovered", r.uncovered}, {"max_multiplicity", r.max_multiplicity}, {"pass", r.pass}};
}

Json to_json(const atlas::DerivativeReport& r) {
  Json orders = Json::array();
  for (const auto& o : r.orders)
    orders.push_back({{"order", o.order}, {"coarse", o.coarse}, {"fine", o.fine}, {"ratio", o.ratio},
                      {"finite", o.finite}, {"stable", o.stable}});
  return {{"what", r.what}, {"samples", r.samples}, {"step", r.step}, {"orders", orders}, {"pass", r.pass}};
}

Json to_json(const atlas::AdmissibilityReport& r) {
  return {{"transitions", to_json(r.transitions)}, {"cutoffs", to_json(r.cutoffs)},
          {"pass", r.pass}, {"flag", r.pass ? "pass" : "fail"}};
}

Json to_json(const atlas::BoundedGeometryReport& r) {
  return {{"metric", to_json(r.metric)}, {"inverse_metric", to_json(r.inverse_metric)}, {"pass", r.pass}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

std::string to_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << "function_id,s,p,trivialization,value,ratio\n";
  for (const auto& r : rows)
    os << r.function_id << ',' << fmt(r.s) << ',' << fmt(r.p) << ',' << r.trivialization << ','
       << fmt(r.value) << ',' << fmt(r.ratio) << '\n';
  return os.str();
}

}  // namespace bgt::report
