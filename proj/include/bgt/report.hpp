#pragma once

#include "bgt/atlas.hpp"
#include "bgt/presets.hpp"
#include "bgt/spaces.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace bgt::report {

// std::map-backed object, so keys are always emitted sorted.
using Json = nlohmann::json;

// FNV-1a 64-bit, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string preset = "sphere2";
  int dim = 2;
  geometry::Profile profile;
  std::string submanifold = "default";
  double latitude = 1.5707963267948966;  // used when submanifold == "latitude"
  std::uint64_t seed = 1;
  std::uint64_t seed2 = 2;
  double radius = 0.0;  // geodesic chart radius, 0 picks a per-preset default
  std::vector<double> s{0.0, 1.0, 2.0};
  std::vector<double> p{2.0};
  double q = 2.0;
  int res = 128;
  std::string family = "smooth";  // smooth | trig | sin | zero
  int family_count = 10;
  std::uint64_t family_seed = 5;
  double tolerance = 1e-6;
  std::string compare = "fermi";  // equiv: fermi | self | seed
  bool corrupted = false;         // admissibility negative control
  int k_max = 3;
  int budget = 25;
  std::string out = "bgt-out";

  Json to_json() const;
  static ExperimentConfig from_json(const Json& j);  // throws ConfigError
  void validate() const;                             // throws ConfigError
  // to_json without the output section: what determines the numbers.
  Json experiment_json() const;
  std::string hash() const;  // of experiment_json
};

Json to_json(const spaces::NormReport& r);
Json to_json(const spaces::Band& b);
Json to_json(const atlas::PartitionReport& r);
Json to_json(const atlas::DerivativeReport& r);
Json to_json(const atlas::AdmissibilityReport& r);
Json to_json(const atlas::BoundedGeometryReport& r);

// Pretty-printed with a trailing newline; identical input gives identical bytes.
std::string dump(const Json& j);
void write_text(const std::string& path, const std::string& text);

struct CsvRow {
  std::string function_id;
  double s = 0.0;
  double p = 0.0;
  std::string trivialization;
  double value = 0.0;
  double ratio = 0.0;
};

// Columns function_id,s,p,trivialization,value,ratio.
std::string to_csv(const std::vector<CsvRow>& rows);

}  // namespace bgt::report
