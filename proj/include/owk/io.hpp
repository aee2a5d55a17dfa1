#pragma once

// Serialization, run configuration and manifests.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "owk/analytic.hpp"
#include "owk/green.hpp"
#include "owk/lattice.hpp"
#include "owk/martin.hpp"
#include "owk/quadrature.hpp"
#include "owk/simulate.hpp"

namespace owk {

using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.9.0";

// %.17g, with nan/inf spelled out.
std::string fmt17(double v);

// Minimal CSV builder: values joined by ',', rows by '\n'.
class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);
  CsvWriter& row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  std::size_t columns_;
};

json to_json(const LatticePoint& p);
json to_json(const EstimateWithError& e);
json to_json(const ProbabilityTable& t);
json to_json(const QuadratureSpec& s);
json to_json(const CfModel& m);
json to_json(const Orientation& o);
json to_json(const SingularityEstimate& s);
json to_json(const ClosedFormReport& r);
json to_json(const MartinReport& r);
std::string martin_csv(const MartinReport& r);

// "x1,x2", negative values allowed.
LatticePoint parse_point(const std::string& text);

// {"kind": "half-plane-sign"|"constant"|"alternating"|"iid-random"|"table",
//  "sign": +-1, "f": 0.5, "seed": 42, "rows": {"-1": -1, "0": 0, "1": 1}}
Orientation orientation_from_json(const json& j);
// {"drift": [{"y": 0, "p": 0.333, "q": 0.333}, ...], "drift_default": {"p": .., "q": ..}}
std::optional<DriftProfile> drift_from_json(const json& j);

CfForm parse_form(const std::string& s);
std::string form_name(CfForm f);

struct RunConfig {
  CfModel model;
  Orientation orientation = Orientation::half_plane();
  WalkParams walk;
  QuadratureSpec spec;
  std::uint64_t seed = 1;
  std::string output;          // empty: stdout
  std::string format = "json";  // json | csv

  void validate() const;
  json to_json() const;
  // Keys present in j override the current values.
  void merge(const json& j);
};

struct RunManifest {
  json config;
  std::string command;
  std::string tool_version = kToolVersion;
  double wall_seconds = 0.0;
  json diagnostics = json::object();

  json to_json() const;
};

// Writes content to path (or stdout when empty) and the manifest to
// path + ".manifest.json" (or stderr when path is empty).
void emit(const std::string& path, const std::string& content, const RunManifest& manifest);

std::string read_file(const std::string& path);

}  // namespace owk
