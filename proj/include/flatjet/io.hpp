#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "flatjet/finiteness.hpp"
#include "flatjet/oracle.hpp"
#include "flatjet/whitney.hpp"

namespace flatjet {

using json = nlohmann::json;

// Doubles that may be infinite cross the JSON boundary as the string "inf"
// (JSON has no infinity literal). Finite values stay numbers.
json num_or_inf(double v);
double num_or_inf_parse(const json& j);

json point_to_json(const Point& p);
Point point_from_json(const json& j);

// {"basepoint": [...], "degree": d, "coeffs": {"1,0": v, ...}}; coefficient
// keys are comma-joined exponent tuples, zero entries omitted.
json jet_to_json(const Jet& J);
Jet jet_from_json(const json& j);

json field_to_json(const WhitneyField& field);
WhitneyField field_from_json(const json& j);

json box_to_json(const Box& box);
Box box_from_json(const json& j);

json norm_report_to_json(const NormReport& r);
json decomposition_to_json(const WhitneyDecomposition& dec);
json finiteness_report_to_json(const FinitenessReport& r);
json convexity_witness_to_json(const ConvexityWitness& w);
json convexity_report_to_json(const ConvexityReport& r);

// Oracle specs:
//   {"kind":"bump", "center":[...], "radius":r}
//   {"kind":"polynomial", "jet": {...}}
//   {"kind":"abs_power", "center":[...], "p": p}
//   {"kind":"product", "factors":[spec, ...]}
//   {"kind":"sum", "weights":[...], "terms":[spec, ...]}
//   {"kind":"power", "base": spec, "r": r}
OraclePtr oracle_from_json(const json& j, int n);

// One problem instance as consumed by the command-line driver. Points may
// carry full jets or just values; value-only points are promoted to
// zero-derivative jets of degree floor(s) when a field is requested.
struct Instance {
  int n = 0;
  double s = 0;
  std::vector<Point> points;
  std::vector<double> values;
  std::vector<std::optional<Jet>> jets;
  std::vector<Point> queries;
  std::optional<Box> bound_box;
  std::vector<int> grid;  // per-axis sample counts, empty -> caller default
  std::optional<double> r;
  OraclePtr oracle;  // null unless the instance names one
};

Instance instance_from_json(const json& j);
Instance load_instance(const std::string& path);

WhitneyField instance_field(const Instance& inst, const Smoothness& sm);
GridSpec instance_grid(const Instance& inst, const Box& fallback_box, int default_per_axis);

// 17 significant digits, enough to round-trip a double exactly.
std::string format_full(double v);

// Header x1..xn,value then one row per grid point in grid order.
std::string grid_csv(const GridSpec& grid, const std::vector<double>& values);

struct RunManifest {
  std::string command;
  std::string input_hash;  // FNV-1a 64 of the raw input bytes, hex
  std::uint64_t seed = 0;
  std::string tool_version;
  double wall_time_s = 0;
  std::vector<std::string> outputs;
};

json manifest_to_json(const RunManifest& m);

std::uint64_t fnv1a64(const std::string& bytes);
std::string fnv1a64_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace flatjet
