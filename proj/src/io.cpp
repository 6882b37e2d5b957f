#include "flatjet/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace flatjet {

json num_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double num_or_inf_parse(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("expected a number or \"inf\", got \"" + s + "\"");
  }
  return j.get<double>();
}

json point_to_json(const Point& p) {
  json a = json::array();
  for (int j = 0; j < p.dim(); ++j) a.push_back(p.x[static_cast<std::size_t>(j)]);
  return a;
}

Point point_from_json(const json& j) {
  if (!j.is_array() || j.empty() || j.size() > kMaxDim) throw std::invalid_argument("point must be an array of 1..4 numbers");
  return Point(j.get<std::vector<double>>());
}

namespace {

MultiIndex multiindex_from_key(const std::string& key, int n) {
  std::vector<int> e;
  std::size_t pos = 0;
  while (pos <= key.size()) {
    std::size_t next = key.find(',', pos);
    if (next == std::string::npos) next = key.size();
    std::size_t used = 0;
    int v = std::stoi(key.substr(pos, next - pos), &used);
    if (used != next - pos || v < 0) throw std::invalid_argument("bad multi-index key: " + key);
    e.push_back(v);
    pos = next + 1;
  }
  if (static_cast<int>(e.size()) != n) throw std::invalid_argument("multi-index key has wrong dimension: " + key);
  return MultiIndex(e);
}

}  // namespace

json jet_to_json(const Jet& J) {
  json coeffs = json::object();
  for (const auto& [a, c] : J.coeffs)
    if (c != 0.0) coeffs[a.str()] = c;
  return json{{"basepoint", point_to_json(J.basepoint)}, {"degree", J.degree}, {"coeffs", coeffs}};
}

Jet jet_from_json(const json& j) {
  Point bp = point_from_json(j.at("basepoint"));
  int degree = j.at("degree").get<int>();
  JetBuilder b(bp, degree);
  if (j.contains("coeffs"))
    for (const auto& [key, val] : j.at("coeffs").items()) {
      MultiIndex a = multiindex_from_key(key, bp.dim());
      if (a.order() > degree) throw std::invalid_argument("jet coefficient order exceeds degree: " + key);
      b.set(a, val.get<double>());
    }
  return b.build();
}

json field_to_json(const WhitneyField& field) {
  json out = json::array();
  for (const auto& [p, J] : field.entries) out.push_back(json{{"point", point_to_json(p)}, {"jet", jet_to_json(J)}});
  return out;
}

WhitneyField field_from_json(const json& j) {
  std::vector<std::pair<Point, Jet>> entries;
  for (const auto& item : j) entries.emplace_back(point_from_json(item.at("point")), jet_from_json(item.at("jet")));
  return make_field(std::move(entries));
}

json box_to_json(const Box& box) {
  return json{{"lo", box.lo}, {"hi", box.hi}};
}

Box box_from_json(const json& j) {
  Box b;
  b.lo = j.at("lo").get<std::vector<double>>();
  b.hi = j.at("hi").get<std::vector<double>>();
  if (b.lo.size() != b.hi.size() || b.lo.empty()) throw std::invalid_argument("box lo/hi must have equal nonzero length");
  for (std::size_t k = 0; k < b.lo.size(); ++k)
    if (!(b.lo[k] <= b.hi[k])) throw std::invalid_argument("box has lo > hi");
  return b;
}

json norm_report_to_json(const NormReport& r) {
  return json{{"sup_derivs", num_or_inf(r.sup_derivs)}, {"holder", num_or_inf(r.holder)},
              {"flat", num_or_inf(r.flat)},             {"cs", num_or_inf(r.cs)},
              {"fs", num_or_inf(r.fs)},                 {"samples", r.samples},
              {"pairs", r.pairs}};
}

json decomposition_to_json(const WhitneyDecomposition& dec) {
  json out = json::array();
  for (const CubeEntry& e : dec.leaves()) {
    json anchor = json::array();
    for (int j = 0; j < e.cube.n; ++j) anchor.push_back(e.cube.anchor[static_cast<std::size_t>(j)]);
    json item{{"level", e.cube.level}, {"anchor", anchor}};
    if (e.rep >= 0)
      item["rep"] = e.rep;
    else
      item["rep"] = nullptr;
    out.push_back(item);
  }
  return out;
}

json finiteness_report_to_json(const FinitenessReport& r) {
  return json{{"k", r.k},
              {"dim_p", r.dim_p},
              {"subsets", r.subsets},
              {"local_max", num_or_inf(r.local_max)},
              {"global", num_or_inf(r.global)},
              {"ratio", num_or_inf(r.ratio)},
              {"c_cap", r.c_cap},
              {"violation", r.violation}};
}

json convexity_witness_to_json(const ConvexityWitness& w) {
  return json{{"f", w.f},
              {"M", w.M},
              {"delta", w.delta},
              {"P1", jet_to_json(w.P1)},
              {"P2", jet_to_json(w.P2)},
              {"Q1", jet_to_json(w.Q1)},
              {"Q2", jet_to_json(w.Q2)},
              {"P", jet_to_json(w.P)},
              {"measured_C", w.measured_C}};
}

json convexity_report_to_json(const ConvexityReport& r) {
  return json{{"n", r.n},           {"s", r.s},
              {"seed", r.seed},     {"trials", r.trials},
              {"rejections", r.rejections}, {"max_C", r.max_C},
              {"worst", convexity_witness_to_json(r.worst)}};
}

OraclePtr oracle_from_json(const json& j, int n) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "bump") {
    Point c = point_from_json(j.at("center"));
    if (c.dim() != n) throw std::invalid_argument("bump oracle center has wrong dimension");
    return bump_oracle(c, j.at("radius").get<double>());
  }
  if (kind == "polynomial") {
    Jet J = jet_from_json(j.at("jet"));
    if (J.dim() != n) throw std::invalid_argument("polynomial oracle jet has wrong dimension");
    return polynomial_oracle(J);
  }
  if (kind == "abs_power") {
    Point c = point_from_json(j.at("center"));
    if (c.dim() != n) throw std::invalid_argument("abs_power oracle center has wrong dimension");
    return abs_power_oracle(c, j.at("p").get<double>());
  }
  if (kind == "product") {
    std::vector<OraclePtr> factors;
    for (const auto& spec : j.at("factors")) factors.push_back(oracle_from_json(spec, n));
    return product_oracle(std::move(factors));
  }
  if (kind == "sum") {
    std::vector<double> weights = j.at("weights").get<std::vector<double>>();
    std::vector<OraclePtr> terms;
    for (const auto& spec : j.at("terms")) terms.push_back(oracle_from_json(spec, n));
    return sum_oracle(std::move(weights), std::move(terms));
  }
  if (kind == "power") return power_oracle(oracle_from_json(j.at("base"), n), j.at("r").get<double>());
  throw std::invalid_argument("unknown oracle kind: " + kind);
}

Instance instance_from_json(const json& j) {
  Instance inst;
  inst.n = j.at("n").get<int>();
  if (inst.n < 1 || inst.n > kMaxDim) throw std::invalid_argument("instance dimension must be 1..4");
  inst.s = j.at("s").get<double>();
  if (j.contains("points"))
    for (const auto& item : j.at("points")) {
      Point p = point_from_json(item.at("x"));
      if (p.dim() != inst.n) throw std::invalid_argument("instance point has wrong dimension");
      inst.points.push_back(p);
      if (item.contains("jet")) {
        Jet J = jet_from_json(item.at("jet"));
        if (!(J.basepoint == p)) throw std::invalid_argument("instance jet basepoint differs from its point");
        inst.values.push_back(item.contains("f") ? item.at("f").get<double>() : J.value());
        if (item.contains("f") && std::abs(J.value() - inst.values.back()) > 1e-12 * std::max(1.0, std::abs(inst.values.back())))
          throw std::invalid_argument("instance point value disagrees with its jet");
        inst.jets.emplace_back(std::move(J));
      } else {
        inst.values.push_back(item.at("f").get<double>());
        inst.jets.emplace_back(std::nullopt);
      }
    }
  if (j.contains("queries"))
    for (const auto& item : j.at("queries")) {
      Point p = point_from_json(item);
      if (p.dim() != inst.n) throw std::invalid_argument("instance query has wrong dimension");
      inst.queries.push_back(p);
    }
  if (j.contains("bound_box")) {
    Box b = box_from_json(j.at("bound_box"));
    if (b.dim() != inst.n) throw std::invalid_argument("instance bound box has wrong dimension");
    inst.bound_box = b;
  }
  if (j.contains("grid")) {
    inst.grid = j.at("grid").get<std::vector<int>>();
    if (static_cast<int>(inst.grid.size()) != inst.n) throw std::invalid_argument("grid counts must list one entry per axis");
    for (int g : inst.grid)
      if (g < 1) throw std::invalid_argument("grid counts must be positive");
  }
  if (j.contains("r")) inst.r = j.at("r").get<double>();
  if (j.contains("oracle")) inst.oracle = oracle_from_json(j.at("oracle"), inst.n);
  return inst;
}

Instance load_instance(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("cannot parse ") + path + ": " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad instance ") + path + ": " + e.what());
  }
}

WhitneyField instance_field(const Instance& inst, const Smoothness& sm) {
  if (inst.points.empty()) throw std::invalid_argument("instance has no points");
  std::vector<std::pair<Point, Jet>> entries;
  for (std::size_t i = 0; i < inst.points.size(); ++i) {
    const Point& p = inst.points[i];
    if (inst.jets[i]) {
      Jet J = *inst.jets[i];
      if (J.degree != sm.floor_s) throw std::invalid_argument("instance jet degree differs from floor(s)");
      entries.emplace_back(p, std::move(J));
    } else {
      entries.emplace_back(p, constant_jet(p, sm.floor_s, inst.values[i]));
    }
  }
  return make_field(std::move(entries));
}

GridSpec instance_grid(const Instance& inst, const Box& fallback_box, int default_per_axis) {
  GridSpec g;
  g.box = inst.bound_box ? *inst.bound_box : fallback_box;
  if (!inst.grid.empty())
    g.counts = inst.grid;
  else
    g.counts.assign(static_cast<std::size_t>(inst.n), default_per_axis);
  return g;
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string grid_csv(const GridSpec& grid, const std::vector<double>& values) {
  if (static_cast<std::int64_t>(values.size()) != grid.total())
    throw std::invalid_argument("grid_csv: value count differs from grid size");
  std::ostringstream out;
  int n = grid.box.dim();
  for (int j = 0; j < n; ++j) out << "x" << (j + 1) << ",";
  out << "value\n";
  for (std::int64_t i = 0; i < grid.total(); ++i) {
    Point p = grid.point(i);
    for (int j = 0; j < n; ++j) out << format_full(p.x[static_cast<std::size_t>(j)]) << ",";
    out << format_full(values[static_cast<std::size_t>(i)]) << "\n";
  }
  return out.str();
}

json manifest_to_json(const RunManifest& m) {
  return json{{"command", m.command},   {"input_hash", m.input_hash},     {"seed", m.seed},
              {"tool_version", m.tool_version}, {"wall_time_s", m.wall_time_s}, {"outputs", m.outputs}};
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string fnv1a64_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << contents;
  if (!out) throw std::invalid_argument("write failed: " + path);
}

}  // namespace flatjet
