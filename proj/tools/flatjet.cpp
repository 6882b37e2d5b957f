#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flatjet/faa_di_bruno.hpp"
#include "flatjet/io.hpp"

namespace {

constexpr const char* kToolVersion = "flatjet 0.1.0";

using namespace flatjet;

struct Options {
  std::string input, out;
  int grid = 0;       // per-axis override, 0 = instance/default
  int k = 0;          // subset bound (finiteness) or jet order (fdb), 0 = auto
  int max_level = WhitneyDecomposition::kDefaultMaxLevel;
  std::uint64_t seed = 0;
  double s = 0;       // 0 = use instance value
  double r = 0;       // 0 = use instance value (default 0.5)
  double c_cap = 100.0;
  std::int64_t budget = 0;  // pair-sample cap / projection sweeps, 0 = default
  int trials = 1000;
};

int default_per_axis(int n) {
  switch (n) {
    case 1: return 256;
    case 2: return 64;
    case 3: return 16;
    default: return 8;
  }
}

Box fallback_box(const Instance& inst) {
  if (inst.bound_box) return *inst.bound_box;
  if (inst.points.empty()) throw std::invalid_argument("instance needs bound_box or points to define a sampling box");
  int n = inst.n;
  Box b{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (int j = 0; j < n; ++j) {
    double lo = inst.points.front()[j], hi = lo;
    for (const Point& p : inst.points) {
      lo = std::min(lo, p[j]);
      hi = std::max(hi, p[j]);
    }
    b.lo[static_cast<std::size_t>(j)] = lo - 1.0;
    b.hi[static_cast<std::size_t>(j)] = hi + 1.0;
  }
  return b;
}

GridSpec make_grid(const Instance& inst, const Options& opt) {
  GridSpec g = instance_grid(inst, fallback_box(inst), opt.grid > 0 ? opt.grid : default_per_axis(inst.n));
  if (opt.grid > 0) g.counts.assign(static_cast<std::size_t>(inst.n), opt.grid);
  return g;
}

double effective_s(const Instance& inst, const Options& opt) { return opt.s > 0 ? opt.s : inst.s; }
double effective_r(const Instance& inst, const Options& opt) {
  if (opt.r > 0) return opt.r;
  return inst.r.value_or(0.5);
}

// target of sampling commands: the named oracle when present, otherwise the
// extension of the instance field
OraclePtr make_target(const Instance& inst, const Smoothness& sm, const Options& opt, std::string& name) {
  if (inst.oracle) {
    name = "oracle";
    return inst.oracle;
  }
  name = "extension";
  WhitneyField field = instance_field(inst, sm);
  return whitney_extend(field, sm, fallback_box(inst), opt.max_level);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void run_decompose(const Instance& inst, const Options& opt, json& out) {
  if (inst.points.empty()) throw std::invalid_argument("decompose: instance has no points");
  WhitneyDecomposition dec = whitney_decompose(inst.points, fallback_box(inst), opt.max_level);
  json pts = json::array();
  for (const Point& p : inst.points) pts.push_back(point_to_json(p));
  out = json{{"n", inst.n},
             {"points", pts},
             {"box", box_to_json(dec.covered())},
             {"count", dec.leaves().size()},
             {"leaves", decomposition_to_json(dec)}};
}

void run_extend(const Instance& inst, const Options& opt, json& out) {
  Smoothness sm = smoothness(effective_s(inst, opt));
  WhitneyField field = instance_field(inst, sm);
  auto ext = whitney_extend(field, sm, fallback_box(inst), opt.max_level);
  double err = 0.0;
  std::vector<std::pair<Point, Jet>> at_data;
  for (const auto& [p, J] : field.entries) {
    Jet R = ext->jet_at(p, sm.floor_s);
    for (const auto& [a, c] : J.coeffs) err = std::max(err, std::abs(R.coeff(a) - c) / std::max(1.0, std::abs(c)));
    for (const auto& [a, c] : R.coeffs) err = std::max(err, std::abs(J.coeff(a) - c) / std::max(1.0, std::abs(c)));
    at_data.emplace_back(p, std::move(R));
  }
  out = json{{"s", sm.s},
             {"leaves", ext->decomposition().leaves().size()},
             {"box", box_to_json(ext->domain())},
             {"max_jet_error", err},
             {"jets_at_data", field_to_json(make_field(std::move(at_data)))}};
}

void run_eval_grid(const Instance& inst, const Options& opt, std::string& text_out) {
  Smoothness sm = smoothness(effective_s(inst, opt));
  std::string target_name;
  OraclePtr F = make_target(inst, sm, opt, target_name);
  GridSpec grid = make_grid(inst, opt);
  std::vector<double> values(static_cast<std::size_t>(grid.total()));
  for (std::int64_t i = 0; i < grid.total(); ++i) values[static_cast<std::size_t>(i)] = F->value_at(grid.point(i));
  text_out = grid_csv(grid, values);
}

void run_eval_jets(const Instance& inst, const Options& opt, json& out) {
  Smoothness sm = smoothness(effective_s(inst, opt));
  if (inst.queries.empty()) throw std::invalid_argument("eval-jets: instance has no queries");
  std::string target_name;
  OraclePtr F = make_target(inst, sm, opt, target_name);
  int order = opt.k > 0 ? opt.k : sm.floor_s;
  json jets = json::array();
  for (const Point& q : inst.queries)
    jets.push_back(json{{"point", point_to_json(q)}, {"jet", jet_to_json(F->jet_at(q, order))}});
  out = json{{"target", target_name}, {"order", order}, {"jets", jets}};
}

void run_norms(const Instance& inst, const Options& opt, json& out) {
  Smoothness sm = smoothness(effective_s(inst, opt));
  std::string target_name;
  OraclePtr F = make_target(inst, sm, opt, target_name);
  GridSpec grid = make_grid(inst, opt);
  std::int64_t cap = opt.budget > 0 ? opt.budget : kPairCap;
  NormReport rep = sampled_norms(*F, grid, sm, Exec::parallel, cap);
  double min_value = sampled_min_value(*F, grid);
  out = json{{"target", target_name},
             {"s", sm.s},
             {"grid", grid.counts},
             {"sampled", norm_report_to_json(rep)},
             {"min_value", num_or_inf(min_value)}};
  if (!inst.points.empty()) {
    WhitneyField field = instance_field(inst, sm);
    json fieldnorms{{"cs", num_or_inf(whitney_field_cs_norm(field, sm))},
                    {"flat", num_or_inf(whitney_field_flat_norm(field, sm))},
                    {"fs", num_or_inf(whitney_field_fs_norm(field, sm))}};
    out["field"] = fieldnorms;
  }
}

void run_root(const Instance& inst, const Options& opt, json& out) {
  if (!inst.oracle) throw std::invalid_argument("root: instance needs an oracle");
  double r = effective_r(inst, opt);
  if (!(r > 0) || r > 1) throw std::invalid_argument("root: exponent must lie in (0,1]");
  Smoothness sm = smoothness(effective_s(inst, opt));
  Smoothness sm_root = smoothness(r * sm.s);
  OraclePtr G = power_oracle(inst.oracle, r);
  GridSpec grid = make_grid(inst, opt);
  std::int64_t cap = opt.budget > 0 ? opt.budget : kPairCap;
  NormReport base = sampled_norms(*inst.oracle, grid, sm, Exec::parallel, cap);
  NormReport root = sampled_norms(*G, grid, sm_root, Exec::parallel, cap);
  double denom = std::pow(base.fs, r);
  double ratio = denom > 0 ? root.cs / denom : std::numeric_limits<double>::infinity();
  out = json{{"s", sm.s},
             {"r", r},
             {"root_s", sm_root.s},
             {"grid", grid.counts},
             {"base", norm_report_to_json(base)},
             {"root", norm_report_to_json(root)},
             {"ratio", num_or_inf(ratio)}};
}

// tensor central difference for one mixed partial, step h per axis
double central_fd(const JetOracle& F, double r, const Point& x, const MultiIndex& a, double h) {
  int n = x.dim();
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  double acc = 0.0;
  bool done = false;
  while (!done) {
    double coeff = 1.0;
    Point y = x;
    for (int j = 0; j < n; ++j) {
      int aj = a[j], ij = idx[static_cast<std::size_t>(j)];
      coeff *= ((aj - ij) % 2 ? -1.0 : 1.0) * static_cast<double>(binomial(aj, ij));
      y[j] += (ij - 0.5 * aj) * h;
    }
    acc += coeff * std::pow(F.value_at(y), r);
    done = true;
    for (int j = 0; j < n; ++j) {
      if (++idx[static_cast<std::size_t>(j)] <= a[j]) {
        done = false;
        break;
      }
      idx[static_cast<std::size_t>(j)] = 0;
    }
  }
  return acc / std::pow(h, a.order());
}

void run_fdb(const Instance& inst, const Options& opt, json& out) {
  if (!inst.oracle) throw std::invalid_argument("fdb: instance needs an oracle");
  if (inst.queries.empty()) throw std::invalid_argument("fdb: instance has no queries");
  double r = effective_r(inst, opt);
  int order = opt.k > 0 ? opt.k : 2;
  auto mis = enumerate_multiindices(inst.n, order);
  double h = 1e-2;
  double max_rel = 0.0;
  json items = json::array();
  for (const Point& q : inst.queries) {
    Jet J = inst.oracle->jet_at(q, order);
    Jet R = power_jet(J, r);
    double here = 0.0;
    for (const MultiIndex& a : mis) {
      double fd = central_fd(*inst.oracle, r, q, a, h);
      double scale = std::max(1.0, std::abs(R.coeff(a)));
      here = std::max(here, std::abs(R.coeff(a) - fd) / scale);
    }
    max_rel = std::max(max_rel, here);
    items.push_back(json{{"point", point_to_json(q)}, {"jet", jet_to_json(R)}, {"fd_rel_err", here}});
  }
  out = json{{"r", r}, {"order", order}, {"fd_step", h}, {"jets", items}, {"fd_max_rel_err", max_rel}};
}

void run_finiteness(const Instance& inst, const Options& opt, json& out) {
  if (inst.points.empty()) throw std::invalid_argument("finiteness: instance has no points");
  Smoothness sm = smoothness(effective_s(inst, opt));
  SurrogateOptions sopts;
  if (opt.budget > 0) sopts.sweeps = static_cast<int>(opt.budget);
  FinitenessReport rep = finiteness_scan(inst.points, inst.values, sm, opt.k, opt.c_cap, sopts);
  out = finiteness_report_to_json(rep);
}

void run_fuzz(const Instance& inst, const Options& opt, json& out) {
  Smoothness sm = smoothness(effective_s(inst, opt));
  ConvexityReport rep = fuzz_whitney_convexity(inst.n, sm, opt.trials, opt.seed);
  out = convexity_report_to_json(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Whitney extension and smoothness estimation for nonnegative jet data"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd, bool needs_out = true) {
    cmd->add_option("--input", opt.input, "instance JSON path")->required();
    if (needs_out) cmd->add_option("--out", opt.out, "output path")->required();
    return cmd;
  };

  auto* c_dec = add_common(app.add_subcommand("decompose", "dyadic decomposition around the instance points"));
  c_dec->add_option("--max-level", opt.max_level, "refinement limit");

  auto* c_ext = add_common(app.add_subcommand("extend", "build the extension and report its jets at the data"));
  c_ext->add_option("--max-level", opt.max_level, "refinement limit");
  c_ext->add_option("--s", opt.s, "smoothness exponent override");

  auto* c_eg = add_common(app.add_subcommand("eval-grid", "sample values on a uniform grid (CSV)"));
  c_eg->add_option("--grid", opt.grid, "points per axis");
  c_eg->add_option("--s", opt.s, "smoothness exponent override");
  c_eg->add_option("--max-level", opt.max_level, "refinement limit");

  auto* c_ej = add_common(app.add_subcommand("eval-jets", "jets at the instance query points"));
  c_ej->add_option("--k", opt.k, "jet order (default floor(s))");
  c_ej->add_option("--s", opt.s, "smoothness exponent override");
  c_ej->add_option("--max-level", opt.max_level, "refinement limit");

  auto* c_no = add_common(app.add_subcommand("norms", "sampled smoothness quantities of the target"));
  c_no->add_option("--grid", opt.grid, "points per axis");
  c_no->add_option("--s", opt.s, "smoothness exponent override");
  c_no->add_option("--budget", opt.budget, "pair sample cap");
  c_no->add_option("--max-level", opt.max_level, "refinement limit");

  auto* c_rt = add_common(app.add_subcommand("root", "compare the r-th power of the oracle against its flat norm"));
  c_rt->add_option("--grid", opt.grid, "points per axis");
  c_rt->add_option("--s", opt.s, "smoothness exponent override");
  c_rt->add_option("--r", opt.r, "power exponent in (0,1]");
  c_rt->add_option("--budget", opt.budget, "pair sample cap");

  auto* c_fdb = add_common(app.add_subcommand("fdb", "jets of oracle^r against finite differences"));
  c_fdb->add_option("--k", opt.k, "jet order (default 2)");
  c_fdb->add_option("--r", opt.r, "power exponent");

  auto* c_fin = add_common(app.add_subcommand("finiteness", "subset scan of the surrogate minimal level"));
  c_fin->add_option("--k", opt.k, "subset size bound (default 2^dim_p)");
  c_fin->add_option("--s", opt.s, "smoothness exponent override");
  c_fin->add_option("--c-cap", opt.c_cap, "ratio alarm threshold");
  c_fin->add_option("--budget", opt.budget, "projection sweeps per feasibility test");

  auto* c_fz = add_common(app.add_subcommand("fuzz-convexity", "random verified blending witnesses"));
  c_fz->add_option("--trials", opt.trials, "accepted witnesses to draw");
  c_fz->add_option("--seed", opt.seed, "RNG seed");
  c_fz->add_option("--s", opt.s, "smoothness exponent override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto t0 = std::chrono::steady_clock::now();
  try {
    std::string raw = flatjet::read_file(opt.input);
    Instance inst = instance_from_json(json::parse(raw));

    std::string text;
    json out_json;
    bool is_csv = false;
    if (c_dec->parsed()) run_decompose(inst, opt, out_json);
    else if (c_ext->parsed()) run_extend(inst, opt, out_json);
    else if (c_eg->parsed()) { run_eval_grid(inst, opt, text); is_csv = true; }
    else if (c_ej->parsed()) run_eval_jets(inst, opt, out_json);
    else if (c_no->parsed()) run_norms(inst, opt, out_json);
    else if (c_rt->parsed()) run_root(inst, opt, out_json);
    else if (c_fdb->parsed()) run_fdb(inst, opt, out_json);
    else if (c_fin->parsed()) run_finiteness(inst, opt, out_json);
    else if (c_fz->parsed()) run_fuzz(inst, opt, out_json);

    if (!is_csv) text = dump(out_json);
    write_file(opt.out, text);

    RunManifest man;
    for (int i = 0; i < argc; ++i) {
      if (i) man.command += ' ';
      man.command += argv[i];
    }
    man.input_hash = fnv1a64_hex(raw);
    man.seed = opt.seed;
    man.tool_version = kToolVersion;
    man.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    man.outputs = {opt.out};
    write_file(opt.out + ".manifest.json", dump(manifest_to_json(man)));
  } catch (const json::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
