// Command-line front end: graph generation, structural checks, delay bounds,
// simulation, exponent estimation, root finding, and parameter sweeps.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pindelay/charroots.hpp"
#include "pindelay/dde_sim.hpp"
#include "pindelay/delay_bounds.hpp"
#include "pindelay/graph.hpp"
#include "pindelay/graph_io.hpp"
#include "pindelay/lyapunov.hpp"
#include "pindelay/parallel.hpp"
#include "pindelay/perturbation.hpp"
#include "pindelay/spectral.hpp"
#include "pindelay/types.hpp"

namespace {

using nlohmann::json;
using namespace pindelay;

std::string g_command;

json provenance(std::optional<std::uint64_t> seed) {
  json doc;
  doc["tool_version"] = kToolVersion;
  doc["command"] = g_command;
  if (seed)
    doc["seed"] = *seed;
  else
    doc["seed"] = nullptr;
  return doc;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Config files are JSON: {"schema": 1, "<flag>": value, "<subcommand>":
/// {"<flag>": value, ...}}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool,
                        std::string) const override {
    return "{}\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw CLI::FileError(std::string("config: ") + e.what());
    }
    if (!doc.is_object() || doc.value("schema", 0) != 1)
      throw CLI::FileError("config must be a JSON object with \"schema\": 1");
    std::vector<CLI::ConfigItem> items;
    walk(doc, {}, items);
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    return v.is_string() ? v.get<std::string>() : v.dump();
  }

  static void walk(const json& node, std::vector<std::string> parents,
                   std::vector<CLI::ConfigItem>& items) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      if (parents.empty() && it.key() == "schema") continue;
      if (it->is_object()) {
        auto sub = parents;
        sub.push_back(it.key());
        walk(*it, sub, items);
      } else {
        CLI::ConfigItem item;
        item.parents = parents;
        item.name = it.key();
        if (it->is_array())
          for (const auto& v : *it) item.inputs.push_back(scalar(v));
        else
          item.inputs.push_back(scalar(*it));
        items.push_back(std::move(item));
      }
    }
  }
};

PinSet parse_pins(const std::string& text, int n) {
  if (text.empty() || text == "none") return PinSet({}, n);
  if (text == "all") return PinSet::all(n);
  if (text.rfind("first:", 0) == 0) {
    int m = 0;
    try {
      m = std::stoi(text.substr(6));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad pin spec: " + text);
    }
    return PinSet::first(m, n);
  }
  std::vector<int> idx;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      idx.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad pin index: " + tok);
    }
  }
  return PinSet(idx, n);
}

json complex_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

// ---- sweep ----

struct AxisSpec {
  std::string name;
  std::vector<double> values;
};

AxisSpec parse_axis(const std::string& text) {
  AxisSpec ax;
  const auto eq = text.find('=');
  if (eq == std::string::npos) return ax;
  ax.name = text.substr(0, eq);
  std::stringstream ss(text.substr(eq + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      ax.values.push_back(std::stod(tok));
    } catch (const std::exception&) {
      ax.values.clear();
      ax.name.clear();
      return ax;
    }
  }
  return ax;
}

const CLI::Validator AxisValidator(
    [](std::string& text) -> std::string {
      const AxisSpec ax = parse_axis(text);
      if (ax.name != "c" && ax.name != "tau_r" && ax.name != "tau_p")
        return "axis must be one of c, tau_r, tau_p (got '" + text + "')";
      if (ax.values.empty()) return "axis '" + text + "' has no values";
      return {};
    },
    "AXIS", "axis");

struct SweepRow {
  bool error = false;
  std::vector<std::string> cells;
};

// ---- command options ----

struct GenerateOpts {
  int n = 0;
  double p = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

struct SystemOpts {
  std::string graph;
  std::string pins = "none";
  double c = 0.0;
  double tau_r = 0.0;
  double tau_p = 0.0;
};

struct BoundOpts {
  std::string graph;
  std::string pins = "all";
  std::string method;
  double c = 1.0;
  double tau_p = 0.1;
  double l = -1.0;  // lambert common in-degree; negative = take from graph
};

struct SimulateOpts {
  SystemOpts sys;
  double s = 0.0;
  double duration = 50.0;
  double step = -1.0;  // negative = pick automatically
  std::uint64_t seed = 1;
  std::string init = "random";
  double init_value = 1.0;
  std::string out = "-";
};

struct LyapunovOpts {
  SystemOpts sys;
  int segments = 200;
  int samples = 32;
  std::uint64_t seed = 1;
};

struct RootsOpts {
  SystemOpts sys;
  int grid = 60;
  int refinements = 2;
};

struct SweepOpts {
  SystemOpts sys;
  std::string axis1;
  std::string axis2;
  std::string methods = "charroots";
  bool tau_p_inv_c = false;
  int segments = 200;
  int samples = 32;
  std::uint64_t seed = 1;
  std::string out;
};

void run_generate(const GenerateOpts& o) {
  const DirectedGraph g = erdos_renyi(o.n, o.p, o.seed);
  json doc = provenance(o.seed);
  doc["n"] = g.size();
  json edges = json::array();
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      if (g.weights()(i, j) > 0.0)
        edges.push_back(json::array({i, j, g.weights()(i, j)}));
  doc["edges"] = std::move(edges);
  std::ofstream out(o.out);
  if (!out)
    throw Error(ErrorCode::InvalidArgument, "cannot open " + o.out);
  out << doc.dump(2) << "\n";
  std::cerr << "wrote " << o.out << " (" << g.size() << " nodes, "
            << g.edge_count() << " edges)\n";
}

void run_check(const SystemOpts& o) {
  const DirectedGraph g = load_graph(o.graph);
  const PinSet pins = parse_pins(o.pins, g.size());
  const SccResult scc = condensation(g);

  json doc = provenance(std::nullopt);
  doc["n"] = g.size();
  doc["edge_count"] = g.edge_count();
  doc["undirected"] = g.is_undirected();
  doc["pins"] = pins.members();
  doc["strongly_connected"] = is_strongly_connected(g);
  doc["has_spanning_tree"] = has_spanning_tree(g);
  doc["hypothesis_H"] = check_hypothesis_H(g, pins);
  json comps = json::array();
  for (std::size_t k = 0; k < scc.components.size(); ++k)
    comps.push_back(
        {{"nodes", scc.components[k]}, {"source", bool(scc.is_source[k])}});
  doc["components"] = std::move(comps);
  emit(doc);
}

void run_bound(const BoundOpts& o) {
  const DirectedGraph g = load_graph(o.graph);
  const LaplacianSystem sys = laplacian(g);
  json doc = provenance(std::nullopt);
  doc["method"] = o.method;
  doc["c"] = o.c;

  if (o.method == "taup_star") {
    const PinSet pins = parse_pins(o.pins, g.size());
    std::vector<double> degrees;
    for (int i : pins.members()) degrees.push_back(sys.K[i]);
    const BoundResult r = tau_p_star(o.c, degrees);
    doc["pins"] = pins.members();
    doc["degrees"] = degrees;
    doc["capped"] = r.capped;
    doc["tau_cap"] = r.tau_cap;
    doc["value"] = r.capped ? json() : json(r.value);
    doc["omega_star"] = r.omega_star;
    doc["min_f"] = r.min_f;
    std::cerr << "tau_p* = " << (r.capped ? "above cap" : fmt17(r.value))
              << "\n";
  } else if (o.method == "tau_pM") {
    const SpectralDecomp decomp = eigendecompose(sys);
    const BoundResult r = single_node_tau_pM(decomp, o.c);
    doc["value"] = r.value;
    doc["per_node_values"] = r.per_node_values;
    doc["deciding_node"] = r.deciding_node;
    doc["crossing_omegas"] = r.crossing_omegas;
    doc["formula_value"] = r.formula_value;
    doc["formula_differs"] = r.formula_differs;
    doc["negative_products"] = r.negative_products;
    std::cerr << "tau_pM = " << fmt17(r.value) << "\n";
  } else {  // lambert
    const SpectralDecomp decomp = eigendecompose(sys);
    const double l = o.l >= 0.0 ? o.l : sys.K[0];
    LambertDiagnostics diag;
    const StabilityVerdict v =
        lambert_stability_test(decomp, o.c, l, o.tau_p, &diag);
    doc["l"] = l;
    doc["tau_p"] = o.tau_p;
    doc["verdict"] = to_string(v.verdict);
    doc["dominant"] = complex_json(v.dominant);
    doc["worst_re"] = diag.worst_re;
    doc["branch_span"] = diag.branch_span;
    json roots = json::array();
    for (const Complex& s : diag.s_roots) roots.push_back(complex_json(s));
    doc["s_roots"] = std::move(roots);
    std::cerr << "lambert verdict = " << to_string(v.verdict) << "\n";
  }
  emit(doc);
}

PinningProblem build_problem(const DirectedGraph& g, const SystemOpts& o,
                             double s = 0.0) {
  return PinningProblem(laplacian(g), parse_pins(o.pins, g.size()), o.c,
                        o.tau_r, o.tau_p, s);
}

void run_simulate(const SimulateOpts& o) {
  const DirectedGraph g = load_graph(o.sys.graph);
  const PinningProblem problem = build_problem(g, o.sys, o.s);
  const HistoryFunction history =
      o.init == "constant"
          ? HistoryFunction::constant(
                Vector::Constant(g.size(), o.init_value))
          : HistoryFunction::random_constant(g.size(), o.seed);
  const double step = o.step > 0.0 ? o.step : default_step(problem);
  const Trajectory traj = simulate(problem, history, o.duration, step);

  if (o.out == "-") {
    traj.write_csv(std::cout);
  } else {
    std::ofstream out(o.out);
    if (!out)
      throw Error(ErrorCode::InvalidArgument, "cannot open " + o.out);
    traj.write_csv(out);
  }
  double worst = 0.0;
  if (!traj.samples.empty())
    worst = (traj.samples.back() - Vector::Constant(g.size(), o.s))
                .cwiseAbs()
                .maxCoeff();
  std::cerr << (traj.diverged ? "diverged" : "finished") << " at t="
            << fmt17(traj.duration()) << ", max |y - s| = " << fmt17(worst)
            << "\n";
}

void run_lyapunov(const LyapunovOpts& o) {
  const DirectedGraph g = load_graph(o.sys.graph);
  const PinningProblem problem = build_problem(g, o.sys);
  const HistoryFunction history =
      HistoryFunction::random_constant(g.size(), o.seed);
  const ExponentEstimate est =
      largest_exponent(problem, history, o.segments, o.samples);

  json doc = provenance(o.seed);
  doc["c"] = o.sys.c;
  doc["tau_r"] = o.sys.tau_r;
  doc["tau_p"] = o.sys.tau_p;
  doc["value"] = est.value;
  doc["method"] = est.method == ExponentMethod::SegmentNorms
                      ? "segment_norms"
                      : "spectral_abscissa";
  doc["converged"] = est.converged;
  doc["segments_used"] = est.segments_used;
  doc["segment_length"] = est.segment_length;
  doc["samples_per_segment"] = est.samples_per_segment;
  emit(doc);
}

void run_roots(const RootsOpts& o) {
  const DirectedGraph g = load_graph(o.sys.graph);
  const PinningProblem problem = build_problem(g, o.sys);
  const QuasiPoly qp = QuasiPoly::from_problem(problem);
  RootSearchOptions opts;
  opts.grid = o.grid;
  opts.max_refinements = o.refinements;
  const RootSearchRegion region = RootSearchRegion::defaults_for(qp);
  const std::vector<CharRoot> roots = find_roots(qp, region, opts);
  if (roots.empty())
    throw Error(ErrorCode::NoRootFound, "no characteristic roots converged");
  const CharRoot dom = dominant_root(qp);

  json doc = provenance(std::nullopt);
  doc["c"] = o.sys.c;
  doc["tau_r"] = o.sys.tau_r;
  doc["tau_p"] = o.sys.tau_p;
  json list = json::array();
  for (const CharRoot& r : roots)
    list.push_back({{"re", r.lambda.real()},
                    {"im", r.lambda.imag()},
                    {"residual", r.residual},
                    {"multiplicity", r.multiplicity_hint}});
  doc["roots"] = std::move(list);
  doc["dominant"] = {{"re", dom.lambda.real()},
                     {"im", dom.lambda.imag()},
                     {"residual", dom.residual}};
  doc["verdict"] = to_string(verdict_from_root(dom).verdict);
  emit(doc);
}

void run_sweep(const SweepOpts& o) {
  const DirectedGraph g = load_graph(o.sys.graph);
  const LaplacianSystem sys = laplacian(g);
  const PinSet pins = parse_pins(o.sys.pins, g.size());

  const AxisSpec ax1 = parse_axis(o.axis1);
  AxisSpec ax2;
  if (!o.axis2.empty()) ax2 = parse_axis(o.axis2);
  const std::size_t n2 = ax2.values.empty() ? 1 : ax2.values.size();
  const std::size_t cells = ax1.values.size() * n2;

  std::vector<std::string> methods;
  {
    std::stringstream ss(o.methods);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok != "bound" && tok != "charroots" && tok != "lyapunov")
        throw Error(ErrorCode::InvalidArgument, "unknown method: " + tok);
      if (std::find(methods.begin(), methods.end(), tok) == methods.end())
        methods.push_back(tok);
    }
    if (methods.empty())
      throw Error(ErrorCode::InvalidArgument, "no sweep methods given");
  }

  // the spectral decomposition is shared by every bound cell
  std::optional<SpectralDecomp> decomp;
  if (std::find(methods.begin(), methods.end(), "bound") != methods.end())
    decomp = eigendecompose(sys);

  const std::size_t param_cols = ax2.values.empty() ? 1 : 2;
  std::size_t total_cols = param_cols;
  for (const std::string& m : methods) total_cols += m == "charroots" ? 3 : 2;

  std::vector<SweepRow> rows(cells);
  parallel_for(static_cast<std::ptrdiff_t>(cells), [&](std::ptrdiff_t idx) {
    const std::size_t i1 = static_cast<std::size_t>(idx) / n2;
    const std::size_t i2 = static_cast<std::size_t>(idx) % n2;
    double c = o.sys.c, tau_r = o.sys.tau_r, tau_p = o.sys.tau_p;
    auto apply = [&](const AxisSpec& ax, std::size_t k) {
      if (ax.name == "c") c = ax.values[k];
      if (ax.name == "tau_r") tau_r = ax.values[k];
      if (ax.name == "tau_p") tau_p = ax.values[k];
    };
    apply(ax1, i1);
    if (!ax2.values.empty()) apply(ax2, i2);
    if (o.tau_p_inv_c) tau_p = 1.0 / c;

    SweepRow& row = rows[idx];
    row.cells.push_back(fmt17(ax1.values[i1]));
    if (!ax2.values.empty()) row.cells.push_back(fmt17(ax2.values[i2]));
    try {
      for (const std::string& m : methods) {
        if (m == "bound") {
          const BoundResult r = single_node_tau_pM(*decomp, c);
          row.cells.push_back(fmt17(r.value));
          row.cells.push_back(fmt17(r.value - tau_p));
        } else if (m == "charroots") {
          const PinningProblem problem(sys, pins, c, tau_r, tau_p, 0.0);
          const CharRoot dom = dominant_root(QuasiPoly::from_problem(problem));
          row.cells.push_back(fmt17(dom.lambda.real()));
          row.cells.push_back(fmt17(dom.lambda.imag()));
          row.cells.push_back(to_string(verdict_from_root(dom).verdict));
        } else {
          const PinningProblem problem(sys, pins, c, tau_r, tau_p, 0.0);
          const HistoryFunction history =
              HistoryFunction::random_constant(g.size(), o.seed);
          const ExponentEstimate est =
              largest_exponent(problem, history, o.segments, o.samples);
          row.cells.push_back(fmt17(est.value));
          row.cells.push_back(est.converged ? "yes" : "no");
        }
      }
    } catch (const std::exception& e) {
      row.error = true;
      row.cells.resize(param_cols);
      row.cells.push_back(std::string("ERROR: ") + e.what());
      row.cells.resize(total_cols);
    }
  });

  std::ofstream out(o.out);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + o.out);
  std::vector<std::string> header{ax1.name};
  if (!ax2.values.empty()) header.push_back(ax2.name);
  for (const std::string& m : methods) {
    if (m == "bound") {
      header.push_back("bound_tau_pM");
      header.push_back("bound_margin");
    } else if (m == "charroots") {
      header.push_back("dominant_re");
      header.push_back("dominant_im");
      header.push_back("verdict");
    } else {
      header.push_back("exponent");
      header.push_back("exponent_converged");
    }
  }
  for (std::size_t k = 0; k < header.size(); ++k)
    out << (k ? "," : "") << header[k];
  out << "\n";
  for (const SweepRow& row : rows) {
    for (std::size_t k = 0; k < row.cells.size(); ++k) {
      const bool quote = row.cells[k].find(',') != std::string::npos;
      out << (k ? "," : "") << (quote ? "\"" : "") << row.cells[k]
          << (quote ? "\"" : "");
    }
    out << "\n";
  }

  // companion plot script
  std::string base = o.out;
  if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
    base = base.substr(0, base.size() - 4);
  const std::string gp = base + ".gp";
  std::ofstream plot(gp);
  if (plot) {
    const std::size_t first_data = (ax2.values.empty() ? 1 : 2) + 1;
    plot << "set datafile separator \",\"\n";
    plot << "set key autotitle columnhead\n";
    plot << "set xlabel \"" << ax1.name << "\"\n";
    if (ax2.values.empty()) {
      plot << "plot \"" << o.out << "\" using 1:" << first_data
           << " with linespoints\n";
    } else {
      plot << "set ylabel \"" << ax2.name << "\"\n";
      plot << "set view map\n";
      plot << "splot \"" << o.out << "\" using 1:2:" << first_data
           << " with points pointtype 5 pointsize 2 palette\n";
    }
  }
  std::cerr << "wrote " << o.out << " and " << gp << " (" << cells
            << " cells)\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::ostringstream cmd;
  for (int i = 0; i < argc; ++i) cmd << (i ? " " : "") << argv[i];
  g_command = cmd.str();

  CLI::App app{"delayed pinning control of consensus networks"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (schema 1)");

  GenerateOpts gen;
  auto* cmd_gen = app.add_subcommand(
      "generate", "sample a seeded undirected random graph and write it");
  cmd_gen->add_option("-n,--nodes", gen.n, "node count")
      ->required()
      ->check(CLI::Range(1, 1000000));
  cmd_gen->add_option("-p,--prob", gen.p, "link probability")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  cmd_gen->add_option("--seed", gen.seed, "generator seed");
  cmd_gen->add_option("-o,--out", gen.out, "output graph JSON path")
      ->required();

  SystemOpts chk;
  auto* cmd_chk = app.add_subcommand(
      "check", "report connectivity structure and the pinning hypothesis");
  cmd_chk->add_option("graph", chk.graph, "graph JSON path")->required();
  cmd_chk->add_option("--pins", chk.pins,
                      "pinned nodes: none | all | first:M | i,j,...");

  BoundOpts bnd;
  auto* cmd_bnd =
      app.add_subcommand("bound", "admissible pinning-delay bounds");
  cmd_bnd->add_option("graph", bnd.graph, "graph JSON path")->required();
  cmd_bnd->add_option("--method", bnd.method, "bound to compute")
      ->required()
      ->check(CLI::IsMember({"taup_star", "tau_pM", "lambert"}));
  cmd_bnd->add_option("-c,--strength", bnd.c, "pinning strength")
      ->check(CLI::PositiveNumber);
  cmd_bnd->add_option("--pins", bnd.pins, "pinned nodes (taup_star)");
  cmd_bnd->add_option("--tau-p", bnd.tau_p, "pinning delay (lambert)")
      ->check(CLI::PositiveNumber);
  cmd_bnd->add_option("--l", bnd.l,
                      "common in-degree (lambert); default from the graph");

  SimulateOpts sim;
  auto* cmd_sim = app.add_subcommand("simulate", "integrate one trajectory");
  cmd_sim->add_option("graph", sim.sys.graph, "graph JSON path")->required();
  cmd_sim->add_option("--pins", sim.sys.pins, "pinned nodes");
  cmd_sim->add_option("-c,--strength", sim.sys.c, "pinning strength")
      ->check(CLI::NonNegativeNumber);
  cmd_sim->add_option("--tau-r", sim.sys.tau_r, "transmission delay")
      ->check(CLI::NonNegativeNumber);
  cmd_sim->add_option("--tau-p", sim.sys.tau_p, "pinning delay")
      ->check(CLI::NonNegativeNumber);
  cmd_sim->add_option("--target", sim.s, "pinning target value");
  cmd_sim->add_option("-T,--duration", sim.duration, "integration time")
      ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--step", sim.step, "integration step (default: auto)");
  cmd_sim->add_option("--seed", sim.seed, "history seed");
  cmd_sim->add_option("--init", sim.init, "history kind")
      ->check(CLI::IsMember({"random", "constant"}));
  cmd_sim->add_option("--init-value", sim.init_value,
                      "constant history value");
  cmd_sim->add_option("-o,--out", sim.out, "CSV path, - for stdout");

  LyapunovOpts lya;
  auto* cmd_lya =
      app.add_subcommand("lyapunov", "largest exponent of the homogeneous system");
  cmd_lya->add_option("graph", lya.sys.graph, "graph JSON path")->required();
  cmd_lya->add_option("--pins", lya.sys.pins, "pinned nodes");
  cmd_lya->add_option("-c,--strength", lya.sys.c, "pinning strength")
      ->check(CLI::NonNegativeNumber);
  cmd_lya->add_option("--tau-r", lya.sys.tau_r, "transmission delay")
      ->check(CLI::NonNegativeNumber);
  cmd_lya->add_option("--tau-p", lya.sys.tau_p, "pinning delay")
      ->check(CLI::NonNegativeNumber);
  cmd_lya->add_option("--segments", lya.segments, "renormalization segments")
      ->check(CLI::Range(50, 1000000));
  cmd_lya->add_option("--samples", lya.samples, "samples per segment")
      ->check(CLI::Range(16, 65536));
  cmd_lya->add_option("--seed", lya.seed, "history seed");

  RootsOpts rts;
  auto* cmd_rts =
      app.add_subcommand("roots", "characteristic roots and stability verdict");
  cmd_rts->add_option("graph", rts.sys.graph, "graph JSON path")->required();
  cmd_rts->add_option("--pins", rts.sys.pins, "pinned nodes");
  cmd_rts->add_option("-c,--strength", rts.sys.c, "pinning strength")
      ->check(CLI::NonNegativeNumber);
  cmd_rts->add_option("--tau-r", rts.sys.tau_r, "transmission delay")
      ->check(CLI::NonNegativeNumber);
  cmd_rts->add_option("--tau-p", rts.sys.tau_p, "pinning delay")
      ->check(CLI::NonNegativeNumber);
  cmd_rts->add_option("--grid", rts.grid, "seed grid per axis")
      ->check(CLI::Range(4, 4096));
  cmd_rts->add_option("--refinements", rts.refinements, "grid refinements")
      ->check(CLI::Range(0, 8));

  SweepOpts swp;
  auto* cmd_swp =
      app.add_subcommand("sweep", "evaluate methods over a parameter grid");
  cmd_swp->add_option("graph", swp.sys.graph, "graph JSON path")->required();
  cmd_swp->add_option("--pins", swp.sys.pins, "pinned nodes");
  cmd_swp->add_option("-c,--strength", swp.sys.c, "base pinning strength")
      ->check(CLI::NonNegativeNumber);
  cmd_swp->add_option("--tau-r", swp.sys.tau_r, "base transmission delay")
      ->check(CLI::NonNegativeNumber);
  cmd_swp->add_option("--tau-p", swp.sys.tau_p, "base pinning delay")
      ->check(CLI::NonNegativeNumber);
  cmd_swp->add_option("--axis1", swp.axis1, "name=v1,v2,... (c|tau_r|tau_p)")
      ->required()
      ->check(AxisValidator);
  cmd_swp->add_option("--axis2", swp.axis2, "second axis, same format")
      ->check(AxisValidator);
  cmd_swp->add_option("--methods", swp.methods,
                      "comma list from bound,charroots,lyapunov");
  cmd_swp->add_flag("--tau-p-inv-c", swp.tau_p_inv_c,
                    "set tau_p = 1/c in every cell");
  cmd_swp->add_option("--segments", swp.segments, "lyapunov segments")
      ->check(CLI::Range(50, 1000000));
  cmd_swp->add_option("--samples", swp.samples, "lyapunov samples per segment")
      ->check(CLI::Range(16, 65536));
  cmd_swp->add_option("--seed", swp.seed, "lyapunov history seed");
  cmd_swp->add_option("-o,--out", swp.out, "output CSV path")->required();

  // lets --config (a top-level option) appear after the subcommand name
  for (CLI::App* sub :
       {cmd_gen, cmd_chk, cmd_bnd, cmd_sim, cmd_lya, cmd_rts, cmd_swp})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_gen))
      run_generate(gen);
    else if (app.got_subcommand(cmd_chk))
      run_check(chk);
    else if (app.got_subcommand(cmd_bnd))
      run_bound(bnd);
    else if (app.got_subcommand(cmd_sim))
      run_simulate(sim);
    else if (app.got_subcommand(cmd_lya))
      run_lyapunov(lya);
    else if (app.got_subcommand(cmd_rts))
      run_roots(rts);
    else if (app.got_subcommand(cmd_swp))
      run_sweep(swp);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_numerical() ? 4 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
