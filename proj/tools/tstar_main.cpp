#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tstar/bench.hpp"
#include "tstar/svg.hpp"

namespace {

using namespace tstar;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitUnsatisfiable = 2;
constexpr int kExitCrossCheckFailed = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

struct QueryInput {
  std::string query;      // LTL text or @name
  std::string automaton;  // path to an interchange document
};

BuchiAutomaton automaton_of(const QueryInput& in, std::string& query_id) {
  if (!in.automaton.empty()) {
    query_id = in.automaton;
    return import_automaton(read_file(in.automaton));
  }
  query_id = in.query;
  std::string text = bench::resolve_query(in.query);
  return translate_to_buchi(ltl::parse_ltl(text));
}

void add_query_flags(CLI::App* cmd, QueryInput& q) {
  auto* opt_q = cmd->add_option("--query", q.query, "LTL query text, or @name for a built-in");
  auto* opt_a = cmd->add_option("--automaton", q.automaton,
                                "path to an automaton interchange document");
  opt_q->excludes(opt_a);
}

int cmd_plan(const std::string& ws_path, const QueryInput& q, const std::string& algo,
             const std::string& out_path, const std::string& svg_path, bool layers) {
  GridWorkspace ws = load_workspace(read_file(ws_path));
  std::string query_id;
  BuchiAutomaton b = automaton_of(q, query_id);

  auto t0 = std::chrono::steady_clock::now();
  PlanOutcome outcome = algo == "baseline" ? baseline_plan(ws, b) : tstar_plan(ws, b);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (!outcome.result) {
    std::cout << "unsatisfiable\n";
    return kExitUnsatisfiable;
  }
  std::cout << "suffix cost: " << outcome.result->suffix_cost.str() << "\n"
            << "prefix cost: " << outcome.result->prefix_cost.str() << "\n"
            << "planning seconds: " << seconds << "\n"
            << "graph: " << outcome.stats.graph_vertices << " vertices, "
            << outcome.stats.graph_edges << " edges\n";
  if (!out_path.empty())
    write_file(out_path, bench::trajectory_json(ws_path, query_id, algo, outcome));
  if (!svg_path.empty()) {
    SvgOptions opt;
    opt.layer_slices = layers;
    write_file(svg_path, render_svg(ws, &*outcome.result, opt));
  }
  return kExitOk;
}

int cmd_compare(const std::string& ws_path, const QueryInput& q, int reps,
                const std::string& out_path) {
  GridWorkspace ws = load_workspace(read_file(ws_path));
  std::string query_id;
  BuchiAutomaton b = automaton_of(q, query_id);
  bench::CompareResult r = bench::run_compare(ws, b, reps, ws_path, query_id);
  std::string csv = bench::bench_csv_header() + "\n" + bench::to_csv_row(r.baseline, false) +
                    "\n" + bench::to_csv_row(r.tstar, false) + "\n";
  std::cout << csv;
  std::cout.setf(std::ios::fixed);
  std::cout.precision(2);
  std::cout << "speedup: " << r.speedup << "\n";
  if (!out_path.empty()) write_file(out_path, csv);
  return r.satisfiable ? kExitOk : kExitUnsatisfiable;
}

int cmd_sweep(const std::string& ws_path, const QueryInput& q, const std::string& axis,
              const std::string& values_text, int reps, std::uint64_t seed,
              const std::string& out_path, int jobs, bool stable) {
  bench::SweepSpec spec;
  if (axis == "obstacle-density")
    spec.axis = bench::SweepAxis::ObstacleDensity;
  else if (axis == "query-size")
    spec.axis = bench::SweepAxis::QuerySize;
  else if (axis == "workspace-size")
    spec.axis = bench::SweepAxis::WorkspaceSize;
  else
    throw std::invalid_argument("unknown sweep axis '" + axis + "'");
  std::istringstream vs(values_text);
  std::string item;
  while (std::getline(vs, item, ',')) spec.values.push_back(std::stod(item));
  spec.reps = reps;
  spec.seed = seed;

  GridWorkspace base = load_workspace(read_file(ws_path));
  bench::SweepContext ctx;
  ctx.base = &base;
  ctx.query = q.query;
  ctx.jobs = jobs;
  auto rows = bench::run_sweep(spec, ctx);
  std::string csv = bench::sweep_to_csv(rows, stable);
  std::cout << csv;
  if (!out_path.empty()) write_file(out_path, csv);
  return kExitOk;
}

int cmd_generate(const std::string& dims_text, int connectivity, double density, int gather,
                 int upload, std::uint64_t seed, const std::string& out_path) {
  bench::GenSpec spec;
  {
    std::istringstream ds(dims_text);
    std::string item;
    std::vector<int> dims;
    while (std::getline(ds, item, 'x')) dims.push_back(std::stoi(item));
    if (dims.size() < 2 || dims.size() > 3)
      throw std::invalid_argument("--dims wants WxH or WxHxD");
    spec.width = dims[0];
    spec.height = dims[1];
    spec.depth = dims.size() == 3 ? dims[2] : 1;
  }
  switch (connectivity) {
    case 4: spec.conn = Connectivity::Four; break;
    case 8: spec.conn = Connectivity::Eight; break;
    case 6: spec.conn = Connectivity::Six; break;
    case 26: spec.conn = Connectivity::TwentySix; break;
    default: throw std::invalid_argument("connectivity must be 4, 8, 6 or 26");
  }
  spec.density = density;
  spec.gather = gather;
  spec.upload = upload;
  spec.seed = seed;
  GridWorkspace ws = bench::generate_workspace(spec);
  write_file(out_path, ws.to_json());
  std::cout << "wrote " << out_path << " (" << ws.num_free_cells() << " free cells)\n";
  return kExitOk;
}

int cmd_render(const std::string& ws_path, const std::string& traj_path,
               const std::string& out_path, bool layers) {
  GridWorkspace ws = load_workspace(read_file(ws_path));
  PlanResult plan = bench::trajectory_from_json(read_file(traj_path));
  SvgOptions opt;
  opt.layer_slices = layers;
  write_file(out_path, render_svg(ws, &plan, opt));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal-logic grid path planner and benchmark harness"};
  app.require_subcommand(1);

  std::string ws_path, out_path, svg_path, algo = "tstar", axis, values, dims, traj_path;
  QueryInput query;
  int reps = 3, jobs = 1, connectivity = 8, gather = 3, upload = 2;
  double density = 0.15;
  std::uint64_t seed = 1;
  bool layers = false, stable = false;

  auto* plan = app.add_subcommand("plan", "compute a prefix-suffix trajectory");
  plan->add_option("--workspace", ws_path, "workspace document")->required();
  add_query_flags(plan, query);
  plan->add_option("--algo", algo, "tstar|baseline")
      ->check(CLI::IsMember({"tstar", "baseline"}));
  plan->add_option("--out", out_path, "trajectory document output path");
  plan->add_option("--svg", svg_path, "SVG rendering output path");
  plan->add_flag("--layers", layers, "render 3-D workspaces as per-layer slices");

  auto* compare = app.add_subcommand("compare", "run both planners and report the speedup");
  compare->add_option("--workspace", ws_path, "workspace document")->required();
  add_query_flags(compare, query);
  compare->add_option("--reps", reps, "repetitions to average");
  compare->add_option("--out", out_path, "CSV output path");

  auto* sweep = app.add_subcommand("sweep", "benchmark across an axis of instances");
  sweep->add_option("--workspace", ws_path, "base workspace document")->required();
  add_query_flags(sweep, query);
  sweep->add_option("--axis", axis, "obstacle-density|query-size|workspace-size")->required();
  sweep->add_option("--values", values, "comma-separated, strictly increasing")->required();
  sweep->add_option("--reps", reps, "repetitions per row");
  sweep->add_option("--seed", seed, "random seed");
  sweep->add_option("--jobs", jobs, "parallel row workers");
  sweep->add_option("--out", out_path, "CSV output path");
  sweep->add_flag("--stable-output", stable, "zero the timing columns for byte-stable diffs");

  auto* generate = app.add_subcommand("generate", "write a random workspace document");
  generate->add_option("--dims", dims, "WxH or WxHxD")->required();
  generate->add_option("--connectivity", connectivity, "4|8|6|26");
  generate->add_option("--density", density, "obstacle fraction in [0,1)");
  generate->add_option("--gather", gather, "number of gather cells p1..pg");
  generate->add_option("--upload", upload, "number of upload cells after the gathers");
  generate->add_option("--seed", seed, "random seed");
  generate->add_option("--out", out_path, "output path")->required();

  auto* render = app.add_subcommand("render", "draw a stored trajectory as SVG");
  render->add_option("--workspace", ws_path, "workspace document")->required();
  render->add_option("--traj", traj_path, "trajectory document")->required();
  render->add_option("--out", out_path, "SVG output path")->required();
  render->add_flag("--layers", layers, "render 3-D workspaces as per-layer slices");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) {
      if (query.query.empty() && query.automaton.empty())
        throw std::invalid_argument("plan needs --query or --automaton");
      return cmd_plan(ws_path, query, algo, out_path, svg_path, layers);
    }
    if (compare->parsed()) {
      if (query.query.empty() && query.automaton.empty())
        throw std::invalid_argument("compare needs --query or --automaton");
      return cmd_compare(ws_path, query, reps, out_path);
    }
    if (sweep->parsed()) {
      if (query.query.empty() && axis != "query-size")
        throw std::invalid_argument("sweep needs --query for this axis");
      return cmd_sweep(ws_path, query, axis, values, reps, seed, out_path, jobs, stable);
    }
    if (generate->parsed())
      return cmd_generate(dims, connectivity, density, gather, upload, seed, out_path);
    if (render->parsed()) return cmd_render(ws_path, traj_path, out_path, layers);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::logic_error& e) {
    std::cerr << "cross-check failure: " << e.what() << "\n";
    return kExitCrossCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
