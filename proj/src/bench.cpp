#include "tstar/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace tstar::bench {

namespace {

std::string disj(const std::string& prop, int from, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (i) out += " || ";
    out += prop + std::to_string(from + i);
  }
  return out;
}

std::string conj_neg(int from, int count) {
  std::string out;
  for (int i = 0; i < count; ++i) {
    if (i) out += " && ";
    out += "!p" + std::to_string(from + i);
  }
  return out;
}

}  // namespace

std::string gather_upload_query(int gathers, int uploads, bool exclusive_gather) {
  if (gathers < 1 || uploads < 1) throw std::invalid_argument("need gather and upload regions");
  std::string q;
  q += "[](";
  for (int i = 0; i < gathers; ++i) {
    if (i) q += " && ";
    q += "<>p" + std::to_string(1 + i);
  }
  q += ")";
  q += " && [](";
  for (int i = 0; i < uploads; ++i) {
    if (i) q += " || ";
    q += "<>p" + std::to_string(1 + gathers + i);
  }
  q += ")";
  // After an upload, reach a gather location before uploading again.
  q += " && []((" + disj("p", 1 + gathers, uploads) + ") -> X((" + conj_neg(1 + gathers, uploads) +
       ") U (" + disj("p", 1, gathers) + ")))";
  if (exclusive_gather) {
    // And symmetrically: gathered data is uploaded before gathering more.
    q += " && []((" + disj("p", 1, gathers) + ") -> X((" + conj_neg(1, gathers) + ") U (" +
         disj("p", 1 + gathers, uploads) + ")))";
  }
  return q;
}

const std::map<std::string, std::string>& builtin_queries() {
  static const std::map<std::string, std::string> queries = {
      {"phi_c", gather_upload_query(3, 2, false)},
      {"phi_d", gather_upload_query(3, 2, true)},
      // Additional surveillance-style queries defined by this project.
      {"patrol", "[]<>p1 && []<>p2 && []<>p3"},
      {"guarded_patrol", "[](<>p1 && <>p2) && []!p3"},
      {"service_order", "[](p3 -> X(!p3 U p1)) && []<>p3 && []<>p1"},
      {"alternate", "[](<>p1 && <>p2) && [](p2 -> X(!p2 U p1))"},
  };
  return queries;
}

std::string resolve_query(const std::string& query) {
  if (query.empty() || query[0] != '@') return query;
  auto it = builtin_queries().find(query.substr(1));
  if (it == builtin_queries().end())
    throw std::invalid_argument("unknown built-in query '" + query + "'");
  return it->second;
}

std::string bench_csv_header() {
  return "workspace,query,algorithm,wall_seconds,suffix_cost,prefix_cost,graph_vertices,"
         "graph_edges,edges_updated,astar_calls,memory_bytes";
}

std::string to_csv_row(const BenchRecord& r, bool stable_timing) {
  std::ostringstream out;
  out << r.workspace_id << ',' << r.query_id << ',' << r.algorithm << ',';
  out.setf(std::ios::fixed);
  out.precision(6);
  out << (stable_timing ? 0.0 : r.wall_seconds) << ',';
  out << r.suffix_cost.str() << ',' << r.prefix_cost.str() << ',' << r.graph_vertices << ','
      << r.graph_edges << ',' << r.edges_updated << ',' << r.astar_calls << ','
      << r.memory_bytes;
  return out.str();
}

namespace {

BenchRecord record_of(const std::string& ws_id, const std::string& q_id, const char* algo,
                      const PlanOutcome& o, double seconds) {
  BenchRecord r;
  r.workspace_id = ws_id;
  r.query_id = q_id;
  r.algorithm = algo;
  r.wall_seconds = seconds;
  if (o.result) {
    r.suffix_cost = o.result->suffix_cost;
    r.prefix_cost = o.result->prefix_cost;
  }
  r.graph_vertices = o.stats.graph_vertices;
  r.graph_edges = o.stats.graph_edges;
  r.edges_updated = o.stats.edges_updated;
  r.astar_calls = o.stats.astar_calls;
  r.memory_bytes = o.stats.memory_bytes;
  return r;
}

}  // namespace

CompareResult run_compare(const GridWorkspace& ws, const BuchiAutomaton& b, int reps,
                          const std::string& workspace_id, const std::string& query_id) {
  if (reps < 1) throw std::invalid_argument("repetitions must be >= 1");
  using clock = std::chrono::steady_clock;
  CompareResult out;
  double base_total = 0, tstar_total = 0;
  PlanOutcome base_outcome, tstar_outcome;
  for (int i = 0; i < reps; ++i) {
    auto t0 = clock::now();
    base_outcome = baseline_plan(ws, b);
    auto t1 = clock::now();
    tstar_outcome = tstar_plan(ws, b);
    auto t2 = clock::now();
    base_total += std::chrono::duration<double>(t1 - t0).count();
    tstar_total += std::chrono::duration<double>(t2 - t1).count();

    if (base_outcome.satisfiable() != tstar_outcome.satisfiable())
      throw std::logic_error("planner disagreement: one run satisfiable, the other not");
    if (base_outcome.result &&
        base_outcome.result->suffix_cost != tstar_outcome.result->suffix_cost)
      throw std::logic_error("planner disagreement: suffix costs " +
                             base_outcome.result->suffix_cost.str() + " vs " +
                             tstar_outcome.result->suffix_cost.str());
  }
  out.baseline = record_of(workspace_id, query_id, "baseline", base_outcome, base_total / reps);
  out.tstar = record_of(workspace_id, query_id, "tstar", tstar_outcome, tstar_total / reps);
  out.speedup = tstar_total > 0 ? base_total / tstar_total : 0;
  out.satisfiable = base_outcome.satisfiable();
  out.tstar_outcome = std::move(tstar_outcome);
  return out;
}

namespace {

// Deterministic helpers: std::mt19937_64 output is pinned by the standard,
// the distribution helpers below avoid the library-defined ones.
std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

std::uint64_t substream(std::uint64_t seed, std::uint64_t k) {
  return seed * 0x9e3779b97f4a7c15ULL + k + 1;
}

}  // namespace

GridWorkspace generate_workspace(const GenSpec& spec) {
  if (spec.density < 0 || spec.density >= 1)
    throw std::invalid_argument("obstacle density must be in [0, 1)");
  std::mt19937_64 rng(spec.seed);
  const std::uint64_t ncells = static_cast<std::uint64_t>(spec.width) *
                               static_cast<std::uint64_t>(spec.height) *
                               static_cast<std::uint64_t>(spec.depth);
  GridWorkspace probe(spec.width, spec.height, spec.depth, spec.conn, {0, 0, 0});

  Cell start = probe.cell_at(static_cast<std::uint32_t>(pick(rng, ncells)));
  GridWorkspace ws(spec.width, spec.height, spec.depth, spec.conn, start);

  std::vector<std::uint8_t> taken(ncells, 0);
  taken[ws.cell_index(start)] = 1;
  const std::uint64_t want = static_cast<std::uint64_t>(
      std::llround(spec.density * static_cast<double>(ncells)));
  std::uint64_t placed = 0, guard = 0;
  while (placed < want) {
    if (++guard > ncells * 50) throw std::runtime_error("obstacle placement did not converge");
    auto idx = static_cast<std::uint32_t>(pick(rng, ncells));
    if (taken[idx]) continue;
    taken[idx] = 1;
    ws.add_obstacle(ws.cell_at(idx));
    ++placed;
  }
  const int regions = spec.gather + spec.upload;
  if (static_cast<std::uint64_t>(regions) > ncells - placed - 1)
    throw std::invalid_argument("labeled regions exceed available free cells");
  for (int i = 0; i < regions; ++i) {
    std::uint64_t guard2 = 0;
    for (;;) {
      if (++guard2 > ncells * 50) throw std::runtime_error("region placement did not converge");
      auto idx = static_cast<std::uint32_t>(pick(rng, ncells));
      if (taken[idx]) continue;
      taken[idx] = 1;
      ws.add_label(ws.cell_at(idx), "p" + std::to_string(i + 1));
      break;
    }
  }
  ws.validate();
  return ws;
}

namespace {

GridWorkspace resize_keeping_content(const GridWorkspace& base, int side) {
  if (side < base.width() || side < base.height())
    throw std::invalid_argument("workspace-size sweep cannot shrink below the base grid");
  GridWorkspace ws(side, side, base.depth(), base.connectivity(), base.start());
  for (std::uint32_t idx = 0; idx < base.num_cells(); ++idx) {
    Cell c = base.cell_at(idx);
    if (base.is_obstacle(c)) ws.add_obstacle(c);
  }
  for (const auto& [idx, props] : base.labels())
    for (const auto& p : props) ws.add_label(base.cell_at(idx), p);
  ws.validate();
  return ws;
}

GridWorkspace regenerate_obstacles(const GridWorkspace& base, double density,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GridWorkspace ws(base.width(), base.height(), base.depth(), base.connectivity(), base.start());
  std::vector<std::uint8_t> taken(ws.num_cells(), 0);
  taken[ws.cell_index(base.start())] = 1;
  for (const auto& [idx, props] : base.labels()) {
    taken[idx] = 1;
    for (const auto& p : props) ws.add_label(base.cell_at(idx), p);
  }
  const auto ncells = static_cast<std::uint64_t>(ws.num_cells());
  const auto want =
      static_cast<std::uint64_t>(std::llround(density * static_cast<double>(ncells)));
  std::uint64_t placed = 0, guard = 0;
  while (placed < want && guard++ < ncells * 50) {
    auto idx = static_cast<std::uint32_t>(pick(rng, ncells));
    if (taken[idx]) continue;
    taken[idx] = 1;
    ws.add_obstacle(ws.cell_at(idx));
    ++placed;
  }
  ws.validate();
  return ws;
}

struct SweepTask {
  GridWorkspace ws;
  BuchiAutomaton automaton;
  std::string ws_id, q_id;
};

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepContext& ctx) {
  if (spec.reps < 1) throw std::invalid_argument("repetitions must be >= 1");
  if (!std::is_sorted(spec.values.begin(), spec.values.end()) ||
      std::adjacent_find(spec.values.begin(), spec.values.end()) != spec.values.end())
    throw std::invalid_argument("sweep values must be strictly increasing");
  if (!ctx.base) throw std::invalid_argument("sweep needs a base workspace");

  std::vector<SweepRow> rows(spec.values.size());
  std::vector<std::optional<SweepTask>> tasks(spec.values.size());

  // Instance construction is sequential (cheap, and the unsatisfiable
  // retry logic consumes seed substreams in a fixed order).
  std::map<std::string, BuchiAutomaton> automaton_cache;
  auto automaton_for = [&](const std::string& ltl_text) {
    auto it = automaton_cache.find(ltl_text);
    if (it == automaton_cache.end())
      it = automaton_cache.emplace(ltl_text, translate_to_buchi(ltl::parse_ltl(ltl_text))).first;
    return it->second;
  };

  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    double value = spec.values[i];
    rows[i].value = value;
    switch (spec.axis) {
      case SweepAxis::ObstacleDensity: {
        BuchiAutomaton b = automaton_for(resolve_query(ctx.query));
        bool placed = false;
        for (std::uint64_t attempt = 0; attempt < 20 && !placed; ++attempt) {
          GridWorkspace ws =
              regenerate_obstacles(*ctx.base, value, substream(spec.seed, i * 100 + attempt));
          if (!tstar_plan(ws, b).satisfiable()) continue;
          tasks[i] = SweepTask{std::move(ws), std::move(b),
                               "density=" + std::to_string(value), ctx.query};
          placed = true;
        }
        rows[i].skipped = !placed;
        break;
      }
      case SweepAxis::WorkspaceSize: {
        int side = static_cast<int>(value);
        tasks[i] = SweepTask{resize_keeping_content(*ctx.base, side),
                             automaton_for(resolve_query(ctx.query)),
                             "size=" + std::to_string(side), ctx.query};
        break;
      }
      case SweepAxis::QuerySize: {
        int total = static_cast<int>(value);
        int uploads = std::max(1, total / 3);
        int gathers = std::max(1, total - uploads);
        GenSpec gen;
        gen.width = ctx.base->width();
        gen.height = ctx.base->height();
        gen.depth = ctx.base->depth();
        gen.conn = ctx.base->connectivity();
        gen.density = 0.15;
        gen.gather = gathers;
        gen.upload = uploads;
        gen.seed = substream(spec.seed, i);
        std::string q = gather_upload_query(gathers, uploads, true);
        tasks[i] = SweepTask{generate_workspace(gen), automaton_for(q),
                             "locations=" + std::to_string(total),
                             "gather_upload_" + std::to_string(total)};
        break;
      }
    }
  }

  // Rows are independent; run them on a small pool and assemble in order.
  std::atomic<std::size_t> next{0};
  std::vector<std::string> errors(spec.values.size());
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      if (!tasks[i]) continue;
      try {
        CompareResult c = run_compare(tasks[i]->ws, tasks[i]->automaton, spec.reps,
                                      tasks[i]->ws_id, tasks[i]->q_id);
        rows[i].baseline = c.baseline;
        rows[i].tstar = c.tstar;
        rows[i].speedup = c.speedup;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  int jobs = std::max(1, ctx.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (!e.empty()) throw std::logic_error(e);
  return rows;
}

std::string sweep_csv_header() { return "value," + bench_csv_header() + ",speedup"; }

std::string sweep_to_csv(const std::vector<SweepRow>& rows, bool stable_timing) {
  std::ostringstream out;
  out << sweep_csv_header() << '\n';
  for (const auto& r : rows) {
    if (r.skipped) {
      out << r.value << ",,,skipped,,,,,,,,," << '\n';
      continue;
    }
    std::ostringstream speedup;
    speedup.setf(std::ios::fixed);
    speedup.precision(3);
    speedup << (stable_timing ? 0.0 : r.speedup);
    out << r.value << ',' << to_csv_row(r.baseline, stable_timing) << ',' << speedup.str()
        << '\n';
    out << r.value << ',' << to_csv_row(r.tstar, stable_timing) << ',' << speedup.str() << '\n';
  }
  return out.str();
}

namespace {

nlohmann::ordered_json cells_json(const std::vector<Cell>& cells, bool three_d) {
  auto arr = nlohmann::ordered_json::array();
  for (const Cell& c : cells) {
    if (three_d)
      arr.push_back({c.x, c.y, c.z});
    else
      arr.push_back({c.x, c.y});
  }
  return arr;
}

nlohmann::ordered_json cost_json(Cost c) {
  nlohmann::ordered_json j;
  if (c.is_infinite()) {
    j["half_units"] = nullptr;
    j["value"] = nullptr;
  } else {
    j["half_units"] = c.halves();
    j["value"] = c.value();
  }
  return j;
}

}  // namespace

std::string trajectory_json(const std::string& workspace_id, const std::string& query_id,
                            const std::string& algorithm, const PlanOutcome& outcome) {
  if (!outcome.result)
    throw std::logic_error("trajectory_json: no plan to serialize");
  nlohmann::ordered_json doc;
  doc["workspace"] = workspace_id;
  doc["query"] = query_id;
  doc["algorithm"] = algorithm;
  const PlanResult& r = *outcome.result;
  bool three_d = false;
  for (const Cell& c : r.concrete_suffix) three_d = three_d || c.z != 0;
  for (const Cell& c : r.concrete_prefix) three_d = three_d || c.z != 0;
  doc["suffix_cost"] = cost_json(r.suffix_cost);
  doc["prefix_cost"] = cost_json(r.prefix_cost);
  doc["prefix"] = cells_json(r.concrete_prefix, three_d);
  doc["suffix"] = cells_json(r.concrete_suffix, three_d);
  doc["counters"] = {{"expansions", outcome.stats.expansions},
                     {"updates", outcome.stats.edges_updated},
                     {"dijkstra_calls", outcome.stats.dijkstra_calls}};
  return doc.dump(2) + "\n";
}

PlanResult trajectory_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("trajectory document is not valid JSON: ") +
                                e.what());
  }
  auto cells_of = [](const nlohmann::json& arr) {
    std::vector<Cell> cells;
    for (const auto& j : arr)
      cells.push_back({j[0].get<int>(), j[1].get<int>(), j.size() > 2 ? j[2].get<int>() : 0});
    return cells;
  };
  PlanResult r;
  r.concrete_prefix = cells_of(doc.at("prefix"));
  r.concrete_suffix = cells_of(doc.at("suffix"));
  r.suffix_cost = Cost::from_halves(doc.at("suffix_cost").at("half_units").get<std::int64_t>());
  r.prefix_cost = Cost::from_halves(doc.at("prefix_cost").at("half_units").get<std::int64_t>());
  return r;
}

}  // namespace tstar::bench
