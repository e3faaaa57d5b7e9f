#include "tstar/planner.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <stdexcept>

namespace tstar {

namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

struct SearchOut {
  std::vector<std::int64_t> dist;  // halves
  std::vector<std::uint32_t> parent;
};

// Uniform-cost search with deterministic (distance, vertex) ordering.
// `arcs(u, fn)` must call fn(v, whalves) for each finite outgoing arc.
template <typename ForEachArc>
SearchOut dijkstra(std::size_t n, std::uint32_t src, ForEachArc&& arcs, PlanStats* stats) {
  if (stats) ++stats->dijkstra_calls;
  SearchOut out{std::vector<std::int64_t>(n, kUnreached), std::vector<std::uint32_t>(n, 0)};
  out.dist[src] = 0;
  out.parent[src] = src;
  using Item = std::pair<std::int64_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
  std::vector<std::uint8_t> closed(n, 0);
  open.push({0, src});
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (closed[u]) continue;
    closed[u] = 1;
    if (stats) ++stats->expansions;
    arcs(u, [&](std::uint32_t v, std::int64_t w) {
      if (closed[v]) return;
      std::int64_t nd = d + w;
      if (nd < out.dist[v]) {
        out.dist[v] = nd;
        out.parent[v] = u;
        open.push({nd, v});
      }
    });
  }
  return out;
}

std::vector<std::uint32_t> walk_parents(const SearchOut& s, std::uint32_t src,
                                        std::uint32_t dst) {
  std::vector<std::uint32_t> path{dst};
  while (dst != src) {
    dst = s.parent[dst];
    path.push_back(dst);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

// Cheapest cycle through f: Dijkstra out of f plus the best arc back in.
template <typename ForEachArc>
std::optional<std::pair<Cost, Run>> shortest_cycle(
    std::size_t n, std::uint32_t f, ForEachArc&& arcs,
    const std::vector<std::pair<std::uint32_t, std::int64_t>>& in_arcs_of_f, PlanStats* stats) {
  SearchOut s = dijkstra(n, f, arcs, stats);
  std::int64_t best = kUnreached;
  std::uint32_t best_u = 0;
  for (const auto& [u, w] : in_arcs_of_f) {
    if (s.dist[u] == kUnreached) continue;
    std::int64_t c = s.dist[u] + w;
    if (c < best || (c == best && u < best_u)) {
      best = c;
      best_u = u;
    }
  }
  if (best == kUnreached) return std::nullopt;
  Run run{walk_parents(s, f, best_u)};
  run.v.push_back(f);
  return std::make_pair(Cost::from_halves(best), std::move(run));
}

auto product_arcs(const ProductGraph& g) {
  return [&g](std::uint32_t u, auto&& fn) {
    for (std::uint64_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i)
      fn(g.arcs[i].to, static_cast<std::int64_t>(g.arcs[i].whalves));
  };
}

auto reduced_arcs(const ReducedGraph& g) {
  return [&g](std::uint32_t u, auto&& fn) {
    for (const auto& e : g.out[u])
      if (!e.w.is_infinite()) fn(e.to, e.w.halves());
  };
}

std::vector<std::pair<std::uint32_t, std::int64_t>> in_arcs_of(const ProductGraph& g,
                                                               std::uint32_t f) {
  std::vector<std::pair<std::uint32_t, std::int64_t>> in;
  for (std::uint32_t u = 0; u < g.num_vertices(); ++u)
    for (std::uint64_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i)
      if (g.arcs[i].to == f) in.emplace_back(u, g.arcs[i].whalves);
  return in;
}

std::vector<std::pair<std::uint32_t, std::int64_t>> in_arcs_of(const ReducedGraph& g,
                                                               std::uint32_t f) {
  std::vector<std::pair<std::uint32_t, std::int64_t>> in;
  for (std::uint32_t u = 0; u < g.num_vertices(); ++u)
    for (const auto& e : g.out[u])
      if (e.to == f && !e.w.is_infinite()) in.emplace_back(u, e.w.halves());
  return in;
}

std::vector<PlanStep> steps_of(const std::vector<ProductGraph::Vertex>& verts, const Run& run,
                               const GridWorkspace& ws) {
  std::vector<PlanStep> steps;
  steps.reserve(run.v.size());
  for (std::uint32_t v : run.v)
    steps.push_back({ws.cell_at(verts[v].cell), verts[v].state});
  return steps;
}

}  // namespace

std::optional<std::pair<Cost, Run>> dijkstra_shortest_cycle(const ProductGraph& g,
                                                            std::uint32_t f, PlanStats* stats) {
  return shortest_cycle(g.num_vertices(), f, product_arcs(g), in_arcs_of(g, f), stats);
}

std::optional<std::pair<Cost, Run>> dijkstra_shortest_cycle(const ReducedGraph& g,
                                                            std::uint32_t f, PlanStats* stats) {
  return shortest_cycle(g.num_vertices(), f, reduced_arcs(g), in_arcs_of(g, f), stats);
}

Cost run_cost(const Run& run, const ProductGraph& g) {
  Cost total;
  for (std::size_t i = 0; i + 1 < run.v.size(); ++i) {
    bool found = false;
    for (std::uint64_t k = g.offsets[run.v[i]]; k < g.offsets[run.v[i] + 1]; ++k) {
      if (g.arcs[k].to == run.v[i + 1]) {
        total += Cost::from_halves(g.arcs[k].whalves);
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("run_cost: step is not a product edge");
  }
  return total;
}

Cost run_cost(const Run& run, const ReducedGraph& g) {
  Cost total;
  for (std::size_t i = 0; i + 1 < run.v.size(); ++i) {
    const ReducedGraph::Edge* e = g.find_edge(run.v[i], run.v[i + 1]);
    if (!e) throw std::logic_error("run_cost: step is not a reduced edge");
    total += e->w;
  }
  return total;
}

std::vector<Cell> project_run(const Run& run, const ProductGraph& g, const GridWorkspace& ws) {
  std::vector<Cell> cells;
  cells.reserve(run.v.size());
  for (std::uint32_t v : run.v) cells.push_back(ws.cell_at(g.vertices[v].cell));
  return cells;
}

std::vector<Cell> project_run(const Run& run, const ReducedGraph& g, const GridWorkspace& ws) {
  std::vector<Cell> cells;
  if (run.v.empty()) return cells;
  cells.push_back(ws.cell_at(g.vertices[run.v[0]].cell));
  for (std::size_t i = 0; i + 1 < run.v.size(); ++i) {
    const ReducedGraph::Edge* e = g.find_edge(run.v[i], run.v[i + 1]);
    if (!e) throw std::logic_error("project_run: step is not a reduced edge");
    if (e->distant) {
      if (!e->updated || e->w.is_infinite() || e->path.empty())
        throw std::logic_error("project_run: distant edge was never refined");
      for (std::size_t k = 1; k < e->path.size(); ++k)
        cells.push_back(ws.cell_at(e->path[k]));
    } else {
      cells.push_back(ws.cell_at(g.vertices[run.v[i + 1]].cell));
    }
  }
  return cells;
}

LassoWord plan_trace(const PlanResult& r, const GridWorkspace& ws) {
  if (r.concrete_suffix.size() < 2 || r.concrete_suffix.front() != r.concrete_suffix.back())
    throw std::logic_error("plan_trace: suffix must be a closed cycle");
  std::vector<Cell> period(r.concrete_suffix.begin(), r.concrete_suffix.end() - 1);
  LassoWord w;
  if (r.concrete_prefix.empty()) {
    // The word starts inside the first period copy (the cycle's start cell
    // is the robot's start, whose labels are never read).
    for (std::size_t i = 1; i < period.size(); ++i) w.prefix.push_back(ws.label_of(period[i]));
  } else {
    for (std::size_t i = 1; i < r.concrete_prefix.size(); ++i)
      w.prefix.push_back(ws.label_of(r.concrete_prefix[i]));
  }
  for (const Cell& c : period) w.period.push_back(ws.label_of(c));
  return w;
}

PlanOutcome baseline_plan(const GridWorkspace& ws, const BuchiAutomaton& b) {
  PlanOutcome out;
  ProductGraph g = build_product(ws, b);
  out.stats.graph_vertices = g.num_vertices();
  out.stats.graph_edges = g.num_edges();
  out.stats.memory_bytes = g.memory_bytes();

  // Incoming arcs of every accepting vertex, collected in one sweep.
  std::vector<std::int32_t> final_slot(g.num_vertices(), -1);
  for (std::size_t i = 0; i < g.finals.size(); ++i)
    final_slot[g.finals[i]] = static_cast<std::int32_t>(i);
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> in_arcs(g.finals.size());
  for (std::uint32_t u = 0; u < g.num_vertices(); ++u)
    for (std::uint64_t i = g.offsets[u]; i < g.offsets[u + 1]; ++i)
      if (final_slot[g.arcs[i].to] >= 0)
        in_arcs[static_cast<std::size_t>(final_slot[g.arcs[i].to])].emplace_back(
            u, g.arcs[i].whalves);

  SearchOut from_start = dijkstra(g.num_vertices(), g.initial, product_arcs(g), &out.stats);

  struct Candidate {
    std::int64_t suffix, prefix;
    std::uint32_t f;
    Run cycle;
  };
  std::optional<Candidate> best;
  for (std::size_t i = 0; i < g.finals.size(); ++i) {
    std::uint32_t f = g.finals[i];
    if (from_start.dist[f] == kUnreached) continue;
    auto cyc = shortest_cycle(g.num_vertices(), f, product_arcs(g), in_arcs[i], &out.stats);
    if (!cyc) continue;
    Candidate c{cyc->first.halves(), from_start.dist[f], f, std::move(cyc->second)};
    if (!best || std::tie(c.suffix, c.prefix, c.f) < std::tie(best->suffix, best->prefix, best->f))
      best = std::move(c);
  }
  if (!best) return out;

  PlanResult r;
  r.suffix_cost = Cost::from_halves(best->suffix);
  r.prefix_cost = Cost::from_halves(best->prefix);
  Run prefix_path{walk_parents(from_start, g.initial, best->f)};
  r.suffix = steps_of(g.vertices, best->cycle, ws);
  r.concrete_suffix = project_run(best->cycle, g, ws);
  r.prefix = steps_of(g.vertices, prefix_path, ws);
  r.prefix.pop_back();
  r.concrete_prefix = project_run(prefix_path, g, ws);
  r.concrete_prefix.pop_back();
  out.result = std::move(r);
  return out;
}

std::optional<std::pair<Cost, Run>> find_prefix(ReducedGraph& g, std::uint32_t v0,
                                                std::uint32_t f, const GridWorkspace& ws,
                                                PlanStats* stats) {
  for (;;) {
    SearchOut s = dijkstra(g.num_vertices(), v0, reduced_arcs(g), stats);
    if (s.dist[f] == kUnreached) return std::nullopt;
    Run path{walk_parents(s, v0, f)};
    if (update_edges(path, ws, g, stats) == 0)
      return std::make_pair(Cost::from_halves(s.dist[f]), std::move(path));
  }
}

PlanOutcome tstar_plan(const GridWorkspace& ws, const BuchiAutomaton& b) {
  PlanOutcome out;
  ReducedGraph g = build_reduced_graph(ws, b);

  // Accepting vertices able to idle on a negative self-loop get their
  // stay-in-the-region loops pinned down first; this may append anchor
  // vertices, so snapshot the original list.
  const std::vector<std::uint32_t> initial_finals = g.finals;
  for (std::uint32_t f : initial_finals) resolve_parking_anchor(g, ws, f, &out.stats);
  out.stats.graph_vertices = g.num_vertices();

  // Cheapest exact suffix cycle per accepting vertex: search, refine the
  // returned cycle, repeat until nothing on it changes.
  std::map<std::int64_t, std::vector<std::pair<std::uint32_t, Run>>> by_cost;
  for (std::uint32_t f : g.finals) {
    for (;;) {
      auto cyc = dijkstra_shortest_cycle(g, f, &out.stats);
      if (!cyc) break;
      if (update_edges(cyc->second, ws, g, &out.stats) == 0) {
        for (std::size_t i = 0; i + 1 < cyc->second.v.size(); ++i) {
          const ReducedGraph::Edge* e = g.find_edge(cyc->second.v[i], cyc->second.v[i + 1]);
          if (!e || !e->updated || e->w.is_infinite())
            throw std::logic_error("suffix cycle left the refinement loop unresolved");
        }
        by_cost[cyc->first.halves()].emplace_back(f, std::move(cyc->second));
        break;
      }
    }
  }

  // Cheapest suffix group first; within a group the cheapest valid prefix
  // (then vertex order) wins. Later groups only matter if a whole group
  // has no reachable accepting vertex.
  for (auto& [suffix_halves, entries] : by_cost) {
    struct Candidate {
      std::int64_t prefix;
      std::uint32_t f;
      Run prefix_run;
      Run* cycle;
    };
    std::optional<Candidate> best;
    for (auto& [f, cycle] : entries) {
      auto pre = find_prefix(g, g.initial, f, ws, &out.stats);
      if (!pre) continue;
      Candidate c{pre->first.halves(), f, std::move(pre->second), &cycle};
      if (!best || std::tie(c.prefix, c.f) < std::tie(best->prefix, best->f))
        best = std::move(c);
    }
    if (!best) continue;

    PlanResult r;
    r.suffix_cost = Cost::from_halves(suffix_halves);
    r.prefix_cost = Cost::from_halves(best->prefix);
    r.suffix = steps_of(g.vertices, *best->cycle, ws);
    r.concrete_suffix = project_run(*best->cycle, g, ws);
    r.prefix = steps_of(g.vertices, best->prefix_run, ws);
    r.prefix.pop_back();
    r.concrete_prefix = project_run(best->prefix_run, g, ws);
    r.concrete_prefix.pop_back();
    out.result = std::move(r);
    break;
  }

  out.stats.graph_edges = g.num_edges();
  out.stats.memory_bytes = g.memory_bytes();
  return out;
}

}  // namespace tstar
