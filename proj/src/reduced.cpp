#include "tstar/reduced.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <queue>
#include <stdexcept>

namespace tstar {

std::size_t ReducedGraph::num_edges() const {
  std::size_t n = 0;
  for (const auto& es : out) n += es.size();
  return n;
}

std::uint64_t ReducedGraph::memory_bytes() const {
  std::uint64_t bytes = vertices.size() * sizeof(ProductGraph::Vertex);
  for (const auto& es : out) {
    bytes += es.size() * (sizeof(std::uint32_t) + sizeof(Cost) + 2);
    for (const auto& e : es) bytes += e.path.size() * sizeof(std::uint32_t);
  }
  bytes += finals.size() * sizeof(std::uint32_t);
  return bytes;
}

ReducedGraph::Edge* ReducedGraph::find_edge(std::uint32_t from, std::uint32_t to) {
  for (auto& e : out[from])
    if (e.to == to) return &e;
  return nullptr;
}

const ReducedGraph::Edge* ReducedGraph::find_edge(std::uint32_t from, std::uint32_t to) const {
  for (const auto& e : out[from])
    if (e.to == to) return &e;
  return nullptr;
}

namespace {

// Cells satisfying a positive clause necessarily carry a label, so only
// the labeling map is scanned.
std::vector<std::uint32_t> cells_satisfying(const GridWorkspace& ws, const CompiledBuchi& aut,
                                            const CompiledBuchi::Transition& t) {
  std::vector<std::uint32_t> cells;
  if (t.pos == 0) {
    for (std::uint32_t idx = 0; idx < ws.num_cells(); ++idx)
      if (!ws.is_obstacle(ws.cell_at(idx)) && CompiledBuchi::satisfied(t, aut.cell_mask(idx)))
        cells.push_back(idx);
  } else {
    for (const auto& [idx, props] : ws.labels())
      if (CompiledBuchi::satisfied(t, aut.cell_mask(idx))) cells.push_back(idx);
  }
  return cells;
}

}  // namespace

ReducedGraph build_reduced_graph(const GridWorkspace& ws, const BuchiAutomaton& b) {
  auto aut = std::make_shared<CompiledBuchi>(ws, b);
  const int nq = aut->num_states();

  struct PendingEdge {
    std::uint64_t from_key, to_key;
    Cost w;
    bool distant;
  };
  auto key_of = [&](std::uint32_t cell, int q) {
    return static_cast<std::uint64_t>(cell) * static_cast<std::uint64_t>(nq) +
           static_cast<std::uint64_t>(q);
  };

  std::map<std::uint64_t, std::uint32_t> discovered;  // key -> discovery order
  std::vector<ProductGraph::Vertex> verts;
  std::deque<std::pair<std::uint32_t, int>> queue;
  std::vector<PendingEdge> pending;

  auto discover = [&](std::uint32_t cell, int q) {
    auto [it, fresh] = discovered.emplace(key_of(cell, q), verts.size());
    if (fresh) {
      verts.push_back({cell, static_cast<std::int32_t>(q)});
      queue.emplace_back(cell, q);
    }
  };

  discover(ws.cell_index(ws.start()), aut->initial());
  while (!queue.empty()) {
    auto [cell, q] = queue.front();
    queue.pop_front();
    const std::uint64_t from = key_of(cell, q);
    Cell s = ws.cell_at(cell);
    if (aut->distant_condition(q)) {
      // Distant neighbours: every free cell satisfying a positive exit
      // clause, at heuristic cost; the negative self-loop is skipped and
      // resolved later by update_edges.
      for (const auto& t : aut->out(q)) {
        if (CompiledBuchi::is_negative(t)) continue;
        for (std::uint32_t target : cells_satisfying(ws, *aut, t)) {
          Cell sj = ws.cell_at(target);
          Cost h = ws.heuristic(s, sj);
          // A self-pair abstracts a leave-and-return loop; its weight must
          // stay positive, and one straight move is still a lower bound.
          if (target == cell) h = std::max(h, Cost::straight());
          pending.push_back({from, key_of(target, t.to), h, true});
          discover(target, t.to);
        }
      }
      // An accepting vertex whose own cell satisfies the negative
      // self-loop can anchor a stay-in-the-region suffix cycle without
      // ever reaching a positively labeled cell; give it a distant
      // self-edge so such plans survive the abstraction.
      if (aut->accepting(q)) {
        std::uint64_t labels = aut->cell_mask(cell);
        for (const auto& t : aut->negative_self_loops(q)) {
          if (CompiledBuchi::satisfied(t, labels)) {
            pending.push_back({from, from, Cost::straight(), true});
            break;
          }
        }
      }
    } else {
      ws.for_each_neighbor(s, [&](Cell n, Cost w) {
        std::uint32_t nidx = ws.cell_index(n);
        std::uint64_t labels = aut->cell_mask(nidx);
        for (const auto& t : aut->out(q)) {
          if (!CompiledBuchi::satisfied(t, labels)) continue;
          pending.push_back({from, key_of(nidx, t.to), w, false});
          discover(nidx, t.to);
        }
      });
    }
  }

  std::sort(verts.begin(), verts.end());
  std::map<std::uint64_t, std::uint32_t> id;
  for (std::uint32_t v = 0; v < verts.size(); ++v)
    id.emplace(key_of(verts[v].cell, verts[v].state), v);

  ReducedGraph g;
  g.automaton = aut;
  g.vertices = std::move(verts);
  g.out.resize(g.vertices.size());
  for (const auto& pe : pending) {
    std::uint32_t from = id.at(pe.from_key), to = id.at(pe.to_key);
    if (ReducedGraph::Edge* existing = g.find_edge(from, to)) {
      assert(existing->w == pe.w && existing->distant == pe.distant);
      (void)existing;
      continue;
    }
    ReducedGraph::Edge e;
    e.to = to;
    e.w = pe.w;
    e.distant = pe.distant;
    e.updated = !pe.distant;  // product-rule edges carry exact costs already
    g.out[from].push_back(std::move(e));
  }
  for (auto& es : g.out)
    std::sort(es.begin(), es.end(),
              [](const ReducedGraph::Edge& a, const ReducedGraph::Edge& b) { return a.to < b.to; });

  g.initial = id.at(key_of(ws.cell_index(ws.start()), aut->initial()));
  for (std::uint32_t v = 0; v < g.vertices.size(); ++v)
    if (aut->accepting(g.vertices[v].state)) g.finals.push_back(v);
  return g;
}

// ---- constrained A* over the workspace grid ----

namespace {

struct HeapItem {
  std::int64_t f;
  std::int64_t g;
  std::uint32_t cell;
  friend bool operator>(const HeapItem& a, const HeapItem& b) {
    return std::tie(a.f, a.cell) > std::tie(b.f, b.cell);
  }
};

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

std::vector<std::uint32_t> walk_parents(const std::vector<std::uint32_t>& parent,
                                        std::uint32_t from, std::uint32_t to) {
  std::vector<std::uint32_t> path{to};
  while (to != from) {
    to = parent[to];
    path.push_back(to);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

std::optional<AstarResult> constrained_astar(const GridWorkspace& ws,
                                             const std::vector<std::uint8_t>* mask, Cell a,
                                             Cell b, PlanStats* stats) {
  if (!ws.in_bounds(a) || !ws.in_bounds(b))
    throw ValidationError("search endpoint out of bounds");
  if (stats) ++stats->astar_calls;

  const std::uint32_t start = ws.cell_index(a);
  const std::uint32_t goal = ws.cell_index(b);
  auto blocked = [&](std::uint32_t idx) {
    if (idx == start || idx == goal) return false;  // endpoints exempt by contract
    Cell c = ws.cell_at(idx);
    if (ws.is_obstacle(c)) return true;
    return mask && (*mask)[idx] != 0;
  };

  std::vector<std::int64_t> dist(ws.num_cells(), kUnreached);
  std::vector<std::uint32_t> parent(ws.num_cells(), 0);
  std::vector<std::uint8_t> closed(ws.num_cells(), 0);
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> open;

  const bool cycle = start == goal;
  if (cycle) {
    // Cheapest nontrivial cycle through a: seed the frontier with a's
    // neighbours and search back to a. The first hop is recorded so the
    // full loop can be reconstructed.
    ws.for_each_neighbor(a, [&](Cell n, Cost w) {
      std::uint32_t ni = ws.cell_index(n);
      if (blocked(ni)) return;
      if (w.halves() < dist[ni]) {
        dist[ni] = w.halves();
        parent[ni] = ni;  // self-parent marks a seed
        open.push({w.halves() + ws.heuristic(n, b).halves(), w.halves(), ni});
      }
    });
  } else {
    dist[start] = 0;
    parent[start] = start;
    open.push({ws.heuristic(a, b).halves(), 0, start});
  }

  while (!open.empty()) {
    HeapItem top = open.top();
    open.pop();
    if (closed[top.cell]) continue;
    closed[top.cell] = 1;
    if (stats) ++stats->expansions;
    if (top.cell == goal && !(cycle && top.g == 0)) {
      // Reconstruct. In cycle mode, walk back to the seed neighbour and
      // prepend/append the loop anchor.
      std::vector<std::uint32_t> path;
      if (cycle) {
        std::uint32_t cur = top.cell;
        path.push_back(cur);
        while (parent[cur] != cur) {
          cur = parent[cur];
          path.push_back(cur);
        }
        path.push_back(start);
        std::reverse(path.begin(), path.end());
      } else {
        path = walk_parents(parent, start, goal);
      }
      return AstarResult{Cost::from_halves(top.g), std::move(path)};
    }
    Cell cur = ws.cell_at(top.cell);
    ws.for_each_neighbor(cur, [&](Cell n, Cost w) {
      std::uint32_t ni = ws.cell_index(n);
      if (blocked(ni) || closed[ni]) return;
      std::int64_t ng = top.g + w.halves();
      if (ng < dist[ni]) {
        dist[ni] = ng;
        parent[ni] = top.cell;
        open.push({ng + ws.heuristic(n, b).halves(), ng, ni});
      }
    });
  }
  return std::nullopt;
}

namespace {

const std::vector<std::uint8_t>& passable_mask_for(const GridWorkspace& ws, ReducedGraph& g,
                                                   int q) {
  auto it = g.passable_cache.find(q);
  if (it != g.passable_cache.end()) return it->second;
  // Mask of cells NOT satisfying any negative self-loop clause of q; those
  // act as extra obstacles while the self-loop is being traversed.
  std::vector<std::uint8_t> mask(ws.num_cells(), 1);
  for (std::uint32_t idx = 0; idx < ws.num_cells(); ++idx) {
    std::uint64_t labels = g.automaton->cell_mask(idx);
    for (const auto& t : g.automaton->negative_self_loops(q)) {
      if (CompiledBuchi::satisfied(t, labels)) {
        mask[idx] = 0;
        break;
      }
    }
  }
  return g.passable_cache.emplace(q, std::move(mask)).first->second;
}

}  // namespace

void resolve_parking_anchor(ReducedGraph& g, const GridWorkspace& ws, std::uint32_t f,
                            PlanStats* stats) {
  ReducedGraph::Edge* park = g.find_edge(f, f);
  if (!park || !park->distant || park->updated) return;
  const int q = g.vertices[f].state;
  const std::uint32_t s = g.vertices[f].cell;
  const auto& mask = passable_mask_for(ws, g, q);
  if (stats) ++stats->astar_calls;

  // One sweep over the passable component around s: distances from s and,
  // per cell, the cheapest out-and-back loop (twice the cheapest passable
  // move).
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  std::vector<std::int64_t> dist(ws.num_cells(), kInf);
  std::vector<std::uint32_t> parent(ws.num_cells(), 0);
  using Item = std::pair<std::int64_t, std::uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open;
  dist[s] = 0;
  parent[s] = s;
  open.push({0, s});
  std::vector<std::uint32_t> reached;
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    reached.push_back(u);
    if (stats) ++stats->expansions;
    ws.for_each_neighbor(ws.cell_at(u), [&](Cell n, Cost w) {
      std::uint32_t ni = ws.cell_index(n);
      if (mask[ni]) return;
      std::int64_t nd = d + w.halves();
      if (nd < dist[ni]) {
        dist[ni] = nd;
        parent[ni] = u;
        open.push({nd, ni});
      }
    });
  }

  auto loop_at = [&](std::uint32_t x) {
    std::int64_t best = kInf;
    std::uint32_t via = x;
    ws.for_each_neighbor(ws.cell_at(x), [&](Cell n, Cost w) {
      std::uint32_t ni = ws.cell_index(n);
      if (mask[ni]) return;
      if (2 * w.halves() < best || (2 * w.halves() == best && ni < via)) {
        best = 2 * w.halves();
        via = ni;
      }
    });
    return std::make_pair(best, via);
  };

  auto refine = [&](ReducedGraph::Edge* e, std::int64_t halves,
                    std::vector<std::uint32_t> path) {
    e->w = halves == kInf ? Cost::infinity() : Cost::from_halves(halves);
    e->path = std::move(path);
    e->updated = true;
    if (stats) ++stats->edges_updated;
  };

  auto [own_loop, own_via] = loop_at(s);
  refine(park, own_loop,
         own_loop == kInf ? std::vector<std::uint32_t>{} : std::vector<std::uint32_t>{s, own_via, s});

  // Hunt for a strictly cheaper loop anchor elsewhere in the component;
  // ties among remote candidates go to the nearer, then lower-id cell.
  std::int64_t best = own_loop;
  std::uint32_t anchor = s;
  for (std::uint32_t x : reached) {
    if (x == s) continue;
    auto [loop, via] = loop_at(x);
    (void)via;
    bool better = loop < best;
    bool tie_break = anchor != s && loop == best &&
                     std::make_pair(dist[x], x) < std::make_pair(dist[anchor], anchor);
    if (better || tie_break) {
      best = loop;
      anchor = x;
    }
  }
  if (anchor == s) return;

  // A strictly cheaper anchor exists elsewhere in the component: append
  // it as an accepting vertex reachable from f by one exact edge.
  std::uint32_t av = static_cast<std::uint32_t>(g.vertices.size());
  bool existed = false;
  for (std::uint32_t v = 0; v < g.vertices.size(); ++v) {
    if (g.vertices[v].cell == anchor && g.vertices[v].state == q) {
      av = v;
      existed = true;
      break;
    }
  }
  if (!existed) {
    g.vertices.push_back({anchor, q});
    g.out.emplace_back();
    g.finals.push_back(av);
  }

  std::vector<std::uint32_t> walk{anchor};
  for (std::uint32_t c = anchor; c != s;) {
    c = parent[c];
    walk.push_back(c);
  }
  std::reverse(walk.begin(), walk.end());
  if (ReducedGraph::Edge* into = g.find_edge(f, av)) {
    if (!into->updated) refine(into, dist[anchor], walk);
  } else {
    ReducedGraph::Edge into_e;
    into_e.to = av;
    into_e.distant = true;
    g.out[f].push_back(std::move(into_e));
    refine(&g.out[f].back(), dist[anchor], walk);
  }

  auto [anchor_loop, anchor_via] = loop_at(anchor);
  if (ReducedGraph::Edge* self = g.find_edge(av, av)) {
    if (!self->updated)
      refine(self, anchor_loop, {anchor, anchor_via, anchor});
  } else {
    ReducedGraph::Edge self_e;
    self_e.to = av;
    self_e.distant = true;
    g.out[av].push_back(std::move(self_e));
    refine(&g.out[av].back(), anchor_loop, {anchor, anchor_via, anchor});
  }
}

std::size_t update_edges(const Run& run, const GridWorkspace& ws, ReducedGraph& g,
                         PlanStats* stats) {
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < run.v.size(); ++i) {
    std::uint32_t vi = run.v[i], vj = run.v[i + 1];
    ReducedGraph::Edge* e = g.find_edge(vi, vj);
    if (!e) throw std::logic_error("update_edges: run step is not an edge");
    int q = g.vertices[vi].state;
    if (e->updated || !g.automaton->has_negative_self_loop(q)) continue;

    const auto& mask = passable_mask_for(ws, g, q);
    Cell a = ws.cell_at(g.vertices[vi].cell);
    Cell b = ws.cell_at(g.vertices[vj].cell);
    auto res = constrained_astar(ws, &mask, a, b, stats);
    Cost before = e->w;
    if (res) {
      e->w = res->cost;
      e->path = std::move(res->path);
    } else {
      e->w = Cost::infinity();
      e->path.clear();
    }
    e->updated = true;
    assert(e->w >= before);  // the heuristic is a lower bound
    (void)before;
    ++count;
    if (stats) ++stats->edges_updated;
  }
  return count;
}

}  // namespace tstar
