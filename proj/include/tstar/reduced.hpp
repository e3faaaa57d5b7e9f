#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "tstar/product.hpp"

namespace tstar {

/// Counters shared by the planners and the benchmark records.
struct PlanStats {
  std::uint64_t graph_vertices = 0;
  std::uint64_t graph_edges = 0;
  std::uint64_t edges_updated = 0;
  std::uint64_t astar_calls = 0;
  std::uint64_t dijkstra_calls = 0;
  std::uint64_t expansions = 0;  // heap pops across all searches
  std::uint64_t memory_bytes = 0;
};

/// Abstraction of the product automaton in which traversal of a negative
/// self-loop is collapsed into single "distant" edges. A distant edge
/// starts life carrying the heuristic lower bound (updated = false) and is
/// refined to its exact constrained cost on demand; the refined concrete
/// cell path is cached on the edge for projection.
struct ReducedGraph {
  struct Edge {
    std::uint32_t to = 0;
    Cost w;
    bool distant = false;  // added under the distant-neighbour condition
    bool updated = false;  // weight is exact (possibly infinite)
    std::vector<std::uint32_t> path;  // cells incl. endpoints, distant+updated only
  };

  // Sorted by (cell, state) at build time; parking anchors appended later
  // keep their fresh ids at the tail.
  std::vector<ProductGraph::Vertex> vertices;
  std::vector<std::vector<Edge>> out;
  std::uint32_t initial = 0;
  std::vector<std::uint32_t> finals;  // ascending vertex ids
  std::shared_ptr<const CompiledBuchi> automaton;

  // Per automaton state, cells satisfying at least one of its negative
  // self-loop clauses; filled lazily by update_edges.
  std::map<int, std::vector<std::uint8_t>> passable_cache;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_edges() const;
  std::uint64_t memory_bytes() const;

  Edge* find_edge(std::uint32_t from, std::uint32_t to);
  const Edge* find_edge(std::uint32_t from, std::uint32_t to) const;
};

/// Breadth-first construction from (start, initial). A dequeued vertex
/// whose automaton state keeps a negative self-loop and has no negative
/// exit fans out to every free cell satisfying one of its positive
/// transition clauses (heuristic weight, updated = false); any other
/// vertex expands by the one-move product rule (exact weight,
/// updated = true).
ReducedGraph build_reduced_graph(const GridWorkspace& ws, const BuchiAutomaton& b);

/// A path or cycle inside a specific graph, as vertex ids.
struct Run {
  std::vector<std::uint32_t> v;
};

/// Optimal path from a to b avoiding workspace obstacles plus the masked
/// cells (mask may be null). The endpoints are exempt from the mask by
/// contract. a == b asks for the cheapest nontrivial cycle through a.
/// Returns cost and the cell path including both endpoints, or nullopt
/// when unreachable.
struct AstarResult {
  Cost cost;
  std::vector<std::uint32_t> path;
};
std::optional<AstarResult> constrained_astar(const GridWorkspace& ws,
                                             const std::vector<std::uint8_t>* mask, Cell a,
                                             Cell b, PlanStats* stats = nullptr);

/// Refines every not-yet-updated distant edge along `run` to its exact
/// constrained cost (or infinity) via A* under the negative-self-loop
/// mask, caching the concrete path. Returns the number of edges updated.
std::size_t update_edges(const Run& run, const GridWorkspace& ws, ReducedGraph& g,
                         PlanStats* stats = nullptr);

/// Eagerly refines the parking self-edge of accepting vertex f (when it
/// has one) and, if the masked component around f admits a strictly
/// cheaper stay-in-the-region loop anchored at another cell, appends that
/// anchor as a new accepting vertex with exact edges. Keeps the planner's
/// suffix costs aligned with the full product even for plans that never
/// touch a positively labeled cell. Appended vertices get fresh ids at
/// the end of the vertex list.
void resolve_parking_anchor(ReducedGraph& g, const GridWorkspace& ws, std::uint32_t f,
                            PlanStats* stats = nullptr);

}  // namespace tstar
