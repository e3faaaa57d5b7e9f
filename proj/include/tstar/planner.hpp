#pragma once

#include <optional>
#include <vector>

#include "tstar/lasso.hpp"
#include "tstar/product.hpp"
#include "tstar/reduced.hpp"

namespace tstar {

/// One vertex of an abstract run, graph-independent.
struct PlanStep {
  Cell cell;
  int state = 0;
  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// A prefix-suffix plan: drive to an accepting vertex once, then repeat
/// the suffix cycle forever. The suffix cost is the optimization
/// objective. Concrete sequences live in workspace cells; the suffix is a
/// closed cycle (first == last) and the prefix excludes the cycle's start
/// cell, so prefix . cycle^omega is the exact visit sequence.
struct PlanResult {
  std::vector<PlanStep> prefix;  // abstract, accepting vertex excluded
  std::vector<PlanStep> suffix;  // abstract, closed (first == last, accepting)
  Cost prefix_cost;              // full start-to-accepting distance
  Cost suffix_cost;
  std::vector<Cell> concrete_prefix;
  std::vector<Cell> concrete_suffix;
};

struct PlanOutcome {
  std::optional<PlanResult> result;  // nullopt: no satisfying run exists
  PlanStats stats;
  bool satisfiable() const { return result.has_value(); }
};

/// Reference planner: full product automaton, one Dijkstra sweep per
/// accepting vertex for the cheapest cycle, one more for prefixes; picks
/// the accepting vertex minimizing (suffix cost, prefix cost, vertex).
PlanOutcome baseline_plan(const GridWorkspace& ws, const BuchiAutomaton& b);

/// Reduced-graph planner: builds the abstraction once, then alternates
/// cheapest-cycle search with opportunistic edge refinement until the
/// returned cycle is fully exact; equally optimal in suffix cost.
PlanOutcome tstar_plan(const GridWorkspace& ws, const BuchiAutomaton& b);

/// Cheapest cycle through f with at least one edge, or nullopt. Runs
/// Dijkstra from f and closes the loop over f's incoming arcs. Infinite
/// edges are ignored. Ties break by vertex id, then lower ids earlier.
std::optional<std::pair<Cost, Run>> dijkstra_shortest_cycle(const ProductGraph& g,
                                                            std::uint32_t f,
                                                            PlanStats* stats = nullptr);
std::optional<std::pair<Cost, Run>> dijkstra_shortest_cycle(const ReducedGraph& g,
                                                            std::uint32_t f,
                                                            PlanStats* stats = nullptr);

/// Cheapest v0 -> f path refined to a fixpoint: search, update the edges
/// on the returned path, and repeat until the path is fully exact.
/// Nullopt when every candidate collapses to infinity.
std::optional<std::pair<Cost, Run>> find_prefix(ReducedGraph& g, std::uint32_t v0,
                                                std::uint32_t f, const GridWorkspace& ws,
                                                PlanStats* stats = nullptr);

/// Sum of edge weights along a run (0 for empty/single-vertex runs;
/// infinity absorbs).
Cost run_cost(const Run& run, const ProductGraph& g);
Cost run_cost(const Run& run, const ReducedGraph& g);

/// Concrete cell sequence of an abstract run. Product runs map one vertex
/// to one cell; reduced runs expand distant edges through their cached
/// refined paths and throw std::logic_error on an unrefined edge.
std::vector<Cell> project_run(const Run& run, const ProductGraph& g, const GridWorkspace& ws);
std::vector<Cell> project_run(const Run& run, const ReducedGraph& g, const GridWorkspace& ws);

/// The input word the plan's trajectory feeds to the automaton: labels of
/// the cells entered after leaving the start (product transitions read the
/// destination's labels).
LassoWord plan_trace(const PlanResult& r, const GridWorkspace& ws);

}  // namespace tstar
