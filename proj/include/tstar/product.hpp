#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "tstar/buchi.hpp"
#include "tstar/cost.hpp"
#include "tstar/workspace.hpp"

namespace tstar {

/// Automaton compiled against a workspace: clauses become bitmasks over
/// the automaton's proposition universe and each cell's label set becomes
/// one mask, so edge conditions are integer tests. Propositions the
/// workspace never labels simply never hold (a positive literal on them
/// can never be satisfied, a negative one always is).
class CompiledBuchi {
 public:
  struct Transition {
    std::uint64_t pos = 0, neg = 0;
    int to = 0;
  };

  CompiledBuchi(const GridWorkspace& ws, const BuchiAutomaton& b);

  int num_states() const { return static_cast<int>(out_.size()); }
  int initial() const { return initial_; }
  bool accepting(int q) const { return accepting_[static_cast<std::size_t>(q)] != 0; }
  const std::vector<Transition>& out(int q) const { return out_[static_cast<std::size_t>(q)]; }
  std::uint64_t cell_mask(std::uint32_t cell_idx) const { return cell_mask_[cell_idx]; }

  static bool satisfied(const Transition& t, std::uint64_t labels) {
    return (t.pos & ~labels) == 0 && (t.neg & labels) == 0;
  }
  static bool is_negative(const Transition& t) { return t.pos == 0; }

  /// True when q keeps at least one negative self-loop and no negative
  /// transition leaves q for another state; such states admit distant
  /// neighbours in the reduced graph.
  bool distant_condition(int q) const { return distant_[static_cast<std::size_t>(q)] != 0; }
  bool has_negative_self_loop(int q) const { return neg_self_[static_cast<std::size_t>(q)] != 0; }
  /// The negative self-loop clauses of q (may be several).
  const std::vector<Transition>& negative_self_loops(int q) const {
    return neg_loops_[static_cast<std::size_t>(q)];
  }

 private:
  int initial_;
  std::vector<std::vector<Transition>> out_;
  std::vector<std::vector<Transition>> neg_loops_;
  std::vector<char> accepting_, distant_, neg_self_;
  std::vector<std::uint64_t> cell_mask_;
};

/// Synchronous product of the workspace transition system and a Büchi
/// automaton, restricted to the part reachable from (start, initial).
/// Vertices are sorted by (cell index, automaton state); adjacency is CSR
/// with parallel arcs to the same target collapsed. Immutable after build.
struct ProductGraph {
  struct Vertex {
    std::uint32_t cell = 0;
    std::int32_t state = 0;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
  };
  struct Arc {
    std::uint32_t to = 0;
    std::int32_t whalves = 0;
  };

  std::vector<Vertex> vertices;
  std::vector<std::uint64_t> offsets;  // vertices.size() + 1 entries
  std::vector<Arc> arcs;
  std::uint32_t initial = 0;
  std::vector<std::uint32_t> finals;  // ascending vertex ids
  std::shared_ptr<const CompiledBuchi> automaton;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_edges() const { return arcs.size(); }
  std::uint64_t memory_bytes() const {
    return vertices.size() * sizeof(Vertex) + arcs.size() * sizeof(Arc) +
           offsets.size() * sizeof(std::uint64_t) + finals.size() * sizeof(std::uint32_t);
  }

  template <typename F>
  void for_each_arc(std::uint32_t v, F&& fn) const {
    for (std::uint64_t i = offsets[v]; i < offsets[v + 1]; ++i)
      fn(arcs[i].to, Cost::from_halves(arcs[i].whalves));
  }
};

ProductGraph build_product(const GridWorkspace& ws, const BuchiAutomaton& b);

}  // namespace tstar
