#include "tstar/product.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace tstar {

CompiledBuchi::CompiledBuchi(const GridWorkspace& ws, const BuchiAutomaton& b) {
  b.validate();
  if (b.propositions.size() > 64)
    throw std::invalid_argument("automaton universe exceeds 64 propositions");
  std::map<std::string, int> bit;
  for (std::size_t i = 0; i < b.propositions.size(); ++i)
    bit.emplace(b.propositions[i], static_cast<int>(i));

  initial_ = b.initial;
  const std::size_t nq = b.num_states();
  out_.resize(nq);
  neg_loops_.resize(nq);
  accepting_.assign(nq, 0);
  for (int a : b.accepting) accepting_[static_cast<std::size_t>(a)] = 1;

  std::vector<char> neg_exit(nq, 0);
  for (const auto& t : b.transitions) {
    Transition ct;
    ct.to = t.to;
    for (const auto& p : t.clause.positive) ct.pos |= std::uint64_t{1} << bit.at(p);
    for (const auto& p : t.clause.negative) ct.neg |= std::uint64_t{1} << bit.at(p);
    if (is_negative(ct)) {
      if (t.to == t.from)
        neg_loops_[static_cast<std::size_t>(t.from)].push_back(ct);
      else
        neg_exit[static_cast<std::size_t>(t.from)] = 1;
    }
    out_[static_cast<std::size_t>(t.from)].push_back(ct);
  }
  neg_self_.assign(nq, 0);
  distant_.assign(nq, 0);
  for (std::size_t q = 0; q < nq; ++q) {
    neg_self_[q] = neg_loops_[q].empty() ? 0 : 1;
    distant_[q] = (neg_self_[q] && !neg_exit[q]) ? 1 : 0;
  }

  // One label mask per cell, over the automaton's universe. Labels naming
  // propositions outside the universe contribute nothing.
  cell_mask_.assign(ws.num_cells(), 0);
  for (const auto& [idx, props] : ws.labels()) {
    std::uint64_t m = 0;
    for (const auto& p : props) {
      auto it = bit.find(p);
      if (it != bit.end()) m |= std::uint64_t{1} << it->second;
    }
    cell_mask_[idx] = m;
  }
}

ProductGraph build_product(const GridWorkspace& ws, const BuchiAutomaton& b) {
  auto aut = std::make_shared<CompiledBuchi>(ws, b);
  const int nq = aut->num_states();

  auto key_of = [&](std::uint32_t cell, int q) {
    return static_cast<std::uint64_t>(cell) * static_cast<std::uint64_t>(nq) +
           static_cast<std::uint64_t>(q);
  };

  // Arcs of one vertex; targets may repeat across clauses, the consumer
  // dedupes. Weight is always the workspace move cost.
  auto expand = [&](std::uint32_t cell, int q, auto&& fn) {
    ws.for_each_neighbor(ws.cell_at(cell), [&](Cell n, Cost w) {
      std::uint32_t nidx = ws.cell_index(n);
      std::uint64_t labels = aut->cell_mask(nidx);
      for (const auto& t : aut->out(q))
        if (CompiledBuchi::satisfied(t, labels)) fn(nidx, t.to, w);
    });
  };

  // Reachability pass.
  std::vector<std::int32_t> id(ws.num_cells() * static_cast<std::size_t>(nq), -1);
  std::vector<ProductGraph::Vertex> verts;
  std::deque<std::pair<std::uint32_t, int>> queue;
  auto discover = [&](std::uint32_t cell, int q) {
    auto& slot = id[key_of(cell, q)];
    if (slot >= 0) return;
    slot = 0;  // mark; real ids assigned after sorting
    verts.push_back({cell, q});
    queue.emplace_back(cell, q);
  };
  discover(ws.cell_index(ws.start()), aut->initial());
  while (!queue.empty()) {
    auto [cell, q] = queue.front();
    queue.pop_front();
    expand(cell, q, [&](std::uint32_t nc, int nq2, Cost) { discover(nc, nq2); });
  }

  std::sort(verts.begin(), verts.end());
  for (std::uint32_t v = 0; v < verts.size(); ++v)
    id[key_of(verts[v].cell, verts[v].state)] = static_cast<std::int32_t>(v);

  ProductGraph g;
  g.automaton = aut;
  g.vertices = std::move(verts);
  g.offsets.reserve(g.vertices.size() + 1);
  std::vector<ProductGraph::Arc> scratch;
  for (std::uint32_t v = 0; v < g.vertices.size(); ++v) {
    g.offsets.push_back(g.arcs.size());
    scratch.clear();
    expand(g.vertices[v].cell, g.vertices[v].state, [&](std::uint32_t nc, int nq2, Cost w) {
      scratch.push_back({static_cast<std::uint32_t>(id[key_of(nc, nq2)]),
                         static_cast<std::int32_t>(w.halves())});
    });
    std::sort(scratch.begin(), scratch.end(),
              [](const ProductGraph::Arc& a, const ProductGraph::Arc& b) { return a.to < b.to; });
    scratch.erase(std::unique(scratch.begin(), scratch.end(),
                              [](const ProductGraph::Arc& a, const ProductGraph::Arc& b) {
                                return a.to == b.to;
                              }),
                  scratch.end());
    g.arcs.insert(g.arcs.end(), scratch.begin(), scratch.end());
  }
  g.offsets.push_back(g.arcs.size());

  g.initial = static_cast<std::uint32_t>(id[key_of(ws.cell_index(ws.start()), aut->initial())]);
  for (std::uint32_t v = 0; v < g.vertices.size(); ++v)
    if (aut->accepting(g.vertices[v].state)) g.finals.push_back(v);
  return g;
}

}  // namespace tstar
