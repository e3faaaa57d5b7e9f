#include "tstar/lasso.hpp"

#include <map>
#include <stdexcept>

namespace tstar {

using ltl::FormulaPtr;
using ltl::Op;

namespace {

// Positions 0..n-1 cover prefix plus one period copy; succ wraps the last
// position back to the period start.
struct Positions {
  std::size_t n, wrap;
  std::size_t succ(std::size_t i) const { return i + 1 < n ? i + 1 : wrap; }
};

struct Evaluator {
  const std::vector<const PropSet*>& letters;
  Positions pos;
  // Values keyed by node identity; shared subtrees evaluate once.
  std::map<const ltl::Formula*, std::vector<char>> memo;

  const std::vector<char>& eval(const FormulaPtr& f) {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    std::vector<char> v(pos.n, 0);
    switch (f->op()) {
      case Op::True:
        std::fill(v.begin(), v.end(), 1);
        break;
      case Op::False:
        break;
      case Op::Atom:
        for (std::size_t i = 0; i < pos.n; ++i)
          v[i] = letters[i]->count(f->atom_name()) ? 1 : 0;
        break;
      case Op::Not: {
        const auto& a = eval(f->left());
        for (std::size_t i = 0; i < pos.n; ++i) v[i] = !a[i];
        break;
      }
      case Op::And: {
        const auto& a = eval(f->left());
        const auto& b = eval(f->right());
        for (std::size_t i = 0; i < pos.n; ++i) v[i] = a[i] && b[i];
        break;
      }
      case Op::Or: {
        const auto& a = eval(f->left());
        const auto& b = eval(f->right());
        for (std::size_t i = 0; i < pos.n; ++i) v[i] = a[i] || b[i];
        break;
      }
      case Op::Next: {
        const auto& a = eval(f->left());
        for (std::size_t i = 0; i < pos.n; ++i) v[i] = a[pos.succ(i)];
        break;
      }
      case Op::Until: {
        const auto& a = eval(f->left());
        const auto& b = eval(f->right());
        fixpoint(v, [&](std::size_t i, const std::vector<char>& cur) {
          return b[i] || (a[i] && cur[pos.succ(i)]);
        }, false);
        break;
      }
      case Op::Release: {
        const auto& a = eval(f->left());
        const auto& b = eval(f->right());
        fixpoint(v, [&](std::size_t i, const std::vector<char>& cur) {
          return b[i] && (a[i] || cur[pos.succ(i)]);
        }, true);
        break;
      }
      case Op::Always: {
        const auto& a = eval(f->left());
        fixpoint(v, [&](std::size_t i, const std::vector<char>& cur) {
          return a[i] && cur[pos.succ(i)];
        }, true);
        break;
      }
      case Op::Eventually: {
        const auto& a = eval(f->left());
        fixpoint(v, [&](std::size_t i, const std::vector<char>& cur) {
          return a[i] || cur[pos.succ(i)];
        }, false);
        break;
      }
    }
    return memo.emplace(f.get(), std::move(v)).first->second;
  }

  // Least (init=false) or greatest (init=true) fixpoint of a one-step
  // backward rule; backward sweeps repeated until stable.
  template <typename Rule>
  void fixpoint(std::vector<char>& v, Rule rule, bool init) {
    std::fill(v.begin(), v.end(), init ? 1 : 0);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t k = pos.n; k-- > 0;) {
        char next = rule(k, v) ? 1 : 0;
        if (next != v[k]) {
          v[k] = next;
          changed = true;
        }
      }
    }
  }
};

}  // namespace

bool eval_ltl_on_lasso(const FormulaPtr& f, const LassoWord& w) {
  if (w.period.empty()) throw std::invalid_argument("lasso period must be nonempty");
  std::vector<const PropSet*> letters;
  for (const auto& l : w.prefix) letters.push_back(&l);
  for (const auto& l : w.period) letters.push_back(&l);
  Evaluator ev{letters, {letters.size(), w.prefix.size()}, {}};
  return ev.eval(f)[0] != 0;
}

bool lasso_accepts(const BuchiAutomaton& b, const LassoWord& w) {
  if (w.period.empty()) throw std::invalid_argument("lasso period must be nonempty");
  if (b.accepting.empty()) return false;

  const std::size_t nq = b.num_states();
  const std::size_t m = w.period.size();

  // Outgoing transitions grouped by source.
  std::vector<std::vector<const BuchiTransition*>> out(nq);
  for (const auto& t : b.transitions) out[static_cast<std::size_t>(t.from)].push_back(&t);

  // States reachable after consuming the prefix.
  std::vector<char> frontier(nq, 0);
  frontier[static_cast<std::size_t>(b.initial)] = 1;
  for (const auto& letter : w.prefix) {
    std::vector<char> next(nq, 0);
    for (std::size_t q = 0; q < nq; ++q) {
      if (!frontier[q]) continue;
      for (const auto* t : out[q])
        if (t->clause.satisfied_by(letter)) next[static_cast<std::size_t>(t->to)] = 1;
    }
    frontier = std::move(next);
  }

  // Nodes (q, j): automaton state q about to read period[j].
  auto node = [m](std::size_t q, std::size_t j) { return q * m + j; };
  const std::size_t nn = nq * m;
  std::vector<char> reach(nn, 0);
  std::vector<std::size_t> stack;
  for (std::size_t q = 0; q < nq; ++q)
    if (frontier[q]) {
      reach[node(q, 0)] = 1;
      stack.push_back(node(q, 0));
    }
  auto step = [&](std::size_t v, auto&& visit) {
    std::size_t q = v / m, j = v % m;
    for (const auto* t : out[q])
      if (t->clause.satisfied_by(w.period[j]))
        visit(node(static_cast<std::size_t>(t->to), (j + 1) % m));
  };
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    step(v, [&](std::size_t u) {
      if (!reach[u]) {
        reach[u] = 1;
        stack.push_back(u);
      }
    });
  }

  // Accepting run exists iff a reachable accepting node lies on a cycle.
  for (int qa : b.accepting) {
    for (std::size_t j = 0; j < m; ++j) {
      std::size_t start = node(static_cast<std::size_t>(qa), j);
      if (!reach[start]) continue;
      std::vector<char> seen(nn, 0);
      std::vector<std::size_t> dfs{start};
      bool closes = false;
      // First expansion from `start` is unconditional so a self-cycle counts.
      while (!dfs.empty() && !closes) {
        std::size_t v = dfs.back();
        dfs.pop_back();
        step(v, [&](std::size_t u) {
          if (u == start) closes = true;
          if (!seen[u]) {
            seen[u] = 1;
            dfs.push_back(u);
          }
        });
      }
      if (closes) return true;
    }
  }
  return false;
}

}  // namespace tstar
