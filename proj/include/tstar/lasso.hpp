#pragma once

#include <vector>

#include "tstar/buchi.hpp"
#include "tstar/clause.hpp"
#include "tstar/ltl.hpp"

namespace tstar {

/// Ultimately periodic infinite word prefix . period^omega, used as a
/// finite certificate for infinite-word questions.
struct LassoWord {
  std::vector<PropSet> prefix;
  std::vector<PropSet> period;  // nonempty
};

/// Truth value of f at position 0 of the infinite word, computed by
/// tabulating every subformula over prefix plus one period copy and
/// solving Until/Release by fixpoint iteration. Accepts any well-formed
/// formula (negation, sugar and implication-free trees alike); never
/// consults the automaton path, so it serves as an independent oracle.
bool eval_ltl_on_lasso(const ltl::FormulaPtr& f, const LassoWord& w);

/// True iff some run of b over the lasso visits an accepting state
/// infinitely often. Decided on the finite (state x period-position)
/// product: a cycle through an accepting state reachable from the
/// end-of-prefix frontier.
bool lasso_accepts(const BuchiAutomaton& b, const LassoWord& w);

}  // namespace tstar
