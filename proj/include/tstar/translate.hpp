#pragma once

#include "tstar/buchi.hpp"
#include "tstar/ltl.hpp"

namespace tstar {

/// Tableau translation from LTL to a Büchi automaton accepting exactly the
/// satisfying infinite words over 2^atoms(f). States are canonical
/// obligation formulas; each Until contributes a generalized acceptance
/// mark on transitions, degeneralized afterwards by a counter. The result
/// is cleaned up (unreachable and dead states removed, states with equal
/// behavior merged, dominated transitions dropped) but not minimized, so
/// state counts need not match any external tool.
///
/// The input is normalized internally, so callers may pass sugared trees.
/// Unsatisfiable formulas yield an automaton with an empty language.
BuchiAutomaton translate_to_buchi(const ltl::FormulaPtr& f);

}  // namespace tstar
