#pragma once

#include <string>
#include <vector>

#include "tstar/clause.hpp"

namespace tstar {

/// Nondeterministic Büchi automaton over the alphabet 2^propositions.
/// A symbolic transition (from, clause, to) stands for every concrete
/// letter satisfying the clause; parallel transitions are allowed and
/// nondeterminism is expected.
struct BuchiTransition {
  int from = 0;
  int to = 0;
  LiteralClause clause;

  friend bool operator==(const BuchiTransition&, const BuchiTransition&) = default;
};

struct BuchiAutomaton {
  std::vector<std::string> states;        // names, index == state id
  int initial = 0;                        // state id
  std::vector<int> accepting;             // sorted state ids
  std::vector<std::string> propositions;  // ordered universe
  std::vector<BuchiTransition> transitions;

  bool is_accepting(int state) const;
  std::size_t num_states() const { return states.size(); }

  /// Checks ids in range, clause propositions inside the universe,
  /// accepting sorted/unique. Throws std::invalid_argument on violation.
  void validate() const;
};

/// Parses the automaton interchange document: one object with fields
/// `propositions`, `states`, `initial`, `accepting`, `transitions`
/// (list of {from, to, clause}). Unknown fields are rejected.
BuchiAutomaton import_automaton(std::string_view document);

/// Inverse of import_automaton; output is byte-stable for a given input.
std::string export_automaton(const BuchiAutomaton& b);

}  // namespace tstar
