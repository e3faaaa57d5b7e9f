#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace tstar {

/// Set of atomic propositions holding at a state / read as one input letter.
using PropSet = std::set<std::string>;

/// A conjunction of literals labelling one automaton transition, e.g.
/// "p1 & !p2 & !p3". The empty clause is `true`.
struct LiteralClause {
  std::vector<std::string> positive;  // sorted, unique
  std::vector<std::string> negative;  // sorted, unique, disjoint from positive

  enum class Kind { Negative, Positive };

  /// Null when the clause is unsatisfiable (some p appears both ways).
  static std::optional<LiteralClause> make(std::vector<std::string> pos,
                                           std::vector<std::string> neg);

  /// Parses "p1 & !p2", "true". Throws std::invalid_argument on malformed
  /// input or a p & !p contradiction.
  static LiteralClause parse(std::string_view text);

  /// Negative iff there are no positive literals (the empty clause counts
  /// as the vacuous conjunction of negatives).
  Kind classify() const { return positive.empty() ? Kind::Negative : Kind::Positive; }

  bool satisfied_by(const PropSet& labels) const;

  /// All propositions mentioned, sorted.
  std::vector<std::string> mentioned() const;

  std::string str() const;  // "true" for the empty clause

  friend bool operator==(const LiteralClause&, const LiteralClause&) = default;
  friend auto operator<=>(const LiteralClause&, const LiteralClause&) = default;
};

inline LiteralClause::Kind classify_clause(const LiteralClause& c) { return c.classify(); }

inline bool clause_satisfied(const LiteralClause& c, const PropSet& labels) {
  return c.satisfied_by(labels);
}

}  // namespace tstar
