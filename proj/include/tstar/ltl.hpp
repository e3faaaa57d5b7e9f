#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace tstar::ltl {

enum class Op {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Next,
  Until,
  Release,
  Always,
  Eventually,
};

/// Immutable LTL syntax tree node. Shared subtrees are fine; nodes are
/// never mutated after construction.
class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

class Formula {
 public:
  Op op() const { return op_; }
  const std::string& atom_name() const { return atom_; }
  const FormulaPtr& left() const { return left_; }
  const FormulaPtr& right() const { return right_; }

  static FormulaPtr make_true();
  static FormulaPtr make_false();
  static FormulaPtr atom(std::string name);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr next(FormulaPtr f);
  static FormulaPtr until(FormulaPtr a, FormulaPtr b);
  static FormulaPtr release(FormulaPtr a, FormulaPtr b);
  static FormulaPtr always(FormulaPtr f);
  static FormulaPtr eventually(FormulaPtr f);

 private:
  Formula(Op op, std::string atom, FormulaPtr l, FormulaPtr r)
      : op_(op), atom_(std::move(atom)), left_(std::move(l)), right_(std::move(r)) {}

  Op op_;
  std::string atom_;
  FormulaPtr left_, right_;
};

/// Structural comparison; total order used for canonical forms.
int compare(const FormulaPtr& a, const FormulaPtr& b);
bool equal(const FormulaPtr& a, const FormulaPtr& b);

/// Renders with the surface syntax (`[] <> X U R && || !`), fully
/// parenthesized only where precedence requires it.
std::string to_string(const FormulaPtr& f);

/// Atoms of f, sorted and de-duplicated.
std::vector<std::string> atoms_of(const FormulaPtr& f);

/// Thrown on malformed query strings. `offset` is a byte offset into the
/// input; `expected` lists the token classes that would have been legal.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string msg, std::size_t offset, std::vector<std::string> expected);
  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Parses the query surface syntax:
///   true false <ident> ! && || -> X U R [] <>
/// with precedence unary > U/R > && > || > ->, parentheses for grouping.
/// `a -> b` is sugar for `!a || b` and is desugared during parsing.
FormulaPtr parse_ltl(std::string_view text);

/// Negation normal form: negations pushed down to atoms, `[]`/`<>`
/// rewritten via Release/Until. Result uses only
/// {True, False, Atom, Not(Atom), And, Or, Next, Until, Release}.
FormulaPtr to_nnf(const FormulaPtr& f);

bool is_nnf(const FormulaPtr& f);

/// Sound syntactic check that every model of a satisfies b. Used to prune
/// redundant conjuncts/disjuncts; false negatives are fine, false
/// positives are not.
bool syntactically_implies(const FormulaPtr& a, const FormulaPtr& b);

/// Canonical conjunction: flattens, folds constants, sorts, drops
/// duplicates and conjuncts implied by a sibling. Empty input yields true.
FormulaPtr conj_of(std::vector<FormulaPtr> parts);

/// Semantics-preserving cleanup: constant folding, conjunction/disjunction
/// canonicalization, standard Until/Release collapses. Safe on any tree.
FormulaPtr simplify(const FormulaPtr& f);

}  // namespace tstar::ltl
