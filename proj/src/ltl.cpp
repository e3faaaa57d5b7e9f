#include "tstar/ltl.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>

namespace tstar::ltl {

FormulaPtr Formula::make_true() {
  static const FormulaPtr t(new Formula(Op::True, {}, nullptr, nullptr));
  return t;
}

FormulaPtr Formula::make_false() {
  static const FormulaPtr f(new Formula(Op::False, {}, nullptr, nullptr));
  return f;
}

FormulaPtr Formula::atom(std::string name) {
  return FormulaPtr(new Formula(Op::Atom, std::move(name), nullptr, nullptr));
}

FormulaPtr Formula::negation(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::Not, {}, std::move(f), nullptr));
}

FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::And, {}, std::move(a), std::move(b)));
}

FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::Or, {}, std::move(a), std::move(b)));
}

FormulaPtr Formula::next(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::Next, {}, std::move(f), nullptr));
}

FormulaPtr Formula::until(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::Until, {}, std::move(a), std::move(b)));
}

FormulaPtr Formula::release(FormulaPtr a, FormulaPtr b) {
  return FormulaPtr(new Formula(Op::Release, {}, std::move(a), std::move(b)));
}

FormulaPtr Formula::always(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::Always, {}, std::move(f), nullptr));
}

FormulaPtr Formula::eventually(FormulaPtr f) {
  return FormulaPtr(new Formula(Op::Eventually, {}, std::move(f), nullptr));
}

int compare(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->op() != b->op()) return a->op() < b->op() ? -1 : 1;
  if (a->op() == Op::Atom) return a->atom_name().compare(b->atom_name());
  if (a->left()) {
    if (int c = compare(a->left(), b->left())) return c;
  }
  if (a->right()) {
    if (int c = compare(a->right(), b->right())) return c;
  }
  return 0;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) { return compare(a, b) == 0; }

namespace {

// Precedence levels, higher binds tighter.
int prec_of(Op op) {
  switch (op) {
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Until:
    case Op::Release: return 4;
    default: return 5;  // atoms, constants, unary
  }
}

void print(std::ostringstream& out, const FormulaPtr& f, int parent_prec) {
  int p = prec_of(f->op());
  bool paren = p < parent_prec;
  if (paren) out << '(';
  switch (f->op()) {
    case Op::True: out << "true"; break;
    case Op::False: out << "false"; break;
    case Op::Atom: out << f->atom_name(); break;
    case Op::Not:
      out << '!';
      print(out, f->left(), p + 1);
      break;
    case Op::Next:
      out << "X ";
      print(out, f->left(), p + 1);
      break;
    case Op::Always:
      out << "[]";
      print(out, f->left(), p + 1);
      break;
    case Op::Eventually:
      out << "<>";
      print(out, f->left(), p + 1);
      break;
    case Op::And:
      print(out, f->left(), p);
      out << " && ";
      print(out, f->right(), p + 1);
      break;
    case Op::Or:
      print(out, f->left(), p);
      out << " || ";
      print(out, f->right(), p + 1);
      break;
    case Op::Until:
      print(out, f->left(), p + 1);
      out << " U ";
      print(out, f->right(), p);  // right associative
      break;
    case Op::Release:
      print(out, f->left(), p + 1);
      out << " R ";
      print(out, f->right(), p);
      break;
  }
  if (paren) out << ')';
}

}  // namespace

std::string to_string(const FormulaPtr& f) {
  std::ostringstream out;
  print(out, f, 0);
  return out.str();
}

std::vector<std::string> atoms_of(const FormulaPtr& f) {
  std::set<std::string> found;
  std::vector<FormulaPtr> stack{f};
  while (!stack.empty()) {
    FormulaPtr cur = stack.back();
    stack.pop_back();
    if (cur->op() == Op::Atom) found.insert(cur->atom_name());
    if (cur->left()) stack.push_back(cur->left());
    if (cur->right()) stack.push_back(cur->right());
  }
  return {found.begin(), found.end()};
}

ParseError::ParseError(std::string msg, std::size_t offset, std::vector<std::string> expected)
    : std::runtime_error(std::move(msg)), offset_(offset), expected_(std::move(expected)) {}

namespace {

struct Token {
  enum Kind {
    True,
    False,
    Ident,
    Bang,
    AndAnd,
    OrOr,
    Arrow,
    NextOp,
    UntilOp,
    ReleaseOp,
    AlwaysOp,
    EventuallyOp,
    LParen,
    RParen,
    End,
  };
  Kind kind;
  std::string text;
  std::size_t offset;
};

const char* token_name(Token::Kind k) {
  switch (k) {
    case Token::True: return "'true'";
    case Token::False: return "'false'";
    case Token::Ident: return "identifier";
    case Token::Bang: return "'!'";
    case Token::AndAnd: return "'&&'";
    case Token::OrOr: return "'||'";
    case Token::Arrow: return "'->'";
    case Token::NextOp: return "'X'";
    case Token::UntilOp: return "'U'";
    case Token::ReleaseOp: return "'R'";
    case Token::AlwaysOp: return "'[]'";
    case Token::EventuallyOp: return "'<>'";
    case Token::LParen: return "'('";
    case Token::RParen: return "')'";
    case Token::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    std::size_t i = 0;
    auto push = [&](Token::Kind k, std::size_t at, std::size_t len) {
      out.push_back({k, std::string(text_.substr(at, len)), at});
    };
    while (i < text_.size()) {
      char c = text_[i];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++i;
        continue;
      }
      if (c == '(') { push(Token::LParen, i, 1); ++i; continue; }
      if (c == ')') { push(Token::RParen, i, 1); ++i; continue; }
      if (c == '!') { push(Token::Bang, i, 1); ++i; continue; }
      if (text_.substr(i, 2) == "&&") { push(Token::AndAnd, i, 2); i += 2; continue; }
      if (text_.substr(i, 2) == "||") { push(Token::OrOr, i, 2); i += 2; continue; }
      if (text_.substr(i, 2) == "->") { push(Token::Arrow, i, 2); i += 2; continue; }
      if (text_.substr(i, 2) == "[]") { push(Token::AlwaysOp, i, 2); i += 2; continue; }
      if (text_.substr(i, 2) == "<>") { push(Token::EventuallyOp, i, 2); i += 2; continue; }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
          ++j;
        std::string_view word = text_.substr(i, j - i);
        if (word == "true") push(Token::True, i, j - i);
        else if (word == "false") push(Token::False, i, j - i);
        else if (word == "X") push(Token::NextOp, i, j - i);
        else if (word == "U") push(Token::UntilOp, i, j - i);
        else if (word == "R") push(Token::ReleaseOp, i, j - i);
        else push(Token::Ident, i, j - i);
        i = j;
        continue;
      }
      throw ParseError("unknown character '" + std::string(1, c) + "' at offset " +
                           std::to_string(i),
                       i, {});
    }
    out.push_back({Token::End, "", text_.size()});
    return out;
  }

 private:
  std::string_view text_;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  FormulaPtr run() {
    FormulaPtr f = parse_implies();
    expect(Token::End);
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(std::vector<Token::Kind> wanted) {
    std::vector<std::string> expected;
    for (auto k : wanted) expected.push_back(token_name(k));
    std::string msg = "syntax error at offset " + std::to_string(peek().offset) + ": got " +
                      token_name(peek().kind) + ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    throw ParseError(msg, peek().offset, std::move(expected));
  }

  void expect(Token::Kind k) {
    if (peek().kind != k) fail({k});
    take();
  }

  // implies := or ('->' implies)?     (right associative, lowest precedence)
  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (peek().kind == Token::Arrow) {
      take();
      FormulaPtr rhs = parse_implies();
      return Formula::disj(Formula::negation(std::move(lhs)), std::move(rhs));
    }
    return lhs;
  }

  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (peek().kind == Token::OrOr) {
      take();
      lhs = Formula::disj(std::move(lhs), parse_and());
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_until();
    while (peek().kind == Token::AndAnd) {
      take();
      lhs = Formula::conj(std::move(lhs), parse_until());
    }
    return lhs;
  }

  // until := unary (('U'|'R') until)?   (right associative)
  FormulaPtr parse_until() {
    FormulaPtr lhs = parse_unary();
    if (peek().kind == Token::UntilOp) {
      take();
      return Formula::until(std::move(lhs), parse_until());
    }
    if (peek().kind == Token::ReleaseOp) {
      take();
      return Formula::release(std::move(lhs), parse_until());
    }
    return lhs;
  }

  FormulaPtr parse_unary() {
    switch (peek().kind) {
      case Token::Bang: take(); return Formula::negation(parse_unary());
      case Token::NextOp: take(); return Formula::next(parse_unary());
      case Token::AlwaysOp: take(); return Formula::always(parse_unary());
      case Token::EventuallyOp: take(); return Formula::eventually(parse_unary());
      case Token::True: take(); return Formula::make_true();
      case Token::False: take(); return Formula::make_false();
      case Token::Ident: return Formula::atom(take().text);
      case Token::LParen: {
        take();
        FormulaPtr f = parse_implies();
        expect(Token::RParen);
        return f;
      }
      default:
        fail({Token::True, Token::False, Token::Ident, Token::Bang, Token::NextOp,
              Token::AlwaysOp, Token::EventuallyOp, Token::LParen});
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_ltl(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

namespace {

FormulaPtr nnf_pos(const FormulaPtr& f);
FormulaPtr nnf_neg(const FormulaPtr& f);

FormulaPtr nnf_pos(const FormulaPtr& f) {
  switch (f->op()) {
    case Op::True:
    case Op::False:
    case Op::Atom: return f;
    case Op::Not: return nnf_neg(f->left());
    case Op::And: return Formula::conj(nnf_pos(f->left()), nnf_pos(f->right()));
    case Op::Or: return Formula::disj(nnf_pos(f->left()), nnf_pos(f->right()));
    case Op::Next: return Formula::next(nnf_pos(f->left()));
    case Op::Until: return Formula::until(nnf_pos(f->left()), nnf_pos(f->right()));
    case Op::Release: return Formula::release(nnf_pos(f->left()), nnf_pos(f->right()));
    case Op::Always: return Formula::release(Formula::make_false(), nnf_pos(f->left()));
    case Op::Eventually: return Formula::until(Formula::make_true(), nnf_pos(f->left()));
  }
  assert(false);
  return f;
}

FormulaPtr nnf_neg(const FormulaPtr& f) {
  switch (f->op()) {
    case Op::True: return Formula::make_false();
    case Op::False: return Formula::make_true();
    case Op::Atom: return Formula::negation(f);
    case Op::Not: return nnf_pos(f->left());
    case Op::And: return Formula::disj(nnf_neg(f->left()), nnf_neg(f->right()));
    case Op::Or: return Formula::conj(nnf_neg(f->left()), nnf_neg(f->right()));
    case Op::Next: return Formula::next(nnf_neg(f->left()));
    case Op::Until: return Formula::release(nnf_neg(f->left()), nnf_neg(f->right()));
    case Op::Release: return Formula::until(nnf_neg(f->left()), nnf_neg(f->right()));
    case Op::Always: return Formula::until(Formula::make_true(), nnf_neg(f->left()));
    case Op::Eventually: return Formula::release(Formula::make_false(), nnf_neg(f->left()));
  }
  assert(false);
  return f;
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf_pos(f); }

bool is_nnf(const FormulaPtr& f) {
  switch (f->op()) {
    case Op::True:
    case Op::False:
    case Op::Atom: return true;
    case Op::Not: return f->left()->op() == Op::Atom;
    case Op::Always:
    case Op::Eventually: return false;
    case Op::Next: return is_nnf(f->left());
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Release: return is_nnf(f->left()) && is_nnf(f->right());
  }
  return false;
}

bool syntactically_implies(const FormulaPtr& a, const FormulaPtr& b) {
  if (equal(a, b)) return true;
  if (b->op() == Op::True || a->op() == Op::False) return true;
  if (b->op() == Op::And)
    return syntactically_implies(a, b->left()) && syntactically_implies(a, b->right());
  if (a->op() == Op::Or)
    return syntactically_implies(a->left(), b) && syntactically_implies(a->right(), b);
  if (a->op() == Op::And)
    if (syntactically_implies(a->left(), b) || syntactically_implies(a->right(), b))
      return true;
  if (b->op() == Op::Or)
    if (syntactically_implies(a, b->left()) || syntactically_implies(a, b->right()))
      return true;
  // psi |= phi U psi
  if (b->op() == Op::Until && syntactically_implies(a, b->right())) return true;
  // phi R psi |= psi (release holds only where psi currently holds)
  if (a->op() == Op::Release && syntactically_implies(a->right(), b)) return true;
  // phi U psi |= b when both branches entail b now
  if (a->op() == Op::Until && syntactically_implies(a->left(), b) &&
      syntactically_implies(a->right(), b))
    return true;
  // a |= phi R psi when a entails both now
  if (b->op() == Op::Release && syntactically_implies(a, b->left()) &&
      syntactically_implies(a, b->right()))
    return true;
  if (a->op() == b->op() &&
      (a->op() == Op::Until || a->op() == Op::Release))
    return syntactically_implies(a->left(), b->left()) &&
           syntactically_implies(a->right(), b->right());
  if (a->op() == b->op() &&
      (a->op() == Op::Next || a->op() == Op::Always || a->op() == Op::Eventually))
    return syntactically_implies(a->left(), b->left());
  return false;
}

namespace {

void flatten(Op op, const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->op() == op) {
    flatten(op, f->left(), out);
    flatten(op, f->right(), out);
  } else {
    out.push_back(f);
  }
}

FormulaPtr assoc_of(Op op, std::vector<FormulaPtr> parts);

// Pairwise rewrites that keep obligation counts down:
//   a U c, b U c side by side never merge, but c U a || c U b == c U (a||b),
//   c R a && c R b == c R (a&&b), X a && X b == X(a&&b), X a || X b == X(a||b).
FormulaPtr try_merge(Op op, const FormulaPtr& a, const FormulaPtr& b) {
  if (a->op() == Op::Next && b->op() == Op::Next)
    return Formula::next(assoc_of(op, {a->left(), b->left()}));
  if (op == Op::Or && a->op() == Op::Until && b->op() == Op::Until &&
      equal(a->left(), b->left()))
    return Formula::until(a->left(), assoc_of(Op::Or, {a->right(), b->right()}));
  if (op == Op::And && a->op() == Op::Release && b->op() == Op::Release &&
      equal(a->left(), b->left()))
    return Formula::release(a->left(), assoc_of(Op::And, {a->right(), b->right()}));
  return nullptr;
}

// Shared canonicalizer for conjunction (absorbing=false) and disjunction
// (absorbing=true): sorts, dedupes, folds constants, merges mergeable
// members and drops members made redundant by a sibling.
FormulaPtr assoc_of(Op op, std::vector<FormulaPtr> parts) {
  const bool is_and = op == Op::And;
  std::vector<FormulaPtr> flat;
  for (const auto& p : parts) flatten(op, p, flat);
  std::vector<FormulaPtr> items;
  for (auto& p : flat) {
    if (p->op() == (is_and ? Op::False : Op::True))
      return is_and ? Formula::make_false() : Formula::make_true();
    if (p->op() == (is_and ? Op::True : Op::False)) continue;
    items.push_back(std::move(p));
  }
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < items.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < items.size() && !merged; ++j) {
        if (FormulaPtr m = try_merge(op, items[i], items[j])) {
          items[i] = std::move(m);
          items.erase(items.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
      }
    }
  }
  std::sort(items.begin(), items.end(),
            [](const FormulaPtr& a, const FormulaPtr& b) { return compare(a, b) < 0; });
  items.erase(std::unique(items.begin(), items.end(),
                          [](const FormulaPtr& a, const FormulaPtr& b) { return equal(a, b); }),
              items.end());
  // In a conjunction, drop x when a sibling implies it; dually for
  // disjunction. On mutual implication the earlier member wins.
  std::vector<char> keep(items.size(), 1);
  for (std::size_t i = 0; i < items.size(); ++i) {
    for (std::size_t j = 0; j < items.size() && keep[i]; ++j) {
      if (i == j || !keep[j]) continue;
      bool redundant = is_and ? syntactically_implies(items[j], items[i])
                              : syntactically_implies(items[i], items[j]);
      if (!redundant) continue;
      bool mutual = is_and ? syntactically_implies(items[i], items[j])
                           : syntactically_implies(items[j], items[i]);
      if (!mutual || j < i) keep[i] = 0;
    }
  }
  FormulaPtr out;
  for (std::size_t i = items.size(); i-- > 0;) {
    if (!keep[i]) continue;
    if (!out)
      out = items[i];
    else
      out = is_and ? Formula::conj(items[i], out) : Formula::disj(items[i], out);
  }
  if (!out) return is_and ? Formula::make_true() : Formula::make_false();
  return out;
}

}  // namespace

FormulaPtr conj_of(std::vector<FormulaPtr> parts) { return assoc_of(Op::And, std::move(parts)); }

FormulaPtr simplify(const FormulaPtr& f) {
  switch (f->op()) {
    case Op::True:
    case Op::False:
    case Op::Atom: return f;
    case Op::Not: {
      FormulaPtr a = simplify(f->left());
      if (a->op() == Op::True) return Formula::make_false();
      if (a->op() == Op::False) return Formula::make_true();
      if (a->op() == Op::Not) return a->left();
      return Formula::negation(std::move(a));
    }
    case Op::And: return assoc_of(Op::And, {simplify(f->left()), simplify(f->right())});
    case Op::Or: return assoc_of(Op::Or, {simplify(f->left()), simplify(f->right())});
    case Op::Next: {
      FormulaPtr a = simplify(f->left());
      if (a->op() == Op::True || a->op() == Op::False) return a;
      return Formula::next(std::move(a));
    }
    case Op::Until: {
      FormulaPtr a = simplify(f->left());
      FormulaPtr b = simplify(f->right());
      if (b->op() == Op::True || b->op() == Op::False) return b;
      if (syntactically_implies(a, b)) return b;  // covers false U b
      // a U (a U b) == a U b
      if (b->op() == Op::Until && equal(a, b->left())) return b;
      return Formula::until(std::move(a), std::move(b));
    }
    case Op::Release: {
      FormulaPtr a = simplify(f->left());
      FormulaPtr b = simplify(f->right());
      if (b->op() == Op::True || b->op() == Op::False) return b;
      if (syntactically_implies(b, a)) return b;  // covers true R b
      // a R (a R b) == a R b
      if (b->op() == Op::Release && equal(a, b->left())) return b;
      return Formula::release(std::move(a), std::move(b));
    }
    case Op::Always: {
      FormulaPtr a = simplify(f->left());
      if (a->op() == Op::True || a->op() == Op::False) return a;
      if (a->op() == Op::Always) return a;
      return Formula::always(std::move(a));
    }
    case Op::Eventually: {
      FormulaPtr a = simplify(f->left());
      if (a->op() == Op::True || a->op() == Op::False) return a;
      if (a->op() == Op::Eventually) return a;
      return Formula::eventually(std::move(a));
    }
  }
  return f;
}

}  // namespace tstar::ltl
