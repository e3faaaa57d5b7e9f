#include <doctest.h>

#include <random>

#include "support/oracles.hpp"
#include "tstar/lasso.hpp"
#include "tstar/ltl.hpp"

using namespace tstar;
using namespace tstar::ltl;

TEST_CASE("parse_ltl: running-example query shape") {
  auto f = parse_ltl("[](<>p1 && <>p2 && !p3)");
  REQUIRE(f->op() == Op::Always);
  auto body = f->left();
  // left-associative &&: ((<>p1 && <>p2) && !p3)
  REQUIRE(body->op() == Op::And);
  CHECK(body->right()->op() == Op::Not);
  CHECK(body->right()->left()->atom_name() == "p3");
  auto l = body->left();
  REQUIRE(l->op() == Op::And);
  CHECK(l->left()->op() == Op::Eventually);
  CHECK(l->left()->left()->atom_name() == "p1");
  CHECK(l->right()->op() == Op::Eventually);
  CHECK(l->right()->left()->atom_name() == "p2");
}

TEST_CASE("parse_ltl: literals and precedence") {
  CHECK(parse_ltl("true")->op() == Op::True);
  CHECK(parse_ltl("false")->op() == Op::False);
  CHECK(parse_ltl("gather_1")->atom_name() == "gather_1");

  // unary > U/R > && > || > ->
  auto f = parse_ltl("p1 U p2 && p3 || p4 -> X p5");
  REQUIRE(f->op() == Op::Or);  // -> desugars to !lhs || rhs
  CHECK(f->left()->op() == Op::Not);
  auto lhs = f->left()->left();
  REQUIRE(lhs->op() == Op::Or);
  REQUIRE(lhs->left()->op() == Op::And);
  CHECK(lhs->left()->left()->op() == Op::Until);
  CHECK(f->right()->op() == Op::Next);

  // U is right associative; unary binds tighter than U
  auto g = parse_ltl("!p1 U p2 U p3");
  REQUIRE(g->op() == Op::Until);
  CHECK(g->left()->op() == Op::Not);
  CHECK(g->right()->op() == Op::Until);

  auto h = parse_ltl("[](p1 -> <>(p2 && X p3))");
  CHECK(to_string(parse_ltl(to_string(h))) == to_string(h));
}

TEST_CASE("parse_ltl: errors carry offsets and expectations") {
  SUBCASE("truncated until") {
    try {
      parse_ltl("p1 U");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 4);
      CHECK(!e.expected().empty());
      CHECK(std::string(e.what()).find("expected") != std::string::npos);
    }
  }
  SUBCASE("unknown character") {
    try {
      parse_ltl("p1 & p2");  // single & is not a token
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 3);
    }
  }
  SUBCASE("unbalanced parenthesis") {
    CHECK_THROWS_AS(parse_ltl("(p1 || p2"), ParseError);
    CHECK_THROWS_AS(parse_ltl("p1 )"), ParseError);
    CHECK_THROWS_AS(parse_ltl(""), ParseError);
  }
}

TEST_CASE("to_nnf: dualities and sugar") {
  auto p1 = Formula::atom("p1"), p2 = Formula::atom("p2");

  auto f = to_nnf(Formula::negation(Formula::until(p1, p2)));
  REQUIRE(f->op() == Op::Release);
  CHECK(f->left()->op() == Op::Not);
  CHECK(f->left()->left()->atom_name() == "p1");
  CHECK(f->right()->op() == Op::Not);

  CHECK(equal(to_nnf(Formula::negation(Formula::negation(p1))), p1));

  auto g = to_nnf(Formula::always(p1));
  REQUIRE(g->op() == Op::Release);
  CHECK(g->left()->op() == Op::False);
  CHECK(equal(g->right(), p1));

  auto h = to_nnf(Formula::negation(Formula::always(p1)));
  REQUIRE(h->op() == Op::Until);
  CHECK(h->left()->op() == Op::True);
  CHECK(h->right()->op() == Op::Not);

  auto x = to_nnf(Formula::negation(Formula::next(p1)));
  REQUIRE(x->op() == Op::Next);
  CHECK(x->left()->op() == Op::Not);
}

TEST_CASE("to_nnf: idempotent and shape-restricted on random formulas") {
  std::mt19937_64 rng(2024);
  std::vector<std::string> atoms{"p1", "p2", "p3"};
  for (int i = 0; i < 200; ++i) {
    auto f = oracle::random_formula(rng, atoms, 4);
    auto n1 = to_nnf(f);
    CHECK(is_nnf(n1));
    CHECK(equal(to_nnf(n1), n1));
  }
}

TEST_CASE("syntactically_implies: sound on samples, useful on structure") {
  auto p1 = Formula::atom("p1"), p2 = Formula::atom("p2");
  auto gp = Formula::release(Formula::make_false(),
                             Formula::conj(Formula::until(Formula::make_true(), p1),
                                           Formula::until(Formula::make_true(), p2)));
  // [](<>p1 && <>p2) implies <>p1
  CHECK(syntactically_implies(gp, Formula::until(Formula::make_true(), p1)));
  CHECK(!syntactically_implies(Formula::until(Formula::make_true(), p1), gp));

  std::mt19937_64 rng(7);
  std::vector<std::string> atoms{"p1", "p2"};
  int positives = 0;
  for (int i = 0; i < 400; ++i) {
    auto a = oracle::random_formula(rng, atoms, 3);
    auto b = oracle::random_formula(rng, atoms, 3);
    if (!syntactically_implies(a, b)) continue;
    ++positives;
    for (int k = 0; k < 20; ++k) {
      auto w = oracle::random_lasso(rng, atoms, 3, 3);
      if (eval_ltl_on_lasso(a, w)) CHECK(eval_ltl_on_lasso(b, w));
    }
  }
  CHECK(positives > 0);  // the relation is not vacuous on random pairs
}

TEST_CASE("simplify: semantics preserved on random formulas") {
  std::mt19937_64 rng(11);
  std::vector<std::string> atoms{"p1", "p2", "p3"};
  for (int i = 0; i < 150; ++i) {
    auto f = oracle::random_formula(rng, atoms, 4);
    auto s = simplify(to_nnf(f));
    for (int k = 0; k < 10; ++k) {
      auto w = oracle::random_lasso(rng, atoms, 3, 3);
      CHECK(eval_ltl_on_lasso(f, w) == eval_ltl_on_lasso(s, w));
    }
  }
}

TEST_CASE("simplify: merges obligations of one family") {
  // <>a || <>b collapses to a single Until; [][]a collapses too.
  auto f = simplify(to_nnf(parse_ltl("<>p1 || <>p2")));
  REQUIRE(f->op() == Op::Until);
  CHECK(f->left()->op() == Op::True);
  CHECK(f->right()->op() == Op::Or);

  auto g = simplify(to_nnf(parse_ltl("[]p1 && []p2")));
  REQUIRE(g->op() == Op::Release);
  CHECK(g->right()->op() == Op::And);

  auto h = simplify(to_nnf(parse_ltl("[](<>p1 && <>p2) && <>p1")));
  CHECK(equal(h, simplify(to_nnf(parse_ltl("[](<>p1 && <>p2)")))));
}
