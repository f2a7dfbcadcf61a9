#include "doctest.h"
#include "potentia/formula.hpp"
#include "random_formulas.hpp"

#include <random>

using namespace potentia;

namespace {
PropFormula P(int i) { return PropFormula::var(i); }
}  // namespace

TEST_CASE("parse_prop reads the grammar") {
  CHECK(parse_prop("<>[]p0 -> p0") ==
        PropFormula::make_implies(PropFormula::diamond(PropFormula::box(P(0))), P(0)));

  auto dot3 = parse_prop("(<>p0 & <>p1) -> <>((p0 & <>p1) | (p1 & <>p0))");
  auto expected = PropFormula::make_implies(
      PropFormula::diamond(P(0)) && PropFormula::diamond(P(1)),
      PropFormula::diamond((P(0) && PropFormula::diamond(P(1))) || (P(1) && PropFormula::diamond(P(0)))));
  CHECK(dot3 == expected);

  CHECK(parse_prop("true") == PropFormula::top());
  CHECK(parse_prop("~false") == !PropFormula::bot());
}

TEST_CASE("precedence and associativity") {
  // implies is right-associative
  CHECK(parse_prop("p0 -> p1 -> p2") ==
        PropFormula::make_implies(P(0), PropFormula::make_implies(P(1), P(2))));
  // & binds tighter than |, | tighter than ->, -> tighter than <->
  CHECK(parse_prop("p0 | p1 & p2") == (P(0) || (P(1) && P(2))));
  CHECK(parse_prop("p0 <-> p1 -> p2") ==
        PropFormula::make_iff(P(0), PropFormula::make_implies(P(1), P(2))));
  CHECK(parse_prop("~p0 & p1") == (!P(0) && P(1)));
  CHECK(parse_prop("p0 & p1 & p2") == ((P(0) && P(1)) && P(2)));
}

TEST_CASE("parse_prop syntax errors carry offsets") {
  try {
    parse_prop("p0 ->");
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
    CHECK(e.kind() == ParseError::Kind::Syntax);
    CHECK_FALSE(e.expected().empty());
  }
  CHECK_THROWS_AS(parse_prop("p0 p1"), ParseError);
  CHECK_THROWS_AS(parse_prop("(p0"), ParseError);
  CHECK_THROWS_AS(parse_prop("q0"), ParseError);
  CHECK_THROWS_AS(parse_prop("p0 $ p1"), ParseError);
}

TEST_CASE("parse_fo") {
  const auto sig = Signature::membership();
  auto f = parse_fo("exists x . ~ exists y . mem(y,x)", sig);
  CHECK(f.kind() == FOKind::Exists);
  CHECK(f.variable() == "x");
  CHECK(f.lhs().kind() == FOKind::Not);
  CHECK(is_sentence(f));

  auto g = parse_fo("[] forall x . exists y . mem(x,y)", sig);
  CHECK(g.kind() == FOKind::Box);
  CHECK(g.lhs().kind() == FOKind::Forall);

  auto h = parse_fo("mem(#0, x) & x = #a", sig);
  CHECK(parameters(h) == std::set<std::string>{"0", "a"});
  CHECK(free_variables(h) == std::set<std::string>{"x"});

  try {
    parse_fo("mem(x)", sig);
    FAIL("expected arity error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::ArityMismatch);
  }
  try {
    parse_fo("sub(x, y)", sig);
    FAIL("expected unknown relation");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::UnknownRelation);
  }
  CHECK_THROWS_AS(parse_fo("exists . mem(x,x)", sig), ParseError);
}

TEST_CASE("quantifier bodies extend right and print with parentheses when needed") {
  const auto sig = Signature::membership();
  auto f = parse_fo("exists x . mem(x,x) & mem(x,x)", sig);
  CHECK(f.kind() == FOKind::Exists);
  auto g = FOFormula::make_and(FOFormula::exists("x", parse_fo("mem(x,x)", sig)), FOFormula::top());
  CHECK(to_string(g) == "(exists x . mem(x, x)) & true");
  CHECK(parse_fo(to_string(g), sig) == g);
}

TEST_CASE("potentialist translation") {
  const auto sig = Signature::membership();
  auto psi = parse_fo("exists x . forall y . ~mem(y,x)", sig);
  auto t = potentialist_translation(psi);
  CHECK(to_string(t) == "<> exists x . [] forall y . ~ mem(y, x)");
  CHECK(t == parse_fo("<> exists x . [] forall y . ~ mem(y, x)", sig));

  auto atom = parse_fo("mem(#a,#b)", sig);
  CHECK(potentialist_translation(atom) == atom);
  CHECK(potentialist_translation(FOFormula::top()) == FOFormula::top());
  CHECK_THROWS_AS(potentialist_translation(parse_fo("<> true", sig)), std::invalid_argument);
}

TEST_CASE("substitute is a homomorphism") {
  const auto sig = Signature::membership();
  auto psi = parse_fo("exists x . forall y . ~mem(y,x)", sig);
  Substitution s({{0, psi}});
  CHECK(substitute(P(0), s) == psi);
  CHECK(substitute(PropFormula::box(P(0)), s) == FOFormula::box(psi));
  auto five = parse_prop("<>[]p0 -> p0");
  CHECK(substitute(five, s) == FOFormula::make_implies(FOFormula::diamond(FOFormula::box(psi)), psi));
  CHECK_THROWS_AS(substitute(P(1), s), std::out_of_range);
  CHECK_THROWS_AS(Substitution({{0, parse_fo("mem(x,x)", sig)}}), std::invalid_argument);
}

TEST_CASE("subformulas") {
  auto d = subformulas(PropFormula::diamond(P(0)));
  REQUIRE(d.size() == 2);
  CHECK(d[0] == P(0));
  CHECK(d[1] == PropFormula::diamond(P(0)));
  CHECK(subformulas(PropFormula::make_implies(P(0), P(0))).size() == 2);
  // .2: p0, []p0, <>[]p0, <>p0, []<>p0, whole
  CHECK(subformulas(parse_prop("<>[]p0 -> []<>p0")).size() == 6);
  CHECK(variables(parse_prop("p3 & <>p1")) == std::set<int>{1, 3});
}

TEST_CASE("property: print/parse round trip on random propositional formulas") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    auto f = testing_support::random_prop(rng, 5, 3);
    auto text = to_string(f);
    INFO(text);
    REQUIRE(parse_prop(text) == f);
  }
}

TEST_CASE("property: print/parse round trip on random first-order formulas") {
  std::mt19937_64 rng(11);
  Signature sig({{"mem", 2}, {"P", 1}, {"R", 3}});
  for (int i = 0; i < 2000; ++i) {
    auto f = testing_support::random_fo(rng, sig, 5, true);
    auto text = to_string(f);
    INFO(text);
    REQUIRE(parse_fo(text, sig) == f);
  }
}

TEST_CASE("property: translation adds exactly one modality per quantifier and is stable on quantifier-free input") {
  std::mt19937_64 rng(3);
  const auto sig = Signature::membership();
  auto count = [](auto&& self, const FOFormula& f, FOKind k) -> int {
    int here = f.kind() == k ? 1 : 0;
    if (f.is_unary()) return here + self(self, f.lhs(), k);
    if (f.is_binary()) return here + self(self, f.lhs(), k) + self(self, f.rhs(), k);
    return here;
  };
  for (int i = 0; i < 500; ++i) {
    auto f = testing_support::random_fo(rng, sig, 4, false);
    auto t = potentialist_translation(f);
    int q = count(count, f, FOKind::Exists) + count(count, f, FOKind::Forall);
    int m = count(count, t, FOKind::Diamond) + count(count, t, FOKind::Box);
    CHECK(q == m);
    if (q == 0) CHECK(t == f);
  }
}

TEST_CASE("property: substitute distributes over connectives") {
  std::mt19937_64 rng(5);
  const auto sig = Signature::membership();
  Substitution s;
  for (int i = 0; i < 3; ++i) s.set(i, testing_support::random_sentence(rng, sig, 3));
  for (int i = 0; i < 500; ++i) {
    auto f = testing_support::random_prop(rng, 4, 3);
    auto img = substitute(f, s);
    switch (f.kind()) {
      case PropKind::Not: CHECK(img == FOFormula::make_not(substitute(f.lhs(), s))); break;
      case PropKind::Diamond: CHECK(img == FOFormula::diamond(substitute(f.lhs(), s))); break;
      case PropKind::Box: CHECK(img == FOFormula::box(substitute(f.lhs(), s))); break;
      case PropKind::And:
        CHECK(img == FOFormula::make_and(substitute(f.lhs(), s), substitute(f.rhs(), s)));
        break;
      case PropKind::Implies:
        CHECK(img == FOFormula::make_implies(substitute(f.lhs(), s), substitute(f.rhs(), s)));
        break;
      default: break;
    }
    CHECK(is_sentence(img));
  }
}
