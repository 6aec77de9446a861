#include <doctest.h>

#include "nesteq/corpus.hpp"
#include "nesteq/logic.hpp"

using namespace nesteq;

namespace {

// independent random AST generator for the round-trip property
FormulaPtr random_formula(Rng& rng, int depth) {
  Term terms[2] = {term_x(), term_y()};
  auto rterm = [&]() { return rng.chance(10) ? term_const("a") : terms[rng.below(2)]; };
  if (depth == 0 || rng.chance(30)) {
    switch (rng.below(8)) {
      case 0: return f_true();
      case 1: return f_false();
      case 2: return f_atom(atom_unary(rng.chance(50) ? "P" : "Q", rterm()));
      case 3: return f_atom(atom_binary("R", rterm(), rterm()));
      case 4: return f_atom(atom_less(rterm(), rterm()));
      case 5: return f_atom(atom_equals(rterm(), rterm()));
      case 6:
        return f_atom(atom_level(AtomKind::EqLevel, 1 + rng.below(3), rterm(), rterm()));
      default:
        return f_atom(atom_level(rng.chance(50) ? AtomKind::PreLevel : AtomKind::SuccLevel,
                                 1 + rng.below(2), rterm(), rterm()));
    }
  }
  switch (rng.below(7)) {
    case 0: return f_not(random_formula(rng, depth - 1));
    case 1: return f_and(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 2: return f_or(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 3:
      return f_implies(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 4: return f_iff(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5: return f_forall(rng.below(2), random_formula(rng, depth - 1));
    default: return f_exists(rng.below(2), random_formula(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("parse: quantified order atom") {
  FormulaPtr f = parse_formula("forall x. exists y. x < y");
  REQUIRE(f->tag == Conn::Forall);
  CHECK(f->var == 0);
  REQUIRE(f->lhs->tag == Conn::Exists);
  CHECK(f->lhs->var == 1);
  const FormulaPtr& atom = f->lhs->lhs;
  REQUIRE(atom->tag == Conn::AtomF);
  CHECK(atom->atom.kind == AtomKind::Less);
  CHECK(atom->atom.lhs.kind == Term::X);
  CHECK(atom->atom.rhs.kind == Term::Y);
}

TEST_CASE("parse: nullary constants") {
  CHECK(parse_formula("true")->tag == Conn::True);
  CHECK(parse_formula("false")->tag == Conn::False);
}

TEST_CASE("parse/render: canonical form round-trips") {
  FormulaPtr f = parse_formula("forall x. exists y. (E1(x,y) & P(y))");
  std::string printed = render_formula(f);
  CHECK(printed == "forall x. exists y. E1(x,y) & P(y)");
  CHECK(structural_equal(parse_formula(printed), f));
}

TEST_CASE("render: printer is not a simplifier") {
  FormulaPtr f = parse_formula("!!P(x)");
  CHECK(render_formula(f) == "!!P(x)");
  REQUIRE(f->tag == Conn::Not);
  REQUIRE(f->lhs->tag == Conn::Not);
}

TEST_CASE("render: atom identity") {
  CHECK(render_formula(f_atom(atom_less(term_x(), term_y()))) == "x < y");
}

TEST_CASE("precedence: ! > & > | > -> > <->, right-assoc arrows") {
  FormulaPtr f = parse_formula("P(x) & Q(x) | P(y) -> Q(y) <-> P(x)");
  REQUIRE(f->tag == Conn::Iff);
  REQUIRE(f->lhs->tag == Conn::Implies);
  REQUIRE(f->lhs->lhs->tag == Conn::Or);
  REQUIRE(f->lhs->lhs->lhs->tag == Conn::And);
  FormulaPtr g = parse_formula("P(x) -> Q(x) -> P(y)");
  REQUIRE(g->tag == Conn::Implies);
  CHECK(g->rhs->tag == Conn::Implies);  // right associative
  FormulaPtr h = parse_formula("!P(x) & Q(x)");
  REQUIRE(h->tag == Conn::And);
  CHECK(h->lhs->tag == Conn::Not);
}

TEST_CASE("quantifier scope extends maximally right") {
  FormulaPtr f = parse_formula("forall x. P(x) & Q(x)");
  REQUIRE(f->tag == Conn::Forall);
  CHECK(f->lhs->tag == Conn::And);
}

TEST_CASE("round-trip: 200 seeded random ASTs") {
  Rng rng(20240601);
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = random_formula(rng, 4);
    FormulaPtr g = parse_formula(render_formula(f));
    CHECK(structural_equal(f, g));
    if (!structural_equal(f, g)) {
      CAPTURE(render_formula(f));
      break;
    }
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(parse_formula("P(x) $"), ParseError);
  try {
    parse_formula("forall z. P(z)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("third variable") != std::string::npos);
    CHECK(e.pos.line == 1);
    CHECK(e.pos.col == 8);
  }
  // arity mismatch
  CHECK_THROWS_AS(parse_formula("P(x) & P(x,y)"), ParseError);
  // unknown symbol: bare name
  CHECK_THROWS_AS(parse_formula("P"), ParseError);
  // special level 0 is not surface syntax
  CHECK_THROWS_AS(parse_formula("E0(x,y)"), ParseError);
  // lexical error on line 2
  try {
    parse_formula("P(x)\n  & ?");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.pos.line == 2);
  }
}

TEST_CASE("comments are skipped") {
  FormulaPtr f = parse_formula("-- logic: preorder-succ\nforall x. P(x) -- trailing\n");
  CHECK(f->tag == Conn::Forall);
}

TEST_CASE("analyze: profile violations") {
  FormulaPtr f = parse_formula("forall x. exists y. S1(x,y)");
  SyntaxReport rep = analyze(f, LogicId::Preorder);
  CHECK_FALSE(rep.conformant);
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].rule.find("S1") != std::string::npos);
  CHECK(analyze(f, LogicId::PreorderSucc).conformant);

  FormulaPtr g = parse_formula("forall x. exists y. x < y");
  CHECK(analyze(g, LogicId::OrderEq).conformant);
  CHECK_FALSE(analyze(g, LogicId::Eq).conformant);
  CHECK_FALSE(analyze(g, LogicId::RawFo2).conformant);

  FormulaPtr h = parse_formula("forall x. exists y. F3(x,y)");
  CHECK_FALSE(analyze(h, LogicId::TwoFamilies).conformant);
}

TEST_CASE("analyze: requantification is legal FO2") {
  FormulaPtr f = parse_formula("forall x. forall y. forall x. P(x)");
  CHECK(analyze(f, LogicId::RawFo2).conformant);
}

TEST_CASE("analyze: signature, closure and fragment flags") {
  FormulaPtr f = parse_formula("forall x. exists y. (S2(x,y) & R(x,y) & P(@a))");
  SyntaxReport rep = analyze(f, LogicId::PreorderSucc);
  CHECK(rep.signature.levels == 2);
  CHECK(rep.signature.has_pre);   // S2 implies pre2
  CHECK(rep.signature.has_succ);
  CHECK(rep.signature.unary == std::vector<std::string>{"P"});
  CHECK(rep.signature.binary == std::vector<std::string>{"R"});
  CHECK(rep.signature.constants == std::vector<std::string>{"a"});
  CHECK_FALSE(rep.fragment_flags.constant_free);
  CHECK(rep.fragment_flags.equality_free);
  CHECK_FALSE(rep.fragment_flags.monadic_common);
}

TEST_CASE("analyze is total on arbitrary ASTs") {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    FormulaPtr f = random_formula(rng, 4);
    for (LogicId l : {LogicId::RawFo2, LogicId::Eq, LogicId::OrderEq, LogicId::Preorder,
                      LogicId::PreorderSucc, LogicId::TwoFamilies}) {
      SyntaxReport rep = analyze(f, l);
      CHECK(rep.conformant == rep.violations.empty());
    }
  }
}

TEST_CASE("formula size counts symbol occurrences") {
  CHECK(formula_size(parse_formula("P(x)")) == 2);
  CHECK(formula_size(parse_formula("x < y")) == 3);
  CHECK(formula_size(parse_formula("forall x. P(x)")) == 4);
}
