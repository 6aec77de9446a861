#include <doctest.h>

#include <iostream>

#include "nesteq/corpus.hpp"
#include "nesteq/oracle.hpp"
#include "nesteq/snf.hpp"

using namespace nesteq;

namespace {

bool exact_sat_raw(const FormulaPtr& f, LogicId logic, int n) {
  return find_model_raw(f, logic, n, SearchMode::Exact).has_value();
}

bool exact_sat_snf(const SnfSentence& snf, LogicId logic, int n) {
  return find_model(snf, logic, n, SearchMode::Exact).has_value();
}

}  // namespace

TEST_CASE("snf: sentences already in shape pass through") {
  SnfSentence snf = to_snf(parse_formula("forall x. exists y. x < y"), LogicId::OrderEq);
  CHECK(snf.psi0->tag == Conn::True);
  REQUIRE(snf.M == 1);
  CHECK(structural_equal(snf.skolem[0], parse_formula("x < y")));
  CHECK(snf.K == 0);
}

TEST_CASE("snf: bare existential becomes one Skolem conjunct") {
  FormulaPtr f = parse_formula("exists x. P(x)");
  SnfSentence snf = to_snf(f, LogicId::RawFo2);
  CHECK(snf.M == 1);
  for (int n = 1; n <= 4; ++n)
    CHECK(exact_sat_raw(f, LogicId::RawFo2, n) == exact_sat_snf(snf, LogicId::RawFo2, n));
}

TEST_CASE("snf: sparse special levels are renumbered in order") {
  FormulaPtr f = parse_formula("forall x. exists y. (E3(x,y) & !E7(x,y))");
  SnfSentence snf = to_snf(f, LogicId::Eq);
  CHECK(snf.K == 2);
  std::string rendered = render_formula(snf.as_formula());
  CHECK(rendered.find("E1(") != std::string::npos);
  CHECK(rendered.find("E2(") != std::string::npos);
  CHECK(rendered.find("E3(") == std::string::npos);
  CHECK(rendered.find("E7(") == std::string::npos);
  CHECK(snf.level_map.at(3) == 1);
  CHECK(snf.level_map.at(7) == 2);
  // the renumbered sentence is unsatisfiable for the same reason as the
  // original: E3 within E7 cannot hold while E7 fails
  for (int n = 1; n <= 3; ++n)
    CHECK(exact_sat_snf(snf, LogicId::Eq, n) == exact_sat_raw(f, LogicId::Eq, n));
}

TEST_CASE("constant elimination: no-op without constants") {
  FormulaPtr f = parse_formula("forall x. P(x)");
  CHECK(structural_equal(constant_elimination(f), f));
}

TEST_CASE("constant elimination: guarded pattern plus two axioms per constant") {
  FormulaPtr f = parse_formula("P(@a)");
  FormulaPtr out = constant_elimination(f);
  std::string text = render_formula(out);
  CHECK(text.find("_ca") != std::string::npos);
  CHECK(text.find("exists x. _ca(x)") != std::string::npos);
  CHECK(text.find("x = y") != std::string::npos);  // uniqueness axiom
  // equisatisfiable at each size
  SnfSentence snf = to_snf(f, LogicId::RawFo2);
  for (int n = 1; n <= 4; ++n)
    CHECK(exact_sat_raw(f, LogicId::RawFo2, n) == exact_sat_snf(snf, LogicId::RawFo2, n));
}

TEST_CASE("constant elimination: two constants, four axioms") {
  FormulaPtr f = parse_formula("R(@a,@b)");
  FormulaPtr out = constant_elimination(f);
  // count existence and uniqueness conjuncts
  std::vector<FormulaPtr> stack = {out};
  int existence = 0, uniqueness = 0;
  std::vector<FormulaPtr> conjuncts;
  while (!stack.empty()) {
    FormulaPtr g = stack.back();
    stack.pop_back();
    if (g->tag == Conn::And) {
      stack.push_back(g->lhs);
      stack.push_back(g->rhs);
    } else {
      conjuncts.push_back(g);
    }
  }
  for (const auto& c : conjuncts) {
    if (c->tag == Conn::Exists) ++existence;
    if (c->tag == Conn::Forall && c->lhs->tag == Conn::Forall) ++uniqueness;
  }
  CHECK(existence == 2);
  CHECK(uniqueness == 2);
  // the equality-free refusal
  CHECK_THROWS_AS(constant_elimination(f, false), InputError);
}

TEST_CASE("snf: rejects non-conformant input") {
  CHECK_THROWS_AS(to_snf(parse_formula("forall x. exists y. x < y"), LogicId::Eq),
                  InputError);
}

TEST_CASE("snf: equisatisfiability per domain size on seeded raw sentences") {
  auto corpus = generate_raw_corpus(30, 11);
  int checked = 0;
  for (const auto& f : corpus) {
    SnfSentence snf = to_snf(f, LogicId::RawFo2);
    for (int n = 1; n <= 4; ++n) {
      bool raw = exact_sat_raw(f, LogicId::RawFo2, n);
      bool snf_sat = exact_sat_snf(snf, LogicId::RawFo2, n);
      CHECK(raw == snf_sat);
      if (raw != snf_sat) {
        CAPTURE(render_formula(f));
        CAPTURE(n);
        return;
      }
      ++checked;
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("snf: idempotent on its own output up to provenance") {
  auto corpus = generate_raw_corpus(10, 23);
  for (const auto& f : corpus) {
    SnfSentence once = to_snf(f, LogicId::RawFo2);
    SnfSentence twice = to_snf(once.as_formula(), LogicId::RawFo2);
    CHECK(twice.M == once.M);
    CHECK(twice.K == once.K);
    CHECK(structural_equal(twice.psi0, once.psi0));
    for (int m = 0; m < once.M; ++m)
      CHECK(structural_equal(twice.skolem[m], once.skolem[m]));
  }
}

TEST_CASE("snf: output size stays linear in the input size") {
  auto corpus = generate_raw_corpus(60, 37);
  double worst = 0;
  for (const auto& f : corpus) {
    SnfSentence snf = to_snf(f, LogicId::RawFo2);
    int in = formula_size(f);
    int out = formula_size(snf.as_formula());
    CHECK(out <= 12 * in + 64);
    worst = std::max(worst, double(out) / in);
  }
  MESSAGE("worst snf size ratio: ", worst);
}

TEST_CASE("snf: every psi is quantifier-free and constant-free") {
  auto corpus = generate_raw_corpus(20, 41);
  for (const auto& f : corpus) {
    SnfSentence snf = to_snf(f, LogicId::RawFo2);
    SyntaxReport rep = analyze(snf.as_formula(), LogicId::RawFo2);
    CHECK(rep.fragment_flags.constant_free);
    std::vector<FormulaPtr> all = snf.skolem;
    all.push_back(snf.psi0);
    for (const auto& ps : all) {
      std::vector<FormulaPtr> stack = {ps};
      while (!stack.empty()) {
        FormulaPtr g = stack.back();
        stack.pop_back();
        CHECK(g->tag != Conn::Forall);
        CHECK(g->tag != Conn::Exists);
        if (g->lhs) stack.push_back(g->lhs);
        if (g->rhs) stack.push_back(g->rhs);
      }
    }
  }
}
