#include <doctest.h>

#include "nesteq/corpus.hpp"
#include "nesteq/json_io.hpp"
#include "nesteq/oracle.hpp"

using namespace nesteq;

TEST_CASE("find_model: a nontrivial class demand needs two elements") {
  FormulaPtr f = parse_formula("forall x. exists y. (E1(x,y) & !(x = y))");
  SnfSentence snf = to_snf(f, LogicId::Eq);
  CHECK_FALSE(find_model(snf, LogicId::Eq, 1, SearchMode::Exact).has_value());
  auto m = find_model(snf, LogicId::Eq, 2, SearchMode::Exact);
  REQUIRE(m.has_value());
  CHECK(m->n == 2);
  CHECK(m->eq[0][0] == m->eq[0][1]);  // one class of two
  CHECK(evaluate(*m, snf.as_formula(), {}));
}

TEST_CASE("find_model: order without endpoints never holds finitely") {
  FormulaPtr f = parse_formula("forall x. exists y. x < y");
  SnfSentence snf = to_snf(f, LogicId::OrderEq);
  for (int n = 1; n <= 6; ++n)
    CHECK_FALSE(find_model(snf, LogicId::OrderEq, n, SearchMode::Exact).has_value());
}

TEST_CASE("find_model: trivial sentence, one element") {
  SnfSentence snf = to_snf(parse_formula("true"), LogicId::RawFo2);
  auto m = find_model(snf, LogicId::RawFo2, 1, SearchMode::Exact);
  REQUIRE(m.has_value());
  CHECK(m->n == 1);
}

TEST_CASE("completeness_bound: closed-form values") {
  // signature {<}: K = 0, M = 1, |alpha| = 1
  SnfSentence a = to_snf(parse_formula("forall x. exists y. x < y"), LogicId::OrderEq);
  CHECK(completeness_bound(a, LogicId::OrderEq) == 12);

  // K = 1, M = 2, one unary predicate: 12^2 * 2^6 * 2^2 = 36864
  SnfSentence b = to_snf(parse_formula("(forall x. exists y. (E1(x,y) & P(y))) & "
                                       "(forall x. exists y. !E1(x,y))"),
                         LogicId::Eq);
  REQUIRE(b.M == 2);
  REQUIRE(b.K == 1);
  CHECK(completeness_bound(b, LogicId::Eq) == 36864);

  SnfSentence c = to_snf(parse_formula("forall x. exists y. S1(x,y)"),
                         LogicId::PreorderSucc);
  CHECK_FALSE(completeness_bound(c, LogicId::PreorderSucc).has_value());

  SnfSentence d = to_snf(parse_formula("forall x. exists y. F1(x,y)"),
                         LogicId::TwoFamilies);
  CHECK_FALSE(completeness_bound(d, LogicId::TwoFamilies).has_value());
}

TEST_CASE("decide_bounded: certified refutation at the closed-form bound") {
  Verdict v = decide_bounded(parse_formula("forall x. exists y. x < y"),
                             LogicId::OrderEq, 12);
  CHECK(v.status == VerdictStatus::UnsatCertified);
  CHECK(v.certification_bound == 12);
  CHECK(v.explored_cap == 12);
}

TEST_CASE("decide_bounded: cap below the bound stays unknown") {
  FormulaPtr f = parse_formula("forall x. exists y. (pre1(x,y) & !pre1(y,x))");
  Verdict v = decide_bounded(f, LogicId::Preorder, 5);
  CHECK(v.status == VerdictStatus::Unknown);
  REQUIRE(v.certification_bound.has_value());
  CHECK(*v.certification_bound == 144);  // 12^2, K = 1, M = 1, |alpha| = 1
  // exhausting the full bound is beyond desk scale here (the frame count is
  // exponential in the size); a budget run must stay Unknown rather than
  // fake a certificate
  SearchBudget tight;
  tight.nodes = 100000;
  Verdict w = decide_bounded(f, LogicId::Preorder, 144, tight);
  CHECK(w.status == VerdictStatus::Unknown);
}

TEST_CASE("decide_bounded: trivial satisfiable sentence") {
  Verdict v = decide_bounded(parse_formula("true"), LogicId::RawFo2, 1);
  CHECK(v.status == VerdictStatus::Sat);
  REQUIRE(v.model.has_value());
  CHECK(v.model->n == 1);
}

TEST_CASE("decide_bounded: sat verdicts evaluate on the original sentence") {
  auto corpus = generate_raw_corpus(25, 91);
  int sats = 0;
  for (const auto& f : corpus) {
    Verdict v = decide_bounded(f, LogicId::RawFo2, 4);
    if (v.status != VerdictStatus::Sat) continue;
    ++sats;
    REQUIRE(v.model.has_value());
    CHECK(evaluate(*v.model, f, {}));
    CHECK(validate_structure(*v.model, LogicId::RawFo2).ok);
  }
  CHECK(sats > 0);
}

TEST_CASE("oracle self-consistency: at-most vs exact sizes") {
  CorpusOptions co;
  co.logic = LogicId::PreorderSucc;
  co.count = 60;
  co.seed = 1234;
  auto corpus = generate_corpus(co);
  for (const auto& f : corpus) {
    SnfSentence snf = to_snf(f, LogicId::PreorderSucc);
    bool upto = find_model(snf, LogicId::PreorderSucc, 3, SearchMode::AtMost).has_value();
    bool any_exact = false;
    for (int n = 1; n <= 3 && !any_exact; ++n)
      any_exact = find_model(snf, LogicId::PreorderSucc, n, SearchMode::Exact).has_value();
    CHECK(upto == any_exact);
  }
}

TEST_CASE("monotonicity: a model within n implies one within any larger cap") {
  CorpusOptions co;
  co.logic = LogicId::Eq;
  co.count = 40;
  co.seed = 555;
  auto corpus = generate_corpus(co);
  for (const auto& f : corpus) {
    SnfSentence snf = to_snf(f, LogicId::Eq);
    if (find_model(snf, LogicId::Eq, 2, SearchMode::AtMost).has_value())
      CHECK(find_model(snf, LogicId::Eq, 4, SearchMode::AtMost).has_value());
  }
}

TEST_CASE("two-families: hard cap refusal and bounded search") {
  FormulaPtr f = parse_formula("forall x. exists y. (E1(x,y) & F1(x,y) & P(y))");
  SnfSentence snf = to_snf(f, LogicId::TwoFamilies);
  SearchBudget budget;
  budget.two_families_hard_cap = 4;
  CHECK_THROWS_AS(find_model(snf, LogicId::TwoFamilies, 5, SearchMode::AtMost, budget),
                  InputError);
  auto m = find_model(snf, LogicId::TwoFamilies, 2, SearchMode::AtMost, budget);
  REQUIRE(m.has_value());
  CHECK(evaluate(*m, snf.as_formula(), {}));
  CHECK(evaluate(*m, f, {}));
}

TEST_CASE("budget exhaustion surfaces as unknown, never as a certificate") {
  FormulaPtr f = parse_formula("forall x. exists y. x < y");
  SearchBudget tiny;
  tiny.nodes = 5;
  Verdict v = decide_bounded(f, LogicId::OrderEq, 12, tiny);
  CHECK(v.status == VerdictStatus::Unknown);
}

TEST_CASE("verdict json shape") {
  Verdict v = decide_bounded(parse_formula("true"), LogicId::RawFo2, 1);
  std::string j = verdict_to_json(v);
  CHECK(j.find("\"status\": \"sat\"") != std::string::npos);
  CHECK(j.find("\"model\"") != std::string::npos);
  Verdict u = decide_bounded(parse_formula("forall x. exists y. x < y"),
                             LogicId::OrderEq, 12);
  std::string ju = verdict_to_json(u);
  CHECK(ju.find("unsat-certified") != std::string::npos);
  CHECK(ju.find("\"bound\": 12") != std::string::npos);
}

TEST_CASE("restored models interpret constants") {
  FormulaPtr f = parse_formula("P(@a) & exists x. !P(x)");
  Verdict v = decide_bounded(f, LogicId::RawFo2, 4);
  REQUIRE(v.status == VerdictStatus::Sat);
  REQUIRE(v.model.has_value());
  CHECK(v.model->constants.count("a") == 1);
  CHECK(evaluate(*v.model, f, {}));
}
