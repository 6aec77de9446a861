#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

#include "nesteq/corpus.hpp"
#include "nesteq/json_io.hpp"
#include "nesteq/structure.hpp"
#include "nesteq/types.hpp"

using namespace nesteq;

namespace {

Signature sig_of(const std::string& formula_text, LogicId logic) {
  return analyze(parse_formula(formula_text), logic).signature;
}

// direct pairwise axiom checker, kept independent of validate_structure
bool pairwise_ok(const Structure& s) {
  int K = s.levels();
  for (int k = 1; k < K; ++k)
    for (int a = 0; a < s.n; ++a)
      for (int b = 0; b < s.n; ++b)
        if (s.eq_at(k, a, b) && !s.eq_at(k + 1, a, b)) return false;
  if (s.has_pre()) {
    for (int k = 1; k <= K; ++k)
      for (int a = 0; a < s.n; ++a)
        for (int b = 0; b < s.n; ++b) {
          bool both = s.pre_at(k, a, b) && s.pre_at(k, b, a);
          if (both != s.eq_at(k, a, b)) return false;
          if (!s.pre_at(k, a, b) && !s.pre_at(k, b, a)) return false;  // totality
          if (k < K && s.pre_at(k, a, b) && !s.pre_at(k + 1, a, b)) return false;
        }
    for (int k = 1; k <= K; ++k)
      for (int a = 0; a + 1 < s.n; ++a)
        if (s.pre[k - 1][a + 1] < s.pre[k - 1][a]) return false;  // alignment
  }
  return true;
}

// random (not necessarily valid) labelings
Structure random_labeling(Rng& rng, bool with_pre) {
  Signature sig;
  sig.levels = 2;
  sig.has_pre = with_pre;
  int n = 2 + rng.below(5);
  Structure s = Structure::empty(sig, n, with_pre);
  for (int k = 0; k < 2; ++k)
    for (int e = 0; e < n; ++e) {
      s.eq[k][e] = rng.below(3);
      if (with_pre) s.pre[k][e] = rng.below(3);
    }
  if (with_pre && rng.chance(50)) {
    // aligned candidates: monotone levels derived from a random r-sequence
    for (int k = 0; k < 2; ++k) s.pre[k][0] = 0;
    for (int e = 1; e < n; ++e) {
      int r = 1 + rng.below(3);
      for (int k = 1; k <= 2; ++k)
        s.pre[k - 1][e] = s.pre[k - 1][e - 1] + (k < r ? 1 : 0);
    }
    if (rng.chance(50))
      for (int k = 0; k < 2; ++k) s.eq[k] = s.pre[k];
  }
  return s;
}

}  // namespace

TEST_CASE("validate: nestedness violation is witnessed") {
  Signature sig;
  sig.levels = 2;
  Structure s = Structure::empty(sig, 3, false);
  s.eq[0] = {0, 0, 1};
  s.eq[1] = {0, 1, 1};
  ValidationReport rep = validate_structure(s, LogicId::Eq);
  CHECK_FALSE(rep.ok);
  REQUIRE_FALSE(rep.failures.empty());
  CHECK(rep.failures[0].axiom.find("nestedness") != std::string::npos);
  CHECK(rep.failures[0].witnesses == std::vector<int>{0, 1});
}

TEST_CASE("validate: single class is fine") {
  Signature sig;
  sig.levels = 1;
  sig.has_pre = true;
  Structure s = Structure::empty(sig, 2, true);
  s.pre[0] = {0, 0};
  s.eq[0] = {0, 0};
  CHECK(validate_structure(s, LogicId::Preorder).ok);
}

TEST_CASE("validate agrees with a direct pairwise checker on 500 random labelings") {
  Rng rng(424242);
  for (int i = 0; i < 500; ++i) {
    bool with_pre = rng.chance(50);
    Structure s = random_labeling(rng, with_pre);
    LogicId logic = with_pre ? LogicId::Preorder : LogicId::Eq;
    ValidationReport rep = validate_structure(s, logic);
    bool direct = pairwise_ok(s);
    // validate additionally enforces representation details (labels
    // contiguous from 0), so acceptance implies the direct check, and a
    // direct failure implies rejection
    if (rep.ok) CHECK(direct);
    if (!direct) CHECK_FALSE(rep.ok);
  }
}

TEST_CASE("evaluate: unbounded order demand fails in finite models") {
  Signature sig = sig_of("forall x. exists y. x < y", LogicId::OrderEq);
  Structure s = Structure::empty(sig, 2, false);
  s.has_order = true;
  CHECK_FALSE(evaluate(s, parse_formula("forall x. exists y. x < y"), {}));
  CHECK(evaluate(s, parse_formula("exists x. exists y. x < y"), {}));
}

TEST_CASE("evaluate: reflexivity of equality") {
  Signature sig;
  Structure s = Structure::empty(sig, 3, false);
  CHECK(evaluate(s, parse_formula("forall x. x = x"), {}));
}

TEST_CASE("evaluate: configuration chain satisfies the d-partition axiom") {
  // hand-built chain of four configurations alternating d_E / d_F
  Signature sig;
  sig.unary = {"dE", "dF"};
  sig.levels = 2;
  sig.f_levels = 2;
  Structure s = Structure::empty(sig, 4, false);
  // E2 pairs configs {0,1} and {2,3}; F2 pairs {1,2}
  s.eq[1] = {0, 0, 1, 1};
  s.feq[1] = {0, 1, 1, 2};
  s.eq[0] = {0, 1, 2, 3};
  s.feq[0] = {0, 1, 2, 3};
  for (int e = 0; e < 4; ++e) s.set_u(sig.unary_index(e % 2 == 0 ? "dE" : "dF"), e, true);
  CHECK(validate_structure(s, LogicId::TwoFamilies).ok);
  CHECK(evaluate(s, parse_formula("forall x. (dE(x) <-> !dF(x))"), {}));
  // every d_E element has a t-successor here (the chain moves forward)
  FormulaPtr t_total = parse_formula(
      "forall x. (dF(x) | (exists y. ((E2(x,y) & dE(x) & dF(y)) | (F2(x,y) & dF(x) & "
      "dE(y)))))");
  CHECK(evaluate(s, t_total, {}));
}

TEST_CASE("evaluate: errors") {
  Signature sig;
  Structure s = Structure::empty(sig, 2, false);
  CHECK_THROWS_AS(evaluate(s, parse_formula("P(x)"), {}), EvalError);
  Valuation v;
  v.x = 0;
  CHECK_THROWS_AS(evaluate(s, parse_formula("P(x)"), v), EvalError);  // symbol absent
  CHECK_THROWS_AS(evaluate(s, parse_formula("forall x. x < y"), {}), EvalError);
}

TEST_CASE("one_type_of: direct readout") {
  Signature sig = sig_of("forall x. (P(x) & R(x,x))", LogicId::RawFo2);
  Structure s = Structure::empty(sig, 2, false);
  s.set_u(sig.unary_index("P"), 0, true);
  OneType t = one_type_of(s, 0);
  TypeLayout lay(sig);
  CHECK(t.get(0));            // P
  CHECK_FALSE(t.get(lay.u));  // R self loop
  CHECK(one_type_of(s, 1).bits == 0);
  CHECK_THROWS_AS(one_type_of(s, 5), EvalError);
}

TEST_CASE("types within one class may differ") {
  Signature sig = sig_of("forall x. (P(x) & E1(x,x))", LogicId::Eq);
  Structure s = Structure::empty(sig, 2, false);
  s.eq[0] = {0, 0};
  s.set_u(sig.unary_index("P"), 0, true);
  CHECK_FALSE(one_type_of(s, 0) == one_type_of(s, 1));
}

TEST_CASE("type readouts agree with the evaluator on random probes") {
  Rng rng(777);
  Signature sig = sig_of("forall x. exists y. (P(x) & Q(y) & R(x,y) & pre2(x,y) & x < y)",
                         LogicId::PreorderSucc);
  sig.has_order = true;  // exercise order bits too
  for (int trial = 0; trial < 25; ++trial) {
    int n = 3 + rng.below(4);
    Structure s = Structure::empty(sig, n, true);
    s.has_order = true;
    for (int e = 1; e < n; ++e) {
      int r = 1 + rng.below(3);
      for (int k = 1; k <= 2; ++k)
        s.pre[k - 1][e] = s.pre[k - 1][e - 1] + (k < r ? 1 : 0);
    }
    for (int k = 0; k < 2; ++k) s.eq[k] = s.pre[k];
    for (size_t u = 0; u < sig.unary.size(); ++u)
      for (int e = 0; e < n; ++e) s.set_u(int(u), e, rng.chance(50));
    for (size_t b = 0; b < sig.binary.size(); ++b)
      for (int e1 = 0; e1 < n; ++e1)
        for (int e2 = 0; e2 < n; ++e2) s.set_b(int(b), e1, e2, rng.chance(50));

    TypeLayout lay(sig);
    for (int probe = 0; probe < 40; ++probe) {
      int a = rng.below(n), b = rng.below(n);
      Valuation v;
      v.x = a;
      v.y = b;
      OneType ot = one_type_of(s, a);
      CHECK(ot.get(0) == evaluate(s, parse_formula("P(x)"), v));
      CHECK(ot.get(lay.u) == s.bval(0, a, a));
      if (a == b) continue;
      TwoType tt = two_type_of(s, a, b);
      CHECK(tt.get(lay.bit_rxy(0)) == evaluate(s, parse_formula("R(x,y)"), v));
      CHECK(tt.get(lay.bit_ryx(0)) == evaluate(s, parse_formula("R(y,x)"), v));
      CHECK(tt.get(lay.bit_xlty()) == evaluate(s, parse_formula("x < y"), v));
      CHECK(tt.get(lay.bit_eq(1)) == evaluate(s, parse_formula("E1(x,y)"), v));
      CHECK(tt.get(lay.bit_xpy(2)) == evaluate(s, parse_formula("pre2(x,y)"), v));
      CHECK(tt.get(lay.bit_sxy(1)) == evaluate(s, parse_formula("S1(x,y)"), v));
      CHECK(tt.get(lay.bit_syx(2)) == evaluate(s, parse_formula("S2(y,x)"), v));
    }
  }
}

TEST_CASE("two_type_of: adjacent levels carry the successor bit") {
  Signature sig;
  sig.levels = 1;
  sig.has_pre = true;
  Structure s = Structure::empty(sig, 3, true);
  s.pre[0] = {0, 1, 1};
  s.eq[0] = {0, 1, 1};
  TypeLayout lay(sig);
  TwoType t = two_type_of(s, 0, 1);
  CHECK(t.get(lay.bit_sxy(1)));
  CHECK_FALSE(t.get(lay.bit_eq(1)));
  TwoType u = two_type_of(s, 1, 2);
  CHECK(u.get(lay.bit_eq(1)));
  CHECK(u.get(lay.bit_xpy(1)));
  CHECK(u.get(lay.bit_ypx(1)));
  CHECK_FALSE(u.get(lay.bit_sxy(1)));
  CHECK_THROWS_AS(two_type_of(s, 1, 1), EvalError);
}

TEST_CASE("induced_successor: forced by the level labels") {
  Signature sig;
  sig.levels = 1;
  sig.has_pre = true;
  Structure s = Structure::empty(sig, 4, true);
  s.pre[0] = {0, 0, 1, 2};
  s.eq[0] = {0, 0, 1, 2};
  auto pairs = induced_successor(s, 1);
  std::vector<std::pair<int, int>> expect = {{0, 2}, {1, 2}, {2, 3}};
  CHECK(pairs == expect);

  Structure single = Structure::empty(sig, 3, true);
  CHECK(induced_successor(single, 1).empty());
  CHECK_THROWS_AS(induced_successor(single, 2), EvalError);
}

TEST_CASE("induced_successor equals the definitional formula on 200 random structures") {
  Rng rng(313);
  for (int trial = 0; trial < 200; ++trial) {
    Signature sig;
    sig.levels = 1;
    sig.has_pre = true;
    int n = 2 + rng.below(5);
    Structure s = Structure::empty(sig, n, true);
    for (int e = 1; e < n; ++e) s.pre[0][e] = s.pre[0][e - 1] + rng.below(2);
    s.eq[0] = s.pre[0];
    auto pairs = induced_successor(s, 1);
    std::set<std::pair<int, int>> got(pairs.begin(), pairs.end());
    // x strictly below y and every z strictly above x is at or above y
    FormulaPtr defn = parse_formula(
        "(pre1(x,y) & !pre1(y,x)) & "
        "!(exists x. (pre1(y,x) & !pre1(x,y)))");
    // the inner rebinding of x walks z over the domain relative to the outer
    // pair; spelled out: S1(x,y) iff x<y and no z has x<z<y. Evaluate the
    // two conjuncts directly instead to avoid leaning on cleverness:
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        bool lt = s.pre[0][a] < s.pre[0][b];
        bool succ = lt;
        for (int z = 0; z < n && succ; ++z)
          if (s.pre[0][a] < s.pre[0][z] && s.pre[0][z] < s.pre[0][b]) succ = false;
        Valuation v;
        v.x = a;
        v.y = b;
        bool via_eval = evaluate(s, parse_formula("S1(x,y)"), v);
        CHECK(succ == (got.count({a, b}) > 0));
        CHECK(succ == via_eval);
      }
    (void)defn;
  }
}

TEST_CASE("reduct: drops symbols, keeps the rest intact") {
  Signature sig = sig_of("forall x. (P(x) & Q(x) & E2(x,x) & pre1(x,y))", LogicId::Preorder);
  Structure s = Structure::empty(sig, 3, true);
  s.set_u(sig.unary_index("P"), 1, true);
  s.pre[0] = {0, 1, 1};
  s.pre[1] = {0, 0, 0};
  s.eq[0] = {0, 1, 1};
  s.eq[1] = {0, 0, 0};

  Signature sub = sig_of("forall x. (P(x) & pre1(x,y))", LogicId::Preorder);
  Structure r = reduct(s, sub);
  CHECK(r.sig.unary == std::vector<std::string>{"P"});
  CHECK(r.levels() == 1);
  CHECK(r.pre[0] == s.pre[0]);
  CHECK(r.uval(0, 1));

  Structure same = reduct(s, sig);
  CHECK(same.eq == s.eq);
  CHECK(same.unary == s.unary);

  Signature bigger = sig;
  bigger.unary.push_back("Z");
  std::sort(bigger.unary.begin(), bigger.unary.end());
  CHECK_THROWS_AS(reduct(s, bigger), EvalError);
}

TEST_CASE("canonical sorting by levels preserves validity") {
  Rng rng(555);
  for (int trial = 0; trial < 500; ++trial) {
    Signature sig;
    sig.levels = 2;
    sig.has_pre = true;
    int n = 2 + rng.below(5);
    Structure s = Structure::empty(sig, n, true);
    for (int e = 1; e < n; ++e) {
      int r = 1 + rng.below(3);
      for (int k = 1; k <= 2; ++k)
        s.pre[k - 1][e] = s.pre[k - 1][e - 1] + (k < r ? 1 : 0);
    }
    for (int k = 0; k < 2; ++k) s.eq[k] = s.pre[k];
    REQUIRE(validate_structure(s, LogicId::Preorder).ok);

    // scramble element names, then restore by sorting on (coarse, fine)
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    std::vector<std::array<int, 2>> lab(n);
    for (int e = 0; e < n; ++e) lab[e] = {s.pre[1][perm[e]], s.pre[0][perm[e]]};
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return lab[a] < lab[b]; });
    Structure t = Structure::empty(sig, n, true);
    for (int e = 0; e < n; ++e) {
      t.pre[1][e] = lab[order[e]][0];
      t.pre[0][e] = lab[order[e]][1];
    }
    for (int k = 0; k < 2; ++k) {
      int next = 0;
      std::map<int, int> seen;
      for (int e = 0; e < n; ++e) {
        auto [it, fresh] = seen.emplace(t.pre[k][e], next);
        if (fresh) ++next;
        t.pre[k][e] = it->second;
      }
      t.eq[k] = t.pre[k];
    }
    CHECK(validate_structure(t, LogicId::Preorder).ok);
  }
}

TEST_CASE("structure json round-trip") {
  Signature sig = sig_of("forall x. (P(x) & R(x,y) & E1(x,y))", LogicId::Eq);
  Structure s = Structure::empty(sig, 3, false);
  s.eq[0] = {0, 0, 1};
  s.set_u(0, 2, true);
  s.set_b(0, 0, 1, true);
  Structure t = structure_from_json(structure_to_json(s));
  CHECK(t.n == s.n);
  CHECK(t.eq == s.eq);
  CHECK(t.unary == s.unary);
  CHECK(t.binary == s.binary);
  CHECK_THROWS_AS(structure_from_json("{\"n\": 0}"), InputError);
  CHECK_THROWS_AS(structure_from_json("not json"), InputError);
}
