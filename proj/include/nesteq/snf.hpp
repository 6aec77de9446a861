#ifndef NESTEQ_SNF_HPP
#define NESTEQ_SNF_HPP

#include <map>
#include <string>
#include <vector>

#include "nesteq/logic.hpp"

namespace nesteq {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scott Normal Form: forall x,y. psi0  /\  AND_m forall x. exists y. psi_m.
// All psi are quantifier-free and constant-free; special levels are
// renumbered to the consecutive symbols E1..EK (resp. pre1..preK).
struct SnfSentence {
  FormulaPtr psi0;                  // quantifier-free over {x,y}
  std::vector<FormulaPtr> skolem;   // psi_1..psi_M, quantifier-free
  int M = 0;
  int K = 0;
  Signature signature;              // expanded with fresh unary symbols
  LogicId logic = LogicId::RawFo2;
  std::map<std::string, std::string> provenance;  // fresh symbol -> source
  FormulaPtr source;                // the original sentence, untouched
  FormulaPtr processed;             // after constant elimination + renumbering
  std::map<int, int> level_map;     // original level -> renumbered level

  // Renders the sentence as a single formula:
  //   forall x. forall y. psi0 & forall x. exists y. psi_1 & ...
  FormulaPtr as_formula() const;
};

// Replaces each constant c by a fresh unary predicate (one element holds it)
// with existence and uniqueness axioms; requires equality. Identity on
// constant-free input.
FormulaPtr constant_elimination(const FormulaPtr& f, bool equality_allowed = true);

// Renumbers the special levels used by f to consecutive 1..K preserving the
// nesting order. Returns the rewritten formula.
FormulaPtr renumber_levels(const FormulaPtr& f, LogicId logic);

// Swaps the roles of x and y everywhere.
FormulaPtr swap_vars(const FormulaPtr& f);

// Transforms a conformant sentence into Scott Normal Form, preserving
// satisfiability over every domain size. Conjuncts already in SNF shape are
// kept structurally; the rest go through the standard renaming with fresh
// unary predicates "_d0", "_d1", ... in traversal order.
SnfSentence to_snf(const FormulaPtr& f, LogicId logic);

}  // namespace nesteq

#endif
