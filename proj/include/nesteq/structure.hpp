#ifndef NESTEQ_STRUCTURE_HPP
#define NESTEQ_STRUCTURE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nesteq/logic.hpp"

namespace nesteq {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Finite structure over domain {0..n-1}. Special relations are stored
// intensionally: eq[k][a] is the Ek+1-class label of a, pre[k][a] its
// preorder level (0-based, contiguous, monotone in the element index when
// present). When has_order is set, < is the natural order on element
// indices. The induced successor Sk is never stored; it is computed from
// the pre labels. Common binaries are kept extensionally as n*n bitmaps.
struct Structure {
  Signature sig;
  int n = 0;
  bool has_order = false;
  std::vector<std::vector<int>> eq;   // [K][n]
  std::vector<std::vector<int>> pre;  // [K][n]; empty when no preorders
  std::vector<std::vector<int>> feq;  // [fK][n]; second family (two-families)
  std::vector<std::vector<uint8_t>> unary;   // [#unary][n]
  std::vector<std::vector<uint8_t>> binary;  // [#binary][n*n]
  std::map<std::string, int> constants;

  int levels() const { return int(eq.size()); }
  bool has_pre() const { return !pre.empty(); }

  bool uval(int sym, int a) const { return unary[sym][a] != 0; }
  bool bval(int sym, int a, int b) const { return binary[sym][size_t(a) * n + b] != 0; }
  void set_u(int sym, int a, bool v) { unary[sym][a] = v; }
  void set_b(int sym, int a, int b, bool v) { binary[sym][size_t(a) * n + b] = v; }

  // Ek with the E0/EK+1 conventions: level 0 is identity, levels() + 1 and
  // beyond are universal.
  bool eq_at(int k, int a, int b) const {
    if (k <= 0) return a == b;
    if (k > levels()) return true;
    return eq[k - 1][a] == eq[k - 1][b];
  }
  bool pre_at(int k, int a, int b) const {  // a preceq_k b
    return pre[k - 1][a] <= pre[k - 1][b];
  }
  bool succ_at(int k, int a, int b) const {
    return pre[k - 1][b] == pre[k - 1][a] + 1;
  }
  bool feq_at(int k, int a, int b) const { return feq[k - 1][a] == feq[k - 1][b]; }
  bool less_at(int a, int b) const { return a < b; }

  // Allocates empty interpretations matching sig (all unary/binary false,
  // labels zeroed). eq/pre sized to sig.levels, feq to sig.f_levels.
  static Structure empty(const Signature& sig, int n, bool with_pre);
};

struct ValidationFailure {
  std::string axiom;
  std::vector<int> witnesses;
};

struct ValidationReport {
  bool ok = true;
  std::vector<ValidationFailure> failures;
};

// Checks the representation invariants: nestedness of eq levels per family,
// preorder/equivalence compatibility, preorder nesting and label alignment,
// contiguity of level indices, constant ranges, and (for preorder logics)
// the interval property of each Ek-class with respect to the element order.
ValidationReport validate_structure(const Structure& s, LogicId logic);

struct Valuation {
  std::optional<int> x, y;
};

// Standard Tarskian truth. Throws EvalError for unassigned free variables or
// symbols absent from s. Sk atoms are evaluated through the induced
// successor of the pre labels.
bool evaluate(const Structure& s, const FormulaPtr& f, const Valuation& v);

// Compiled form for hot paths: the AST flattened to an array with symbol
// names resolved against a fixed signature.
class CompiledFormula {
 public:
  CompiledFormula() = default;
  CompiledFormula(const FormulaPtr& f, const Signature& sig);
  bool eval(const Structure& s, int a, int b) const;  // -1 = unassigned
  // Quantifiers range over 0..limit-1 only (prefix evaluation).
  bool eval_limited(const Structure& s, int limit, int a, int b) const;
  bool valid() const { return !nodes_.empty(); }

 private:
  struct Node {
    Conn tag;
    AtomKind akind;
    int sym = 0;    // resolved unary/binary index; level for Ek/prek/Sk/Fk
    int cl = -1;    // constant ids (index into consts_) or -2 for x, -3 for y
    int cr = -1;
    int var = 0;
    int lhs = -1, rhs = -1;
  };
  std::vector<Node> nodes_;
  std::vector<std::string> consts_;
  int root_ = -1;

  int flatten(const FormulaPtr& f, const Signature& sig);
  bool eval_node(const Structure& s, int limit, int idx, int a, int b) const;
  int resolve_term(const Structure& s, int code, int a, int b) const;
};

struct OneType;
struct TwoType;

OneType one_type_of(const Structure& s, int a);
TwoType two_type_of(const Structure& s, int a, int b);

// Exactly the pairs (a,b) with level(b) = level(a) + 1 at preorder level k.
std::vector<std::pair<int, int>> induced_successor(const Structure& s, int k);

// Drops interpretations outside sig. Throws InputError-style EvalError when
// sig is not a subset of s's signature.
Structure reduct(const Structure& s, const Signature& sig);

}  // namespace nesteq

#endif
