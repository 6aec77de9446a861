#ifndef NESTEQ_LOGIC_HPP
#define NESTEQ_LOGIC_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace nesteq {

// The logics of interest. TwoFamilies is generation/validation only; no
// decision operation ever certifies anything for it.
enum class LogicId { RawFo2, Eq, OrderEq, Preorder, PreorderSucc, TwoFamilies };

const char* logic_name(LogicId id);
std::optional<LogicId> logic_from_name(const std::string& name);

struct SourcePos {
  int line = 0;  // 1-based; 0 = synthetic node
  int col = 0;
};

struct ParseError : std::runtime_error {
  SourcePos pos;
  ParseError(SourcePos p, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(p.line) + ":" +
                           std::to_string(p.col) + ": " + msg),
        pos(p) {}
};

struct Term {
  enum Kind : uint8_t { X, Y, Constant } kind = X;
  std::string name;  // constant name, only when kind == Constant

  bool operator==(const Term& o) const { return kind == o.kind && name == o.name; }
};

enum class AtomKind : uint8_t {
  Unary,      // P(t)
  Binary,     // R(t,t')   common binary, unconstrained
  Less,       // t < t'
  Equals,     // t = t'
  EqLevel,    // Ek(t,t')
  PreLevel,   // prek(t,t')
  SuccLevel,  // Sk(t,t')
  FLevel,     // Fk(t,t')  second equivalence family
};

struct Atom {
  AtomKind kind = AtomKind::Unary;
  std::string sym;  // Unary/Binary symbol name
  int level = 0;    // EqLevel/PreLevel/SuccLevel/FLevel
  Term lhs, rhs;    // rhs meaningful for all kinds except Unary

  bool operator==(const Atom& o) const {
    return kind == o.kind && sym == o.sym && level == o.level && lhs == o.lhs &&
           rhs == o.rhs;
  }
};

enum class Conn : uint8_t { True, False, AtomF, Not, And, Or, Implies, Iff, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable AST node. Quantifiers bind var (0 = x, 1 = y) over lhs.
// Not uses lhs; binary connectives use lhs/rhs.
struct Formula {
  Conn tag = Conn::True;
  Atom atom;
  int var = 0;
  FormulaPtr lhs, rhs;
  SourcePos pos;
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_atom(Atom a);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_forall(int var, FormulaPtr a);
FormulaPtr f_exists(int var, FormulaPtr a);
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs);  // true when empty

// Convenience atom builders.
Atom atom_unary(const std::string& sym, Term t);
Atom atom_binary(const std::string& sym, Term a, Term b);
Atom atom_less(Term a, Term b);
Atom atom_equals(Term a, Term b);
Atom atom_level(AtomKind kind, int level, Term a, Term b);
Term term_x();
Term term_y();
Term term_const(const std::string& name);

bool structural_equal(const FormulaPtr& a, const FormulaPtr& b);

// out[0] / out[1] set when x / y occur free.
void free_variables(const FormulaPtr& f, bool out[2]);

// Total symbol count, per the usual formula-length measure: every occurrence
// of a variable, relation symbol, constant, connective or quantifier counts 1.
int formula_size(const FormulaPtr& f);

// Signature of a formula: common symbols plus which special symbols occur.
// Presence closure is applied: Sk implies prek, prek implies Ek.
struct Signature {
  std::vector<std::string> unary;      // sorted, deduplicated
  std::vector<std::string> binary;     // sorted, deduplicated (common only)
  std::vector<std::string> constants;  // sorted
  int levels = 0;                      // K: highest E/pre level present
  bool has_order = false;              // < occurs
  bool has_pre = false;                // some prek occurs (or is implied)
  bool has_succ = false;               // some Sk occurs
  int f_levels = 0;                    // highest F level present (0 = none)
  bool equality_allowed = true;

  std::set<int> used_eq_levels;   // raw levels mentioned (E or implied)
  std::set<int> used_pre_levels;  // raw levels mentioned via pre/S

  int unary_index(const std::string& name) const;   // -1 if absent
  int binary_index(const std::string& name) const;  // -1 if absent
  bool subset_of(const Signature& other) const;
};

struct Violation {
  SourcePos pos;
  std::string rule;
};

struct FragmentFlags {
  bool constant_free = false;
  bool equality_free = false;
  bool monadic_common = false;
};

struct SyntaxReport {
  Signature signature;
  bool conformant = false;
  std::vector<Violation> violations;
  FragmentFlags fragment_flags;
};

// parse_formula: text -> AST. Grammar (whitespace-insensitive, `--` starts a
// line comment):
//   expr := "forall" var "." expr | "exists" var "." expr
//         | expr "&" expr | expr "|" expr | expr "->" expr | expr "<->" expr
//         | "!" expr | "(" expr ")" | atom | "true" | "false"
//   atom := NAME "(" term ")" | NAME "(" term "," term ")"
//         | term "<" term | term "=" term
//         | "E" INT "(" term "," term ")" | "pre" INT "(" term "," term ")"
//         | "S" INT "(" term "," term ")" | "F" INT "(" term "," term ")"
//   term := "x" | "y" | "@" NAME ;  var := "x" | "y"
// Precedence: ! > & > | > -> > <->; quantifier scope extends maximally right.
// Throws ParseError (lexical error, unknown symbol, arity mismatch, third
// variable), each with line/column.
FormulaPtr parse_formula(const std::string& text);

// render_formula: inverse of parse_formula up to structural equality.
// The printer is not a simplifier: double negations etc. are preserved.
std::string render_formula(const FormulaPtr& f);

// analyze: total; never throws. Collects the signature, checks the logic's
// special-symbol profile, and reports fragment flags.
SyntaxReport analyze(const FormulaPtr& f, LogicId logic);

}  // namespace nesteq

#endif
