#include "nesteq/logic.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace nesteq {

const char* logic_name(LogicId id) {
  switch (id) {
    case LogicId::RawFo2: return "raw";
    case LogicId::Eq: return "eq";
    case LogicId::OrderEq: return "order-eq";
    case LogicId::Preorder: return "preorder";
    case LogicId::PreorderSucc: return "preorder-succ";
    case LogicId::TwoFamilies: return "two-families";
  }
  return "?";
}

std::optional<LogicId> logic_from_name(const std::string& name) {
  if (name == "raw" || name == "raw-fo2" || name == "fo2") return LogicId::RawFo2;
  if (name == "eq") return LogicId::Eq;
  if (name == "order-eq") return LogicId::OrderEq;
  if (name == "preorder") return LogicId::Preorder;
  if (name == "preorder-succ") return LogicId::PreorderSucc;
  if (name == "two-families") return LogicId::TwoFamilies;
  return std::nullopt;
}

FormulaPtr f_true() {
  auto f = std::make_shared<Formula>();
  f->tag = Conn::True;
  return f;
}
FormulaPtr f_false() {
  auto f = std::make_shared<Formula>();
  f->tag = Conn::False;
  return f;
}
FormulaPtr f_atom(Atom a) {
  auto f = std::make_shared<Formula>();
  f->tag = Conn::AtomF;
  f->atom = std::move(a);
  return f;
}
static FormulaPtr mk1(Conn c, FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->tag = c;
  f->lhs = std::move(a);
  return f;
}
static FormulaPtr mk2(Conn c, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->tag = c;
  f->lhs = std::move(a);
  f->rhs = std::move(b);
  return f;
}
FormulaPtr f_not(FormulaPtr a) { return mk1(Conn::Not, std::move(a)); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return mk2(Conn::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return mk2(Conn::Or, std::move(a), std::move(b)); }
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) { return mk2(Conn::Implies, std::move(a), std::move(b)); }
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) { return mk2(Conn::Iff, std::move(a), std::move(b)); }
FormulaPtr f_forall(int var, FormulaPtr a) {
  auto f = mk1(Conn::Forall, std::move(a));
  const_cast<Formula*>(f.get())->var = var;
  return f;
}
FormulaPtr f_exists(int var, FormulaPtr a) {
  auto f = mk1(Conn::Exists, std::move(a));
  const_cast<Formula*>(f.get())->var = var;
  return f;
}
FormulaPtr f_and_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_true();
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
  return acc;
}

Atom atom_unary(const std::string& sym, Term t) {
  Atom a;
  a.kind = AtomKind::Unary;
  a.sym = sym;
  a.lhs = t;
  return a;
}
Atom atom_binary(const std::string& sym, Term t1, Term t2) {
  Atom a;
  a.kind = AtomKind::Binary;
  a.sym = sym;
  a.lhs = t1;
  a.rhs = t2;
  return a;
}
Atom atom_less(Term t1, Term t2) {
  Atom a;
  a.kind = AtomKind::Less;
  a.lhs = t1;
  a.rhs = t2;
  return a;
}
Atom atom_equals(Term t1, Term t2) {
  Atom a;
  a.kind = AtomKind::Equals;
  a.lhs = t1;
  a.rhs = t2;
  return a;
}
Atom atom_level(AtomKind kind, int level, Term t1, Term t2) {
  Atom a;
  a.kind = kind;
  a.level = level;
  a.lhs = t1;
  a.rhs = t2;
  return a;
}
Term term_x() { return Term{Term::X, ""}; }
Term term_y() { return Term{Term::Y, ""}; }
Term term_const(const std::string& name) { return Term{Term::Constant, name}; }

bool structural_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->tag != b->tag) return false;
  switch (a->tag) {
    case Conn::True:
    case Conn::False: return true;
    case Conn::AtomF: return a->atom == b->atom;
    case Conn::Not: return structural_equal(a->lhs, b->lhs);
    case Conn::Forall:
    case Conn::Exists: return a->var == b->var && structural_equal(a->lhs, b->lhs);
    default:
      return structural_equal(a->lhs, b->lhs) && structural_equal(a->rhs, b->rhs);
  }
}

static void free_vars_rec(const FormulaPtr& f, bool bound[2], bool out[2]) {
  switch (f->tag) {
    case Conn::True:
    case Conn::False: return;
    case Conn::AtomF: {
      auto note = [&](const Term& t) {
        if (t.kind == Term::X && !bound[0]) out[0] = true;
        if (t.kind == Term::Y && !bound[1]) out[1] = true;
      };
      note(f->atom.lhs);
      if (f->atom.kind != AtomKind::Unary) note(f->atom.rhs);
      return;
    }
    case Conn::Not: free_vars_rec(f->lhs, bound, out); return;
    case Conn::Forall:
    case Conn::Exists: {
      bool b2[2] = {bound[0], bound[1]};
      b2[f->var] = true;
      free_vars_rec(f->lhs, b2, out);
      return;
    }
    default:
      free_vars_rec(f->lhs, bound, out);
      free_vars_rec(f->rhs, bound, out);
      return;
  }
}

void free_variables(const FormulaPtr& f, bool out[2]) {
  bool bound[2] = {false, false};
  out[0] = out[1] = false;
  free_vars_rec(f, bound, out);
}

int formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  switch (f->tag) {
    case Conn::True:
    case Conn::False: return 1;
    case Conn::AtomF: {
      int terms = f->atom.kind == AtomKind::Unary ? 1 : 2;
      return 1 + terms;
    }
    case Conn::Not: return 1 + formula_size(f->lhs);
    case Conn::Forall:
    case Conn::Exists: return 2 + formula_size(f->lhs);
    default: return 1 + formula_size(f->lhs) + formula_size(f->rhs);
  }
}

int Signature::unary_index(const std::string& name) const {
  auto it = std::lower_bound(unary.begin(), unary.end(), name);
  if (it != unary.end() && *it == name) return int(it - unary.begin());
  return -1;
}
int Signature::binary_index(const std::string& name) const {
  auto it = std::lower_bound(binary.begin(), binary.end(), name);
  if (it != binary.end() && *it == name) return int(it - binary.begin());
  return -1;
}
bool Signature::subset_of(const Signature& o) const {
  for (const auto& s : unary)
    if (o.unary_index(s) < 0) return false;
  for (const auto& s : binary)
    if (o.binary_index(s) < 0) return false;
  for (const auto& s : constants)
    if (!std::binary_search(o.constants.begin(), o.constants.end(), s)) return false;
  if (levels > o.levels) return false;
  if (has_order && !o.has_order) return false;
  if (has_pre && !o.has_pre) return false;
  if (f_levels > o.f_levels) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  End, Name, At, LParen, RParen, Comma, Dot, Less, Equals,
  Bang, Amp, Pipe, Arrow, DArrow,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourcePos pos;
};

struct Lexer {
  const std::string& src;
  size_t i = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  void advance(size_t k = 1) {
    for (size_t j = 0; j < k && i < src.size(); ++j, ++i) {
      if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  }

  void skip_ws() {
    while (i < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[i]))) { advance(); continue; }
      if (src[i] == '-' && i + 1 < src.size() && src[i + 1] == '-') {
        while (i < src.size() && src[i] != '\n') advance();
        continue;
      }
      break;
    }
  }

  Token next() {
    skip_ws();
    Token t;
    t.pos = {line, col};
    if (i >= src.size()) return t;
    char c = src[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i;
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        advance();
      t.kind = Tok::Name;
      t.text = src.substr(start, i - start);
      return t;
    }
    switch (c) {
      case '@': advance(); t.kind = Tok::At; return t;
      case '(': advance(); t.kind = Tok::LParen; return t;
      case ')': advance(); t.kind = Tok::RParen; return t;
      case ',': advance(); t.kind = Tok::Comma; return t;
      case '.': advance(); t.kind = Tok::Dot; return t;
      case '=': advance(); t.kind = Tok::Equals; return t;
      case '!': advance(); t.kind = Tok::Bang; return t;
      case '&': advance(); t.kind = Tok::Amp; return t;
      case '|': advance(); t.kind = Tok::Pipe; return t;
      case '<':
        if (i + 2 < src.size() && src[i + 1] == '-' && src[i + 2] == '>') {
          advance(3); t.kind = Tok::DArrow; return t;
        }
        advance(); t.kind = Tok::Less; return t;
      case '-':
        if (i + 1 < src.size() && src[i + 1] == '>') {
          advance(2); t.kind = Tok::Arrow; return t;
        }
        throw ParseError(t.pos, "lexical error: stray '-'");
      default:
        throw ParseError(t.pos, std::string("lexical error: unexpected character '") + c + "'");
    }
  }
};

// Classifies a NAME token: special symbols are exactly E<d+>, pre<d+>, S<d+>,
// F<d+> with a decimal level suffix.
std::optional<std::pair<AtomKind, int>> classify_special(const std::string& name) {
  auto suffix_level = [&](size_t plen) -> std::optional<int> {
    if (name.size() <= plen) return std::nullopt;
    long v = 0;
    for (size_t j = plen; j < name.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(name[j]))) return std::nullopt;
      v = v * 10 + (name[j] - '0');
      if (v > 1000000) return std::nullopt;
    }
    return int(v);
  };
  if (name[0] == 'E') {
    if (auto k = suffix_level(1)) return std::make_pair(AtomKind::EqLevel, *k);
  }
  if (name[0] == 'S') {
    if (auto k = suffix_level(1)) return std::make_pair(AtomKind::SuccLevel, *k);
  }
  if (name[0] == 'F') {
    if (auto k = suffix_level(1)) return std::make_pair(AtomKind::FLevel, *k);
  }
  if (name.rfind("pre", 0) == 0) {
    if (auto k = suffix_level(3)) return std::make_pair(AtomKind::PreLevel, *k);
  }
  return std::nullopt;
}

struct Parser {
  Lexer lex;
  Token cur;
  std::map<std::string, int> arity;  // common symbol -> 1 or 2

  explicit Parser(const std::string& s) : lex(s) { cur = lex.next(); }

  void bump() { cur = lex.next(); }

  void expect(Tok k, const char* what) {
    if (cur.kind != k) throw ParseError(cur.pos, std::string("expected ") + what);
    bump();
  }

  Term parse_term() {
    if (cur.kind == Tok::At) {
      bump();
      if (cur.kind != Tok::Name) throw ParseError(cur.pos, "expected constant name after '@'");
      Term t = term_const(cur.text);
      bump();
      return t;
    }
    if (cur.kind == Tok::Name) {
      if (cur.text == "x") { bump(); return term_x(); }
      if (cur.text == "y") { bump(); return term_y(); }
      throw ParseError(cur.pos, "third variable used: '" + cur.text +
                                    "' (only x and y are allowed; constants need '@')");
    }
    throw ParseError(cur.pos, "expected a term");
  }

  void note_arity(const std::string& sym, int k, SourcePos pos) {
    auto [it, inserted] = arity.emplace(sym, k);
    if (!inserted && it->second != k)
      throw ParseError(pos, "arity mismatch: '" + sym + "' used with arity " +
                                std::to_string(it->second) + " and " + std::to_string(k));
  }

  // atom or parenthesised expression already dispatched by caller
  FormulaPtr parse_atom_starting_with_name() {
    Token name = cur;
    bump();
    if (name.text == "true") return with_pos(f_true(), name.pos);
    if (name.text == "false") return with_pos(f_false(), name.pos);
    if (name.text == "x" || name.text == "y") {
      // infix atom: term < term | term = term
      Term t1 = name.text == "x" ? term_x() : term_y();
      return parse_infix_tail(t1, name.pos);
    }
    if (cur.kind != Tok::LParen)
      throw ParseError(name.pos, "unknown symbol '" + name.text +
                                     "' (relation symbols must be applied to arguments)");
    bump();
    Term t1 = parse_term();
    bool two = false;
    Term t2;
    if (cur.kind == Tok::Comma) {
      bump();
      t2 = parse_term();
      two = true;
    }
    expect(Tok::RParen, "')'");
    if (auto sp = classify_special(name.text)) {
      auto [kind, level] = *sp;
      if (!two)
        throw ParseError(name.pos, "arity mismatch: special symbol '" + name.text + "' is binary");
      if (level < 1)
        throw ParseError(name.pos, "unknown symbol '" + name.text + "': special levels start at 1");
      return with_pos(f_atom(atom_level(kind, level, t1, t2)), name.pos);
    }
    if (two) {
      note_arity(name.text, 2, name.pos);
      return with_pos(f_atom(atom_binary(name.text, t1, t2)), name.pos);
    }
    note_arity(name.text, 1, name.pos);
    return with_pos(f_atom(atom_unary(name.text, t1)), name.pos);
  }

  FormulaPtr parse_infix_tail(Term t1, SourcePos pos) {
    if (cur.kind == Tok::Less) {
      bump();
      Term t2 = parse_term();
      return with_pos(f_atom(atom_less(t1, t2)), pos);
    }
    if (cur.kind == Tok::Equals) {
      bump();
      Term t2 = parse_term();
      return with_pos(f_atom(atom_equals(t1, t2)), pos);
    }
    throw ParseError(cur.pos, "expected '<' or '=' after a term");
  }

  static FormulaPtr with_pos(FormulaPtr f, SourcePos p) {
    const_cast<Formula*>(f.get())->pos = p;
    return f;
  }

  FormulaPtr parse_primary() {
    SourcePos pos = cur.pos;
    switch (cur.kind) {
      case Tok::Name: {
        if (cur.text == "forall" || cur.text == "exists") {
          bool uni = cur.text == "forall";
          bump();
          if (cur.kind != Tok::Name || (cur.text != "x" && cur.text != "y")) {
            if (cur.kind == Tok::Name)
              throw ParseError(cur.pos, "third variable used: '" + cur.text + "'");
            throw ParseError(cur.pos, "expected a variable after quantifier");
          }
          int var = cur.text == "x" ? 0 : 1;
          bump();
          expect(Tok::Dot, "'.'");
          FormulaPtr body = parse_iff();  // scope extends maximally right
          return with_pos(uni ? f_forall(var, body) : f_exists(var, body), pos);
        }
        return parse_atom_starting_with_name();
      }
      case Tok::At: {
        Term t1 = parse_term();
        return parse_infix_tail(t1, pos);
      }
      case Tok::Bang: {
        bump();
        return with_pos(f_not(parse_primary()), pos);
      }
      case Tok::LParen: {
        bump();
        FormulaPtr inner = parse_iff();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError(cur.pos, "expected a formula");
    }
  }

  FormulaPtr parse_and() {
    FormulaPtr lhs = parse_primary();
    while (cur.kind == Tok::Amp) {
      SourcePos p = cur.pos;
      bump();
      lhs = with_pos(f_and(lhs, parse_primary()), p);
    }
    return lhs;
  }
  FormulaPtr parse_or() {
    FormulaPtr lhs = parse_and();
    while (cur.kind == Tok::Pipe) {
      SourcePos p = cur.pos;
      bump();
      lhs = with_pos(f_or(lhs, parse_and()), p);
    }
    return lhs;
  }
  FormulaPtr parse_implies() {
    FormulaPtr lhs = parse_or();
    if (cur.kind == Tok::Arrow) {
      SourcePos p = cur.pos;
      bump();
      return with_pos(f_implies(lhs, parse_implies()), p);  // right-assoc
    }
    return lhs;
  }
  FormulaPtr parse_iff() {
    FormulaPtr lhs = parse_implies();
    if (cur.kind == Tok::DArrow) {
      SourcePos p = cur.pos;
      bump();
      return with_pos(f_iff(lhs, parse_iff()), p);  // right-assoc
    }
    return lhs;
  }

  FormulaPtr parse_sentence() {
    FormulaPtr f = parse_iff();
    if (cur.kind != Tok::End) throw ParseError(cur.pos, "trailing input after formula");
    return f;
  }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Parser p(text);
  return p.parse_sentence();
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

int precedence(Conn c) {
  switch (c) {
    case Conn::Iff: return 1;
    case Conn::Implies: return 2;
    case Conn::Or: return 3;
    case Conn::And: return 4;
    case Conn::Not: return 5;
    default: return 6;  // atoms, constants, quantifiers (printed parenthesised)
  }
}

std::string term_str(const Term& t) {
  switch (t.kind) {
    case Term::X: return "x";
    case Term::Y: return "y";
    default: return "@" + t.name;
  }
}

std::string atom_str(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Unary: return a.sym + "(" + term_str(a.lhs) + ")";
    case AtomKind::Binary:
      return a.sym + "(" + term_str(a.lhs) + "," + term_str(a.rhs) + ")";
    case AtomKind::Less: return term_str(a.lhs) + " < " + term_str(a.rhs);
    case AtomKind::Equals: return term_str(a.lhs) + " = " + term_str(a.rhs);
    case AtomKind::EqLevel:
      return "E" + std::to_string(a.level) + "(" + term_str(a.lhs) + "," + term_str(a.rhs) + ")";
    case AtomKind::PreLevel:
      return "pre" + std::to_string(a.level) + "(" + term_str(a.lhs) + "," + term_str(a.rhs) + ")";
    case AtomKind::SuccLevel:
      return "S" + std::to_string(a.level) + "(" + term_str(a.lhs) + "," + term_str(a.rhs) + ")";
    case AtomKind::FLevel:
      return "F" + std::to_string(a.level) + "(" + term_str(a.lhs) + "," + term_str(a.rhs) + ")";
  }
  return "?";
}

// prec: minimum precedence the context requires. Quantifier bodies extend
// maximally right, so a quantifier below a binary connective needs parens.
void render(const FormulaPtr& f, int prec, std::string& out) {
  switch (f->tag) {
    case Conn::True: out += "true"; return;
    case Conn::False: out += "false"; return;
    case Conn::AtomF: {
      bool need = prec > 5 && (f->atom.kind == AtomKind::Less || f->atom.kind == AtomKind::Equals);
      // infix atoms bind loosely against '<' token ambiguity only in '<->';
      // parenthesise defensively when directly under '!'
      if (need) out += "(";
      out += atom_str(f->atom);
      if (need) out += ")";
      return;
    }
    case Conn::Not:
      out += "!";
      render(f->lhs, 6, out);
      return;
    case Conn::Forall:
    case Conn::Exists: {
      bool need = prec > 1;
      if (need) out += "(";
      out += f->tag == Conn::Forall ? "forall " : "exists ";
      out += f->var == 0 ? "x" : "y";
      out += ". ";
      render(f->lhs, 1, out);
      if (need) out += ")";
      return;
    }
    case Conn::And:
    case Conn::Or:
    case Conn::Implies:
    case Conn::Iff: {
      int p = precedence(f->tag);
      bool need = p < prec;
      if (need) out += "(";
      // left operand: left-assoc connectives allow equal precedence on the
      // left; right-assoc (->, <->) do not.
      bool right_assoc = f->tag == Conn::Implies || f->tag == Conn::Iff;
      render(f->lhs, right_assoc ? p + 1 : p, out);
      switch (f->tag) {
        case Conn::And: out += " & "; break;
        case Conn::Or: out += " | "; break;
        case Conn::Implies: out += " -> "; break;
        default: out += " <-> "; break;
      }
      render(f->rhs, right_assoc ? p : p + 1, out);
      if (need) out += ")";
      return;
    }
  }
}

}  // namespace

std::string render_formula(const FormulaPtr& f) {
  std::string out;
  render(f, 1, out);
  return out;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

namespace {

struct Collect {
  std::set<std::string> unary, binary, constants;
  std::set<int> eq_levels, pre_levels, succ_levels, f_levels;
  bool has_order = false, has_equality = false;
  std::vector<Violation> violations;

  void term(const Term& t) {
    if (t.kind == Term::Constant) constants.insert(t.name);
  }

  void visit(const FormulaPtr& f) {
    switch (f->tag) {
      case Conn::True:
      case Conn::False: return;
      case Conn::AtomF: {
        const Atom& a = f->atom;
        term(a.lhs);
        if (a.kind != AtomKind::Unary) term(a.rhs);
        switch (a.kind) {
          case AtomKind::Unary: unary.insert(a.sym); break;
          case AtomKind::Binary: binary.insert(a.sym); break;
          case AtomKind::Less: has_order = true; break;
          case AtomKind::Equals: has_equality = true; break;
          case AtomKind::EqLevel: eq_levels.insert(a.level); break;
          case AtomKind::PreLevel: pre_levels.insert(a.level); break;
          case AtomKind::SuccLevel: succ_levels.insert(a.level); break;
          case AtomKind::FLevel: f_levels.insert(a.level); break;
        }
        return;
      }
      case Conn::Not:
      case Conn::Forall:
      case Conn::Exists: visit(f->lhs); return;
      default:
        visit(f->lhs);
        visit(f->rhs);
        return;
    }
  }
};

void profile_check(const FormulaPtr& f, LogicId logic, std::vector<Violation>& out) {
  auto bad = [&](SourcePos pos, const std::string& what) {
    out.push_back({pos, what + " not in profile of " + logic_name(logic)});
  };
  switch (f->tag) {
    case Conn::AtomF: {
      const Atom& a = f->atom;
      switch (a.kind) {
        case AtomKind::Less:
          if (logic != LogicId::OrderEq) bad(f->pos, "<");
          break;
        case AtomKind::EqLevel:
          if (logic == LogicId::RawFo2) bad(f->pos, "E" + std::to_string(a.level));
          if (logic == LogicId::TwoFamilies && a.level > 2)
            bad(f->pos, "E" + std::to_string(a.level) + " (two-families allows E1,E2 only)");
          break;
        case AtomKind::PreLevel:
          if (logic != LogicId::Preorder && logic != LogicId::PreorderSucc)
            bad(f->pos, "pre" + std::to_string(a.level));
          break;
        case AtomKind::SuccLevel:
          if (logic != LogicId::PreorderSucc) bad(f->pos, "S" + std::to_string(a.level));
          break;
        case AtomKind::FLevel:
          if (logic != LogicId::TwoFamilies)
            bad(f->pos, "F" + std::to_string(a.level));
          else if (a.level > 2)
            bad(f->pos, "F" + std::to_string(a.level) + " (two-families allows F1,F2 only)");
          break;
        default: break;
      }
      return;
    }
    case Conn::Not:
    case Conn::Forall:
    case Conn::Exists: profile_check(f->lhs, logic, out); return;
    case Conn::True:
    case Conn::False: return;
    default:
      profile_check(f->lhs, logic, out);
      profile_check(f->rhs, logic, out);
      return;
  }
}

}  // namespace

SyntaxReport analyze(const FormulaPtr& f, LogicId logic) {
  SyntaxReport rep;
  Collect c;
  c.visit(f);
  profile_check(f, logic, rep.violations);

  Signature& sig = rep.signature;
  sig.unary.assign(c.unary.begin(), c.unary.end());
  sig.binary.assign(c.binary.begin(), c.binary.end());
  sig.constants.assign(c.constants.begin(), c.constants.end());
  sig.has_order = c.has_order;

  // Presence closure: Sk -> prek -> Ek.
  std::set<int> pre = c.pre_levels;
  pre.insert(c.succ_levels.begin(), c.succ_levels.end());
  std::set<int> eq = c.eq_levels;
  if (logic == LogicId::Preorder || logic == LogicId::PreorderSucc) {
    // Ek is induced by prek in these logics; track them jointly.
    pre.insert(eq.begin(), eq.end());
    eq = pre;
  } else {
    eq.insert(pre.begin(), pre.end());
  }
  sig.used_eq_levels = eq;
  sig.used_pre_levels = pre;
  sig.has_pre = !pre.empty();
  sig.has_succ = !c.succ_levels.empty();
  sig.levels = eq.empty() ? 0 : *eq.rbegin();
  sig.f_levels = c.f_levels.empty() ? 0 : *c.f_levels.rbegin();

  rep.fragment_flags.constant_free = c.constants.empty();
  rep.fragment_flags.equality_free = !c.has_equality;
  rep.fragment_flags.monadic_common = c.binary.empty();

  rep.conformant = rep.violations.empty();
  return rep;
}

}  // namespace nesteq
