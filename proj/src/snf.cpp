#include "nesteq/snf.hpp"

#include <algorithm>
#include <set>

namespace nesteq {

FormulaPtr SnfSentence::as_formula() const {
  std::vector<FormulaPtr> parts;
  parts.push_back(f_forall(0, f_forall(1, psi0)));
  for (const auto& ps : skolem) parts.push_back(f_forall(0, f_exists(1, ps)));
  return f_and_all(parts);
}

// ---------------------------------------------------------------------------
// swap_vars / renumber_levels
// ---------------------------------------------------------------------------

static Term swap_term(const Term& t) {
  if (t.kind == Term::X) return term_y();
  if (t.kind == Term::Y) return term_x();
  return t;
}

FormulaPtr swap_vars(const FormulaPtr& f) {
  switch (f->tag) {
    case Conn::True:
    case Conn::False: return f;
    case Conn::AtomF: {
      Atom a = f->atom;
      a.lhs = swap_term(a.lhs);
      if (a.kind != AtomKind::Unary) a.rhs = swap_term(a.rhs);
      return f_atom(a);
    }
    case Conn::Not: return f_not(swap_vars(f->lhs));
    case Conn::Forall: return f_forall(1 - f->var, swap_vars(f->lhs));
    case Conn::Exists: return f_exists(1 - f->var, swap_vars(f->lhs));
    case Conn::And: return f_and(swap_vars(f->lhs), swap_vars(f->rhs));
    case Conn::Or: return f_or(swap_vars(f->lhs), swap_vars(f->rhs));
    case Conn::Implies: return f_implies(swap_vars(f->lhs), swap_vars(f->rhs));
    case Conn::Iff: return f_iff(swap_vars(f->lhs), swap_vars(f->rhs));
  }
  return f;
}

static FormulaPtr map_levels(const FormulaPtr& f, const std::map<int, int>& emap) {
  switch (f->tag) {
    case Conn::True:
    case Conn::False: return f;
    case Conn::AtomF: {
      Atom a = f->atom;
      if (a.kind == AtomKind::EqLevel || a.kind == AtomKind::PreLevel ||
          a.kind == AtomKind::SuccLevel) {
        auto it = emap.find(a.level);
        if (it != emap.end()) a.level = it->second;
      }
      return f_atom(a);
    }
    case Conn::Not: return f_not(map_levels(f->lhs, emap));
    case Conn::Forall: return f_forall(f->var, map_levels(f->lhs, emap));
    case Conn::Exists: return f_exists(f->var, map_levels(f->lhs, emap));
    case Conn::And: return f_and(map_levels(f->lhs, emap), map_levels(f->rhs, emap));
    case Conn::Or: return f_or(map_levels(f->lhs, emap), map_levels(f->rhs, emap));
    case Conn::Implies:
      return f_implies(map_levels(f->lhs, emap), map_levels(f->rhs, emap));
    case Conn::Iff: return f_iff(map_levels(f->lhs, emap), map_levels(f->rhs, emap));
  }
  return f;
}

static std::map<int, int> level_renumbering(const FormulaPtr& f, LogicId logic) {
  SyntaxReport rep = analyze(f, logic);
  std::map<int, int> emap;
  int next = 1;
  for (int raw : rep.signature.used_eq_levels) emap[raw] = next++;
  return emap;
}

FormulaPtr renumber_levels(const FormulaPtr& f, LogicId logic) {
  auto emap = level_renumbering(f, logic);
  bool identity = true;
  for (const auto& [a, b] : emap)
    if (a != b) identity = false;
  if (identity) return f;
  return map_levels(f, emap);
}

// ---------------------------------------------------------------------------
// constant_elimination
// ---------------------------------------------------------------------------

namespace {

std::string const_pred(const std::string& name) { return "_c" + name; }

// Rewrites one atom, guarding each constant position with the fresh unary
// predicate. The guard variable is chosen distinct from the atom's own
// variable; requantification of an outer variable is legal FO2.
FormulaPtr guard_atom(const Atom& a) {
  // collect constant positions
  bool lc = a.lhs.kind == Term::Constant;
  bool rc = a.kind != AtomKind::Unary && a.rhs.kind == Term::Constant;
  if (!lc && !rc) return f_atom(a);

  // Equality with one variable side needs no quantifier: @a = v  =>  _ca(v).
  if (a.kind == AtomKind::Equals && lc != rc) {
    const Term& cv = lc ? a.lhs : a.rhs;
    const Term& vv = lc ? a.rhs : a.lhs;
    return f_atom(atom_unary(const_pred(cv.name), vv));
  }

  // Otherwise pick guard variables avoiding the variable already used.
  int used_var = -1;  // 0 = x, 1 = y
  if (a.lhs.kind == Term::X || (a.kind != AtomKind::Unary && a.rhs.kind == Term::X))
    used_var = 0;
  if (a.lhs.kind == Term::Y || (a.kind != AtomKind::Unary && a.rhs.kind == Term::Y))
    used_var = 1;

  Atom core = a;
  FormulaPtr result;
  if (lc && rc) {
    // both positions constant: guard left with x, right with y
    std::string cl = a.lhs.name, cr = a.rhs.name;
    core.lhs = term_x();
    core.rhs = term_y();
    result = f_forall(
        0, f_implies(f_atom(atom_unary(const_pred(cl), term_x())),
                     f_forall(1, f_implies(f_atom(atom_unary(const_pred(cr), term_y())),
                                           f_atom(core)))));
  } else {
    int guard = used_var == 0 ? 1 : 0;  // the other variable
    Term gt = guard == 0 ? term_x() : term_y();
    std::string cn = lc ? a.lhs.name : a.rhs.name;
    if (lc) core.lhs = gt; else core.rhs = gt;
    result = f_forall(guard, f_implies(f_atom(atom_unary(const_pred(cn), gt)), f_atom(core)));
  }
  return result;
}

FormulaPtr rewrite_constants(const FormulaPtr& f) {
  switch (f->tag) {
    case Conn::True:
    case Conn::False: return f;
    case Conn::AtomF: return guard_atom(f->atom);
    case Conn::Not: return f_not(rewrite_constants(f->lhs));
    case Conn::Forall: return f_forall(f->var, rewrite_constants(f->lhs));
    case Conn::Exists: return f_exists(f->var, rewrite_constants(f->lhs));
    case Conn::And: return f_and(rewrite_constants(f->lhs), rewrite_constants(f->rhs));
    case Conn::Or: return f_or(rewrite_constants(f->lhs), rewrite_constants(f->rhs));
    case Conn::Implies:
      return f_implies(rewrite_constants(f->lhs), rewrite_constants(f->rhs));
    case Conn::Iff: return f_iff(rewrite_constants(f->lhs), rewrite_constants(f->rhs));
  }
  return f;
}

}  // namespace

FormulaPtr constant_elimination(const FormulaPtr& f, bool equality_allowed) {
  SyntaxReport rep = analyze(f, LogicId::TwoFamilies);  // signature only
  const auto& consts = rep.signature.constants;
  if (consts.empty()) return f;
  if (!equality_allowed)
    throw InputError("constant used in an equality-free fragment request");

  FormulaPtr out = rewrite_constants(f);
  for (const auto& c : consts) {
    std::string p = const_pred(c);
    FormulaPtr existence = f_exists(0, f_atom(atom_unary(p, term_x())));
    FormulaPtr uniqueness = f_forall(
        0, f_forall(1, f_implies(f_and(f_atom(atom_unary(p, term_x())),
                                       f_atom(atom_unary(p, term_y()))),
                                 f_atom(atom_equals(term_x(), term_y())))));
    out = f_and(f_and(out, existence), uniqueness);
  }
  return out;
}

// ---------------------------------------------------------------------------
// to_snf
// ---------------------------------------------------------------------------

namespace {

bool is_quantifier_free(const FormulaPtr& f) {
  switch (f->tag) {
    case Conn::True:
    case Conn::False: return true;
    case Conn::AtomF: return true;
    case Conn::Not: return is_quantifier_free(f->lhs);
    case Conn::Forall:
    case Conn::Exists: return false;
    default: return is_quantifier_free(f->lhs) && is_quantifier_free(f->rhs);
  }
}

void free_vars(const FormulaPtr& f, bool bound[2], bool out[2]) {
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
    case Conn::Not: free_vars(f->lhs, bound, out); return;
    case Conn::Forall:
    case Conn::Exists: {
      bool b2[2] = {bound[0], bound[1]};
      b2[f->var] = true;
      free_vars(f->lhs, b2, out);
      return;
    }
    default:
      free_vars(f->lhs, bound, out);
      free_vars(f->rhs, bound, out);
      return;
  }
}

struct SnfBuilder {
  std::vector<FormulaPtr> psi0_parts;
  std::vector<FormulaPtr> skolems;
  std::map<std::string, std::string> provenance;
  int fresh_count = 0;

  std::string fresh(const FormulaPtr& src) {
    std::string name = "_d" + std::to_string(fresh_count++);
    provenance[name] = render_formula(src);
    return name;
  }

  // Names one quantified node Qv.chi where chi is already quantifier-free.
  // Returns the replacement atom, over the node's own free variable.
  FormulaPtr name_quantified(const FormulaPtr& node) {
    bool uni = node->tag == Conn::Forall;
    bool bound[2] = {false, false};
    bound[node->var] = true;
    bool fv[2] = {false, false};
    free_vars(node->lhs, bound, fv);

    // Normalise the defining conjuncts so the bound variable is y.
    FormulaPtr chi = node->var == 0 ? swap_vars(node->lhs) : node->lhs;

    std::string p = fresh(node);
    FormulaPtr px = f_atom(atom_unary(p, term_x()));
    FormulaPtr py = f_atom(atom_unary(p, term_y()));

    if (fv[0] || fv[1]) {
      // p(x) <-> Qy chi(x,y); after normalisation the free variable is x.
      if (!uni) {
        psi0_parts.push_back(f_implies(chi, px));          // chi -> p(x)
        skolems.push_back(f_implies(px, chi));             // p(x) -> exists y chi
      } else {
        psi0_parts.push_back(f_implies(px, chi));          // p(x) -> forall y chi
        skolems.push_back(f_or(px, f_not(chi)));           // !p(x) -> exists y !chi
      }
      // In the enclosing context p applies to the original free variable.
      return fv[0] ? px : py;
    }

    // Sentence subformula: p is uniform; chi uses y only (or nothing).
    psi0_parts.push_back(f_implies(px, py));  // uniformity
    if (!uni) {
      psi0_parts.push_back(f_implies(chi, px));  // any witness -> p everywhere
      skolems.push_back(f_implies(px, chi));
    } else {
      psi0_parts.push_back(f_implies(px, chi));
      skolems.push_back(f_or(px, f_not(chi)));
    }
    return px;
  }

  // Bottom-up renaming; returns a quantifier-free formula.
  FormulaPtr rewrite(const FormulaPtr& f) {
    switch (f->tag) {
      case Conn::True:
      case Conn::False:
      case Conn::AtomF: return f;
      case Conn::Not: return f_not(rewrite(f->lhs));
      case Conn::And: return f_and(rewrite(f->lhs), rewrite(f->rhs));
      case Conn::Or: return f_or(rewrite(f->lhs), rewrite(f->rhs));
      case Conn::Implies: return f_implies(rewrite(f->lhs), rewrite(f->rhs));
      case Conn::Iff: return f_iff(rewrite(f->lhs), rewrite(f->rhs));
      case Conn::Forall:
      case Conn::Exists: {
        FormulaPtr inner = rewrite(f->lhs);
        FormulaPtr node = f->tag == Conn::Forall ? f_forall(f->var, inner)
                                                 : f_exists(f->var, inner);
        return name_quantified(node);
      }
    }
    return f;
  }

  // Shape matcher for conjuncts already in SNF form. Returns true if the
  // conjunct was consumed.
  bool try_shape(const FormulaPtr& f) {
    if (is_quantifier_free(f)) {
      // Free variables in a conjunct position are read universally.
      psi0_parts.push_back(f);
      return true;
    }
    if (f->tag == Conn::Forall) {
      const FormulaPtr& body = f->lhs;
      if (body->tag == Conn::Forall && body->var != f->var &&
          is_quantifier_free(body->lhs)) {
        psi0_parts.push_back(body->lhs);
        return true;
      }
      if (body->tag == Conn::Exists && body->var != f->var &&
          is_quantifier_free(body->lhs)) {
        FormulaPtr sk = body->lhs;
        if (f->var == 1) sk = swap_vars(sk);  // outer variable becomes x
        skolems.push_back(sk);
        return true;
      }
      if (is_quantifier_free(body)) {
        bool bound[2] = {false, false};
        bound[f->var] = true;
        bool fv[2] = {false, false};
        free_vars(body, bound, fv);
        if (!fv[0] && !fv[1]) {
          psi0_parts.push_back(body);  // forall v. chi(v) goes into psi0
          return true;
        }
      }
      return false;
    }
    if (f->tag == Conn::Exists && is_quantifier_free(f->lhs)) {
      bool bound[2] = {false, false};
      bound[f->var] = true;
      bool fv[2] = {false, false};
      free_vars(f->lhs, bound, fv);
      if (!fv[0] && !fv[1]) {
        // exists v. chi(v)  ==  forall x. exists y. chi(y) on nonempty domains
        FormulaPtr sk = f->var == 0 ? swap_vars(f->lhs) : f->lhs;
        skolems.push_back(sk);
        return true;
      }
      return false;
    }
    return false;
  }
};

void split_conjuncts(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->tag == Conn::And) {
    split_conjuncts(f->lhs, out);
    split_conjuncts(f->rhs, out);
    return;
  }
  out.push_back(f);
}

}  // namespace

SnfSentence to_snf(const FormulaPtr& f, LogicId logic) {
  SyntaxReport rep0 = analyze(f, logic);
  if (!rep0.conformant) {
    std::string msg = "non-conformant input:";
    for (const auto& v : rep0.violations) msg += " " + v.rule + ";";
    throw InputError(msg);
  }

  FormulaPtr work = f;
  if (!rep0.signature.constants.empty()) work = constant_elimination(work);
  std::map<int, int> lmap = level_renumbering(work, logic);
  work = renumber_levels(work, logic);

  SnfBuilder b;
  std::vector<FormulaPtr> conjuncts;
  split_conjuncts(work, conjuncts);
  for (const auto& cj : conjuncts) {
    if (b.try_shape(cj)) continue;
    FormulaPtr core = b.rewrite(cj);
    b.psi0_parts.push_back(core);
  }

  SnfSentence out;
  out.psi0 = f_and_all(b.psi0_parts);
  out.skolem = b.skolems;
  out.M = int(b.skolems.size());
  out.logic = logic;
  out.provenance = std::move(b.provenance);
  out.source = f;
  out.processed = work;
  out.level_map = std::move(lmap);
  SyntaxReport rep = analyze(out.as_formula(), logic);
  out.signature = rep.signature;
  out.K = rep.signature.levels;
  return out;
}

}  // namespace nesteq
