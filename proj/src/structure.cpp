#include "nesteq/structure.hpp"

#include <algorithm>
#include <map>

#include "nesteq/types.hpp"

namespace nesteq {

Structure Structure::empty(const Signature& sig, int n, bool with_pre) {
  Structure s;
  s.sig = sig;
  s.n = n;
  s.has_order = sig.has_order;
  s.eq.assign(sig.levels, std::vector<int>(n, 0));
  if (with_pre || sig.has_pre) s.pre.assign(sig.levels, std::vector<int>(n, 0));
  s.feq.assign(sig.f_levels, std::vector<int>(n, 0));
  s.unary.assign(sig.unary.size(), std::vector<uint8_t>(n, 0));
  s.binary.assign(sig.binary.size(), std::vector<uint8_t>(size_t(n) * n, 0));
  return s;
}

// ---------------------------------------------------------------------------
// validate_structure
// ---------------------------------------------------------------------------

namespace {

void check_refinement(const std::vector<std::vector<int>>& levels, int n,
                      const char* family, ValidationReport& rep) {
  for (size_t k = 0; k + 1 < levels.size(); ++k) {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        if (levels[k][a] == levels[k][b] && levels[k + 1][a] != levels[k + 1][b]) {
          rep.ok = false;
          rep.failures.push_back({std::string(family) + "-nestedness level " +
                                      std::to_string(k + 1) + " vs " + std::to_string(k + 2),
                                  {a, b}});
          return;  // one witness per level pair suffices
        }
  }
}

}  // namespace

ValidationReport validate_structure(const Structure& s, LogicId logic) {
  ValidationReport rep;
  const int n = s.n;
  const int K = s.levels();

  for (const auto& lv : s.eq)
    if (int(lv.size()) != n) {
      rep.ok = false;
      rep.failures.push_back({"eq-level size mismatch", {}});
      return rep;
    }
  for (const auto& lv : s.pre)
    if (int(lv.size()) != n) {
      rep.ok = false;
      rep.failures.push_back({"pre-level size mismatch", {}});
      return rep;
    }

  check_refinement(s.eq, n, "eq", rep);
  check_refinement(s.feq, n, "feq", rep);

  if (s.has_pre()) {
    if (int(s.pre.size()) != K) {
      rep.ok = false;
      rep.failures.push_back({"pre levels must match eq levels", {}});
      return rep;
    }
    for (int k = 1; k <= K; ++k) {
      const auto& lv = s.pre[k - 1];
      // alignment: labels monotone non-decreasing in element index,
      // contiguous from 0
      for (int a = 0; a + 1 < n; ++a) {
        if (lv[a + 1] < lv[a] || lv[a + 1] > lv[a] + 1) {
          rep.ok = false;
          rep.failures.push_back({"pre-alignment level " + std::to_string(k), {a, a + 1}});
          break;
        }
      }
      if (n > 0 && lv[0] != 0) {
        rep.ok = false;
        rep.failures.push_back({"pre-levels must start at 0, level " + std::to_string(k), {0}});
      }
      // compatibility: same pre level <-> same eq class
      for (int a = 0; a < n && rep.ok; ++a)
        for (int b = a + 1; b < n; ++b)
          if ((lv[a] == lv[b]) != (s.eq[k - 1][a] == s.eq[k - 1][b])) {
            rep.ok = false;
            rep.failures.push_back({"pre/eq compatibility level " + std::to_string(k), {a, b}});
            break;
          }
    }
    // preorder nesting: x preceq_k y -> x preceq_k+1 y
    for (int k = 1; k < K; ++k)
      for (int a = 0; a < n && rep.ok; ++a)
        for (int b = 0; b < n; ++b)
          if (s.pre_at(k, a, b) && !s.pre_at(k + 1, a, b)) {
            rep.ok = false;
            rep.failures.push_back({"pre-nesting level " + std::to_string(k), {a, b}});
            break;
          }
  }

  if ((logic == LogicId::Preorder || logic == LogicId::PreorderSucc) && K > 0) {
    if (!s.has_pre()) {
      rep.ok = false;
      rep.failures.push_back({"preorder logic requires pre labels", {}});
      return rep;
    }
    // Interval property sanity check: each Ek-class is contiguous in the
    // element order. Holds by the label representation.
    for (int k = 1; k <= K; ++k)
      for (int a = 0; a + 2 < n && rep.ok; ++a)
        for (int c = a + 2; c < n; ++c)
          if (s.eq_at(k, a, c))
            for (int b = a + 1; b < c; ++b)
              if (!s.eq_at(k, a, b)) {
                rep.ok = false;
                rep.failures.push_back({"interval property level " + std::to_string(k), {a, b, c}});
                break;
              }
  }

  for (const auto& [name, e] : s.constants)
    if (e < 0 || e >= n) {
      rep.ok = false;
      rep.failures.push_back({"constant '" + name + "' out of range", {e}});
    }

  return rep;
}

// ---------------------------------------------------------------------------
// evaluate (interpretive path)
// ---------------------------------------------------------------------------

namespace {

int term_elem(const Structure& s, const Term& t, const Valuation& v) {
  switch (t.kind) {
    case Term::X:
      if (!v.x) throw EvalError("unassigned free variable x");
      return *v.x;
    case Term::Y:
      if (!v.y) throw EvalError("unassigned free variable y");
      return *v.y;
    default: {
      auto it = s.constants.find(t.name);
      if (it == s.constants.end())
        throw EvalError("constant '@" + t.name + "' absent from structure");
      return it->second;
    }
  }
}

bool atom_truth(const Structure& s, const Atom& at, const Valuation& v) {
  int a = term_elem(s, at.lhs, v);
  switch (at.kind) {
    case AtomKind::Unary: {
      int idx = s.sig.unary_index(at.sym);
      if (idx < 0) throw EvalError("unary symbol '" + at.sym + "' absent from structure");
      return s.uval(idx, a);
    }
    case AtomKind::Binary: {
      int idx = s.sig.binary_index(at.sym);
      if (idx < 0) throw EvalError("binary symbol '" + at.sym + "' absent from structure");
      return s.bval(idx, a, term_elem(s, at.rhs, v));
    }
    case AtomKind::Less: {
      if (!s.has_order) throw EvalError("order symbol '<' absent from structure");
      return a < term_elem(s, at.rhs, v);
    }
    case AtomKind::Equals:
      return a == term_elem(s, at.rhs, v);
    case AtomKind::EqLevel: {
      if (at.level > s.levels()) throw EvalError("E" + std::to_string(at.level) + " absent from structure");
      return s.eq_at(at.level, a, term_elem(s, at.rhs, v));
    }
    case AtomKind::PreLevel: {
      if (!s.has_pre() || at.level > s.levels())
        throw EvalError("pre" + std::to_string(at.level) + " absent from structure");
      return s.pre_at(at.level, a, term_elem(s, at.rhs, v));
    }
    case AtomKind::SuccLevel: {
      if (!s.has_pre() || at.level > s.levels())
        throw EvalError("S" + std::to_string(at.level) + " absent from structure");
      return s.succ_at(at.level, a, term_elem(s, at.rhs, v));
    }
    case AtomKind::FLevel: {
      if (at.level > int(s.feq.size()))
        throw EvalError("F" + std::to_string(at.level) + " absent from structure");
      return s.feq_at(at.level, a, term_elem(s, at.rhs, v));
    }
  }
  return false;
}

}  // namespace

bool evaluate(const Structure& s, const FormulaPtr& f, const Valuation& v) {
  switch (f->tag) {
    case Conn::True: return true;
    case Conn::False: return false;
    case Conn::AtomF: return atom_truth(s, f->atom, v);
    case Conn::Not: return !evaluate(s, f->lhs, v);
    case Conn::And: return evaluate(s, f->lhs, v) && evaluate(s, f->rhs, v);
    case Conn::Or: return evaluate(s, f->lhs, v) || evaluate(s, f->rhs, v);
    case Conn::Implies: return !evaluate(s, f->lhs, v) || evaluate(s, f->rhs, v);
    case Conn::Iff: return evaluate(s, f->lhs, v) == evaluate(s, f->rhs, v);
    case Conn::Forall: {
      Valuation w = v;
      auto& slot = f->var == 0 ? w.x : w.y;
      for (int e = 0; e < s.n; ++e) {
        slot = e;
        if (!evaluate(s, f->lhs, w)) return false;
      }
      return true;
    }
    case Conn::Exists: {
      Valuation w = v;
      auto& slot = f->var == 0 ? w.x : w.y;
      for (int e = 0; e < s.n; ++e) {
        slot = e;
        if (evaluate(s, f->lhs, w)) return true;
      }
      return false;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// CompiledFormula
// ---------------------------------------------------------------------------

CompiledFormula::CompiledFormula(const FormulaPtr& f, const Signature& sig) {
  root_ = flatten(f, sig);
}

int CompiledFormula::flatten(const FormulaPtr& f, const Signature& sig) {
  Node nd;
  nd.tag = f->tag;
  nd.var = f->var;
  if (f->tag == Conn::AtomF) {
    const Atom& a = f->atom;
    nd.akind = a.kind;
    auto termcode = [&](const Term& t) -> int {
      if (t.kind == Term::X) return -2;
      if (t.kind == Term::Y) return -3;
      consts_.push_back(t.name);
      return int(consts_.size()) - 1;
    };
    nd.cl = termcode(a.lhs);
    nd.cr = a.kind == AtomKind::Unary ? -1 : termcode(a.rhs);
    switch (a.kind) {
      case AtomKind::Unary:
        nd.sym = sig.unary_index(a.sym);
        if (nd.sym < 0) throw EvalError("unary symbol '" + a.sym + "' not in signature");
        break;
      case AtomKind::Binary:
        nd.sym = sig.binary_index(a.sym);
        if (nd.sym < 0) throw EvalError("binary symbol '" + a.sym + "' not in signature");
        break;
      default:
        nd.sym = a.level;
        break;
    }
  }
  int lhs = -1, rhs = -1;
  if (f->lhs) lhs = flatten(f->lhs, sig);
  if (f->rhs) rhs = flatten(f->rhs, sig);
  nd.lhs = lhs;
  nd.rhs = rhs;
  nodes_.push_back(nd);
  return int(nodes_.size()) - 1;
}

int CompiledFormula::resolve_term(const Structure& s, int code, int a, int b) const {
  if (code == -2) {
    if (a < 0) throw EvalError("unassigned free variable x");
    return a;
  }
  if (code == -3) {
    if (b < 0) throw EvalError("unassigned free variable y");
    return b;
  }
  auto it = s.constants.find(consts_[code]);
  if (it == s.constants.end())
    throw EvalError("constant '@" + consts_[code] + "' absent from structure");
  return it->second;
}

bool CompiledFormula::eval_node(const Structure& s, int limit, int idx, int a, int b) const {
  const Node& nd = nodes_[idx];
  switch (nd.tag) {
    case Conn::True: return true;
    case Conn::False: return false;
    case Conn::AtomF: {
      int e1 = resolve_term(s, nd.cl, a, b);
      switch (nd.akind) {
        case AtomKind::Unary: return s.uval(nd.sym, e1);
        case AtomKind::Binary: return s.bval(nd.sym, e1, resolve_term(s, nd.cr, a, b));
        case AtomKind::Less: return e1 < resolve_term(s, nd.cr, a, b);
        case AtomKind::Equals: return e1 == resolve_term(s, nd.cr, a, b);
        case AtomKind::EqLevel: return s.eq_at(nd.sym, e1, resolve_term(s, nd.cr, a, b));
        case AtomKind::PreLevel: return s.pre_at(nd.sym, e1, resolve_term(s, nd.cr, a, b));
        case AtomKind::SuccLevel: return s.succ_at(nd.sym, e1, resolve_term(s, nd.cr, a, b));
        case AtomKind::FLevel: return s.feq_at(nd.sym, e1, resolve_term(s, nd.cr, a, b));
      }
      return false;
    }
    case Conn::Not: return !eval_node(s, limit, nd.lhs, a, b);
    case Conn::And:
      return eval_node(s, limit, nd.lhs, a, b) && eval_node(s, limit, nd.rhs, a, b);
    case Conn::Or:
      return eval_node(s, limit, nd.lhs, a, b) || eval_node(s, limit, nd.rhs, a, b);
    case Conn::Implies:
      return !eval_node(s, limit, nd.lhs, a, b) || eval_node(s, limit, nd.rhs, a, b);
    case Conn::Iff:
      return eval_node(s, limit, nd.lhs, a, b) == eval_node(s, limit, nd.rhs, a, b);
    case Conn::Forall: {
      for (int e = 0; e < limit; ++e) {
        bool ok = nd.var == 0 ? eval_node(s, limit, nd.lhs, e, b)
                              : eval_node(s, limit, nd.lhs, a, e);
        if (!ok) return false;
      }
      return true;
    }
    case Conn::Exists: {
      for (int e = 0; e < limit; ++e) {
        bool ok = nd.var == 0 ? eval_node(s, limit, nd.lhs, e, b)
                              : eval_node(s, limit, nd.lhs, a, e);
        if (ok) return true;
      }
      return false;
    }
  }
  return false;
}

bool CompiledFormula::eval(const Structure& s, int a, int b) const {
  return eval_node(s, s.n, root_, a, b);
}

bool CompiledFormula::eval_limited(const Structure& s, int limit, int a, int b) const {
  return eval_node(s, limit, root_, a, b);
}

// ---------------------------------------------------------------------------
// type extraction, induced successor, reduct
// ---------------------------------------------------------------------------

OneType one_type_of(const Structure& s, int a) {
  if (a < 0 || a >= s.n) throw EvalError("element out of range");
  TypeLayout lay(s.sig);
  OneType t;
  for (int i = 0; i < lay.u; ++i) t.set(i, s.uval(i, a));
  for (int i = 0; i < lay.b; ++i) t.set(lay.u + i, s.bval(i, a, a));
  return t;
}

TwoType two_type_of(const Structure& s, int a, int b) {
  if (a == b) throw EvalError("2-types are over distinct elements");
  TypeLayout lay(s.sig);
  TwoType t;
  t.tx = one_type_of(s, a);
  t.ty = one_type_of(s, b);
  for (int i = 0; i < lay.b; ++i) {
    t.set(lay.bit_rxy(i), s.bval(i, a, b));
    t.set(lay.bit_ryx(i), s.bval(i, b, a));
  }
  if (lay.order) {
    t.set(lay.bit_xlty(), a < b);
    t.set(lay.bit_yltx(), b < a);
  }
  for (int k = 1; k <= lay.K; ++k) {
    t.set(lay.bit_eq(k), s.eq_at(k, a, b));
    if (lay.pre) {
      t.set(lay.bit_xpy(k), s.pre_at(k, a, b));
      t.set(lay.bit_ypx(k), s.pre_at(k, b, a));
      t.set(lay.bit_sxy(k), s.succ_at(k, a, b));
      t.set(lay.bit_syx(k), s.succ_at(k, b, a));
    }
  }
  for (int k = 1; k <= lay.fK; ++k) t.set(lay.bit_f(k), s.feq_at(k, a, b));
  return t;
}

std::vector<std::pair<int, int>> induced_successor(const Structure& s, int k) {
  if (k < 1 || k > int(s.pre.size())) throw EvalError("preorder level absent");
  std::vector<std::pair<int, int>> out;
  for (int a = 0; a < s.n; ++a)
    for (int b = 0; b < s.n; ++b)
      if (s.pre[k - 1][b] == s.pre[k - 1][a] + 1) out.emplace_back(a, b);
  return out;
}

Structure reduct(const Structure& s, const Signature& sig) {
  if (!sig.subset_of(s.sig)) throw EvalError("reduct target is not a sub-signature");
  Structure r;
  r.sig = sig;
  r.n = s.n;
  r.has_order = sig.has_order;
  r.eq.assign(s.eq.begin(), s.eq.begin() + sig.levels);
  if (sig.has_pre) r.pre.assign(s.pre.begin(), s.pre.begin() + sig.levels);
  r.feq.assign(s.feq.begin(), s.feq.begin() + sig.f_levels);
  r.unary.reserve(sig.unary.size());
  for (const auto& name : sig.unary) r.unary.push_back(s.unary[s.sig.unary_index(name)]);
  for (const auto& name : sig.binary) r.binary.push_back(s.binary[s.sig.binary_index(name)]);
  for (const auto& name : sig.constants) {
    auto it = s.constants.find(name);
    if (it == s.constants.end()) throw EvalError("constant '" + name + "' absent from structure");
    r.constants[name] = it->second;
  }
  return r;
}

}  // namespace nesteq
