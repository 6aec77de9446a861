#include "nesteq/types.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace nesteq {

TwoType mirror(const TwoType& t, const TypeLayout& lay) {
  TwoType m;
  m.tx = t.ty;
  m.ty = t.tx;
  for (int i = 0; i < lay.b; ++i) {
    m.set(lay.bit_rxy(i), t.get(lay.bit_ryx(i)));
    m.set(lay.bit_ryx(i), t.get(lay.bit_rxy(i)));
  }
  if (lay.order) {
    m.set(lay.bit_xlty(), t.get(lay.bit_yltx()));
    m.set(lay.bit_yltx(), t.get(lay.bit_xlty()));
  }
  for (int k = 1; k <= lay.K; ++k) {
    m.set(lay.bit_eq(k), t.get(lay.bit_eq(k)));
    if (lay.pre) {
      m.set(lay.bit_xpy(k), t.get(lay.bit_ypx(k)));
      m.set(lay.bit_ypx(k), t.get(lay.bit_xpy(k)));
      m.set(lay.bit_sxy(k), t.get(lay.bit_syx(k)));
      m.set(lay.bit_syx(k), t.get(lay.bit_sxy(k)));
    }
  }
  for (int k = 1; k <= lay.fK; ++k) m.set(lay.bit_f(k), t.get(lay.bit_f(k)));
  return m;
}

std::vector<OneType> enumerate_one_types(const Signature& sig) {
  if (!sig.constants.empty())
    throw std::invalid_argument("1-type enumeration requires a constant-free signature");
  TypeLayout lay(sig);
  int w = lay.one_width();
  if (w > 24) throw std::invalid_argument("signature too wide for type enumeration");
  std::vector<OneType> out;
  out.reserve(size_t(1) << w);
  for (uint32_t bits = 0; bits < (uint32_t(1) << w); ++bits) out.push_back(OneType{bits});
  return out;
}

void apply_aligned_frame(TwoType& t, const TypeLayout& lay, int p, int q) {
  // q = min level with Ek (K+1 when none); Sk(x,y) holds for p <= k < q.
  for (int k = 1; k <= lay.K; ++k) {
    bool e = q <= k;
    t.set(lay.bit_eq(k), e);
    if (lay.pre) {
      t.set(lay.bit_xpy(k), true);
      t.set(lay.bit_ypx(k), e);
      t.set(lay.bit_sxy(k), p <= k && k < q);
      t.set(lay.bit_syx(k), false);
    }
  }
}

namespace {

// Enumerates the free common-binary cross bits on top of a fixed frame.
void expand_binaries(const TwoType& base, const TypeLayout& lay, std::vector<TwoType>& out) {
  int nb = 2 * lay.b;
  for (uint32_t bits = 0; bits < (uint32_t(1) << nb); ++bits) {
    TwoType t = base;
    for (int i = 0; i < nb; ++i) t.set(i, (bits >> i) & 1u);
    out.push_back(t);
  }
}

}  // namespace

std::vector<TwoType> enumerate_two_types(const OneType& a1, const OneType& a2,
                                         const Signature& sig, LogicId logic,
                                         bool aligned_only) {
  TypeLayout lay(sig);
  std::vector<TwoType> out;
  TwoType base;
  base.tx = a1;
  base.ty = a2;

  const bool has_pre = lay.pre && lay.K > 0;
  const bool has_eq = lay.K > 0;

  if (logic == LogicId::TwoFamilies) {
    // Two independent nested families; frame = up-set patterns per family.
    for (int qe = 1; qe <= lay.K + 1; ++qe)
      for (int qf = 1; qf <= lay.fK + 1; ++qf) {
        TwoType t = base;
        for (int k = 1; k <= lay.K; ++k) t.set(lay.bit_eq(k), qe <= k);
        for (int k = 1; k <= lay.fK; ++k) t.set(lay.bit_f(k), qf <= k);
        expand_binaries(t, lay, out);
      }
    return out;
  }

  if (has_pre) {
    // Aligned: x preceq_k y at every level. q = min Ek level, S band [p, q).
    for (int q = 1; q <= lay.K + 1; ++q)
      for (int p = 1; p <= q; ++p) {
        TwoType t = base;
        apply_aligned_frame(t, lay, p, q);
        expand_binaries(t, lay, out);
      }
    if (!aligned_only) {
      size_t aligned_count = out.size();
      // Anti-aligned types are mirrors of aligned ones with the endpoint
      // types swapped; skip the fully symmetric ones (q = 1: all-equivalent)
      for (size_t i = 0; i < aligned_count; ++i) {
        TwoType m = mirror(out[i], lay);
        m.tx = a1;
        m.ty = a2;
        // keep endpoint types as requested; mirror only the frame/binaries
        bool mutual = true;
        for (int k = 1; k <= lay.K; ++k)
          if (!out[i].get(lay.bit_eq(k))) mutual = false;
        if (!mutual) out.push_back(m);
      }
    }
    return out;
  }

  if (has_eq) {
    for (int q = 1; q <= lay.K + 1; ++q) {
      TwoType t = base;
      for (int k = 1; k <= lay.K; ++k) t.set(lay.bit_eq(k), q <= k);
      if (lay.order) {
        if (aligned_only) {
          t.set(lay.bit_xlty(), true);
          t.set(lay.bit_yltx(), false);
          expand_binaries(t, lay, out);
        } else {
          t.set(lay.bit_xlty(), true);
          t.set(lay.bit_yltx(), false);
          expand_binaries(t, lay, out);
          t.set(lay.bit_xlty(), false);
          t.set(lay.bit_yltx(), true);
          expand_binaries(t, lay, out);
        }
      } else {
        expand_binaries(t, lay, out);
      }
    }
    return out;
  }

  // No special levels at all.
  if (lay.order) {
    TwoType t = base;
    t.set(lay.bit_xlty(), true);
    t.set(lay.bit_yltx(), false);
    expand_binaries(t, lay, out);
    if (!aligned_only) {
      t.set(lay.bit_xlty(), false);
      t.set(lay.bit_yltx(), true);
      expand_binaries(t, lay, out);
    }
  } else {
    expand_binaries(base, lay, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// QF evaluation against type bits
// ---------------------------------------------------------------------------

namespace {

// var codes: 0 = x, 1 = y; self mode treats both as one element.
struct TypeEvalCtx {
  const TypeLayout& lay;
  const Signature& sig;
  const OneType* self = nullptr;
  const TwoType* pair = nullptr;
  bool swapped = false;

  int side(const Term& t) const {
    if (t.kind == Term::Constant)
      throw std::invalid_argument("constants are not allowed in type evaluation");
    int v = t.kind == Term::X ? 0 : 1;
    if (self) return 0;
    return swapped ? 1 - v : v;
  }

  bool one_bit(int s, int bit) const {
    if (self) return self->get(bit);
    return s == 0 ? pair->tx.get(bit) : pair->ty.get(bit);
  }

  bool atom(const Atom& a) const {
    int s1 = side(a.lhs);
    switch (a.kind) {
      case AtomKind::Unary: {
        int idx = sig.unary_index(a.sym);
        if (idx < 0) throw std::invalid_argument("unary symbol not in signature");
        return one_bit(s1, idx);
      }
      case AtomKind::Binary: {
        int idx = sig.binary_index(a.sym);
        if (idx < 0) throw std::invalid_argument("binary symbol not in signature");
        int s2 = side(a.rhs);
        if (s1 == s2) return one_bit(s1, lay.u + idx);  // self loop
        return s1 == 0 ? pair->get(lay.bit_rxy(idx)) : pair->get(lay.bit_ryx(idx));
      }
      case AtomKind::Less: {
        int s2 = side(a.rhs);
        if (s1 == s2) return false;
        return s1 == 0 ? pair->get(lay.bit_xlty()) : pair->get(lay.bit_yltx());
      }
      case AtomKind::Equals: {
        int s2 = side(a.rhs);
        return s1 == s2;  // 2-types are over distinct elements
      }
      case AtomKind::EqLevel: {
        int s2 = side(a.rhs);
        if (a.level > lay.K) return true;  // E_{K+1} convention: universal
        if (s1 == s2) return true;
        return pair->get(lay.bit_eq(a.level));
      }
      case AtomKind::PreLevel: {
        int s2 = side(a.rhs);
        if (s1 == s2) return true;
        return s1 == 0 ? pair->get(lay.bit_xpy(a.level)) : pair->get(lay.bit_ypx(a.level));
      }
      case AtomKind::SuccLevel: {
        int s2 = side(a.rhs);
        if (s1 == s2) return false;
        return s1 == 0 ? pair->get(lay.bit_sxy(a.level)) : pair->get(lay.bit_syx(a.level));
      }
      case AtomKind::FLevel: {
        int s2 = side(a.rhs);
        if (s1 == s2) return true;
        return pair->get(lay.bit_f(a.level));
      }
    }
    return false;
  }

  bool eval(const FormulaPtr& f) const {
    switch (f->tag) {
      case Conn::True: return true;
      case Conn::False: return false;
      case Conn::AtomF: return atom(f->atom);
      case Conn::Not: return !eval(f->lhs);
      case Conn::And: return eval(f->lhs) && eval(f->rhs);
      case Conn::Or: return eval(f->lhs) || eval(f->rhs);
      case Conn::Implies: return !eval(f->lhs) || eval(f->rhs);
      case Conn::Iff: return eval(f->lhs) == eval(f->rhs);
      default:
        throw std::invalid_argument("type evaluation requires a quantifier-free formula");
    }
  }
};

}  // namespace

bool qf_on_self(const FormulaPtr& f, const OneType& a, const TypeLayout& lay,
                const Signature& sig) {
  TypeEvalCtx ctx{lay, sig, &a, nullptr, false};
  return ctx.eval(f);
}

bool qf_on_pair(const FormulaPtr& f, const TwoType& t, const TypeLayout& lay,
                const Signature& sig, bool swapped) {
  TypeEvalCtx ctx{lay, sig, nullptr, &t, swapped};
  return ctx.eval(f);
}

// ---------------------------------------------------------------------------
// BetaTable
// ---------------------------------------------------------------------------

struct BetaTable::Impl {
  mutable std::shared_mutex mu;
  mutable std::map<std::tuple<uint32_t, uint32_t, int, int>, std::vector<TwoType>> cells;
};

BetaTable::BetaTable(const Signature& sig, LogicId logic)
    : sig_(sig), logic_(logic), lay_(sig), impl_(std::make_shared<Impl>()) {}

const std::vector<TwoType>& BetaTable::cell(const BetaKey& key) const {
  if (key.p > key.q) throw std::invalid_argument("beta cell requires p <= q");
  if (key.q > lay_.K + 1) throw std::invalid_argument("beta cell level out of range");
  auto mk = std::make_tuple(key.alpha1.bits, key.alpha2.bits, key.p, key.q);
  {
    std::shared_lock lk(impl_->mu);
    auto it = impl_->cells.find(mk);
    if (it != impl_->cells.end()) return it->second;
  }
  std::unique_lock lk(impl_->mu);
  auto it = impl_->cells.find(mk);
  if (it != impl_->cells.end()) return it->second;
  std::vector<TwoType> cell;
  TwoType base;
  base.tx = key.alpha1;
  base.ty = key.alpha2;
  apply_aligned_frame(base, lay_, key.p, key.q);
  int nb = 2 * lay_.b;
  for (uint32_t bits = 0; bits < (uint32_t(1) << nb); ++bits) {
    TwoType t = base;
    for (int i = 0; i < nb; ++i) t.set(i, (bits >> i) & 1u);
    cell.push_back(t);
  }
  return impl_->cells.emplace(mk, std::move(cell)).first->second;
}

}  // namespace nesteq
