#ifndef NESTEQ_TYPES_HPP
#define NESTEQ_TYPES_HPP

#include <cstdint>
#include <vector>

#include "nesteq/logic.hpp"

namespace nesteq {

// 1-types and 2-types are fixed-width bit vectors over a signature. The
// published layout:
//
// OneType bits (width = #unary + #binary):
//   [0 .. u)        P_i(x) for unary symbols in sorted order
//   [u .. u+b)      R_i(x,x) self loops for common binaries in sorted order
// Special self loops are forced (Ek(x,x), x preceq_k x true; x<x, Sk(x,x),
// and x=y over distinct pairs false) and therefore carry no bits.
//
// TwoType = OneType(x) + OneType(y) + cross bits (width below):
//   [0 .. b)            R_i(x,y)
//   [b .. 2b)           R_i(y,x)
//   then, if the signature has an order: x<y, y<x          (2 bits)
//   then, per level k = 1..K: Ek(x,y), and if preorders present:
//        x preceq_k y, y preceq_k x, Sk(x,y), Sk(y,x)       (1 or 5 bits)
//   then, per F level k = 1..fK: Fk(x,y)                    (1 bit each)
struct TypeLayout {
  int u = 0, b = 0, K = 0, fK = 0;
  bool order = false, pre = false;

  explicit TypeLayout(const Signature& sig)
      : u(int(sig.unary.size())),
        b(int(sig.binary.size())),
        K(sig.levels),
        fK(sig.f_levels),
        order(sig.has_order),
        pre(sig.has_pre) {}
  TypeLayout() = default;

  int one_width() const { return u + b; }
  int per_level() const { return pre ? 5 : 1; }
  int cross_width() const { return 2 * b + (order ? 2 : 0) + K * per_level() + fK; }

  // cross bit positions
  int bit_rxy(int i) const { return i; }
  int bit_ryx(int i) const { return b + i; }
  int bit_xlty() const { return 2 * b; }
  int bit_yltx() const { return 2 * b + 1; }
  int level_base(int k) const { return 2 * b + (order ? 2 : 0) + (k - 1) * per_level(); }
  int bit_eq(int k) const { return level_base(k); }
  int bit_xpy(int k) const { return level_base(k) + 1; }
  int bit_ypx(int k) const { return level_base(k) + 2; }
  int bit_sxy(int k) const { return level_base(k) + 3; }
  int bit_syx(int k) const { return level_base(k) + 4; }
  int bit_f(int k) const { return 2 * b + (order ? 2 : 0) + K * per_level() + (k - 1); }
};

struct OneType {
  uint32_t bits = 0;
  bool operator==(const OneType& o) const { return bits == o.bits; }
  bool operator<(const OneType& o) const { return bits < o.bits; }
  bool get(int i) const { return (bits >> i) & 1u; }
  void set(int i, bool v) {
    if (v) bits |= 1u << i; else bits &= ~(1u << i);
  }
};

struct TwoType {
  OneType tx, ty;
  uint64_t cross = 0;
  bool operator==(const TwoType& o) const {
    return tx == o.tx && ty == o.ty && cross == o.cross;
  }
  bool operator<(const TwoType& o) const {
    if (!(tx == o.tx)) return tx < o.tx;
    if (!(ty == o.ty)) return ty < o.ty;
    return cross < o.cross;
  }
  bool get(int i) const { return (cross >> i) & 1u; }
  void set(int i, bool v) {
    if (v) cross |= uint64_t(1) << i; else cross &= ~(uint64_t(1) << i);
  }
};

// Mirrors a 2-type: swaps the roles of x and y.
TwoType mirror(const TwoType& t, const TypeLayout& lay);

// All 1-types over a constant-free signature; count = 2^(u+b).
// Throws std::invalid_argument when constants are present.
std::vector<OneType> enumerate_one_types(const Signature& sig);

// All proper 2-types with tp(x) = a1 and tp(y) = a2 for the given logic.
// aligned_only restricts to the orientation realised by index-ordered pairs:
// x preceq_k y at every level for preorder logics, x < y for OrderEq. For
// PreorderSucc enumeration is always aligned (the solver's convention).
std::vector<TwoType> enumerate_two_types(const OneType& a1, const OneType& a2,
                                         const Signature& sig, LogicId logic,
                                         bool aligned_only = true);

struct BetaKey {
  OneType alpha1, alpha2;
  int p = 1, q = 1;  // 1 <= p <= q <= K+1; K+1 is the sentinel
  bool operator==(const BetaKey& o) const {
    return alpha1 == o.alpha1 && alpha2 == o.alpha2 && p == o.p && q == o.q;
  }
};

// The beta table cell: aligned proper 2-types whose frame matches the key:
// Ek(x,y) iff q <= k, and Sk(x,y) iff p <= k < q. Results are memoised per
// signature; concurrent readers are safe.
class BetaTable {
 public:
  explicit BetaTable(const Signature& sig, LogicId logic);
  const std::vector<TwoType>& cell(const BetaKey& key) const;
  const TypeLayout& layout() const { return lay_; }

 private:
  Signature sig_;
  LogicId logic_;
  TypeLayout lay_;
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// Frame constructor used by enumeration and the solver: builds the special
// bits of an aligned 2-type from (p, q) and the layout.
void apply_aligned_frame(TwoType& t, const TypeLayout& lay, int p, int q);

// Quantifier-free evaluation against type bits. qf_on_self reads a formula
// with both variables denoting one element of 1-type a (special self loops
// fixed); qf_on_pair reads it over a pair realising t, with swapped
// exchanging the roles of x and y. Constants are rejected.
bool qf_on_self(const FormulaPtr& f, const OneType& a, const TypeLayout& lay,
                const Signature& sig);
bool qf_on_pair(const FormulaPtr& f, const TwoType& t, const TypeLayout& lay,
                const Signature& sig, bool swapped = false);

}  // namespace nesteq

#endif
