#include "nesteq/pumping.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "nesteq/types.hpp"

namespace nesteq {

namespace {

// Class of a at level k with the sentinel conventions: level 0 is identity,
// level K+1 (and beyond) universal.
int class_at(const Structure& s, int k, int a) {
  if (k <= 0) return a;
  if (k > s.levels()) return 0;
  return s.eq[k - 1][a];
}

}  // namespace

WitnessMap choose_witnesses(const Structure& s, const SnfSentence& snf) {
  WitnessMap wm;
  wm.f.assign(snf.M, std::vector<int>(s.n, -1));
  std::vector<CompiledFormula> psis;
  for (const auto& ps : snf.skolem) psis.emplace_back(ps, s.sig);
  for (int m = 0; m < snf.M; ++m)
    for (int a = 0; a < s.n; ++a) {
      int w = -1;
      for (int b = 0; b < s.n; ++b)
        if (psis[m].eval(s, a, b)) {
          w = b;
          break;
        }
      if (w < 0)
        throw InputError("not a model: psi_" + std::to_string(m + 1) +
                         " has no witness for element " + std::to_string(a));
      wm.f[m][a] = w;
    }
  return wm;
}

std::vector<int> extremal(const std::vector<int>& S, int r, bool ordered) {
  std::vector<int> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  if (int(sorted.size()) <= 2 * r) return sorted;
  std::vector<int> out;
  if (ordered) {
    out.insert(out.end(), sorted.begin(), sorted.begin() + r);
    out.insert(out.end(), sorted.end() - r, sorted.end());
  } else {
    out.insert(out.end(), sorted.begin(), sorted.begin() + 2 * r);
  }
  return out;
}

bool same_configuration(const Structure& s, int a, const std::vector<int>& bs,
                        const std::vector<int>& cs, ConfigMode mode) {
  if (bs.size() != cs.size()) throw InputError("configuration tuples differ in length");
  for (size_t i = 0; i < bs.size(); ++i) {
    int b = bs[i], c = cs[i];
    if (!(one_type_of(s, b) == one_type_of(s, c))) return false;
    if (mode != ConfigMode::EqOnly) {
      auto rel = [&](int u) { return u < a ? -1 : (u == a ? 0 : 1); };
      if (rel(b) != rel(c)) return false;
    } else {
      if ((b == a) != (c == a)) return false;
    }
    for (int k = 1; k <= s.levels(); ++k)
      if (s.eq_at(k, a, b) != s.eq_at(k, a, c)) return false;
    if (mode == ConfigMode::OrderedSucc) {
      for (int k = 1; k <= s.levels(); ++k) {
        if (s.succ_at(k, a, b) != s.succ_at(k, a, c)) return false;
        if (s.succ_at(k, b, a) != s.succ_at(k, c, a)) return false;
      }
    }
  }
  return true;
}

ReplaceResult replace_class(const Structure& s, const SnfSentence& snf, int k,
                            int class_member, const WitnessMap& wmap) {
  const int n = s.n;
  const int K = s.levels();
  if (k < 0 || k > K) throw InputError("replacement level k must be in [0, K]");
  if (class_member < 0 || class_member >= n) throw InputError("class member out of range");
  if (!s.constants.empty()) throw InputError("replace_class expects a constant-free model");
  const int M = snf.M;
  const bool ordered = s.has_order || s.has_pre();
  const ConfigMode mode = ordered ? ConfigMode::Ordered : ConfigMode::EqOnly;
  TypeLayout lay(s.sig);

  ReplaceResult rr;
  ReplacementPlan& plan = rr.plan;
  {
    long long alpha = 1;
    for (int i = 0; i < lay.one_width() && alpha < (1ll << 40); ++i) alpha *= 2;
    plan.d_class_bound = 12ll * M * M * M * alpha;
  }

  // the E(k+1)-class C
  int cid = class_at(s, k + 1, class_member);
  std::vector<int> C;
  std::vector<char> inC(n, 0);
  for (int a = 0; a < n; ++a)
    if (class_at(s, k + 1, a) == cid) {
      C.push_back(a);
      inC[a] = 1;
    }

  // V_alpha: M-extremal realisations per 1-type within each Ek-class of C
  std::map<int, std::map<uint32_t, std::vector<int>>> perClass;
  for (int a : C) perClass[class_at(s, k, a)][one_type_of(s, a).bits].push_back(a);
  std::map<uint32_t, std::vector<int>> V;
  for (const auto& [ecls, byType] : perClass)
    for (const auto& [bits, elems] : byType) {
      auto ext = extremal(elems, M, ordered);
      auto& acc = V[bits];
      acc.insert(acc.end(), ext.begin(), ext.end());
    }

  // W_I: 2M-extremal subset of each V_alpha
  std::set<int> w1set;
  for (auto& [bits, elems] : V) {
    auto ext = extremal(elems, 2 * M, ordered);
    w1set.insert(ext.begin(), ext.end());
  }
  // W_II, W_III via the witness functions
  std::set<int> w2set, w3set;
  for (int a : w1set)
    for (int m = 0; m < M; ++m) w2set.insert(wmap.f[m][a]);
  for (int a : w2set)
    for (int m = 0; m < M; ++m) w3set.insert(wmap.f[m][a]);

  plan.w1.assign(w1set.begin(), w1set.end());
  plan.w2.assign(w2set.begin(), w2set.end());
  plan.w3.assign(w3set.begin(), w3set.end());

  // D: Ek-closure of (W1 u W2 u W3) n C
  std::set<int> d_classes;
  for (const std::set<int>* ws : {&w1set, &w2set, &w3set})
    for (int a : *ws)
      if (inC[a]) d_classes.insert(class_at(s, k, a));
  // M = 0 leaves no witness sets; keep one class so the domain stays nonempty
  if (d_classes.empty() && int(C.size()) == n)
    d_classes.insert(class_at(s, k, C.front()));
  plan.d_class_count = int(d_classes.size());

  std::vector<char> keep(n, 0);
  for (int a = 0; a < n; ++a) {
    if (!inC[a])
      keep[a] = 1;
    else if (d_classes.count(class_at(s, k, a)))
      keep[a] = 1;
  }
  for (int a = 0; a < n; ++a)
    if (inC[a] && keep[a]) plan.d_elements.push_back(a);

  // B = (A \ C) u D, reindexed preserving the element order
  std::vector<int> old_of;
  std::vector<int> new_of(n, -1);
  for (int a = 0; a < n; ++a)
    if (keep[a]) {
      new_of[a] = int(old_of.size());
      old_of.push_back(a);
    }
  const int nn = int(old_of.size());
  if (nn == 0) throw std::logic_error("replacement produced an empty domain");

  Structure b = Structure::empty(s.sig, nn, s.has_pre());
  b.has_order = s.has_order;
  for (int lvl = 0; lvl < K; ++lvl)
    for (int e = 0; e < nn; ++e) b.eq[lvl][e] = s.eq[lvl][old_of[e]];
  // preorder labels must stay contiguous after the restriction
  for (int lvl = 0; lvl < int(s.pre.size()); ++lvl) {
    int next = 0, prev_old = -1;
    for (int e = 0; e < nn; ++e) {
      int po = s.pre[lvl][old_of[e]];
      if (e == 0) {
        b.pre[lvl][e] = 0;
        next = 0;
      } else {
        if (po != prev_old) ++next;
        b.pre[lvl][e] = next;
      }
      prev_old = po;
    }
  }
  for (int lvl = 0; lvl < int(s.feq.size()); ++lvl)
    for (int e = 0; e < nn; ++e) b.feq[lvl][e] = s.feq[lvl][old_of[e]];
  for (size_t u = 0; u < s.unary.size(); ++u)
    for (int e = 0; e < nn; ++e) b.unary[u][e] = s.unary[u][old_of[e]];
  for (size_t bb = 0; bb < s.binary.size(); ++bb)
    for (int e1 = 0; e1 < nn; ++e1)
      for (int e2 = 0; e2 < nn; ++e2)
        b.binary[bb][size_t(e1) * nn + e2] = s.bval(int(bb), old_of[e1], old_of[e2]);

  // rewiring: every kept element outside W1 u W2 gets its C-witnesses
  // redirected into W1 via a same-configuration tuple
  for (int e = 0; e < nn; ++e) {
    int a = old_of[e];
    if (w1set.count(a) || w2set.count(a)) continue;
    std::set<int> wc;
    for (int m = 0; m < M; ++m) {
      int w = wmap.f[m][a];
      if (inC[w] && !s.eq_at(k, a, w)) wc.insert(w);
    }
    if (wc.empty()) continue;
    std::vector<int> bs(wc.begin(), wc.end());
    std::set<int> used;
    std::vector<int> cs;
    for (int bj : bs) {
      OneType tb = one_type_of(s, bj);
      int chosen = -1;
      for (int c : w1set) {
        if (used.count(c)) continue;
        if (!(one_type_of(s, c) == tb)) continue;
        if (ordered && ((c < a) != (bj < a) || (c > a) != (bj > a))) continue;
        bool eqok = true;
        for (int lvl = 1; lvl <= K; ++lvl)
          if (s.eq_at(lvl, a, c) != s.eq_at(lvl, a, bj)) {
            eqok = false;
            break;
          }
        if (!eqok) continue;
        chosen = c;
        break;
      }
      if (chosen < 0)
        throw std::logic_error("configuration realisation missing in W_I");
      used.insert(chosen);
      cs.push_back(chosen);
    }
    if (!same_configuration(s, a, bs, cs, mode))
      throw std::logic_error("selected tuple is not configuration-equal");
    for (size_t j = 0; j < bs.size(); ++j) {
      TwoType t = two_type_of(s, a, bs[j]);
      int nc = new_of[cs[j]];
      // frame sanity: the new pair realises the same order/equivalence
      // relations as the original witness pair
      for (int lvl = 1; lvl <= K; ++lvl)
        if (b.eq_at(lvl, e, nc) != t.get(lay.bit_eq(lvl)))
          throw std::logic_error("frame mismatch during rewiring");
      if (s.has_order && (e < nc) != t.get(lay.bit_xlty()))
        throw std::logic_error("order mismatch during rewiring");
      for (int bb = 0; bb < lay.b; ++bb) {
        b.set_b(bb, e, nc, t.get(lay.bit_rxy(bb)));
        b.set_b(bb, nc, e, t.get(lay.bit_ryx(bb)));
      }
      plan.rewired.push_back({a, bs[j], cs[j]});
    }
  }

  rr.structure = std::move(b);
  rr.kept = std::move(old_of);
  return rr;
}

Structure shrink(const Structure& s, const SnfSentence& snf, LogicId logic,
                 ShrinkAudit* audit) {
  if (logic == LogicId::PreorderSucc || logic == LogicId::TwoFamilies)
    throw InputError("shrink supports the eq, order-eq and preorder logics only");
  Structure cur = s;
  if (audit) {
    auto bound = [&] {
      TypeLayout lay(snf.signature);
      long long alpha = 1;
      for (int i = 0; i < lay.one_width() && alpha < (1ll << 40); ++i) alpha *= 2;
      long long m = std::max(snf.M, 1);
      long long out = 1;
      for (int kk = 0; kk <= snf.K; ++kk) out *= 12ll * m * m * m * alpha;
      return out;
    };
    audit->final_size_bound = bound();
  }

  bool improved = true;
  while (improved) {
    improved = false;
    if (audit) audit->rounds++;
    WitnessMap wm = choose_witnesses(cur, snf);
    for (int k = 0; k <= cur.levels() && !improved; ++k) {
      // distinct E(k+1)-classes by first member
      std::set<int> seen;
      for (int a = 0; a < cur.n && !improved; ++a) {
        int cid = class_at(cur, k + 1, a);
        if (!seen.insert(cid).second) continue;
        ReplaceResult rr = replace_class(cur, snf, k, a, wm);
        if (audit) {
          audit->applications++;
          audit->plans.push_back(rr.plan);
        }
        if (rr.structure.n < cur.n) {
          cur = std::move(rr.structure);
          improved = true;
        }
      }
    }
  }
  return cur;
}

}  // namespace nesteq
