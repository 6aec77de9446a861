#include "nesteq/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include "nesteq/types.hpp"

namespace nesteq {

namespace {

using Clock = std::chrono::steady_clock;

struct Budgeter {
  long long limit_nodes;
  double limit_secs;
  Clock::time_point t0 = Clock::now();
  long long nodes = 0;

  explicit Budgeter(const SearchBudget& b)
      : limit_nodes(b.nodes), limit_secs(b.seconds) {}

  void tick() {
    ++nodes;
    if (limit_nodes > 0 && nodes > limit_nodes)
      throw BudgetExceeded("node budget exhausted");
    if (limit_secs > 0 && (nodes & 0xfff) == 0) {
      double el = std::chrono::duration<double>(Clock::now() - t0).count();
      if (el > limit_secs) throw BudgetExceeded("time budget exhausted");
    }
  }
  double millis() const {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  }
};

// Label-tuple choices for element i of one nested-partition family.
// A choice either joins an existing class at some level (copying all labels
// of that class above it and opening fresh minimal ids below) or opens fresh
// classes everywhere.
std::vector<std::vector<int>> family_choices(const std::vector<std::vector<int>>& lv,
                                             int levels, int i) {
  std::vector<std::vector<int>> out;
  if (levels == 0) {
    out.push_back({});
    return out;
  }
  std::vector<int> fresh(levels);
  for (int l = 0; l < levels; ++l) {
    int mx = -1;
    for (int e = 0; e < i; ++e) mx = std::max(mx, lv[l][e]);
    fresh[l] = mx + 1;
  }
  // join an existing class at level jl+1 (jl = number of fresh lower levels)
  for (int jl = 0; jl < levels; ++jl) {
    std::set<int> seen;
    for (int e = 0; e < i; ++e) {
      if (!seen.insert(lv[jl][e]).second) continue;
      std::vector<int> labels(levels);
      for (int l = 0; l < jl; ++l) labels[l] = fresh[l];
      for (int l = jl; l < levels; ++l) labels[l] = lv[l][e];
      out.push_back(std::move(labels));
    }
  }
  out.push_back(fresh);  // new class at every level
  return out;
}

// Aligned preorder label choices: r = least level at which element i is
// equivalent to element i-1 (K+1 = none).
std::vector<std::vector<int>> preorder_choices(const std::vector<std::vector<int>>& lv,
                                               int levels, int i) {
  std::vector<std::vector<int>> out;
  if (i == 0) {
    out.emplace_back(levels, 0);
    return out;
  }
  for (int r = 1; r <= levels + 1; ++r) {
    std::vector<int> labels(levels);
    for (int k = 1; k <= levels; ++k)
      labels[k - 1] = lv[k - 1][i - 1] + (k < r ? 1 : 0);
    out.push_back(std::move(labels));
  }
  return out;
}

struct FrameChoice {
  std::vector<int> eq;   // labels per E level
  std::vector<int> pre;  // labels per pre level (empty unless preorder)
  std::vector<int> feq;  // labels per F level
};

std::vector<FrameChoice> frame_choices(const Structure& w, LogicId logic, int i) {
  std::vector<FrameChoice> out;
  int K = w.levels();
  switch (logic) {
    case LogicId::RawFo2:
      out.push_back({});
      break;
    case LogicId::Eq:
    case LogicId::OrderEq: {
      for (auto& labels : family_choices(w.eq, K, i)) {
        FrameChoice fc;
        fc.eq = std::move(labels);
        out.push_back(std::move(fc));
      }
      break;
    }
    case LogicId::Preorder:
    case LogicId::PreorderSucc: {
      for (auto& labels : preorder_choices(w.pre, K, i)) {
        FrameChoice fc;
        fc.eq = labels;
        fc.pre = std::move(labels);
        out.push_back(std::move(fc));
      }
      break;
    }
    case LogicId::TwoFamilies: {
      auto echoices = family_choices(w.eq, K, i);
      auto fchoices = family_choices(w.feq, int(w.feq.size()), i);
      for (const auto& e : echoices)
        for (const auto& f : fchoices) {
          FrameChoice fc;
          fc.eq = e;
          fc.feq = f;
          out.push_back(std::move(fc));
        }
      break;
    }
  }
  return out;
}

void apply_frame(Structure& w, int i, const FrameChoice& fc) {
  for (size_t l = 0; l < fc.eq.size(); ++l) w.eq[l][i] = fc.eq[l];
  for (size_t l = 0; l < fc.pre.size(); ++l) w.pre[l][i] = fc.pre[l];
  for (size_t l = 0; l < fc.feq.size(); ++l) w.feq[l][i] = fc.feq[l];
}

bool labels_equal(const Structure& w, int a, int b) {
  for (const auto& lv : w.eq)
    if (lv[a] != lv[b]) return false;
  for (const auto& lv : w.pre)
    if (lv[a] != lv[b]) return false;
  for (const auto& lv : w.feq)
    if (lv[a] != lv[b]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// SNF-mode search
// ---------------------------------------------------------------------------

class SnfSearch {
 public:
  SnfSearch(const SnfSentence& snf, LogicId logic, const SearchBudget& budget)
      : snf_(snf), logic_(logic), sig_(snf.signature), lay_(sig_), bud_(budget) {
    psi0_ = CompiledFormula(snf.psi0, sig_);
    for (const auto& ps : snf.skolem) psis_.emplace_back(ps, sig_);
    full_ = snf.M >= 32 ? ~0u : (1u << snf.M) - 1u;
    for (const auto& a : enumerate_one_types(sig_))
      if (qf_on_self(snf.psi0, a, lay_, sig_)) viable_.push_back(a);
    build_completability();
  }

  std::optional<Structure> run(int n, Budgeter* outer = nullptr) {
    n_ = n;
    w_ = Structure::empty(sig_, n, sig_.has_pre);
    W_.assign(n, 0);
    alpha_.assign(n, OneType{});
    if (outer) bud_.nodes = outer->nodes;
    bool ok = false;
    try {
      ok = place(0);
    } catch (...) {
      if (outer) outer->nodes = bud_.nodes;
      throw;
    }
    if (outer) outer->nodes = bud_.nodes;
    if (!ok) return std::nullopt;
    return w_;
  }

  long long nodes() const { return bud_.nodes; }

 private:
  const SnfSentence& snf_;
  LogicId logic_;
  Signature sig_;
  TypeLayout lay_;
  CompiledFormula psi0_;
  std::vector<CompiledFormula> psis_;
  std::vector<OneType> viable_;
  std::vector<std::vector<char>> completable_;  // [M][alpha bits]
  bool completable_on_ = false;
  Budgeter bud_;
  Structure w_;
  int n_ = 0;
  uint32_t full_ = 0;
  std::vector<uint32_t> W_;
  std::vector<OneType> alpha_;

  void build_completability() {
    size_t width = size_t(1) << lay_.one_width();
    if (viable_.size() > 64 || snf_.M == 0 || snf_.M > 16 || width > 4096) return;
    completable_.assign(snf_.M, std::vector<char>(width, 0));
    for (const auto& ax : viable_)
      for (const auto& ay : viable_)
        for (const auto& b : enumerate_two_types(ax, ay, sig_, logic_, true)) {
          if (!qf_on_pair(snf_.psi0, b, lay_, sig_, false)) continue;
          if (!qf_on_pair(snf_.psi0, b, lay_, sig_, true)) continue;
          for (int m = 0; m < snf_.M; ++m)
            if (qf_on_pair(snf_.skolem[m], b, lay_, sig_, false))
              completable_[m][ax.bits] = 1;
        }
    completable_on_ = true;
  }

  void apply_alpha(int i, const OneType& a) {
    for (int u = 0; u < lay_.u; ++u) w_.set_u(u, i, a.get(u));
    for (int b = 0; b < lay_.b; ++b) w_.set_b(b, i, i, a.get(lay_.u + b));
    alpha_[i] = a;
  }

  bool place(int i) {
    if (i == n_) {
      for (int j = 0; j < n_; ++j)
        if (W_[j] != full_) return false;
      return true;
    }
    auto frames = frame_choices(w_, logic_, i);
    bool symmetry_ok = lay_.b == 0 && !sig_.has_order;
    for (const auto& fc : frames) {
      apply_frame(w_, i, fc);
      bool same_as_prev = symmetry_ok && i > 0 && labels_equal(w_, i, i - 1);
      for (const auto& a : viable_) {
        bud_.tick();
        if (same_as_prev && a.bits < alpha_[i - 1].bits) continue;
        apply_alpha(i, a);
        uint32_t w0 = 0;
        for (int m = 0; m < snf_.M; ++m)
          if (psis_[m].eval(w_, i, i)) w0 |= 1u << m;
        W_[i] = w0;
        if (pairs(i, 0)) return true;
      }
    }
    return false;
  }

  bool pairs(int i, int j) {
    if (j == i) {
      if (completable_on_) {
        for (int jj = 0; jj <= i; ++jj) {
          uint32_t missing = full_ & ~W_[jj];
          while (missing) {
            int m = __builtin_ctz(missing);
            missing &= missing - 1;
            if (!completable_[m][alpha_[jj].bits]) return false;
          }
        }
      }
      return place(i + 1);
    }
    bud_.tick();
    int nb = 2 * lay_.b;
    for (uint32_t bits = 0; bits < (uint32_t(1) << nb); ++bits) {
      for (int s = 0; s < lay_.b; ++s) {
        w_.set_b(s, j, i, (bits >> s) & 1u);
        w_.set_b(s, i, j, (bits >> (lay_.b + s)) & 1u);
      }
      if (!psi0_.eval(w_, j, i)) continue;
      if (!psi0_.eval(w_, i, j)) continue;
      uint32_t oj = W_[j], oi = W_[i];
      for (int m = 0; m < snf_.M; ++m) {
        if (psis_[m].eval(w_, j, i)) W_[j] |= 1u << m;
        if (psis_[m].eval(w_, i, j)) W_[i] |= 1u << m;
      }
      // final element: pair (j, i) was j's last chance at a witness
      if (i == n_ - 1 && W_[j] != full_) {
        W_[j] = oj;
        W_[i] = oi;
        continue;
      }
      if (pairs(i, j + 1)) return true;
      W_[j] = oj;
      W_[i] = oi;
    }
    return false;
  }
};

// ---------------------------------------------------------------------------
// General engine over a raw sentence
// ---------------------------------------------------------------------------

// True when, in negation normal form, the formula contains no existential
// quantifier; such conjuncts are preserved downward and can be checked on
// every prefix of a growing structure.
bool is_universal(const FormulaPtr& f, bool positive) {
  switch (f->tag) {
    case Conn::True:
    case Conn::False:
    case Conn::AtomF: return true;
    case Conn::Not: return is_universal(f->lhs, !positive);
    case Conn::And:
    case Conn::Or: return is_universal(f->lhs, positive) && is_universal(f->rhs, positive);
    case Conn::Implies:
      return is_universal(f->lhs, !positive) && is_universal(f->rhs, positive);
    case Conn::Iff:
      // mixed polarity; universal only when quantifier-free
      return is_universal(f->lhs, true) && is_universal(f->lhs, false) &&
             is_universal(f->rhs, true) && is_universal(f->rhs, false);
    case Conn::Forall: return positive ? is_universal(f->lhs, positive) : false;
    case Conn::Exists: return positive ? false : is_universal(f->lhs, positive);
  }
  return false;
}

void split_conjuncts_raw(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->tag == Conn::And) {
    split_conjuncts_raw(f->lhs, out);
    split_conjuncts_raw(f->rhs, out);
    return;
  }
  out.push_back(f);
}

bool mentions_constant(const FormulaPtr& f) {
  switch (f->tag) {
    case Conn::True:
    case Conn::False: return false;
    case Conn::AtomF:
      return f->atom.lhs.kind == Term::Constant ||
             (f->atom.kind != AtomKind::Unary && f->atom.rhs.kind == Term::Constant);
    case Conn::Not:
    case Conn::Forall:
    case Conn::Exists: return mentions_constant(f->lhs);
    default: return mentions_constant(f->lhs) || mentions_constant(f->rhs);
  }
}

// Strips leading universal quantifiers; the result is meaningful because
// conjuncts are read under universal closure anyway.
const FormulaPtr& strip_foralls(const FormulaPtr& f) {
  const FormulaPtr* cur = &f;
  while ((*cur)->tag == Conn::Forall) cur = &(*cur)->lhs;
  return *cur;
}

bool quantifier_free(const FormulaPtr& f) {
  switch (f->tag) {
    case Conn::Forall:
    case Conn::Exists: return false;
    case Conn::Not: return quantifier_free(f->lhs);
    case Conn::And:
    case Conn::Or:
    case Conn::Implies:
    case Conn::Iff: return quantifier_free(f->lhs) && quantifier_free(f->rhs);
    default: return true;
  }
}

class RawSearch {
 public:
  RawSearch(const FormulaPtr& f, LogicId logic, const SearchBudget& budget)
      : logic_(logic), bud_(budget) {
    sig_ = analyze(f, logic).signature;
    std::vector<FormulaPtr> conjuncts;
    split_conjuncts_raw(f, conjuncts);
    for (const auto& cj : conjuncts) {
      FormulaPtr closed = f_forall(0, f_forall(1, cj));
      // constants are interpreted only once the domain is complete, so
      // conjuncts mentioning them cannot be checked on prefixes
      if (is_universal(cj, true) && !mentions_constant(cj)) {
        const FormulaPtr& body = strip_foralls(cj);
        if (quantifier_free(body)) {
          // pure forall-forall shape: its matrix touches one pair at a time
          // and can be checked as each pair is assigned
          mats_.emplace_back(body, sig_);
        } else {
          uni_.emplace_back(closed, sig_);
        }
      } else {
        rest_.emplace_back(closed, sig_);
      }
    }
    u_ = int(sig_.unary.size());
    b_ = int(sig_.binary.size());
  }

  std::optional<Structure> run(int n, Budgeter* outer = nullptr) {
    n_ = n;
    w_ = Structure::empty(sig_, n, sig_.has_pre);
    // constants need interpretations; enumerated with the last element placed
    if (outer) bud_.nodes = outer->nodes;
    bool ok;
    try {
      ok = place(0);
    } catch (...) {
      if (outer) outer->nodes = bud_.nodes;
      throw;
    }
    if (outer) outer->nodes = bud_.nodes;
    if (!ok) return std::nullopt;
    return w_;
  }

 private:
  LogicId logic_;
  Signature sig_;
  std::vector<CompiledFormula> mats_, uni_, rest_;
  int u_ = 0, b_ = 0, n_ = 0;
  Budgeter bud_;
  Structure w_;

  // full prefix re-check; sound only when every pair within the prefix has
  // been assigned (element completion)
  bool prefix_ok(int count) {
    for (const auto& cf : uni_)
      if (!cf.eval_limited(w_, count, -1, -1)) return false;
    return true;
  }

  bool matrices_ok(int a, int b) {
    for (const auto& m : mats_) {
      if (!m.eval(w_, a, b)) return false;
      if (a != b && !m.eval(w_, b, a)) return false;
    }
    return true;
  }

  bool finish() {
    // assign constants: every combination (desk-scale signatures only)
    return assign_const(0);
  }

  bool assign_const(size_t ci) {
    if (ci == sig_.constants.size()) {
      for (const auto& cf : rest_)
        if (!cf.eval(w_, -1, -1)) return false;
      return true;
    }
    for (int e = 0; e < n_; ++e) {
      w_.constants[sig_.constants[ci]] = e;
      if (assign_const(ci + 1)) return true;
    }
    w_.constants.erase(sig_.constants[ci]);
    return false;
  }

  bool place(int i) {
    if (i == n_) return finish();
    auto frames = frame_choices(w_, logic_, i);
    bool symmetry_ok = b_ == 0 && !sig_.has_order && sig_.constants.empty();
    int selfbits = u_ + b_;
    for (const auto& fc : frames) {
      apply_frame(w_, i, fc);
      bool same_as_prev = symmetry_ok && i > 0 && labels_equal(w_, i, i - 1);
      for (uint32_t bits = 0; bits < (uint32_t(1) << selfbits); ++bits) {
        bud_.tick();
        if (same_as_prev && bits < prev_bits_) continue;
        for (int uu = 0; uu < u_; ++uu) w_.set_u(uu, i, (bits >> uu) & 1u);
        for (int bb = 0; bb < b_; ++bb) w_.set_b(bb, i, i, (bits >> (u_ + bb)) & 1u);
        if (!matrices_ok(i, i)) continue;
        uint32_t save_prev = prev_bits_;
        prev_bits_ = bits;
        if (pairs(i, 0)) return true;
        prev_bits_ = save_prev;
      }
    }
    return false;
  }

  uint32_t prev_bits_ = 0;

  bool pairs(int i, int j) {
    if (j == i) {
      if (!prefix_ok(i + 1)) return false;
      return place(i + 1);
    }
    bud_.tick();
    int nb = 2 * b_;
    for (uint32_t bits = 0; bits < (uint32_t(1) << nb); ++bits) {
      for (int s = 0; s < b_; ++s) {
        w_.set_b(s, j, i, (bits >> s) & 1u);
        w_.set_b(s, i, j, (bits >> (b_ + s)) & 1u);
      }
      if (!matrices_ok(j, i)) continue;
      if (pairs(i, j + 1)) return true;
    }
    return false;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// public operations
// ---------------------------------------------------------------------------

std::optional<Structure> find_model(const SnfSentence& snf, LogicId logic, int n,
                                    SearchMode mode, const SearchBudget& budget,
                                    SearchStats* stats) {
  if (n < 1) throw InputError("domain size must be at least 1");
  Budgeter bud(budget);
  auto finish = [&](std::optional<Structure> r, int largest) {
    if (stats) {
      stats->nodes = bud.nodes;
      stats->millis = bud.millis();
      stats->largest_size = largest;
    }
    return r;
  };

  if (logic == LogicId::TwoFamilies) {
    if (n > budget.two_families_hard_cap)
      throw InputError("two-families search beyond the configured hard cap (" +
                       std::to_string(budget.two_families_hard_cap) +
                       "): no termination bound exists");
    RawSearch rs(snf.processed ? snf.processed : snf.source, logic, budget);
    int lo = mode == SearchMode::Exact ? n : 1;
    for (int k = lo; k <= n; ++k) {
      auto r = rs.run(k, &bud);
      if (r) return finish(expand_snf_model(*r, snf), k);
    }
    return finish(std::nullopt, n);
  }

  SnfSearch ss(snf, logic, budget);
  int lo = mode == SearchMode::Exact ? n : 1;
  for (int k = lo; k <= n; ++k) {
    auto r = ss.run(k, &bud);
    if (r) return finish(std::move(r), k);
  }
  return finish(std::nullopt, n);
}

std::optional<Structure> find_model_raw(const FormulaPtr& f, LogicId logic, int n,
                                        SearchMode mode, const SearchBudget& budget,
                                        SearchStats* stats) {
  if (n < 1) throw InputError("domain size must be at least 1");
  Budgeter bud(budget);
  RawSearch rs(f, logic, budget);
  int lo = mode == SearchMode::Exact ? n : 1;
  std::optional<Structure> result;
  int largest = 0;
  for (int k = lo; k <= n; ++k) {
    largest = k;
    result = rs.run(k, &bud);
    if (result) break;
  }
  if (stats) {
    stats->nodes = bud.nodes;
    stats->millis = bud.millis();
    stats->largest_size = largest;
  }
  return result;
}

std::optional<long long> completeness_bound(const SnfSentence& snf, LogicId logic) {
  if (logic == LogicId::PreorderSucc || logic == LogicId::TwoFamilies) return std::nullopt;
  const long long cap = 1ll << 62;
  auto satmul = [&](long long a, long long b) {
    if (a > cap / b) return cap;
    return a * b;
  };
  long long alpha = 1;
  int width = int(snf.signature.unary.size() + snf.signature.binary.size());
  for (int i = 0; i < width && alpha < cap; ++i) alpha = satmul(alpha, 2);
  long long m = std::max(snf.M, 1);
  long long out = 1;
  for (int k = 0; k <= snf.K; ++k) {
    out = satmul(out, 12);
    out = satmul(out, satmul(m, satmul(m, m)));
    out = satmul(out, alpha);
  }
  return out;
}

Verdict decide_bounded(const FormulaPtr& f, LogicId logic, int cap,
                       const SearchBudget& budget) {
  if (cap < 1) throw InputError("cap must be at least 1");
  Verdict v;
  SnfSentence snf = to_snf(f, logic);
  v.certification_bound = completeness_bound(snf, logic);
  long long limit = cap;
  if (v.certification_bound) limit = std::min<long long>(limit, *v.certification_bound);
  if (logic == LogicId::TwoFamilies)
    limit = std::min<long long>(limit, budget.two_families_hard_cap);

  Budgeter bud(budget);
  SearchStats st;
  try {
    for (int n = 1; n <= limit; ++n) {
      SearchBudget sub = budget;
      if (budget.nodes > 0) sub.nodes = budget.nodes - bud.nodes;
      if (budget.seconds > 0) {
        double left = budget.seconds - bud.millis() / 1000.0;
        if (left <= 0) throw BudgetExceeded("time budget exhausted");
        sub.seconds = left;
      }
      auto r = find_model(snf, logic, n, SearchMode::Exact, sub, &st);
      bud.nodes += st.nodes;
      v.explored_cap = n;
      if (r) {
        v.status = VerdictStatus::Sat;
        v.model = restore_original_model(*r, snf);
        v.stats.nodes = bud.nodes;
        v.stats.millis = bud.millis();
        v.stats.largest_size = n;
        return v;
      }
    }
  } catch (const BudgetExceeded&) {
    v.status = VerdictStatus::Unknown;
    v.stats.nodes = bud.nodes;
    v.stats.millis = bud.millis();
    v.stats.largest_size = v.explored_cap;
    return v;
  }

  bool certified = v.certification_bound && limit == *v.certification_bound &&
                   logic != LogicId::TwoFamilies;
  v.status = certified ? VerdictStatus::UnsatCertified : VerdictStatus::Unknown;
  v.explored_cap = int(limit);
  v.stats.nodes = bud.nodes;
  v.stats.millis = bud.millis();
  v.stats.largest_size = int(limit);
  return v;
}

Structure expand_snf_model(const Structure& base, const SnfSentence& snf) {
  Structure out = Structure::empty(snf.signature, base.n, snf.signature.has_pre);
  out.has_order = base.has_order;
  out.eq = base.eq;
  if (!base.pre.empty()) out.pre = base.pre;
  out.feq = base.feq;
  out.constants = base.constants;
  for (size_t i = 0; i < base.sig.unary.size(); ++i) {
    int idx = out.sig.unary_index(base.sig.unary[i]);
    if (idx >= 0) out.unary[idx] = base.unary[i];
  }
  for (size_t i = 0; i < base.sig.binary.size(); ++i) {
    int idx = out.sig.binary_index(base.sig.binary[i]);
    if (idx >= 0) out.binary[idx] = base.binary[i];
  }
  // evaluate fresh definitional predicates in creation order
  std::vector<std::pair<int, std::string>> fresh;
  for (const auto& [name, src] : snf.provenance)
    if (name.rfind("_d", 0) == 0) fresh.emplace_back(std::stoi(name.substr(2)), name);
  std::sort(fresh.begin(), fresh.end());
  for (const auto& [num, name] : fresh) {
    FormulaPtr def = parse_formula(snf.provenance.at(name));
    int idx = out.sig.unary_index(name);
    if (idx < 0) continue;
    bool fv[2];
    free_variables(def, fv);
    for (int e = 0; e < out.n; ++e) {
      Valuation val;
      if (fv[0]) val.x = e;
      if (fv[1]) val.y = e;
      out.set_u(idx, e, evaluate(out, def, val));
    }
  }
  return out;
}

Structure restore_original_model(const Structure& snf_model, const SnfSentence& snf) {
  SyntaxReport orig = analyze(snf.source, snf.logic);
  const Signature& osig = orig.signature;
  Structure out = Structure::empty(osig, snf_model.n, osig.has_pre);
  out.has_order = osig.has_order;
  // levels: original level L uses the renumbered level of the smallest used
  // original level >= L; below the smallest used level, identity refines all
  for (int L = 1; L <= osig.levels; ++L) {
    int mapped = -1;
    for (const auto& [o, nw] : snf.level_map)
      if (o >= L) {
        mapped = nw;
        break;
      }
    if (mapped >= 1 && mapped <= snf_model.levels()) {
      out.eq[L - 1] = snf_model.eq[mapped - 1];
      if (osig.has_pre && !snf_model.pre.empty()) out.pre[L - 1] = snf_model.pre[mapped - 1];
    } else {
      for (int e = 0; e < out.n; ++e) out.eq[L - 1][e] = e;  // identity
      if (osig.has_pre && !snf_model.pre.empty())
        for (int e = 0; e < out.n; ++e) out.pre[L - 1][e] = e;
    }
  }
  for (int L = 1; L <= osig.f_levels && L <= int(snf_model.feq.size()); ++L)
    out.feq[L - 1] = snf_model.feq[L - 1];
  for (size_t i = 0; i < osig.unary.size(); ++i) {
    int idx = snf_model.sig.unary_index(osig.unary[i]);
    if (idx < 0) throw InputError("symbol lost during normalisation: " + osig.unary[i]);
    out.unary[i] = snf_model.unary[idx];
  }
  for (size_t i = 0; i < osig.binary.size(); ++i) {
    int idx = snf_model.sig.binary_index(osig.binary[i]);
    if (idx < 0) throw InputError("symbol lost during normalisation: " + osig.binary[i]);
    out.binary[i] = snf_model.binary[idx];
  }
  for (const auto& cname : osig.constants) {
    int idx = snf_model.sig.unary_index("_c" + cname);
    if (idx < 0) throw InputError("constant predicate lost: " + cname);
    int elem = -1;
    for (int e = 0; e < snf_model.n; ++e)
      if (snf_model.uval(idx, e)) {
        elem = e;
        break;
      }
    if (elem < 0) throw InputError("constant '" + cname + "' has no realisation");
    out.constants[cname] = elem;
  }
  return out;
}

}  // namespace nesteq
