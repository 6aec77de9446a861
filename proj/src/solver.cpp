#include "nesteq/solver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace nesteq {

namespace {

using Clock = std::chrono::steady_clock;

void check_profile(const SnfSentence& snf) {
  if (snf.signature.has_order || snf.signature.f_levels > 0)
    throw InputError("decide_preorder_succ requires the preorder-succ profile");
}

uint32_t full_mask(int m) { return m >= 32 ? ~0u : (1u << m) - 1u; }

// Witness masks of a 2-type toward both endpoints.
struct CellChoice {
  TwoType type;
  uint32_t wx = 0;  // witnesses gained by the old element (x side)
  uint32_t wy = 0;  // witnesses gained by the new element (y side)
};

struct SolveCtx {
  const SnfSentence& snf;
  Signature sig;
  TypeLayout lay;
  BetaTable beta;
  std::vector<OneType> viable;             // alpha with psi0(x,x)
  std::vector<uint32_t> self_mask;         // per viable alpha
  // cell choices memo: (a1,a2,p,q) -> deduplicated witness-mask choices
  std::map<std::tuple<uint32_t, uint32_t, int, int>, std::vector<CellChoice>> cells;

  explicit SolveCtx(const SnfSentence& s)
      : snf(s), sig(s.signature), lay(sig), beta(sig, s.logic) {
    for (const auto& a : enumerate_one_types(sig)) {
      if (!qf_on_self(s.psi0, a, lay, sig)) continue;
      viable.push_back(a);
      uint32_t w = 0;
      for (int m = 0; m < s.M; ++m)
        if (qf_on_self(s.skolem[m], a, lay, sig)) w |= 1u << m;
      self_mask.push_back(w);
    }
  }

  const std::vector<CellChoice>& choices(const OneType& a1, const OneType& a2, int p, int q) {
    auto key = std::make_tuple(a1.bits, a2.bits, p, q);
    auto it = cells.find(key);
    if (it != cells.end()) return it->second;
    std::vector<CellChoice> out;
    std::map<std::pair<uint32_t, uint32_t>, size_t> seen;  // mask pair -> index
    for (const auto& t : beta.cell(BetaKey{a1, a2, p, q})) {
      if (!qf_on_pair(snf.psi0, t, lay, sig, false)) continue;
      if (!qf_on_pair(snf.psi0, t, lay, sig, true)) continue;
      CellChoice c;
      c.type = t;
      for (int m = 0; m < snf.M; ++m) {
        if (qf_on_pair(snf.skolem[m], t, lay, sig, false)) c.wx |= 1u << m;
        if (qf_on_pair(snf.skolem[m], t, lay, sig, true)) c.wy |= 1u << m;
      }
      // choices with identical witness masks are interchangeable in the
      // counting representation; keep the bit-lexicographically first
      if (seen.emplace(std::make_pair(c.wx, c.wy), out.size()).second)
        out.push_back(c);
    }
    return cells.emplace(key, std::move(out)).first->second;
  }
};

struct StateHash {
  size_t operator()(const SolverState& s) const {
    size_t h = std::hash<int>()(s.i * 31 + s.last_r);
    for (const auto& [k, c] : s.counts) {
      size_t x = k.alpha.bits;
      x = x * 1315423911u + k.W;
      x = x * 1315423911u + (size_t(k.p) << 8 | k.q);
      x = x * 1315423911u + size_t(c);
      h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

SolverState step_state(const SolverState& st, int r, const OneType& alpha,
                       const std::vector<SplitAssign>& splits, const SnfSentence& snf) {
  check_profile(snf);
  SolveCtx ctx(snf);
  const int K = snf.K;
  if (st.i > 0 && (r < 1 || r > K + 1)) throw InputError("r out of range");

  if (!qf_on_self(snf.psi0, alpha, ctx.lay, ctx.sig))
    throw InputError("psi0 violation: alpha does not satisfy psi0(x,x)");

  // p/q update
  std::vector<std::pair<GroupKey, int>> updated;
  for (auto [k, c] : st.counts) {
    if (st.i > 0 && k.q <= r) {
      k.p = k.q;
      k.q = uint8_t(r);
    }
    updated.emplace_back(k, c);
  }
  std::map<GroupKey, int> expect;
  for (const auto& [k, c] : updated) expect[k] += c;

  uint32_t new_w = 0;
  for (int m = 0; m < snf.M; ++m)
    if (qf_on_self(snf.skolem[m], alpha, ctx.lay, ctx.sig)) new_w |= 1u << m;

  SolverState out;
  out.i = st.i + 1;
  out.last_r = st.i > 0 ? r : K + 1;

  std::map<GroupKey, int> result;
  for (const auto& sp : splits) {
    auto it = expect.find(sp.group);
    if (it == expect.end() || it->second == 0)
      throw InputError("split arity mismatch: unknown or exhausted group");
    int total = 0;
    for (const auto& [t, c] : sp.parts) {
      if (c < 0) throw InputError("split arity mismatch: negative count");
      total += c;
      // validate against the beta cell and psi0
      TwoType frame;
      frame.tx = sp.group.alpha;
      frame.ty = alpha;
      apply_aligned_frame(frame, ctx.lay, sp.group.p, sp.group.q);
      TwoType probe = t;
      // compare the non-binary part against the frame
      TwoType masked = probe;
      for (int i2 = 0; i2 < 2 * ctx.lay.b; ++i2) masked.set(i2, false);
      if (!(masked == frame)) throw InputError("improper 2-type for its beta cell");
      if (!qf_on_pair(snf.psi0, t, ctx.lay, ctx.sig, false) ||
          !qf_on_pair(snf.psi0, t, ctx.lay, ctx.sig, true))
        throw InputError("psi0 violation in a split 2-type");
      uint32_t wx = 0, wy = 0;
      for (int m = 0; m < snf.M; ++m) {
        if (qf_on_pair(snf.skolem[m], t, ctx.lay, ctx.sig, false)) wx |= 1u << m;
        if (qf_on_pair(snf.skolem[m], t, ctx.lay, ctx.sig, true)) wy |= 1u << m;
      }
      if (c > 0) {
        GroupKey nk = sp.group;
        nk.W |= wx;
        result[nk] += c;
        new_w |= wy;
      }
    }
    if (total != it->second)
      throw InputError("split arity mismatch: counts do not sum to the group size");
    expect.erase(it);
  }
  if (!expect.empty()) throw InputError("split arity mismatch: group without a split");

  GroupKey self;
  self.alpha = alpha;
  self.W = new_w;
  self.p = 1;
  self.q = 1;
  result[self] += 1;

  for (const auto& [k, c] : result) out.counts.emplace_back(k, c);
  out.last_r = st.i > 0 ? r : K + 1;
  return out;
}

// ---------------------------------------------------------------------------
// decide_preorder_succ
// ---------------------------------------------------------------------------

namespace {

struct StateRec {
  SolverState state;
  int parent = -1;  // index in the previous layer
  ElementStep step;
};

// Enumerates the compositions of `total` over `parts` slots in
// lexicographic order.
void compositions(int total, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int c = 0; c <= total; ++c) {
    cur.push_back(c);
    compositions(total - c, parts - 1, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

SolverOutcome decide_preorder_succ(const SnfSentence& snf, const SolverOptions& opts) {
  check_profile(snf);
  if (opts.cap < 1) throw InputError("cap must be at least 1");
  SolveCtx ctx(snf);
  const int K = snf.K;
  const uint32_t full = full_mask(snf.M);
  auto t0 = Clock::now();

  SolverOutcome oc;
  {
    long long alpha_count = 1ll << ctx.lay.one_width();
    long long wspace = snf.M >= 62 ? (1ll << 62) : (1ll << snf.M);
    oc.group_key_bound = alpha_count * wspace * (K + 1) * (K + 2) / 2;
  }

  long long budget_nodes = opts.budget.nodes;
  long long spent = 0;
  auto tick = [&]() {
    if (++spent, budget_nodes > 0 && spent > budget_nodes)
      throw BudgetExceeded("solver node budget exhausted");
    if (opts.budget.seconds > 0 && (spent & 0xfff) == 0) {
      double el = std::chrono::duration<double>(Clock::now() - t0).count();
      if (el > opts.budget.seconds) throw BudgetExceeded("solver time budget exhausted");
    }
  };

  std::vector<std::vector<StateRec>> layers(1);  // layers[i-1] = states after i elements
  auto audit = [&](const SolverState& st) {
    oc.max_group_keys = std::max(oc.max_group_keys, int(st.counts.size()));
    if (int(st.counts.size()) > oc.group_key_bound)
      throw std::logic_error("counting-function domain exceeded its bound");
  };

  // layer 1
  {
    std::unordered_map<SolverState, int, StateHash> seen;
    for (size_t ai = 0; ai < ctx.viable.size(); ++ai) {
      SolverState st;
      st.i = 1;
      st.last_r = K + 1;
      GroupKey gk{ctx.viable[ai], ctx.self_mask[ai], 1, 1};
      st.counts.emplace_back(gk, 1);
      audit(st);
      if (!opts.memoize || seen.emplace(st, 1).second) {
        ElementStep step;
        step.r = K + 1;
        step.alpha = ctx.viable[ai];
        layers[0].push_back({st, -1, std::move(step)});
      }
    }
    oc.states_explored += int(layers[0].size());
  }

  auto accepting = [&](const SolverState& st) {
    for (const auto& [k, c] : st.counts)
      if ((k.W & full) != full) return false;
    return true;
  };

  auto finish_sat = [&](int layer, int idx) {
    // walk parents to build the transcript
    std::vector<ElementStep> steps;
    int li = layer, ii = idx;
    while (li >= 0) {
      steps.push_back(layers[li][ii].step);
      ii = layers[li][ii].parent;
      --li;
    }
    std::reverse(steps.begin(), steps.end());
    oc.transcript.steps = std::move(steps);
    oc.verdict.status = VerdictStatus::Sat;
    oc.verdict.explored_cap = layer + 1;
    Structure model = reconstruct_model(oc.transcript, snf);
    oc.verdict.model = std::move(model);
  };

  try {
    for (int layer = 0; layer < opts.cap; ++layer) {
      for (size_t si = 0; si < layers[layer].size(); ++si)
        if (accepting(layers[layer][si].state)) {
          finish_sat(layer, int(si));
          oc.verdict.stats.nodes = spent;
          oc.verdict.stats.millis =
              std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
          oc.verdict.stats.largest_size = layer + 1;
          return oc;
        }
      if (layer + 1 >= opts.cap) break;

      layers.emplace_back();
      std::unordered_map<SolverState, int, StateHash> seen;
      for (size_t si = 0; si < layers[layer].size(); ++si) {
        const SolverState& st = layers[layer][si].state;
        for (int r = 1; r <= K + 1; ++r) {
          // p/q update shared across alpha choices
          std::vector<std::pair<GroupKey, int>> updated;
          for (auto [k, c] : st.counts) {
            if (k.q <= r) {
              k.p = k.q;
              k.q = uint8_t(r);
            }
            updated.emplace_back(k, c);
          }
          std::map<GroupKey, int> groups;
          for (const auto& [k, c] : updated) groups[k] += c;

          for (size_t ai = 0; ai < ctx.viable.size(); ++ai) {
            tick();
            const OneType& alpha = ctx.viable[ai];
            // candidate choices per group
            struct GroupPlan {
              GroupKey key;
              int count;
              const std::vector<CellChoice>* choices;
            };
            std::vector<GroupPlan> plan;
            bool dead = false;
            for (const auto& [k, c] : groups) {
              const auto& ch = ctx.choices(k.alpha, alpha, k.p, k.q);
              if (ch.empty()) {
                dead = true;
                break;
              }
              plan.push_back({k, c, &ch});
            }
            if (dead) continue;

            // enumerate split combinations group by group
            SolverState base;
            base.i = st.i + 1;
            base.last_r = r;
            std::vector<SplitAssign> steps_splits(plan.size());

            std::function<void(size_t, std::map<GroupKey, int>&, uint32_t)> rec =
                [&](size_t gi, std::map<GroupKey, int>& acc, uint32_t neww) {
                  if (gi == plan.size()) {
                    tick();
                    GroupKey self{alpha, ctx.self_mask[ai] | neww, 1, 1};
                    SolverState ns;
                    ns.i = st.i + 1;
                    ns.last_r = r;
                    auto acc2 = acc;
                    acc2[self] += 1;
                    for (const auto& [k, c] : acc2) ns.counts.emplace_back(k, c);
                    audit(ns);
                    if (opts.memoize && !seen.emplace(ns, 1).second) return;
                    ElementStep step;
                    step.r = r;
                    step.alpha = alpha;
                    step.splits = steps_splits;
                    layers[layer + 1].push_back({std::move(ns), int(si), std::move(step)});
                    return;
                  }
                  const GroupPlan& gp = plan[gi];
                  int t = int(gp.choices->size());
                  std::vector<int> cur;
                  compositions(gp.count, t, cur, [&](const std::vector<int>& comp) {
                    tick();
                    SplitAssign sa;
                    sa.group = gp.key;
                    uint32_t neww2 = neww;
                    std::map<GroupKey, int> acc2 = acc;
                    for (int ci = 0; ci < t; ++ci) {
                      if (comp[ci] == 0) continue;
                      const CellChoice& cc = (*gp.choices)[ci];
                      sa.parts.emplace_back(cc.type, comp[ci]);
                      GroupKey nk = gp.key;
                      nk.W |= cc.wx;
                      acc2[nk] += comp[ci];
                      neww2 |= cc.wy;
                    }
                    steps_splits[gi] = sa;
                    rec(gi + 1, acc2, neww2);
                  });
                };
            std::map<GroupKey, int> acc0;
            rec(0, acc0, 0);
          }
        }
      }
      oc.states_explored += int(layers[layer + 1].size());
    }
  } catch (const BudgetExceeded&) {
    oc.verdict.status = VerdictStatus::Unknown;
    oc.verdict.explored_cap = opts.cap;
    oc.verdict.stats.nodes = spent;
    oc.verdict.stats.millis =
        std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    return oc;
  }

  oc.verdict.status = VerdictStatus::Unknown;  // never UnsatCertified here
  oc.verdict.explored_cap = opts.cap;
  oc.verdict.stats.nodes = spent;
  oc.verdict.stats.millis =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  oc.verdict.stats.largest_size = opts.cap;
  return oc;
}

// ---------------------------------------------------------------------------
// reconstruct_model
// ---------------------------------------------------------------------------

Structure reconstruct_model(const RunTranscript& tr, const SnfSentence& snf) {
  check_profile(snf);
  const int N = int(tr.steps.size());
  if (N == 0) throw InputError("empty transcript");
  SolveCtx ctx(snf);
  const int K = snf.K;
  const TypeLayout& lay = ctx.lay;

  Structure w = Structure::empty(ctx.sig, N, true);
  if (ctx.sig.levels == 0) w.pre.clear();

  std::vector<OneType> alpha(N);
  std::vector<GroupKey> key(N);
  std::vector<uint32_t> W(N, 0);

  for (int i = 0; i < N; ++i) {
    const ElementStep& step = tr.steps[i];
    int r = i == 0 ? K + 1 : step.r;
    if (i > 0 && (r < 1 || r > K + 1)) throw InputError("transcript r out of range");
    // labels
    for (int k = 1; k <= K; ++k) {
      int prev = i == 0 ? 0 : w.pre[k - 1][i - 1];
      int lvl = i == 0 ? 0 : prev + (k < r ? 1 : 0);
      w.pre[k - 1][i] = lvl;
      w.eq[k - 1][i] = lvl;
    }
    alpha[i] = step.alpha;
    if (!qf_on_self(snf.psi0, step.alpha, lay, ctx.sig))
      throw InputError("transcript alpha violates psi0(x,x)");
    for (int u = 0; u < lay.u; ++u) w.set_u(u, i, step.alpha.get(u));
    for (int b = 0; b < lay.b; ++b) w.set_b(b, i, i, step.alpha.get(lay.u + b));
    uint32_t wi = 0;
    for (int m = 0; m < snf.M; ++m)
      if (qf_on_self(snf.skolem[m], step.alpha, lay, ctx.sig)) wi |= 1u << m;

    if (i > 0) {
      // p/q update for prior elements
      for (int j = 0; j < i; ++j)
        if (key[j].q <= r) {
          key[j].p = key[j].q;
          key[j].q = uint8_t(r);
        }
      // group members in canonical order
      std::map<GroupKey, std::vector<int>> members;
      for (int j = 0; j < i; ++j) {
        GroupKey k = key[j];
        k.W = W[j];
        k.alpha = alpha[j];
        members[k].push_back(j);
      }
      std::map<GroupKey, const SplitAssign*> by_group;
      for (const auto& sa : step.splits) {
        if (by_group.count(sa.group)) throw InputError("duplicate split for a group");
        by_group[sa.group] = &sa;
      }
      if (by_group.size() != members.size())
        throw InputError("split arity mismatch: group count differs");
      for (const auto& [gk, js] : members) {
        auto it = by_group.find(gk);
        if (it == by_group.end()) throw InputError("split refers to a missing group");
        const SplitAssign& sa = *it->second;
        size_t at = 0;
        int assigned = 0;
        for (const auto& [t, c] : sa.parts) {
          // frame must match the labels: Ek(j,i) iff q <= k, Sk iff p <= k < q
          for (int k = 1; k <= K; ++k) {
            bool ek = gk.q <= k;
            bool sk = gk.p <= k && k < gk.q;
            if (t.get(lay.bit_eq(k)) != ek || t.get(lay.bit_sxy(k)) != sk ||
                t.get(lay.bit_syx(k)) || !t.get(lay.bit_xpy(k)) ||
                t.get(lay.bit_ypx(k)) != ek)
              throw InputError("transcript 2-type conflicts with the label frame");
          }
          if (!(t.tx == gk.alpha) || !(t.ty == step.alpha))
            throw InputError("transcript 2-type endpoint mismatch");
          if (!qf_on_pair(snf.psi0, t, lay, ctx.sig, false) ||
              !qf_on_pair(snf.psi0, t, lay, ctx.sig, true))
            throw InputError("transcript 2-type violates psi0");
          uint32_t wx = 0, wy = 0;
          for (int m = 0; m < snf.M; ++m) {
            if (qf_on_pair(snf.skolem[m], t, lay, ctx.sig, false)) wx |= 1u << m;
            if (qf_on_pair(snf.skolem[m], t, lay, ctx.sig, true)) wy |= 1u << m;
          }
          for (int cc = 0; cc < c; ++cc) {
            if (at >= js.size())
              throw InputError("split arity mismatch: counts exceed the group size");
            int j = js[at++];
            for (int bb = 0; bb < lay.b; ++bb) {
              w.set_b(bb, j, i, t.get(lay.bit_rxy(bb)));
              w.set_b(bb, i, j, t.get(lay.bit_ryx(bb)));
            }
            // sanity: label-derived frame agrees with the asserted bits
            for (int k = 1; k <= K; ++k)
              if (w.eq_at(k, j, i) != t.get(lay.bit_eq(k)) ||
                  w.succ_at(k, j, i) != t.get(lay.bit_sxy(k)))
                throw std::logic_error("label frame diverged from the 2-type");
            W[j] |= wx;
            wi |= wy;
          }
          assigned += c;
        }
        if (assigned != int(js.size()))
          throw InputError("split arity mismatch: counts do not cover the group");
      }
    }
    W[i] = wi;
    key[i] = GroupKey{alpha[i], 0, 1, 1};
  }
  const uint32_t full = full_mask(snf.M);
  for (int j = 0; j < N; ++j)
    if ((W[j] & full) != full) throw InputError("non-accepting transcript");
  return w;
}

// ---------------------------------------------------------------------------
// transcript JSON lines
// ---------------------------------------------------------------------------

std::string transcript_to_jsonl(const RunTranscript& tr) {
  using nlohmann::json;
  std::ostringstream out;
  for (size_t i = 0; i < tr.steps.size(); ++i) {
    const auto& st = tr.steps[i];
    json j;
    j["i"] = i + 1;
    j["r"] = st.r;
    j["alpha"] = st.alpha.bits;
    json splits = json::array();
    for (const auto& sa : st.splits) {
      json js;
      js["group"] = {{"alpha", sa.group.alpha.bits},
                     {"W", sa.group.W},
                     {"p", sa.group.p},
                     {"q", sa.group.q}};
      json parts = json::array();
      for (const auto& [t, c] : sa.parts)
        parts.push_back({{"tx", t.tx.bits}, {"ty", t.ty.bits}, {"cross", t.cross}, {"count", c}});
      js["parts"] = parts;
      splits.push_back(js);
    }
    j["splits"] = splits;
    out << j.dump() << "\n";
  }
  return out.str();
}

RunTranscript transcript_from_jsonl(const std::string& text) {
  using nlohmann::json;
  RunTranscript tr;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    ElementStep st;
    st.r = j["r"].get<int>();
    st.alpha.bits = j["alpha"].get<uint32_t>();
    for (const auto& js : j["splits"]) {
      SplitAssign sa;
      sa.group.alpha.bits = js["group"]["alpha"].get<uint32_t>();
      sa.group.W = js["group"]["W"].get<uint32_t>();
      sa.group.p = uint8_t(js["group"]["p"].get<int>());
      sa.group.q = uint8_t(js["group"]["q"].get<int>());
      for (const auto& jp : js["parts"]) {
        TwoType t;
        t.tx.bits = jp["tx"].get<uint32_t>();
        t.ty.bits = jp["ty"].get<uint32_t>();
        t.cross = jp["cross"].get<uint64_t>();
        sa.parts.emplace_back(t, jp["count"].get<int>());
      }
      st.splits.push_back(std::move(sa));
    }
    tr.steps.push_back(std::move(st));
  }
  return tr;
}

}  // namespace nesteq
