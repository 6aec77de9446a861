#include "nesteq/reductions.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <json.hpp>

#include "nesteq/snf.hpp"

namespace nesteq {

using nlohmann::json;

namespace {

FormulaPtr f_or_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_false();
  FormulaPtr acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = f_or(acc, fs[i]);
  return acc;
}

bool reserved_name(const std::string& s) {
  if (s == "x" || s == "y" || s == "true" || s == "false" || s == "forall" ||
      s == "exists")
    return true;
  auto digits_after = [&](size_t p) {
    if (s.size() <= p) return false;
    for (size_t i = p; i < s.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (!s.empty() && (s[0] == 'E' || s[0] == 'S' || s[0] == 'F') && digits_after(1))
    return true;
  if (s.rfind("pre", 0) == 0 && digits_after(3)) return true;
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Corridor tiling
// ---------------------------------------------------------------------------

void TilingInstance::validate() const {
  if (colours.empty()) throw InputError("tiling: colour set is empty");
  if (n < 1) throw InputError("tiling: n must be >= 1");
  std::set<std::string> cs(colours.begin(), colours.end());
  if (cs.size() != colours.size()) throw InputError("tiling: duplicate colours");
  if (!cs.count(c0) || !cs.count(c1)) throw InputError("tiling: c0/c1 not in colours");
  for (const auto& [a, b] : H)
    if (!cs.count(a) || !cs.count(b)) throw InputError("tiling: H mentions unknown colour");
  for (const auto& [a, b] : V)
    if (!cs.count(a) || !cs.count(b)) throw InputError("tiling: V mentions unknown colour");
  for (const auto& c : colours)
    if (reserved_name("P" + c)) throw InputError("tiling: colour name clashes with a symbol");
}

namespace {

std::string bit_pred(int j) { return "B" + std::to_string(j); }
std::string col_pred(const std::string& c) { return "P" + c; }

FormulaPtr all_off(const TilingInstance& t, Term v) {
  std::vector<FormulaPtr> parts;
  for (int j = 0; j < t.n; ++j) parts.push_back(f_not(f_atom(atom_unary(bit_pred(j), v))));
  return f_and_all(parts);
}
FormulaPtr all_on(const TilingInstance& t, Term v) {
  std::vector<FormulaPtr> parts;
  for (int j = 0; j < t.n; ++j) parts.push_back(f_atom(atom_unary(bit_pred(j), v)));
  return f_and_all(parts);
}
FormulaPtr eq_pos(const TilingInstance& t, Term u, Term v) {
  std::vector<FormulaPtr> parts;
  for (int j = 0; j < t.n; ++j)
    parts.push_back(f_iff(f_atom(atom_unary(bit_pred(j), u)), f_atom(atom_unary(bit_pred(j), v))));
  return f_and_all(parts);
}
// binary increment: lowest clear bit of u flips on, lower bits flip off,
// higher bits agree
FormulaPtr succ_pos(const TilingInstance& t, Term u, Term v) {
  std::vector<FormulaPtr> cases;
  for (int j = 0; j < t.n; ++j) {
    std::vector<FormulaPtr> parts;
    parts.push_back(f_not(f_atom(atom_unary(bit_pred(j), u))));
    parts.push_back(f_atom(atom_unary(bit_pred(j), v)));
    for (int l = 0; l < j; ++l) {
      parts.push_back(f_atom(atom_unary(bit_pred(l), u)));
      parts.push_back(f_not(f_atom(atom_unary(bit_pred(l), v))));
    }
    for (int l = j + 1; l < t.n; ++l)
      parts.push_back(f_iff(f_atom(atom_unary(bit_pred(l), u)), f_atom(atom_unary(bit_pred(l), v))));
    cases.push_back(f_and_all(parts));
  }
  return f_or_all(cases);
}

}  // namespace

FormulaPtr tiling_to_formula(const TilingInstance& t) {
  t.validate();
  Term x = term_x(), y = term_y();
  auto E1 = [&](Term u, Term v) { return f_atom(atom_level(AtomKind::EqLevel, 1, u, v)); };
  auto S1 = [&](Term u, Term v) { return f_atom(atom_level(AtomKind::SuccLevel, 1, u, v)); };
  std::vector<FormulaPtr> conj;

  // grid formation
  conj.push_back(f_forall(0, f_exists(1, f_and(all_off(t, y), E1(x, y)))));
  conj.push_back(f_forall(
      0, f_implies(f_not(all_on(t, x)),
                   f_exists(1, f_and(succ_pos(t, x, y), E1(x, y))))));
  // boundary colours
  conj.push_back(f_forall(
      0, f_implies(f_and(all_off(t, x), f_not(f_exists(1, S1(y, x)))),
                   f_atom(atom_unary(col_pred(t.c0), x)))));
  conj.push_back(f_forall(
      0, f_implies(f_and(all_on(t, x), f_not(f_exists(1, S1(x, y)))),
                   f_atom(atom_unary(col_pred(t.c1), x)))));
  // horizontal: equal positions agree on colours
  {
    std::vector<FormulaPtr> same;
    for (const auto& c : t.colours)
      same.push_back(f_iff(f_atom(atom_unary(col_pred(c), x)),
                           f_atom(atom_unary(col_pred(c), y))));
    conj.push_back(f_forall(
        0, f_forall(1, f_implies(f_and(E1(x, y), eq_pos(t, x, y)), f_and_all(same)))));
  }
  // horizontal adjacency
  {
    std::vector<FormulaPtr> opts;
    for (const auto& [a, b] : t.H)
      opts.push_back(f_and(f_atom(atom_unary(col_pred(a), x)),
                           f_atom(atom_unary(col_pred(b), y))));
    conj.push_back(f_forall(
        0, f_forall(1, f_implies(f_and(E1(x, y), succ_pos(t, x, y)), f_or_all(opts)))));
  }
  // vertical adjacency
  {
    std::vector<FormulaPtr> opts;
    for (const auto& [a, b] : t.V)
      opts.push_back(f_and(f_atom(atom_unary(col_pred(a), x)),
                           f_atom(atom_unary(col_pred(b), y))));
    conj.push_back(f_forall(
        0, f_forall(1, f_implies(f_and(S1(x, y), eq_pos(t, x, y)), f_or_all(opts)))));
  }
  // exactly one colour per cell
  {
    std::vector<FormulaPtr> opts;
    for (const auto& c : t.colours) {
      std::vector<FormulaPtr> parts;
      parts.push_back(f_atom(atom_unary(col_pred(c), x)));
      for (const auto& c2 : t.colours)
        if (c2 != c) parts.push_back(f_not(f_atom(atom_unary(col_pred(c2), x))));
      opts.push_back(f_and_all(parts));
    }
    conj.push_back(f_forall(0, f_or_all(opts)));
  }
  return f_and_all(conj);
}

TilingSolution decode_tiling(const Structure& s, const TilingInstance& t) {
  t.validate();
  if (!evaluate(s, tiling_to_formula(t), {}))
    throw InputError("decode_tiling: structure does not satisfy the tiling sentence");
  if (s.levels() < 1 || !s.has_pre())
    throw InputError("decode_tiling: structure lacks the row preorder");

  const int width = 1 << t.n;
  int rows = 0;
  for (int e = 0; e < s.n; ++e) rows = std::max(rows, s.pre[0][e] + 1);
  TilingSolution sol;
  sol.m = rows;
  sol.grid.assign(rows, std::vector<std::string>(width, ""));

  for (int e = 0; e < s.n; ++e) {
    int row = s.pre[0][e];
    int col = 0;
    for (int j = 0; j < t.n; ++j) {
      int idx = s.sig.unary_index(bit_pred(j));
      if (idx >= 0 && s.uval(idx, e)) col |= 1 << j;
    }
    std::string colour;
    for (const auto& c : t.colours) {
      int idx = s.sig.unary_index(col_pred(c));
      if (idx >= 0 && s.uval(idx, e)) {
        if (!colour.empty())
          throw InputError("decode_tiling: cell colour is not unique (generator bug)");
        colour = c;
      }
    }
    if (colour.empty())
      throw InputError("decode_tiling: cell has no colour (generator bug)");
    if (!sol.grid[row][col].empty())
      throw InputError("decode_tiling: duplicate column " + std::to_string(col) +
                       " in row " + std::to_string(row) + " (generator bug)");
    sol.grid[row][col] = colour;
  }
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < width; ++c)
      if (sol.grid[r][c].empty())
        throw InputError("decode_tiling: missing cell in the grid");
  return sol;
}

bool tiling_solution_valid(const TilingInstance& t, const TilingSolution& sol) {
  const int width = 1 << t.n;
  if (sol.m < 1) return false;
  for (const auto& row : sol.grid)
    if (int(row.size()) != width) return false;
  if (sol.grid[0][0] != t.c0) return false;
  if (sol.grid[sol.m - 1][width - 1] != t.c1) return false;
  auto inH = [&](const std::string& a, const std::string& b) {
    return std::find(t.H.begin(), t.H.end(), std::make_pair(a, b)) != t.H.end();
  };
  auto inV = [&](const std::string& a, const std::string& b) {
    return std::find(t.V.begin(), t.V.end(), std::make_pair(a, b)) != t.V.end();
  };
  for (int r = 0; r < sol.m; ++r)
    for (int c = 0; c + 1 < width; ++c)
      if (!inH(sol.grid[r][c], sol.grid[r][c + 1])) return false;
  for (int r = 0; r + 1 < sol.m; ++r)
    for (int c = 0; c < width; ++c)
      if (!inV(sol.grid[r][c], sol.grid[r + 1][c])) return false;
  return true;
}

std::string tiling_to_json(const TilingInstance& t) {
  json j;
  j["colours"] = t.colours;
  j["c0"] = t.c0;
  j["c1"] = t.c1;
  json h = json::array(), v = json::array();
  for (const auto& [a, b] : t.H) h.push_back(json::array({a, b}));
  for (const auto& [a, b] : t.V) v.push_back(json::array({a, b}));
  j["H"] = h;
  j["V"] = v;
  j["n"] = t.n;
  return j.dump(2);
}

TilingInstance tiling_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad tiling file: ") + e.what());
  }
  TilingInstance t;
  try {
    t.colours = j.at("colours").get<std::vector<std::string>>();
    t.c0 = j.at("c0").get<std::string>();
    t.c1 = j.at("c1").get<std::string>();
    for (const auto& p : j.at("H")) t.H.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    for (const auto& p : j.at("V")) t.V.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
    t.n = j.at("n").get<int>();
  } catch (const json::exception& e) {
    throw InputError(std::string("bad tiling file: ") + e.what());
  }
  t.validate();
  return t;
}

// ---------------------------------------------------------------------------
// Two-counter machines
// ---------------------------------------------------------------------------

void TwoCounterMachine::validate() const {
  if (states.empty()) throw InputError("tcm: no states");
  std::set<std::string> ss(states.begin(), states.end());
  if (ss.size() != states.size()) throw InputError("tcm: duplicate states");
  if (!ss.count(initial) || !ss.count(final))
    throw InputError("tcm: initial/final not in states");
  for (const auto& s : states)
    if (reserved_name(s) || s == "dE" || s == "dF" || s == "c1" || s == "c2")
      throw InputError("tcm: state name '" + s + "' clashes with a symbol");
  for (const auto& tr : delta)
    if (!ss.count(tr.from) || !ss.count(tr.to))
      throw InputError("tcm: transition mentions unknown state");
}

namespace {

FormulaPtr un(const std::string& p, Term v) { return f_atom(atom_unary(p, v)); }
FormulaPtr lvl(AtomKind k, int l, Term u, Term v) { return f_atom(atom_level(k, l, u, v)); }

FormulaPtr G2(Term u, Term v) {
  return f_and(lvl(AtomKind::EqLevel, 2, u, v), lvl(AtomKind::FLevel, 2, u, v));
}
FormulaPtr G1(Term u, Term v) {
  return f_or(lvl(AtomKind::EqLevel, 1, u, v), lvl(AtomKind::FLevel, 1, u, v));
}
// t(u,v): u's configuration is succeeded by v's
FormulaPtr t_link(Term u, Term v) {
  return f_or(f_and(f_and(lvl(AtomKind::EqLevel, 2, u, v), un("dE", u)), un("dF", v)),
              f_and(f_and(lvl(AtomKind::FLevel, 2, u, v), un("dF", u)), un("dE", v)));
}

// subject-parameterised macros; `sv` is 0 for x, 1 for y, the other variable
// is used for the inner quantifier
struct TcmMacros {
  Term var(int v) const { return v == 0 ? term_x() : term_y(); }

  FormulaPtr exists_fwd(int sv) const {  // exists w. t(s,w) & G1(s,w)
    Term s = var(sv), w = var(1 - sv);
    return f_exists(1 - sv, f_and(t_link(s, w), G1(s, w)));
  }
  FormulaPtr exists_bwd(int sv) const {  // exists w. t(w,s) & G1(s,w)
    Term s = var(sv), w = var(1 - sv);
    return f_exists(1 - sv, f_and(t_link(w, s), G1(s, w)));
  }
  FormulaPtr all_fwd(int sv, const std::string& ci) const {
    Term s = var(sv), w = var(1 - sv);
    return f_forall(1 - sv, f_implies(f_and(G2(s, w), un(ci, w)), exists_fwd(1 - sv)));
  }
  FormulaPtr all_bwd(int sv, const std::string& ci) const {
    Term s = var(sv), w = var(1 - sv);
    return f_forall(1 - sv, f_implies(f_and(G2(s, w), un(ci, w)), exists_bwd(1 - sv)));
  }
  FormulaPtr zero(int sv, const std::string& ci) const {
    Term s = var(sv), w = var(1 - sv);
    return f_forall(1 - sv, f_implies(G2(s, w), f_not(un(ci, w))));
  }
  FormulaPtr eq(int sv, const std::string& ci) const {
    Term s = var(sv), w = var(1 - sv);
    return f_and(all_fwd(sv, ci),
                 f_forall(1 - sv, f_implies(t_link(s, w), all_bwd(1 - sv, ci))));
  }
  FormulaPtr incr(int sv, const std::string& ci) const {
    Term s = var(sv), w = var(1 - sv);
    return f_and(all_fwd(sv, ci),
                 f_forall(1 - sv, f_implies(t_link(s, w), f_not(all_bwd(1 - sv, ci)))));
  }
  FormulaPtr decr(int sv, const std::string& ci) const {
    Term s = var(sv), w = var(1 - sv);
    return f_and(f_not(all_fwd(sv, ci)),
                 f_forall(1 - sv, f_implies(t_link(s, w), all_bwd(1 - sv, ci))));
  }
};

}  // namespace

FormulaPtr tcm_to_formula(const TwoCounterMachine& mach) {
  mach.validate();
  Term x = term_x(), y = term_y();
  TcmMacros mx;
  std::vector<FormulaPtr> conj;

  // (1) the d-partition
  conj.push_back(f_forall(0, f_iff(un("dE", x), f_not(un("dF", x)))));
  // (2) d is constant on G2-classes
  conj.push_back(f_forall(
      0, f_forall(1, f_implies(G2(x, y), f_iff(un("dE", x), un("dE", y))))));
  // (3)/(4) at most one configuration of each kind per E2/F2-class
  for (const char* d : {"dE", "dF"}) {
    conj.push_back(f_forall(
        0, f_forall(1, f_implies(f_and(f_and(lvl(AtomKind::EqLevel, 2, x, y), un(d, x)), un(d, y)),
                                 lvl(AtomKind::FLevel, 2, x, y)))));
    conj.push_back(f_forall(
        0, f_forall(1, f_implies(f_and(f_and(lvl(AtomKind::FLevel, 2, x, y), un(d, x)), un(d, y)),
                                 lvl(AtomKind::EqLevel, 2, x, y)))));
  }
  // (5) a unique state per configuration
  {
    std::vector<FormulaPtr> opts;
    for (const auto& s : mach.states) {
      std::vector<FormulaPtr> uniq;
      uniq.push_back(un(s, y));
      for (const auto& s2 : mach.states)
        if (s2 != s) uniq.push_back(f_not(un(s2, y)));
      opts.push_back(f_forall(1, f_implies(G2(x, y), f_and_all(uniq))));
    }
    conj.push_back(f_forall(0, f_or_all(opts)));
  }
  // (6) E1 and F1 agree inside a configuration
  conj.push_back(f_forall(
      0, f_forall(1, f_implies(f_and(G2(x, y), G1(x, y)),
                               f_and(lvl(AtomKind::EqLevel, 1, x, y),
                                     lvl(AtomKind::FLevel, 1, x, y))))));
  // (7) counter marks are exclusive
  conj.push_back(f_forall(0, f_or(f_not(un("c1", x)), f_not(un("c2", x)))));
  for (const std::string ci : {"c1", "c2"}) {
    // (8) counter marks propagate along G1
    conj.push_back(f_forall(
        0, f_forall(1, f_implies(f_and(G1(x, y), un(ci, x)), un(ci, y)))));
    // (9) at most one chain is born per step
    conj.push_back(f_forall(
        0, f_forall(1, f_implies(f_and(f_and(G2(x, y), f_and(un(ci, x), un(ci, y))),
                                       f_and(f_not(mx.exists_bwd(0)), f_not(mx.exists_bwd(1)))),
                                 lvl(AtomKind::EqLevel, 1, x, y)))));
    // (10) at most one chain dies per step
    conj.push_back(f_forall(
        0, f_forall(1, f_implies(f_and(f_and(G2(x, y), f_and(un(ci, x), un(ci, y))),
                                       f_and(f_not(mx.exists_fwd(0)), f_not(mx.exists_fwd(1)))),
                                 lvl(AtomKind::EqLevel, 1, x, y)))));
  }

  // transitions: every element of a non-final configuration steps
  for (const auto& s : mach.states) {
    if (s == mach.final) continue;
    std::vector<FormulaPtr> opts;
    for (const auto& tr : mach.delta) {
      if (tr.from != s) continue;
      std::vector<FormulaPtr> parts;
      parts.push_back(f_exists(1, t_link(x, y)));
      parts.push_back(f_forall(1, f_implies(t_link(x, y), un(tr.to, y))));
      auto add_op = [&](const std::string& ci, const std::string& cj, TcmOp op) {
        switch (op) {
          case TcmOp::Inc1:
          case TcmOp::Inc2:
            parts.push_back(mx.incr(0, ci));
            parts.push_back(mx.eq(0, cj));
            break;
          case TcmOp::Dec1:
          case TcmOp::Dec2:
            parts.push_back(mx.decr(0, ci));
            parts.push_back(mx.eq(0, cj));
            break;
          case TcmOp::Zero1:
          case TcmOp::Zero2:
            parts.push_back(mx.zero(0, ci));
            parts.push_back(mx.eq(0, ci));
            parts.push_back(mx.eq(0, cj));
            break;
        }
      };
      bool on1 = tr.op == TcmOp::Inc1 || tr.op == TcmOp::Dec1 || tr.op == TcmOp::Zero1;
      add_op(on1 ? "c1" : "c2", on1 ? "c2" : "c1", tr.op);
      opts.push_back(f_and_all(parts));
    }
    conj.push_back(f_forall(0, f_implies(un(s, x), f_or_all(opts))));
  }

  // initial configuration: state initial, d_E, both counters zero, no
  // predecessor configuration
  conj.push_back(f_exists(
      0, f_and_all({un(mach.initial, x), un("dE", x), mx.zero(0, "c1"), mx.zero(0, "c2"),
                    f_not(f_exists(1, t_link(y, x)))})));

  return f_and_all(conj);
}

// ---------------------------------------------------------------------------
// runs and witnesses
// ---------------------------------------------------------------------------

void validate_run(const TwoCounterMachine& mach, const TcmRun& run) {
  mach.validate();
  if (run.empty()) throw InputError("tcm run: empty run");
  if (run.front().state != mach.initial || run.front().c1 != 0 || run.front().c2 != 0)
    throw InputError("tcm run: must start at <initial, 0, 0>");
  if (run.back().state != mach.final) throw InputError("tcm run: must end in the final state");
  for (size_t i = 0; i + 1 < run.size(); ++i) {
    if (run[i].state == mach.final)
      throw InputError("tcm run: final state reached before the end");
    const auto& a = run[i];
    const auto& b = run[i + 1];
    if (a.c1 < 0 || a.c2 < 0) throw InputError("tcm run: negative counter");
    bool ok = false;
    for (const auto& tr : mach.delta) {
      if (tr.from != a.state || tr.to != b.state) continue;
      switch (tr.op) {
        case TcmOp::Inc1: ok = b.c1 == a.c1 + 1 && b.c2 == a.c2; break;
        case TcmOp::Inc2: ok = b.c2 == a.c2 + 1 && b.c1 == a.c1; break;
        case TcmOp::Dec1: ok = a.c1 > 0 && b.c1 == a.c1 - 1 && b.c2 == a.c2; break;
        case TcmOp::Dec2: ok = a.c2 > 0 && b.c2 == a.c2 - 1 && b.c1 == a.c1; break;
        case TcmOp::Zero1: ok = a.c1 == 0 && b.c1 == 0 && b.c2 == a.c2; break;
        case TcmOp::Zero2: ok = a.c2 == 0 && b.c2 == 0 && b.c1 == a.c1; break;
      }
      if (ok) break;
    }
    if (!ok)
      throw InputError("tcm run: step " + std::to_string(i) + " does not respect delta");
  }
}

TcmWitness run_to_structure(const TwoCounterMachine& mach, const TcmRun& run) {
  validate_run(mach, run);

  // configurations: the run, then wind-down steps retiring one chain per
  // counter per step until at most one chain per counter remains
  struct Config {
    std::string state;
    long long c1, c2;
  };
  std::vector<Config> cfgs;
  for (const auto& rc : run) cfgs.push_back({rc.state, rc.c1, rc.c2});
  {
    long long c1 = run.back().c1, c2 = run.back().c2;
    while (c1 > 1 || c2 > 1) {
      if (c1 > 1) --c1;
      if (c2 > 1) --c2;
      cfgs.push_back({mach.final, c1, c2});
    }
  }
  const int T = int(cfgs.size());

  // counter chains ("units"): birth/death configs, LIFO retirement
  struct Unit {
    int counter;  // 1 or 2
    int birth, death;
  };
  std::vector<Unit> units;
  {
    std::vector<int> live1, live2;
    auto adjust = [&](int t, long long prev, long long cur, int counter,
                      std::vector<int>& live) {
      if (cur > prev) {
        units.push_back({counter, t, T - 1});
        live.push_back(int(units.size()) - 1);
      } else if (cur < prev) {
        if (live.empty()) throw std::logic_error("unit bookkeeping underflow");
        units[live.back()].death = t - 1;
        live.pop_back();
      }
    };
    long long p1 = 0, p2 = 0;
    for (int t = 0; t < T; ++t) {
      adjust(t, p1, cfgs[t].c1, 1, live1);
      adjust(t, p2, cfgs[t].c2, 2, live2);
      p1 = cfgs[t].c1;
      p2 = cfgs[t].c2;
    }
  }

  // elements: one spine element per configuration plus one element per live
  // unit per configuration
  struct Elem {
    int cfg;
    int unit;  // -1 = spine
  };
  std::vector<Elem> elems;
  for (int t = 0; t < T; ++t) {
    elems.push_back({t, -1});
    for (size_t u = 0; u < units.size(); ++u)
      if (units[u].birth <= t && t <= units[u].death) elems.push_back({t, int(u)});
  }
  const int n = int(elems.size());

  Signature sig;
  sig.unary = {"c1", "c2", "dE", "dF"};
  for (const auto& s : mach.states) sig.unary.push_back(s);
  std::sort(sig.unary.begin(), sig.unary.end());
  sig.levels = 2;
  sig.f_levels = 2;
  for (int k = 1; k <= 2; ++k) sig.used_eq_levels.insert(k);

  Structure s = Structure::empty(sig, n, false);

  // E2: configurations {2j, 2j+1}; F2: {2j+1, 2j+2} with config 0 alone
  auto e2_of = [](int t) { return t / 2; };
  auto f2_of = [](int t) { return (t + 1) / 2; };
  // E1/F1 ids: spines are singletons; a unit element pairs with the same
  // unit across the E2 (resp. F2) boundary
  std::map<std::pair<int, int>, int> e1_ids, f1_ids;
  auto dense = [](std::map<std::pair<int, int>, int>& m, std::pair<int, int> k) {
    auto it = m.find(k);
    if (it != m.end()) return it->second;
    int id = int(m.size());
    m.emplace(k, id);
    return id;
  };

  for (int e = 0; e < n; ++e) {
    int t = elems[e].cfg;
    s.eq[1][e] = e2_of(t);
    s.feq[1][e] = f2_of(t);
    if (elems[e].unit < 0) {
      s.eq[0][e] = dense(e1_ids, {-1 - e, 0});  // singleton
      s.feq[0][e] = dense(f1_ids, {-1 - e, 0});
    } else {
      s.eq[0][e] = dense(e1_ids, {elems[e].unit, e2_of(t)});
      s.feq[0][e] = dense(f1_ids, {elems[e].unit, f2_of(t)});
    }
    const Config& c = cfgs[t];
    auto setu = [&](const std::string& name) { s.set_u(sig.unary_index(name), e, true); };
    setu(t % 2 == 0 ? "dE" : "dF");
    setu(c.state);
    if (elems[e].unit >= 0) setu(units[elems[e].unit].counter == 1 ? "c1" : "c2");
  }

  TcmWitness w;
  w.structure = std::move(s);
  for (int e = 0; e < n; ++e) w.config_of_element.push_back(elems[e].cfg);
  w.run_configs = int(run.size());
  w.total_configs = T;
  return w;
}

std::string tcm_to_json(const TwoCounterMachine& m) {
  json j;
  j["states"] = m.states;
  j["initial"] = m.initial;
  j["final"] = m.final;
  json d = json::array();
  auto opname = [](TcmOp op) {
    switch (op) {
      case TcmOp::Inc1: return "inc1";
      case TcmOp::Inc2: return "inc2";
      case TcmOp::Dec1: return "dec1";
      case TcmOp::Dec2: return "dec2";
      case TcmOp::Zero1: return "zero1";
      case TcmOp::Zero2: return "zero2";
    }
    return "?";
  };
  for (const auto& tr : m.delta) d.push_back(json::array({tr.from, opname(tr.op), tr.to}));
  j["delta"] = d;
  return j.dump(2);
}

TwoCounterMachine tcm_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad machine file: ") + e.what());
  }
  TwoCounterMachine m;
  try {
    m.states = j.at("states").get<std::vector<std::string>>();
    m.initial = j.at("initial").get<std::string>();
    m.final = j.at("final").get<std::string>();
    for (const auto& tr : j.at("delta")) {
      std::string op = tr[1].get<std::string>();
      TcmOp o;
      if (op == "inc1") o = TcmOp::Inc1;
      else if (op == "inc2") o = TcmOp::Inc2;
      else if (op == "dec1") o = TcmOp::Dec1;
      else if (op == "dec2") o = TcmOp::Dec2;
      else if (op == "zero1") o = TcmOp::Zero1;
      else if (op == "zero2") o = TcmOp::Zero2;
      else throw InputError("bad machine file: unknown op '" + op + "'");
      m.delta.push_back({tr[0].get<std::string>(), o, tr[2].get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("bad machine file: ") + e.what());
  }
  m.validate();
  return m;
}

std::string run_to_json(const TcmRun& r) {
  json j = json::array();
  for (const auto& c : r) j.push_back(json::array({c.state, c.c1, c.c2}));
  return j.dump(2);
}

TcmRun run_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("bad run file: ") + e.what());
  }
  TcmRun r;
  for (const auto& c : j)
    r.push_back({c[0].get<std::string>(), c[1].get<long long>(), c[2].get<long long>()});
  return r;
}

}  // namespace nesteq
