#include "nesteq/corpus.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "nesteq/solver.hpp"

namespace nesteq {

namespace {

// literal pool for the seeded SNF-shaped generator
struct LitPool {
  std::vector<FormulaPtr> lits;   // positive literals over x,y
  std::vector<FormulaPtr> ylits;  // those mentioning y (witness material)

  void add(FormulaPtr f, bool mentions_y) {
    lits.push_back(f);
    if (mentions_y) ylits.push_back(f);
  }
};

LitPool make_pool(LogicId logic, int u, int b, int K, Rng& rng) {
  (void)rng;
  LitPool p;
  Term x = term_x(), y = term_y();
  const char* unames[] = {"P", "Q"};
  for (int i = 0; i < u; ++i) {
    p.add(f_atom(atom_unary(unames[i], x)), false);
    p.add(f_atom(atom_unary(unames[i], y)), true);
  }
  if (b > 0) {
    p.add(f_atom(atom_binary("R", x, y)), true);
    p.add(f_atom(atom_binary("R", y, x)), true);
  }
  for (int k = 1; k <= K; ++k) {
    p.add(f_atom(atom_level(AtomKind::EqLevel, k, x, y)), true);
    if (logic == LogicId::Preorder || logic == LogicId::PreorderSucc)
      p.add(f_atom(atom_level(AtomKind::PreLevel, k, x, y)), true);
    if (logic == LogicId::PreorderSucc)
      p.add(f_atom(atom_level(AtomKind::SuccLevel, k, x, y)), true);
  }
  if (logic == LogicId::OrderEq) p.add(f_atom(atom_less(x, y)), true);
  return p;
}

FormulaPtr pick(const std::vector<FormulaPtr>& v, Rng& rng) {
  return v[rng.below(int(v.size()))];
}

FormulaPtr maybe_neg(FormulaPtr f, Rng& rng, int neg_percent) {
  return rng.chance(neg_percent) ? f_not(f) : f;
}

}  // namespace

std::vector<FormulaPtr> generate_corpus(const CorpusOptions& opts) {
  Rng rng(opts.seed);
  std::vector<FormulaPtr> out;
  Term x = term_x(), y = term_y();
  while (int(out.size()) < opts.count) {
    int u = rng.below(opts.max_unary + 1);
    int b = opts.max_binary > 0 && rng.chance(25) ? 1 : 0;
    int K = 1 + rng.below(opts.max_levels);
    int M = 1 + rng.below(opts.max_skolem);
    LitPool pool = make_pool(opts.logic, u, b, K, rng);
    if (pool.ylits.empty()) continue;

    std::vector<FormulaPtr> conj;
    // psi0: a few universal implications
    int nimp = rng.below(3);
    std::vector<FormulaPtr> psi0;
    for (int i = 0; i < nimp; ++i) {
      FormulaPtr lhs = maybe_neg(pick(pool.lits, rng), rng, opts.twin_friendly ? 0 : 25);
      FormulaPtr rhs = maybe_neg(pick(pool.lits, rng), rng, opts.twin_friendly ? 10 : 30);
      if (rng.chance(30)) rhs = f_or(rhs, pick(pool.lits, rng));
      psi0.push_back(f_implies(lhs, rhs));
    }
    if (b > 0) {
      // tie R to the frame so pairwise choices stay narrow
      FormulaPtr frame;
      if (opts.logic == LogicId::OrderEq)
        frame = rng.chance(50) ? f_atom(atom_level(AtomKind::EqLevel, 1, x, y))
                               : f_atom(atom_less(x, y));
      else if (opts.logic == LogicId::Preorder || opts.logic == LogicId::PreorderSucc)
        frame = rng.chance(50) ? f_atom(atom_level(AtomKind::EqLevel, 1, x, y))
                               : f_atom(atom_level(AtomKind::PreLevel, 1, x, y));
      else
        frame = f_atom(atom_level(AtomKind::EqLevel, 1, x, y));
      psi0.push_back(f_implies(f_atom(atom_binary("R", x, y)), frame));
    }
    if (!psi0.empty()) conj.push_back(f_forall(0, f_forall(1, f_and_all(psi0))));

    // Skolem conjuncts
    for (int m = 0; m < M; ++m) {
      FormulaPtr w = pick(pool.ylits, rng);
      if (rng.chance(40)) {
        FormulaPtr extra = maybe_neg(pick(pool.ylits, rng), rng, opts.twin_friendly ? 10 : 35);
        w = f_and(w, extra);
      }
      conj.push_back(f_forall(0, f_exists(1, w)));
    }
    out.push_back(f_and_all(conj));
  }
  return out;
}

std::vector<FormulaPtr> generate_raw_corpus(int count, uint64_t seed) {
  Rng rng(seed);
  std::vector<FormulaPtr> out;
  Term x = term_x(), y = term_y();

  // random quantifier-free matrix over the given atoms
  auto matrix = [&](const std::vector<FormulaPtr>& atoms, int depth, auto&& self) -> FormulaPtr {
    if (depth == 0 || rng.chance(35)) return maybe_neg(pick(atoms, rng), rng, 40);
    FormulaPtr a = self(atoms, depth - 1, self);
    FormulaPtr b = self(atoms, depth - 1, self);
    switch (rng.below(4)) {
      case 0: return f_and(a, b);
      case 1: return f_or(a, b);
      case 2: return f_implies(a, b);
      default: return f_iff(a, b);
    }
  };

  while (int(out.size()) < count) {
    int u = 1 + rng.below(2);
    bool b = rng.chance(30);
    std::vector<FormulaPtr> atoms;
    const char* unames[] = {"P", "Q"};
    for (int i = 0; i < u; ++i) {
      atoms.push_back(f_atom(atom_unary(unames[i], x)));
      atoms.push_back(f_atom(atom_unary(unames[i], y)));
    }
    if (b) {
      atoms.push_back(f_atom(atom_binary("R", x, y)));
      atoms.push_back(f_atom(atom_binary("R", y, x)));
    }
    if (rng.chance(30)) atoms.push_back(f_atom(atom_equals(x, y)));

    // a small sentence tree: one or two quantified blocks combined
    auto block = [&]() -> FormulaPtr {
      FormulaPtr m = matrix(atoms, 2, matrix);
      int q = rng.below(4);
      switch (q) {
        case 0: return f_forall(0, f_exists(1, m));
        case 1: return f_forall(0, f_forall(1, m));
        case 2: return f_exists(0, f_forall(1, m));
        default: return f_exists(0, f_exists(1, m));
      }
    };
    FormulaPtr f = block();
    if (rng.chance(50)) {
      FormulaPtr g = block();
      switch (rng.below(3)) {
        case 0: f = f_and(f, g); break;
        case 1: f = f_or(f, g); break;
        default: f = f_implies(f, g); break;
      }
    }
    if (b) {
      // a universal guard keeps the pairwise search narrow
      FormulaPtr guard = f_forall(
          0, f_forall(1, f_implies(f_atom(atom_binary("R", x, y)),
                                   f_atom(atom_unary("P", x)))));
      f = f_and(f, guard);
    }
    out.push_back(f);
  }
  return out;
}

// ---------------------------------------------------------------------------
// inflation
// ---------------------------------------------------------------------------

namespace {

Structure clone_element(const Structure& s, int c) {
  const int n = s.n;
  Structure t = Structure::empty(s.sig, n + 1, s.has_pre());
  t.has_order = s.has_order;
  // the clone is inserted right after c; old index e maps to e + (e > c)
  auto nidx = [&](int e) { return e > c ? e + 1 : e; };
  for (int lvl = 0; lvl < int(s.eq.size()); ++lvl) {
    for (int e = 0; e < n; ++e) t.eq[lvl][nidx(e)] = s.eq[lvl][e];
    t.eq[lvl][c + 1] = s.eq[lvl][c];
  }
  for (int lvl = 0; lvl < int(s.pre.size()); ++lvl) {
    for (int e = 0; e < n; ++e) t.pre[lvl][nidx(e)] = s.pre[lvl][e];
    t.pre[lvl][c + 1] = s.pre[lvl][c];
  }
  for (int lvl = 0; lvl < int(s.feq.size()); ++lvl) {
    for (int e = 0; e < n; ++e) t.feq[lvl][nidx(e)] = s.feq[lvl][e];
    t.feq[lvl][c + 1] = s.feq[lvl][c];
  }
  for (size_t uu = 0; uu < s.unary.size(); ++uu) {
    for (int e = 0; e < n; ++e) t.unary[uu][nidx(e)] = s.unary[uu][e];
    t.unary[uu][c + 1] = s.unary[uu][c];
  }
  for (size_t bb = 0; bb < s.binary.size(); ++bb) {
    for (int e1 = 0; e1 < n; ++e1)
      for (int e2 = 0; e2 < n; ++e2)
        t.binary[bb][size_t(nidx(e1)) * (n + 1) + nidx(e2)] = s.bval(int(bb), e1, e2);
    for (int e = 0; e < n; ++e) {
      t.binary[bb][size_t(c + 1) * (n + 1) + nidx(e)] = s.bval(int(bb), c, e);
      t.binary[bb][size_t(nidx(e)) * (n + 1) + (c + 1)] = s.bval(int(bb), e, c);
    }
    // clone vs original: borrow the self loop
    t.binary[bb][size_t(c + 1) * (n + 1) + (c + 1)] = s.bval(int(bb), c, c);
    t.binary[bb][size_t(c) * (n + 1) + (c + 1)] = s.bval(int(bb), c, c);
    t.binary[bb][size_t(c + 1) * (n + 1) + c] = s.bval(int(bb), c, c);
  }
  t.constants = s.constants;  // snf models are constant-free in practice
  return t;
}

}  // namespace

Structure inflate_model(const Structure& s, const SnfSentence& snf, int target, Rng& rng) {
  Structure cur = s;
  CompiledFormula psi0(snf.psi0, snf.signature);
  int attempts = 0;
  while (cur.n < target) {
    if (++attempts > target * 20)
      throw InputError("inflation failed: cloning violates the sentence");
    int c = rng.below(cur.n);
    Structure cand = clone_element(cur, c);
    if (!psi0.eval(cand, c, c + 1) || !psi0.eval(cand, c + 1, c)) continue;
    cur = std::move(cand);
  }
  FormulaPtr whole = snf.as_formula();
  if (!evaluate(cur, whole, {}))
    throw InputError("inflation failed: inflated structure is not a model");
  return cur;
}

// ---------------------------------------------------------------------------
// batch runs
// ---------------------------------------------------------------------------

namespace {

std::optional<LogicId> header_logic(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t i = line.find_first_not_of(" \t");
    if (i == std::string::npos) continue;
    if (line.compare(i, 2, "--") != 0) break;
    size_t p = line.find("logic:", i);
    if (p == std::string::npos) continue;
    std::string name = line.substr(p + 6);
    size_t a = name.find_first_not_of(" \t");
    size_t b = name.find_last_not_of(" \t\r");
    if (a == std::string::npos) continue;
    return logic_from_name(name.substr(a, b - a + 1));
  }
  return std::nullopt;
}

const char* status_name(VerdictStatus st) {
  switch (st) {
    case VerdictStatus::Sat: return "sat";
    case VerdictStatus::UnsatCertified: return "unsat-certified";
    case VerdictStatus::Unknown: return "unknown";
  }
  return "?";
}

}  // namespace

std::vector<std::string> corpus_run(const std::string& dir, const BatchOptions& opts) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  {
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec))
      if (entry.is_regular_file() && entry.path().extension() == ".fo2")
        files.push_back(entry.path().string());
    if (ec) throw InputError("cannot read directory: " + dir);
  }
  std::sort(files.begin(), files.end());

  std::vector<std::string> lines(files.size());
  std::atomic<size_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      size_t i = cursor.fetch_add(1);
      if (i >= files.size()) return;
      nlohmann::json j;
      j["file"] = fs::path(files[i]).filename().string();
      try {
        std::ifstream in(files[i]);
        if (!in) throw InputError("unreadable file");
        std::stringstream ss;
        ss << in.rdbuf();
        std::string text = ss.str();
        LogicId logic = header_logic(text).value_or(opts.default_logic);
        j["logic"] = logic_name(logic);
        FormulaPtr f = parse_formula(text);

        bool use_solver = opts.engine == "solver" ||
                          (opts.engine != "oracle" && logic == LogicId::PreorderSucc &&
                           opts.engine != "both");
        if (opts.engine == "both" && logic == LogicId::PreorderSucc) {
          SnfSentence snf = to_snf(f, logic);
          SolverOptions so;
          so.cap = opts.cap;
          so.budget = opts.budget;
          SolverOutcome oc = decide_preorder_succ(snf, so);
          Verdict ov = decide_bounded(f, logic, opts.cap, opts.budget);
          j["status"] = status_name(oc.verdict.status);
          j["oracle-status"] = status_name(ov.status);
          j["agree"] = (oc.verdict.status == VerdictStatus::Sat) ==
                       (ov.status == VerdictStatus::Sat);
          j["nodes"] = ov.stats.nodes + oc.verdict.stats.nodes;
        } else if (use_solver) {
          if (logic != LogicId::PreorderSucc)
            throw InputError("solver engine requires the preorder-succ logic");
          SnfSentence snf = to_snf(f, logic);
          SolverOptions so;
          so.cap = opts.cap;
          so.budget = opts.budget;
          SolverOutcome oc = decide_preorder_succ(snf, so);
          j["status"] = status_name(oc.verdict.status);
          if (oc.verdict.model) j["size"] = oc.verdict.model->n;
          j["nodes"] = oc.verdict.stats.nodes;
        } else {
          Verdict v = decide_bounded(f, logic, opts.cap, opts.budget);
          j["status"] = status_name(v.status);
          if (v.model) j["size"] = v.model->n;
          j["nodes"] = v.stats.nodes;
        }
      } catch (const std::exception& e) {
        j["error"] = e.what();
      }
      lines[i] = j.dump();
    }
  };

  int jobs = std::max(1, opts.jobs);
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return lines;
}

void write_corpus(const std::string& dir, const std::vector<FormulaPtr>& fs, LogicId logic) {
  namespace stdfs = std::filesystem;
  stdfs::create_directories(dir);
  for (size_t i = 0; i < fs.size(); ++i) {
    char name[32];
    snprintf(name, sizeof name, "%04zu.fo2", i);
    std::ofstream out(stdfs::path(dir) / name);
    out << "-- logic: " << logic_name(logic) << "\n" << render_formula(fs[i]) << "\n";
  }
}

}  // namespace nesteq
