#include "nesteq.h"

#include <cstring>
#include <string>

#include <json.hpp>

#include "nesteq/corpus.hpp"
#include "nesteq/json_io.hpp"
#include "nesteq/oracle.hpp"
#include "nesteq/pumping.hpp"
#include "nesteq/reductions.hpp"
#include "nesteq/snf.hpp"
#include "nesteq/solver.hpp"

using namespace nesteq;
using nlohmann::json;

struct nq_formula {
  FormulaPtr f;
};
struct nq_structure {
  Structure s;
};
struct nq_verdict {
  Verdict v;
};

namespace {

thread_local std::string g_error;

void set_error(const std::string& msg) { g_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(malloc(s.size() + 1));
  memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

int classify(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return NQ_ERR_PARSE;
  if (dynamic_cast<const BudgetExceeded*>(&e)) return NQ_ERR_BUDGET;
  if (dynamic_cast<const InputError*>(&e)) return NQ_ERR_INPUT;
  if (dynamic_cast<const EvalError*>(&e)) return NQ_ERR_INPUT;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return NQ_ERR_INPUT;
  return NQ_ERR_INTERNAL;
}

std::optional<LogicId> logic_of(int code) {
  switch (code) {
    case NQ_LOGIC_RAW: return LogicId::RawFo2;
    case NQ_LOGIC_EQ: return LogicId::Eq;
    case NQ_LOGIC_ORDER_EQ: return LogicId::OrderEq;
    case NQ_LOGIC_PREORDER: return LogicId::Preorder;
    case NQ_LOGIC_PREORDER_SUCC: return LogicId::PreorderSucc;
    case NQ_LOGIC_TWO_FAMILIES: return LogicId::TwoFamilies;
    default: return std::nullopt;
  }
}

struct Options {
  int cap = 8;
  SearchBudget budget;
  std::string engine = "auto";
  int jobs = 1;
};

Options parse_options(const char* options_json) {
  Options o;
  if (!options_json || !*options_json) return o;
  json j = json::parse(options_json);
  o.cap = j.value("cap", o.cap);
  o.budget.nodes = j.value("budget-nodes", o.budget.nodes);
  o.budget.seconds = j.value("budget-secs", o.budget.seconds);
  o.budget.two_families_hard_cap =
      j.value("two-families-cap", o.budget.two_families_hard_cap);
  o.engine = j.value("engine", o.engine);
  o.jobs = j.value("jobs", o.jobs);
  return o;
}

}  // namespace

extern "C" {

const char* nq_last_error(void) { return g_error.c_str(); }

void nq_string_free(char* s) { free(s); }

int nq_logic_from_name(const char* name) {
  if (!name) return -1;
  auto l = logic_from_name(name);
  if (!l) return -1;
  switch (*l) {
    case LogicId::RawFo2: return NQ_LOGIC_RAW;
    case LogicId::Eq: return NQ_LOGIC_EQ;
    case LogicId::OrderEq: return NQ_LOGIC_ORDER_EQ;
    case LogicId::Preorder: return NQ_LOGIC_PREORDER;
    case LogicId::PreorderSucc: return NQ_LOGIC_PREORDER_SUCC;
    case LogicId::TwoFamilies: return NQ_LOGIC_TWO_FAMILIES;
  }
  return -1;
}

int nq_header_logic(const char* text) {
  if (!text) return -1;
  std::string s(text);
  std::string line;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t nl = s.find('\n', pos);
    line = s.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? s.size() : nl + 1;
    size_t i = line.find_first_not_of(" \t\r");
    if (i == std::string::npos) continue;
    if (line.compare(i, 2, "--") != 0) break;
    size_t p = line.find("logic:", i);
    if (p == std::string::npos) continue;
    std::string name = line.substr(p + 6);
    size_t a = name.find_first_not_of(" \t");
    size_t b = name.find_last_not_of(" \t\r");
    if (a == std::string::npos) continue;
    return nq_logic_from_name(name.substr(a, b - a + 1).c_str());
  }
  return -1;
}

nq_formula* nq_parse(const char* text) {
  if (!text) {
    set_error("null text");
    return nullptr;
  }
  try {
    return new nq_formula{parse_formula(text)};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

char* nq_render(const nq_formula* f) {
  if (!f) {
    set_error("null formula");
    return nullptr;
  }
  return dup_string(render_formula(f->f));
}

void nq_formula_free(nq_formula* f) { delete f; }

char* nq_analyze_json(const nq_formula* f, int logic) {
  if (!f) {
    set_error("null formula");
    return nullptr;
  }
  auto l = logic_of(logic);
  if (!l) {
    set_error("unknown logic");
    return nullptr;
  }
  SyntaxReport rep = analyze(f->f, *l);
  json j;
  j["conformant"] = rep.conformant;
  json viol = json::array();
  for (const auto& v : rep.violations)
    viol.push_back({{"line", v.pos.line}, {"col", v.pos.col}, {"rule", v.rule}});
  j["violations"] = viol;
  j["fragment-flags"] = {{"constant-free", rep.fragment_flags.constant_free},
                         {"equality-free", rep.fragment_flags.equality_free},
                         {"monadic-common", rep.fragment_flags.monadic_common}};
  j["signature"] = {{"unary", rep.signature.unary},
                    {"binary", rep.signature.binary},
                    {"constants", rep.signature.constants},
                    {"levels", rep.signature.levels},
                    {"order", rep.signature.has_order},
                    {"preorders", rep.signature.has_pre},
                    {"successors", rep.signature.has_succ},
                    {"f-levels", rep.signature.f_levels}};
  return dup_string(j.dump(2));
}

nq_formula* nq_to_snf(const nq_formula* f, int logic) {
  if (!f) {
    set_error("null formula");
    return nullptr;
  }
  auto l = logic_of(logic);
  if (!l) {
    set_error("unknown logic");
    return nullptr;
  }
  try {
    SnfSentence snf = to_snf(f->f, *l);
    return new nq_formula{snf.as_formula()};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

char* nq_snf_info_json(const nq_formula* f, int logic) {
  if (!f) {
    set_error("null formula");
    return nullptr;
  }
  auto l = logic_of(logic);
  if (!l) {
    set_error("unknown logic");
    return nullptr;
  }
  try {
    SnfSentence snf = to_snf(f->f, *l);
    json j;
    j["M"] = snf.M;
    j["K"] = snf.K;
    j["size"] = formula_size(snf.as_formula());
    j["input-size"] = formula_size(f->f);
    json fresh = json::array();
    for (const auto& [name, src] : snf.provenance)
      fresh.push_back({{"symbol", name}, {"source", src}});
    j["fresh"] = fresh;
    return dup_string(j.dump(2));
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

nq_verdict* nq_check(const nq_formula* f, int logic, const char* options_json) {
  if (!f) {
    set_error("null formula");
    return nullptr;
  }
  auto l = logic_of(logic);
  if (!l) {
    set_error("unknown logic");
    return nullptr;
  }
  try {
    Options o = parse_options(options_json);
    bool solver = o.engine == "solver" ||
                  (o.engine == "auto" && *l == LogicId::PreorderSucc);
    if (solver) {
      if (*l != LogicId::PreorderSucc)
        throw InputError("solver engine requires the preorder-succ logic");
      SnfSentence snf = to_snf(f->f, *l);
      SolverOptions so;
      so.cap = o.cap;
      so.budget = o.budget;
      SolverOutcome oc = decide_preorder_succ(snf, so);
      return new nq_verdict{std::move(oc.verdict)};
    }
    return new nq_verdict{decide_bounded(f->f, *l, o.cap, o.budget)};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

int nq_verdict_status(const nq_verdict* v) {
  if (!v) return NQ_UNKNOWN;
  switch (v->v.status) {
    case VerdictStatus::Sat: return NQ_SAT;
    case VerdictStatus::UnsatCertified: return NQ_UNSAT_CERTIFIED;
    case VerdictStatus::Unknown: return NQ_UNKNOWN;
  }
  return NQ_UNKNOWN;
}

char* nq_verdict_json(const nq_verdict* v) {
  if (!v) {
    set_error("null verdict");
    return nullptr;
  }
  return dup_string(verdict_to_json(v->v));
}

nq_structure* nq_verdict_model(const nq_verdict* v) {
  if (!v || !v->v.model) return nullptr;
  return new nq_structure{*v->v.model};
}

void nq_verdict_free(nq_verdict* v) { delete v; }

int nq_oracle(const nq_formula* f, int logic, int size, int exact,
              const char* options_json, nq_structure** out_model) {
  if (out_model) *out_model = nullptr;
  if (!f || !out_model) {
    set_error("null argument");
    return NQ_ERR_INPUT;
  }
  auto l = logic_of(logic);
  if (!l) {
    set_error("unknown logic");
    return NQ_ERR_INPUT;
  }
  try {
    Options o = parse_options(options_json);
    SnfSentence snf = to_snf(f->f, *l);
    auto r = find_model(snf, *l, size, exact ? SearchMode::Exact : SearchMode::AtMost,
                        o.budget);
    if (r) *out_model = new nq_structure{restore_original_model(*r, snf)};
    return NQ_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return classify(e);
  }
}

nq_structure* nq_structure_parse(const char* json_text) {
  if (!json_text) {
    set_error("null text");
    return nullptr;
  }
  try {
    return new nq_structure{structure_from_json(json_text)};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

char* nq_structure_json(const nq_structure* s) {
  if (!s) {
    set_error("null structure");
    return nullptr;
  }
  return dup_string(structure_to_json(s->s));
}

void nq_structure_free(nq_structure* s) { delete s; }

int nq_validate(const nq_structure* s, int logic, int* ok, char** report_json) {
  if (!s || !ok) {
    set_error("null argument");
    return NQ_ERR_INPUT;
  }
  auto l = logic_of(logic);
  if (!l) {
    set_error("unknown logic");
    return NQ_ERR_INPUT;
  }
  ValidationReport rep = validate_structure(s->s, *l);
  *ok = rep.ok ? 1 : 0;
  if (report_json) {
    json j;
    j["ok"] = rep.ok;
    json fails = json::array();
    for (const auto& fl : rep.failures)
      fails.push_back({{"axiom", fl.axiom}, {"witnesses", fl.witnesses}});
    j["failures"] = fails;
    *report_json = dup_string(j.dump(2));
  }
  return NQ_OK;
}

int nq_evaluate(const nq_structure* s, const nq_formula* f, int* truth) {
  if (!s || !f || !truth) {
    set_error("null argument");
    return NQ_ERR_INPUT;
  }
  try {
    *truth = evaluate(s->s, f->f, {}) ? 1 : 0;
    return NQ_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return classify(e);
  }
}

int nq_shrink(const nq_structure* s, const nq_formula* f, int logic,
              nq_structure** out, char** audit_json) {
  if (out) *out = nullptr;
  if (!s || !f || !out) {
    set_error("null argument");
    return NQ_ERR_INPUT;
  }
  auto l = logic_of(logic);
  if (!l) {
    set_error("unknown logic");
    return NQ_ERR_INPUT;
  }
  try {
    SnfSentence snf = to_snf(f->f, *l);
    Structure work = s->s;
    // preorder inputs are pumped through the order view and come back as
    // labels; the sentence must hold on the input
    if (!evaluate(work, snf.as_formula(), {}))
      throw InputError("structure does not satisfy the normalised sentence");
    ShrinkAudit audit;
    Structure small = shrink(work, snf, *l, &audit);
    *out = new nq_structure{std::move(small)};
    if (audit_json) {
      json j;
      j["rounds"] = audit.rounds;
      j["applications"] = audit.applications;
      j["size-bound"] = audit.final_size_bound;
      j["result-size"] = (*out)->s.n;
      long long worst = 0;
      for (const auto& p : audit.plans) worst = std::max<long long>(worst, p.d_class_count);
      j["max-d-classes"] = worst;
      if (!audit.plans.empty()) j["d-class-bound"] = audit.plans.front().d_class_bound;
      *audit_json = dup_string(j.dump(2));
    }
    return NQ_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return classify(e);
  }
}

nq_formula* nq_gen_tiling(const char* instance_json) {
  if (!instance_json) {
    set_error("null instance");
    return nullptr;
  }
  try {
    return new nq_formula{tiling_to_formula(tiling_from_json(instance_json))};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

char* nq_decode_tiling(const nq_structure* s, const char* instance_json) {
  if (!s || !instance_json) {
    set_error("null argument");
    return nullptr;
  }
  try {
    TilingInstance t = tiling_from_json(instance_json);
    TilingSolution sol = decode_tiling(s->s, t);
    json j;
    j["m"] = sol.m;
    j["grid"] = sol.grid;
    j["valid"] = tiling_solution_valid(t, sol);
    return dup_string(j.dump(2));
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

nq_formula* nq_gen_tcm(const char* machine_json) {
  if (!machine_json) {
    set_error("null machine");
    return nullptr;
  }
  try {
    return new nq_formula{tcm_to_formula(tcm_from_json(machine_json))};
  } catch (const std::exception& e) {
    set_error(e.what());
    return nullptr;
  }
}

int nq_tcm_witness(const char* machine_json, const char* run_json, nq_structure** out) {
  if (out) *out = nullptr;
  if (!machine_json || !run_json || !out) {
    set_error("null argument");
    return NQ_ERR_INPUT;
  }
  try {
    TcmWitness w = run_to_structure(tcm_from_json(machine_json), run_from_json(run_json));
    *out = new nq_structure{std::move(w.structure)};
    return NQ_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return classify(e);
  }
}

int nq_corpus_generate(const char* dir, int logic, int count, unsigned long long seed) {
  if (!dir) {
    set_error("null dir");
    return NQ_ERR_INPUT;
  }
  auto l = logic_of(logic);
  if (!l) {
    set_error("unknown logic");
    return NQ_ERR_INPUT;
  }
  try {
    if (*l == LogicId::RawFo2) {
      write_corpus(dir, generate_raw_corpus(count, seed), *l);
    } else {
      CorpusOptions co;
      co.logic = *l;
      co.count = count;
      co.seed = seed;
      write_corpus(dir, generate_corpus(co), *l);
    }
    return NQ_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return classify(e);
  }
}

int nq_corpus_run(const char* dir, const char* options_json, char** report_jsonl) {
  if (!dir || !report_jsonl) {
    set_error("null argument");
    return NQ_ERR_INPUT;
  }
  try {
    BatchOptions bo;
    if (options_json && *options_json) {
      json j = json::parse(options_json);
      if (j.contains("logic")) {
        auto l = logic_from_name(j["logic"].get<std::string>());
        if (!l) throw InputError("unknown logic in options");
        bo.default_logic = *l;
      }
      bo.cap = j.value("cap", bo.cap);
      bo.jobs = j.value("jobs", bo.jobs);
      bo.seed = j.value("seed", bo.seed);
      bo.engine = j.value("engine", bo.engine);
      bo.budget.nodes = j.value("budget-nodes", bo.budget.nodes);
      bo.budget.seconds = j.value("budget-secs", bo.budget.seconds);
    }
    auto lines = corpus_run(dir, bo);
    std::string all;
    for (const auto& ln : lines) {
      all += ln;
      all += '\n';
    }
    *report_jsonl = dup_string(all);
    return NQ_OK;
  } catch (const std::exception& e) {
    set_error(e.what());
    return classify(e);
  }
}

}  // extern "C"
