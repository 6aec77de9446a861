// nesteq command-line front end. Talks to the core exclusively through the
// C API in nesteq.h.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "nesteq.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { nq_string_free(s); }
};

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return true;
  }
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  return bool(out);
}

int input_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return kExitInput;
}

struct Common {
  std::string logic = "preorder-succ";
  int cap = 8;
  long long budget_nodes = 0;
  double budget_secs = 0;
  unsigned long long seed = 0;
  int jobs = 1;
  std::string out;
  std::string engine = "auto";

  void attach(CLI::App* app, bool with_engine = true) {
    app->add_option("--logic", logic,
                    "logic: raw|eq|order-eq|preorder|preorder-succ|two-families");
    app->add_option("--cap", cap, "largest domain size to explore");
    app->add_option("--budget-nodes", budget_nodes, "search node budget");
    app->add_option("--budget-secs", budget_secs,
                    "wall-clock budget (default from NESTEQ_BUDGET_SECS)");
    app->add_option("--seed", seed, "seed for generators");
    app->add_option("--jobs", jobs, "parallel workers for corpus runs");
    app->add_option("--out", out, "output path ('-' = stdout)");
    if (with_engine)
      app->add_option("--engine", engine, "auto|oracle|solver|both");
  }

  std::string options_json() const {
    std::ostringstream os;
    os << "{\"cap\":" << cap << ",\"jobs\":" << jobs << ",\"engine\":\"" << engine
       << "\"";
    if (budget_nodes > 0) os << ",\"budget-nodes\":" << budget_nodes;
    double secs = budget_secs;
    if (secs <= 0) {
      if (const char* env = std::getenv("NESTEQ_BUDGET_SECS")) secs = atof(env);
    }
    if (secs > 0) os << ",\"budget-secs\":" << secs;
    os << "}";
    return os.str();
  }

  int logic_id(const std::string& text) const {
    int hdr = nq_header_logic(text.c_str());
    if (hdr >= 0) return hdr;  // per-file header overrides the flag
    return nq_logic_from_name(logic.c_str());
  }
};

nq_formula* load_formula(const std::string& path, const Common& common, int* logic_out) {
  auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return nullptr;
  }
  int logic = common.logic_id(*text);
  if (logic < 0) {
    std::cerr << "error: unknown logic\n";
    return nullptr;
  }
  if (logic_out) *logic_out = logic;
  nq_formula* f = nq_parse(text->c_str());
  if (!f) std::cerr << "error: " << nq_last_error() << "\n";
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nesteq: finite satisfiability workbench for FO2 with nested "
               "equivalences and preorders"};
  app.require_subcommand(1);

  Common common;

  // --- check ---
  auto* check = app.add_subcommand("check", "decide bounded finite satisfiability");
  std::string check_file;
  check->add_option("file", check_file, "formula file (.fo2)")->required();
  common.attach(check);

  // --- oracle ---
  auto* oracle = app.add_subcommand("oracle", "brute-force bounded model search");
  std::string oracle_file;
  int oracle_size = 1;
  bool oracle_exact = false;
  oracle->add_option("file", oracle_file, "formula file (.fo2)")->required();
  oracle->add_option("--size", oracle_size, "domain size")->required();
  oracle->add_flag("--exact", oracle_exact, "search exactly --size (default: up to)");
  common.attach(oracle, false);

  // --- normalize ---
  auto* normalize = app.add_subcommand("normalize", "Scott Normal Form transform");
  std::string norm_file;
  bool norm_info = false;
  normalize->add_option("file", norm_file, "formula file (.fo2)")->required();
  normalize->add_flag("--info", norm_info, "emit the M/K/size report instead");
  common.attach(normalize, false);

  // --- verify ---
  auto* verify = app.add_subcommand("verify", "validate a model file against a formula");
  std::string verify_model, verify_formula;
  verify->add_option("--model", verify_model, "structure file (.json)")->required();
  verify->add_option("--formula", verify_formula, "formula file (.fo2)")->required();
  common.attach(verify, false);

  // --- pump ---
  auto* pump = app.add_subcommand("pump", "shrink a model by class replacement");
  std::string pump_model, pump_formula;
  pump->add_option("--model", pump_model, "structure file (.json)")->required();
  pump->add_option("--formula", pump_formula, "formula file (.fo2)")->required();
  common.attach(pump, false);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "reduction and corpus generators");
  gen->require_subcommand(1);
  auto* gen_tiling = gen->add_subcommand("tiling", "corridor tiling -> preorder-succ");
  std::string tiling_file;
  gen_tiling->add_option("instance", tiling_file, "tiling instance (.json)")->required();
  std::string gen_out;
  gen_tiling->add_option("--out", gen_out, "output path");
  auto* gen_tcm = gen->add_subcommand("tcm", "two-counter machine -> two-families");
  std::string tcm_file;
  gen_tcm->add_option("machine", tcm_file, "machine file (.json)")->required();
  gen_tcm->add_option("--out", gen_out, "output path");
  auto* gen_corpus = gen->add_subcommand("corpus", "seeded sentence corpus");
  std::string corpus_dir_out;
  int corpus_count = 200;
  gen_corpus->add_option("--out", corpus_dir_out, "output directory")->required();
  gen_corpus->add_option("--count", corpus_count, "number of sentences");
  common.attach(gen_corpus, false);

  // --- corpus ---
  auto* corpus = app.add_subcommand("corpus", "batch-decide a directory of .fo2 files");
  std::string corpus_dir;
  corpus->add_option("dir", corpus_dir, "directory of .fo2 files")->required();
  common.attach(corpus);

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    int logic = -1;
    nq_formula* f = load_formula(check_file, common, &logic);
    if (!f) return kExitInput;
    nq_verdict* v = nq_check(f, logic, common.options_json().c_str());
    nq_formula_free(f);
    if (!v) return input_error(nq_last_error());
    StringGuard sj;
    sj.s = nq_verdict_json(v);
    int status = nq_verdict_status(v);
    nq_verdict_free(v);
    if (!write_output(common.out, sj.s ? sj.s : ""))
      return input_error("cannot write output");
    return status;  // 10 / 20 / 30
  }

  if (oracle->parsed()) {
    int logic = -1;
    nq_formula* f = load_formula(oracle_file, common, &logic);
    if (!f) return kExitInput;
    nq_structure* model = nullptr;
    int rc = nq_oracle(f, logic, oracle_size, oracle_exact ? 1 : 0,
                       common.options_json().c_str(), &model);
    nq_formula_free(f);
    if (rc != NQ_OK) return input_error(nq_last_error());
    if (!model) {
      std::cout << "no model up to size " << oracle_size << "\n";
      return NQ_UNKNOWN;
    }
    StringGuard sj;
    sj.s = nq_structure_json(model);
    nq_structure_free(model);
    if (!write_output(common.out, sj.s ? sj.s : ""))
      return input_error("cannot write output");
    return NQ_SAT;
  }

  if (normalize->parsed()) {
    int logic = -1;
    nq_formula* f = load_formula(norm_file, common, &logic);
    if (!f) return kExitInput;
    StringGuard sj;
    if (norm_info) {
      sj.s = nq_snf_info_json(f, logic);
    } else {
      nq_formula* snf = nq_to_snf(f, logic);
      if (snf) {
        sj.s = nq_render(snf);
        nq_formula_free(snf);
      }
    }
    nq_formula_free(f);
    if (!sj.s) return input_error(nq_last_error());
    if (!write_output(common.out, sj.s)) return input_error("cannot write output");
    return kExitOk;
  }

  if (verify->parsed()) {
    auto mtext = read_file(verify_model);
    if (!mtext) return input_error("cannot read " + verify_model);
    int logic = -1;
    nq_formula* f = load_formula(verify_formula, common, &logic);
    if (!f) return kExitInput;
    nq_structure* s = nq_structure_parse(mtext->c_str());
    if (!s) {
      nq_formula_free(f);
      return input_error(nq_last_error());
    }
    int ok = 0;
    StringGuard rep;
    nq_validate(s, logic, &ok, &rep.s);
    if (!ok) {
      std::cerr << "structure validation failed:\n" << (rep.s ? rep.s : "") << "\n";
      nq_structure_free(s);
      nq_formula_free(f);
      return kExitInput;
    }
    int truth = 0;
    int rc = nq_evaluate(s, f, &truth);
    nq_structure_free(s);
    nq_formula_free(f);
    if (rc != NQ_OK) return input_error(nq_last_error());
    if (!truth) return input_error("model does not satisfy the formula");
    std::cout << "ok\n";
    return kExitOk;
  }

  if (pump->parsed()) {
    auto mtext = read_file(pump_model);
    if (!mtext) return input_error("cannot read " + pump_model);
    int logic = -1;
    nq_formula* f = load_formula(pump_formula, common, &logic);
    if (!f) return kExitInput;
    nq_structure* s = nq_structure_parse(mtext->c_str());
    if (!s) {
      nq_formula_free(f);
      return input_error(nq_last_error());
    }
    nq_structure* small = nullptr;
    StringGuard audit;
    int rc = nq_shrink(s, f, logic, &small, &audit.s);
    nq_structure_free(s);
    nq_formula_free(f);
    if (rc != NQ_OK) return input_error(nq_last_error());
    StringGuard sj;
    sj.s = nq_structure_json(small);
    nq_structure_free(small);
    if (audit.s) std::cerr << audit.s << "\n";
    if (!write_output(common.out, sj.s ? sj.s : ""))
      return input_error("cannot write output");
    return kExitOk;
  }

  if (gen_tiling->parsed() || gen_tcm->parsed()) {
    bool tiling = gen_tiling->parsed();
    auto text = read_file(tiling ? tiling_file : tcm_file);
    if (!text) return input_error("cannot read instance file");
    nq_formula* f = tiling ? nq_gen_tiling(text->c_str()) : nq_gen_tcm(text->c_str());
    if (!f) return input_error(nq_last_error());
    StringGuard sj;
    sj.s = nq_render(f);
    nq_formula_free(f);
    std::string body = std::string("-- logic: ") +
                       (tiling ? "preorder-succ" : "two-families") + "\n" +
                       (sj.s ? sj.s : "") + "\n";
    if (!write_output(gen_out.empty() ? common.out : gen_out, body))
      return input_error("cannot write output");
    return kExitOk;
  }

  if (gen_corpus->parsed()) {
    int logic = nq_logic_from_name(common.logic.c_str());
    if (logic < 0) return input_error("unknown logic");
    int rc = nq_corpus_generate(corpus_dir_out.c_str(), logic, corpus_count, common.seed);
    if (rc != NQ_OK) return input_error(nq_last_error());
    std::cout << "wrote " << corpus_count << " sentences to " << corpus_dir_out << "\n";
    return kExitOk;
  }

  if (corpus->parsed()) {
    std::ostringstream os;
    os << "{\"logic\":\"" << common.logic << "\",\"cap\":" << common.cap
       << ",\"jobs\":" << common.jobs << ",\"engine\":\"" << common.engine << "\""
       << ",\"seed\":" << common.seed;
    if (common.budget_nodes > 0) os << ",\"budget-nodes\":" << common.budget_nodes;
    double secs = common.budget_secs;
    if (secs <= 0) {
      if (const char* env = std::getenv("NESTEQ_BUDGET_SECS")) secs = atof(env);
    }
    if (secs > 0) os << ",\"budget-secs\":" << secs;
    os << "}";
    StringGuard report;
    int rc = nq_corpus_run(corpus_dir.c_str(), os.str().c_str(), &report.s);
    if (rc != NQ_OK) return input_error(nq_last_error());
    if (!write_output(common.out, report.s ? report.s : ""))
      return input_error("cannot write output");
    return kExitOk;
  }

  return kExitUsage;
}
