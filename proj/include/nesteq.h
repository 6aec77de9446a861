/*
 * nesteq — finite-satisfiability workbench for two-variable logic with
 * nested equivalence relations and nested total preorders.
 *
 * C interface over the C++ core: opaque handles, integer status codes,
 * malloc'd strings released through nq_string_free. All functions set a
 * thread-local message retrievable via nq_last_error on failure.
 */
#ifndef NESTEQ_H
#define NESTEQ_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct nq_formula nq_formula;
typedef struct nq_structure nq_structure;
typedef struct nq_verdict nq_verdict;

/* status codes */
#define NQ_OK 0
#define NQ_ERR_PARSE 1
#define NQ_ERR_INPUT 2
#define NQ_ERR_BUDGET 3
#define NQ_ERR_INTERNAL 4

/* verdict statuses (match the CLI exit codes) */
#define NQ_SAT 10
#define NQ_UNSAT_CERTIFIED 20
#define NQ_UNKNOWN 30

/* logics */
#define NQ_LOGIC_RAW 0
#define NQ_LOGIC_EQ 1
#define NQ_LOGIC_ORDER_EQ 2
#define NQ_LOGIC_PREORDER 3
#define NQ_LOGIC_PREORDER_SUCC 4
#define NQ_LOGIC_TWO_FAMILIES 5

const char* nq_last_error(void);
void nq_string_free(char* s);

/* -1 when the name is unknown */
int nq_logic_from_name(const char* name);
/* logic named in a leading "-- logic: ..." comment; -1 when absent */
int nq_header_logic(const char* text);

/* ------------------------------------------------------------------ */
/* formulas                                                            */
/* ------------------------------------------------------------------ */

nq_formula* nq_parse(const char* text);
char* nq_render(const nq_formula* f);
void nq_formula_free(nq_formula* f);

/* syntax report: signature, conformance, violations, fragment flags */
char* nq_analyze_json(const nq_formula* f, int logic);

/* Scott Normal Form, rendered back as a formula handle */
nq_formula* nq_to_snf(const nq_formula* f, int logic);
/* {"M":..,"K":..,"size":..,"input-size":..,"fresh":[...]} */
char* nq_snf_info_json(const nq_formula* f, int logic);

/* ------------------------------------------------------------------ */
/* deciding                                                            */
/* ------------------------------------------------------------------ */

/* options json (all fields optional):
   {"cap":int, "budget-nodes":int, "budget-secs":num, "jobs":int,
    "engine":"auto"|"oracle"|"solver", "two-families-cap":int} */
nq_verdict* nq_check(const nq_formula* f, int logic, const char* options_json);
int nq_verdict_status(const nq_verdict* v); /* NQ_SAT / NQ_UNSAT_CERTIFIED / NQ_UNKNOWN */
char* nq_verdict_json(const nq_verdict* v);
nq_structure* nq_verdict_model(const nq_verdict* v); /* NULL when absent */
void nq_verdict_free(nq_verdict* v);

/* bounded model search; *out_model receives NULL when no model exists.
   exact != 0 searches exactly `size`, otherwise sizes 1..size. */
int nq_oracle(const nq_formula* f, int logic, int size, int exact,
              const char* options_json, nq_structure** out_model);

/* ------------------------------------------------------------------ */
/* structures                                                          */
/* ------------------------------------------------------------------ */

nq_structure* nq_structure_parse(const char* json_text);
char* nq_structure_json(const nq_structure* s);
void nq_structure_free(nq_structure* s);

/* NQ_OK with *ok = 1 when the structure passes semantic validation */
int nq_validate(const nq_structure* s, int logic, int* ok, char** report_json);
/* evaluates a sentence; *truth receives 0/1 */
int nq_evaluate(const nq_structure* s, const nq_formula* f, int* truth);

/* iterated class replacement to a size fixpoint */
int nq_shrink(const nq_structure* s, const nq_formula* f, int logic,
              nq_structure** out, char** audit_json);

/* ------------------------------------------------------------------ */
/* reduction generators                                                */
/* ------------------------------------------------------------------ */

nq_formula* nq_gen_tiling(const char* instance_json);
char* nq_decode_tiling(const nq_structure* s, const char* instance_json);

nq_formula* nq_gen_tcm(const char* machine_json);
int nq_tcm_witness(const char* machine_json, const char* run_json, nq_structure** out);

/* ------------------------------------------------------------------ */
/* corpora                                                             */
/* ------------------------------------------------------------------ */

int nq_corpus_generate(const char* dir, int logic, int count,
                       unsigned long long seed);
/* options json: {"logic":"...", "cap":int, "jobs":int, "engine":"...",
   "budget-nodes":int, "budget-secs":num}; report is JSON lines */
int nq_corpus_run(const char* dir, const char* options_json, char** report_jsonl);

#ifdef __cplusplus
}
#endif
#endif
