#ifndef NESTEQ_REDUCTIONS_HPP
#define NESTEQ_REDUCTIONS_HPP

#include <string>
#include <vector>

#include "nesteq/structure.hpp"

namespace nesteq {

// ---------------------------------------------------------------------------
// Corridor tiling -> preorder-succ sentences
// ---------------------------------------------------------------------------

struct TilingInstance {
  std::vector<std::string> colours;
  std::string c0, c1;                                      // initial / final
  std::vector<std::pair<std::string, std::string>> H, V;   // adjacency
  int n = 1;                                               // width = 2^n

  void validate() const;
};

struct TilingSolution {
  int m = 0;                                  // height
  std::vector<std::vector<std::string>> grid;  // [m][2^n] colours
};

// Builds the sentence over unary predicates B_0..B_{n-1} (binary horizontal
// coordinate) and P_c per colour, with the single preorder pre1 and its
// successor S1: each E1-class is one row, S1 links consecutive rows. The
// conjuncts: grid formation, boundary colours, horizontal equality and
// adjacency, vertical adjacency, and one-colour-per-cell.
FormulaPtr tiling_to_formula(const TilingInstance& t);

// Reads a model of tiling_to_formula(t) back into a tiling. Throws
// InputError when the model does not satisfy the formula, a cell's colour is
// not unique, or a row duplicates a column.
TilingSolution decode_tiling(const Structure& s, const TilingInstance& t);

bool tiling_solution_valid(const TilingInstance& t, const TilingSolution& sol);

std::string tiling_to_json(const TilingInstance& t);
TilingInstance tiling_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Two-counter machines -> two-families sentences
// ---------------------------------------------------------------------------

enum class TcmOp { Inc1, Inc2, Dec1, Dec2, Zero1, Zero2 };

struct TcmTransition {
  std::string from;
  TcmOp op;
  std::string to;
};

struct TwoCounterMachine {
  std::vector<std::string> states;
  std::string initial, final;
  std::vector<TcmTransition> delta;

  void validate() const;
};

struct TcmConfig {
  std::string state;
  long long c1 = 0, c2 = 0;
};

using TcmRun = std::vector<TcmConfig>;

// The sentence Theta expressing a terminating run: configurations are
// G2-classes (G2 = E2 and F2), d_E/d_F alternation, counters as chains of
// E1/F1-linked classes marked c1/c2, plus per-transition axioms and the
// initial-configuration axiom. Constant-free, equality-free, and monadic.
FormulaPtr tcm_to_formula(const TwoCounterMachine& mach);

// Builds a finite model of tcm_to_formula(mach) from a valid halting run.
// When the final configuration holds counters above one, wind-down
// configurations in the final state are appended, one unit retired per
// counter per step, so that no configuration strands two dying chains.
struct TcmWitness {
  Structure structure;
  std::vector<int> config_of_element;   // element -> configuration index
  int run_configs = 0;                  // configurations of the run proper
  int total_configs = 0;                // including wind-down padding
};
TcmWitness run_to_structure(const TwoCounterMachine& mach, const TcmRun& run);

// Checks a run against the machine: starts at <initial,0,0>, respects delta,
// counters stay non-negative, ends in the final state.
void validate_run(const TwoCounterMachine& mach, const TcmRun& run);

std::string tcm_to_json(const TwoCounterMachine& m);
TwoCounterMachine tcm_from_json(const std::string& text);
std::string run_to_json(const TcmRun& r);
TcmRun run_from_json(const std::string& text);

}  // namespace nesteq

#endif
