#ifndef NESTEQ_ORACLE_HPP
#define NESTEQ_ORACLE_HPP

#include <optional>
#include <string>

#include "nesteq/snf.hpp"
#include "nesteq/structure.hpp"

namespace nesteq {

struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SearchBudget {
  long long nodes = 200'000'000;  // backtracking nodes before giving up
  double seconds = 0;             // 0 = no wall-clock limit
  int two_families_hard_cap = 8;  // refusal threshold, no termination bound
};

struct SearchStats {
  long long nodes = 0;
  double millis = 0;
  int largest_size = 0;
};

enum class VerdictStatus { Sat, UnsatCertified, Unknown };

struct Verdict {
  VerdictStatus status = VerdictStatus::Unknown;
  std::optional<Structure> model;  // present iff Sat
  int explored_cap = 0;
  std::optional<long long> certification_bound;
  SearchStats stats;
};

enum class SearchMode { Exact, AtMost };

// Brute-force bounded model finder over the SNF search space: backtracking
// over element 1-types and pairwise 2-types from the proper enumerations,
// witness sets tracked per element, psi0 checked on every new pair. For the
// two-families profile it enumerates structures of the source sentence
// directly (universal conjuncts pruned on prefixes) and expands the fresh
// definitional predicates afterwards. Throws BudgetExceeded when a budget
// runs out and InputError for a two-families size beyond the hard cap.
std::optional<Structure> find_model(const SnfSentence& snf, LogicId logic, int n,
                                    SearchMode mode, const SearchBudget& budget = {},
                                    SearchStats* stats = nullptr);

// General engine: enumerates structures of exactly n elements over the
// formula's signature and keeps those satisfying f. Universal conjuncts are
// checked on every prefix; the rest at full size.
std::optional<Structure> find_model_raw(const FormulaPtr& f, LogicId logic, int n,
                                        SearchMode mode, const SearchBudget& budget = {},
                                        SearchStats* stats = nullptr);

// The explicit small-model bound 12^(K+1) * M^(3K+3) * |alpha|^(K+1) with
// |alpha| = 2^(#unary + #common binary), for the logics whose replacement
// analysis supplies it. Saturates at 2^62. Absent for preorder-succ (the
// doubly exponential bound has unspecified constants) and two-families.
std::optional<long long> completeness_bound(const SnfSentence& snf, LogicId logic);

// Normalises f, then searches sizes 1..min(cap, bound). UnsatCertified only
// when the full bound was exhausted. Budget exhaustion yields Unknown.
Verdict decide_bounded(const FormulaPtr& f, LogicId logic, int cap,
                       const SearchBudget& budget = {});

// Expands an SNF model's fresh definitional predicates onto a model of the
// processed source (used by the two-families path and tests).
Structure expand_snf_model(const Structure& base, const SnfSentence& snf);

// Maps an SNF-level model back to the original sentence's signature:
// restores constants from their singleton predicates, re-sparsifies the
// renumbered levels, and drops fresh symbols.
Structure restore_original_model(const Structure& snf_model, const SnfSentence& snf);

}  // namespace nesteq

#endif
