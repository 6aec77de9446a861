#ifndef NESTEQ_SOLVER_HPP
#define NESTEQ_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "nesteq/oracle.hpp"
#include "nesteq/snf.hpp"
#include "nesteq/types.hpp"

namespace nesteq {

// One group of interchangeable already-processed elements: their 1-type,
// the set of Skolem conjuncts already witnessed, and the relative position
// (p, q) w.r.t. the element currently being processed.
struct GroupKey {
  OneType alpha;
  uint32_t W = 0;
  uint8_t p = 1, q = 1;

  bool operator==(const GroupKey& o) const {
    return alpha == o.alpha && W == o.W && p == o.p && q == o.q;
  }
  bool operator<(const GroupKey& o) const {
    if (!(alpha == o.alpha)) return alpha < o.alpha;
    if (W != o.W) return W < o.W;
    if (p != o.p) return p < o.p;
    return q < o.q;
  }
};

// Counting-function state: group -> number of elements, plus bookkeeping.
struct SolverState {
  std::vector<std::pair<GroupKey, int>> counts;  // sorted by key
  int i = 0;       // elements placed so far
  int last_r = 0;  // r of the most recent element

  int total() const {
    int t = 0;
    for (const auto& [k, c] : counts) t += c;
    return t;
  }
  bool operator==(const SolverState& o) const {
    return counts == o.counts && i == o.i && last_r == o.last_r;
  }
};

// A split describes how the members of one (already updated) group choose
// their 2-types toward the new element.
struct SplitAssign {
  GroupKey group;                                // key after the p/q update
  std::vector<std::pair<TwoType, int>> parts;    // cell type -> member count
};

struct ElementStep {
  int r = 0;  // least level at which this element joins the previous one
  OneType alpha;
  std::vector<SplitAssign> splits;  // one per group, in canonical key order
};

struct RunTranscript {
  std::vector<ElementStep> steps;
};

struct SolverOptions {
  int cap = 5;
  bool memoize = true;  // disabling reverts to the uncompressed exploration
  SearchBudget budget;
};

struct SolverOutcome {
  Verdict verdict;
  RunTranscript transcript;  // meaningful when Sat
  long long states_explored = 0;
  int max_group_keys = 0;    // counting-function domain audit
  long long group_key_bound = 0;  // |alpha| * 2^M * (K+1)(K+2)/2
};

// Applies one element step to a state: p/q updates from r, split validation
// against the beta cells and psi0, witness-set propagation. Throws
// InputError on conservation violations, improper 2-types or psi0 failures.
SolverState step_state(const SolverState& st, int r, const OneType& alpha,
                       const std::vector<SplitAssign>& splits, const SnfSentence& snf);

// Breadth-first reachability over counting-function states for domain sizes
// 1..cap; Sat iff a state where every group has W = [M] is reached.
SolverOutcome decide_preorder_succ(const SnfSentence& snf, const SolverOptions& opts = {});

// Replays an accepting transcript into a concrete structure; frame bits of
// every chosen 2-type are asserted against the label-derived frame.
Structure reconstruct_model(const RunTranscript& tr, const SnfSentence& snf);

// JSON-lines dump (one element per line) and its inverse, for replay.
std::string transcript_to_jsonl(const RunTranscript& tr);
RunTranscript transcript_from_jsonl(const std::string& text);

}  // namespace nesteq

#endif
