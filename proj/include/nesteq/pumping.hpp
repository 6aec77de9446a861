#ifndef NESTEQ_PUMPING_HPP
#define NESTEQ_PUMPING_HPP

#include <vector>

#include "nesteq/snf.hpp"
#include "nesteq/structure.hpp"

namespace nesteq {

// Total witness functions f_m: for every m and a, the structure satisfies
// psi_m(a, f[m][a]).
struct WitnessMap {
  std::vector<std::vector<int>> f;  // [M][n]
};

// Configuration-comparison mode: which relations to a are compared.
enum class ConfigMode {
  EqOnly,       // 1-types, equality to a, Ek memberships (no order)
  Ordered,      // + order relation to a (<, =, >)
  OrderedSucc,  // + Sk and inverse-Sk relations to a
};

struct ReplacementPlan {
  std::vector<int> w1, w2, w3;     // the three witness sets
  std::vector<int> d_elements;     // D: union of Ek-classes kept from C
  int d_class_count = 0;           // number of Ek-classes in D
  long long d_class_bound = 0;     // 12 * M^3 * |alpha|
  std::vector<std::array<int, 3>> rewired;  // (a, old witness, new witness)
};

struct ReplaceResult {
  Structure structure;         // the model over (A \ C) u D, reindexed
  std::vector<int> kept;       // old element index per new element
  ReplacementPlan plan;
};

// Least-witness choice: f_m(a) = least b with psi_m(a, b). Throws InputError
// naming the failing (m, a) when s is not a model.
WitnessMap choose_witnesses(const Structure& s, const SnfSentence& snf);

// r smallest and r largest elements of S (by the ambient element order), or
// S itself when |S| <= 2r. When ordered is false, the 2r smallest indices.
std::vector<int> extremal(const std::vector<int>& S, int r, bool ordered = true);

// Same a-configuration of two equal-length tuples of pairwise distinct
// elements: positional 1-types, relation to a per mode, and Ek memberships
// relative to a.
bool same_configuration(const Structure& s, int a, const std::vector<int>& bs,
                        const std::vector<int>& cs, ConfigMode mode);

// Lemma-style class replacement: C is the E(k+1)-class of the element
// `witness_of_class` (k in [0, K]; k = K means the whole domain). Returns a
// model over (A \ C) u D where D spans at most 12 * M^3 * |alpha| many
// Ek-classes. The caller must pass a structure satisfying snf.
ReplaceResult replace_class(const Structure& s, const SnfSentence& snf, int k,
                            int class_member, const WitnessMap& wmap);

struct ShrinkAudit {
  int rounds = 0;
  int applications = 0;
  long long final_size_bound = 0;  // 12^(K+1) M^(3K+3) |alpha|^(K+1)
  std::vector<ReplacementPlan> plans;
};

// Iterated replacement to a size fixpoint, levels processed from k = 0
// upward, restarting after every successful shrink. Supported for the
// equivalence and preorder logics (not preorder-succ).
Structure shrink(const Structure& s, const SnfSentence& snf, LogicId logic,
                 ShrinkAudit* audit = nullptr);

}  // namespace nesteq

#endif
