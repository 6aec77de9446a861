#ifndef NESTEQ_CORPUS_HPP
#define NESTEQ_CORPUS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nesteq/oracle.hpp"
#include "nesteq/snf.hpp"
#include "nesteq/structure.hpp"

namespace nesteq {

// splitmix64; deterministic across platforms.
struct Rng {
  uint64_t state;
  explicit Rng(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  int below(int n) { return int(next() % uint64_t(n)); }
  bool chance(int percent) { return below(100) < percent; }
};

struct CorpusOptions {
  LogicId logic = LogicId::PreorderSucc;
  int count = 200;
  uint64_t seed = 7;
  int max_unary = 2;
  int max_binary = 1;
  int max_levels = 2;
  int max_skolem = 2;
  bool twin_friendly = false;  // bias psi0 so models survive element cloning
};

// Seeded SNF-shaped sentences (forall-forall psi0 plus Skolem conjuncts)
// within the stated signature limits.
std::vector<FormulaPtr> generate_corpus(const CorpusOptions& opts);

// Seeded raw FO2 sentences with arbitrary quantifier structure; exercises
// the normaliser.
std::vector<FormulaPtr> generate_raw_corpus(int count, uint64_t seed);

// Grows a model by cloning elements inside their finest classes until it has
// at least `target` elements. The result is verified against the sentence;
// throws InputError when cloning cannot preserve modelhood.
Structure inflate_model(const Structure& s, const SnfSentence& snf, int target, Rng& rng);

// ---------------------------------------------------------------------------
// corpus batch runs (CLI surface)
// ---------------------------------------------------------------------------

struct BatchOptions {
  LogicId default_logic = LogicId::PreorderSucc;
  int cap = 5;
  int jobs = 1;
  uint64_t seed = 0;
  SearchBudget budget;
  std::string engine = "auto";  // auto | oracle | solver | both
};

// One JSON line per .fo2 file in dir (sorted by name), deterministic given
// the inputs. Unreadable files produce an error entry, not a failure.
std::vector<std::string> corpus_run(const std::string& dir, const BatchOptions& opts);

// Renders a generated corpus into dir as NNN.fo2 files with a logic header.
void write_corpus(const std::string& dir, const std::vector<FormulaPtr>& fs, LogicId logic);

}  // namespace nesteq

#endif
