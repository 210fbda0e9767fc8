#pragma once

#include <string>
#include <vector>

#include "coxtop/conv_schubert.hpp"
#include "coxtop/deletion_checks.hpp"

namespace coxtop {

struct BistratifiedReport {
  int objects = 0, levels = 0;
  long morphisms = 0, level_morphisms = 0, level_nonbasic = 0, fact_objects = 0;
  std::vector<CheckTally> checks;

  bool ok() const;
  const CheckTally* find(const std::string& name) const;
};

// Exhaustive checks over a truncation: (B1), Fact_phi empty exactly for the basic level
// morphisms, Fact^1 initial objects and the reflection Fact -> Fact^1 (nonbasic Fact_phi are
// then contractible), the two slice adjunctions, unique weak factorization and monotonicity
// of the Demazure product. Fact_phi is searched over all middle objects of the truncation.
BistratifiedReport check_bistratified(const Truncation& T);

// The same statements through the materialized categories (fact_category, z_subcategory,
// y_subcategory) and the topology adjunction checkers. Meant for small windows.
BistratifiedReport check_bistratified_materialized(const Truncation& T, const CertifyOptions& opt = {});

struct DownLevel {
  BraidElement b;
  bool reduced = false;
  std::size_t comma_objects = 0, primed = 0;
  Certificate word_fr;  // Word_fr(b)
  Certificate fr_fn;    // (Word_fr(b) | Word_fn(b)), nonreduced b only
  std::vector<std::string> failed;  // names of the checks failing at this level
};

struct DownReport {
  std::vector<DownLevel> levels;
  std::vector<CheckTally> checks;

  bool ok() const;
  const CheckTally* find(const std::string& name) const;
};

// (DC) level by level: Word^1_fr(b) retracts onto Word_fr(b), which is certified contractible;
// the down comma is empty for reduced b; for nonreduced b the coreflection onto the primed
// subcategory, the isomorphisms with the pair category and (Word_fr(b) | Word_fn(b)), and
// a certificate for the latter.
DownReport check_down_contractible(const Truncation& T, const CertifyOptions& opt = {}, bool materialize = false);

struct ComposabilityReport {
  long sequences = 0, not_composable = 0, with_transitions = 0;
  CheckTally check{"strong-composability", 0, 0, {}};
  bool ok() const { return check.ok(); }
};

// Transition-index predicate against the brute-force composite search, on every composable
// sequence of at most `max_len` morphisms of the truncation lying in I_{<=beta} without level
// nonbasic morphisms at beta, for every beta.
ComposabilityReport check_strong_composability(const Truncation& T, int max_len = 4,
                                               std::size_t budget = kMaxTruncationMorphisms);

}  // namespace coxtop
