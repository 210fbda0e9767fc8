#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coxtop/braid.hpp"
#include "coxtop/topology.hpp"
#include "coxtop/word_posets.hpp"

namespace coxtop {

// An object of Word^1_fr: a sequence of finite-type elements of W, identities allowed.
struct ConvObject {
  std::vector<GroupElement> letters;

  int size() const { return int(letters.size()); }
  std::string str() const;  // (s, 1, st)
  friend bool operator==(const ConvObject&, const ConvObject&) = default;
};
// Throws NotFiniteType on a letter of infinite type.
ConvObject make_conv_object(std::vector<GroupElement> letters);

// Weakly increasing map [n1] -> [n2], 0-based.
using IndexMap = std::vector<int>;
std::vector<IndexMap> weakly_increasing_maps(int n1, int n2);
IndexMap identity_map(int n);
IndexMap compose_maps(const IndexMap& f, const IndexMap& g);  // g after f
std::vector<std::vector<int>> fibers(const IndexMap& f, int n2);
std::string map_str(const IndexMap& f);  // 0,0,1

struct ConvMorphism {
  ConvObject src, tgt;
  IndexMap map;
};

// r(w_1) ... r(w_n).
BraidElement rank(const SystemPtr& sys, const ConvObject& x);
// Each target letter dominates the Demazure product of its fiber in the Bruhat order.
bool is_morphism(const SystemPtr& sys, const ConvObject& src, const ConvObject& tgt, const IndexMap& map);

enum class MorphismKind { Increasing, Decreasing, LevelBasic, LevelNonbasic };
const char* morphism_kind_name(MorphismKind k);
// Throws InvalidMorphism.
MorphismKind classify_morphism(const SystemPtr& sys, const ConvMorphism& f);
// Every fiber is reduced with Demazure product equal to its target letter.
bool basic_criterion(const SystemPtr& sys, const ConvMorphism& f);
bool weakly_downward(const SystemPtr& sys, const ConvMorphism& f);
bool weakly_upward(const ConvMorphism& f);

struct TruncationSpec {
  int max_length = 4;   // bound on l(r(w))
  int max_letters = 5;  // bound on the number of letters
  std::optional<BraidElement> b_max;  // if set, also r(w) <= b_max in the rank order
};

// Finite window onto Word^1_fr. Objects are materialized and sorted by rank; morphisms
// are enumerated on demand. Letters are coded by their position in a finite alphabet.
class Truncation {
 public:
  static Truncation build(const SystemPtr& sys, const TruncationSpec& spec);

  const SystemPtr& system() const { return sys_; }
  const TruncationSpec& spec() const { return spec_; }
  int size() const { return int(objects_.size()); }
  const ConvObject& object(int x) const { return objects_[x]; }
  const std::vector<int>& code(int x) const { return codes_[x]; }
  int letters(int x) const { return int(codes_[x].size()); }
  const BraidElement& rank(int x) const { return ranks_[level_[x]]; }
  // Position of r(x) among the ranks present, in the rank order.
  int level(int x) const { return level_[x]; }
  int num_levels() const { return int(ranks_.size()); }
  const BraidElement& level_rank(int l) const { return ranks_[l]; }
  const std::vector<int>& objects_at(int l) const { return by_level_[l]; }
  int find_level(const BraidElement& b) const;  // -1 if absent
  int find(const ConvObject& x) const;          // -1 if absent
  int find_code(const std::vector<int>& c) const;

  int alphabet_size() const { return int(alphabet_.size()); }
  const GroupElement& letter(int id) const { return alphabet_[id]; }
  int letter_id(const GroupElement& w) const;  // -1 outside the alphabet
  int letter_length(int id) const { return alphabet_[id].length(); }
  bool bruhat(int u, int v) const { return bruhat_[std::size_t(u) * alphabet_.size() + v]; }
  // Demazure product of coded letters; -1 when it leaves the alphabet.
  int dem(const std::vector<int>& ids) const;
  int dem2(int u, int v) const { return dem_[std::size_t(u) * alphabet_.size() + v]; }
  // d(r(x)) as a letter id, or -1 if it is not in the alphabet.
  int rank_dem(int x) const { return rank_dem_[x]; }
  const GroupElement& level_dem(int l) const { return level_dem_[l]; }

  const std::vector<IndexMap>& maps(int n1, int n2) const;
  bool is_morphism(int x, int y, const IndexMap& f) const;
  std::vector<IndexMap> morphisms(int x, int y) const;
  bool basic_criterion(int x, int y, const IndexMap& f) const;
  bool weakly_downward(int x, int y, const IndexMap& f) const;
  // Letters Demazure products of the fibers of f applied to x, as a code.
  std::vector<int> fiber_dem(int x, const IndexMap& f, int n2) const;
  std::string arrow_str(int x, int y, const IndexMap& f) const;

 private:
  SystemPtr sys_;
  TruncationSpec spec_;
  std::vector<GroupElement> alphabet_;
  std::vector<char> bruhat_;
  std::vector<int> dem_;
  std::vector<ConvObject> objects_;
  std::vector<std::vector<int>> codes_;
  std::vector<int> level_, rank_dem_;
  std::vector<BraidElement> ranks_;
  std::vector<GroupElement> level_dem_;
  std::vector<std::vector<int>> by_level_;
  std::map<std::vector<int>, int> index_;
  std::vector<std::vector<std::vector<IndexMap>>> maps_;
};

struct ConvArrow {
  int src = 0, tgt = 0;
  IndexMap map;
};

// A materialized category on truncation objects with its arrows.
struct ConvCategory {
  FinCategory cat;
  std::vector<int> objects;  // truncation ids, in category order
  std::vector<ConvArrow> arrows;
};

constexpr std::size_t kMaxTruncationMorphisms = 300000;
// Full subcategory of Word^1_fr on the truncation. Throws BudgetExceeded.
ConvCategory build_truncation(const Truncation& T, std::size_t budget = kMaxTruncationMorphisms);
ConvCategory build_truncation(const SystemPtr& sys, const TruncationSpec& spec,
                              std::size_t budget = kMaxTruncationMorphisms);
// Category and morphism-id text format: obj, mor and comp lines.
std::string export_truncation(const Truncation& T, const ConvCategory& C);

struct FactObject {
  int mid = 0;
  IndexMap f1, f2;
};

// Fact_phi restricted to middle objects of the truncation with at most `max_mid_letters`
// letters. Fact^1 is the full subcategory where f2 is weakly upward; `unit` is the unit of
// its reflection (f2 replaced by the Demazure products of its fibers), -1 where the image
// is missing from the window.
struct FactCategory {
  FinCategory cat;
  std::vector<FactObject> objects;
  std::vector<int> fact1;
  std::vector<int> unit;
  std::optional<int> fact1_initial;  // object id in `cat`
  std::vector<int> expected_initial;  // Demazure products of the fibers of phi
};
// Throws NotLevel unless r(x) = r(y). max_mid_letters < 0 means letters(x) + letters(y).
FactCategory fact_category(const Truncation& T, int x, int y, const IndexMap& phi, int max_mid_letters = -1,
                           std::size_t budget = kMaxTruncationMorphisms);

// Windowed slice (Word^1_fr(<b))_{/w} with Z_w, or coslice (Word^1_fr(<b))_{w/} with Y_w.
struct SliceAdjunction {
  FinCategory slice;
  std::vector<std::pair<int, IndexMap>> objects;  // (truncation id, map to or from w)
  std::vector<int> sub;
  std::vector<int> witness;  // unit (Z_w) or counit (Y_w) morphism per slice object, -1 if missing
  bool holds = false;        // reflection resp. coreflection check
  FinPoset sub_poset() const;  // Z_w is thin; throws HasLoops otherwise
};
SliceAdjunction z_subcategory(const Truncation& T, int w);
SliceAdjunction y_subcategory(const Truncation& T, int w);

// Word^1_fr(b) in the window (basic level morphisms) with the coreflection onto
// Word_fr(b) that deletes the letters equal to 1.
struct LevelCategory {
  ConvCategory level;
  std::vector<int> no_ones;  // object positions in level.cat
  std::vector<int> counit;
  bool holds = false;
};
LevelCategory level_category(const Truncation& T, int level);

struct DownCommaObject {
  int w = 0, wp = 0;  // truncation ids, r(w) = b > r(wp)
  IndexMap map;
};

// (Word^1_fr(b) | Word^1_fr(<b)) in the window, its primed subcategory, the coreflection
// onto it, and the isomorphisms with the pair category (w, p) and (Word_fr(b) | Word_fn(b)).
// The coreflection is checked on hom sets out of primed objects, which are determined by
// their first component. With `materialize` the whole comma category is also built and
// checked with check_coreflection.
struct DownComma {
  BraidElement b;
  std::vector<DownCommaObject> objects;
  std::vector<int> primed;
  std::vector<int> counit_source;  // R(x) per object, -1 if outside the window
  bool lem1 = false;
  std::string lem1_failure;

  bool materialized = false;
  FinCategory comma;
  std::vector<int> counit;  // morphism R(x) -> x
  bool lem1_materialized = false;

  WordPoset fr;
  std::vector<std::pair<int, BlockPartition>> pairs;  // (Word_fr(b) id, blocks)
  FinPoset pair_poset;
  FinPoset fr_fn;  // (Word_fr(b) | Word_fn(b))
  std::vector<std::pair<int, int>> fr_fn_objects;
  std::vector<int> primed_to_pair, pair_to_fr_fn;
  bool lem2 = false;
  std::string lem2_failure;
};
DownComma down_comma(const Truncation& T, const BraidElement& b, bool materialize = false,
                     std::size_t budget = kMaxTruncationMorphisms);

// Preimage pullback of a block partition along a weakly increasing surjection.
BlockPartition preimage_partition(const BlockPartition& p, const IndexMap& surjection);

}  // namespace coxtop
