#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coxtop/braid.hpp"
#include "coxtop/topology.hpp"

namespace coxtop {

// A sequence of non-identity braid letters. The product is recomputed on demand.
struct Factorization {
  std::vector<BraidElement> letters;

  BraidElement product(const SystemPtr& sys) const;
  // Partial products p_1 = x_1, p_2 = x_1 x_2, ..., the last one being the product.
  std::vector<BraidElement> partial_products(const SystemPtr& sys) const;
  bool all_finite_type() const;
  bool all_reduced() const;
  std::string str() const;  // ([s], [st][s])
  friend bool operator==(const Factorization&, const Factorization&) = default;
};

// Throws MalformedInput on an empty letter.
Factorization make_factorization(std::vector<BraidElement> letters);
// Every letter reduced, viewed in W.
Factorization factorization_of(const std::vector<GroupElement>& letters);
std::vector<GroupElement> group_letters(const Factorization& w);

// x -> y in Word(b): x refines y, i.e. every partial product of y is one of x.
bool refines(const SystemPtr& sys, const Factorization& x, const Factorization& y);
// Greatest common refinement, if one exists. Throws ProductMismatch.
std::optional<Factorization> meet(const SystemPtr& sys, const Factorization& x, const Factorization& y);

enum class WordFilter { All, F, FR, FN };

// Left divisors of b with the divisibility order.
struct DivisorLattice {
  BraidElement base;
  std::vector<BraidElement> elements;  // sorted by length, elements[0] = 1, back() = b
  std::vector<Bits> up;                // up[p][q]: p left-divides q
  std::unordered_map<BraidElement, int, BraidHash> index;
  int find(const BraidElement& x) const;  // -1 if not a divisor
  int top() const { return int(elements.size()) - 1; }
};
DivisorLattice divisor_lattice(const BraidElement& b);

struct WordPoset {
  BraidElement base;
  std::shared_ptr<const DivisorLattice> lattice;
  std::vector<Factorization> objects;
  std::vector<Bits> chains;  // divisor ids of the partial products (1 excluded)
  std::vector<char> in_f, in_fr;
  FinPoset poset;

  int size() const { return int(objects.size()); }
  bool in_fn(int i) const { return in_f[i] && !in_fr[i]; }
  int find(const Factorization& w) const;  // -1 if absent
};

// Longest braid accepted by enumerate_word.
constexpr int kWordLengthBudget = 14;
WordPoset enumerate_word(const BraidElement& b, WordFilter filter);
// Full subposet on the given object ids, in that order.
WordPoset restrict_word_poset(const WordPoset& P, const std::vector<int>& ids);
// obj <id> <literal> and rel <x> <y> lines for the strict relations.
std::string export_word_poset(const WordPoset& P);

struct DeletionPattern {
  GroupElement w1;
  int s = 0;
  GroupElement w2;
  int t = 0;
  BraidElement b3;
  Wall wall;

  GroupElement v() const;  // w1 s w2
  // The pattern as an object of Word(b), empty entries dropped.
  Factorization word() const;
  std::string str() const;
};
// Label order: w1 s w2 under order-A, then t, then w1 under order-A.
bool pattern_less(const DeletionPattern& x, const DeletionPattern& y);

// T_1 < ... < T_D. Throws ReducedInput for reduced b.
std::vector<DeletionPattern> enumerate_deletion_patterns(const BraidElement& b);

// A word of Word_fr(b) written as (x_1..x_a, s, y_1..y_nb, t, z_1..z_nc), together with
// the index (0-based) of its deletion pattern.
struct ClassifiedWord {
  std::vector<GroupElement> letters;
  int d = 0;
  int a = 0, nb = 0, nc = 0;
  int s_pos() const { return a; }
  int t_pos() const { return a + 1 + nb; }
  int size() const { return int(letters.size()); }
};
// Throws ReducedInput, MalformedInput (not in Word_fr), NotClassified (no slice contains w).
ClassifiedWord classify(const SystemPtr& sys, const Factorization& w, const std::vector<DeletionPattern>& patterns);

// Smallest i in 1..nb with |L(s y_1 ... y_i)| >= 2. Throws NoGapIndex when none qualifies.
int b_min(const ClassifiedWord& w, const DeletionPattern& T);
std::optional<int> b_min_opt(const ClassifiedWord& w, const DeletionPattern& T);
// The same for the pattern itself, whose y-segment is the single letter w2.
int b_min(const DeletionPattern& T);

// Word_f(b) with its deletion patterns and the stratum index m(x) of every object:
// 0 for Word_fn, otherwise the smallest d (1-based) such that x meets T_d.
struct Stratification {
  BraidElement base;
  WordPoset word_f;
  std::vector<DeletionPattern> patterns;
  std::vector<Bits> pattern_chains;  // divisor ids of the partial products of T_d
  std::vector<int> m;                // per object of word_f; -1 if x meets no pattern
  int D() const { return int(patterns.size()); }
  bool meets(int x, int d) const;    // d is 1-based
  bool maps_to(int x, int d) const;  // x -> T_d
};
Stratification stratify(const BraidElement& b);

struct Strata {
  std::vector<int> le, lt, fr_d;  // object ids of Word_f(b)_{<=d}, _{<d}, Word_fr(b)_d
};
// Throws IndexOutOfRange unless 0 <= d <= D; for d = 0 only `le` is filled.
Strata strata(const Stratification& S, int d);
// Objects of Word_fr(b) mapping to T_d.
std::vector<int> slice(const Stratification& S, int d);

// Partition of positions 0..n-1 into consecutive blocks. Bit i of `cuts` separates i and i+1.
struct BlockPartition {
  int n = 0;
  std::uint64_t cuts = 0;

  static BlockPartition singletons(int n);
  static BlockPartition whole(int n);
  std::vector<std::pair<int, int>> blocks() const;  // half-open [begin, end)
  bool refines(const BlockPartition& o) const { return n == o.n && (o.cuts & ~cuts) == 0; }
  bool is_singletons() const;
  // Finest coarsening containing [begin, end) in one block.
  BlockPartition united(int begin, int end) const;
  bool contains(int begin, int end) const;
  std::string str() const;  // 0|12|3
  friend bool operator==(const BlockPartition&, const BlockPartition&) = default;
};
// Merge the letters of each block.
Factorization coarsen(const Factorization& w, const BlockPartition& p);

// The data needed to evaluate the block conditions on a sequence
// (..., s, y_1, ..., t, z_1, ...). `anchor_end` is the last position of the
// anchor (s, y_1, ..., y_bmin) and is absent when no gap index exists.
struct BlockFrame {
  std::vector<GroupElement> letters;
  int s_pos = 0, t_pos = 0;
  std::optional<int> anchor_end;
  GroupElement v;  // w1 s w2
  int t = 0;

  bool finite_type(int begin, int end) const;
  bool nonreduced(int begin, int end) const;
  bool cond_nonreduced(int begin, int end) const { return nonreduced(begin, end); }
  bool cond_anchor(int begin, int end) const;
  bool cond_t_prefix(int begin, int end) const;
  bool satisfies(int begin, int end) const;
  // Every block finite type and at least one block meets (i), (ii) or (iii).
  bool maps_below(const BlockPartition& p) const;
  // Every block finite type, every nontrivial block meets a condition and starts at or
  // after s, and some block is nontrivial.
  bool admissible(const BlockPartition& p) const;
  // Split before s, then split each failing block into singletons.
  BlockPartition retract(const BlockPartition& p) const;
};
BlockFrame block_frame(const ClassifiedWord& w, const DeletionPattern& T);

struct BlockPoset {
  std::vector<BlockPartition> parts;
  FinPoset poset;
  int find(const BlockPartition& p) const;
};
constexpr int kMaxBlockLetters = 20;
BlockPoset block_poset_if(int n, const std::function<bool(const BlockPartition&)>& keep);
// Block'(w).
BlockPoset block_poset(const BlockFrame& F);
BlockPoset block_poset(const ClassifiedWord& w, const DeletionPattern& T);

struct GapPosets {
  WordPoset word;   // Word(w2)
  std::vector<int> gap, gap_1f;  // object ids of Word(w2)
  FinPoset gap_poset, gap_1f_poset;
  std::vector<int> embed;  // position in gap of each element of gap_1f
};
GapPosets gap_posets(const SystemPtr& sys, const DeletionPattern& T);
bool is_gap_word(const SystemPtr& sys, const DeletionPattern& T, const std::vector<GroupElement>& y);

// Frame for Block''(y', z'): (s, y'_1, ..., y'_n, t, z'_1, ..., z'_m) with anchor (s, y'_1).
BlockFrame block2_frame(const SystemPtr& sys, const DeletionPattern& T, const std::vector<GroupElement>& y,
                        const std::vector<GroupElement>& z);
BlockPoset block2_poset(const SystemPtr& sys, const DeletionPattern& T, const std::vector<GroupElement>& y,
                        const std::vector<GroupElement>& z);

// Pull a partition of a coarse sequence back along an index surjection (weakly increasing)
// fine -> coarse. Nontrivial blocks pull back to their preimages, trivial ones to singletons.
BlockPartition pullback(const BlockPartition& p, const std::vector<int>& surjection);

struct FImage {
  std::vector<GroupElement> y, z;
  // Position of each letter of w (from s onward) in the sequence (s, y..., t, z...).
  std::vector<int> surjection;
};
// F(w) = (F_1(w), z-part) with F_1 merging y_1 ... y_bmin. Throws NoGapIndex.
FImage functor_F(const ClassifiedWord& w, const DeletionPattern& T);

// Word_s^{1f}(w). Throws HypothesisFailed unless s is in L(w) and |L(w)| >= 2.
WordPoset word_s_1f(const SystemPtr& sys, int s, const GroupElement& w);

}  // namespace coxtop
