#pragma once

#include <string>
#include <vector>

#include "coxtop/coxeter.hpp"

namespace coxtop {

// Element of the positive braid monoid in left-greedy normal form: a list of
// non-identity W elements where every left descent of a factor is a right
// descent of the factor before it.
class BraidElement {
 public:
  BraidElement() = default;
  explicit BraidElement(SystemPtr sys) : sys_(std::move(sys)) {}
  // Any sequence of W elements; the result is their product, normalized.
  static BraidElement from_factors(const SystemPtr& sys, std::vector<GroupElement> factors);
  static BraidElement from_word(const SystemPtr& sys, const std::vector<int>& word);

  const SystemPtr& system() const { return sys_; }
  const std::vector<GroupElement>& factors() const { return factors_; }
  int length() const;
  bool empty() const { return factors_.empty(); }
  std::vector<int> word() const;  // concatenated canonical words of the factors
  std::string str() const;        // braid literal, e.g. [sts][s]
  std::size_t hash() const;

  friend bool operator==(const BraidElement& a, const BraidElement& b) {
    return a.sys_ == b.sys_ && a.factors_ == b.factors_;
  }
  // Normal-form lexicographic order (factor by factor, factors by order-B).
  friend bool operator<(const BraidElement& a, const BraidElement& b);

 private:
  SystemPtr sys_;
  std::vector<GroupElement> factors_;
};

struct BraidHash {
  std::size_t operator()(const BraidElement& b) const { return b.hash(); }
};

// Longest braid length accepted by divisibility and factorization routines.
constexpr int kBraidLengthBudget = 64;

BraidElement lift(const GroupElement& w);
BraidElement bmul(const BraidElement& a, const BraidElement& b);
BraidElement bmul_gen(const BraidElement& a, int s);
GroupElement demazure(const BraidElement& b);
bool is_reduced(const BraidElement& b);
GenSet supp(const BraidElement& b);
bool is_finite_type_elt(const BraidElement& b);
GenSet simple_prefixes(const BraidElement& b);
bool left_divides(const BraidElement& a, const BraidElement& b);
BraidElement left_quotient(const BraidElement& a, const BraidElement& b);
BraidElement left_gcd(const BraidElement& a, const BraidElement& b);
GroupElement alpha(const BraidElement& b);
// r(s)^{-1} b for s a length-1 prefix of b.
BraidElement strip_atom(const BraidElement& b, int s);
// Rank order of conv-schubert: d(b) under order-B, then length, then normal form.
int rank_cmp(const BraidElement& a, const BraidElement& b);

// All elements of length <= max_length, by length and then normal form.
std::vector<BraidElement> enumerate_braids(const SystemPtr& sys, int max_length);

}  // namespace coxtop
