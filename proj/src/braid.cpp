#include "coxtop/braid.hpp"

#include "coxtop/errors.hpp"

#include <algorithm>
#include <unordered_set>

namespace coxtop {

namespace {

// Slide letters from y into x while x stays reduced. Returns true if changed.
bool normalize_pair(GroupElement& x, GroupElement& y) {
  bool changed = false;
  for (;;) {
    GenSet cand = y.left_descents() & ~x.right_descents();
    if (!cand) return changed;
    int s = __builtin_ctz(cand);
    x = x.mul_gen(s);
    y = y.gen_mul(s);
    changed = true;
  }
}

void normalize(std::vector<GroupElement>& f) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::erase_if(f, [](const GroupElement& g) { return g.is_identity(); });
    for (int i = int(f.size()) - 2; i >= 0; --i)
      if (normalize_pair(f[i], f[i + 1])) changed = true;
  }
  std::erase_if(f, [](const GroupElement& g) { return g.is_identity(); });
}

void check_budget(const BraidElement& b) {
  if (b.length() > kBraidLengthBudget) throw Error(Errc::BudgetExceeded, "braid length above budget");
}

}  // namespace

BraidElement BraidElement::from_factors(const SystemPtr& sys, std::vector<GroupElement> factors) {
  for (auto& f : factors)
    if (f.system() != sys) throw Error(Errc::SystemMismatch, "braid factor from another system");
  BraidElement b(sys);
  normalize(factors);
  b.factors_ = std::move(factors);
  return b;
}

BraidElement BraidElement::from_word(const SystemPtr& sys, const std::vector<int>& word) {
  BraidElement b(sys);
  for (int s : word) b = bmul_gen(b, s);
  return b;
}

int BraidElement::length() const {
  int n = 0;
  for (auto& f : factors_) n += f.length();
  return n;
}

std::vector<int> BraidElement::word() const {
  std::vector<int> w;
  for (auto& f : factors_) w.insert(w.end(), f.word().begin(), f.word().end());
  return w;
}

std::string BraidElement::str() const {
  if (factors_.empty()) return "[]";
  std::string out;
  for (auto& f : factors_) out += "[" + f.str() + "]";
  return out;
}

std::size_t BraidElement::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (auto& f : factors_) h = (h ^ f.hash()) * 1099511628211ull + 0x7f;
  return h;
}

bool operator<(const BraidElement& a, const BraidElement& b) {
  std::size_t n = std::min(a.factors_.size(), b.factors_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.factors_[i] == b.factors_[i]) continue;
    return order_b_less(a.factors_[i], b.factors_[i]);
  }
  return a.factors_.size() < b.factors_.size();
}

BraidElement lift(const GroupElement& w) {
  BraidElement b(w.system());
  if (!w.is_identity()) b = BraidElement::from_factors(w.system(), {w});
  return b;
}

BraidElement bmul(const BraidElement& a, const BraidElement& b) {
  if (a.system() != b.system()) throw Error(Errc::SystemMismatch, "bmul");
  std::vector<GroupElement> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return BraidElement::from_factors(a.system(), std::move(f));
}

BraidElement bmul_gen(const BraidElement& a, int s) {
  std::vector<GroupElement> f = a.factors();
  f.push_back(GroupElement::generator(a.system(), s));
  return BraidElement::from_factors(a.system(), std::move(f));
}

GroupElement demazure(const BraidElement& b) {
  GroupElement r = GroupElement::identity(b.system());
  for (int s : b.word())
    if (!r.has_right_descent(s)) r = r.mul_gen(s);
  return r;
}

bool is_reduced(const BraidElement& b) { return b.factors().size() <= 1; }

GenSet supp(const BraidElement& b) {
  GenSet J = 0;
  for (auto& f : b.factors()) J |= support(f);
  return J;
}

bool is_finite_type_elt(const BraidElement& b) { return b.system()->is_finite_type(supp(b)); }

GenSet simple_prefixes(const BraidElement& b) {
  return b.empty() ? 0u : b.factors().front().left_descents();
}

BraidElement strip_atom(const BraidElement& b, int s) {
  if (!has_gen(simple_prefixes(b), s)) throw Error(Errc::NotDivisible, "generator is not a prefix");
  std::vector<GroupElement> f = b.factors();
  f.front() = f.front().gen_mul(s);
  return BraidElement::from_factors(b.system(), std::move(f));
}

bool left_divides(const BraidElement& a, const BraidElement& b) {
  if (a.system() != b.system()) throw Error(Errc::SystemMismatch, "left_divides");
  check_budget(b);
  if (a.length() > b.length()) return false;
  BraidElement rest = b;
  for (int s : a.word()) {
    if (!has_gen(simple_prefixes(rest), s)) return false;
    rest = strip_atom(rest, s);
  }
  return true;
}

BraidElement left_quotient(const BraidElement& a, const BraidElement& b) {
  if (a.system() != b.system()) throw Error(Errc::SystemMismatch, "left_quotient");
  check_budget(b);
  BraidElement rest = b;
  for (int s : a.word()) {
    if (!has_gen(simple_prefixes(rest), s)) throw Error(Errc::NotDivisible, a.str() + " does not divide " + b.str());
    rest = strip_atom(rest, s);
  }
  return rest;
}

BraidElement left_gcd(const BraidElement& a, const BraidElement& b) {
  if (a.system() != b.system()) throw Error(Errc::SystemMismatch, "left_gcd");
  check_budget(a);
  check_budget(b);
  BraidElement g(a.system()), x = a, y = b;
  for (;;) {
    GenSet common = simple_prefixes(x) & simple_prefixes(y);
    if (!common) return g;
    int s = __builtin_ctz(common);
    g = bmul_gen(g, s);
    x = strip_atom(x, s);
    y = strip_atom(y, s);
  }
}

GroupElement alpha(const BraidElement& b) {
  return b.empty() ? GroupElement::identity(b.system()) : b.factors().front();
}

int rank_cmp(const BraidElement& a, const BraidElement& b) {
  GroupElement da = demazure(a), db = demazure(b);
  if (!(da == db)) return order_b_less(da, db) ? -1 : 1;
  if (a.length() != b.length()) return a.length() < b.length() ? -1 : 1;
  if (a == b) return 0;
  return a < b ? -1 : 1;
}

std::vector<BraidElement> enumerate_braids(const SystemPtr& sys, int max_length) {
  if (max_length > kBraidLengthBudget) throw Error(Errc::BudgetExceeded, "braid enumeration above budget");
  std::vector<BraidElement> out{BraidElement(sys)};
  std::vector<BraidElement> level = out;
  for (int len = 1; len <= max_length; ++len) {
    std::unordered_set<BraidElement, BraidHash> seen;
    std::vector<BraidElement> next;
    for (auto& x : level)
      for (int s = 0; s < sys->rank(); ++s) {
        BraidElement y = bmul_gen(x, s);
        if (seen.insert(y).second) next.push_back(std::move(y));
      }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

}  // namespace coxtop
