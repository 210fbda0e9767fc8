#include "coxtop/word_posets.hpp"

#include <algorithm>
#include <sstream>

#include "coxtop/errors.hpp"

namespace coxtop {

namespace {

std::vector<int> chain_ids(const DivisorLattice& L, const Factorization& w, const SystemPtr& sys) {
  std::vector<int> ids;
  for (auto& p : w.partial_products(sys)) ids.push_back(L.find(p));
  return ids;
}

// Sorted ids with every consecutive pair comparable: a chain.
bool totally_ordered(const DivisorLattice& L, const Bits& ids) {
  int prev = -1;
  for (auto i = ids.find_first(); i != Bits::npos; i = ids.find_next(i)) {
    if (prev >= 0 && !L.up[prev][i]) return false;
    prev = int(i);
  }
  return true;
}

GroupElement product_of(const SystemPtr& sys, const std::vector<GroupElement>& g, int begin, int end) {
  GroupElement r = GroupElement::identity(sys);
  for (int i = begin; i < end; ++i) r = multiply(r, g[i]);
  return r;
}

}  // namespace

BraidElement Factorization::product(const SystemPtr& sys) const {
  BraidElement r(sys);
  for (auto& x : letters) r = bmul(r, x);
  return r;
}

std::vector<BraidElement> Factorization::partial_products(const SystemPtr& sys) const {
  std::vector<BraidElement> out;
  BraidElement r(sys);
  for (auto& x : letters) out.push_back(r = bmul(r, x));
  return out;
}

bool Factorization::all_finite_type() const {
  return std::all_of(letters.begin(), letters.end(), [](const BraidElement& x) { return is_finite_type_elt(x); });
}

bool Factorization::all_reduced() const {
  return std::all_of(letters.begin(), letters.end(), [](const BraidElement& x) { return is_reduced(x); });
}

std::string Factorization::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < letters.size(); ++i) out += (i ? ", " : "") + letters[i].str();
  return out + ")";
}

Factorization make_factorization(std::vector<BraidElement> letters) {
  for (auto& x : letters)
    if (x.empty()) throw Error(Errc::MalformedInput, "factorization with an empty letter");
  return Factorization{std::move(letters)};
}

Factorization factorization_of(const std::vector<GroupElement>& letters) {
  Factorization w;
  for (auto& g : letters) {
    if (g.is_identity()) throw Error(Errc::MalformedInput, "factorization with an identity letter");
    w.letters.push_back(lift(g));
  }
  return w;
}

std::vector<GroupElement> group_letters(const Factorization& w) {
  std::vector<GroupElement> g;
  for (auto& x : w.letters) {
    if (!is_reduced(x)) throw Error(Errc::MalformedInput, "letter " + x.str() + " is not reduced");
    g.push_back(alpha(x));
  }
  return g;
}

bool refines(const SystemPtr& sys, const Factorization& x, const Factorization& y) {
  auto px = x.partial_products(sys), py = y.partial_products(sys);
  if (!(x.product(sys) == y.product(sys))) throw Error(Errc::ProductMismatch, "refines: different products");
  return std::all_of(py.begin(), py.end(),
                     [&](const BraidElement& p) { return std::find(px.begin(), px.end(), p) != px.end(); });
}

std::optional<Factorization> meet(const SystemPtr& sys, const Factorization& x, const Factorization& y) {
  if (!(x.product(sys) == y.product(sys))) throw Error(Errc::ProductMismatch, "meet: different products");
  auto cuts = x.partial_products(sys);
  for (auto& p : y.partial_products(sys))
    if (std::find(cuts.begin(), cuts.end(), p) == cuts.end()) cuts.push_back(p);
  std::stable_sort(cuts.begin(), cuts.end(),
                   [](const BraidElement& a, const BraidElement& b) { return a.length() < b.length(); });
  Factorization m;
  BraidElement prev(sys);
  for (auto& c : cuts) {
    if (!left_divides(prev, c)) return std::nullopt;
    m.letters.push_back(left_quotient(prev, c));
    prev = c;
  }
  return m;
}

int DivisorLattice::find(const BraidElement& x) const {
  auto it = index.find(x);
  return it == index.end() ? -1 : it->second;
}

DivisorLattice divisor_lattice(const BraidElement& b) {
  if (b.length() > kBraidLengthBudget) throw Error(Errc::BudgetExceeded, "divisor lattice above budget");
  const SystemPtr& sys = b.system();
  DivisorLattice L;
  L.base = b;
  // Breadth first by length; the quotient is tracked to test extensions cheaply.
  std::vector<BraidElement> rest{b};
  L.elements.push_back(BraidElement(sys));
  L.index.emplace(L.elements[0], 0);
  std::vector<std::vector<int>> succ(1);
  for (std::size_t i = 0; i < L.elements.size(); ++i) {
    GenSet atoms = simple_prefixes(rest[i]);
    for (int s = 0; s < sys->rank(); ++s) {
      if (!has_gen(atoms, s)) continue;
      BraidElement q = bmul_gen(L.elements[i], s);
      auto [it, fresh] = L.index.emplace(q, int(L.elements.size()));
      if (fresh) {
        L.elements.push_back(q);
        rest.push_back(strip_atom(rest[i], s));
        succ.emplace_back();
      }
      succ[i].push_back(it->second);
    }
  }
  int n = int(L.elements.size());
  L.up.assign(n, Bits(n));
  for (int i = n - 1; i >= 0; --i) {
    L.up[i].set(i);
    for (int j : succ[i]) L.up[i] |= L.up[j];
  }
  return L;
}

int WordPoset::find(const Factorization& w) const {
  for (int i = 0; i < size(); ++i)
    if (objects[i] == w) return i;
  return -1;
}

WordPoset enumerate_word(const BraidElement& b, WordFilter filter) {
  if (b.length() > kWordLengthBudget) throw Error(Errc::BudgetExceeded, "Word(b) above budget");
  auto L = std::make_shared<DivisorLattice>(divisor_lattice(b));
  int n = int(L->elements.size());

  struct Letter {
    BraidElement x;
    bool finite = false, reduced = false;
  };
  std::vector<std::vector<std::optional<Letter>>> cache(n, std::vector<std::optional<Letter>>(n));
  auto letter = [&](int p, int q) -> const Letter& {
    auto& c = cache[p][q];
    if (!c) {
      BraidElement x = left_quotient(L->elements[p], L->elements[q]);
      c = Letter{x, is_finite_type_elt(x), is_reduced(x)};
    }
    return *c;
  };

  WordPoset P;
  P.base = b;
  P.lattice = L;
  std::vector<int> path;
  bool need_f = filter != WordFilter::All;
  bool need_r = filter == WordFilter::FR;
  // Depth-first over chains 1 = p_0 < p_1 < ... < p_k = b.
  auto dfs = [&](auto&& self, int p, bool fin, bool red) -> void {
    if (p == L->top()) {
      if (filter == WordFilter::FN && red) return;
      Factorization w;
      Bits chain(n);
      int prev = 0;
      for (int q : path) {
        w.letters.push_back(letter(prev, q).x);
        chain.set(q);
        prev = q;
      }
      P.objects.push_back(std::move(w));
      P.chains.push_back(std::move(chain));
      P.in_f.push_back(fin);
      P.in_fr.push_back(fin && red);
      return;
    }
    const Bits& up = L->up[p];
    for (auto q = up.find_next(p); q != Bits::npos; q = up.find_next(q)) {
      const Letter& x = letter(p, int(q));
      if (need_f && !x.finite) continue;
      if (need_r && !x.reduced) continue;
      path.push_back(int(q));
      self(self, int(q), fin && x.finite, red && x.reduced);
      path.pop_back();
    }
  };
  if (n == 1) {
    // Word(1) is a point: the empty sequence, which has no nonreduced letter.
    if (filter != WordFilter::FN) P.objects.emplace_back();
  } else {
    dfs(dfs, 0, true, true);
  }
  if (n == 1 && P.size() == 1) {
    P.chains.emplace_back(n);
    P.in_f.push_back(true);
    P.in_fr.push_back(true);
  }

  std::vector<std::string> labels;
  for (auto& w : P.objects) labels.push_back(w.str());
  P.poset = FinPoset::from_leq(
      P.size(), [&](int x, int y) { return P.chains[y].is_subset_of(P.chains[x]); }, std::move(labels), false);
  return P;
}

WordPoset restrict_word_poset(const WordPoset& P, const std::vector<int>& ids) {
  WordPoset Q;
  Q.base = P.base;
  Q.lattice = P.lattice;
  for (int i : ids) {
    Q.objects.push_back(P.objects[i]);
    Q.chains.push_back(P.chains[i]);
    Q.in_f.push_back(P.in_f[i]);
    Q.in_fr.push_back(P.in_fr[i]);
  }
  Q.poset = P.poset.induced(ids);
  return Q;
}

std::string export_word_poset(const WordPoset& P) {
  std::ostringstream out;
  out << "wordposet " << P.size() << " base " << P.base.str() << "\n";
  for (int i = 0; i < P.size(); ++i) out << "obj " << i << " " << P.objects[i].str() << "\n";
  for (int x = 0; x < P.size(); ++x)
    for (int y = 0; y < P.size(); ++y)
      if (P.poset.less(x, y)) out << "rel " << x << " " << y << "\n";
  return out.str();
}

// ---- deletion patterns ----

GroupElement DeletionPattern::v() const { return multiply(w1.mul_gen(s), w2); }

Factorization DeletionPattern::word() const {
  const SystemPtr& sys = w1.system();
  Factorization w;
  if (!w1.is_identity()) w.letters.push_back(lift(w1));
  w.letters.push_back(lift(GroupElement::generator(sys, s)));
  if (!w2.is_identity()) w.letters.push_back(lift(w2));
  w.letters.push_back(lift(GroupElement::generator(sys, t)));
  if (!b3.empty()) w.letters.push_back(b3);
  return w;
}

std::string DeletionPattern::str() const {
  const SystemPtr& sys = w1.system();
  auto g = [&](const GroupElement& x) { return x.is_identity() ? std::string("1") : x.str(); };
  return "(" + g(w1) + ", " + sys->gen_name(s) + ", " + g(w2) + ", " + sys->gen_name(t) + ", " +
         (b3.empty() ? std::string("1") : b3.str()) + ")";
}

bool pattern_less(const DeletionPattern& x, const DeletionPattern& y) {
  GroupElement vx = x.v(), vy = y.v();
  if (!(vx == vy)) return order_a_less(vx, vy);
  if (x.t != y.t) return x.t < y.t;
  return order_a_less(x.w1, y.w1);
}

namespace {

// All u with u <=_Pre w.
std::vector<GroupElement> prefixes(const GroupElement& w) {
  const SystemPtr& sys = w.system();
  std::vector<GroupElement> out{GroupElement::identity(sys)};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int s = 0; s < sys->rank(); ++s) {
      if (out[i].has_right_descent(s)) continue;
      GroupElement u = out[i].mul_gen(s);
      if (!prefix_leq(u, w)) continue;
      if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
    }
  }
  return out;
}

}  // namespace

std::vector<DeletionPattern> enumerate_deletion_patterns(const BraidElement& b) {
  if (is_reduced(b)) throw Error(Errc::ReducedInput, "deletion patterns need a nonreduced element");
  if (b.length() > kBraidLengthBudget) throw Error(Errc::BudgetExceeded, "deletion patterns above budget");
  std::vector<GroupElement> pre = prefixes(alpha(b));
  std::vector<DeletionPattern> out;
  for (auto& v : pre) {
    GenSet dr = v.right_descents();
    for (int t = 0; t < v.system()->rank(); ++t) {
      if (!has_gen(dr, t)) continue;
      BraidElement vt = bmul_gen(lift(v), t);
      if (!left_divides(vt, b)) continue;
      BraidElement b3 = left_quotient(vt, b);
      Wall h = wall(v, t);
      for (auto& w1 : pre) {
        if (w1.length() >= v.length() || !prefix_leq(w1, v)) continue;
        for (int s = 0; s < v.system()->rank(); ++s) {
          if (w1.has_right_descent(s)) continue;
          GroupElement w1s = w1.mul_gen(s);
          if (!prefix_leq(w1s, v) || !(wall(w1, s) == h)) continue;
          out.push_back(DeletionPattern{w1, s, multiply(inverse(w1s), v), t, b3, h});
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), pattern_less);
  return out;
}

ClassifiedWord classify(const SystemPtr& sys, const Factorization& w, const std::vector<DeletionPattern>& patterns) {
  if (patterns.empty()) throw Error(Errc::ReducedInput, "classify: no deletion patterns");
  ClassifiedWord cw;
  cw.letters = group_letters(w);
  const auto& g = cw.letters;
  int n = int(g.size());
  GroupElement pre = GroupElement::identity(sys);
  int j = -1;
  for (int i = 0; i < n; ++i) {
    GroupElement next = multiply(pre, g[i]);
    if (next.length() != pre.length() + g[i].length()) {
      j = i;
      break;
    }
    pre = next;
  }
  if (j < 0) throw Error(Errc::ReducedInput, "classify: " + w.str() + " multiplies to a reduced element");
  if (g[j].length() != 1) throw Error(Errc::NotClassified, "first nonreduced step is not a simple reflection");
  int t = g[j].word()[0];
  Wall h = wall(pre, t);
  GroupElement one = GroupElement::identity(sys), p = one;
  int jp = -1;
  for (int i = 0; i < j; ++i) {
    p = multiply(p, g[i]);
    if (separates(h, one, p)) {
      jp = i;
      break;
    }
  }
  if (jp < 0 || g[jp].length() != 1) throw Error(Errc::NotClassified, "wall first crossed inside a longer letter");
  int s = g[jp].word()[0];
  GroupElement w1 = product_of(sys, g, 0, jp), w2 = product_of(sys, g, jp + 1, j);
  BraidElement b3(sys);
  for (int i = j + 1; i < n; ++i) b3 = bmul(b3, w.letters[i]);
  for (std::size_t d = 0; d < patterns.size(); ++d) {
    const auto& T = patterns[d];
    if (T.s == s && T.t == t && T.w1 == w1 && T.w2 == w2 && T.b3 == b3) {
      cw.d = int(d);
      cw.a = jp;
      cw.nb = j - jp - 1;
      cw.nc = n - j - 1;
      return cw;
    }
  }
  throw Error(Errc::NotClassified, "no deletion pattern matches " + w.str());
}

std::optional<int> b_min_opt(const ClassifiedWord& w, const DeletionPattern& T) {
  GroupElement cur = GroupElement::generator(T.w1.system(), T.s);
  for (int i = 1; i <= w.nb; ++i) {
    cur = multiply(cur, w.letters[w.a + i]);
    if (popcount(cur.left_descents()) >= 2) return i;
  }
  return std::nullopt;
}

int b_min(const ClassifiedWord& w, const DeletionPattern& T) {
  auto r = b_min_opt(w, T);
  if (!r) throw Error(Errc::NoGapIndex, "no gap index for pattern " + T.str());
  return *r;
}

int b_min(const DeletionPattern& T) {
  if (T.w2.is_identity()) throw Error(Errc::NoGapIndex, "w2 is empty");
  GroupElement sw2 = multiply(GroupElement::generator(T.w1.system(), T.s), T.w2);
  if (popcount(sw2.left_descents()) < 2) throw Error(Errc::NoGapIndex, "no gap index for pattern " + T.str());
  return 1;
}

// ---- strata ----

bool Stratification::meets(int x, int d) const {
  Bits u = word_f.chains[x] | pattern_chains[d - 1];
  return totally_ordered(*word_f.lattice, u);
}

bool Stratification::maps_to(int x, int d) const { return pattern_chains[d - 1].is_subset_of(word_f.chains[x]); }

Stratification stratify(const BraidElement& b) {
  Stratification S;
  S.base = b;
  S.patterns = enumerate_deletion_patterns(b);
  S.word_f = enumerate_word(b, WordFilter::F);
  const auto& L = *S.word_f.lattice;
  for (auto& T : S.patterns) {
    Bits c(L.elements.size());
    for (int id : chain_ids(L, T.word(), b.system())) c.set(id);
    S.pattern_chains.push_back(std::move(c));
  }
  S.m.assign(S.word_f.size(), -1);
  for (int x = 0; x < S.word_f.size(); ++x) {
    if (S.word_f.in_fn(x)) {
      S.m[x] = 0;
      continue;
    }
    for (int d = 1; d <= S.D(); ++d)
      if (S.meets(x, d)) {
        S.m[x] = d;
        break;
      }
  }
  return S;
}

Strata strata(const Stratification& S, int d) {
  if (d < 0 || d > S.D()) throw Error(Errc::IndexOutOfRange, "stratum index " + std::to_string(d));
  Strata r;
  for (int x = 0; x < S.word_f.size(); ++x) {
    int m = S.m[x];
    if (m < 0 || m > d) continue;
    r.le.push_back(x);
    if (d == 0) continue;
    if (m < d) r.lt.push_back(x);
    else r.fr_d.push_back(x);
  }
  return r;
}

std::vector<int> slice(const Stratification& S, int d) {
  if (d < 1 || d > S.D()) throw Error(Errc::IndexOutOfRange, "pattern index " + std::to_string(d));
  std::vector<int> out;
  for (int x = 0; x < S.word_f.size(); ++x)
    if (S.word_f.in_fr[x] && S.maps_to(x, d)) out.push_back(x);
  return out;
}

// ---- block partitions ----

BlockPartition BlockPartition::singletons(int n) {
  return BlockPartition{n, n <= 1 ? 0 : (std::uint64_t(1) << (n - 1)) - 1};
}

BlockPartition BlockPartition::whole(int n) { return BlockPartition{n, 0}; }

std::vector<std::pair<int, int>> BlockPartition::blocks() const {
  std::vector<std::pair<int, int>> out;
  int begin = 0;
  for (int i = 0; i < n; ++i)
    if (i == n - 1 || ((cuts >> i) & 1u)) {
      out.emplace_back(begin, i + 1);
      begin = i + 1;
    }
  return out;
}

bool BlockPartition::is_singletons() const { return cuts == singletons(n).cuts; }

BlockPartition BlockPartition::united(int begin, int end) const {
  BlockPartition p = *this;
  for (int i = begin; i + 1 < end; ++i) p.cuts &= ~(std::uint64_t(1) << i);
  return p;
}

bool BlockPartition::contains(int begin, int end) const {
  for (int i = begin; i + 1 < end; ++i)
    if ((cuts >> i) & 1u) return false;
  return true;
}

std::string BlockPartition::str() const {
  std::string out;
  for (auto [b, e] : blocks()) {
    out += "[";
    for (int i = b; i < e; ++i) out += (i > b ? " " : "") + std::to_string(i);
    out += "]";
  }
  return out;
}

Factorization coarsen(const Factorization& w, const BlockPartition& p) {
  if (p.n != int(w.letters.size())) throw Error(Errc::BadPartition, "partition size mismatch");
  Factorization out;
  for (auto [b, e] : p.blocks()) {
    BraidElement x = w.letters[b];
    for (int i = b + 1; i < e; ++i) x = bmul(x, w.letters[i]);
    out.letters.push_back(x);
  }
  return out;
}

bool BlockFrame::finite_type(int begin, int end) const {
  GenSet J = 0;
  for (int i = begin; i < end; ++i) J |= support(letters[i]);
  return v.system()->is_finite_type(J);
}

bool BlockFrame::nonreduced(int begin, int end) const {
  int len = 0;
  for (int i = begin; i < end; ++i) len += letters[i].length();
  return product_of(v.system(), letters, begin, end).length() != len;
}

bool BlockFrame::cond_anchor(int begin, int end) const {
  return anchor_end && begin <= s_pos && *anchor_end < end;
}

bool BlockFrame::cond_t_prefix(int begin, int end) const {
  if (!(begin <= t_pos && t_pos < end)) return false;
  std::vector<GroupElement> tail(letters.begin() + t_pos, letters.begin() + end);
  GenSet L = simple_prefixes(BraidElement::from_factors(v.system(), tail));
  for (int u = 0; u < v.system()->rank(); ++u) {
    if (!has_gen(L, u) || u == t) continue;
    if (!v.has_right_descent(u) || u < t) return true;
  }
  return false;
}

bool BlockFrame::satisfies(int begin, int end) const {
  return cond_nonreduced(begin, end) || cond_anchor(begin, end) || cond_t_prefix(begin, end);
}

bool BlockFrame::maps_below(const BlockPartition& p) const {
  bool any = false;
  for (auto [b, e] : p.blocks()) {
    if (!finite_type(b, e)) return false;
    if (!any && satisfies(b, e)) any = true;
  }
  return any;
}

bool BlockFrame::admissible(const BlockPartition& p) const {
  bool nontrivial = false;
  for (auto [b, e] : p.blocks()) {
    if (!finite_type(b, e)) return false;
    if (e - b < 2) continue;
    if (b < s_pos || !satisfies(b, e)) return false;
    nontrivial = true;
  }
  return nontrivial;
}

BlockPartition BlockFrame::retract(const BlockPartition& p) const {
  BlockPartition q = p;
  if (s_pos > 0) q.cuts |= std::uint64_t(1) << (s_pos - 1);
  for (auto [b, e] : q.blocks())
    if (e - b >= 2 && !satisfies(b, e))
      for (int i = b; i + 1 < e; ++i) q.cuts |= std::uint64_t(1) << i;
  return q;
}

BlockFrame block_frame(const ClassifiedWord& w, const DeletionPattern& T) {
  BlockFrame F;
  F.letters = w.letters;
  F.s_pos = w.s_pos();
  F.t_pos = w.t_pos();
  if (auto bm = b_min_opt(w, T)) F.anchor_end = w.s_pos() + *bm;
  F.v = T.v();
  F.t = T.t;
  return F;
}

int BlockPoset::find(const BlockPartition& p) const {
  auto it = std::find(parts.begin(), parts.end(), p);
  return it == parts.end() ? -1 : int(it - parts.begin());
}

BlockPoset block_poset_if(int n, const std::function<bool(const BlockPartition&)>& keep) {
  if (n > kMaxBlockLetters) throw Error(Errc::BudgetExceeded, "too many letters for block partitions");
  BlockPoset B;
  std::uint64_t count = n <= 1 ? 1 : std::uint64_t(1) << (n - 1);
  for (std::uint64_t c = 0; c < count; ++c) {
    BlockPartition p{n, c};
    if (keep(p)) B.parts.push_back(p);
  }
  std::vector<std::string> labels;
  for (auto& p : B.parts) labels.push_back(p.str());
  B.poset = FinPoset::from_leq(
      int(B.parts.size()), [&](int x, int y) { return B.parts[x].refines(B.parts[y]); }, std::move(labels), false);
  return B;
}

BlockPoset block_poset(const BlockFrame& F) {
  return block_poset_if(int(F.letters.size()), [&](const BlockPartition& p) { return F.admissible(p); });
}

BlockPoset block_poset(const ClassifiedWord& w, const DeletionPattern& T) { return block_poset(block_frame(w, T)); }

// ---- gap posets and Block'' ----

bool is_gap_word(const SystemPtr& sys, const DeletionPattern& T, const std::vector<GroupElement>& y) {
  if (y.empty()) return false;
  GroupElement s = GroupElement::generator(sys, T.s);
  GroupElement sy = multiply(s, y[0]);
  return sy.length() == 1 + y[0].length() && popcount(sy.left_descents()) >= 2;
}

GapPosets gap_posets(const SystemPtr& sys, const DeletionPattern& T) {
  GapPosets G;
  G.word = enumerate_word(lift(T.w2), WordFilter::All);
  GroupElement s = GroupElement::generator(sys, T.s);
  for (int i = 0; i < G.word.size(); ++i) {
    if (G.word.objects[i].letters.empty()) continue;
    auto y = group_letters(G.word.objects[i]);
    if (!is_gap_word(sys, T, y)) continue;
    G.gap.push_back(i);
    if (sys->is_finite_type(support(multiply(s, y[0])))) {
      G.embed.push_back(int(G.gap.size()) - 1);
      G.gap_1f.push_back(i);
    }
  }
  G.gap_poset = G.word.poset.induced(G.gap);
  G.gap_1f_poset = G.word.poset.induced(G.gap_1f);
  return G;
}

BlockFrame block2_frame(const SystemPtr& sys, const DeletionPattern& T, const std::vector<GroupElement>& y,
                        const std::vector<GroupElement>& z) {
  if (!is_gap_word(sys, T, y)) throw Error(Errc::MalformedInput, "Block'': not a gap word");
  int len = 0;
  for (auto& g : y) len += g.length();
  GroupElement py = product_of(sys, y, 0, int(y.size()));
  if (!(py == T.w2) || py.length() != len) throw Error(Errc::MalformedInput, "Block'': y does not factor w2");
  BraidElement pz(sys);
  for (auto& g : z) {
    if (g.is_identity()) throw Error(Errc::MalformedInput, "Block'': identity letter");
    pz = bmul(pz, lift(g));
  }
  if (!(pz == T.b3)) throw Error(Errc::MalformedInput, "Block'': z does not factor b3");
  BlockFrame F;
  F.letters.push_back(GroupElement::generator(sys, T.s));
  F.letters.insert(F.letters.end(), y.begin(), y.end());
  F.letters.push_back(GroupElement::generator(sys, T.t));
  F.letters.insert(F.letters.end(), z.begin(), z.end());
  F.s_pos = 0;
  F.t_pos = 1 + int(y.size());
  F.anchor_end = 1;
  F.v = T.v();
  F.t = T.t;
  return F;
}

BlockPoset block2_poset(const SystemPtr& sys, const DeletionPattern& T, const std::vector<GroupElement>& y,
                        const std::vector<GroupElement>& z) {
  return block_poset(block2_frame(sys, T, y, z));
}

BlockPartition pullback(const BlockPartition& p, const std::vector<int>& surjection) {
  int m = int(surjection.size());
  BlockPartition q{m, 0};
  if (m == 0) return q;
  if (surjection.front() != 0 || surjection.back() != p.n - 1)
    throw Error(Errc::BadPartition, "pullback along a non-surjective map");
  std::vector<int> size_of(p.n);
  for (auto [b, e] : p.blocks())
    for (int i = b; i < e; ++i) size_of[i] = e - b;
  for (int i = 0; i + 1 < m; ++i) {
    int a = surjection[i], c = surjection[i + 1];
    bool cut;
    if (a == c) cut = size_of[a] == 1;
    else if (c == a + 1) cut = (p.cuts >> a) & 1u;
    else throw Error(Errc::BadPartition, "pullback along a non-monotone map");
    if (cut) q.cuts |= std::uint64_t(1) << i;
  }
  return q;
}

FImage functor_F(const ClassifiedWord& w, const DeletionPattern& T) {
  int bm = b_min(w, T);
  const SystemPtr& sys = T.w1.system();
  FImage f;
  int a = w.a;
  f.y.push_back(product_of(sys, w.letters, a + 1, a + 1 + bm));
  for (int i = bm + 1; i <= w.nb; ++i) f.y.push_back(w.letters[a + i]);
  for (int i = w.t_pos() + 1; i < w.size(); ++i) f.z.push_back(w.letters[i]);
  f.surjection.push_back(0);
  for (int i = 1; i <= w.nb; ++i) f.surjection.push_back(i <= bm ? 1 : 1 + i - bm);
  int tp = 1 + w.nb - bm + 1;
  for (int k = 0; k <= w.nc; ++k) f.surjection.push_back(tp + k);
  return f;
}

WordPoset word_s_1f(const SystemPtr& sys, int s, const GroupElement& w) {
  GenSet L = w.left_descents();
  if (!has_gen(L, s) || popcount(L) < 2)
    throw Error(Errc::HypothesisFailed, "Word_s^1f needs s in L(w) and |L(w)| >= 2");
  WordPoset P = enumerate_word(lift(w), WordFilter::All);
  std::vector<int> keep;
  for (int i = 0; i < P.size(); ++i) {
    GroupElement v1 = alpha(P.objects[i].letters.front());
    GenSet L1 = v1.left_descents();
    if (sys->is_finite_type(support(v1)) && has_gen(L1, s) && popcount(L1) >= 2) keep.push_back(i);
  }
  return restrict_word_poset(P, keep);
}

}  // namespace coxtop
