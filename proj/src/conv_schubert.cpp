#include "coxtop/conv_schubert.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "coxtop/errors.hpp"

namespace coxtop {

namespace {

std::uint64_t pair_key(int x, int y) { return (std::uint64_t(std::uint32_t(x)) << 32) | std::uint32_t(y); }

bool valid_map(const IndexMap& f, int n1, int n2) {
  if (int(f.size()) != n1) return false;
  for (int i = 0; i < n1; ++i) {
    if (f[i] < 0 || f[i] >= n2) return false;
    if (i > 0 && f[i] < f[i - 1]) return false;
  }
  return true;
}

// Arrows grouped by endpoints, looked up by index map.
class ArrowIndex {
 public:
  int add(int src, int tgt, IndexMap map) {
    int id = int(arrows_.size());
    hom_[pair_key(src, tgt)].push_back(id);
    arrows_.push_back({src, tgt, std::move(map)});
    return id;
  }
  int find(int src, int tgt, const IndexMap& map) const {
    auto it = hom_.find(pair_key(src, tgt));
    if (it == hom_.end()) return -1;
    for (int id : it->second)
      if (arrows_[id].map == map) return id;
    return -1;
  }
  const std::vector<ConvArrow>& arrows() const { return arrows_; }
  std::vector<ConvArrow> take() { return std::move(arrows_); }
  std::size_t size() const { return arrows_.size(); }

 private:
  std::vector<ConvArrow> arrows_;
  std::unordered_map<std::uint64_t, std::vector<int>> hom_;
};

// Category over `objects` (any labels) with arrows from an ArrowIndex whose maps compose.
FinCategory category_of(std::vector<std::string> labels, const ArrowIndex& idx, bool check) {
  auto& arrows = idx.arrows();
  std::vector<FinCategory::Morphism> mor;
  mor.reserve(arrows.size());
  std::vector<int> identity(labels.size(), -1);
  for (std::size_t f = 0; f < arrows.size(); ++f) {
    mor.push_back({arrows[f].src, arrows[f].tgt, ""});
    auto& a = arrows[f];
    if (a.src == a.tgt && a.map == identity_map(int(a.map.size()))) identity[a.src] = int(f);
  }
  auto compose = [&](int f, int g) {
    return idx.find(arrows[f].src, arrows[g].tgt, compose_maps(arrows[f].map, arrows[g].map));
  };
  return FinCategory::build(std::move(labels), std::move(mor), std::move(identity), compose, check);
}

// Associativity is automatic for index maps; the full table check is kept for small cases.
constexpr std::size_t kCheckedArrows = 3000;

}  // namespace

std::string ConvObject::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += ", ";
    out += letters[i].str();
  }
  return out + ")";
}

ConvObject make_conv_object(std::vector<GroupElement> letters) {
  for (auto& w : letters)
    if (!w.system()->is_finite_type(support(w)))
      throw Error(Errc::NotFiniteType, "letter " + w.str() + " is not of finite type");
  return ConvObject{std::move(letters)};
}

std::vector<IndexMap> weakly_increasing_maps(int n1, int n2) {
  std::vector<IndexMap> out;
  IndexMap cur(n1);
  auto rec = [&](auto& self, int i, int lo) -> void {
    if (i == n1) {
      out.push_back(cur);
      return;
    }
    for (int j = lo; j < n2; ++j) {
      cur[i] = j;
      self(self, i + 1, j);
    }
  };
  rec(rec, 0, 0);
  return out;
}

IndexMap identity_map(int n) {
  IndexMap f(n);
  std::iota(f.begin(), f.end(), 0);
  return f;
}

IndexMap compose_maps(const IndexMap& f, const IndexMap& g) {
  IndexMap h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[i] = g[f[i]];
  return h;
}

std::vector<std::vector<int>> fibers(const IndexMap& f, int n2) {
  std::vector<std::vector<int>> out(n2);
  for (std::size_t i = 0; i < f.size(); ++i) out[f[i]].push_back(int(i));
  return out;
}

std::string map_str(const IndexMap& f) {
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + std::to_string(f[i]);
  return out;
}

BraidElement rank(const SystemPtr& sys, const ConvObject& x) { return BraidElement::from_factors(sys, x.letters); }

namespace {

std::vector<GroupElement> fiber_letters(const ConvObject& x, const std::vector<int>& fiber) {
  std::vector<GroupElement> out;
  for (int i : fiber) out.push_back(x.letters[i]);
  return out;
}

int total_length(const std::vector<GroupElement>& seq) {
  int n = 0;
  for (auto& w : seq) n += w.length();
  return n;
}

void require_map(const ConvMorphism& f) {
  if (!valid_map(f.map, f.src.size(), f.tgt.size()))
    throw Error(Errc::InvalidMorphism, "index map is not a weakly increasing map of the right size");
}

}  // namespace

bool is_morphism(const SystemPtr& sys, const ConvObject& src, const ConvObject& tgt, const IndexMap& map) {
  if (!valid_map(map, src.size(), tgt.size())) return false;
  auto fib = fibers(map, tgt.size());
  for (int j = 0; j < tgt.size(); ++j)
    if (!bruhat_leq(demazure_product(sys, fiber_letters(src, fib[j])), tgt.letters[j])) return false;
  return true;
}

bool basic_criterion(const SystemPtr& sys, const ConvMorphism& f) {
  require_map(f);
  auto fib = fibers(f.map, f.tgt.size());
  for (int j = 0; j < f.tgt.size(); ++j) {
    auto seq = fiber_letters(f.src, fib[j]);
    if (!(demazure_product(sys, seq) == f.tgt.letters[j])) return false;
    if (total_length(seq) != f.tgt.letters[j].length()) return false;
  }
  return true;
}

bool weakly_downward(const SystemPtr& sys, const ConvMorphism& f) {
  require_map(f);
  auto fib = fibers(f.map, f.tgt.size());
  for (int j = 0; j < f.tgt.size(); ++j)
    if (!(demazure_product(sys, fiber_letters(f.src, fib[j])) == f.tgt.letters[j])) return false;
  return true;
}

bool weakly_upward(const ConvMorphism& f) { return f.src.size() == f.tgt.size() && f.map == identity_map(f.src.size()); }

const char* morphism_kind_name(MorphismKind k) {
  switch (k) {
    case MorphismKind::Increasing: return "increasing";
    case MorphismKind::Decreasing: return "decreasing";
    case MorphismKind::LevelBasic: return "level_basic";
    case MorphismKind::LevelNonbasic: return "level_nonbasic";
  }
  return "?";
}

MorphismKind classify_morphism(const SystemPtr& sys, const ConvMorphism& f) {
  if (!is_morphism(sys, f.src, f.tgt, f.map)) throw Error(Errc::InvalidMorphism, "not a morphism of Word^1_fr");
  int c = rank_cmp(rank(sys, f.src), rank(sys, f.tgt));
  if (c < 0) return MorphismKind::Increasing;
  if (c > 0) return MorphismKind::Decreasing;
  return basic_criterion(sys, f) ? MorphismKind::LevelBasic : MorphismKind::LevelNonbasic;
}

// ---------------------------------------------------------------- truncation

Truncation Truncation::build(const SystemPtr& sys, const TruncationSpec& spec) {
  if (spec.max_length < 0 || spec.max_letters < 0)
    throw Error(Errc::ConfigError, "truncation budgets must be non-negative");
  if (spec.max_letters > 8 || spec.max_length > 12)
    throw Error(Errc::BudgetExceeded, "truncation window above budget");
  Truncation T;
  T.sys_ = sys;
  T.spec_ = spec;
  for (auto& w : enumerate_elements(sys, spec.max_length, sys->all()))
    if (sys->is_finite_type(support(w))) T.alphabet_.push_back(w);
  int E = T.alphabet_size();
  T.bruhat_.assign(std::size_t(E) * E, 0);
  T.dem_.assign(std::size_t(E) * E, -1);
  for (int u = 0; u < E; ++u)
    for (int v = 0; v < E; ++v) {
      T.bruhat_[std::size_t(u) * E + v] = bruhat_leq(T.alphabet_[u], T.alphabet_[v]);
      T.dem_[std::size_t(u) * E + v] = T.letter_id(demazure_mul(T.alphabet_[u], T.alphabet_[v]));
    }

  std::vector<std::vector<int>> codes;
  std::vector<int> cur;
  auto rec = [&](auto& self, int budget) -> void {
    codes.push_back(cur);
    if (int(cur.size()) == spec.max_letters) return;
    for (int a = 0; a < E; ++a) {
      int l = T.alphabet_[a].length();
      if (l > budget) continue;
      cur.push_back(a);
      self(self, budget - l);
      cur.pop_back();
    }
  };
  rec(rec, spec.max_length);

  std::unordered_map<BraidElement, int, BraidHash> rank_id;
  std::vector<BraidElement> ranks;
  std::vector<std::pair<std::vector<int>, int>> kept;
  for (auto& c : codes) {
    std::vector<GroupElement> letters;
    for (int a : c) letters.push_back(T.alphabet_[a]);
    BraidElement r = BraidElement::from_factors(sys, letters);
    if (spec.b_max && rank_cmp(r, *spec.b_max) > 0) continue;
    auto [it, fresh] = rank_id.try_emplace(r, int(ranks.size()));
    if (fresh) ranks.push_back(r);
    kept.emplace_back(c, it->second);
  }
  std::vector<int> order(ranks.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return rank_cmp(ranks[a], ranks[b]) < 0; });
  std::vector<int> level_of(ranks.size());
  for (std::size_t i = 0; i < order.size(); ++i) level_of[order[i]] = int(i);
  for (int i : order) {
    T.ranks_.push_back(ranks[i]);
    T.level_dem_.push_back(demazure(ranks[i]));
  }
  for (auto& [c, r] : kept) r = level_of[r];
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  T.by_level_.resize(T.ranks_.size());
  for (auto& [c, l] : kept) {
    int x = int(T.codes_.size());
    std::vector<GroupElement> letters;
    for (int a : c) letters.push_back(T.alphabet_[a]);
    T.objects_.push_back(ConvObject{std::move(letters)});
    T.codes_.push_back(c);
    T.level_.push_back(l);
    T.rank_dem_.push_back(T.dem(c));
    T.by_level_[l].push_back(x);
    T.index_[c] = x;
  }
  T.maps_.resize(spec.max_letters + 1);
  for (int n1 = 0; n1 <= spec.max_letters; ++n1)
    for (int n2 = 0; n2 <= spec.max_letters; ++n2) T.maps_[n1].push_back(weakly_increasing_maps(n1, n2));
  return T;
}

int Truncation::find_level(const BraidElement& b) const {
  auto it = std::lower_bound(ranks_.begin(), ranks_.end(), b,
                             [](const BraidElement& x, const BraidElement& y) { return rank_cmp(x, y) < 0; });
  if (it == ranks_.end() || !(*it == b)) return -1;
  return int(it - ranks_.begin());
}

int Truncation::find(const ConvObject& x) const {
  std::vector<int> c;
  for (auto& w : x.letters) {
    int a = letter_id(w);
    if (a < 0) return -1;
    c.push_back(a);
  }
  return find_code(c);
}

int Truncation::find_code(const std::vector<int>& c) const {
  auto it = index_.find(c);
  return it == index_.end() ? -1 : it->second;
}

int Truncation::letter_id(const GroupElement& w) const {
  if (w.system() != sys_) return -1;
  // The alphabet is sorted by order-B.
  auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), w, order_b_less);
  if (it == alphabet_.end() || !(*it == w)) return -1;
  return int(it - alphabet_.begin());
}

int Truncation::dem(const std::vector<int>& ids) const {
  int d = 0;
  for (int a : ids) {
    if (a < 0) return -1;
    d = dem2(d, a);
    if (d < 0) return -1;
  }
  return d;
}

const std::vector<IndexMap>& Truncation::maps(int n1, int n2) const {
  if (n1 > spec_.max_letters || n2 > spec_.max_letters)
    throw Error(Errc::BudgetExceeded, "index maps beyond the letter window");
  return maps_[n1][n2];
}

bool Truncation::is_morphism(int x, int y, const IndexMap& f) const {
  auto& a = codes_[x];
  auto& b = codes_[y];
  if (f.size() != a.size()) return false;
  std::size_t i = 0;
  for (int j = 0; j < int(b.size()); ++j) {
    int d = 0;
    for (; i < f.size() && f[i] == j; ++i) {
      d = dem2(d, a[i]);
      if (d < 0) return false;
    }
    if (!bruhat(d, b[j])) return false;
  }
  return i == f.size();
}

std::vector<IndexMap> Truncation::morphisms(int x, int y) const {
  std::vector<IndexMap> out;
  for (auto& f : maps(letters(x), letters(y)))
    if (is_morphism(x, y, f)) out.push_back(f);
  return out;
}

std::vector<int> Truncation::fiber_dem(int x, const IndexMap& f, int n2) const {
  std::vector<int> out(n2, 0);
  auto& a = codes_[x];
  for (std::size_t i = 0; i < f.size(); ++i) {
    int& d = out[f[i]];
    if (d >= 0) d = dem2(d, a[i]);
  }
  return out;
}

bool Truncation::weakly_downward(int x, int y, const IndexMap& f) const {
  return fiber_dem(x, f, letters(y)) == codes_[y];
}

bool Truncation::basic_criterion(int x, int y, const IndexMap& f) const {
  if (!weakly_downward(x, y, f)) return false;
  std::vector<int> len(letters(y), 0);
  for (std::size_t i = 0; i < f.size(); ++i) len[f[i]] += letter_length(codes_[x][i]);
  for (int j = 0; j < letters(y); ++j)
    if (len[j] != letter_length(codes_[y][j])) return false;
  return true;
}

std::string Truncation::arrow_str(int x, int y, const IndexMap& f) const {
  return objects_[x].str() + " -[" + map_str(f) + "]-> " + objects_[y].str();
}

// ---------------------------------------------------------------- materialized categories

ConvCategory build_truncation(const Truncation& T, std::size_t budget) {
  ArrowIndex idx;
  for (int x = 0; x < T.size(); ++x)
    for (int y = 0; y < T.size(); ++y)
      for (auto& f : T.morphisms(x, y)) {
        if (idx.size() >= budget) throw Error(Errc::BudgetExceeded, "truncation has too many morphisms");
        idx.add(x, y, f);
      }
  std::vector<std::string> labels;
  for (int x = 0; x < T.size(); ++x) labels.push_back(T.object(x).str());
  ConvCategory C;
  C.cat = category_of(std::move(labels), idx, idx.size() <= kCheckedArrows);
  C.objects.resize(T.size());
  std::iota(C.objects.begin(), C.objects.end(), 0);
  C.arrows = idx.take();
  return C;
}

ConvCategory build_truncation(const SystemPtr& sys, const TruncationSpec& spec, std::size_t budget) {
  return build_truncation(Truncation::build(sys, spec), budget);
}

std::string export_truncation(const Truncation& T, const ConvCategory& C) {
  std::string out = "truncation " + std::to_string(C.cat.num_objects()) + " " +
                    std::to_string(C.cat.num_morphisms()) + "\n";
  for (int x = 0; x < C.cat.num_objects(); ++x)
    out += "obj " + std::to_string(x) + " " + T.object(C.objects[x]).str() + "\n";
  for (std::size_t f = 0; f < C.arrows.size(); ++f)
    out += "mor " + std::to_string(f) + " " + std::to_string(C.arrows[f].src) + " " +
           std::to_string(C.arrows[f].tgt) + " " + map_str(C.arrows[f].map) + "\n";
  for (int f = 0; f < C.cat.num_morphisms(); ++f) {
    int y = C.cat.morphism(f).tgt;
    for (int z = 0; z < C.cat.num_objects(); ++z)
      for (int g : C.cat.hom(y, z))
        out += "comp " + std::to_string(f) + " " + std::to_string(g) + " " + std::to_string(C.cat.compose(f, g)) +
               "\n";
  }
  return out;
}

// ---------------------------------------------------------------- Fact_phi

FactCategory fact_category(const Truncation& T, int x, int y, const IndexMap& phi, int max_mid_letters,
                           std::size_t budget) {
  if (T.level(x) != T.level(y)) throw Error(Errc::NotLevel, "Fact is defined for level morphisms");
  if (!T.is_morphism(x, y, phi)) throw Error(Errc::InvalidMorphism, T.arrow_str(x, y, phi));
  int cap = max_mid_letters < 0 ? T.letters(x) + T.letters(y) : max_mid_letters;
  cap = std::min(cap, T.spec().max_letters);
  int n2 = T.letters(y);

  FactCategory F;
  std::map<std::pair<int, IndexMap>, std::vector<int>> by_first;  // (mid, f1) -> objects
  for (int l = 0; l < T.level(x); ++l)
    for (int m : T.objects_at(l)) {
      // Both maps weakly increase the Demazure product, so d(r(m)) = d(r(x)).
      if (T.letters(m) > cap || !(T.level_dem(l) == T.level_dem(T.level(x)))) continue;
      auto seconds = T.morphisms(m, y);
      if (seconds.empty()) continue;
      for (auto& f1 : T.morphisms(x, m))
        for (auto& f2 : seconds) {
          if (compose_maps(f1, f2) != phi) continue;
          by_first[{m, f1}].push_back(int(F.objects.size()));
          F.objects.push_back({m, f1, f2});
        }
    }
  if (F.objects.size() > budget) throw Error(Errc::BudgetExceeded, "Fact category too large");

  ArrowIndex idx;
  std::map<std::pair<int, int>, std::vector<IndexMap>> mor_cache;
  auto mor = [&](int a, int b) -> const std::vector<IndexMap>& {
    auto [it, fresh] = mor_cache.try_emplace({a, b});
    if (fresh) it->second = T.morphisms(a, b);
    return it->second;
  };
  std::vector<int> mids;
  for (auto& o : F.objects) mids.push_back(o.mid);
  std::sort(mids.begin(), mids.end());
  mids.erase(std::unique(mids.begin(), mids.end()), mids.end());
  for (int a = 0; a < int(F.objects.size()); ++a) {
    auto& A = F.objects[a];
    for (int m2 : mids)
      for (auto& psi : mor(A.mid, m2)) {
        auto it = by_first.find({m2, compose_maps(A.f1, psi)});
        if (it == by_first.end()) continue;
        for (int b : it->second)
          if (compose_maps(psi, F.objects[b].f2) == A.f2) {
            if (idx.size() >= budget) throw Error(Errc::BudgetExceeded, "Fact category too large");
            idx.add(a, b, psi);
          }
      }
  }
  std::vector<std::string> labels;
  for (auto& o : F.objects)
    labels.push_back(T.object(o.mid).str() + " [" + map_str(o.f1) + "|" + map_str(o.f2) + "]");
  F.cat = category_of(std::move(labels), idx, idx.size() <= kCheckedArrows);

  IndexMap id2 = identity_map(n2);
  for (int a = 0; a < int(F.objects.size()); ++a)
    if (F.objects[a].f2 == id2) F.fact1.push_back(a);
  F.expected_initial = T.fiber_dem(x, phi, n2);
  if (!F.fact1.empty()) {
    if (auto i = F.cat.full_subcategory(F.fact1).initial_object()) F.fact1_initial = F.fact1[*i];
  }
  for (int a = 0; a < int(F.objects.size()); ++a) {
    auto& A = F.objects[a];
    int m2 = T.find_code(T.fiber_dem(A.mid, A.f2, n2));
    int unit = -1;
    if (m2 >= 0) {
      auto it = by_first.find({m2, phi});
      if (it != by_first.end())
        for (int b : it->second)
          if (F.objects[b].f2 == id2) unit = idx.find(a, b, A.f2);
    }
    F.unit.push_back(unit);
  }
  return F;
}

// ---------------------------------------------------------------- Z_w and Y_w

FinPoset SliceAdjunction::sub_poset() const {
  FinCategory S = slice.full_subcategory(sub);
  auto P = S.as_poset();
  if (!P) throw Error(Errc::HasLoops, "subcategory is not a poset");
  return *P;
}

namespace {

bool all_valid(const std::vector<int>& v) {
  return std::all_of(v.begin(), v.end(), [](int u) { return u >= 0; });
}

}  // namespace

SliceAdjunction z_subcategory(const Truncation& T, int w) {
  int n = T.letters(w), lw = T.level(w);
  SliceAdjunction S;
  std::map<std::pair<int, IndexMap>, int> pos;
  for (int l = 0; l < lw; ++l)
    for (int v : T.objects_at(l))
      for (auto& f : T.morphisms(v, w)) {
        pos[{v, f}] = int(S.objects.size());
        S.objects.emplace_back(v, f);
      }
  ArrowIndex idx;
  for (int a = 0; a < int(S.objects.size()); ++a) {
    auto& [v, f] = S.objects[a];
    for (int b = 0; b < int(S.objects.size()); ++b) {
      auto& [u, g] = S.objects[b];
      for (auto& psi : T.morphisms(v, u))
        if (compose_maps(psi, g) == f) idx.add(a, b, psi);
    }
  }
  std::vector<std::string> labels;
  for (auto& [v, f] : S.objects) labels.push_back(T.object(v).str() + " [" + map_str(f) + "]");
  S.slice = category_of(std::move(labels), idx, idx.size() <= kCheckedArrows);

  IndexMap id = identity_map(n);
  for (int a = 0; a < int(S.objects.size()); ++a) {
    auto& [v, f] = S.objects[a];
    if (f != id) continue;
    bool strict = false, below = true;
    for (int i = 0; i < n; ++i) {
      below = below && T.bruhat(T.code(v)[i], T.code(w)[i]);
      strict = strict || T.code(v)[i] != T.code(w)[i];
    }
    if (below && strict) S.sub.push_back(a);
  }
  for (int a = 0; a < int(S.objects.size()); ++a) {
    auto& [v, f] = S.objects[a];
    int u = T.find_code(T.fiber_dem(v, f, n));
    auto it = u < 0 ? pos.end() : pos.find({u, id});
    S.witness.push_back(it == pos.end() ? -1 : idx.find(a, it->second, f));
  }
  S.holds = all_valid(S.witness) && check_reflection(S.slice, S.sub, S.witness);
  return S;
}

SliceAdjunction y_subcategory(const Truncation& T, int w) {
  int lw = T.level(w);
  SliceAdjunction S;
  std::map<std::pair<int, IndexMap>, int> pos;
  for (int l = 0; l < lw; ++l)
    for (int v : T.objects_at(l))
      for (auto& f : T.morphisms(w, v)) {
        pos[{v, f}] = int(S.objects.size());
        S.objects.emplace_back(v, f);
      }
  ArrowIndex idx;
  for (int a = 0; a < int(S.objects.size()); ++a) {
    auto& [v, f] = S.objects[a];
    for (int b = 0; b < int(S.objects.size()); ++b) {
      auto& [u, g] = S.objects[b];
      for (auto& psi : T.morphisms(v, u))
        if (compose_maps(f, psi) == g) idx.add(a, b, psi);
    }
  }
  std::vector<std::string> labels;
  for (auto& [v, f] : S.objects) labels.push_back(T.object(v).str() + " [" + map_str(f) + "]");
  S.slice = category_of(std::move(labels), idx, idx.size() <= kCheckedArrows);

  for (int a = 0; a < int(S.objects.size()); ++a) {
    auto& [v, f] = S.objects[a];
    if (!T.weakly_downward(w, v, f)) continue;
    if (!T.basic_criterion(w, v, f)) S.sub.push_back(a);
  }
  for (int a = 0; a < int(S.objects.size()); ++a) {
    auto& [v, f] = S.objects[a];
    int n2 = T.letters(v);
    int u = T.find_code(T.fiber_dem(w, f, n2));
    auto it = u < 0 ? pos.end() : pos.find({u, f});
    S.witness.push_back(it == pos.end() ? -1 : idx.find(it->second, a, identity_map(n2)));
  }
  S.holds = all_valid(S.witness) && check_coreflection(S.slice, S.sub, S.witness);
  return S;
}

// ---------------------------------------------------------------- Word^1_fr(b)

namespace {

// Positions of letters different from 1.
std::vector<int> non_identity_positions(const std::vector<int>& code) {
  std::vector<int> out;
  for (int i = 0; i < int(code.size()); ++i)
    if (code[i] != 0) out.push_back(i);
  return out;
}

std::vector<int> restrict_code(const std::vector<int>& code, const std::vector<int>& keep) {
  std::vector<int> out;
  for (int i : keep) out.push_back(code[i]);
  return out;
}

}  // namespace

LevelCategory level_category(const Truncation& T, int level) {
  LevelCategory L;
  auto& objs = T.objects_at(level);
  std::vector<int> pos(T.size(), -1);
  for (int i = 0; i < int(objs.size()); ++i) pos[objs[i]] = i;
  ArrowIndex idx;
  for (int a = 0; a < int(objs.size()); ++a)
    for (int b = 0; b < int(objs.size()); ++b)
      for (auto& f : T.maps(T.letters(objs[a]), T.letters(objs[b])))
        if (T.basic_criterion(objs[a], objs[b], f)) idx.add(a, b, f);
  std::vector<std::string> labels;
  for (int x : objs) labels.push_back(T.object(x).str());
  L.level.cat = category_of(std::move(labels), idx, idx.size() <= kCheckedArrows);
  L.level.objects = objs;
  for (int a = 0; a < int(objs.size()); ++a) {
    auto keep = non_identity_positions(T.code(objs[a]));
    if (int(keep.size()) == T.letters(objs[a])) L.no_ones.push_back(a);
    int c = T.find_code(restrict_code(T.code(objs[a]), keep));
    L.counit.push_back(c < 0 || pos[c] < 0 ? -1 : idx.find(pos[c], a, keep));
  }
  L.level.arrows = idx.take();
  L.holds = all_valid(L.counit) && check_coreflection(L.level.cat, L.no_ones, L.counit);
  return L;
}

// ---------------------------------------------------------------- down comma

BlockPartition preimage_partition(const BlockPartition& p, const IndexMap& surjection) {
  BlockPartition q;
  q.n = int(surjection.size());
  if (q.n > 64) throw Error(Errc::BadPartition, "too many positions");
  for (int i = 0; i + 1 < q.n; ++i) {
    int a = surjection[i], b = surjection[i + 1];
    bool cut = false;
    for (int k = a; k < b; ++k) cut = cut || ((p.cuts >> k) & 1u);
    if (cut) q.cuts |= std::uint64_t(1) << i;
  }
  return q;
}

namespace {

BlockPartition partition_of(const IndexMap& surjection) {
  BlockPartition p;
  p.n = int(surjection.size());
  for (int i = 0; i + 1 < p.n; ++i)
    if (surjection[i] != surjection[i + 1]) p.cuts |= std::uint64_t(1) << i;
  return p;
}

bool is_surjective(const IndexMap& f, int n2) {
  std::vector<char> hit(n2, 0);
  for (int j : f) hit[j] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c; });
}

// The surjection [n] -> [m] of the refinement x -> y in Word(b).
IndexMap refinement_map(const SystemPtr& sys, const Factorization& x, const Factorization& y) {
  auto px = x.partial_products(sys), py = y.partial_products(sys);
  IndexMap f(px.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    while (j < py.size() && !left_divides(px[i], py[j])) ++j;
    f[i] = int(j);
  }
  return f;
}

}  // namespace

namespace {

// Morphisms y -> x of the down comma with y primed. Since the map of y is onto, beta is
// determined by alpha.
std::vector<std::pair<IndexMap, IndexMap>> primed_hom(const Truncation& T, const DownCommaObject& y,
                                                      const DownCommaObject& x,
                                                      const std::vector<IndexMap>& alphas) {
  std::vector<std::pair<IndexMap, IndexMap>> out;
  int n = T.letters(y.wp);
  for (auto& al : alphas) {
    IndexMap beta(n, -1);
    bool ok = true;
    for (std::size_t i = 0; i < al.size() && ok; ++i) {
      int& bj = beta[y.map[i]];
      int v = x.map[al[i]];
      if (bj < 0) bj = v;
      else ok = bj == v;
    }
    if (ok && valid_map(beta, n, T.letters(x.wp)) && T.is_morphism(y.wp, x.wp, beta)) out.emplace_back(al, beta);
  }
  return out;
}

}  // namespace

DownComma down_comma(const Truncation& T, const BraidElement& b, bool materialize, std::size_t budget) {
  auto sys = T.system();
  DownComma D;
  D.b = b;
  int lb = T.find_level(b);
  D.comma = FinCategory::build({}, {}, {}, [](int, int) { return -1; }, false);
  D.lem1 = true;

  if (lb >= 0) {
    // Objects (w, w', phi) with r(w) = b > r(w'). phi raises the Demazure product and
    // r(w') < b caps it, so d(r(w')) = d(b).
    std::vector<int> lower;
    for (int l = 0; l < lb; ++l)
      if (T.level_dem(l) == T.level_dem(lb))
        for (int v : T.objects_at(l)) lower.push_back(v);
    std::map<int, std::vector<int>> by_source;
    for (int w : T.objects_at(lb))
      for (int v : lower)
        for (auto& f : T.morphisms(w, v)) {
          by_source[w].push_back(int(D.objects.size()));
          D.objects.push_back({w, v, f});
          if (D.objects.size() > budget) throw Error(Errc::BudgetExceeded, "down comma too large");
        }

    std::map<std::tuple<int, int, IndexMap>, int> obj_index;
    for (int a = 0; a < int(D.objects.size()); ++a) {
      auto& o = D.objects[a];
      obj_index[{o.w, o.wp, o.map}] = a;
      // Letters of w' equal to 1 are excluded as well (empty fibers), so that phi is onto.
      bool no_ones = non_identity_positions(T.code(o.w)).size() == std::size_t(T.letters(o.w)) &&
                     non_identity_positions(T.code(o.wp)).size() == std::size_t(T.letters(o.wp));
      if (no_ones && T.weakly_downward(o.w, o.wp, o.map)) D.primed.push_back(a);
    }
    // Counit R(x) -> x: delete the letters equal to 1, replace the letters of w' by the
    // Demazure products of their fibers and drop the ones with empty fiber.
    std::vector<std::pair<IndexMap, IndexMap>> counit_maps;
    for (int a = 0; a < int(D.objects.size()); ++a) {
      auto& o = D.objects[a];
      auto keep = non_identity_positions(T.code(o.w));
      std::vector<int> w0 = restrict_code(T.code(o.w), keep);
      std::vector<int> target_pos;
      for (int i : keep)
        if (target_pos.empty() || target_pos.back() != o.map[i]) target_pos.push_back(o.map[i]);
      IndexMap f0;
      for (int i : keep)
        f0.push_back(int(std::lower_bound(target_pos.begin(), target_pos.end(), o.map[i]) - target_pos.begin()));
      int w0_id = T.find_code(w0);
      int v0_id = w0_id < 0 ? -1 : T.find_code(T.fiber_dem(w0_id, f0, int(target_pos.size())));
      int r = -1;
      if (v0_id >= 0) {
        auto it = obj_index.find({w0_id, v0_id, f0});
        if (it != obj_index.end()) r = it->second;
      }
      D.counit_source.push_back(r);
      counit_maps.emplace_back(std::move(keep), std::move(target_pos));
    }

    // Coreflection: Hom(y, R x) -> Hom(y, x), composing with the counit, is bijective for
    // every primed y.
    std::vector<char> is_primed(D.objects.size(), 0);
    for (int y : D.primed) is_primed[y] = 1;
    std::map<std::pair<int, int>, std::vector<IndexMap>> basic_cache;
    auto basic = [&](int u, int w) -> const std::vector<IndexMap>& {
      auto [it, fresh] = basic_cache.try_emplace({u, w});
      if (fresh)
        for (auto& al : T.maps(T.letters(u), T.letters(w)))
          if (T.basic_criterion(u, w, al)) it->second.push_back(al);
      return it->second;
    };
    for (int a = 0; a < int(D.objects.size()) && D.lem1; ++a) {
      int r = D.counit_source[a];
      if (r < 0 || !is_primed[r]) {
        D.lem1 = false;
        D.lem1_failure = "no coreflection of " + T.object(D.objects[a].w).str() + " -[" +
                         map_str(D.objects[a].map) + "]-> " + T.object(D.objects[a].wp).str();
        break;
      }
      auto& [keep, target_pos] = counit_maps[a];
      for (int y : D.primed) {
        auto h1 = primed_hom(T, D.objects[y], D.objects[a], basic(D.objects[y].w, D.objects[a].w));
        auto h0 = primed_hom(T, D.objects[y], D.objects[r], basic(D.objects[y].w, D.objects[r].w));
        std::vector<std::pair<IndexMap, IndexMap>> img;
        for (auto& [al, be] : h0) img.emplace_back(compose_maps(al, keep), compose_maps(be, target_pos));
        std::sort(img.begin(), img.end());
        std::sort(h1.begin(), h1.end());
        if (img != h1) {
          D.lem1 = false;
          D.lem1_failure = "hom sets differ at " + T.object(D.objects[a].w).str();
          break;
        }
      }
    }

    if (materialize) {
      // Morphisms (alpha, beta): alpha basic level, beta arbitrary, beta phi1 = phi2 alpha.
      struct Pair {
        int src, tgt;
        IndexMap alpha, beta;
      };
      std::vector<Pair> pairs;
      std::unordered_map<std::uint64_t, std::vector<int>> hom;
      auto find_pair = [&](int a, int c, const IndexMap& alpha, const IndexMap& beta) {
        auto it = hom.find(pair_key(a, c));
        if (it == hom.end()) return -1;
        for (int id : it->second)
          if (pairs[id].alpha == alpha && pairs[id].beta == beta) return id;
        return -1;
      };
      std::vector<FinCategory::Morphism> mor;
      std::vector<int> identity(D.objects.size(), -1);
      for (auto& [w1, src_objs] : by_source)
        for (auto& [w2, dst_objs] : by_source) {
          auto& alphas = basic(w1, w2);
          if (alphas.empty()) continue;
          for (int a : src_objs)
            for (int c : dst_objs) {
              auto& A = D.objects[a];
              auto& C = D.objects[c];
              auto betas = T.morphisms(A.wp, C.wp);
              for (auto& al : alphas) {
                IndexMap target = compose_maps(al, C.map);
                for (auto& be : betas) {
                  if (compose_maps(A.map, be) != target) continue;
                  int id = int(pairs.size());
                  if (a == c && al == identity_map(T.letters(w1)) && be == identity_map(T.letters(A.wp)))
                    identity[a] = id;
                  hom[pair_key(a, c)].push_back(id);
                  pairs.push_back({a, c, al, be});
                  mor.push_back({a, c, ""});
                  if (pairs.size() > budget) throw Error(Errc::BudgetExceeded, "down comma too large");
                }
              }
            }
        }
      auto compose = [&](int f, int g) {
        return find_pair(pairs[f].src, pairs[g].tgt, compose_maps(pairs[f].alpha, pairs[g].alpha),
                         compose_maps(pairs[f].beta, pairs[g].beta));
      };
      std::vector<std::string> labels;
      for (auto& o : D.objects)
        labels.push_back(T.object(o.w).str() + " -[" + map_str(o.map) + "]-> " + T.object(o.wp).str());
      D.comma = FinCategory::build(std::move(labels), std::move(mor), std::move(identity), compose,
                                   pairs.size() <= kCheckedArrows);
      D.counit.clear();
      for (int a = 0; a < int(D.objects.size()); ++a) {
        int r = D.counit_source[a];
        D.counit.push_back(r < 0 ? -1 : find_pair(r, a, counit_maps[a].first, counit_maps[a].second));
      }
      D.materialized = true;
      D.lem1_materialized = all_valid(D.counit) && check_coreflection(D.comma, D.primed, D.counit);
    }
  }

  // The pair category and (Word_fr(b) | Word_fn(b)).
  if (b.empty()) {
    D.lem2 = D.primed.empty();
    return D;
  }
  D.fr = enumerate_word(b, WordFilter::FR);
  WordPoset f = enumerate_word(b, WordFilter::F);
  std::vector<int> fn_ids, fr_in_f(D.fr.size());
  for (int i = 0; i < f.size(); ++i)
    if (f.in_fn(i)) fn_ids.push_back(i);
  WordPoset fn = restrict_word_poset(f, fn_ids);
  for (int i = 0; i < D.fr.size(); ++i) fr_in_f[i] = f.find(D.fr.objects[i]);
  D.fr_fn = comma_poset(D.fr.poset, fn.poset, f.poset, fr_in_f, fn_ids, &D.fr_fn_objects);

  std::map<std::pair<int, std::uint64_t>, int> pair_index;
  for (int i = 0; i < D.fr.size(); ++i) {
    if (D.fr.objects[i].letters.size() > std::size_t(T.spec().max_letters)) continue;
    int n = int(D.fr.objects[i].letters.size());
    if (n > 20) throw Error(Errc::BudgetExceeded, "too many letters for block partitions");
    for (std::uint64_t cuts = 0; cuts < (std::uint64_t(1) << std::max(0, n - 1)); ++cuts) {
      BlockPartition p{n, cuts};
      Factorization c = coarsen(D.fr.objects[i], p);
      if (!c.all_finite_type() || c.all_reduced()) continue;
      pair_index[{i, cuts}] = int(D.pairs.size());
      D.pairs.emplace_back(i, p);
    }
  }
  auto pair_leq = [&](int x, int y) {
    auto& [i, p] = D.pairs[x];
    auto& [j, q] = D.pairs[y];
    if (!D.fr.poset.leq(i, j)) return false;
    IndexMap s = refinement_map(sys, D.fr.objects[i], D.fr.objects[j]);
    return p.refines(preimage_partition(q, s));
  };
  std::vector<std::string> pl;
  for (auto& [i, p] : D.pairs) pl.push_back(D.fr.objects[i].str() + " " + p.str());
  D.pair_poset = FinPoset::from_leq(int(D.pairs.size()), pair_leq, pl, false);

  auto fail = [&](std::string why) {
    D.lem2 = false;
    D.lem2_failure = std::move(why);
    return D;
  };
  // primed -> pairs.
  for (int a : D.primed) {
    auto& o = D.objects[a];
    std::vector<BraidElement> letters;
    for (auto& w : T.object(o.w).letters) letters.push_back(lift(w));
    int i = D.fr.find(make_factorization(letters));
    if (i < 0 || !is_surjective(o.map, T.letters(o.wp))) return fail("primed object outside Word_fr: " + T.object(o.w).str());
    auto it = pair_index.find({i, partition_of(o.map).cuts});
    if (it == pair_index.end()) return fail("primed object without a pair: " + T.object(o.w).str());
    D.primed_to_pair.push_back(it->second);
  }
  {
    auto sorted = D.primed_to_pair;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return fail("primed -> pairs not injective");
    if (sorted.size() != D.pairs.size()) return fail("primed -> pairs not surjective");
  }
  // pairs -> (Word_fr | Word_fn).
  std::map<std::pair<int, int>, int> frfn_index;
  for (int k = 0; k < int(D.fr_fn_objects.size()); ++k) frfn_index[D.fr_fn_objects[k]] = k;
  int fr_fn_in_window = 0;
  for (auto& [i, j] : D.fr_fn_objects)
    if (D.fr.objects[i].letters.size() <= std::size_t(T.spec().max_letters)) ++fr_fn_in_window;
  for (auto& [i, p] : D.pairs) {
    int u = fn.find(coarsen(D.fr.objects[i], p));
    auto it = u < 0 ? frfn_index.end() : frfn_index.find({i, u});
    if (it == frfn_index.end()) return fail("pair without a comma object: " + D.fr.objects[i].str() + " " + p.str());
    D.pair_to_fr_fn.push_back(it->second);
  }
  {
    auto sorted = D.pair_to_fr_fn;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return fail("pairs -> comma not injective");
    if (int(sorted.size()) != fr_fn_in_window) return fail("pairs -> comma not surjective");
  }
  // Morphisms: the primed subcategory is thin and its hom sets match both posets.
  for (int x = 0; x < int(D.primed.size()); ++x)
    for (int y = 0; y < int(D.primed.size()); ++y) {
      auto& X = D.objects[D.primed[x]];
      auto& Y = D.objects[D.primed[y]];
      std::vector<IndexMap> alphas;
      for (auto& al : T.maps(T.letters(X.w), T.letters(Y.w)))
        if (T.basic_criterion(X.w, Y.w, al)) alphas.push_back(al);
      std::size_t h = primed_hom(T, X, Y, alphas).size();
      int px = D.primed_to_pair[x], py = D.primed_to_pair[y];
      bool le_pair = D.pair_poset.leq(px, py);
      bool le_comma = D.fr_fn.leq(D.pair_to_fr_fn[px], D.pair_to_fr_fn[py]);
      if (h > 1) return fail("primed subcategory is not thin at " + T.object(X.w).str());
      if ((h == 1) != le_pair || le_pair != le_comma)
        return fail("hom sets differ between " + T.object(X.w).str() + " and " + T.object(Y.w).str());
    }
  D.lem2 = true;
  return D;
}

}  // namespace coxtop
