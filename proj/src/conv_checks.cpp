#include "coxtop/conv_checks.hpp"

#include <algorithm>
#include <unordered_set>

#include "coxtop/errors.hpp"

namespace coxtop {

namespace {

class Tallies {
 public:
  explicit Tallies(std::vector<CheckTally>& out, const std::vector<std::string>& names) : out_(out) {
    for (auto& n : names) out_.push_back(CheckTally{n, 0, 0, {}});
  }
  CheckTally& operator[](const std::string& name) {
    for (auto& c : out_)
      if (c.name == name) return c;
    throw Error(Errc::MalformedInput, "unregistered check " + name);
  }

 private:
  std::vector<CheckTally>& out_;
};

const CheckTally* find_check(const std::vector<CheckTally>& checks, const std::string& name) {
  for (auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

bool all_ok(const std::vector<CheckTally>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const CheckTally& c) { return c.ok(); });
}

// Morphism key: source, target and the index map packed in 3-bit digits.
std::uint64_t arrow_key(int x, int y, const IndexMap& f) {
  std::uint64_t m = 0;
  for (int j : f) m = (m << 3) | std::uint64_t(j);
  return (std::uint64_t(x) << 44) | (std::uint64_t(y) << 24) | m;
}

bool letterwise_leq(const Truncation& T, const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] < 0 || !T.bruhat(a[i], b[i])) return false;
  return true;
}

// Objects with the letter count of y lying letterwise below y, y included.
std::vector<std::vector<int>> letterwise_below(const Truncation& T) {
  std::vector<std::vector<int>> by_count(T.spec().max_letters + 1), out(T.size());
  for (int x = 0; x < T.size(); ++x) by_count[T.letters(x)].push_back(x);
  for (int y = 0; y < T.size(); ++y)
    for (int c : by_count[T.letters(y)])
      if (letterwise_leq(T, T.code(c), T.code(y))) out[y].push_back(c);
  return out;
}

}  // namespace

bool BistratifiedReport::ok() const { return all_ok(checks); }
const CheckTally* BistratifiedReport::find(const std::string& name) const { return find_check(checks, name); }
bool DownReport::ok() const { return all_ok(checks); }
const CheckTally* DownReport::find(const std::string& name) const { return find_check(checks, name); }

BistratifiedReport check_bistratified(const Truncation& T) {
  if (T.size() >= (1 << 20) || T.spec().max_letters > 6)
    throw Error(Errc::BudgetExceeded, "truncation too large for the exhaustive checks");
  BistratifiedReport R;
  R.objects = T.size();
  R.levels = T.num_levels();
  Tallies tl(R.checks, {"demazure-monotone", "weak-factorization", "z-adjunction", "y-adjunction", "fact-reflection",
                        "fact1-initial", "basic-iff-fact-empty", "b1-identity", "b1-composite"});
  auto below = letterwise_below(T);
  int L = T.num_levels();
  std::vector<signed char> dem_le(std::size_t(L) * L, -1);
  auto dem_leq = [&](int a, int b) {
    auto& c = dem_le[std::size_t(a) * L + b];
    if (c < 0) c = bruhat_leq(T.level_dem(a), T.level_dem(b));
    return bool(c);
  };

  struct Level {
    int x, y;
    IndexMap f;
  };
  std::vector<Level> level;
  for (int x = 0; x < T.size(); ++x)
    for (int y = 0; y < T.size(); ++y)
      for (auto& f : T.morphisms(x, y)) {
        ++R.morphisms;
        int lx = T.level(x), ly = T.level(y), ny = T.letters(y);
        auto what = [&] { return T.arrow_str(x, y, f); };
        tl["demazure-monotone"].record(dem_leq(lx, ly), what);

        // Weakly downward then weakly upward: the middle object is forced, and must be unique.
        auto m = T.fiber_dem(x, f, ny);
        int count = 0, found = -1;
        for (int c : below[y])
          if (T.weakly_downward(x, c, f)) ++count, found = c;
        tl["weak-factorization"].record(count == 1 && T.code(found) == m, what);

        if (lx < ly) {
          // Z_y: the unit replaces each letter of y by the Demazure product of its fiber.
          int u = T.find_code(m);
          bool ok = u >= 0 && u != y && T.level(u) < ly;
          for (int z : below[y]) {
            if (!ok) break;
            if (z == y) continue;
            ok = T.level(z) < ly && letterwise_leq(T, m, T.code(z)) == T.is_morphism(x, z, f);
          }
          tl["z-adjunction"].record(ok, what);
        } else if (ly < lx) {
          // Y_x: the counit replaces the target letters by the Demazure products of the fibers.
          int u = T.find_code(m);
          bool ok = u >= 0 && T.level(u) < lx && !T.basic_criterion(x, u, f) && T.is_morphism(u, y, identity_map(ny));
          tl["y-adjunction"].record(ok, what);
        } else {
          level.push_back({x, y, f});
        }
      }
  R.level_morphisms = long(level.size());

  // Fact_phi is nonempty iff phi is a composite through a middle object of lower rank. All
  // composites are collected level by level.
  std::unordered_set<std::uint64_t> factorable;
  for (int l = 0; l < L; ++l) {
    auto& objs = T.objects_at(l);
    for (int l2 = 0; l2 < l; ++l2) {
      if (!(T.level_dem(l2) == T.level_dem(l))) continue;
      for (int m : T.objects_at(l2)) {
        std::vector<std::pair<int, IndexMap>> in, out;
        for (int x : objs) {
          for (auto& f : T.morphisms(x, m)) in.emplace_back(x, f);
          for (auto& f : T.morphisms(m, x)) out.emplace_back(x, f);
        }
        for (auto& [y, f2] : out) {
          int ny = T.letters(y);
          int u = T.find_code(T.fiber_dem(m, f2, ny));
          tl["fact-reflection"].record(u >= 0 && T.level(u) < l, [&] { return T.arrow_str(m, y, f2); });
          bool upward = f2 == identity_map(ny);
          for (auto& [x, f1] : in) {
            IndexMap phi = compose_maps(f1, f2);
            factorable.insert(arrow_key(x, y, phi));
            ++R.fact_objects;
            if (upward)
              tl["fact1-initial"].record(letterwise_leq(T, T.fiber_dem(x, phi, ny), T.code(m)),
                                         [&] { return T.arrow_str(x, y, phi) + " through " + T.object(m).str(); });
          }
        }
      }
    }
  }

  std::vector<std::vector<std::pair<int, IndexMap>>> basic_out(T.size());
  for (auto& [x, y, f] : level) {
    bool basic = T.basic_criterion(x, y, f);
    bool empty = !factorable.count(arrow_key(x, y, f));
    auto what = [&] { return T.arrow_str(x, y, f); };
    tl["basic-iff-fact-empty"].record(basic == empty, what);
    if (basic) {
      basic_out[x].emplace_back(y, f);
      continue;
    }
    ++R.level_nonbasic;
    // Fact^1_phi has the initial object given by the Demazure products of the fibers.
    int ny = T.letters(y);
    int e = T.find_code(T.fiber_dem(x, f, ny));
    tl["fact1-initial"].record(e >= 0 && T.level(e) < T.level(x) && T.is_morphism(x, e, f) &&
                                   T.is_morphism(e, y, identity_map(ny)),
                               what);
  }

  for (int x = 0; x < T.size(); ++x) {
    IndexMap id = identity_map(T.letters(x));
    tl["b1-identity"].record(T.basic_criterion(x, x, id) && !factorable.count(arrow_key(x, x, id)),
                             [&] { return T.object(x).str(); });
  }
  for (int x = 0; x < T.size(); ++x)
    for (auto& [y, f] : basic_out[x])
      for (auto& [z, g] : basic_out[y]) {
        IndexMap h = compose_maps(f, g);
        tl["b1-composite"].record(T.basic_criterion(x, z, h) && !factorable.count(arrow_key(x, z, h)),
                                  [&] { return T.arrow_str(x, y, f) + " then " + T.arrow_str(y, z, g); });
      }
  return R;
}

BistratifiedReport check_bistratified_materialized(const Truncation& T, const CertifyOptions& opt) {
  BistratifiedReport R;
  R.objects = T.size();
  R.levels = T.num_levels();
  Tallies tl(R.checks, {"z-adjunction", "y-adjunction", "fact-reflection", "fact1-initial", "fact-contractible",
                        "basic-iff-fact-empty", "b1-identity", "b1-composite"});
  std::unordered_set<std::uint64_t> basic_set;
  std::vector<std::vector<std::pair<int, IndexMap>>> basic_out(T.size());
  for (int l = 0; l < T.num_levels(); ++l)
    for (int x : T.objects_at(l))
      for (int y : T.objects_at(l))
        for (auto& f : T.morphisms(x, y)) {
          ++R.level_morphisms;
          auto F = fact_category(T, x, y, f, T.spec().max_letters);
          R.fact_objects += long(F.objects.size());
          auto what = [&] { return T.arrow_str(x, y, f); };
          bool basic = T.basic_criterion(x, y, f);
          tl["basic-iff-fact-empty"].record(basic == F.objects.empty(), what);
          if (F.objects.empty()) {
            basic_set.insert(arrow_key(x, y, f));
            basic_out[x].emplace_back(y, f);
            continue;
          }
          ++R.level_nonbasic;
          bool unit_ok = std::all_of(F.unit.begin(), F.unit.end(), [](int u) { return u >= 0; });
          tl["fact-reflection"].record(unit_ok && check_reflection(F.cat, F.fact1, F.unit), what);
          bool init = F.fact1_initial && T.code(F.objects[*F.fact1_initial].mid) == F.expected_initial;
          tl["fact1-initial"].record(init, what);
          auto P = F.cat.full_subcategory(F.fact1).as_poset();
          tl["fact-contractible"].record(P && certify_contractible(*P, opt).contractible(), what);
        }
  for (int x = 0; x < T.size(); ++x)
    tl["b1-identity"].record(basic_set.count(arrow_key(x, x, identity_map(T.letters(x)))) > 0,
                             [&] { return T.object(x).str(); });
  for (int x = 0; x < T.size(); ++x)
    for (auto& [y, f] : basic_out[x])
      for (auto& [z, g] : basic_out[y])
        tl["b1-composite"].record(basic_set.count(arrow_key(x, z, compose_maps(f, g))) > 0,
                                  [&] { return T.arrow_str(x, y, f) + " then " + T.arrow_str(y, z, g); });
  for (int w = 0; w < T.size(); ++w) {
    tl["z-adjunction"].record(z_subcategory(T, w).holds, [&] { return T.object(w).str(); });
    tl["y-adjunction"].record(y_subcategory(T, w).holds, [&] { return T.object(w).str(); });
  }
  return R;
}

DownReport check_down_contractible(const Truncation& T, const CertifyOptions& opt, bool materialize) {
  DownReport R;
  Tallies tl(R.checks, {"level-coreflection", "word-fr-identification", "word-fr-contractible", "reduced-empty",
                        "lem1-coreflection", "lem1-materialized", "lem2-isomorphism", "comma-contractible"});
  auto sys = T.system();
  for (int l = 0; l < T.num_levels(); ++l) {
    DownLevel D;
    std::vector<long> before;
    for (auto& c : R.checks) before.push_back(c.failures);
    D.b = T.level_rank(l);
    D.reduced = is_reduced(D.b);
    auto what = [&] { return D.b.str(); };

    // Word^1_fr(b) deformation retracts onto its full subcategory without letters 1, which is Word_fr(b).
    auto lc = level_category(T, l);
    tl["level-coreflection"].record(lc.holds, what);
    WordPoset fr = enumerate_word(D.b, WordFilter::FR);
    bool same = int(lc.no_ones.size()) == fr.size();
    std::vector<int> to_fr;
    for (int a : lc.no_ones) {
      std::vector<BraidElement> letters;
      for (auto& w : T.object(lc.level.objects[a]).letters) letters.push_back(lift(w));
      int i = letters.empty() ? (fr.size() == 1 ? 0 : -1) : fr.find(make_factorization(letters));
      same = same && i >= 0;
      to_fr.push_back(i);
    }
    for (std::size_t a = 0; a < lc.no_ones.size() && same; ++a)
      for (std::size_t c = 0; c < lc.no_ones.size() && same; ++c) {
        bool arrow = !lc.level.cat.hom(lc.no_ones[a], lc.no_ones[c]).empty();
        same = arrow == fr.poset.leq(to_fr[a], to_fr[c]) && lc.level.cat.hom(lc.no_ones[a], lc.no_ones[c]).size() <= 1;
      }
    tl["word-fr-identification"].record(same, what);
    D.word_fr = certify_contractible(fr.poset, opt);
    tl["word-fr-contractible"].record(D.word_fr.contractible(), what);

    auto C = down_comma(T, D.b, materialize && !D.reduced);
    D.comma_objects = C.objects.size();
    D.primed = C.primed.size();
    if (D.reduced) {
      tl["reduced-empty"].record(C.objects.empty(), what);
    } else {
      tl["lem1-coreflection"].record(C.lem1, [&] { return D.b.str() + ": " + C.lem1_failure; });
      if (C.materialized) tl["lem1-materialized"].record(C.lem1_materialized && C.lem1, what);
      tl["lem2-isomorphism"].record(C.lem2, [&] { return D.b.str() + ": " + C.lem2_failure; });
      D.fr_fn = certify_contractible(C.fr_fn, opt);
      tl["comma-contractible"].record(D.fr_fn.contractible(), what);
    }
    for (std::size_t i = 0; i < R.checks.size(); ++i)
      if (R.checks[i].failures > before[i]) D.failed.push_back(R.checks[i].name);
    R.levels.push_back(std::move(D));
  }
  return R;
}

ComposabilityReport check_strong_composability(const Truncation& T, int max_len, std::size_t budget) {
  ComposabilityReport out;
  auto C = build_truncation(T, budget);
  std::vector<char> basic(C.arrows.size());
  for (std::size_t f = 0; f < C.arrows.size(); ++f) {
    auto& a = C.arrows[f];
    basic[f] = T.basic_criterion(C.objects[a.src], C.objects[a.tgt], a.map);
  }
  RankedCategory R;
  R.cat = &C.cat;
  for (int x : C.objects) R.rank.push_back(T.level(x));
  R.level_basic = [&](int f) { return bool(basic[f]); };

  std::vector<int> seq;
  for (int beta = 0; beta < T.num_levels(); ++beta) {
    std::vector<std::vector<int>> out_arrows(C.cat.num_objects());
    for (int f = 0; f < C.cat.num_morphisms(); ++f) {
      auto& m = C.cat.morphism(f);
      if (R.rank[m.src] > beta || R.rank[m.tgt] > beta) continue;
      if (R.rank[m.src] == beta && R.level_nonbasic(f)) continue;
      out_arrows[m.src].push_back(f);
    }
    auto visit = [&](auto& self, int x) -> void {
      if (!seq.empty()) {
        ++out.sequences;
        auto fast = strong_composability(R, seq, beta);
        bool brute = strongly_composable_brute(R, seq, beta);
        out.not_composable += !brute;
        out.with_transitions += !fast.transitions.empty();
        out.check.record(fast.strongly_composable == brute, [&] {
          std::string s = "beta " + T.level_rank(beta).str() + ":";
          for (int f : seq) s += " " + T.arrow_str(C.objects[C.arrows[f].src], C.objects[C.arrows[f].tgt], C.arrows[f].map);
          return s;
        });
      }
      if (int(seq.size()) == max_len) return;
      for (int f : out_arrows[x]) {
        seq.push_back(f);
        self(self, C.cat.morphism(f).tgt);
        seq.pop_back();
      }
    };
    for (int x = 0; x < C.cat.num_objects(); ++x)
      if (R.rank[x] <= beta) visit(visit, x);
  }
  return out;
}

}  // namespace coxtop
