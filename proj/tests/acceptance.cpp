// One line per acceptance criterion. Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include "coxtop/conv_checks.hpp"
#include "coxtop/deletion_checks.hpp"
#include "coxtop/errors.hpp"
#include "coxtop/verifier.hpp"
#include "oracles.hpp"

using namespace coxtop;
using oracle::Word;

namespace {

// Wall-clock limits, in seconds.
constexpr double kLimit1 = 30, kLimit2 = 30, kLimit3 = 120, kLimit4 = 300, kLimit6 = 180, kLimit9 = 60;

struct Outcome {
  bool ok = true;
  std::string stats;
};

struct Tally {
  long cases = 0, fails = 0;
  std::string first;
  void operator()(bool ok, const std::function<std::string()>& what) {
    ++cases;
    if (!ok && fails++ == 0) first = what();
  }
  std::string str(const std::string& name) const {
    std::string s = name + " " + std::to_string(cases - fails) + "/" + std::to_string(cases);
    if (fails) s += " (first failure: " + first + ")";
    return s;
  }
};

int failures = 0;

void criterion(int n, const std::string& title, double limit, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.stats = std::string("exception: ") + e.what();
  }
  double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_time = limit <= 0 || dt < limit;
  bool ok = o.ok && in_time;
  failures += !ok;
  std::printf("criterion %2d: %s  %s  [%s; %.1fs", n, ok ? "PASS" : "FAIL", title.c_str(), o.stats.c_str(), dt);
  if (limit > 0) std::printf(" of %.0fs%s", limit, in_time ? "" : ", over the limit");
  std::printf("]\n");
  std::fflush(stdout);
}

std::vector<Word> words_up_to(int rank, int n) {
  std::vector<Word> out;
  for (int k = 0; k <= n; ++k)
    for (auto& w : oracle::all_words(rank, k)) out.push_back(w);
  return out;
}

// Braids checked by criteria 4, 5 and 8.
const std::vector<std::pair<std::string, int>> kDeletionRange = {{"A1~", 6}, {"A2", 5}, {"B2", 5}, {"A2~", 4}};

std::map<std::string, ApparatusReport>& apparatus_cache() {
  static std::map<std::string, ApparatusReport> cache;
  return cache;
}

std::vector<BraidElement> nonreduced_braids(const SystemPtr& sys, int L) {
  std::vector<BraidElement> out;
  for (auto& b : enumerate_braids(sys, L))
    if (!is_reduced(b)) out.push_back(b);
  return out;
}

Outcome deletion_property() {
  Tally t;
  for (auto [name, L] : std::vector<std::pair<std::string, int>>{{"A2", 8}, {"B2", 8}, {"A1~", 8}, {"A2~", 6}}) {
    auto sys = preset(name);
    for (auto& w : words_up_to(sys->rank(), L)) {
      int n = int(w.size());
      if (oracle::rewriting_length(*sys, w) == n) continue;
      auto d = deletion_indices(sys, w);
      auto seg = [&](int b, int e) { return Word(w.begin() + b - 1, w.begin() + e); };  // s_b .. s_e
      auto what = [&] { return name + " " + sys->word_str(w); };
      bool ok = 1 <= d.jp && d.jp <= d.j && d.j < n;
      // Brute force: (s_1..s_j) is the longest reduced prefix and exactly one i works.
      ok = ok && oracle::rewriting_length(*sys, seg(1, d.j)) == d.j &&
           oracle::rewriting_length(*sys, seg(1, d.j + 1)) < d.j + 1;
      int count = 0, which = -1;
      for (int i = 1; ok && i <= d.j; ++i)
        if (oracle::same_element(*sys, seg(i, d.j), seg(i + 1, d.j + 1))) ++count, which = i;
      t(ok && count == 1 && which == d.jp, what);
    }
  }
  return {t.fails == 0, t.str("nonreduced words")};
}

Outcome demazure_checks() {
  Tally well, monoid, section;
  std::mt19937_64 rng(2024);
  for (auto& name : preset_names()) {
    auto sys = preset(name);
    auto random_word = [&] {
      Word w(rng() % 9);
      for (auto& s : w) s = int(rng() % sys->rank());
      return w;
    };
    for (int k = 0; k < 1000; ++k) {
      Word u = random_word(), v = random_word();
      auto a = BraidElement::from_word(sys, u), b = BraidElement::from_word(sys, v);
      // Well defined: the value on the normal form agrees with the deletion oracle on the input word.
      well(demazure(a) == oracle::demazure_by_deletions(sys, u), [&] { return name + " " + sys->word_str(u); });
      Word uv = u;
      uv.insert(uv.end(), v.begin(), v.end());
      auto ab = bmul(a, b);
      monoid(ab == BraidElement::from_word(sys, uv) && demazure(ab) == demazure_mul(demazure(a), demazure(b)),
             [&] { return name + " " + a.str() + " " + b.str(); });
    }
    for (auto& w : enumerate_elements(sys, 6, sys->all()))
      section(demazure(lift(w)) == w, [&] { return name + " " + w.str(); });
  }
  bool ok = !well.fails && !monoid.fails && !section.fails;
  return {ok, well.str("well-defined") + ", " + monoid.str("monoid map") + ", " + section.str("d(r(w)) = w")};
}

Outcome braid_kernel() {
  Tally nf, gcd, delta;
  for (auto name : {"A2", "B2", "A1~", "A2~"}) {
    auto sys = preset(name);
    // Normal forms separate exactly the braid-move classes.
    std::map<Word, BraidElement> class_nf;
    std::map<std::string, Word> nf_class;
    for (auto& w : words_up_to(sys->rank(), 6)) {
      Word rep = *oracle::braid_class(*sys, w).begin();
      auto b = BraidElement::from_word(sys, w);
      auto [it, fresh] = class_nf.emplace(rep, b);
      auto [jt, fresh2] = nf_class.emplace(b.str(), rep);
      nf(it->second == b && jt->second == rep, [&] { return std::string(name) + " " + sys->word_str(w); });
    }
    // gcd against the meet of the prefix-class sets.
    auto braids5 = enumerate_braids(sys, 5);
    std::vector<std::set<Word>> prefixes;
    for (auto& b : braids5) prefixes.push_back(oracle::braid_prefix_classes(*sys, b.word()));
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < braids5.size(); ++i) index[braids5[i].str()] = int(i);
    for (std::size_t i = 0; i < braids5.size(); ++i)
      for (std::size_t j = 0; j < braids5.size(); ++j) {
        auto g = left_gcd(braids5[i], braids5[j]);
        std::set<Word> common;
        for (auto& p : prefixes[i])
          if (prefixes[j].count(p)) common.insert(p);
        auto gp = prefixes[index.at(g.str())];
        gcd(common == gp, [&] { return std::string(name) + " " + braids5[i].str() + " " + braids5[j].str(); });
      }
    // T in L(b) implies r(Delta_T) divides b.
    for (auto& b : enumerate_braids(sys, 6)) {
      auto pre = oracle::braid_prefix_classes(*sys, b.word());
      GenSet L = 0;
      for (int s = 0; s < sys->rank(); ++s)
        if (pre.count(Word{s})) L |= GenSet(1) << s;
      bool ok = L == simple_prefixes(b);
      for (GenSet T = L; ok; T = (T - 1) & L) {
        auto top = longest_element(sys, T);
        ok = sys->is_finite_type(T) && pre.count(*oracle::braid_class(*sys, top.word()).begin()) > 0;
        if (T == 0) break;
      }
      delta(ok, [&] { return std::string(name) + " " + b.str(); });
    }
  }
  bool ok = !nf.fails && !gcd.fails && !delta.fails;
  return {ok, nf.str("normal forms") + ", " + gcd.str("gcd pairs") + ", " + delta.str("Delta_T prefixes")};
}

Outcome deletion_contractible() {
  Tally fn, companions;
  long unknown = 0;
  for (auto [name, L] : kDeletionRange) {
    auto sys = preset(name);
    for (auto& b : nonreduced_braids(sys, L)) {
      auto& rep = apparatus_cache().emplace(name + b.str(), check_delete_thm(b)).first->second;
      auto what = [&] { return name + " " + b.str() + " " + cert_level_name(rep.fn.level); };
      unknown += rep.fn.level == CertLevel::ZAcyclic;
      fn(rep.fn.contractible(), what);
      companions(rep.f.contractible() && rep.fr.contractible(), what);
    }
  }
  bool ok = !fn.fails && !companions.fails;
  return {ok, fn.str("Word_fn certified") + ", " + companions.str("Word_f and Word_fr certified") + ", " +
                  std::to_string(unknown) + " unknown"};
}

Outcome apparatus() {
  // The second case of the block argument first occurs beyond this range.
  for (auto [name, w] : {std::pair<std::string, Word>{"A2~", {0, 1, 0, 2, 0, 2}}, {"G2~", {0, 1, 0, 2, 0}}}) {
    auto b = BraidElement::from_word(preset(name), w);
    apparatus_cache().emplace(name + b.str(), check_delete_thm(b));
  }
  long checks = 0, fails = 0;
  std::string first;
  for (auto& [key, rep] : apparatus_cache())
    for (auto& c : rep.checks) {
      checks += c.instances;
      fails += c.failures;
      if (c.failures && first.empty()) first = key + " " + c.name + ": " + c.first_failure;
    }
  bool nonempty = !apparatus_cache().empty();
  std::string vacuous;
  for (auto& c : apparatus_cache().begin()->second.checks) {
    long n = 0;
    for (auto& [key, rep] : apparatus_cache()) n += rep.find(c.name)->instances;
    if (n == 0) vacuous += " " + c.name;
  }
  nonempty = nonempty && vacuous.empty();
  std::string s = std::to_string(checks - fails) + "/" + std::to_string(checks) + " apparatus checks over " +
                  std::to_string(apparatus_cache().size()) + " braids, case 2 included";
  if (!nonempty) s += " (never ran:" + vacuous + ")";
  if (fails) s += " (first failure: " + first + ")";
  return {fails == 0 && nonempty, s};
}

Outcome bistratified() {
  std::string stats;
  bool ok = true;
  for (auto name : {"A1~", "A2"}) {
    TruncationSpec sp;
    sp.max_length = 4;
    sp.max_letters = 5;
    auto R = check_bistratified(Truncation::build(preset(name), sp));
    sp.max_length = 3;
    sp.max_letters = 3;
    auto M = check_bistratified_materialized(Truncation::build(preset(name), sp));
    ok = ok && R.ok() && M.ok() && R.level_nonbasic > 0 && M.level_nonbasic > 0;
    for (auto* rep : {&R, &M})
      for (auto& c : rep->checks) ok = ok && c.instances > 0;
    stats += std::string(name) + ": " + std::to_string(R.level_morphisms) + " level morphisms, " +
             std::to_string(R.level_nonbasic) + " nonbasic, " + std::to_string(M.level_nonbasic) +
             " Fact certified materialized; ";
    for (auto* rep : {&R, &M})
      for (auto& c : rep->checks)
        if (!c.ok()) stats += c.name + " failed at " + c.first_failure + "; ";
  }
  return {ok, stats.substr(0, stats.size() - 2)};
}

Outcome down_contractible() {
  std::string stats;
  bool ok = true;
  for (auto [name, L, n, mat] : std::vector<std::tuple<std::string, int, int, bool>>{
           {"A1~", 4, 5, false}, {"A2", 4, 5, false}, {"A1~", 3, 3, true}, {"A2", 3, 3, true}}) {
    TruncationSpec sp;
    sp.max_length = L;
    sp.max_letters = n;
    auto R = check_down_contractible(Truncation::build(preset(name), sp), {}, mat);
    int reduced = 0, nonreduced = 0;
    for (auto& lv : R.levels) (lv.reduced ? reduced : nonreduced)++;
    ok = ok && R.ok() && nonreduced > 0 && (!mat || R.find("lem1-materialized")->instances > 0);
    stats += name + (mat ? " materialized" : "") + ": " + std::to_string(reduced) + " reduced, " +
             std::to_string(nonreduced) + " nonreduced ranks; ";
    for (auto& c : R.checks)
      if (!c.ok()) stats += c.name + " failed at " + c.first_failure + "; ";
  }
  return {ok, stats.substr(0, stats.size() - 2)};
}

Outcome pushout() {
  long genuine = 0, genuine_fail = 0, mutants = 0, mutant_pass = 0;
  auto run = [&](const FinPoset& C, const std::vector<int>& c0, const std::vector<int>& c1) {
    ++genuine;
    genuine_fail += !pushout_check(C, c0, c1).holds;
    if (auto drop = find_pushout_mutation(C, c0, c1)) {
      ++mutants;
      mutant_pass += pushout_check(C, c0, c1, {*drop}).holds;
    }
  };
  for (auto [name, L] : kDeletionRange)
    for (auto& b : nonreduced_braids(preset(name), L)) {
      auto S = stratify(b);
      for (int d = 1; d <= S.D(); ++d) {
        Strata st = strata(S, d);
        std::vector<int> local(S.word_f.size(), -1);
        for (std::size_t i = 0; i < st.le.size(); ++i) local[st.le[i]] = int(i);
        std::vector<int> c0, c1;
        for (int x : st.fr_d) c0.push_back(local[x]);
        for (int x : st.lt) c1.push_back(local[x]);
        run(S.word_f.poset.induced(st.le), c0, c1);
      }
    }
  long strata_instances = genuine;
  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    int n = 3 + int(rng() % 6);
    std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
      rel[i][i] = 1;
      for (int j = i + 1; j < n; ++j) rel[i][j] = rng() % 100 < 40;
    }
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rel[i][j] = rel[i][j] || (rel[i][m] && rel[m][j]);
    auto P = FinPoset::from_leq(n, [&](int i, int j) { return bool(rel[i][j]); });
    int cut = 1 + int(rng() % (n - 1));
    std::vector<int> c0, c1;
    for (int i = 0; i < n; ++i) (i < cut ? c0 : c1).push_back(i);
    run(P, c0, c1);
  }
  bool ok = genuine_fail == 0 && mutants > 0 && mutant_pass == 0;
  return {ok, std::to_string(genuine - genuine_fail) + "/" + std::to_string(genuine) + " genuine squares hold (" +
                  std::to_string(strata_instances) + " strata, 20 random), " + std::to_string(mutants - mutant_pass) +
                  "/" + std::to_string(mutants) + " mutations detected"};
}

Outcome composability() {
  std::string stats;
  bool ok = true;
  for (auto [letters, len] : std::vector<std::pair<int, int>>{{2, 4}, {3, 3}}) {
    TruncationSpec sp;
    sp.max_length = 3;
    sp.max_letters = letters;
    auto R = check_strong_composability(Truncation::build(preset("A1~"), sp), len);
    ok = ok && R.ok() && R.not_composable > 0 && R.sequences > R.not_composable;
    stats += "letters<=" + std::to_string(letters) + ", length<=" + std::to_string(len) + ": " +
             std::to_string(R.sequences - R.check.failures) + "/" + std::to_string(R.sequences) + " agree (" +
             std::to_string(R.not_composable) + " not strongly composable); ";
    if (!R.ok()) stats += "first failure " + R.check.first_failure + "; ";
  }
  return {ok, stats.substr(0, stats.size() - 2)};
}

Outcome determinism() {
  RunConfig cfg;  // the full default suite
  cfg.seed = 17;
  auto a = report_to_json(run(cfg)), b = report_to_json(run(cfg));
  auto r = report_from_json(a);
  bool ok = a == b && r.summary.fail == 0;
  return {ok, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different") + ", " +
                  std::to_string(r.summary.pass) + " pass / " + std::to_string(r.summary.fail) + " fail / " +
                  std::to_string(r.summary.unknown) + " unknown"};
}

}  // namespace

int main() {
  criterion(1, "deletion property: unique deletion index", kLimit1, deletion_property);
  criterion(2, "Demazure product well defined, monoid map, d(r(w)) = w", kLimit2, demazure_checks);
  criterion(3, "braid kernel: normal forms, gcd, Delta_T prefixes", kLimit3, braid_kernel);
  criterion(4, "Word_fn(b) contractible for nonreduced b", kLimit4, deletion_contractible);
  criterion(5, "deletion apparatus checks", 0, apparatus);
  criterion(6, "Word^1_fr is bistratified", kLimit6, bistratified);
  criterion(7, "Word^1_fr is downwards contractible", 0, down_contractible);
  criterion(8, "pushout homology check and mutations", 0, pushout);
  criterion(9, "strong composability against brute force", kLimit9, composability);
  criterion(10, "determinism of the default run", 0, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
