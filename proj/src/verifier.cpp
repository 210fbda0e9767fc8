#include "coxtop/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "coxtop/conv_checks.hpp"
#include "coxtop/deletion_checks.hpp"
#include "coxtop/errors.hpp"
#include "coxtop/formats.hpp"

namespace coxtop {

using json = nlohmann::ordered_json;

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "coxeter-axioms", "braid-kernel",  "deletion-property", "delete-thm",        "delpat-strata", "blocks",
      "gap-posets",     "bistratified", "down-contractible", "suspend",           "bis-p0"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

long parse_integer(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long x = 0;
  try {
    x = std::stol(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw Error(Errc::ConfigError, key + ": expected an integer, got '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw Error(Errc::ConfigError, key + ": expected a boolean, got '" + v + "'");
}

// Which apparatus tallies each proof suite reports.
const std::map<std::string, std::vector<std::string>>& apparatus_suites() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"delete-thm", {"word-f-fr"}},
      {"delpat-strata", {"partition", "classify", "strata-cover", "closure", "no-arrows", "slice-product",
                         "slice-adjoint"}},
      {"blocks", {"reform-predicate", "reform-remark", "badword", "block-retract", "case1-adjunction",
                  "case1-contractible", "block2-claim", "block2-adjunction"}},
      {"gap-posets", {"case2-iso", "case2-functor", "case2-initial", "gap-initial", "gap-contractible", "word-s-1f"}},
      {"suspend", {"pushout"}},
  };
  return m;
}

CheckRecord record_of(const CheckTally& t) { return {t.name, t.instances, t.failures, t.first_failure}; }

CertificateRecord record_of(const std::string& name, const Certificate& c) {
  return {name, cert_level_name(c.level), c.witness_kind, c.witness, c.detail};
}

// Contractible certificates pass, homology-only ones are unknown, the rest fail.
Verdict verdict_of(const Certificate& c) {
  if (c.contractible()) return Verdict::Pass;
  if (c.level == CertLevel::NotContractible) return Verdict::Fail;
  return Verdict::Unknown;
}

Verdict worse(Verdict a, Verdict b) {
  if (a == Verdict::Fail || b == Verdict::Fail) return Verdict::Fail;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Pass;
}

void add_checks(InstanceResult& inst, const std::vector<CheckTally>& checks) {
  for (auto& c : checks) {
    inst.checks.push_back(record_of(c));
    if (!c.ok()) inst.verdict = Verdict::Fail;
  }
}

GroupElement power(const GroupElement& x, int k) {
  GroupElement out = GroupElement::identity(x.system());
  for (int i = 0; i < k; ++i) out = multiply(out, x);
  return out;
}

std::vector<std::vector<int>> words_of_length(int rank, int n) {
  std::vector<std::vector<int>> out{{}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<int>> next;
    for (auto& w : out)
      for (int s = 0; s < rank; ++s) {
        next.push_back(w);
        next.back().push_back(s);
      }
    out.swap(next);
  }
  return out;
}

// Words obtained from w by one braid relation s t s ... = t s t ...
std::vector<std::vector<int>> braid_moves(const CoxeterSystem& sys, const std::vector<int>& w) {
  std::vector<std::vector<int>> out;
  int n = int(w.size());
  for (int s = 0; s < sys.rank(); ++s)
    for (int t = 0; t < sys.rank(); ++t) {
      int m = sys.bond(s, t);
      if (s == t || m == kInfinity || m > n) continue;
      for (int i = 0; i + m <= n; ++i) {
        bool match = true;
        for (int k = 0; k < m && match; ++k) match = w[i + k] == (k % 2 ? t : s);
        if (!match) continue;
        auto v = w;
        for (int k = 0; k < m; ++k) v[i + k] = k % 2 ? s : t;
        out.push_back(v);
      }
    }
  return out;
}

class Runner {
 public:
  Runner(const RunConfig& cfg, SystemPtr sys) : cfg_(cfg), sys_(std::move(sys)), L_(cfg.effective_max_length()) {
    cert_.seed = cfg.seed;
  }

  SuiteResult run_suite(const std::string& name) {
    suite_ = SuiteResult{};
    suite_.name = name;
    start_ = Clock::now();
    if (name == "coxeter-axioms") coxeter_axioms();
    else if (name == "braid-kernel") braid_kernel();
    else if (name == "deletion-property") deletion_property();
    else if (name == "bistratified") bistratified();
    else if (name == "down-contractible") down_contractible();
    else if (name == "bis-p0") bis_p0();
    else apparatus_suite(name);
    for (auto& i : suite_.instances) {
      if (i.verdict == Verdict::Pass) ++suite_.summary.pass;
      else if (i.verdict == Verdict::Fail) ++suite_.summary.fail;
      else ++suite_.summary.unknown;
    }
    if (cfg_.timing) suite_.seconds = seconds_since(start_);
    return std::move(suite_);
  }

  std::vector<std::string> notes;

 private:
  using Clock = std::chrono::steady_clock;

  static double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

  // Runs one instance; budget errors become unknown, any other error a failure.
  template <class F>
  void instance(const std::string& subject, F&& body) {
    InstanceResult inst;
    inst.id = suite_.name + ":" + subject;
    inst.subject = subject;
    if (cfg_.time_budget > 0 && seconds_since(start_) > cfg_.time_budget) {
      inst.verdict = Verdict::Unknown;
      inst.detail = "suite time budget exhausted";
      suite_.instances.push_back(std::move(inst));
      return;
    }
    auto t0 = Clock::now();
    try {
      body(inst);
    } catch (const Error& e) {
      bool budget = e.code() == Errc::BudgetExceeded || e.code() == Errc::IncompleteSearch;
      inst.verdict = budget ? Verdict::Unknown : Verdict::Fail;
      inst.detail = e.what();
    }
    if (cfg_.timing) inst.seconds = seconds_since(t0);
    suite_.instances.push_back(std::move(inst));
  }

  const std::vector<GroupElement>& elements() {
    if (!elements_) elements_ = enumerate_elements(sys_, L_, sys_->all());
    return *elements_;
  }

  const std::vector<BraidElement>& nonreduced() {
    if (!nonreduced_) {
      nonreduced_.emplace();
      for (auto& b : enumerate_braids(sys_, L_))
        if (!is_reduced(b)) nonreduced_->push_back(b);
    }
    return *nonreduced_;
  }

  const ApparatusReport& apparatus(const BraidElement& b) {
    auto it = apparatus_.find(b.str());
    if (it != apparatus_.end()) return it->second;
    ApparatusOptions opt;
    opt.cert = cert_;
    return apparatus_.emplace(b.str(), check_delete_thm(b, opt)).first->second;
  }

  const Truncation& truncation() {
    if (!truncation_) {
      TruncationSpec sp;
      sp.max_length = cfg_.truncation_length;
      sp.max_letters = cfg_.max_letters;
      truncation_ = Truncation::build(sys_, sp);
    }
    return *truncation_;
  }

  std::string window_str(int length, int letters) const {
    return "l<=" + std::to_string(length) + ",letters<=" + std::to_string(letters);
  }

  void coxeter_axioms() {
    for (int k = 0; k <= L_; ++k)
      instance("length-" + std::to_string(k), [&](InstanceResult& inst) {
        CheckTally canon{"canonical-word", 0, 0, {}}, inv{"inverse", 0, 0, {}}, invol{"involution", 0, 0, {}},
            desc{"descent-length", 0, 0, {}};
        for (auto& w : elements()) {
          if (w.length() != k) continue;
          auto what = [&] { return w.str(); };
          canon.record(GroupElement::from_word(sys_, w.word()) == w, what);
          auto wi = inverse(w);
          inv.record(wi.length() == k && multiply(w, wi).is_identity(), what);
          for (int s = 0; s < sys_->rank(); ++s) {
            auto ws = w.mul_gen(s);
            invol.record(ws.mul_gen(s) == w, what);
            desc.record(ws.length() == k + (w.has_right_descent(s) ? -1 : 1), what);
          }
        }
        add_checks(inst, {canon, inv, invol, desc});
      });
    instance("bonds", [&](InstanceResult& inst) {
      CheckTally order{"bond-order", 0, 0, {}};
      for (int s = 0; s < sys_->rank(); ++s)
        for (int t = s + 1; t < sys_->rank(); ++t) {
          auto st = multiply(GroupElement::generator(sys_, s), GroupElement::generator(sys_, t));
          int m = sys_->bond(s, t);
          int top = m == kInfinity ? L_ : m;
          bool ok = true;
          for (int k = 1; k < top; ++k) ok = ok && !power(st, k).is_identity();
          if (m != kInfinity) ok = ok && power(st, m).is_identity();
          order.record(ok, [&] { return sys_->gen_name(s) + sys_->gen_name(t); });
        }
      add_checks(inst, {order});
    });
  }

  void braid_kernel() {
    instance("demazure-lift", [&](InstanceResult& inst) {
      CheckTally t{"demazure-lift", 0, 0, {}};
      for (auto& w : elements()) t.record(demazure(lift(w)) == w, [&] { return w.str(); });
      add_checks(inst, {t});
    });
    instance("monoid-map", [&](InstanceResult& inst) {
      CheckTally mul{"monoid-map", 0, 0, {}}, well{"well-defined", 0, 0, {}};
      std::mt19937_64 rng(cfg_.seed);
      auto random_word = [&] {
        std::vector<int> w(rng() % (L_ + 1));
        for (auto& s : w) s = int(rng() % sys_->rank());
        return w;
      };
      for (int k = 0; k < 1000; ++k) {
        auto u = random_word(), v = random_word();
        auto a = BraidElement::from_word(sys_, u), b = BraidElement::from_word(sys_, v);
        mul.record(demazure(bmul(a, b)) == demazure_mul(demazure(a), demazure(b)),
                   [&] { return a.str() + " " + b.str(); });
        std::vector<GroupElement> gens;
        for (int s : u) gens.push_back(GroupElement::generator(sys_, s));
        well.record(demazure(a) == demazure_product(sys_, gens), [&] { return a.str(); });
      }
      add_checks(inst, {mul, well});
    });
    instance("normal-form", [&](InstanceResult& inst) {
      CheckTally t{"braid-move-invariance", 0, 0, {}}, round{"round-trip", 0, 0, {}};
      for (int n = 0; n <= L_; ++n)
        for (auto& w : words_of_length(sys_->rank(), n)) {
          auto b = BraidElement::from_word(sys_, w);
          auto what = [&] { return sys_->word_str(w); };
          round.record(b.length() == n && BraidElement::from_word(sys_, b.word()) == b &&
                           BraidElement::from_factors(sys_, b.factors()) == b,
                       what);
          for (auto& v : braid_moves(*sys_, w)) t.record(BraidElement::from_word(sys_, v) == b, what);
        }
      add_checks(inst, {t, round});
    });
    instance("gcd", [&](InstanceResult& inst) {
      CheckTally t{"gcd-meet", 0, 0, {}};
      auto braids = enumerate_braids(sys_, std::min(L_, 5));
      for (auto& a : braids) {
        auto lat = divisor_lattice(a);
        for (auto& b : braids) {
          auto g = left_gcd(a, b);
          bool ok = left_divides(g, a) && left_divides(g, b);
          for (auto& d : lat.elements)
            if (ok && left_divides(d, b)) ok = left_divides(d, g);
          t.record(ok, [&] { return a.str() + " " + b.str(); });
        }
      }
      add_checks(inst, {t});
    });
    instance("prefix-delta", [&](InstanceResult& inst) {
      CheckTally atoms{"prefix-atoms", 0, 0, {}}, delta{"prefix-delta", 0, 0, {}};
      for (auto& b : enumerate_braids(sys_, L_)) {
        GenSet T = simple_prefixes(b);
        auto what = [&] { return b.str(); };
        GenSet direct = 0;
        for (int s = 0; s < sys_->rank(); ++s)
          if (left_divides(lift(GroupElement::generator(sys_, s)), b)) direct |= GenSet(1) << s;
        atoms.record(direct == T, what);
        for (GenSet J = T;; J = (J - 1) & T) {
          if (sys_->is_finite_type(J)) delta.record(left_divides(lift(longest_element(sys_, J)), b), what);
          if (J == 0) break;
        }
      }
      add_checks(inst, {atoms, delta});
    });
  }

  void deletion_property() {
    for (int n = 2; n <= L_; ++n)
      instance("length-" + std::to_string(n), [&](InstanceResult& inst) {
        CheckTally t{"deletion-identity", 0, 0, {}}, uniq{"deletion-unique", 0, 0, {}};
        auto elem = [&](const std::vector<int>& w, int b, int e) {  // s_b ... s_e, 1-based inclusive
          return GroupElement::from_word(sys_, std::vector<int>(w.begin() + b - 1, w.begin() + e));
        };
        long nonreduced = 0, boundary = 0;
        for (auto& w : words_of_length(sys_->rank(), n)) {
          if (GroupElement::from_word(sys_, w).length() == n) continue;
          auto d = deletion_indices(sys_, w);
          ++nonreduced;
          boundary += d.jp == d.j;
          auto what = [&] { return sys_->word_str(w); };
          bool ok = 1 <= d.jp && d.jp <= d.j && d.j < n && elem(w, 1, d.j).length() == d.j &&
                    elem(w, 1, d.j + 1).length() < d.j + 1 && elem(w, d.jp, d.j) == elem(w, d.jp + 1, d.j + 1);
          t.record(ok, what);
          int count = 0;
          for (int i = 1; ok && i <= d.j; ++i) count += elem(w, i, d.j) == elem(w, i + 1, d.j + 1);
          uniq.record(ok && count == 1, what);
        }
        add_checks(inst, {t, uniq});
        inst.detail = std::to_string(nonreduced) + " nonreduced words, " + std::to_string(boundary) + " with j' = j";
      });
  }

  void apparatus_suite(const std::string& name) {
    auto& wanted = apparatus_suites().at(name);
    for (auto& b : nonreduced())
      instance(b.str(), [&](InstanceResult& inst) {
        inst.word = sys_->word_str(b.word());
        auto& rep = apparatus(b);
        std::vector<CheckTally> picked;
        for (auto& n : wanted)
          if (auto* c = rep.find(n)) picked.push_back(*c);
        add_checks(inst, picked);
        if (name == "delete-thm") {
          for (auto& [nm, c] : {std::pair{"fn", &rep.fn}, {"f", &rep.f}, {"fr", &rep.fr}}) {
            inst.certificates.push_back(record_of(nm, *c));
            inst.verdict = worse(inst.verdict, verdict_of(*c));
          }
          inst.detail = "Word_f " + std::to_string(rep.word_f_size) + ", Word_fn " +
                        std::to_string(rep.word_fn_size) + ", Word_fr " + std::to_string(rep.word_fr_size) +
                        " objects; " + std::to_string(rep.D) + " deletion patterns";
          for (auto& T : enumerate_deletion_patterns(b)) inst.patterns.push_back(T.str());
        }
      });
    if (name == "suspend") suspend_random();
  }

  // Random posets split along a linear extension, so that no arrow goes back.
  void suspend_random() {
    for (int k = 0; k < 20; ++k)
      instance("random-" + std::to_string(k), [&](InstanceResult& inst) {
        std::mt19937_64 rng(cfg_.seed * 1000003u + std::uint64_t(k));
        int n = 3 + int(rng() % 6);
        std::vector<std::vector<char>> rel(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i) {
          rel[i][i] = 1;
          for (int j = i + 1; j < n; ++j) rel[i][j] = rng() % 100 < 35;
        }
        for (int m = 0; m < n; ++m)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rel[i][j] = rel[i][j] || (rel[i][m] && rel[m][j]);
        auto P = FinPoset::from_leq(n, [&](int i, int j) { return bool(rel[i][j]); });
        int cut = 1 + int(rng() % (n - 1));
        std::vector<int> C0, C1;
        for (int i = 0; i < n; ++i) (i < cut ? C0 : C1).push_back(i);
        auto res = pushout_check(P, C0, C1);
        CheckTally t{"pushout", 0, 0, {}};
        t.record(res.holds, [&] { return export_poset(P); });
        add_checks(inst, {t});
        inst.detail = std::to_string(n) + " objects, split " + std::to_string(cut) + "|" + std::to_string(n - cut) +
                      ", comma " + std::to_string(res.comma_size) + ", homology " + res.whole.str();
      });
  }

  void bistratified() {
    std::optional<BistratifiedReport> fast;
    instance(window_str(cfg_.truncation_length, cfg_.max_letters), [&](InstanceResult& inst) {
      fast = check_bistratified(truncation());
      add_checks(inst, fast->checks);
      inst.detail = std::to_string(fast->objects) + " objects, " + std::to_string(fast->levels) + " ranks, " +
                    std::to_string(fast->morphisms) + " morphisms, " + std::to_string(fast->level_morphisms) +
                    " level, " + std::to_string(fast->level_nonbasic) + " level nonbasic";
    });
    if (fast && fast->morphisms == fast->objects) {
      // Only identities: nothing to verify.
      suite_.instances.clear();
      notes.push_back("bistratified: the truncation has no nonidentity morphisms");
      return;
    }
    int l = std::min(cfg_.truncation_length, 2), n = std::min(cfg_.max_letters, 3);
    instance("materialized/" + window_str(l, n), [&](InstanceResult& inst) {
      TruncationSpec sp;
      sp.max_length = l;
      sp.max_letters = n;
      auto R = check_bistratified_materialized(Truncation::build(sys_, sp), cert_);
      add_checks(inst, R.checks);
      inst.detail = std::to_string(R.level_morphisms) + " level morphisms, " + std::to_string(R.level_nonbasic) +
                    " with Fact materialized";
    });
  }

  void down_contractible() {
    std::optional<DownReport> R;
    try {
      R = check_down_contractible(truncation(), cert_);
    } catch (const Error& e) {
      instance(window_str(cfg_.truncation_length, cfg_.max_letters), [&](InstanceResult&) { throw e; });
      return;
    }
    for (auto& lv : R->levels)
      instance(lv.b.str(), [&](InstanceResult& inst) {
        inst.word = sys_->word_str(lv.b.word());
        inst.certificates.push_back(record_of("word_fr", lv.word_fr));
        inst.verdict = worse(inst.verdict, verdict_of(lv.word_fr));
        if (!lv.reduced) {
          inst.certificates.push_back(record_of("fr_fn", lv.fr_fn));
          inst.verdict = worse(inst.verdict, verdict_of(lv.fr_fn));
        }
        inst.detail = std::string(lv.reduced ? "reduced" : "nonreduced") + ", comma " +
                      std::to_string(lv.comma_objects) + " objects, primed " + std::to_string(lv.primed);
        if (!lv.failed.empty()) {
          inst.verdict = Verdict::Fail;
          inst.detail += "; failed:";
          for (auto& f : lv.failed) inst.detail += " " + f;
        }
      });
  }

  void bis_p0() {
    int l = std::min(cfg_.truncation_length, 3), n = std::min(cfg_.max_letters, 2);
    instance(window_str(l, n), [&](InstanceResult& inst) {
      TruncationSpec sp;
      sp.max_length = l;
      sp.max_letters = n;
      auto R = check_strong_composability(Truncation::build(sys_, sp), 4);
      add_checks(inst, {R.check});
      inst.detail = std::to_string(R.sequences) + " sequences of at most 4 morphisms, " +
                    std::to_string(R.not_composable) + " not strongly composable";
    });
  }

  const RunConfig& cfg_;
  SystemPtr sys_;
  int L_;
  CertifyOptions cert_;
  SuiteResult suite_;
  Clock::time_point start_;
  std::optional<std::vector<GroupElement>> elements_;
  std::optional<std::vector<BraidElement>> nonreduced_;
  std::map<std::string, ApparatusReport> apparatus_;
  std::optional<Truncation> truncation_;
};

json config_json(const RunConfig& c) {
  return json{{"system", c.system},
              {"suites", c.effective_suites()},
              {"max_length", c.effective_max_length()},
              {"max_letters", c.max_letters},
              {"truncation_length", c.truncation_length},
              {"time_budget", c.time_budget},
              {"seed", c.seed},
              {"timing", c.timing}};
}

json summary_json(const Summary& s) { return json{{"pass", s.pass}, {"fail", s.fail}, {"unknown", s.unknown}}; }

Summary summary_from(const json& j) { return {j.at("pass"), j.at("fail"), j.at("unknown")}; }

Verdict verdict_from(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "unknown") return Verdict::Unknown;
  throw Error(Errc::MalformedInput, "unknown verdict " + s);
}

}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

int RunConfig::effective_max_length() const {
  if (max_length) return *max_length;
  if (system == "A1~" || system == "A1") return 6;
  if (system == "A2" || system == "B2" || system == "G2") return 5;
  return 4;
}

std::vector<std::string> RunConfig::effective_suites() const { return suites.empty() ? suite_names() : suites; }

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(Errc::ConfigError, "line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw Error(Errc::ConfigError, "duplicate key " + key);
    if (key == "system") {
      cfg.system = v;
    } else if (key == "suites") {
      std::string list = v;
      std::replace(list.begin(), list.end(), ',', ' ');
      std::istringstream ls(list);
      for (std::string s; ls >> s;)
        if (s != "all") cfg.suites.push_back(s);
    } else if (key == "max_length") {
      cfg.max_length = int(parse_integer(key, v));
    } else if (key == "max_letters") {
      cfg.max_letters = int(parse_integer(key, v));
    } else if (key == "truncation_length") {
      cfg.truncation_length = int(parse_integer(key, v));
    } else if (key == "time_budget") {
      try {
        std::size_t used = 0;
        cfg.time_budget = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw Error(Errc::ConfigError, "time_budget: expected seconds, got '" + v + "'");
      }
    } else if (key == "seed") {
      long s = parse_integer(key, v);
      if (s < 0) throw Error(Errc::ConfigError, "seed must be nonnegative");
      cfg.seed = std::uint64_t(s);
    } else if (key == "timing") {
      cfg.timing = parse_bool(key, v);
    } else {
      throw Error(Errc::ConfigError, "unknown key " + key);
    }
  }
  validate_config(cfg);
  return cfg;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.system.empty()) throw Error(Errc::ConfigError, "system is required");
  for (auto& s : cfg.suites)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw Error(Errc::ConfigError, "unknown suite " + s);
  if (cfg.max_length && (*cfg.max_length < 1 || *cfg.max_length > kWordLengthBudget))
    throw Error(Errc::ConfigError, "max_length must be in 1.." + std::to_string(kWordLengthBudget));
  if (cfg.max_letters < 0 || cfg.max_letters > 6) throw Error(Errc::ConfigError, "max_letters must be in 0..6");
  if (cfg.truncation_length < 0 || cfg.truncation_length > 12)
    throw Error(Errc::ConfigError, "truncation_length must be in 0..12");
  if (cfg.time_budget < 0) throw Error(Errc::ConfigError, "time_budget must be nonnegative");
}

const InstanceResult* Report::find(const std::string& id) const {
  for (auto& s : suites)
    for (auto& i : s.instances)
      if (i.id == id) return &i;
  return nullptr;
}

Report run(const RunConfig& cfg) {
  validate_config(cfg);
  SystemPtr sys;
  try {
    sys = load_system(cfg.system);
  } catch (const Error& e) {
    if (e.code() == Errc::ConfigError) throw;
    throw Error(Errc::ConfigError, e.what());
  }
  Report r;
  r.config = cfg;
  r.config.max_length = cfg.effective_max_length();
  r.config.suites = cfg.effective_suites();
  r.system_label = sys->label();
  Runner runner(r.config, sys);
  for (auto& name : r.config.suites) {
    r.suites.push_back(runner.run_suite(name));
    auto& s = r.suites.back().summary;
    r.summary.pass += s.pass;
    r.summary.fail += s.fail;
    r.summary.unknown += s.unknown;
  }
  r.notes = runner.notes;
  if (r.summary.unknown > 0)
    r.notes.push_back(std::to_string(r.summary.unknown) +
                      " instances unknown: homology-only certificates or exhausted budgets; they do not fail the run");
  return r;
}

std::string report_to_json(const Report& r) {
  json suites = json::array();
  for (auto& s : r.suites) {
    json inst = json::array();
    for (auto& i : s.instances) {
      json certs = json::array(), checks = json::array();
      for (auto& c : i.certificates)
        certs.push_back({{"name", c.name}, {"level", c.level}, {"witness_kind", c.witness_kind},
                         {"witness", c.witness}, {"detail", c.detail}});
      for (auto& c : i.checks)
        checks.push_back({{"name", c.name}, {"instances", c.instances}, {"failures", c.failures},
                          {"first_failure", c.first_failure}});
      json j{{"id", i.id},           {"verdict", verdict_name(i.verdict)}, {"subject", i.subject},
             {"word", i.word},       {"patterns", i.patterns},            {"certificates", certs},
             {"checks", checks},     {"detail", i.detail}};
      if (i.seconds) j["seconds"] = *i.seconds;
      inst.push_back(std::move(j));
    }
    json sj{{"name", s.name}, {"instances", inst}, {"summary", summary_json(s.summary)}};
    if (s.seconds) sj["seconds"] = *s.seconds;
    suites.push_back(std::move(sj));
  }
  json j{{"schema", r.schema},
         {"tool", {{"name", "coxtop"}, {"version", r.version}}},
         {"config", config_json(r.config)},
         {"system", r.system_label},
         {"suites", suites},
         {"summary", summary_json(r.summary)},
         {"notes", r.notes}};
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  try {
    auto j = json::parse(text);
    Report r;
    r.schema = j.at("schema");
    if (r.schema != kReportSchema) throw Error(Errc::MalformedInput, "unsupported report schema " + r.schema);
    r.version = j.at("tool").at("version");
    auto& c = j.at("config");
    r.config.system = c.at("system");
    r.config.suites = c.at("suites").get<std::vector<std::string>>();
    r.config.max_length = c.at("max_length").get<int>();
    r.config.max_letters = c.at("max_letters");
    r.config.truncation_length = c.at("truncation_length");
    r.config.time_budget = c.at("time_budget");
    r.config.seed = c.at("seed");
    r.config.timing = c.at("timing");
    r.system_label = j.at("system");
    for (auto& sj : j.at("suites")) {
      SuiteResult s;
      s.name = sj.at("name");
      s.summary = summary_from(sj.at("summary"));
      if (sj.contains("seconds")) s.seconds = sj.at("seconds").get<double>();
      for (auto& ij : sj.at("instances")) {
        InstanceResult i;
        i.id = ij.at("id");
        i.verdict = verdict_from(ij.at("verdict"));
        i.subject = ij.at("subject");
        i.word = ij.at("word");
        i.patterns = ij.at("patterns").get<std::vector<std::string>>();
        for (auto& cj : ij.at("certificates"))
          i.certificates.push_back({cj.at("name"), cj.at("level"), cj.at("witness_kind"), cj.at("witness"), cj.at("detail")});
        for (auto& cj : ij.at("checks"))
          i.checks.push_back({cj.at("name"), cj.at("instances"), cj.at("failures"), cj.at("first_failure")});
        i.detail = ij.at("detail");
        if (ij.contains("seconds")) i.seconds = ij.at("seconds").get<double>();
        s.instances.push_back(std::move(i));
      }
      r.suites.push_back(std::move(s));
    }
    r.summary = summary_from(j.at("summary"));
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedInput, std::string("report: ") + e.what());
  }
}

std::string explain(const Report& r, const std::string& id) {
  const InstanceResult* i = r.find(id);
  if (!i) throw Error(Errc::UnknownInstance, "no instance " + id + " in the report");
  std::ostringstream os;
  os << "instance " << i->id << "\n";
  os << "verdict: " << verdict_name(i->verdict) << "\n";
  os << "system: " << r.system_label << "\n";
  os << "subject: " << i->subject << "\n";
  if (!i->word.empty()) os << "word: " << i->word << "\n";
  for (std::size_t k = 0; k < i->patterns.size(); ++k) os << "pattern T_" << k + 1 << ": " << i->patterns[k] << "\n";
  for (auto& c : i->certificates) {
    os << "certificate " << c.name << ": " << c.level;
    if (c.witness_kind == "morse-matching") os << ", Morse matching of size " << c.witness;
    else if (c.witness_kind == "homology-degree") os << ", nonzero reduced homology in degree " << c.witness;
    else if (!c.witness_kind.empty()) os << ", " << c.witness_kind << " object " << c.witness;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    os << "\n";
  }
  for (auto& c : i->checks) {
    os << "check " << c.name << ": " << c.instances << " cases, " << c.failures << " failures";
    if (!c.first_failure.empty()) os << "; first failure: " << c.first_failure;
    os << "\n";
  }
  if (!i->detail.empty()) os << "detail: " << i->detail << "\n";
  if (i->seconds) os << "seconds: " << *i->seconds << "\n";
  return os.str();
}

}  // namespace coxtop
