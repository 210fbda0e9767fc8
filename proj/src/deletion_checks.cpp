#include "coxtop/deletion_checks.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "coxtop/errors.hpp"

namespace coxtop {

void CheckTally::record(bool ok, const std::function<std::string()>& what) {
  ++instances;
  if (ok) return;
  if (failures++ == 0) first_failure = what();
}

bool ApparatusReport::ok() const {
  if (!fn.contractible() && fn.level != CertLevel::Unknown && fn.level != CertLevel::ZAcyclic) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckTally& c) { return c.ok(); });
}

const CheckTally* ApparatusReport::find(const std::string& name) const {
  for (auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

namespace {

// Galois check that reports a non-monotone map as a failure instead of throwing.
bool galois(const FinPoset& P, const FinPoset& Q, const std::vector<int>& L, const std::vector<int>& R) {
  for (int v : L)
    if (v < 0) return false;
  for (int v : R)
    if (v < 0) return false;
  try {
    return check_adjunction(P, Q, L, R);
  } catch (const Error&) {
    return false;
  }
}

bool all_contractible(const std::vector<Certificate>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const Certificate& c) { return c.contractible(); });
}

constexpr const char* kNames[] = {
    "partition",        "classify",         "strata-cover",      "closure",         "no-arrows",
    "slice-product",    "slice-adjoint",    "reform-predicate",  "reform-remark",   "badword",
    "block-retract",    "case1-adjunction", "case1-contractible", "case2-iso",      "case2-functor",
    "case2-initial",    "gap-initial",      "gap-contractible",  "word-s-1f",       "block2-claim",
    "block2-adjunction", "pushout"};

class Checker {
 public:
  Checker(const BraidElement& b, const ApparatusOptions& opt, ApparatusReport& rep)
      : sys_(b.system()), opt_(opt), rep_(rep), S_(stratify(b)) {
    for (int x = 0; x < S_.word_f.size(); ++x) index_.emplace(S_.word_f.objects[x].str(), x);
    rep_.D = S_.D();
    // Registered up front so references stay valid and the report order is fixed.
    for (const char* name : kNames)
      if (!rep_.find(name)) rep_.checks.push_back(CheckTally{name, 0, 0, {}});
  }

  const Stratification& strat() const { return S_; }

  void run_proof() {
    auto& partition = tally("partition");
    auto& classify_t = tally("classify");
    auto& cover = tally("strata-cover");
    auto& closure = tally("closure");
    auto& no_arrows = tally("no-arrows");
    const auto& W = S_.word_f;

    // Slices are disjoint from each other and from Word_fn, and cover Word_f.
    std::vector<std::vector<int>> slices;
    for (int d = 1; d <= S_.D(); ++d) slices.push_back(slice(S_, d));
    for (int x = 0; x < W.size(); ++x) {
      int hits = 0;
      for (int d = 1; d <= S_.D(); ++d) hits += W.in_fr[x] && S_.maps_to(x, d);
      partition.record(hits <= 1, [&] { return W.objects[x].str() + " lies in several slices"; });
      bool reached = false;
      for (auto& sl : slices)
        for (int y : sl) reached = reached || W.poset.leq(y, x);
      partition.record(reached, [&] { return W.objects[x].str() + " receives no map from a slice"; });
      cover.record(S_.m[x] >= 0, [&] { return W.objects[x].str() + " is in no stratum"; });
    }
    for (int x = 0; x < W.size(); ++x) {
      if (!W.in_fr[x]) continue;
      int expect = -1;
      for (int d = 1; d <= S_.D(); ++d)
        if (S_.maps_to(x, d)) expect = d - 1;
      int got = -1;
      try {
        got = classify(sys_, W.objects[x], S_.patterns).d;
      } catch (const Error& e) {
        if (e.code() != Errc::NotClassified) throw;
      }
      classify_t.record(got == expect, [&] { return "classify " + W.objects[x].str(); });
    }
    Strata top = strata(S_, S_.D());
    cover.record(int(top.le.size()) == W.size(), [] { return std::string("Word_f is not the last stratum"); });
    Strata zero = strata(S_, 0);
    long fn = std::count_if(zero.le.begin(), zero.le.end(), [&](int x) { return W.in_fn(x); });
    cover.record(fn == long(zero.le.size()) && fn == rep_.word_fn_size,
                 [] { return std::string("stratum 0 differs from Word_fn"); });

    for (int x = 0; x < W.size(); ++x) {
      if (!W.in_fn(x)) continue;
      for (int y = 0; y < W.size(); ++y)
        if (W.poset.leq(x, y)) closure.record(W.in_fn(y), [&] { return W.objects[y].str() + " escapes Word_fn"; });
    }

    for (int d = 1; d <= S_.D(); ++d) {
      Strata st = strata(S_, d);
      for (int x : st.lt)
        for (int y : st.fr_d)
          no_arrows.record(!W.poset.leq(x, y), [&] { return W.objects[x].str() + " -> " + W.objects[y].str(); });
      check_slice_product(d, slices[d - 1]);
      check_slice_adjoint(d, slices[d - 1], st.fr_d);
      for (int x : slices[d - 1]) check_word(d, x);
      check_gap(d, slices[d - 1]);
    }
  }

  void run_pushout() {
    auto& push = tally("pushout");
    for (int d = 1; d <= S_.D(); ++d) {
      Strata st = strata(S_, d);
      std::vector<int> local(S_.word_f.size(), -1);
      for (std::size_t i = 0; i < st.le.size(); ++i) local[st.le[i]] = int(i);
      std::vector<int> c0, c1;
      for (int x : st.fr_d) c0.push_back(local[x]);
      for (int x : st.lt) c1.push_back(local[x]);
      FinPoset C = S_.word_f.poset.induced(st.le);
      PushoutResult r = pushout_check(C, c0, c1);
      push.record(r.holds, [&] { return "stratum " + std::to_string(d) + ": " + r.whole.str() + " vs " + r.cylinder.str(); });
    }
  }

 private:
  CheckTally& tally(const std::string& name) {
    for (auto& c : rep_.checks)
      if (c.name == name) return c;
    throw Error(Errc::MalformedInput, "unregistered check " + name);
  }

  int find_word(const Factorization& w) const {
    auto it = index_.find(w.str());
    return it == index_.end() ? -1 : it->second;
  }

  // Word_fr(w1) x Word_fr(w2) x Word_fr(b3) -> slice, by concatenation around s and t.
  void check_slice_product(int d, const std::vector<int>& sl) {
    auto& t = tally("slice-product");
    const auto& T = S_.patterns[d - 1];
    WordPoset A = enumerate_word(lift(T.w1), WordFilter::FR);
    WordPoset B = enumerate_word(lift(T.w2), WordFilter::FR);
    WordPoset C = enumerate_word(T.b3.empty() ? BraidElement(sys_) : T.b3, WordFilter::FR);
    std::vector<int> image;
    std::vector<std::array<int, 3>> coords;
    BraidElement s = lift(GroupElement::generator(sys_, T.s)), tt = lift(GroupElement::generator(sys_, T.t));
    for (int i = 0; i < A.size(); ++i)
      for (int j = 0; j < B.size(); ++j)
        for (int k = 0; k < C.size(); ++k) {
          Factorization w = A.objects[i];
          w.letters.push_back(s);
          w.letters.insert(w.letters.end(), B.objects[j].letters.begin(), B.objects[j].letters.end());
          w.letters.push_back(tt);
          w.letters.insert(w.letters.end(), C.objects[k].letters.begin(), C.objects[k].letters.end());
          image.push_back(find_word(w));
          coords.push_back({i, j, k});
        }
    std::vector<int> sorted = image;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> want = sl;
    std::sort(want.begin(), want.end());
    t.record(sorted == want, [&] { return "slice " + std::to_string(d) + " is not the product"; });
    if (sorted != want) return;
    const auto& P = S_.word_f.poset;
    for (std::size_t u = 0; u < image.size(); ++u)
      for (std::size_t v = 0; v < image.size(); ++v) {
        auto [i, j, k] = coords[u];
        auto [i2, j2, k2] = coords[v];
        bool prod = A.poset.leq(i, i2) && B.poset.leq(j, j2) && C.poset.leq(k, k2);
        t.record(prod == P.leq(image[u], image[v]), [&] { return "slice " + std::to_string(d) + " order differs"; });
      }
  }

  // slice -> Word_fr(b)_d has right adjoint w -> w meet T_d.
  void check_slice_adjoint(int d, const std::vector<int>& sl, const std::vector<int>& frd) {
    auto& t = tally("slice-adjoint");
    const auto& W = S_.word_f;
    Factorization Td = S_.patterns[d - 1].word();
    std::vector<int> L, R;
    for (int x : sl) L.push_back(int(std::find(frd.begin(), frd.end(), x) - frd.begin()));
    for (int y : frd) {
      auto m = meet(sys_, W.objects[y], Td);
      int id = m ? find_word(*m) : -1;
      auto it = std::find(sl.begin(), sl.end(), id);
      R.push_back(it == sl.end() ? -1 : int(it - sl.begin()));
    }
    for (int& v : L)
      if (v == int(frd.size())) v = -1;
    t.record(galois(W.poset.induced(sl), W.poset.induced(frd), L, R),
             [&] { return "meet with T_" + std::to_string(d) + " is not right adjoint"; });
  }

  // Blocks of one word w of the slice of T_d.
  void check_word(int d, int x) {
    const auto& W = S_.word_f;
    const auto& T = S_.patterns[d - 1];
    ClassifiedWord cw = classify(sys_, W.objects[x], S_.patterns);
    BlockFrame F = block_frame(cw, T);
    const Factorization& w = W.objects[x];
    int n = cw.size();
    auto name = [&] { return w.str() + " / " + T.str(); };

    auto& pred = tally("reform-predicate");
    auto& remark = tally("reform-remark");
    auto& bad = tally("badword");
    std::vector<int> below;  // (w | Word_f(b)_{<d}) as partitions
    BlockPoset all = block_poset_if(n, [](const BlockPartition&) { return true; });
    for (int i = 0; i < int(all.parts.size()); ++i) {
      const auto& p = all.parts[i];
      Factorization c = coarsen(w, p);
      int id = c.all_finite_type() ? find_word(c) : -1;
      bool oracle = id >= 0 && S_.m[id] >= 0 && S_.m[id] < d;
      bool claimed = F.maps_below(p);
      pred.record(oracle == claimed, [&] { return name() + " partition " + p.str(); });
      if (oracle) below.push_back(i);
      for (auto [b, e] : p.blocks()) {
        if (!F.satisfies(b, e)) continue;
        bool placed = (b <= F.s_pos && F.s_pos < e) || (b <= F.t_pos && F.t_pos < e) || b > F.t_pos;
        remark.record(placed, [&] { return name() + " block " + p.str(); });
      }
    }
    // A finite type block (y_b', ..., t, ...) with b' <= b_min stays finite type with s, ..., y_{b'-1}.
    if (F.anchor_end) {
      int bm = *F.anchor_end - F.s_pos;
      for (int bp = 1; bp <= bm; ++bp)
        for (int e = F.t_pos + 1; e <= n; ++e) {
          int begin = F.s_pos + bp;
          if (!F.finite_type(begin, e)) continue;
          bad.record(F.finite_type(F.s_pos, e), [&] { return name() + " block from y_" + std::to_string(bp); });
        }
    }

    // Block'(w) against (w | Word_f(b)_{<d}).
    auto& retr = tally("block-retract");
    BlockPoset B = block_poset(F);
    FinPoset Q = all.poset.induced(below);
    std::vector<int> L, R;
    for (auto& p : B.parts) {
      int i = all.find(p);
      auto it = std::find(below.begin(), below.end(), i);
      L.push_back(it == below.end() ? -1 : int(it - below.begin()));
    }
    for (int i : below) R.push_back(B.find(F.retract(all.parts[i])));
    retr.record(galois(B.poset, Q, L, R), [&] { return name() + ": Block' is not a retract"; });

    GenSet swt = support(T.w2) | (1u << T.s) | (1u << T.t);
    if (sys_->is_finite_type(swt)) check_case1(F, B, name);
    else check_case2(cw, T, F, B, name);
  }

  void check_case1(const BlockFrame& F, const BlockPoset& B, const std::function<std::string()>& name) {
    auto& adj = tally("case1-adjunction");
    auto& con = tally("case1-contractible");
    // Anchor (s, y_1, ..., y_bmin); when w2 is empty, (s, t).
    int end;
    if (F.anchor_end) end = *F.anchor_end + 1;
    else if (F.t_pos == F.s_pos + 1) end = F.t_pos + 1;
    else {
      adj.record(false, [&] { return name() + ": no gap index"; });
      return;
    }
    std::vector<int> sub;
    for (int i = 0; i < int(B.parts.size()); ++i)
      if (B.parts[i].contains(F.s_pos, end)) sub.push_back(i);
    std::vector<int> L, R(sub.size());
    for (auto& p : B.parts) {
      int i = B.find(p.united(F.s_pos, end));
      auto it = std::find(sub.begin(), sub.end(), i);
      L.push_back(i < 0 || it == sub.end() ? -1 : int(it - sub.begin()));
    }
    for (std::size_t j = 0; j < sub.size(); ++j) R[j] = sub[j];
    FinPoset B1 = B.poset.induced(sub);
    adj.record(galois(B.poset, B1, L, R), [&] { return name() + ": union with the anchor is not left adjoint"; });
    BlockPartition anchor = BlockPartition::singletons(int(F.letters.size()));
    for (int i = F.s_pos; i + 1 < end; ++i) anchor.cuts &= ~(std::uint64_t(1) << i);
    int a = -1;
    for (std::size_t j = 0; j < sub.size(); ++j)
      if (B.parts[sub[j]] == anchor) a = int(j);
    adj.record(a >= 0 && B1.minimum() == a, [&] { return name() + ": anchor partition is not initial"; });
    if (opt_.certify)
      con.record(certify_contractible(B.poset, opt_.cert).contractible(), [&] { return name() + ": Block'"; });
  }

  void check_case2(const ClassifiedWord& cw, const DeletionPattern& T, const BlockFrame& F, const BlockPoset& B,
                   const std::function<std::string()>& name) {
    auto& iso = tally("case2-iso");
    FImage f;
    try {
      f = functor_F(cw, T);
    } catch (const Error& e) {
      iso.record(false, [&] { return name() + ": " + e.what(); });
      return;
    }
    BlockPoset B2 = block2_poset(sys_, T, f.y, f.z);
    int n = cw.size(), a = cw.a;
    std::vector<int> image;
    for (auto& p : B2.parts) {
      BlockPartition tail = pullback(p, f.surjection);
      BlockPartition q{n, tail.cuts << a};
      for (int i = 0; i < a; ++i) q.cuts |= std::uint64_t(1) << i;
      image.push_back(B.find(q));
    }
    std::vector<int> sorted = image;
    std::sort(sorted.begin(), sorted.end());
    bool bij = sorted.size() == B.parts.size() && (sorted.empty() || sorted.front() >= 0) &&
               std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    iso.record(bij, [&] { return name() + ": pullback is not a bijection onto Block'"; });
    if (!bij) return;
    for (int u = 0; u < int(image.size()); ++u)
      for (int v = 0; v < int(image.size()); ++v)
        iso.record(B2.poset.leq(u, v) == B.poset.leq(image[u], image[v]),
                   [&] { return name() + ": pullback does not preserve order"; });
    (void)F;
  }

  // Gap posets, the functor F and Block''(y', z') for one pattern in the second case.
  void check_gap(int d, const std::vector<int>& sl) {
    const auto& T = S_.patterns[d - 1];
    GenSet swt = support(T.w2) | (1u << T.s) | (1u << T.t);
    if (sys_->is_finite_type(swt) || sl.empty()) return;
    auto name = [&] { return T.str(); };
    auto& functor = tally("case2-functor");
    auto& initial = tally("case2-initial");
    auto& gapi = tally("gap-initial");
    auto& gapc = tally("gap-contractible");
    auto& ws1f = tally("word-s-1f");
    auto& claim = tally("block2-claim");
    auto& adj = tally("block2-adjunction");
    const auto& W = S_.word_f;

    GapPosets G = gap_posets(sys_, T);
    WordPoset Z = enumerate_word(T.b3.empty() ? BraidElement(sys_) : T.b3, WordFilter::FR);
    auto gap_index = [&](const std::vector<GroupElement>& y) {
      int i = G.word.find(factorization_of(y));
      auto it = std::find(G.gap.begin(), G.gap.end(), i);
      return it == G.gap.end() ? -1 : int(it - G.gap.begin());
    };
    auto z_index = [&](const std::vector<GroupElement>& z) { return Z.find(factorization_of(z)); };

    // F is monotone, and F_1 has contractible fibers (F_1 | y').
    std::vector<int> F1, Fz;
    for (int x : sl) {
      ClassifiedWord cw = classify(sys_, W.objects[x], S_.patterns);
      FImage f = functor_F(cw, T);
      F1.push_back(gap_index(f.y));
      Fz.push_back(z_index(f.z));
    }
    bool mapped = std::none_of(F1.begin(), F1.end(), [](int i) { return i < 0; }) &&
                  std::none_of(Fz.begin(), Fz.end(), [](int i) { return i < 0; });
    functor.record(mapped, [&] { return name() + ": F leaves Word_gap x Word_fr(b3)"; });
    if (!mapped) return;
    FinPoset P = W.poset.induced(sl);
    for (int u = 0; u < P.size(); ++u)
      for (int v = 0; v < P.size(); ++v)
        if (P.leq(u, v))
          functor.record(G.gap_poset.leq(F1[u], F1[v]) && Z.poset.leq(Fz[u], Fz[v]),
                         [&] { return name() + ": F is not monotone"; });
    if (opt_.certify)
      initial.record(all_contractible(quillen_fibers(P, G.gap_poset, F1, Side::Over, opt_.cert)),
                     [&] { return name() + ": F_1 is not initial"; });

    // Word_gap^1f -> Word_gap is initial and both are contractible.
    if (opt_.certify) {
      gapi.record(all_contractible(quillen_fibers(G.gap_1f_poset, G.gap_poset, G.embed, Side::Over, opt_.cert)),
                  [&] { return name() + ": Word_gap^1f is not initial"; });
      gapc.record(certify_contractible(G.gap_poset, opt_.cert).contractible(), [&] { return name() + ": Word_gap"; });
      gapc.record(certify_contractible(G.gap_1f_poset, opt_.cert).contractible(),
                  [&] { return name() + ": Word_gap^1f"; });
    }

    // Word_gap^1f(w2) is Word_s^1f(s w2) and check_word_s_1f covers s w2 and every s y'_1.
    GroupElement s = GroupElement::generator(sys_, T.s);
    GroupElement sw2 = multiply(s, T.w2);
    std::string why;
    ws1f.record(check_word_s_1f(sys_, T.s, sw2, &why, opt_.cert), [&] { return name() + ": " + why; });
    WordPoset S1 = word_s_1f(sys_, T.s, sw2);
    std::vector<int> to_s1;
    for (int i : G.gap_1f) {
      auto y = group_letters(G.word.objects[i]);
      y[0] = multiply(s, y[0]);
      to_s1.push_back(S1.find(factorization_of(y)));
    }
    std::vector<int> sorted = to_s1;
    std::sort(sorted.begin(), sorted.end());
    bool bij = int(sorted.size()) == S1.size() && (sorted.empty() || sorted.front() >= 0) &&
               std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    ws1f.record(bij, [&] { return name() + ": Word_gap^1f differs from Word_s^1f(s w2)"; });
    if (bij)
      for (int u = 0; u < G.gap_1f_poset.size(); ++u)
        for (int v = 0; v < G.gap_1f_poset.size(); ++v)
          ws1f.record(G.gap_1f_poset.leq(u, v) == S1.poset.leq(to_s1[u], to_s1[v]),
                      [&] { return name() + ": Word_gap^1f order differs"; });
    for (int i : G.gap) {
      auto y = group_letters(G.word.objects[i]);
      GroupElement sy = multiply(s, y[0]);
      ws1f.record(check_word_s_1f(sys_, T.s, sy, &why, opt_.cert), [&] { return name() + ": " + why; });
    }

    // Block''(y', z') for y' in Word_gap^1f.
    for (int i : G.gap_1f) {
      auto y = group_letters(G.word.objects[i]);
      for (int k = 0; k < Z.size(); ++k) {
        auto z = Z.objects[k].letters.empty() ? std::vector<GroupElement>{} : group_letters(Z.objects[k]);
        BlockFrame F = block2_frame(sys_, T, y, z);
        BlockPoset B = block_poset(F);
        auto label = [&] { return name() + " y'=" + G.word.objects[i].str() + " z'=" + Z.objects[k].str(); };
        for (auto& p : B.parts)
          for (auto [b, e] : p.blocks()) {
            if (e - b < 2) continue;
            bool ok = (b == 0 && e >= 2) || b >= 2;
            claim.record(ok, [&] { return label() + " block " + p.str(); });
          }
        std::vector<int> sub;
        for (int j = 0; j < int(B.parts.size()); ++j)
          if (B.parts[j].contains(0, 2)) sub.push_back(j);
        std::vector<int> L, R(sub);
        for (auto& p : B.parts) {
          int j = B.find(p.united(0, 2));
          auto it = std::find(sub.begin(), sub.end(), j);
          L.push_back(j < 0 || it == sub.end() ? -1 : int(it - sub.begin()));
        }
        FinPoset B1 = B.poset.induced(sub);
        adj.record(galois(B.poset, B1, L, R), [&] { return label() + ": union with (s, y'_1) is not left adjoint"; });
        BlockPartition anchor = BlockPartition::singletons(int(F.letters.size())).united(0, 2);
        int a = -1;
        for (std::size_t j = 0; j < sub.size(); ++j)
          if (B.parts[sub[j]] == anchor) a = int(j);
        adj.record(a >= 0 && B1.minimum() == a, [&] { return label() + ": (s, y'_1) partition is not initial"; });
      }
    }
  }

  SystemPtr sys_;
  const ApparatusOptions& opt_;
  ApparatusReport& rep_;
  Stratification S_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace

ApparatusReport check_delete_thm(const BraidElement& b, const ApparatusOptions& opt) {
  ApparatusReport rep;
  rep.b = b;
  Checker C(b, opt, rep);
  const auto& W = C.strat().word_f;
  std::vector<int> fn, fr;
  for (int x = 0; x < W.size(); ++x) {
    if (W.in_fn(x)) fn.push_back(x);
    if (W.in_fr[x]) fr.push_back(x);
  }
  rep.word_f_size = W.size();
  rep.word_fn_size = int(fn.size());
  rep.word_fr_size = int(fr.size());
  if (opt.certify) {
    rep.fn = certify_contractible(W.poset.induced(fn), opt.cert);
    rep.f = certify_contractible(W.poset, opt.cert);
    rep.fr = certify_contractible(W.poset.induced(fr), opt.cert);
    CheckTally companion{"word-f-fr", 0, 0, {}};
    companion.record(rep.f.contractible(), [] { return std::string("Word_f(b) not certified"); });
    companion.record(rep.fr.contractible(), [] { return std::string("Word_fr(b) not certified"); });
    rep.checks.push_back(companion);
  }
  if (opt.proof) C.run_proof();
  if (opt.pushout) C.run_pushout();
  return rep;
}

bool check_word_s_1f(const SystemPtr& sys, int s, const GroupElement& w, std::string* why, const CertifyOptions& opt) {
  auto fail = [&](const std::string& m) {
    if (why) *why = "Word_s^1f(" + w.str() + "): " + m;
    return false;
  };
  WordPoset P = word_s_1f(sys, s, w);
  GenSet Lw = w.left_descents();
  std::vector<GenSet> Rv;
  for (auto& v : P.objects) Rv.push_back(alpha(v.letters.front()).left_descents());
  for (int x = 0; x < P.size(); ++x)
    for (int y = 0; y < P.size(); ++y)
      if (P.poset.leq(x, y) && (Rv[x] & ~Rv[y])) return fail("v -> L(v_1) is not monotone");
  // For each T in the target: the fiber {v : T <= L(v_1)} retracts onto v_1 = Delta_T.
  for (GenSet T = Lw; T; T = (T - 1) & Lw) {
    if (!has_gen(T, s) || popcount(T) < 2) continue;
    GroupElement delta = longest_element(sys, T);
    std::vector<int> fiber, C;
    for (int x = 0; x < P.size(); ++x) {
      if ((T & ~Rv[x]) != 0) continue;
      fiber.push_back(x);
      if (alpha(P.objects[x].letters.front()) == delta) C.push_back(int(fiber.size()) - 1);
    }
    std::vector<int> R;
    for (int x : fiber) {
      auto v = group_letters(P.objects[x]);
      if (!(v[0] == delta)) {
        if (!prefix_leq(delta, v[0])) return fail("Delta_T is not a prefix of v_1");
        GroupElement rest = multiply(inverse(delta), v[0]);
        v[0] = rest;
        v.insert(v.begin(), delta);
      }
      int id = P.find(factorization_of(v));
      auto it = std::find(fiber.begin(), fiber.end(), id);
      int local = it == fiber.end() ? -1 : int(it - fiber.begin());
      auto jt = std::find(C.begin(), C.end(), local);
      R.push_back(jt == C.end() ? -1 : int(jt - C.begin()));
    }
    FinPoset Fp = P.poset.induced(fiber);
    FinPoset Cp = Fp.induced(C);
    std::vector<int> L(C.begin(), C.end());
    if (!galois(Cp, Fp, L, R)) return fail("the retraction onto Delta_T is not right adjoint");
    std::vector<GroupElement> top{delta};
    if (!(delta == w)) top.push_back(multiply(inverse(delta), w));
    int t = P.find(factorization_of(top));
    auto it = std::find(fiber.begin(), fiber.end(), t);
    int local = it == fiber.end() ? -1 : int(it - fiber.begin());
    auto jt = std::find(C.begin(), C.end(), local);
    if (jt == C.end() || Cp.maximum() != int(jt - C.begin())) return fail("(Delta_T, Delta_T^-1 w) is not terminal");
  }
  if (!certify_contractible(P.poset, opt).contractible()) return fail("not certified contractible");
  return true;
}

}  // namespace coxtop
