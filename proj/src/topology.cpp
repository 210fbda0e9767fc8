#include "coxtop/topology.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "coxtop/errors.hpp"

namespace coxtop {

namespace {

std::uint64_t pair_key(int a, int b) { return (std::uint64_t(std::uint32_t(a)) << 32) | std::uint32_t(b); }

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ std::size_t(x)) * 1099511628211ull;
    return h;
  }
};

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(Errc::BudgetExceeded, "integer overflow in elimination");
  return r;
}

std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Error(Errc::BudgetExceeded, "integer overflow in elimination");
  return r;
}

}  // namespace

// ---------------------------------------------------------------- posets

FinPoset FinPoset::from_leq(int n, const std::function<bool(int, int)>& leq, std::vector<std::string> labels,
                            bool check) {
  FinPoset P;
  P.up_.assign(n, Bits(n));
  P.down_.assign(n, Bits(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x == y || leq(x, y)) {
        P.up_[x].set(y);
        P.down_[y].set(x);
      }
  if (labels.empty())
    for (int x = 0; x < n; ++x) labels.push_back(std::to_string(x));
  if (int(labels.size()) != n) throw Error(Errc::MalformedInput, "label count differs from size");
  P.labels_ = std::move(labels);
  if (check) {
    for (int x = 0; x < n; ++x) {
      if (check && !leq(x, x)) throw Error(Errc::MalformedInput, "relation is not reflexive");
      for (auto y = P.up_[x].find_first(); y != Bits::npos; y = P.up_[x].find_next(y)) {
        if (int(y) != x && P.up_[y][x]) throw Error(Errc::MalformedInput, "relation is not antisymmetric");
        if (!P.up_[y].is_subset_of(P.up_[x])) throw Error(Errc::MalformedInput, "relation is not transitive");
      }
    }
  }
  return P;
}

FinPoset FinPoset::induced(const std::vector<int>& ids) const {
  std::vector<std::string> labels;
  for (int x : ids) labels.push_back(labels_[x]);
  return from_leq(int(ids.size()), [&](int i, int j) { return up_[ids[i]][ids[j]]; }, std::move(labels), false);
}

FinPoset FinPoset::opposite() const {
  FinPoset P = *this;
  std::swap(P.up_, P.down_);
  return P;
}

std::optional<int> FinPoset::minimum() const {
  for (int x = 0; x < size(); ++x)
    if (int(up_[x].count()) == size()) return x;
  return std::nullopt;
}

std::optional<int> FinPoset::maximum() const {
  for (int x = 0; x < size(); ++x)
    if (int(down_[x].count()) == size()) return x;
  return std::nullopt;
}

std::vector<std::pair<int, int>> FinPoset::covers() const {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < size(); ++x) {
    Bits strict = up_[x];
    strict.reset(x);
    for (auto y = strict.find_first(); y != Bits::npos; y = strict.find_next(y))
      if ((strict & down_[y]).count() == 1) out.emplace_back(x, int(y));
  }
  return out;
}

std::vector<int> FinPoset::linear_extension() const {
  std::vector<int> ord(size());
  std::iota(ord.begin(), ord.end(), 0);
  std::vector<std::size_t> below(size());
  for (int x = 0; x < size(); ++x) below[x] = down_[x].count();
  std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return below[a] < below[b]; });
  return ord;
}

// ---------------------------------------------------------------- categories

FinCategory FinCategory::build(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                               std::vector<int> identity, const std::function<int(int, int)>& compose, bool check) {
  FinCategory C;
  C.objects_ = std::move(objects);
  C.morphisms_ = std::move(morphisms);
  C.identity_ = std::move(identity);
  int n = C.num_objects(), m = C.num_morphisms();
  if (int(C.identity_.size()) != n) throw Error(Errc::MalformedInput, "one identity per object required");
  std::vector<std::vector<int>> in(n), out(n);
  for (int f = 0; f < m; ++f) {
    auto& mf = C.morphisms_[f];
    if (mf.src < 0 || mf.src >= n || mf.tgt < 0 || mf.tgt >= n) throw Error(Errc::MalformedInput, "bad endpoint");
    C.hom_[pair_key(mf.src, mf.tgt)].push_back(f);
    out[mf.src].push_back(f);
    in[mf.tgt].push_back(f);
  }
  for (int x = 0; x < n; ++x) {
    int e = C.identity_[x];
    if (e < 0 || e >= m || C.morphisms_[e].src != x || C.morphisms_[e].tgt != x)
      throw Error(Errc::MalformedInput, "identity has wrong endpoints");
  }
  for (int y = 0; y < n; ++y)
    for (int f : in[y])
      for (int g : out[y]) {
        int h = compose(f, g);
        if (h < 0 || h >= m || C.morphisms_[h].src != C.morphisms_[f].src ||
            C.morphisms_[h].tgt != C.morphisms_[g].tgt)
          throw Error(Errc::MalformedInput, "composite has wrong endpoints");
        C.comp_[pair_key(f, g)] = h;
      }
  if (check) {
    for (int f = 0; f < m; ++f) {
      auto& mf = C.morphisms_[f];
      if (C.compose(C.identity_[mf.src], f) != f || C.compose(f, C.identity_[mf.tgt]) != f)
        throw Error(Errc::MalformedInput, "unit law fails");
    }
    for (int y = 0; y < n; ++y)
      for (int f : in[y])
        for (int g : out[y])
          for (int h : out[C.morphisms_[g].tgt])
            if (C.compose(C.compose(f, g), h) != C.compose(f, C.compose(g, h)))
              throw Error(Errc::MalformedInput, "composition is not associative");
  }
  return C;
}

FinCategory FinCategory::from_poset(const FinPoset& P) {
  int n = P.size();
  std::vector<std::string> objects = P.labels();
  std::vector<Morphism> morphisms;
  std::vector<int> identity(n);
  std::unordered_map<std::uint64_t, int> id;
  for (int x = 0; x < n; ++x)
    for (auto y = P.up(x).find_first(); y != Bits::npos; y = P.up(x).find_next(y)) {
      id[pair_key(x, int(y))] = int(morphisms.size());
      if (int(y) == x) identity[x] = int(morphisms.size());
      morphisms.push_back({x, int(y), ""});
    }
  auto compose = [&](int f, int g) { return id.at(pair_key(morphisms[f].src, morphisms[g].tgt)); };
  return build(std::move(objects), morphisms, std::move(identity), compose, false);
}

const std::vector<int>& FinCategory::hom(int x, int y) const {
  static const std::vector<int> empty;
  auto it = hom_.find(pair_key(x, y));
  return it == hom_.end() ? empty : it->second;
}

int FinCategory::compose(int f, int g) const {
  auto it = comp_.find(pair_key(f, g));
  if (it == comp_.end()) throw Error(Errc::MalformedInput, "morphisms are not composable");
  return it->second;
}

bool FinCategory::is_loop_free() const {
  for (auto& [key, fs] : hom_) {
    int x = int(key >> 32), y = int(key & 0xffffffffu);
    if (x == y && fs.size() != 1) return false;
    if (x < y && !hom(y, x).empty()) return false;
  }
  return true;
}

bool FinCategory::is_poset() const {
  if (!is_loop_free()) return false;
  for (auto& [key, fs] : hom_)
    if (fs.size() > 1) return false;
  return true;
}

std::optional<FinPoset> FinCategory::as_poset() const {
  if (!is_poset()) return std::nullopt;
  return FinPoset::from_leq(num_objects(), [&](int x, int y) { return !hom(x, y).empty(); }, objects_, false);
}

std::optional<int> FinCategory::initial_object() const {
  for (int x = 0; x < num_objects(); ++x) {
    bool ok = true;
    for (int y = 0; y < num_objects() && ok; ++y) ok = hom(x, y).size() == 1;
    if (ok) return x;
  }
  return std::nullopt;
}

std::optional<int> FinCategory::terminal_object() const {
  for (int y = 0; y < num_objects(); ++y) {
    bool ok = true;
    for (int x = 0; x < num_objects() && ok; ++x) ok = hom(x, y).size() == 1;
    if (ok) return y;
  }
  return std::nullopt;
}

FinCategory FinCategory::full_subcategory(const std::vector<int>& objs) const {
  std::vector<int> pos(num_objects(), -1);
  for (std::size_t i = 0; i < objs.size(); ++i) pos[objs[i]] = int(i);
  std::vector<std::string> objects;
  for (int x : objs) objects.push_back(objects_[x]);
  std::vector<Morphism> morphisms;
  std::vector<int> old_to_new(num_morphisms(), -1), new_to_old;
  for (int x : objs)
    for (int y : objs)
      for (int f : hom(x, y)) {
        old_to_new[f] = int(morphisms.size());
        new_to_old.push_back(f);
        morphisms.push_back({pos[x], pos[y], morphisms_[f].label});
      }
  std::vector<int> identity;
  for (int x : objs) identity.push_back(old_to_new[identity_[x]]);
  auto compose_new = [&](int f, int g) { return old_to_new[compose(new_to_old[f], new_to_old[g])]; };
  return build(std::move(objects), std::move(morphisms), std::move(identity), compose_new, false);
}

void check_functor(const FinCategory& C, const FinCategory& D, const Functor& F) {
  if (int(F.on_objects.size()) != C.num_objects() || int(F.on_morphisms.size()) != C.num_morphisms())
    throw Error(Errc::NotFunctorial, "functor tables have the wrong size");
  for (int f = 0; f < C.num_morphisms(); ++f) {
    int g = F.on_morphisms[f];
    auto& mf = C.morphism(f);
    if (g < 0 || g >= D.num_morphisms() || D.morphism(g).src != F.on_objects[mf.src] ||
        D.morphism(g).tgt != F.on_objects[mf.tgt])
      throw Error(Errc::NotFunctorial, "morphism image has wrong endpoints");
  }
  for (int x = 0; x < C.num_objects(); ++x)
    if (F.on_morphisms[C.identity(x)] != D.identity(F.on_objects[x]))
      throw Error(Errc::NotFunctorial, "identity not preserved");
  for (int f = 0; f < C.num_morphisms(); ++f)
    for (int g = 0; g < C.num_morphisms(); ++g)
      if (C.morphism(f).tgt == C.morphism(g).src &&
          F.on_morphisms[C.compose(f, g)] != D.compose(F.on_morphisms[f], F.on_morphisms[g]))
        throw Error(Errc::NotFunctorial, "composition not preserved");
}

void check_monotone(const FinPoset& P, const FinPoset& Q, const std::vector<int>& f) {
  if (int(f.size()) != P.size()) throw Error(Errc::NotFunctorial, "map has the wrong size");
  for (int x = 0; x < P.size(); ++x) {
    if (f[x] < 0 || f[x] >= Q.size()) throw Error(Errc::NotFunctorial, "map leaves the target");
    for (auto y = P.up(x).find_first(); y != Bits::npos; y = P.up(x).find_next(y))
      if (!Q.leq(f[x], f[y])) throw Error(Errc::NotFunctorial, "map is not order preserving");
  }
}

// ---------------------------------------------------------------- chain complexes

namespace {

// Simplices of an order complex, grouped by dimension, vertices in linear-extension order.
struct ChainTable {
  std::vector<std::vector<std::vector<int>>> by_dim;
  std::vector<std::unordered_map<std::vector<int>, int, VecHash>> index;
};

ChainTable enumerate_chains(const FinPoset& P, std::size_t cap) {
  ChainTable T;
  auto ord = P.linear_extension();
  std::vector<int> pos(P.size());
  for (int i = 0; i < P.size(); ++i) pos[ord[i]] = i;
  std::vector<std::vector<int>> succ(P.size());
  for (int x : ord)
    for (int y : ord)
      if (P.less(x, y)) succ[x].push_back(y);
  std::size_t total = 0;
  std::vector<int> chain;
  std::function<void()> rec = [&]() {
    std::size_t k = chain.size() - 1;
    if (T.by_dim.size() <= k) {
      T.by_dim.emplace_back();
      T.index.emplace_back();
    }
    T.index[k].emplace(chain, int(T.by_dim[k].size()));
    T.by_dim[k].push_back(chain);
    if (++total > cap) throw Error(Errc::BudgetExceeded, "order complex exceeds the simplex budget");
    for (int y : succ[chain.back()]) {
      chain.push_back(y);
      rec();
      chain.pop_back();
    }
  };
  for (int x : ord) {
    chain = {x};
    rec();
  }
  return T;
}

constexpr std::size_t kSimplexCap = 4000000;

std::vector<std::int64_t> dense_snf(std::vector<std::vector<std::int64_t>> A) {
  std::vector<std::int64_t> out;
  int m = int(A.size()), n = m ? int(A[0].size()) : 0;
  for (int t = 0; t < std::min(m, n); ++t) {
    auto find_min = [&](int& pi, int& pj) {
      std::int64_t best = 0;
      pi = pj = -1;
      for (int i = t; i < m; ++i)
        for (int j = t; j < n; ++j)
          if (A[i][j] && (best == 0 || std::llabs(A[i][j]) < best)) best = std::llabs(A[i][j]), pi = i, pj = j;
    };
    int pi, pj;
    find_min(pi, pj);
    if (pi < 0) break;
    for (;;) {
      std::swap(A[t], A[pi]);
      for (auto& row : A) std::swap(row[t], row[pj]);
      bool clean = true;
      for (int i = t + 1; i < m; ++i)
        if (A[i][t]) {
          std::int64_t q = A[i][t] / A[t][t];
          for (int j = t; j < n; ++j) A[i][j] = checked_sub(A[i][j], checked_mul(q, A[t][j]));
          if (A[i][t]) clean = false;
        }
      for (int j = t + 1; j < n; ++j)
        if (A[t][j]) {
          std::int64_t q = A[t][j] / A[t][t];
          for (int i = t; i < m; ++i) A[i][j] = checked_sub(A[i][j], checked_mul(q, A[i][t]));
          if (A[t][j]) clean = false;
        }
      if (!clean) {
        // Move the smallest remainder in row/column t to the pivot.
        std::int64_t best = std::llabs(A[t][t]);
        pi = t, pj = t;
        for (int i = t + 1; i < m; ++i)
          if (A[i][t] && std::llabs(A[i][t]) < best) best = std::llabs(A[i][t]), pi = i, pj = t;
        for (int j = t + 1; j < n; ++j)
          if (A[t][j] && std::llabs(A[t][j]) < best) best = std::llabs(A[t][j]), pi = t, pj = j;
        continue;
      }
      int bad = -1;
      for (int i = t + 1; i < m && bad < 0; ++i)
        for (int j = t + 1; j < n; ++j)
          if (A[i][j] % A[t][t]) {
            bad = i;
            break;
          }
      if (bad < 0) break;
      for (int j = t; j < n; ++j) A[t][j] += A[bad][j];
      pi = t, pj = t;
    }
    out.push_back(std::llabs(A[t][t]));
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> invariant_factors(SparseMatrix M) {
  auto& cols = M.columns;
  std::vector<std::unordered_map<int, char>> row_cols(M.rows);  // row -> columns holding it
  for (int c = 0; c < M.cols; ++c)
    for (auto& [r, v] : cols[c]) row_cols[r][c] = 1;
  auto entry = [&](int c, int r) -> std::int64_t {
    auto it = std::lower_bound(cols[c].begin(), cols[c].end(), std::make_pair(r, std::int64_t(INT64_MIN)));
    return it != cols[c].end() && it->first == r ? it->second : 0;
  };
  std::vector<char> alive(M.cols, 1);
  std::vector<std::int64_t> out;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int c = 0; c < M.cols; ++c) {
      if (!alive[c]) continue;
      if (cols[c].empty()) {
        alive[c] = 0;
        continue;
      }
      int pr = -1;
      std::size_t best = 0;
      std::int64_t u = 0;
      for (auto& [r, v] : cols[c])
        if ((v == 1 || v == -1) && (pr < 0 || row_cols[r].size() < best)) pr = r, best = row_cols[r].size(), u = v;
      if (pr < 0) continue;
      std::vector<int> others;
      for (auto& [c2, _] : row_cols[pr])
        if (c2 != c) others.push_back(c2);
      std::sort(others.begin(), others.end());
      for (int c2 : others) {
        std::int64_t f = checked_mul(entry(c2, pr), u);
        std::vector<std::pair<int, std::int64_t>> merged;
        auto& a = cols[c2];
        auto& b = cols[c];
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
          if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
            merged.push_back(a[i++]);
          } else if (i == a.size() || b[j].first < a[i].first) {
            std::int64_t v = -checked_mul(f, b[j].second);
            merged.emplace_back(b[j].first, v);
            row_cols[b[j].first][c2] = 1;
            ++j;
          } else {
            std::int64_t v = checked_sub(a[i].second, checked_mul(f, b[j].second));
            if (v) merged.emplace_back(a[i].first, v);
            else row_cols[a[i].first].erase(c2);
            ++i, ++j;
          }
        }
        a.swap(merged);
      }
      for (auto& [r, v] : cols[c]) row_cols[r].erase(c);
      cols[c].clear();
      alive[c] = 0;
      out.push_back(1);
      progress = true;
    }
  }
  // Dense Smith form on what is left.
  std::vector<int> rc, rr;
  std::map<int, int> row_pos;
  for (int c = 0; c < M.cols; ++c)
    if (alive[c] && !cols[c].empty()) rc.push_back(c);
  for (int c : rc)
    for (auto& [r, v] : cols[c]) row_pos.emplace(r, 0);
  if (rc.empty()) return out;
  int k = 0;
  for (auto& [r, p] : row_pos) p = k++;
  if (double(k) * double(rc.size()) > 4e7) throw Error(Errc::BudgetExceeded, "residual matrix too large");
  std::vector<std::vector<std::int64_t>> A(k, std::vector<std::int64_t>(rc.size(), 0));
  for (std::size_t j = 0; j < rc.size(); ++j)
    for (auto& [r, v] : cols[rc[j]]) A[row_pos[r]][j] = v;
  auto rest = dense_snf(std::move(A));
  out.insert(out.end(), rest.begin(), rest.end());
  std::sort(out.begin(), out.end());
  return out;
}

ChainComplex order_complex(const FinPoset& P) {
  ChainTable T = enumerate_chains(P, kSimplexCap);
  ChainComplex K;
  for (std::size_t k = 0; k < T.by_dim.size(); ++k) {
    K.dims.push_back(T.by_dim[k].size());
    SparseMatrix B;
    B.cols = int(T.by_dim[k].size());
    B.rows = k == 0 ? 0 : int(T.by_dim[k - 1].size());
    B.columns.resize(B.cols);
    if (k > 0)
      for (int c = 0; c < B.cols; ++c) {
        auto& s = T.by_dim[k][c];
        for (std::size_t i = 0; i < s.size(); ++i) {
          std::vector<int> face = s;
          face.erase(face.begin() + i);
          B.columns[c].emplace_back(T.index[k - 1].at(face), i % 2 ? -1 : 1);
        }
        std::sort(B.columns[c].begin(), B.columns[c].end());
      }
    K.boundary.push_back(std::move(B));
  }
  return K;
}

ChainComplex nerve_loopfree(const FinCategory& C) {
  if (!C.is_loop_free()) throw Error(Errc::HasLoops, "category has nonidentity endomorphisms or isomorphisms");
  std::vector<std::vector<int>> out(C.num_objects());
  for (int f = 0; f < C.num_morphisms(); ++f)
    if (!C.is_identity(f)) out[C.morphism(f).src].push_back(f);
  // Simplices of degree k >= 1 are strings of k composable nonidentity arrows; degree 0 are objects.
  std::vector<std::vector<std::vector<int>>> by_dim(1);
  std::vector<std::unordered_map<std::vector<int>, int, VecHash>> index(1);
  for (int x = 0; x < C.num_objects(); ++x) {
    index[0].emplace(std::vector<int>{x}, x);
    by_dim[0].push_back({x});
  }
  std::size_t total = by_dim[0].size();
  std::vector<int> str;
  std::function<void()> rec = [&]() {
    std::size_t k = str.size();
    if (by_dim.size() <= k) {
      by_dim.emplace_back();
      index.emplace_back();
    }
    index[k].emplace(str, int(by_dim[k].size()));
    by_dim[k].push_back(str);
    if (++total > kSimplexCap) throw Error(Errc::BudgetExceeded, "nerve exceeds the simplex budget");
    for (int g : out[C.morphism(str.back()).tgt]) {
      str.push_back(g);
      rec();
      str.pop_back();
    }
  };
  for (int f = 0; f < C.num_morphisms(); ++f)
    if (!C.is_identity(f)) {
      str = {f};
      rec();
    }
  ChainComplex K;
  for (std::size_t k = 0; k < by_dim.size(); ++k) {
    K.dims.push_back(by_dim[k].size());
    SparseMatrix B;
    B.cols = int(by_dim[k].size());
    B.rows = k == 0 ? 0 : int(by_dim[k - 1].size());
    B.columns.resize(B.cols);
    for (int c = 0; c < B.cols && k > 0; ++c) {
      auto& s = by_dim[k][c];
      std::map<int, std::int64_t> col;
      for (std::size_t i = 0; i <= k; ++i) {
        std::vector<int> face;
        if (k == 1) {
          face = {i == 0 ? C.morphism(s[0]).tgt : C.morphism(s[0]).src};
        } else if (i == 0) {
          face.assign(s.begin() + 1, s.end());
        } else if (i == k) {
          face.assign(s.begin(), s.end() - 1);
        } else {
          face = s;
          face[i - 1] = C.compose(s[i - 1], s[i]);
          face.erase(face.begin() + i);
        }
        col[index[k - 1].at(face)] += i % 2 ? -1 : 1;
      }
      for (auto& [r, v] : col)
        if (v) B.columns[c].emplace_back(r, v);
    }
    K.boundary.push_back(std::move(B));
  }
  return K;
}

HomologyProfile homology(const ChainComplex& K) {
  HomologyProfile H;
  std::size_t top = K.dims.size();
  H.empty = top == 0 || K.dims[0] == 0;
  std::vector<std::vector<std::int64_t>> inv(top + 1);
  for (std::size_t k = 1; k < top; ++k) inv[k] = invariant_factors(K.boundary[k]);
  for (std::size_t k = 0; k < top; ++k) {
    long rank_out = k == 0 ? 0 : long(inv[k].size());
    long rank_in = k + 1 < top ? long(inv[k + 1].size()) : 0;
    H.betti.push_back(long(K.dims[k]) - rank_out - rank_in);
    std::vector<std::int64_t> tors;
    if (k + 1 < top)
      for (auto d : inv[k + 1])
        if (d > 1) tors.push_back(d);
    H.torsion.push_back(tors);
  }
  while (!H.betti.empty() && H.betti.back() == 0 && H.torsion.back().empty()) {
    H.betti.pop_back();
    H.torsion.pop_back();
  }
  return H;
}

HomologyProfile poset_homology(const FinPoset& P) { return homology(order_complex(P)); }

bool HomologyProfile::reduced_trivial() const { return !first_nontrivial_reduced_degree().has_value(); }

std::optional<int> HomologyProfile::first_nontrivial_reduced_degree() const {
  if (empty) return -1;
  for (std::size_t k = 0; k < betti.size(); ++k) {
    long b = k == 0 ? betti[0] - 1 : betti[k];
    if (b != 0 || !torsion[k].empty()) return int(k);
  }
  return std::nullopt;
}

long HomologyProfile::euler() const {
  long e = 0;
  for (std::size_t k = 0; k < betti.size(); ++k) e += k % 2 ? -betti[k] : betti[k];
  return e;
}

std::string HomologyProfile::str() const {
  if (empty) return "empty";
  std::ostringstream os;
  os << "betti=(";
  for (std::size_t k = 0; k < betti.size(); ++k) os << (k ? "," : "") << betti[k];
  os << ")";
  for (std::size_t k = 0; k < torsion.size(); ++k)
    for (auto d : torsion[k]) os << " Z/" << d << "@" << k;
  return os.str();
}

std::uint64_t count_chains(const FinPoset& P) {
  auto ord = P.linear_extension();
  std::vector<std::uint64_t> c(P.size(), 0);
  std::uint64_t total = 0;
  for (int x : ord) {
    std::uint64_t v = 1;
    for (auto y = P.down(x).find_first(); y != Bits::npos; y = P.down(x).find_next(y))
      if (int(y) != x && __builtin_add_overflow(v, c[y], &v)) v = UINT64_MAX;
    c[x] = v;
    if (__builtin_add_overflow(total, v, &total)) total = UINT64_MAX;
  }
  return total;
}

// ---------------------------------------------------------------- certification

const char* cert_level_name(CertLevel c) {
  switch (c) {
    case CertLevel::Cone: return "Cone";
    case CertLevel::Collapsible: return "Collapsible";
    case CertLevel::ZAcyclic: return "ZAcyclic";
    case CertLevel::NotContractible: return "NotContractible";
    case CertLevel::Unknown: return "Unknown";
  }
  return "?";
}

std::vector<int> beat_point_core(const FinPoset& P) {
  int n = P.size();
  Bits alive(n);
  alive.set();
  auto has_min = [&](const Bits& U) {
    for (auto y = U.find_first(); y != Bits::npos; y = U.find_next(y))
      if (U.is_subset_of(P.up(y))) return true;
    return false;
  };
  auto has_max = [&](const Bits& D) {
    for (auto y = D.find_first(); y != Bits::npos; y = D.find_next(y))
      if (D.is_subset_of(P.down(y))) return true;
    return false;
  };
  bool changed = true;
  while (changed && alive.count() > 1) {
    changed = false;
    for (int x = 0; x < n; ++x) {
      if (!alive[x]) continue;
      Bits U = P.up(x) & alive, D = P.down(x) & alive;
      U.reset(x);
      D.reset(x);
      if ((U.any() && has_min(U)) || (D.any() && has_max(D))) {
        alive.reset(x);
        changed = true;
        if (alive.count() == 1) break;
      }
    }
  }
  std::vector<int> core;
  for (auto x = alive.find_first(); x != Bits::npos; x = alive.find_next(x)) core.push_back(int(x));
  return core;
}

std::optional<long> greedy_collapse(const FinPoset& P, const CertifyOptions& opt) {
  if (P.size() == 0) return std::nullopt;
  ChainTable T;
  try {
    T = enumerate_chains(P, kSimplexCap / 4);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::vector<std::size_t> offset{0};
  for (auto& d : T.by_dim) offset.push_back(offset.back() + d.size());
  std::size_t N = offset.back();
  std::vector<std::vector<int>> faces(N), cofaces(N);
  for (std::size_t k = 1; k < T.by_dim.size(); ++k)
    for (std::size_t c = 0; c < T.by_dim[k].size(); ++c) {
      int id = int(offset[k] + c);
      auto& s = T.by_dim[k][c];
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<int> face = s;
        face.erase(face.begin() + i);
        int fid = int(offset[k - 1] + T.index[k - 1].at(face));
        faces[id].push_back(fid);
        cofaces[fid].push_back(id);
      }
    }
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    std::mt19937_64 rng(opt.seed * 0x9e3779b97f4a7c15ull + std::uint64_t(r));
    std::vector<char> alive(N, 1);
    std::vector<int> count(N);
    std::vector<int> bag;
    for (std::size_t i = 0; i < N; ++i) {
      count[i] = int(cofaces[i].size());
      if (count[i] == 1) bag.push_back(int(i));
    }
    std::size_t left = N;
    while (!bag.empty()) {
      std::size_t pick = r == 0 ? bag.size() - 1 : std::size_t(rng() % bag.size());
      int s = bag[pick];
      bag[pick] = bag.back();
      bag.pop_back();
      if (!alive[s] || count[s] != 1) continue;
      int t = -1;
      for (int c : cofaces[s])
        if (alive[c]) t = c;
      alive[s] = alive[t] = 0;
      left -= 2;
      for (int f : faces[t])
        if (alive[f] && --count[f] == 1) bag.push_back(f);
      for (int f : faces[s])
        if (alive[f] && --count[f] == 1) bag.push_back(f);
    }
    if (left == 1) return long((N - 1) / 2);
  }
  return std::nullopt;
}

Certificate certify_contractible(const FinPoset& P, const CertifyOptions& opt) {
  Certificate c;
  if (P.size() == 0) {
    c.level = CertLevel::NotContractible;
    c.witness_kind = "homology-degree";
    c.witness = -1;
    c.detail = "empty poset";
    return c;
  }
  if (auto m = P.minimum()) {
    c.level = CertLevel::Cone;
    c.witness_kind = "minimum";
    c.witness = *m;
    return c;
  }
  if (auto m = P.maximum()) {
    c.level = CertLevel::Cone;
    c.witness_kind = "maximum";
    c.witness = *m;
    return c;
  }
  auto core = beat_point_core(P);
  auto chains = count_chains(P);
  long matching = chains == UINT64_MAX ? -1 : long((chains - 1) / 2);
  if (core.size() == 1) {
    c.level = CertLevel::Collapsible;
    c.witness_kind = "morse-matching";
    c.witness = matching;
    c.detail = "strong collapse through " + std::to_string(P.size() - 1) + " beat points";
    return c;
  }
  FinPoset Q = P.induced(core);
  if (greedy_collapse(Q, opt)) {
    c.level = CertLevel::Collapsible;
    c.witness_kind = "morse-matching";
    c.witness = matching;
    c.detail = "core of " + std::to_string(core.size()) + " points collapsed greedily";
    return c;
  }
  try {
    auto H = poset_homology(Q);
    if (H.reduced_trivial()) {
      c.level = CertLevel::ZAcyclic;
      c.detail = H.str();
    } else {
      c.level = CertLevel::NotContractible;
      c.witness_kind = "homology-degree";
      c.witness = *H.first_nontrivial_reduced_degree();
      c.detail = H.str();
    }
  } catch (const Error& e) {
    if (e.code() != Errc::BudgetExceeded) throw;
    c.level = CertLevel::Unknown;
    c.detail = e.what();
  }
  return c;
}

Certificate certify_contractible(const FinCategory& C, const CertifyOptions& opt) {
  if (!C.is_loop_free()) throw Error(Errc::HasLoops, "category has nonidentity endomorphisms or isomorphisms");
  if (auto P = C.as_poset()) return certify_contractible(*P, opt);
  Certificate c;
  if (auto x = C.initial_object()) {
    c.level = CertLevel::Cone;
    c.witness_kind = "initial";
    c.witness = *x;
    return c;
  }
  if (auto x = C.terminal_object()) {
    c.level = CertLevel::Cone;
    c.witness_kind = "terminal";
    c.witness = *x;
    return c;
  }
  auto H = homology(nerve_loopfree(C));
  if (H.reduced_trivial()) {
    c.level = CertLevel::ZAcyclic;
  } else {
    c.level = CertLevel::NotContractible;
    c.witness_kind = "homology-degree";
    c.witness = *H.first_nontrivial_reduced_degree();
  }
  c.detail = H.str();
  return c;
}

// ---------------------------------------------------------------- adjunctions

bool check_adjunction(const FinPoset& P, const FinPoset& Q, const std::vector<int>& L, const std::vector<int>& R) {
  check_monotone(P, Q, L);
  check_monotone(Q, P, R);
  for (int x = 0; x < P.size(); ++x)
    for (int y = 0; y < Q.size(); ++y)
      if (Q.leq(L[x], y) != P.leq(x, R[y])) return false;
  return true;
}

bool check_adjunction(const FinCategory& C, const FinCategory& D, const std::vector<int>& L, const Functor& R,
                      const std::vector<int>& unit) {
  check_functor(D, C, R);
  if (int(L.size()) != C.num_objects() || int(unit.size()) != C.num_objects())
    throw Error(Errc::NotFunctorial, "object map has the wrong size");
  for (int x = 0; x < C.num_objects(); ++x) {
    auto& u = C.morphism(unit[x]);
    if (u.src != x || u.tgt != R.on_objects[L[x]]) throw Error(Errc::NotFunctorial, "unit has wrong endpoints");
  }
  for (int x = 0; x < C.num_objects(); ++x)
    for (int y = 0; y < D.num_objects(); ++y) {
      auto& src = D.hom(L[x], y);
      auto& tgt = C.hom(x, R.on_objects[y]);
      if (src.size() != tgt.size()) return false;
      std::vector<int> img;
      for (int g : src) img.push_back(C.compose(unit[x], R.on_morphisms[g]));
      std::sort(img.begin(), img.end());
      if (std::adjacent_find(img.begin(), img.end()) != img.end()) return false;
    }
  return true;
}

bool check_reflection(const FinCategory& C, const std::vector<int>& sub, const std::vector<int>& unit) {
  if (int(unit.size()) != C.num_objects()) throw Error(Errc::NotFunctorial, "unit table has the wrong size");
  std::vector<char> in(C.num_objects(), 0);
  for (int y : sub) in[y] = 1;
  for (int x = 0; x < C.num_objects(); ++x) {
    auto& u = C.morphism(unit[x]);
    if (u.src != x || !in[u.tgt]) return false;
    for (int y : sub) {
      auto& a = C.hom(u.tgt, y);
      auto& b = C.hom(x, y);
      if (a.size() != b.size()) return false;
      std::vector<int> img;
      for (int g : a) img.push_back(C.compose(unit[x], g));
      std::sort(img.begin(), img.end());
      if (std::adjacent_find(img.begin(), img.end()) != img.end()) return false;
    }
  }
  return true;
}

bool check_coreflection(const FinCategory& C, const std::vector<int>& sub, const std::vector<int>& counit) {
  if (int(counit.size()) != C.num_objects()) throw Error(Errc::NotFunctorial, "counit table has the wrong size");
  std::vector<char> in(C.num_objects(), 0);
  for (int y : sub) in[y] = 1;
  for (int x = 0; x < C.num_objects(); ++x) {
    auto& e = C.morphism(counit[x]);
    if (e.tgt != x || !in[e.src]) return false;
    for (int y : sub) {
      auto& a = C.hom(y, e.src);
      auto& b = C.hom(y, x);
      if (a.size() != b.size()) return false;
      std::vector<int> img;
      for (int g : a) img.push_back(C.compose(g, counit[x]));
      std::sort(img.begin(), img.end());
      if (std::adjacent_find(img.begin(), img.end()) != img.end()) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- commas and fibers

FinCategory comma(const FinCategory& A, const FinCategory& B, const FinCategory& C, const Functor& F,
                  const Functor& G, std::vector<CommaObject>* objects) {
  check_functor(A, C, F);
  check_functor(B, C, G);
  std::vector<CommaObject> obj;
  for (int a = 0; a < A.num_objects(); ++a)
    for (int b = 0; b < B.num_objects(); ++b)
      for (int h : C.hom(F.on_objects[a], G.on_objects[b])) obj.push_back({a, b, h});
  std::vector<std::string> names;
  for (auto& o : obj)
    names.push_back("(" + A.object(o.a) + ", " + B.object(o.b) + ", #" + std::to_string(o.h) + ")");
  std::vector<FinCategory::Morphism> mor;
  std::vector<std::pair<int, int>> parts;
  std::map<std::tuple<int, int, int, int>, int> id;  // (src, tgt, p, q)
  std::vector<int> identity(obj.size());
  for (std::size_t i = 0; i < obj.size(); ++i)
    for (std::size_t j = 0; j < obj.size(); ++j)
      for (int p : A.hom(obj[i].a, obj[j].a))
        for (int q : B.hom(obj[i].b, obj[j].b))
          if (C.compose(obj[i].h, G.on_morphisms[q]) == C.compose(F.on_morphisms[p], obj[j].h)) {
            id[{int(i), int(j), p, q}] = int(mor.size());
            if (i == j && A.is_identity(p) && B.is_identity(q)) identity[i] = int(mor.size());
            mor.push_back({int(i), int(j), ""});
            parts.emplace_back(p, q);
          }
  auto compose = [&](int f, int g) {
    return id.at({mor[f].src, mor[g].tgt, A.compose(parts[f].first, parts[g].first),
                  B.compose(parts[f].second, parts[g].second)});
  };
  if (objects) *objects = obj;
  return FinCategory::build(std::move(names), mor, std::move(identity), compose, false);
}

FinPoset comma_poset(const FinPoset& P, const FinPoset& Q, const FinPoset& R, const std::vector<int>& f,
                     const std::vector<int>& g, std::vector<std::pair<int, int>>* objects) {
  check_monotone(P, R, f);
  check_monotone(Q, R, g);
  std::vector<std::pair<int, int>> obj;
  std::vector<std::string> labels;
  for (int a = 0; a < P.size(); ++a)
    for (int b = 0; b < Q.size(); ++b)
      if (R.leq(f[a], g[b])) {
        obj.emplace_back(a, b);
        labels.push_back("(" + P.label(a) + ", " + Q.label(b) + ")");
      }
  auto leq = [&](int i, int j) { return P.leq(obj[i].first, obj[j].first) && Q.leq(obj[i].second, obj[j].second); };
  FinPoset out = FinPoset::from_leq(int(obj.size()), leq, std::move(labels), false);
  if (objects) *objects = std::move(obj);
  return out;
}

std::vector<Certificate> quillen_fibers(const FinPoset& P, const FinPoset& Q, const std::vector<int>& f, Side side,
                                        const CertifyOptions& opt) {
  check_monotone(P, Q, f);
  std::vector<Certificate> out;
  for (int d = 0; d < Q.size(); ++d) {
    std::vector<int> ids;
    for (int x = 0; x < P.size(); ++x)
      if (side == Side::Over ? Q.leq(f[x], d) : Q.leq(d, f[x])) ids.push_back(x);
    out.push_back(certify_contractible(P.induced(ids), opt));
  }
  return out;
}

std::vector<Certificate> quillen_fibers(const FinCategory& C, const FinCategory& D, const Functor& F, Side side,
                                        const CertifyOptions& opt) {
  check_functor(C, D, F);
  auto point = FinCategory::build({"*"}, {{0, 0, "id"}}, {0}, [](int, int) { return 0; }, false);
  std::vector<Certificate> out;
  for (int d = 0; d < D.num_objects(); ++d) {
    Functor G{{d}, {D.identity(d)}};
    FinCategory slice = side == Side::Over ? comma(C, point, D, F, G) : comma(point, C, D, G, F);
    out.push_back(certify_contractible(slice, opt));
  }
  return out;
}

// ---------------------------------------------------------------- pushouts

namespace {

struct Cylinder {
  FinPoset Z;
  std::size_t comma_size = 0;
};

void validate_split(const FinPoset& C, const std::vector<int>& C0, const std::vector<int>& C1) {
  std::vector<int> side(C.size(), -1);
  for (int x : C0) {
    if (x < 0 || x >= C.size() || side[x] != -1) throw Error(Errc::BadPartition, "C0 is not a set of objects");
    side[x] = 0;
  }
  for (int x : C1) {
    if (x < 0 || x >= C.size() || side[x] != -1) throw Error(Errc::BadPartition, "C0 and C1 overlap");
    side[x] = 1;
  }
  for (int x = 0; x < C.size(); ++x)
    if (side[x] < 0) throw Error(Errc::BadPartition, "C0 and C1 do not cover C");
  for (int a : C1)
    for (int b : C0)
      if (C.leq(a, b)) throw Error(Errc::BadPartition, "arrow from C1 to C0");
}

// Non-Hausdorff double mapping cylinder of C0 <- (C0 | C1) -> C1.
Cylinder double_cylinder(const FinPoset& C, const std::vector<int>& C0, const std::vector<int>& C1,
                         const std::vector<int>& drop) {
  std::vector<std::pair<int, int>> M;
  for (int a : C0)
    for (int b : C1)
      if (C.leq(a, b)) M.emplace_back(a, b);
  std::vector<char> dropped(M.size(), 0);
  for (int i : drop)
    if (i >= 0 && std::size_t(i) < M.size()) dropped[i] = 1;
  std::vector<std::pair<int, int>> kept;
  for (std::size_t i = 0; i < M.size(); ++i)
    if (!dropped[i]) kept.push_back(M[i]);
  int k0 = int(C0.size()), km = int(kept.size()), k1 = int(C1.size());
  // Element kinds: 0 = C0, 1 = comma, 2 = C1.
  auto kind = [&](int i) { return i < k0 ? 0 : i < k0 + km ? 1 : 2; };
  auto leq = [&](int i, int j) {
    int ki = kind(i), kj = kind(j);
    if (ki == 0 && kj == 0) return C.leq(C0[i], C0[j]);
    if (ki == 2 && kj == 2) return C.leq(C1[i - k0 - km], C1[j - k0 - km]);
    if (ki == 1) {
      auto& m = kept[i - k0];
      if (kj == 1) {
        auto& n = kept[j - k0];
        return C.leq(m.first, n.first) && C.leq(m.second, n.second);
      }
      if (kj == 0) return C.leq(m.first, C0[j]);
      return C.leq(m.second, C1[j - k0 - km]);
    }
    return false;
  };
  return {FinPoset::from_leq(k0 + km + k1, leq, {}, false), M.size()};
}

long poset_euler(const FinPoset& P) {
  auto ord = P.linear_extension();
  std::vector<long> s(P.size(), 0);
  long total = 0;
  for (int x : ord) {
    long v = 1;
    for (auto y = P.down(x).find_first(); y != Bits::npos; y = P.down(x).find_next(y))
      if (int(y) != x) v -= s[y];
    s[x] = v;
    total += v;
  }
  return total;
}

}  // namespace

PushoutResult pushout_check(const FinPoset& C, const std::vector<int>& C0, const std::vector<int>& C1,
                            const std::vector<int>& drop) {
  validate_split(C, C0, C1);
  auto cyl = double_cylinder(C, C0, C1, drop);
  PushoutResult r;
  r.whole = poset_homology(C);
  r.cylinder = poset_homology(cyl.Z);
  r.comma_size = cyl.comma_size;
  r.holds = r.whole == r.cylinder;
  return r;
}

std::optional<int> find_pushout_mutation(const FinPoset& C, const std::vector<int>& C0, const std::vector<int>& C1) {
  validate_split(C, C0, C1);
  auto base = double_cylinder(C, C0, C1, {});
  long e = poset_euler(base.Z);
  for (std::size_t i = 0; i < base.comma_size; ++i)
    if (poset_euler(double_cylinder(C, C0, C1, {int(i)}).Z) != e) return int(i);
  return std::nullopt;
}

// ---------------------------------------------------------------- strong composability

bool RankedCategory::level_nonbasic(int f) const {
  auto& m = cat->morphism(f);
  return rank[m.src] == rank[m.tgt] && !level_basic(f);
}

namespace {

void validate_sequence(const RankedCategory& R, const std::vector<int>& seq, int beta) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    auto& m = R.cat->morphism(seq[i]);
    if (i + 1 < seq.size() && m.tgt != R.cat->morphism(seq[i + 1]).src)
      throw Error(Errc::MalformedInput, "sequence is not composable");
    if (R.rank[m.src] > beta || R.rank[m.tgt] > beta) throw Error(Errc::MalformedInput, "morphism above rank beta");
    if (R.rank[m.src] == beta && R.level_nonbasic(seq[i]))
      throw Error(Errc::ForbiddenEdge, "level nonbasic morphism at rank beta");
  }
}

}  // namespace

Composability strong_composability(const RankedCategory& R, const std::vector<int>& seq, int beta) {
  validate_sequence(R, seq, beta);
  Composability out;
  if (seq.empty()) return out;
  std::vector<int> obj{R.cat->morphism(seq[0]).src};
  for (int f : seq) obj.push_back(R.cat->morphism(f).tgt);
  int idx = R.rank[obj[0]] == beta ? 0 : 1;
  bool pending_even = false;
  for (std::size_t t = 0; t + 1 < obj.size(); ++t) {
    bool a = R.rank[obj[t]] == beta, b = R.rank[obj[t + 1]] == beta;
    if (a == b) continue;
    out.transitions.push_back(int(t));
    if (idx % 2 == 1 && pending_even) out.strongly_composable = false;
    pending_even = idx % 2 == 0;
    ++idx;
  }
  return out;
}

bool strongly_composable_brute(const RankedCategory& R, const std::vector<int>& seq, int beta) {
  validate_sequence(R, seq, beta);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int c = seq[i];
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      c = R.cat->compose(c, seq[j]);
      auto& m = R.cat->morphism(c);
      if (R.rank[m.src] == beta && R.rank[m.tgt] == beta && !R.level_basic(c)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- export

std::string export_poset(const FinPoset& P) {
  std::ostringstream os;
  os << "poset " << P.size() << "\n";
  for (int x = 0; x < P.size(); ++x) os << "obj " << x << " " << P.label(x) << "\n";
  for (int x = 0; x < P.size(); ++x)
    for (auto y = P.up(x).find_first(); y != Bits::npos; y = P.up(x).find_next(y))
      if (int(y) != x) os << "rel " << x << " " << y << "\n";
  return os.str();
}

std::string export_category(const FinCategory& C) {
  std::ostringstream os;
  os << "category " << C.num_objects() << " " << C.num_morphisms() << "\n";
  for (int x = 0; x < C.num_objects(); ++x) os << "obj " << x << " " << C.object(x) << "\n";
  for (int f = 0; f < C.num_morphisms(); ++f) {
    auto& m = C.morphism(f);
    os << "mor " << f << " " << m.src << " " << m.tgt;
    if (C.is_identity(f)) os << " id";
    else if (!m.label.empty()) os << " " << m.label;
    os << "\n";
  }
  os << "composition\n";
  for (int f = 0; f < C.num_morphisms(); ++f)
    for (int x = 0; x < C.num_objects(); ++x)
      for (int g : C.hom(C.morphism(f).tgt, x)) os << "comp " << f << " " << g << " " << C.compose(f, g) << "\n";
  return os.str();
}

std::string export_complex(const ChainComplex& K) {
  std::ostringstream os;
  for (std::size_t k = 0; k < K.dims.size(); ++k) os << "dim " << k << " " << K.dims[k] << "\n";
  for (std::size_t k = 1; k < K.boundary.size(); ++k) {
    auto& B = K.boundary[k];
    os << "boundary " << k << " " << B.rows << " " << B.cols << "\n";
    for (int c = 0; c < B.cols; ++c)
      for (auto& [r, v] : B.columns[c]) os << r << " " << c << " " << v << "\n";
  }
  return os.str();
}

}  // namespace coxtop
