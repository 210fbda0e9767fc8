#include "coxtop/coxeter.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_set>

#include "coxtop/errors.hpp"

namespace coxtop {

Mat Mat::identity(int n) {
  Mat m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = Surd(1);
  return m;
}

Mat operator*(const Mat& x, const Mat& y) {
  Mat r(x.n);
  for (int i = 0; i < x.n; ++i)
    for (int k = 0; k < x.n; ++k) {
      const Surd& xik = x.at(i, k);
      if (xik.is_zero()) continue;
      for (int j = 0; j < x.n; ++j)
        if (!y.at(k, j).is_zero()) r.at(i, j) += xik * y.at(k, j);
    }
  return r;
}

namespace {

Surd cartan_entry(int m) {
  switch (m) {
    case 1: return Surd(2);
    case 2: return Surd(0);
    case 3: return Surd(-1);
    case 4: return Surd(0, -1);
    case 6: return Surd(0, 0, -1);
    case kInfinity: return Surd(-2);
  }
  throw Error(Errc::UnsupportedBond, "bond " + std::to_string(m));
}

// Determinant by Laplace expansion memoized over column subsets.
Surd determinant(const std::vector<std::vector<Surd>>& a) {
  int n = int(a.size());
  if (n == 0) return Surd(1);
  std::vector<Surd> f(std::size_t(1) << n);
  std::vector<bool> done(f.size(), false);
  f[0] = Surd(1);
  done[0] = true;
  std::function<Surd(std::uint32_t)> rec = [&](std::uint32_t S) -> Surd {
    if (done[S]) return f[S];
    int row = __builtin_popcount(S) - 1;
    Surd acc;
    for (int j = 0; j < n; ++j) {
      if (!((S >> j) & 1u)) continue;
      // sign from the position of j among the chosen columns
      Surd term = a[row][j] * rec(S & ~(1u << j));
      int rank_after = __builtin_popcount(S & ~((2u << j) - 1u));
      if (rank_after % 2) acc -= term; else acc += term;
    }
    done[S] = true;
    return f[S] = acc;
  };
  return rec((n == 32) ? ~0u : ((1u << n) - 1u));
}

bool positive_definite(const CoxeterSystem& sys, GenSet J) {
  std::vector<int> idx;
  for (int s = 0; s < sys.rank(); ++s)
    if (has_gen(J, s)) idx.push_back(s);
  for (std::size_t k = 1; k <= idx.size(); ++k) {
    std::vector<std::vector<Surd>> a(k, std::vector<Surd>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a[i][j] = sys.cartan(idx[i], idx[j]);
    if (determinant(a).sign() <= 0) return false;
  }
  return true;
}

// Sign of column s of m, which is always a root.
int column_sign(const Mat& m, int s) {
  for (int i = 0; i < m.n; ++i) {
    int sg = m.at(i, s).sign();
    if (sg) return sg;
  }
  return 0;
}

// m * sigma_s: column t becomes col_t - A_st col_s
Mat right_reflect(const CoxeterSystem& sys, const Mat& m, int s) {
  Mat r = m;
  for (int t = 0; t < m.n; ++t) {
    const Surd& A = sys.cartan(s, t);
    if (A.is_zero()) continue;
    for (int i = 0; i < m.n; ++i) r.at(i, t) -= A * m.at(i, s);
  }
  return r;
}

// sigma_s * m: row s becomes row_s - sum_t A_st row_t
Mat left_reflect(const CoxeterSystem& sys, const Mat& m, int s) {
  Mat r = m;
  for (int j = 0; j < m.n; ++j) {
    Surd acc;
    for (int t = 0; t < m.n; ++t) {
      const Surd& A = sys.cartan(s, t);
      if (!A.is_zero()) acc += A * m.at(t, j);
    }
    r.at(s, j) = m.at(s, j) - acc;
  }
  return r;
}

}  // namespace

int CoxeterSystem::find_gen(const std::string& name) const {
  for (int s = 0; s < rank_; ++s)
    if (names_[s] == name) return s;
  return -1;
}

std::string CoxeterSystem::word_str(const std::vector<int>& word) const {
  if (word.empty()) return "1";
  std::string out;
  bool spaced = false;
  for (auto& n : names_) spaced |= n.size() > 1;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (spaced && i) out += ' ';
    out += names_[word[i]];
  }
  return out;
}

SystemPtr build_system(const CoxeterMatrix& cm) {
  int n = int(cm.m.size());
  if (n > kMaxRank) throw Error(Errc::MalformedMatrix, "rank above " + std::to_string(kMaxRank));
  for (auto& row : cm.m)
    if (int(row.size()) != n) throw Error(Errc::MalformedMatrix, "matrix not square");
  for (int s = 0; s < n; ++s) {
    if (cm.m[s][s] != 1) throw Error(Errc::MalformedMatrix, "diagonal entry must be 1");
    for (int t = 0; t < n; ++t) {
      if (cm.m[s][t] != cm.m[t][s]) throw Error(Errc::MalformedMatrix, "matrix not symmetric");
      int v = cm.m[s][t];
      if (s != t && v != 2 && v != 3 && v != 4 && v != 6 && v != kInfinity)
        throw Error(Errc::UnsupportedBond, "m = " + std::to_string(v));
    }
  }
  auto sys = std::make_shared<CoxeterSystem>();
  sys->rank_ = n;
  sys->m_ = cm.m;
  sys->label_ = cm.label;
  sys->names_ = cm.names;
  if (sys->names_.empty())
    for (int s = 0; s < n; ++s) sys->names_.push_back("g" + std::to_string(s));
  if (int(sys->names_.size()) != n) throw Error(Errc::MalformedMatrix, "wrong number of generator names");
  sys->cartan_.resize(std::size_t(n) * n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) sys->cartan_[std::size_t(s) * n + t] = cartan_entry(cm.m[s][t]);
  for (int s = 0; s < n; ++s) sys->rep_.push_back(right_reflect(*sys, Mat::identity(n), s));
  sys->finite_.assign(std::size_t(1) << n, false);
  for (std::uint32_t J = 0; J < (1u << n); ++J) sys->finite_[J] = positive_definite(*sys, J);
  return sys;
}

namespace {

CoxeterMatrix dihedral(int m, std::vector<std::string> names, std::string label) {
  return {{{1, m}, {m, 1}}, std::move(names), std::move(label)};
}

CoxeterMatrix rank3(int m01, int m12, int m02, std::string label) {
  return {{{1, m01, m02}, {m01, 1, m12}, {m02, m12, 1}}, {"s0", "s1", "s2"}, std::move(label)};
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"A1", "A2", "B2", "G2", "A1~", "A2~", "B2~", "C2~", "G2~"};
  return names;
}

SystemPtr preset(const std::string& name) {
  CoxeterMatrix cm;
  if (name == "A1") cm = {{{1}}, {"s"}, "A1"};
  else if (name == "A2") cm = dihedral(3, {"s", "t"}, "A2");
  else if (name == "B2") cm = dihedral(4, {"s", "t"}, "B2");
  else if (name == "G2") cm = dihedral(6, {"s", "t"}, "G2");
  else if (name == "A1~") cm = dihedral(kInfinity, {"s0", "s1"}, "A1~");
  else if (name == "A2~") cm = rank3(3, 3, 3, "A2~");
  // B2~ and C2~ have the same Coxeter diagram.
  else if (name == "B2~" || name == "C2~") cm = rank3(4, 4, 2, name);
  else if (name == "G2~") cm = rank3(3, 6, 2, "G2~");
  else throw Error(Errc::ConfigError, "unknown preset " + name);
  return build_system(cm);
}

GroupElement GroupElement::from_mats(const SystemPtr& sys, Mat mat, Mat inv) {
  auto impl = std::make_shared<Impl>();
  impl->sys = sys;
  // Strip the smallest left descent until nothing is left.
  Mat cur = inv;
  for (;;) {
    int found = -1;
    for (int s = 0; s < sys->rank(); ++s)
      if (column_sign(cur, s) < 0) { found = s; break; }
    if (found < 0) break;
    impl->word.push_back(found);
    cur = right_reflect(*sys, cur, found);
  }
  impl->mat = std::move(mat);
  impl->inv = std::move(inv);
  GroupElement g;
  g.p_ = std::move(impl);
  return g;
}

GroupElement GroupElement::identity(const SystemPtr& sys) {
  return from_mats(sys, Mat::identity(sys->rank()), Mat::identity(sys->rank()));
}

GroupElement GroupElement::generator(const SystemPtr& sys, int s) {
  if (s < 0 || s >= sys->rank()) throw Error(Errc::IndexOutOfRange, "generator index");
  return from_mats(sys, sys->rep(s), sys->rep(s));
}

GroupElement GroupElement::from_word(const SystemPtr& sys, const std::vector<int>& word) {
  Mat m = Mat::identity(sys->rank()), inv = Mat::identity(sys->rank());
  for (int s : word) {
    if (s < 0 || s >= sys->rank()) throw Error(Errc::IndexOutOfRange, "generator index");
    m = right_reflect(*sys, m, s);
    inv = left_reflect(*sys, inv, s);
  }
  return from_mats(sys, std::move(m), std::move(inv));
}

bool GroupElement::has_right_descent(int s) const { return column_sign(p_->mat, s) < 0; }
bool GroupElement::has_left_descent(int s) const { return column_sign(p_->inv, s) < 0; }

GenSet GroupElement::right_descents() const {
  GenSet r = 0;
  for (int s = 0; s < p_->sys->rank(); ++s)
    if (has_right_descent(s)) r |= 1u << s;
  return r;
}

GenSet GroupElement::left_descents() const {
  GenSet r = 0;
  for (int s = 0; s < p_->sys->rank(); ++s)
    if (has_left_descent(s)) r |= 1u << s;
  return r;
}

GroupElement GroupElement::mul_gen(int s) const {
  const auto& sys = *p_->sys;
  return from_mats(p_->sys, right_reflect(sys, p_->mat, s), left_reflect(sys, p_->inv, s));
}

GroupElement GroupElement::gen_mul(int s) const {
  const auto& sys = *p_->sys;
  return from_mats(p_->sys, left_reflect(sys, p_->mat, s), right_reflect(sys, p_->inv, s));
}

std::string GroupElement::str() const { return p_->sys->word_str(p_->word); }

std::size_t GroupElement::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (int s : p_->word) h = (h ^ std::size_t(s + 1)) * 1099511628211ull;
  return h;
}

void require_same_system(const GroupElement& u, const GroupElement& v) {
  if (u.system() != v.system()) throw Error(Errc::SystemMismatch, "elements from different systems");
}

GroupElement multiply(const GroupElement& u, const GroupElement& v) {
  require_same_system(u, v);
  GroupElement r = u;
  for (int s : v.word()) r = r.mul_gen(s);
  return r;
}

GroupElement inverse(const GroupElement& u) {
  GroupElement r = GroupElement::identity(u.system());
  for (auto it = u.word().rbegin(); it != u.word().rend(); ++it) r = r.mul_gen(*it);
  return r;
}

bool bruhat_leq(const GroupElement& u, const GroupElement& w) {
  require_same_system(u, w);
  // For s a right descent of w: u <= w iff min(u, us) <= ws.
  GroupElement a = u, b = w;
  while (a.length() <= b.length()) {
    if (b.is_identity()) return a.is_identity();
    if (a.length() == b.length()) return a == b;
    int s = b.word().back();
    if (a.has_right_descent(s)) a = a.mul_gen(s);
    b = b.mul_gen(s);
  }
  return false;
}

bool prefix_leq(const GroupElement& u, const GroupElement& w) {
  require_same_system(u, w);
  if (u.length() > w.length()) return false;
  return u.length() + multiply(inverse(u), w).length() == w.length();
}

GroupElement prefix_meet(const GroupElement& u, const GroupElement& v) {
  require_same_system(u, v);
  GroupElement g = GroupElement::identity(u.system()), a = u, b = v;
  for (;;) {
    GenSet common = a.left_descents() & b.left_descents();
    if (!common) return g;
    int s = __builtin_ctz(common);
    g = g.mul_gen(s);
    a = a.gen_mul(s);
    b = b.gen_mul(s);
  }
}

GroupElement demazure_mul(const GroupElement& u, const GroupElement& v) {
  require_same_system(u, v);
  GroupElement r = u;
  for (int s : v.word())
    if (!r.has_right_descent(s)) r = r.mul_gen(s);
  return r;
}

GroupElement demazure_product(const SystemPtr& sys, const std::vector<GroupElement>& seq) {
  GroupElement r = GroupElement::identity(sys);
  for (auto& w : seq) {
    if (w.system() != sys) throw Error(Errc::SystemMismatch, "demazure_product");
    r = demazure_mul(r, w);
  }
  return r;
}

GenSet support(const GroupElement& w) {
  GenSet J = 0;
  for (int s : w.word()) J |= 1u << s;
  return J;
}

bool is_finite_type(const CoxeterSystem& sys, GenSet J) { return sys.is_finite_type(J); }

GroupElement longest_element(const SystemPtr& sys, GenSet J) {
  if (!sys->is_finite_type(J)) throw Error(Errc::NotFiniteType, "longest_element on infinite type subset");
  GroupElement w = GroupElement::identity(sys);
  for (;;) {
    GenSet asc = J & ~w.right_descents();
    if (!asc) return w;
    w = w.mul_gen(__builtin_ctz(asc));
  }
}

bool order_a_less(const GroupElement& u, const GroupElement& v) {
  if (u.length() != v.length()) return u.length() > v.length();
  return u.word() < v.word();
}

bool order_b_less(const GroupElement& u, const GroupElement& v) {
  if (u.length() != v.length()) return u.length() < v.length();
  return u.word() < v.word();
}

Vec apply(const Mat& m, const Vec& v) {
  Vec r(m.n);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (!v[j].is_zero() && !m.at(i, j).is_zero()) r[i] += m.at(i, j) * v[j];
  return r;
}

int root_sign(const Vec& root) {
  for (auto& x : root) {
    int s = x.sign();
    if (s) return s;
  }
  return 0;
}

Wall wall(const GroupElement& w, int s) {
  Wall h;
  h.reflection = multiply(w.mul_gen(s), inverse(w));
  Vec root(w.system()->rank());
  for (int i = 0; i < w.system()->rank(); ++i) root[i] = w.matrix().at(i, s);
  if (root_sign(root) < 0)
    for (auto& x : root) x = -x;
  h.root = std::move(root);
  return h;
}

bool separates(const Wall& h, const GroupElement& w1, const GroupElement& w2) {
  require_same_system(w1, w2);
  int a = root_sign(apply(w1.inverse_matrix(), h.root));
  int b = root_sign(apply(w2.inverse_matrix(), h.root));
  return a != b;
}

std::vector<GroupElement> walk(const SystemPtr& sys, const std::vector<GroupElement>& seq) {
  std::vector<GroupElement> out{GroupElement::identity(sys)};
  for (auto& w : seq) out.push_back(multiply(out.back(), w));
  return out;
}

DeletionIndices deletion_indices(const SystemPtr& sys, const std::vector<int>& word) {
  std::vector<GroupElement> prefix{GroupElement::identity(sys)};
  int n = int(word.size());
  int j = -1;
  for (int k = 0; k < n; ++k) {
    GroupElement next = prefix.back().mul_gen(word[k]);
    if (next.length() < prefix.back().length() + 1) { j = k; break; }
    prefix.push_back(next);
  }
  if (j < 0) throw Error(Errc::ReducedInput, "deletion_indices on a reduced word");
  // (s_1..s_j) reduced, s_{j+1} crosses back over the wall h.
  Wall h = wall(prefix[j], word[j]);
  for (int k = 1; k <= j; ++k)
    if (wall(prefix[k - 1], word[k - 1]) == h) return {j, k};
  throw Error(Errc::HypothesisFailed, "no crossing of the doubled wall found");
}

GroupElement max_prefix_off_wall(const GroupElement& w1, const Wall& h, const GroupElement& w2) {
  require_same_system(w1, w2);
  if (!prefix_leq(w1, w2)) throw Error(Errc::HypothesisFailed, "w1 is not a prefix of w2");
  for (int s = 0; s < w2.system()->rank(); ++s) {
    if (!w2.has_right_descent(s)) continue;
    if (wall(w2, s) == h) return prefix_meet(w1, w2.mul_gen(s));
  }
  throw Error(Errc::HypothesisFailed, "h is not a wall of w2 separating it from 1");
}

CosetSimplex coset_simplex(const GroupElement& w, GenSet J) {
  GroupElement r = w;
  for (;;) {
    GenSet d = r.right_descents() & J;
    if (!d) break;
    r = r.mul_gen(__builtin_ctz(d));
  }
  return {J, r};
}

bool is_face_of_chamber(const CosetSimplex& f, const GroupElement& w) {
  return coset_simplex(w, f.subset).rep == f.rep;
}

std::vector<GroupElement> enumerate_elements(const SystemPtr& sys, int max_length, GenSet J, std::size_t cap) {
  std::vector<GroupElement> out{GroupElement::identity(sys)};
  std::unordered_set<GroupElement, GroupElementHash> seen(out.begin(), out.end());
  std::size_t frontier_begin = 0;
  for (int len = 1; len <= max_length; ++len) {
    std::size_t frontier_end = out.size();
    for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
      for (int s = 0; s < sys->rank(); ++s) {
        if (!has_gen(J, s) || out[i].has_right_descent(s)) continue;
        GroupElement n = out[i].mul_gen(s);
        if (seen.insert(n).second) {
          out.push_back(n);
          if (out.size() > cap) throw Error(Errc::BudgetExceeded, "element enumeration cap");
        }
      }
    }
    frontier_begin = frontier_end;
  }
  std::sort(out.begin(), out.end(), order_b_less);
  return out;
}

}  // namespace coxtop
