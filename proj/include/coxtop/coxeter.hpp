#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "coxtop/surd.hpp"

namespace coxtop {

using GenSet = std::uint32_t;  // bitmask over generator indices
constexpr int kInfinity = 0;   // bond value standing for m = infinity
constexpr int kMaxRank = 16;

inline bool has_gen(GenSet J, int s) { return (J >> s) & 1u; }
inline int popcount(GenSet J) { return __builtin_popcount(J); }

// Square matrix over Z[sqrt2, sqrt3], row-major.
struct Mat {
  int n = 0;
  std::vector<Surd> e;
  Mat() = default;
  explicit Mat(int n_) : n(n_), e(std::size_t(n_) * n_) {}
  static Mat identity(int n);
  Surd& at(int i, int j) { return e[std::size_t(i) * n + j]; }
  const Surd& at(int i, int j) const { return e[std::size_t(i) * n + j]; }
  friend bool operator==(const Mat&, const Mat&) = default;
};
Mat operator*(const Mat& x, const Mat& y);

// Coxeter matrix: m[s][t], 1 on the diagonal, kInfinity for an infinite bond.
struct CoxeterMatrix {
  std::vector<std::vector<int>> m;
  std::vector<std::string> names;  // optional; defaults to g0, g1, ...
  std::string label;
};

class CoxeterSystem;
using SystemPtr = std::shared_ptr<const CoxeterSystem>;

class CoxeterSystem {
 public:
  int rank() const { return rank_; }
  GenSet all() const { return rank_ == 32 ? ~0u : ((1u << rank_) - 1u); }
  int bond(int s, int t) const { return m_[s][t]; }
  const std::vector<std::vector<int>>& matrix() const { return m_; }
  const std::string& gen_name(int s) const { return names_[s]; }
  const std::vector<std::string>& gen_names() const { return names_; }
  const std::string& label() const { return label_; }
  // 2 B(alpha_s, alpha_t) = -2 cos(pi / m_st)
  const Surd& cartan(int s, int t) const { return cartan_[std::size_t(s) * rank_ + t]; }
  const Mat& rep(int s) const { return rep_[s]; }
  bool is_finite_type(GenSet J) const { return finite_[J]; }
  int find_gen(const std::string& name) const;  // -1 if absent
  std::string word_str(const std::vector<int>& word) const;

 private:
  friend SystemPtr build_system(const CoxeterMatrix&);
  int rank_ = 0;
  std::vector<std::vector<int>> m_;
  std::vector<std::string> names_;
  std::string label_;
  std::vector<Surd> cartan_;
  std::vector<Mat> rep_;
  std::vector<bool> finite_;  // indexed by subset bitmask
};

SystemPtr build_system(const CoxeterMatrix& matrix);
SystemPtr preset(const std::string& name);
const std::vector<std::string>& preset_names();

// Element of W, keyed by the lexicographically smallest reduced word.
class GroupElement {
 public:
  GroupElement() = default;
  static GroupElement identity(const SystemPtr& sys);
  static GroupElement generator(const SystemPtr& sys, int s);
  static GroupElement from_word(const SystemPtr& sys, const std::vector<int>& word);

  bool valid() const { return bool(p_); }
  const SystemPtr& system() const { return p_->sys; }
  const std::vector<int>& word() const { return p_->word; }
  int length() const { return int(p_->word.size()); }
  bool is_identity() const { return p_->word.empty(); }
  const Mat& matrix() const { return p_->mat; }
  const Mat& inverse_matrix() const { return p_->inv; }

  bool has_right_descent(int s) const;  // l(ws) < l(w)
  bool has_left_descent(int s) const;   // l(sw) < l(w)
  GenSet right_descents() const;
  GenSet left_descents() const;
  GroupElement mul_gen(int s) const;  // w s
  GroupElement gen_mul(int s) const;  // s w

  std::string str() const;
  std::size_t hash() const;

  friend bool operator==(const GroupElement& x, const GroupElement& y) {
    return x.p_ == y.p_ || (x.p_->sys == y.p_->sys && x.p_->word == y.p_->word);
  }
  // Arbitrary but fixed total order (canonical word), for use in containers.
  friend bool operator<(const GroupElement& x, const GroupElement& y) { return x.p_->word < y.p_->word; }

 private:
  struct Impl {
    SystemPtr sys;
    std::vector<int> word;
    Mat mat, inv;
  };
  static GroupElement from_mats(const SystemPtr& sys, Mat mat, Mat inv);
  std::shared_ptr<const Impl> p_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& w) const { return w.hash(); }
};

void require_same_system(const GroupElement& u, const GroupElement& v);

GroupElement multiply(const GroupElement& u, const GroupElement& v);
GroupElement inverse(const GroupElement& u);
inline int length(const GroupElement& u) { return u.length(); }
bool bruhat_leq(const GroupElement& u, const GroupElement& w);
bool prefix_leq(const GroupElement& u, const GroupElement& w);
// Greatest common prefix in the prefix (weak) order.
GroupElement prefix_meet(const GroupElement& u, const GroupElement& v);

GroupElement demazure_product(const SystemPtr& sys, const std::vector<GroupElement>& seq);
GroupElement demazure_mul(const GroupElement& u, const GroupElement& v);

GenSet support(const GroupElement& w);
bool is_finite_type(const CoxeterSystem& sys, GenSet J);
GroupElement longest_element(const SystemPtr& sys, GenSet J);

// Order-A: length descending, then canonical word ascending.
bool order_a_less(const GroupElement& u, const GroupElement& v);
// Order-B: length ascending, then canonical word ascending (refines Bruhat).
bool order_b_less(const GroupElement& u, const GroupElement& v);

// Root vectors live in the span of the simple roots.
using Vec = std::vector<Surd>;
Vec apply(const Mat& m, const Vec& v);
int root_sign(const Vec& root);  // sign of a (positive or negative) root

struct Wall {
  GroupElement reflection;
  Vec root;  // positive root whose reflection is `reflection`
  friend bool operator==(const Wall& x, const Wall& y) { return x.reflection == y.reflection; }
};

Wall wall(const GroupElement& w, int s);
bool separates(const Wall& h, const GroupElement& w1, const GroupElement& w2);
std::vector<GroupElement> walk(const SystemPtr& sys, const std::vector<GroupElement>& seq);

struct DeletionIndices {
  int j = 0;   // 1-based: (s_1..s_j) is the longest reduced prefix
  int jp = 0;  // 1-based: s_jp ... s_j = s_{jp+1} ... s_{j+1}
};
DeletionIndices deletion_indices(const SystemPtr& sys, const std::vector<int>& word);

GroupElement max_prefix_off_wall(const GroupElement& w1, const Wall& h, const GroupElement& w2);

struct CosetSimplex {
  GenSet subset = 0;
  GroupElement rep;  // minimal length element of rep W_subset
  friend bool operator==(const CosetSimplex& x, const CosetSimplex& y) {
    return x.subset == y.subset && x.rep == y.rep;
  }
};
CosetSimplex coset_simplex(const GroupElement& w, GenSet J);
// The simplex is a face of the chamber of w iff w lies in the coset.
bool is_face_of_chamber(const CosetSimplex& f, const GroupElement& w);

// All elements of W_J up to the given length, sorted by order-B.
std::vector<GroupElement> enumerate_elements(const SystemPtr& sys, int max_length, GenSet J,
                                             std::size_t cap = 2000000);

}  // namespace coxtop
