#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace coxtop {

using Bits = boost::dynamic_bitset<>;

class FinPoset {
 public:
  FinPoset() = default;
  // Builds the poset from a relation; `check` validates the partial order axioms.
  static FinPoset from_leq(int n, const std::function<bool(int, int)>& leq, std::vector<std::string> labels = {},
                           bool check = true);

  int size() const { return int(up_.size()); }
  bool leq(int x, int y) const { return up_[x][y]; }
  bool less(int x, int y) const { return x != y && up_[x][y]; }
  const Bits& up(int x) const { return up_[x]; }      // {y : x <= y}
  const Bits& down(int x) const { return down_[x]; }  // {y : y <= x}
  const std::string& label(int x) const { return labels_[x]; }
  const std::vector<std::string>& labels() const { return labels_; }

  FinPoset induced(const std::vector<int>& ids) const;
  FinPoset opposite() const;
  std::optional<int> minimum() const;
  std::optional<int> maximum() const;
  std::vector<std::pair<int, int>> covers() const;
  // A linear extension: x < y implies x comes first.
  std::vector<int> linear_extension() const;
  friend bool operator==(const FinPoset&, const FinPoset&) = default;

 private:
  std::vector<Bits> up_, down_;
  std::vector<std::string> labels_;
};

// Finite category with a tabulated composition. compose(f, g) is "g after f".
class FinCategory {
 public:
  struct Morphism {
    int src = 0, tgt = 0;
    std::string label;
  };

  // `compose` is only queried on composable pairs and must return a morphism id.
  static FinCategory build(std::vector<std::string> objects, std::vector<Morphism> morphisms, std::vector<int> identity,
                           const std::function<int(int, int)>& compose, bool check = true);
  static FinCategory from_poset(const FinPoset& P);

  int num_objects() const { return int(objects_.size()); }
  int num_morphisms() const { return int(morphisms_.size()); }
  const std::string& object(int x) const { return objects_[x]; }
  const Morphism& morphism(int f) const { return morphisms_[f]; }
  int identity(int x) const { return identity_[x]; }
  bool is_identity(int f) const { return identity_[morphisms_[f].src] == f; }
  const std::vector<int>& hom(int x, int y) const;
  int compose(int f, int g) const;

  bool is_loop_free() const;  // no nonidentity endomorphisms
  bool is_poset() const;      // thin and loop-free
  std::optional<FinPoset> as_poset() const;
  std::optional<int> initial_object() const;
  std::optional<int> terminal_object() const;
  FinCategory full_subcategory(const std::vector<int>& objs) const;

 private:
  std::vector<std::string> objects_;
  std::vector<Morphism> morphisms_;
  std::vector<int> identity_;
  std::unordered_map<std::uint64_t, std::vector<int>> hom_;  // keyed by (src, tgt)
  std::unordered_map<std::uint64_t, int> comp_;
};

struct Functor {
  std::vector<int> on_objects;
  std::vector<int> on_morphisms;
};
// Validates identities, endpoints and composites; throws NotFunctorial.
void check_functor(const FinCategory& C, const FinCategory& D, const Functor& F);
// Throws NotFunctorial unless x <= y implies f(x) <= f(y).
void check_monotone(const FinPoset& P, const FinPoset& Q, const std::vector<int>& f);

struct SparseMatrix {
  int rows = 0, cols = 0;
  std::vector<std::vector<std::pair<int, std::int64_t>>> columns;  // sorted by row
};

// boundary[k] maps C_k to C_{k-1}; boundary[0] is the zero map to nothing.
struct ChainComplex {
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix> boundary;
};

struct HomologyProfile {
  std::vector<long> betti;
  std::vector<std::vector<std::int64_t>> torsion;  // invariant factors > 1 per degree
  bool empty = false;
  bool reduced_trivial() const;
  std::optional<int> first_nontrivial_reduced_degree() const;  // -1 for the empty space
  long euler() const;
  std::string str() const;
  friend bool operator==(const HomologyProfile&, const HomologyProfile&) = default;
};

ChainComplex order_complex(const FinPoset& P);
ChainComplex nerve_loopfree(const FinCategory& C);
HomologyProfile homology(const ChainComplex& K);
HomologyProfile poset_homology(const FinPoset& P);
// Number of nonempty chains, i.e. simplices of the order complex.
std::uint64_t count_chains(const FinPoset& P);

// Smith invariant factors of an integer matrix (all nonzero diagonal entries).
std::vector<std::int64_t> invariant_factors(SparseMatrix M);

enum class CertLevel { Cone, Collapsible, ZAcyclic, NotContractible, Unknown };
const char* cert_level_name(CertLevel c);

struct Certificate {
  CertLevel level = CertLevel::Unknown;
  std::string witness_kind;  // initial, terminal, morse-matching, homology-degree, ...
  long witness = 0;
  std::string detail;
  bool contractible() const { return level == CertLevel::Cone || level == CertLevel::Collapsible; }
};

struct CertifyOptions {
  std::uint64_t seed = 0;
  int restarts = 32;
};

// Removes beat points until none remain; returns the surviving ids (the core).
std::vector<int> beat_point_core(const FinPoset& P);
// Greedy elementary collapses of the order complex. Returns the matching size on success.
std::optional<long> greedy_collapse(const FinPoset& P, const CertifyOptions& opt);

Certificate certify_contractible(const FinPoset& P, const CertifyOptions& opt = {});
Certificate certify_contractible(const FinCategory& C, const CertifyOptions& opt = {});

// L(x) <= y iff x <= R(y) for all x in P, y in Q.
bool check_adjunction(const FinPoset& P, const FinPoset& Q, const std::vector<int>& L, const std::vector<int>& R);
// L : C -> D on objects, R : D -> C a functor, unit[x] : x -> R(L(x)). Checks that
// g |-> R(g) . unit[x] is a bijection Hom_D(Lx, y) -> Hom_C(x, Ry) for all x, y.
bool check_adjunction(const FinCategory& C, const FinCategory& D, const std::vector<int>& L, const Functor& R,
                      const std::vector<int>& unit);
// Full subcategory `sub` is reflective: unit[x] : x -> r(x) in sub with Hom(r(x), y) = Hom(x, y) for y in sub.
bool check_reflection(const FinCategory& C, const std::vector<int>& sub, const std::vector<int>& unit);
// Full subcategory `sub` is coreflective: counit[x] : c(x) -> x with Hom(y, c(x)) = Hom(y, x) for y in sub.
bool check_coreflection(const FinCategory& C, const std::vector<int>& sub, const std::vector<int>& counit);

// Comma category (F | G). Objects are (a, b, h : F a -> G b).
struct CommaObject {
  int a = 0, b = 0, h = 0;
};
FinCategory comma(const FinCategory& A, const FinCategory& B, const FinCategory& C, const Functor& F,
                  const Functor& G, std::vector<CommaObject>* objects = nullptr);
// Poset comma of order-preserving maps f : P -> R and g : Q -> R.
FinPoset comma_poset(const FinPoset& P, const FinPoset& Q, const FinPoset& R, const std::vector<int>& f,
                     const std::vector<int>& g, std::vector<std::pair<int, int>>* objects = nullptr);

enum class Side { Over, Under };  // (F | d) or (d | F)
std::vector<Certificate> quillen_fibers(const FinPoset& P, const FinPoset& Q, const std::vector<int>& f, Side side,
                                        const CertifyOptions& opt = {});
std::vector<Certificate> quillen_fibers(const FinCategory& C, const FinCategory& D, const Functor& F, Side side,
                                        const CertifyOptions& opt = {});

struct PushoutResult {
  bool holds = false;
  HomologyProfile whole, cylinder;
  std::size_t comma_size = 0;
};
// C0, C1 complementary with no arrows from C1 to C0. Compares H(C) with the homology of
// the double mapping cylinder C0 <- (C0 | C1) -> C1. `drop` removes comma objects (mutation).
PushoutResult pushout_check(const FinPoset& C, const std::vector<int>& C0, const std::vector<int>& C1,
                            const std::vector<int>& drop = {});
// A comma object whose removal changes the Euler characteristic of the cylinder, if any.
std::optional<int> find_pushout_mutation(const FinPoset& C, const std::vector<int>& C0, const std::vector<int>& C1);

// A category whose objects carry a rank (position in a total order) and whose level
// morphisms are marked basic or not.
struct RankedCategory {
  const FinCategory* cat = nullptr;
  std::vector<int> rank;                    // per object
  std::function<bool(int)> level_basic;     // queried on level morphisms
  bool level_nonbasic(int f) const;
};

struct Composability {
  bool strongly_composable = true;
  std::vector<int> transitions;
};
Composability strong_composability(const RankedCategory& R, const std::vector<int>& seq, int beta);
// Every contiguous composite stays out of the nonbasic level morphisms at beta.
bool strongly_composable_brute(const RankedCategory& R, const std::vector<int>& seq, int beta);

std::string export_poset(const FinPoset& P);
std::string export_category(const FinCategory& C);
std::string export_complex(const ChainComplex& K);

}  // namespace coxtop
