#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace pchain::fincat {

// Category as read from input: everything referenced by name.
struct CategoryData {
  struct Mor {
    std::string id, src, tgt;
  };
  std::vector<std::string> objects;
  std::vector<Mor> morphisms;
  std::vector<std::array<std::string, 3>> compose;  // (g, f, g∘f)
  std::map<std::string, std::string> identity;
};

struct Morphism {
  std::string name;
  int src = -1, tgt = -1;
};

// Every violation of the category axioms, one line each; empty when valid.
std::vector<std::string> validate(const CategoryData& data);

// A validated finite category. Morphism ids index a dense composition table;
// hom-sets are ascending lists of ids, and all derived bases use that order.
class Category {
public:
  Category() = default;
  // Throws ValidationError carrying every violation.
  static Category from_data(const CategoryData& data);
  // comp(g, f) must be given exactly on composable pairs.
  static Category from_table(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                             const std::vector<std::array<int, 3>>& compose, std::vector<int> identity);
  CategoryData to_data() const;

  int num_objects() const { return static_cast<int>(objects_.size()); }
  int num_morphisms() const { return static_cast<int>(mors_.size()); }
  const std::string& object_name(int c) const { return objects_[c]; }
  const std::string& morphism_name(int f) const { return mors_[f].name; }
  int find_object(const std::string& name) const;
  int find_morphism(const std::string& name) const;
  int src(int f) const { return mors_[f].src; }
  int tgt(int f) const { return mors_[f].tgt; }
  int identity(int c) const { return identity_[c]; }
  bool is_identity(int f) const { return identity_[mors_[f].src] == f; }
  // g∘f, or -1 when tgt(f) != src(g)
  int compose(int g, int f) const { return comp_[static_cast<std::size_t>(g) * mors_.size() + f]; }
  const std::vector<int>& hom(int a, int b) const { return hom_[static_cast<std::size_t>(a) * objects_.size() + b]; }
  // position of f inside hom(src f, tgt f)
  int hom_index(int f) const { return hom_pos_[f]; }

  bool is_iso(int f) const { return inverse_[f] >= 0; }
  int inverse(int f) const { return inverse_[f]; }
  std::vector<int> noniso_morphisms(int a, int b) const;

  // Isomorphism classes, ordered by their lowest object; the representative
  // is that lowest object.
  int num_classes() const { return static_cast<int>(reps_.size()); }
  int class_of(int c) const { return class_of_[c]; }
  int rep(int cls) const { return reps_[cls]; }
  const std::vector<int>& class_members(int cls) const { return members_[cls]; }
  // isomorphism c -> rep(class_of(c)); the identity on representatives
  int witness(int c) const { return witness_[c]; }
  // automorphisms of an object, ascending ids
  const std::vector<int>& aut(int c) const { return aut_[c]; }
  // position of an automorphism inside aut(src)
  int aut_index(int u) const { return aut_pos_[u]; }
  // isomorphisms with the given source
  const std::vector<int>& isos_from(int c) const { return isos_from_[c]; }

  bool is_EI() const { return ei_; }
  bool is_left_free() const { return left_free_; }
  bool is_groupoid() const;

  // Same ids, arrows reversed.
  Category opposite() const;
  // Final object or -1.
  int final_object() const;
  int initial_object() const;

  // Serialization used for hashing; stable across runs.
  std::string canonical_string() const;

private:
  void finalize();

  std::vector<std::string> objects_;
  std::vector<Morphism> mors_;
  std::vector<int> comp_, identity_;
  std::vector<std::vector<int>> hom_;
  std::vector<int> hom_pos_;
  std::vector<int> inverse_;
  std::vector<int> class_of_, reps_, witness_;
  std::vector<std::vector<int>> members_;
  std::vector<std::vector<int>> aut_, isos_from_;
  std::vector<int> aut_pos_;
  bool ei_ = true, left_free_ = true;
};

using CatPtr = std::shared_ptr<const Category>;

// Poset with the given order relations (reflexive transitive closure taken);
// throws ValidationError for a cycle.
Category poset_category(const std::vector<std::string>& names, const std::vector<std::pair<int, int>>& less);
// Linear order 0 < 1 < ... < n-1; n = 1 is the trivial category.
Category linear_order(int n);

struct Functor {
  CatPtr source, target;
  std::vector<int> on_objects, on_morphisms;

  // Throws NotAFunctor on the first violated law.
  void check() const;
  static Functor identity(CatPtr c);
  // Full inclusion of a subcategory given by names (objects and morphisms
  // matched by name).
  static Functor inclusion_by_name(CatPtr sub, CatPtr ambient);
};

// Full subcategory on the listed objects (new ids in list order) and its
// inclusion.
Functor full_subcategory(CatPtr C, const std::vector<int>& objects);
// The one-object category aut(c) and its inclusion; morphism i is aut(c)[i].
Functor automorphism_subcategory(CatPtr C, int c);

// A p-chain: tuple of isomorphism-class indices.
using Chain = std::vector<int>;

// Class graph edge a -> b when some non-isomorphism goes between their
// representatives. Throws UnboundedChains when walks of any length exist.
std::vector<std::vector<Chain>> enumerate_chains(const Category& C, int p_max);
// Longest chain length; throws UnboundedChains for a cyclic class graph.
int chain_bound(const Category& C);

// S(chain): strings (φ_0, …, φ_{p-1}) of non-isomorphisms between the
// representatives, modulo the middle automorphism groups, with the residual
// left aut(c_p) and right aut(c_0) actions. For p = 0 it is aut(c_0).
struct ChainBiset {
  Chain chain;
  std::vector<int> reps;
  std::vector<std::vector<int>> elements;  // lexicographically least witness per element
  std::vector<int> left_aut, right_aut;
  std::vector<std::vector<int>> left;   // left[i][x]  = left_aut[i] · x
  std::vector<std::vector<int>> right;  // right[j][x] = x · right_aut[j]

  std::size_t size() const { return elements.size(); }
  // element of an arbitrary witness tuple, -1 if not a valid tuple
  int find(const std::vector<int>& tuple) const;

  std::map<std::vector<int>, int> index;
};

ChainBiset chain_biset(const Category& C, const Chain& chain);

// Non-degenerate simplices of the tilde nerve of s↓C↓t for all s, t and
// p ≤ p_max. Simplex key: (α, φ_0, …, φ_{p-1}, β) with α: s → c_0, β: c_p → t.
class TildeNerve {
public:
  struct Simplex {
    std::vector<int> key;  // least diagram in its class
    Chain chain;           // classes of c_0..c_p
  };

  TildeNerve(CatPtr C, int p_max);

  const Category& category() const { return *C_; }
  int p_max() const { return p_max_; }
  const std::vector<Simplex>& simplices(int p, int s, int t) const;
  // index of the class of a diagram inside simplices(p, s, t); -1 when the
  // diagram is degenerate (some interior morphism invertible)
  int find(const std::vector<int>& diagram) const;
  // i-th face; -1 when degenerate
  int face(int p, int s, int t, int idx, int i) const;
  // simplex with α replaced by α∘f (f: s' -> s)
  int precompose(int p, int s, int t, int idx, int f) const;
  // simplex with β replaced by g∘β (g: t -> t')
  int postcompose(int p, int s, int t, int idx, int g) const;

private:
  CatPtr C_;
  int p_max_;
  int n_;
  std::vector<std::vector<Simplex>> table_;  // [(p * n + s) * n + t]
  std::map<std::vector<int>, int> lookup_;
  std::vector<Simplex> empty_;
};

} // namespace pchain::fincat
