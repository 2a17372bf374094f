#pragma once

#include "pchain/category.hpp"

#include <map>
#include <string>
#include <vector>

namespace pchain::groups {

// Finite group on elements 0..n-1 with 0 the identity.
class FiniteGroup {
public:
  FiniteGroup() = default;
  // Validates the group axioms; relabels so the identity is 0 when needed.
  static FiniteGroup from_table(const std::vector<std::vector<int>>& table);
  // Permutations as image arrays on points 0..d-1. Elements are listed in
  // breadth-first order from the identity over the generators.
  static FiniteGroup from_permutations(const std::vector<std::vector<int>>& gens);
  // Cycle notation such as "(1 2)(3 4)"; points are positive integers.
  static std::vector<int> parse_cycles(const std::string& s, int degree);
  static FiniteGroup cyclic(int n);
  static FiniteGroup symmetric(int n);
  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  int one() const { return 0; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  std::string canonical_string() const;

private:
  std::vector<std::vector<int>> table_;
  std::vector<int> inv_;
};

// Ascending element list.
using Subgroup = std::vector<int>;

Subgroup closure(const FiniteGroup& G, const std::vector<int>& gens);
bool is_subgroup(const FiniteGroup& G, const std::vector<int>& elems);
Subgroup conjugate(const FiniteGroup& G, const Subgroup& H, int g);  // g^{-1} H g
bool subset(const Subgroup& a, const Subgroup& b);

struct SubgroupInfo {
  Subgroup elements;
  int conj_class = -1;
  Subgroup normalizer;
  std::vector<int> weyl_reps;  // least element of each coset of H in NH
};

struct Lattice {
  std::vector<SubgroupInfo> subgroups;  // by order, then lexicographically
  int num_conj_classes = 0;
  int index_of(const Subgroup& H) const;
  bool contains(int i, int j) const { return subset(subgroups[i].elements, subgroups[j].elements); }
};

// Throws GroupTooLarge when |G| exceeds the bound.
Lattice subgroup_lattice(const FiniteGroup& G, int bound = 16);

// Members as lattice indices, ascending.
struct Family {
  std::vector<int> members;
  bool has(int i) const;
};

Family family_all(const Lattice& L);
Family family_trivial(const Lattice& L);
// Conjugation closure of the given subgroups (each must be a subgroup); with
// close = false a family that is not closed raises ValidationError.
Family make_family(const FiniteGroup& G, const Lattice& L, const std::vector<Subgroup>& subs, bool close);
std::vector<int> maximal_members(const Lattice& L, const Family& F);

// One object per member. mor(G/H, G/K) = cosets gK with g^{-1}Hg ⊆ K, listed
// by least coset element; composition (g'L)∘(gK) = gg'L.
fincat::Category orbit_category(const FiniteGroup& G, const Lattice& L, const Family& F);
std::string orbit_object_name(const FiniteGroup& G, const Lattice& L, int idx);
// Coset representative of a morphism of an orbit category built above.
int orbit_morphism_rep(const fincat::Category& C, int f);

bool check_M(const Lattice& L, const Family& F);
bool check_NM(const Lattice& L, const Family& F);

struct CofinalityReport {
  bool cofinal = true;
  std::map<int, int> witness;  // H -> K_H, lattice indices
  int counterexample = -1;
};

// For every H in big outside small, {L ∈ small : H ⊆ L} must have a maximum.
CofinalityReport cofinal_inclusion_check(const Lattice& L, const Family& small, const Family& big);
// Maximal members together with members lying in more than one maximal member.
Family reduce_family(const Lattice& L, const Family& F);
// Inclusion of orbit categories for small ⊆ big; throws FamilyMismatch.
fincat::Functor family_inclusion(const Family& small, const Family& big, fincat::CatPtr Csmall, fincat::CatPtr Cbig);

// One-object category of a group; morphism i is element i.
fincat::Category group_category(const FiniteGroup& G);

} // namespace pchain::groups
