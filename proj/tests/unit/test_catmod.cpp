#include "doctest.h"
#include "oracles.hpp"
#include "pchain/catmod.hpp"
#include "pchain/error.hpp"
#include "pchain/groups.hpp"

using namespace pchain;
using namespace pchain::catmod;
using groups::FiniteGroup;
using linalg::Canonical;

namespace {

CatPtr orbit(const FiniteGroup& G) {
  auto L = groups::subgroup_lattice(G);
  return std::make_shared<const Category>(groups::orbit_category(G, L, groups::family_all(L)));
}

CatPtr group(const FiniteGroup& G) { return std::make_shared<const Category>(groups::group_category(G)); }

Canonical cyc(const Ring& R, std::size_t free, std::vector<long> t = {}) {
  Canonical c{R, free, {}};
  for (long x : t) c.torsion.push_back(mpz_class(x));
  return c;
}

// right action x·g = M(g)x of a contravariant module on the one-object category
std::vector<Matrix> actions(const CatModule& M) { return M.action; }

} // namespace

TEST_CASE("builtin modules are functors") {
  Ring Z = Ring::integers();
  for (auto C : {orbit(FiniteGroup::symmetric(3)), orbit(FiniteGroup::cyclic(4)), group(FiniteGroup::cyclic(3))}) {
    CHECK(constant_module(C, Z, Variance::Contravariant).violations().empty());
    CHECK(orbit_permutation_module(C, Z).violations().empty());
    CHECK(augmentation_module(C, Z, Variance::Covariant).violations().empty());
    CHECK(augmentation_module(C, Z, Variance::Contravariant).violations().empty());
  }
  auto C = orbit(FiniteGroup::cyclic(2));
  CatModule bad = constant_module(C, Z, Variance::Contravariant);
  bad.action[1] = Matrix::from_rows(Z, {{2}});
  CHECK(!bad.violations().empty());
}

TEST_CASE("tensor over a category") {
  Ring Z = Ring::integers();
  auto triv = std::make_shared<const Category>(fincat::linear_order(1));
  CHECK(tensor_over_C(constant_module(triv, Z, Variance::Contravariant),
                      constant_module(triv, Z, Variance::Covariant)) == cyc(Z, 1));
  auto O = orbit(FiniteGroup::cyclic(2));
  CHECK(tensor_over_C(constant_module(O, Z, Variance::Contravariant), constant_module(O, Z, Variance::Covariant)) ==
        cyc(Z, 1));
  // Yoneda: R mor(?, c) ⊗ N ≅ N(c)
  for (auto C : {orbit(FiniteGroup::symmetric(3)), orbit(FiniteGroup::cyclic(4)), group(FiniteGroup::cyclic(2))}) {
    CatModule N = augmentation_module(C, Z, Variance::Covariant);
    for (int c = 0; c < C->num_objects(); ++c) {
      FreeModule F(C, {c});
      CHECK(tensor_over_C(F.as_module(Z), N) == N.value[c].canonical());
    }
  }
}

TEST_CASE("adjunction of restriction and induction") {
  Ring Z = Ring::integers();
  auto G = FiniteGroup::symmetric(3);
  auto L = groups::subgroup_lattice(G);
  auto all = groups::family_all(L);
  groups::Family small{{0, 1, 2, 3}};
  auto Cs = std::make_shared<const Category>(groups::orbit_category(G, L, small));
  auto Cb = std::make_shared<const Category>(groups::orbit_category(G, L, all));
  auto F = groups::family_inclusion(small, all, Cs, Cb);
  for (const CatModule& M : {constant_module(Cs, Z, Variance::Contravariant), orbit_permutation_module(Cs, Z)})
    for (const CatModule& N : {constant_module(Cb, Z, Variance::Covariant), augmentation_module(Cb, Z, Variance::Covariant)}) {
      CatModule IM = induce_module(F, M);
      CHECK(IM.violations().empty());
      CHECK(tensor_over_C(IM, N) == tensor_over_C(M, restrict_module(F, N)));
    }
  // induction of a represented functor is represented
  for (int c = 0; c < Cs->num_objects(); ++c) {
    CatModule IF = induce_module(F, FreeModule(Cs, {c}).as_module(Z));
    FreeModule target(Cb, {F.on_objects[c]});
    for (int d = 0; d < Cb->num_objects(); ++d) CHECK(IF.value[d].canonical() == cyc(Z, target.dim[d]));
  }
  auto id = fincat::Functor::identity(Cb);
  CatModule N = augmentation_module(Cb, Z, Variance::Covariant);
  CatModule back = induce_module(id, N);
  for (int d = 0; d < Cb->num_objects(); ++d) CHECK(back.value[d].canonical() == N.value[d].canonical());
}

TEST_CASE("resolutions are exact and Tor is independent of them") {
  Ring Z = Ring::integers();
  for (auto C : {orbit(FiniteGroup::cyclic(2)), orbit(FiniteGroup::cyclic(3)), group(FiniteGroup::cyclic(2)),
                 std::make_shared<const Category>(fincat::linear_order(3))}) {
    for (const CatModule& M : {constant_module(C, Z, Variance::Contravariant), orbit_permutation_module(C, Z)}) {
      auto P = free_resolution(M, 3);
      CHECK(resolution_is_exact(P, M));
      auto Fu = free_resolution(M, 3, ResolutionStrategy::Full);
      CHECK(resolution_is_exact(Fu, M));
      CatModule N = augmentation_module(C, Z, Variance::Covariant);
      CHECK(tor(M, N, 2) == tor(M, N, 2, ResolutionStrategy::Full));
      CHECK(tensor_complex(P, N).squares_to_zero());
    }
  }
  // free module resolves itself
  auto O = orbit(FiniteGroup::cyclic(4));
  auto P = free_resolution(FreeModule(O, {1}).as_module(Z), 2);
  CHECK(P.F[0].rank() == 1);
  CHECK(P.F[1].rank() == 0);
}

TEST_CASE("Tor and Ext over Z/2 against the bar complex") {
  Ring Z = Ring::integers();
  auto G = FiniteGroup::cyclic(2);
  auto C = group(G);
  CatModule M = constant_module(C, Z, Variance::Contravariant);
  CatModule N = constant_module(C, Z, Variance::Covariant);
  auto t = tor(M, N, 3);
  std::vector<Canonical> want = {cyc(Z, 1), cyc(Z, 0, {2}), cyc(Z, 0), cyc(Z, 0, {2})};
  CHECK(t == want);
  CHECK(oracle::bar_tor(G, Z, actions(M), actions(N), 3) == want);
  auto e = ext(M, constant_module(C, Z, Variance::Contravariant), 3);
  std::vector<Canonical> ewant = {cyc(Z, 1), cyc(Z, 0), cyc(Z, 0, {2}), cyc(Z, 0)};
  CHECK(e == ewant);
  CHECK(oracle::bar_cohomology(G, Z, actions(N), 3) == ewant);
  // augmentation coefficients on Z/3
  auto G3 = FiniteGroup::cyclic(3);
  auto C3 = group(G3);
  CatModule N3 = augmentation_module(C3, Z, Variance::Covariant);
  CatModule M3 = augmentation_module(C3, Z, Variance::Contravariant);
  CHECK(tor(M3, N3, 3) == oracle::bar_tor(G3, Z, actions(M3), actions(N3), 3));
  CHECK_THROWS_AS(tor(M, constant_module(C, Z, Variance::Contravariant), 1), Error);
}

TEST_CASE("final object and rational groupoids") {
  Ring Z = Ring::integers();
  for (auto C : {orbit(FiniteGroup::cyclic(2)), orbit(FiniteGroup::symmetric(3))}) {
    int c0 = C->final_object();
    REQUIRE(c0 >= 0);
    CatModule N = augmentation_module(C, Z, Variance::Covariant);
    auto t = tor(constant_module(C, Z, Variance::Contravariant), N, 3);
    CHECK(t[0] == N.value[c0].canonical());
    for (int q = 1; q <= 3; ++q) CHECK(t[q].is_zero());
  }
  Ring Q = Ring::rationals();
  auto C = group(FiniteGroup::cyclic(3));
  auto t = tor(augmentation_module(C, Q, Variance::Contravariant), augmentation_module(C, Q, Variance::Covariant), 3);
  for (int q = 1; q <= 3; ++q) CHECK(t[q].is_zero());
}

TEST_CASE("assembly maps") {
  Ring Z = Ring::integers();
  auto G = FiniteGroup::cyclic(2);
  auto L = groups::subgroup_lattice(G);
  auto all = groups::family_all(L);
  auto tr = groups::family_trivial(L);
  auto Cs = std::make_shared<const Category>(groups::orbit_category(G, L, tr));
  auto Cb = std::make_shared<const Category>(groups::orbit_category(G, L, all));
  auto F = groups::family_inclusion(tr, all, Cs, Cb);
  auto a = assembly_tor(F, constant_module(Cb, Z, Variance::Covariant), 2);
  CHECK(a[0].invariants.is_iso());
  CHECK(a[1].source == cyc(Z, 0, {2}));
  CHECK(a[1].target.is_zero());
  CHECK(!a[1].invariants.is_iso());
  auto id = assembly_tor(fincat::Functor::identity(Cb), augmentation_module(Cb, Z, Variance::Covariant), 2);
  for (const auto& d : id) CHECK(d.invariants.is_iso());
}
