#include "doctest.h"
#include "oracles.hpp"
#include "pchain/category.hpp"
#include "pchain/error.hpp"
#include "pchain/groups.hpp"

#include <memory>

using namespace pchain;
using fincat::Category;
using groups::FiniteGroup;

namespace {

std::shared_ptr<const Category> orbit(const FiniteGroup& G) {
  auto L = groups::subgroup_lattice(G);
  return std::make_shared<const Category>(groups::orbit_category(G, L, groups::family_all(L)));
}

FiniteGroup klein() { return FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)); }

} // namespace

TEST_CASE("validation reports broken tables") {
  fincat::CategoryData d;
  d.objects = {"a", "b"};
  d.morphisms = {{"ia", "a", "a"}, {"ib", "b", "b"}, {"f", "a", "b"}};
  d.identity = {{"a", "ia"}, {"b", "ib"}};
  d.compose = {{"ia", "ia", "ia"}, {"ib", "ib", "ib"}, {"f", "ia", "f"}, {"ib", "f", "f"}};
  CHECK(fincat::validate(d).empty());
  auto bad = d;
  bad.compose[2] = {"f", "ia", "ib"};
  auto v = fincat::validate(bad);
  REQUIRE(!v.empty());
  CHECK(v.front().find("f, ia, ib") != std::string::npos);
  CHECK_THROWS_AS(Category::from_data(bad), Error);
  Category one = fincat::linear_order(1);
  CHECK(one.num_morphisms() == 1);
}

TEST_CASE("iso classes and predicates") {
  Category G2 = groups::group_category(FiniteGroup::cyclic(2));
  CHECK(G2.num_classes() == 1);
  CHECK(G2.aut(0).size() == 2);
  CHECK(G2.is_EI());
  CHECK(G2.is_left_free());
  CHECK(G2.noniso_morphisms(0, 0).empty());

  auto O = orbit(FiniteGroup::cyclic(2));
  CHECK(O->num_classes() == 2);
  int g1 = O->find_object("G/1"), gg = O->find_object("G/G");
  CHECK(O->hom(g1, g1).size() == 2);
  CHECK(O->hom(g1, gg).size() == 1);
  CHECK(O->hom(gg, g1).empty());
  CHECK(O->hom(gg, gg).size() == 1);
  CHECK(O->noniso_morphisms(g1, gg).size() == 1);
  CHECK(O->noniso_morphisms(g1, g1).empty());
  CHECK(O->aut(g1).size() == 2);
  CHECK(O->aut(gg).size() == 1);
  CHECK(O->final_object() == gg);

  // two isomorphic objects form one class
  fincat::CategoryData d;
  d.objects = {"x", "y"};
  d.morphisms = {{"ix", "x", "x"}, {"iy", "y", "y"}, {"u", "x", "y"}, {"v", "y", "x"}};
  d.identity = {{"x", "ix"}, {"y", "iy"}};
  d.compose = {{"ix", "ix", "ix"}, {"iy", "iy", "iy"}, {"u", "ix", "u"}, {"iy", "u", "u"}, {"v", "iy", "v"},
               {"ix", "v", "v"}, {"v", "u", "ix"}, {"u", "v", "iy"}};
  Category two = Category::from_data(d);
  CHECK(two.num_classes() == 1);
  CHECK(two.witness(1) == two.find_morphism("v"));

  // non-invertible idempotent endomorphism
  fincat::CategoryData e;
  e.objects = {"x"};
  e.morphisms = {{"i", "x", "x"}, {"e", "x", "x"}};
  e.identity = {{"x", "i"}};
  e.compose = {{"i", "i", "i"}, {"i", "e", "e"}, {"e", "i", "e"}, {"e", "e", "e"}};
  Category idem = Category::from_data(e);
  CHECK(!idem.is_EI());
  CHECK_THROWS_AS(fincat::enumerate_chains(idem, 2), Error);
  try {
    fincat::chain_bound(idem);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::UnboundedChains);
  }
}

TEST_CASE("chains and bisets") {
  auto O4 = orbit(FiniteGroup::cyclic(4));
  auto ch = fincat::enumerate_chains(*O4, 3);
  CHECK(ch[0].size() == 3);
  CHECK(ch[1].size() == 3);
  CHECK(ch[2].size() == 1);
  CHECK(ch[3].empty());
  auto S = fincat::chain_biset(*O4, ch[2][0]);
  CHECK(S.size() == 1);

  auto O2 = orbit(FiniteGroup::cyclic(2));
  auto c2 = fincat::enumerate_chains(*O2, 2);
  REQUIRE(c2[1].size() == 1);
  auto S2 = fincat::chain_biset(*O2, c2[1][0]);
  CHECK(S2.size() == 1);
  for (const auto& row : S2.right) CHECK(row[0] == 0);

  Category arrow = fincat::linear_order(2);
  auto ca = fincat::enumerate_chains(arrow, 2);
  CHECK(ca[0].size() == 2);
  CHECK(ca[1].size() == 1);
  CHECK(ca[2].empty());
  auto G = groups::group_category(FiniteGroup::cyclic(3));
  CHECK(fincat::enumerate_chains(G, 3)[1].empty());
}

TEST_CASE("biset actions commute") {
  auto O = orbit(FiniteGroup::symmetric(3));
  auto ch = fincat::enumerate_chains(*O, 3);
  for (const auto& level : ch)
    for (const auto& c : level) {
      auto S = fincat::chain_biset(*O, c);
      for (std::size_t i = 0; i < S.left_aut.size(); ++i)
        for (std::size_t j = 0; j < S.right_aut.size(); ++j)
          for (std::size_t x = 0; x < S.size(); ++x) CHECK(S.left[i][S.right[j][x]] == S.right[j][S.left[i][x]]);
    }
}

TEST_CASE("tilde nerve matches the balanced product count") {
  std::vector<std::shared_ptr<const Category>> cats = {
      orbit(FiniteGroup::cyclic(2)), orbit(FiniteGroup::cyclic(4)), orbit(klein()), orbit(FiniteGroup::symmetric(3)),
      std::make_shared<const Category>(fincat::linear_order(3))};
  for (const auto& C : cats) {
    fincat::TildeNerve nerve(C, 3);
    auto chains = fincat::enumerate_chains(*C, 3);
    for (int p = 0; p <= 3; ++p)
      for (int s = 0; s < C->num_objects(); ++s)
        for (int t = 0; t < C->num_objects(); ++t) {
          std::size_t expect = 0;
          for (const auto& c : chains[p]) expect += oracle::balanced_product_count(*C, fincat::chain_biset(*C, c), s, t);
          CHECK(nerve.simplices(p, s, t).size() == expect);
        }
  }
  auto O2 = orbit(FiniteGroup::cyclic(2));
  fincat::TildeNerve n2(O2, 1);
  CHECK(n2.simplices(1, O2->find_object("G/1"), O2->find_object("G/G")).size() == 1);
}

TEST_CASE("subgroup lattices") {
  auto L4 = groups::subgroup_lattice(FiniteGroup::cyclic(4));
  CHECK(L4.subgroups.size() == 3);
  for (const auto& s : L4.subgroups) CHECK(s.normalizer.size() == 4);
  auto S3 = FiniteGroup::symmetric(3);
  auto L = groups::subgroup_lattice(S3);
  CHECK(L.subgroups.size() == 6);
  CHECK(L.num_conj_classes == 4);
  CHECK(groups::subgroup_lattice(FiniteGroup::cyclic(1)).subgroups.size() == 1);
  for (const auto& G : {FiniteGroup::cyclic(6), S3, klein(), FiniteGroup::cyclic(8)}) {
    auto LL = groups::subgroup_lattice(G);
    CHECK(LL.subgroups.size() == oracle::brute_force_subgroups(G).size());
    for (const auto& s : LL.subgroups)
      CHECK(s.weyl_reps.size() * s.elements.size() == s.normalizer.size());
  }
  CHECK_THROWS_AS(groups::subgroup_lattice(FiniteGroup::cyclic(17)), Error);
}

TEST_CASE("orbit category hom counts and Weyl groups") {
  for (const auto& G : {FiniteGroup::cyclic(4), FiniteGroup::symmetric(3), klein()}) {
    auto L = groups::subgroup_lattice(G);
    auto F = groups::family_all(L);
    auto C = groups::orbit_category(G, L, F);
    CHECK(C.is_left_free());
    CHECK(C.is_EI());
    CHECK(C.num_classes() == L.num_conj_classes);
    for (std::size_t a = 0; a < F.members.size(); ++a)
      for (std::size_t b = 0; b < F.members.size(); ++b)
        CHECK(C.hom(a, b).size() ==
              oracle::brute_force_gmaps(G, L.subgroups[F.members[a]].elements, L.subgroups[F.members[b]].elements));
    // gH ↦ coset g^{-1}H is a group isomorphism WH -> aut(G/H)
    for (std::size_t a = 0; a < F.members.size(); ++a) {
      const auto& info = L.subgroups[F.members[a]];
      CHECK(C.aut(a).size() == info.weyl_reps.size());
      auto to_aut = [&](int g) {
        int gi = G.inv(g);
        int rep = G.order();
        for (int h : info.elements) rep = std::min(rep, G.mul(gi, h));
        for (int u : C.aut(a))
          if (groups::orbit_morphism_rep(C, u) == rep) return u;
        return -1;
      };
      for (int g : info.weyl_reps)
        for (int h : info.weyl_reps) {
          int gh = G.mul(g, h);
          CHECK(to_aut(gh) == C.compose(to_aut(g), to_aut(h)));
        }
    }
  }
  auto G = FiniteGroup::symmetric(3);
  auto L = groups::subgroup_lattice(G);
  auto tr = groups::orbit_category(G, L, groups::family_trivial(L));
  CHECK(tr.num_objects() == 1);
  CHECK(tr.aut(0).size() == 6);
}

TEST_CASE("family predicates and cofinality") {
  auto S3 = FiniteGroup::symmetric(3);
  auto L = groups::subgroup_lattice(S3);
  std::vector<int> proper;
  for (std::size_t i = 0; i + 1 < L.subgroups.size(); ++i) proper.push_back(static_cast<int>(i));
  groups::Family F{proper};
  CHECK(groups::check_M(L, F));
  CHECK(!groups::check_NM(L, F));
  auto L4 = groups::subgroup_lattice(FiniteGroup::cyclic(4));
  CHECK(groups::check_M(L4, groups::family_all(L4)));
  CHECK(groups::check_M(L, groups::family_trivial(L)));

  auto all = groups::family_all(L);
  auto red = groups::reduce_family(L, all);
  CHECK(red.members == std::vector<int>{static_cast<int>(L.subgroups.size()) - 1});
  CHECK(groups::cofinal_inclusion_check(L, red, all).cofinal);

  auto V = klein();
  auto LV = groups::subgroup_lattice(V);
  groups::Family small{{0, 1, 2, 3}};
  auto rep = groups::cofinal_inclusion_check(LV, small, groups::family_all(LV));
  CHECK(!rep.cofinal);
  CHECK(rep.counterexample == 4);
  CHECK_THROWS_AS(groups::cofinal_inclusion_check(LV, groups::family_all(LV), small), Error);

  CHECK_THROWS_AS(groups::make_family(S3, L, {L.subgroups[1].elements}, false), Error);
  CHECK(groups::make_family(S3, L, {L.subgroups[1].elements}, true).members.size() == 3);
}

TEST_CASE("permutation input") {
  auto p = FiniteGroup::parse_cycles("(1 2)(3 4)", 4);
  CHECK(p == std::vector<int>{1, 0, 3, 2});
  auto G = FiniteGroup::from_permutations({FiniteGroup::parse_cycles("(1 2 3)", 3), FiniteGroup::parse_cycles("(1 2)", 3)});
  CHECK(G.order() == 6);
  CHECK_THROWS_AS(FiniteGroup::parse_cycles("(1 2", 3), Error);
}
