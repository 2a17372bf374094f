#include "doctest.h"
#include "oracles.hpp"
#include "pchain/engine.hpp"
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

std::vector<Matrix> trivial_action(const FiniteGroup& G, const Ring& R) {
  return std::vector<Matrix>(G.order(), Matrix::identity(R, 1));
}

} // namespace

TEST_CASE("nerve complex squares to zero") {
  for (auto C : {orbit(FiniteGroup::cyclic(4)), orbit(FiniteGroup::symmetric(3)),
                 std::make_shared<const Category>(fincat::linear_order(3))}) {
    auto nc = engine::build_nerve_complex(C, fincat::chain_bound(*C));
    CHECK(nc.squares_to_zero());
  }
}

TEST_CASE("group category nerve lives in degree 0") {
  auto C = group(FiniteGroup::cyclic(3));
  auto nc = engine::build_nerve_complex(C, 2);
  CHECK(nc.rank(0, 0, 0) == 3);  // classes of s -> c -> t are the morphisms s -> t
  CHECK(nc.rank(1, 0, 0) == 0);
  CHECK(nc.rank(2, 0, 0) == 0);
}

TEST_CASE("Or(Z/2) has one 1-simplex from G/1 to G/G") {
  auto G = FiniteGroup::cyclic(2);
  auto L = groups::subgroup_lattice(G);
  auto C = orbit(G);
  int free_orbit = -1, point = -1;
  for (int c = 0; c < C->num_objects(); ++c) (C->aut(c).size() == 2 ? free_orbit : point) = c;
  REQUIRE(free_orbit >= 0);
  REQUIRE(point >= 0);
  auto nc = engine::build_nerve_complex(C, 1);
  CHECK(nc.rank(1, free_orbit, point) == 1);
  CHECK(nc.rank(1, point, free_orbit) == 0);
}

TEST_CASE("filtered complex is a filtered chain complex") {
  Ring Z = Ring::integers();
  auto C = orbit(FiniteGroup::cyclic(4));
  engine::Options opt;
  auto T = engine::build_tor_complex(orbit_permutation_module(C, Z), augmentation_module(C, Z, Variance::Covariant), opt);
  CHECK(T.K.squares_to_zero());
  CHECK(T.K.respects_filtration());
  CHECK(T.MQ.squares_to_zero());
}

TEST_CASE("groupoid collapses to one column of group homology") {
  Ring Z = Ring::integers();
  auto G = FiniteGroup::cyclic(2);
  auto C = group(G);
  engine::Options opt;
  auto run = engine::run_tor(constant_module(C, Z, Variance::Contravariant), constant_module(C, Z, Variance::Covariant), opt);
  auto oracle_groups = oracle::bar_tor(G, Z, trivial_action(G, Z), trivial_action(G, Z), 3);
  CHECK(run.report.all_match);
  CHECK(run.ss.stable_from == 1);
  for (int q = 0; q <= 3; ++q) {
    const auto* e = run.ss.infinity().find(0, q);
    REQUIRE(e != nullptr);
    CHECK(e->module.canonical() == oracle_groups[q]);
    CHECK(run.ss.infinity().find(1, q) == nullptr);
  }
  CHECK(oracle_groups[1] == Canonical{Z, 0, {mpz_class(2)}});
  CHECK(oracle_groups[2].is_zero());
}

TEST_CASE("Or(Z/2) with constant coefficients converges to Z at the origin") {
  Ring Z = Ring::integers();
  auto C = orbit(FiniteGroup::cyclic(2));
  engine::Options opt;
  auto run = engine::run_tor(constant_module(C, Z, Variance::Contravariant), constant_module(C, Z, Variance::Covariant), opt);
  CHECK(run.report.all_match);
  CHECK(run.ss.check_pages().empty());
  const auto& inf = run.ss.infinity();
  for (const auto& e : inf.entries) {
    if (e.p + e.q > run.report.certified_max) continue;
    if (e.p == 0 && e.q == 0)
      CHECK(e.module.canonical() == Canonical::free(Z, 1));
    else
      CHECK(e.module.canonical().is_zero());
  }
}

TEST_CASE("rational coefficients kill E1 above the bottom row") {
  Ring Q = Ring::rationals();
  for (auto C : {orbit(FiniteGroup::cyclic(3)), orbit(FiniteGroup::symmetric(3))}) {
    engine::Options opt;
    auto run = engine::run_tor(orbit_permutation_module(C, Q), augmentation_module(C, Q, Variance::Covariant), opt);
    CHECK(run.report.all_match);
    for (const auto& e : run.ss.pages.front().entries)
      if (e.q > 0) CHECK(e.module.canonical().is_zero());
    CHECK(run.ss.stable_from <= 2);
  }
}

TEST_CASE("E1 matches group-ring Tor summand by summand") {
  Ring Z = Ring::integers();
  engine::Options opt;
  for (auto C : {orbit(FiniteGroup::cyclic(2)), orbit(FiniteGroup::cyclic(4))}) {
    auto run = engine::run_tor(orbit_permutation_module(C, Z), augmentation_module(C, Z, Variance::Covariant), opt);
    auto rep = engine::verify_e1(run, opt);
    CHECK(rep.all_match);
    CHECK(!rep.checks.empty());
  }
}

TEST_CASE("e1_direct on Or(Z/2) gives group homology for the 1-chain") {
  Ring Z = Ring::integers();
  auto G = FiniteGroup::cyclic(2);
  auto C = orbit(G);
  engine::Options opt;
  opt.q_max = 4;
  auto table = engine::e1_direct(constant_module(C, Z, Variance::Contravariant), constant_module(C, Z, Variance::Covariant), opt);
  auto expect = oracle::bar_tor(G, Z, trivial_action(G, Z), trivial_action(G, Z), 3);
  int seen = 0;
  for (const auto& s : table) {
    if (s.p != 1) continue;
    ++seen;
    for (int q = 0; q <= 3; ++q) CHECK(s.groups[q] == expect[q]);
  }
  CHECK(seen == 1);
}

TEST_CASE("d1 on Or(Z/2): face components and the partial assembly") {
  Ring Z = Ring::integers();
  auto C = orbit(FiniteGroup::cyclic(2));
  engine::Options opt;
  auto run = engine::run_tor(constant_module(C, Z, Variance::Contravariant), constant_module(C, Z, Variance::Covariant), opt);
  REQUIRE(run.complex.chains[1].size() == 1);
  auto rep = engine::d1_components(run, 1, 0, opt);
  CHECK(rep.alternating_sum_matches);
  REQUIRE(rep.components.size() == 2);
  const auto& c0 = rep.components[0];
  REQUIRE(c0.direct_invariants.size() == c0.filtered_invariants.size());
  for (std::size_t q = 0; q < c0.direct_invariants.size(); ++q) CHECK(c0.direct_invariants[q] == c0.filtered_invariants[q]);
  // degree 0: H_0(Z/2; Z) -> H_0(1; Z) is the identity of Z
  REQUIRE(!c0.filtered.empty());
  CHECK(c0.filtered[0].rows() == 1);
  CHECK(c0.filtered[0].cols() == 1);
  CHECK(abs(c0.filtered[0].at(0, 0)) == 1);
}

TEST_CASE("two-column sequence is exact for Or(Z/p)") {
  Ring Z = Ring::integers();
  for (int p : {2, 3, 5}) {
    auto C = orbit(FiniteGroup::cyclic(p));
    engine::Options opt;
    opt.n_max = 4;
    auto run = engine::run_tor(constant_module(C, Z, Variance::Contravariant), constant_module(C, Z, Variance::Covariant), opt);
    opt.n_max = 3;
    auto les = engine::two_column_les(run, opt);
    CHECK(les.exact);
    for (const auto& n : les.nodes) CHECK(n.checked);
  }
}

TEST_CASE("two-column sequence refuses Or(Z/4)") {
  Ring Z = Ring::integers();
  auto C = orbit(FiniteGroup::cyclic(4));
  engine::Options opt;
  auto run = engine::run_tor(constant_module(C, Z, Variance::Contravariant), constant_module(C, Z, Variance::Covariant), opt);
  bool refused = false;
  try {
    engine::two_column_les(run, opt);
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::NotTwoColumn;
  }
  CHECK(refused);
}

TEST_CASE("Ext over the one-object Z/2 is group cohomology") {
  Ring Z = Ring::integers();
  auto G = FiniteGroup::cyclic(2);
  auto C = group(G);
  engine::Options opt;
  auto M = constant_module(C, Z, Variance::Contravariant);
  auto run = engine::ext_pages(M, M, opt);
  auto expect = oracle::bar_cohomology(G, Z, trivial_action(G, Z), 3);
  CHECK(run.report.all_match);
  for (int q = 0; q <= 3; ++q) CHECK(run.report.degrees[q].total == expect[q]);
  CHECK(expect[2] == Canonical{Z, 0, {mpz_class(2)}});
}

TEST_CASE("Ext over Or(Z/p) sees only the final object") {
  Ring Z = Ring::integers();
  for (auto C : {orbit(FiniteGroup::cyclic(2)), orbit(FiniteGroup::cyclic(3))}) {
    engine::Options opt;
    auto M = constant_module(C, Z, Variance::Contravariant);
    auto run = engine::ext_pages(M, M, opt);
    CHECK(run.resolution_exact);
    CHECK(run.report.all_match);
    CHECK(run.ss.check_pages().empty());
    CHECK(run.report.degrees[0].total == Canonical::free(Z, 1));
    for (int q = 1; q <= 3; ++q) CHECK(run.report.degrees[q].total.is_zero());
    bool e1 = run.e1_checked;
    for (const auto& c : run.e1) e1 = e1 && c.match;
    CHECK(e1);
  }
}

TEST_CASE("parallel pages agree with sequential ones") {
  Ring Z = Ring::integers();
  auto C = orbit(FiniteGroup::symmetric(3));
  engine::Options a, b;
  b.jobs = 4;
  auto M = orbit_permutation_module(C, Z);
  auto N = augmentation_module(C, Z, Variance::Covariant);
  auto r1 = engine::run_tor(M, N, a);
  auto r2 = engine::run_tor(M, N, b);
  REQUIRE(r1.ss.pages.size() == r2.ss.pages.size());
  for (std::size_t r = 0; r < r1.ss.pages.size(); ++r) {
    const auto& x = r1.ss.pages[r];
    const auto& y = r2.ss.pages[r];
    REQUIRE(x.entries.size() == y.entries.size());
    for (std::size_t i = 0; i < x.entries.size(); ++i) CHECK(x.entries[i].module.canonical() == y.entries[i].module.canonical());
    REQUIRE(x.differentials.size() == y.differentials.size());
    for (std::size_t i = 0; i < x.differentials.size(); ++i) CHECK(x.differentials[i].matrix == y.differentials[i].matrix);
  }
}
