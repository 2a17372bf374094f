#pragma once

#include "pchain/engine.hpp"

namespace pchain::engine::detail {

int resolve_p_max(const Category& C, const Options& opt);
// Columns d_i e_i for the finite orders of a cyclic decomposition.
Matrix order_diagonal(const Ring& R, const std::vector<mpz_class>& orders);
// Canonical forms of F_p / F_{p-1} inside H, filtration given by generators
// in the canonical coordinates of H.
std::vector<Canonical> graded_in(const SubQuotient& H, const std::vector<Matrix>& filtration);

} // namespace pchain::engine::detail

namespace pchain::engine::detail {

// A = M(c_p) ⊗_{R[aut(c_p)]} RS(chain) as a contravariant module over the
// one-object category aut(c_0); for p = 0 it is M restricted to aut(c_0).
struct ChainModule {
  fincat::Functor inclusion;  // aut(c_0) -> C
  fincat::ChainBiset biset;
  CatModule A;
  // old generators (i, x) -> i * |S| + x; empty for p = 0
  SparseMatrix to_new, to_old;
};

ChainModule chain_module(CatPtr C, const CatModule& M, const Chain& chain);

// Tor over the group ring of a one-object category, through the normalized
// bar complex with unit-pivot reduction when both presentations are free.
std::vector<Canonical> group_ring_tor(const CatModule& A, const CatModule& N, int q_top);

std::vector<E1Summand> e1_direct_chains(const CatModule& M, const CatModule& N,
                                        const std::vector<std::vector<Chain>>& chains, int q_top, int jobs);

// im(f) = ker(g) inside a direct sum of cyclic modules (order 0 = free).
bool exact_at(const Matrix& f, const Matrix& g, const std::vector<mpz_class>& here,
              const std::vector<mpz_class>& next);

} // namespace pchain::engine::detail
