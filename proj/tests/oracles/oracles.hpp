#pragma once

#include "pchain/category.hpp"
#include "pchain/groups.hpp"
#include "pchain/linalg.hpp"

#include <vector>

namespace oracle {

using pchain::linalg::Canonical;
using pchain::linalg::Matrix;
using pchain::linalg::Ring;

// Tor^{RG}_q(A, B) for q ≤ q_max through the normalized two-sided bar
// complex. right[g] is the matrix of x ↦ x·g on A, left[g] of y ↦ g·y on B;
// both R-free.
std::vector<Canonical> bar_tor(const pchain::groups::FiniteGroup& G, const Ring& R, const std::vector<Matrix>& right,
                               const std::vector<Matrix>& left, int q_max);

// H^q(G; B) for q ≤ q_max from normalized inhomogeneous cochains; left[g]
// gives the left action on B.
std::vector<Canonical> bar_cohomology(const pchain::groups::FiniteGroup& G, const Ring& R,
                                      const std::vector<Matrix>& left, int q_max);

// |mor(c_p, t) ×_{aut(c_p)} S(chain) ×_{aut(c_0)} mor(s, c_0)| by orbit
// counting on triples.
std::size_t balanced_product_count(const pchain::fincat::Category& C, const pchain::fincat::ChainBiset& S, int s,
                                   int t);

// All subgroups by testing every subset closed under multiplication.
std::vector<std::vector<int>> brute_force_subgroups(const pchain::groups::FiniteGroup& G);

// Number of G-equivariant functions G/H -> G/K, found by trying every
// function between the coset sets.
std::size_t brute_force_gmaps(const pchain::groups::FiniteGroup& G, const std::vector<int>& H,
                              const std::vector<int>& K);

// Homology of a free chain complex over R given by dense differentials
// (d[n]: C_n -> C_{n-1}); computed by Smith forms of each differential.
std::vector<Canonical> dense_homology(const Ring& R, const std::vector<std::size_t>& dims,
                                      const std::vector<Matrix>& d);

} // namespace oracle
