#pragma once

#include "pchain/category.hpp"
#include "pchain/linalg.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pchain::catmod {

using fincat::Category;
using fincat::CatPtr;
using fincat::Functor;
using linalg::Canonical;
using linalg::FPComplex;
using linalg::FPModule;
using linalg::Matrix;
using linalg::Ring;
using linalg::Scalar;
using linalg::SparseMatrix;
using linalg::SparseVec;
using linalg::Vector;

enum class Variance { Covariant, Contravariant };

const char* variance_name(Variance v);

// Functor into presented modules. For f: a -> b the matrix action[f] is
// rank(b) x rank(a) when covariant and rank(a) x rank(b) when contravariant.
struct CatModule {
  CatPtr base;
  Variance variance = Variance::Contravariant;
  Ring ring;
  std::vector<FPModule> value;
  std::vector<Matrix> action;

  std::size_t rank(int c) const { return value[c].gens; }
  bool contravariant() const { return variance == Variance::Contravariant; }
  // Every violation of functoriality or well-definedness on presentations.
  std::vector<std::string> violations() const;
  // Throws NotAFunctor with the first violation.
  void check() const;
  // The same data read over the opposite category.
  CatModule over_opposite(CatPtr opposite) const;
  std::string canonical_string() const;
};

CatModule constant_module(CatPtr C, Ring R, Variance v, std::size_t rank = 1);
// Contravariant: c ↦ R[⊔_d aut(d)\mor(c, d)] over class representatives d.
CatModule orbit_permutation_module(CatPtr C, Ring R);
// Covariant: c ↦ ker(R[⊔_d mor(d, c)] -> R), basis e_x - e_{x0}.
// Contravariant: c ↦ ker(R[⊔_d mor(c, d)] -> R).
CatModule augmentation_module(CatPtr C, Ring R, Variance v);
// Covariant permutation module from a set-valued functor.
CatModule permutation_module(CatPtr C, Ring R, Variance v, const std::vector<std::size_t>& sizes,
                             const std::function<std::vector<int>(int)>& on_morphism);

// Presentation of M ⊗_C N on generators (c, i, j), i < rank M(c),
// j < rank N(c), indexed offset[c] + i * rank N(c) + j.
struct TensorPresentation {
  FPModule module;
  std::vector<std::size_t> offset;
};

TensorPresentation tensor_presentation(const CatModule& M, const CatModule& N);
Canonical tensor_over_C(const CatModule& M, const CatModule& N);

CatModule restrict_module(const Functor& F, const CatModule& M);
CatModule induce_module(const Functor& F, const CatModule& X);

// Induction of a contravariant module with access to its generators
// x ⊗ h, x ∈ X(b), h: d -> F b.
struct Induced {
  CatModule module;
  Functor functor;
  std::vector<std::size_t> source_rank;
  std::vector<std::vector<std::size_t>> offset, nsize;
  std::vector<SparseMatrix> to_new;
  // e_i ⊗ h in module.value[d] coordinates
  SparseVec generator(int d, int b, std::size_t i, int h) const;
  // X(b) -> (F_*X)(F b), x ↦ x ⊗ id
  Matrix unit(int b) const;
};
Induced induce_with_unit(const Functor& F, const CatModule& X);

// ⊕_k R mor(?, gens[k]) over C: at object a the basis is the pairs
// (k, f ∈ mor(a, gens[k])) in order of k, then hom order.
struct FreeModule {
  CatPtr C;
  std::vector<int> gens;
  std::vector<std::vector<std::size_t>> offset;
  std::vector<std::size_t> dim;
  std::vector<std::vector<std::pair<std::size_t, int>>> basis;  // basis[a][idx] = (k, f)

  FreeModule() = default;
  FreeModule(CatPtr c, std::vector<int> g);
  std::size_t index(int a, std::size_t k, int f) const { return offset[a][k] + C->hom_index(f); }
  std::size_t rank() const { return gens.size(); }
  // columns: basis of F(b), rows: basis of F(a), for u: a -> b
  SparseMatrix action(int u) const;
  CatModule as_module(Ring R) const;
};

// Map out of a free module given by generator images images[k] ∈ T(gens[k]).
// Evaluation at a: column (k, f) is T(f) images[k].
SparseMatrix eval_free_map(const FreeModule& F, const std::vector<SparseVec>& images, const FreeModule& T, int a,
                           const Ring& R);
SparseMatrix eval_free_map(const FreeModule& F, const std::vector<SparseVec>& images, const CatModule& T, int a);

enum class ResolutionStrategy {
  // Generators added only when outside the span generated so far,
  // maximal objects first.
  Pruned,
  // Every standard kernel generator at every object, objects in id order.
  Full,
};

// F_0 <- F_1 <- ... <- F_len over C resolving a contravariant module.
struct Resolution {
  CatPtr C;
  Ring ring;
  std::vector<FreeModule> F;
  // d[i][k] ∈ F_{i-1}(gens_i[k]); d[0][k] ∈ M(gens_0[k]) is the augmentation
  std::vector<std::vector<SparseVec>> d;

  int length() const { return static_cast<int>(F.size()) - 1; }
  SparseMatrix differential_at(int i, int a) const;
  std::vector<std::size_t> ranks() const;
};

Resolution free_resolution(const CatModule& M, int length, ResolutionStrategy s = ResolutionStrategy::Pruned);
// Objectwise exactness of the augmented complex in degrees < length.
bool resolution_is_exact(const Resolution& R, const CatModule& M);

// F ⊗_C N for F resolving a contravariant module and N covariant.
FPComplex tensor_complex(const Resolution& F, const CatModule& N);
// Hom_C(F, N) as cochains: entry n holds Hom(F_n, N) and d[n]: C^{n-1} -> C^n
// is stored at index n (d[0] empty).
FPComplex hom_cocomplex(const Resolution& F, const CatModule& N);
linalg::SubQuotient cohomology(const FPComplex& K, int n);

std::vector<Canonical> tor(const CatModule& M, const CatModule& N, int n_max,
                           ResolutionStrategy s = ResolutionStrategy::Pruned);
std::vector<Canonical> ext(const CatModule& M, const CatModule& N, int n_max,
                           ResolutionStrategy s = ResolutionStrategy::Pruned);

// Induction of a free B-module along F: generators move to their images.
FreeModule induce_free(const Functor& F, const FreeModule& P, CatPtr C);
// Images of P's generators (given in Ptarget) transported to the induced
// modules.
std::vector<SparseVec> induce_images(const Functor& F, const FreeModule& P, const std::vector<SparseVec>& images,
                                     const FreeModule& Ptarget, const FreeModule& induced_target, const Ring& R);

// Chain map lift between resolutions: given phi_0 target values for the
// augmentation, solves objectwise. lift[i][k] ∈ Q_i(gens of P_i[k]).
// P is a complex of free modules with augmentation P.d[0][k] ∈ M(gens[k]),
// Q resolves M. Returns lift[i][k] ∈ Q_i(P_i.gens[k]) for i ≤ top.
std::vector<std::vector<SparseVec>> lift_chain_map(const Resolution& P, const Resolution& Q, const CatModule& M,
                                                   int top);

// Map F ⊗ N -> G ⊗ N induced by generator images in G.
SparseMatrix tensor_map(const FreeModule& F, const std::vector<SparseVec>& images, const FreeModule& G,
                        const CatModule& N);

struct AssemblyDegree {
  int q = 0;
  Canonical source, target;
  Matrix map;  // on canonical generators
  linalg::MapInvariants invariants;
};

// Tor^B_q(R, F*N) -> Tor^C_q(R, N) for q ≤ n_max.
std::vector<AssemblyDegree> assembly_tor(const Functor& F, const CatModule& N, int n_max);

// Tor^B_q(X, F*N) -> Tor^C_q(Y, N) induced by a natural map eta: X -> F*Y
// given objectwise (eta[b]: X(b) -> Y(F b)). Source and target homology keep
// their subquotients so maps with a common target can be compared.
struct TorPushforward {
  std::vector<linalg::SubQuotient> source, target;
  std::vector<Matrix> map;
};
TorPushforward tor_pushforward(const Functor& F, const CatModule& X, const CatModule& Y,
                               const std::vector<Matrix>& eta, const CatModule& N, int n_max);

} // namespace pchain::catmod
