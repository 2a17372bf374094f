#pragma once

#include "pchain/catmod.hpp"
#include "pchain/category.hpp"
#include "pchain/linalg.hpp"

#include <memory>
#include <string>
#include <vector>

namespace pchain::engine {

using catmod::CatModule;
using catmod::Resolution;
using fincat::CatPtr;
using fincat::Category;
using fincat::Chain;
using linalg::Canonical;
using linalg::FPComplex;
using linalg::FPModule;
using linalg::Matrix;
using linalg::Ring;
using linalg::SparseMatrix;
using linalg::SparseVec;
using linalg::SubQuotient;

// ------------------------------------------------------------ nerve complex

// D_p(s, t) free on the non-degenerate simplices of the tilde nerve; the
// differential is the alternating sum of faces, degenerate faces dropped.
struct NerveComplex {
  CatPtr C;
  std::shared_ptr<const fincat::TildeNerve> nerve;
  int p_max = 0;
  std::size_t rank(int p, int s, int t) const { return nerve->simplices(p, s, t).size(); }
  // D_p(s, t) -> D_{p-1}(s, t), p ≥ 1
  SparseMatrix differential(int p, int s, int t) const;
  bool squares_to_zero() const;
};

NerveComplex build_nerve_complex(CatPtr C, int p_max);

// -------------------------------------------------------- filtered complexes

// Chain complex of presented modules T_n (n_lo ≤ n ≤ n_hi). Coordinates of
// T_n are grouped by filtration index p_lo..p_hi in ascending order;
// relations are per block and d never raises the index.
struct FilteredComplex {
  Ring ring;
  int n_lo = 0, n_hi = -1, p_lo = 0, p_hi = -1;
  std::vector<std::vector<std::size_t>> start;  // [n - n_lo][p - p_lo], one extra entry at the end
  std::vector<std::vector<SparseMatrix>> rel;   // [n - n_lo][p - p_lo], block coordinates
  std::vector<SparseMatrix> d;                  // [n - n_lo]: T_n -> T_{n-1}; no rows at n_lo

  bool has(int n) const { return n >= n_lo && n <= n_hi; }
  std::size_t dim(int n) const { return has(n) ? start[n - n_lo].back() : 0; }
  // first coordinate of block p; p clamps to the index range
  std::size_t lo(int n, int p) const;
  // one past the last coordinate of F_p T_n
  std::size_t hi(int n, int p) const;
  const SparseMatrix& block_relations(int n, int p) const { return rel[n - n_lo][p - p_lo]; }
  SparseMatrix relations(int n) const;
  FPComplex total() const;  // degrees shifted by n_lo
  bool squares_to_zero() const;
  bool respects_filtration() const;
};

struct PageEntry {
  int p = 0, q = 0;
  SubQuotient module;  // in block (p, n) coordinates
  Matrix reps;         // representatives in T_n coordinates, one column per generator
};

struct PageDifferential {
  int p = 0, q = 0;   // source
  int tp = 0, tq = 0;  // target
  Matrix matrix;       // on canonical generators
};

struct Page {
  int r = 0;
  std::vector<PageEntry> entries;  // by (p, q)
  std::vector<PageDifferential> differentials;
  const PageEntry* find(int p, int q) const;
};

struct SpectralSequence {
  std::vector<Page> pages;  // E^1, E^2, ...; the last one is E^∞
  int stable_from = 1;      // E^r = E^∞ for r ≥ stable_from
  int n_lo = 0, n_hi = 0;   // total degrees of the computed entries
  int p_lo = 0, p_hi = 0;
  bool bottom_is_edge = true;  // nothing below degree n_lo
  const Page& infinity() const { return pages.back(); }
  // d^r ∘ d^r = 0 on every page and E^{r+1} ≅ H(E^r, d^r) wherever both
  // differentials stay inside the band; violations as text.
  std::vector<std::string> check_pages() const;
};

// Pages E^1 ... E^∞ for entries of total degree n_lo..n_hi (T_{n_hi+1} is
// used when present).
SpectralSequence spectral_pages(const FilteredComplex& K, int n_lo, int n_hi, int jobs = 1);

// Homology of the total complex together with the images of the filtration.
struct FilteredHomology {
  int n = 0;
  SubQuotient homology;                   // H_n(T) inside T_n
  std::vector<Matrix> filtration;         // [p - p_lo]: generators of F_p H_n in homology coordinates
  std::vector<Canonical> graded;          // F_p / F_{p-1}
};

FilteredHomology filtered_homology(const FilteredComplex& K, int n);

// ------------------------------------------------------------ run options

struct Options {
  int n_max = 3;
  int p_max = -1;  // -1: chain bound of the category
  int q_max = -1;  // -1: n_max + 1
  int jobs = 1;
  catmod::ResolutionStrategy strategy = catmod::ResolutionStrategy::Pruned;
};

// --------------------------------------------------------- homology version

// A_{p,q} = ⊕_k M ⊗_C D_chain(b_k, ?) over chains of length p and generators
// b_k of Q_q, where Q resolves N over C^op. Blocks of T_n are ordered by p,
// then by chain, then by k.
struct TorComplex {
  CatPtr C;
  CatModule M, N;
  int p_max = 0, q_max = 0;
  std::vector<std::vector<Chain>> chains;
  NerveComplex nerve;
  Resolution Q;
  FilteredComplex K;
  struct Cell {
    int p = 0, q = 0, chain = 0;
    std::size_t k = 0;
    std::size_t begin = 0, end = 0;  // T_{p+q} coordinates
  };
  std::vector<std::vector<Cell>> cells;  // [n]
  FPComplex MQ;                          // M ⊗_C Q computes Tor(M, N)
  std::vector<SparseMatrix> eps;         // [n]: T_n -> (M ⊗ Q)_n, a chain map
  // vertical complex of one chain: q ↦ ⊕_k M ⊗ D_chain(b_k, ?)
  FPComplex chain_complex(int p, int chain) const;
  // face_i restricted to one chain, in chain_complex coordinates, degree q
  SparseMatrix chain_face(int p, int chain, int i, int q, int& target_chain) const;
  // coordinates of a chain_complex vector inside T_n
  std::vector<std::size_t> chain_coordinates(int p, int chain, int q) const;
};

TorComplex build_tor_complex(const CatModule& M, const CatModule& N, const Options& opt);

struct CellReport {
  int p = 0, q = 0;
  Canonical graded, einf;
  bool match = false;
};

struct DegreeReport {
  int n = 0;
  Canonical oracle, total;
  bool eps_iso = false;  // total complex -> oracle complex induces an iso
  std::vector<CellReport> cells;
};

struct ConvergenceReport {
  int certified_max = 0;  // total degrees 0..certified_max are trustworthy
  std::vector<DegreeReport> degrees;
  bool all_match = false;
  std::string first_mismatch;  // "(p,q)" or empty
};

struct TorRun {
  TorComplex complex;
  SpectralSequence ss;
  ConvergenceReport report;
};

TorRun run_tor(const CatModule& M, const CatModule& N, const Options& opt);
// Throws ComparisonFailed on the first mismatching cell.
ConvergenceReport converge_and_compare(const CatModule& M, const CatModule& N, const Options& opt);

// --------------------------------------------------------- cohomology version

struct E1Check {
  int p = 0, q = 0;
  Chain chain;   // empty for the whole-column comparison
  Canonical direct, filtered;
  bool match = false;
};

struct ExtRun {
  Resolution P;                      // filtered resolution of M, generators labelled by p
  std::vector<std::vector<int>> label;  // [n][k] filtration index of generator k
  bool resolution_exact = false;
  FilteredComplex K;                 // Hom(P, N) regraded: degree -n, index -p
  SpectralSequence ss;               // entry (p, q) holds E_r^{-p,-q}
  ConvergenceReport report;          // cells reported in cohomological indices
  // E_1^{p,q} against the product of group-ring Ext groups; left-free bases only
  bool e1_checked = false;
  std::vector<E1Check> e1;
};

ExtRun ext_pages(const CatModule& M, const CatModule& N, const Options& opt);

// ------------------------------------------------------------ E¹ identities

struct E1Summand {
  int p = 0;
  Chain chain;
  std::vector<Canonical> groups;  // q = 0..q_max-1
};

// Tor over R[aut(c_0)] of M(c_p) ⊗_{R[aut(c_p)]} RS(chain) with N(c_0);
// throws NotLeftFree.
std::vector<E1Summand> e1_direct(const CatModule& M, const CatModule& N, const Options& opt);

struct E1Report {
  std::vector<E1Check> checks;
  bool all_match = false;
};

// Compares e1_direct with E¹ of the filtered complex summand by summand and
// column by column.
E1Report verify_e1(const TorRun& run, const Options& opt);

struct D1Component {
  int i = 0;
  Chain target;
  std::vector<Matrix> filtered;  // [q]: map of per-chain E¹ groups from the face map
  std::vector<linalg::MapInvariants> filtered_invariants;
  // i = 0 only: the change-of-group composite through the full subcategory
  // on c_0, c_1, between the group-ring Tor groups
  std::vector<Matrix> direct;
  std::vector<linalg::MapInvariants> direct_invariants;
};

struct D1Report {
  int p = 0;
  Chain chain;
  std::vector<D1Component> components;
  // Σ (-1)^i components reproduces the page differential
  bool alternating_sum_matches = false;
};

D1Report d1_components(const TorRun& run, int p, int chain, const Options& opt);

// ----------------------------------------------------- two-column sequence

struct LesNode {
  std::string name;  // "E1(1,q)", "E1(0,q)", "Tor(q)"
  int q = 0;
  Canonical group;
  bool checked = false;  // both neighbours inside the certified band
  bool exact = false;
};

struct LesReport {
  std::vector<LesNode> nodes;  // in sequence order from top degree down
  bool exact = false;
};

// Throws NotTwoColumn when chains of length ≥ 2 exist.
LesReport two_column_les(const TorRun& run, const Options& opt);

} // namespace pchain::engine
