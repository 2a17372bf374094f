#pragma once

#include "pchain/io.hpp"

#include <string>

namespace pchain::cli {

using io::ojson;

struct RunConfig {
  linalg::Ring ring = linalg::Ring::integers();
  int n_max = 3;
  int p_max = -1;  // -1: chain bound
  int q_max = -1;  // -1: n_max + 1
  int r_max = -1;  // pages printed; -1: all
  int jobs = 1;
  catmod::ResolutionStrategy strategy = catmod::ResolutionStrategy::Pruned;

  // Throws InvalidArgument when q_max < n_max + 1 or when p_max is below
  // the chain bound of C.
  engine::Options options(const fincat::Category& C) const;
  // Everything that changes results; parallelism is deliberately absent.
  std::string canonical_string() const;
};

// Documents below are deterministic functions of their inputs; a name only
// labels the input in the output.
struct Named {
  std::string name;
  const catmod::CatModule* module = nullptr;
};

// Pages, oracle Tor and the per-cell verdict; all_match is the verdict.
ojson ss_document(const Named& M, const Named& N, const RunConfig& cfg, bool& all_match);
ojson ext_document(const Named& M, const Named& N, const RunConfig& cfg, bool& all_match);
ojson tor_document(const Named& M, const Named& N, const RunConfig& cfg);
ojson chains_document(const fincat::Category& C, int p_max);

struct FamilyQuery {
  const groups::FiniteGroup* G = nullptr;
  const groups::Lattice* L = nullptr;
  groups::Family family, subfamily;
  bool reduce = false;    // subfamily := reduce_family(family)
  bool assembly = false;  // also compare Tor across the inclusion
  const catmod::CatModule* N = nullptr;  // covariant on Or(G, family); null: constant
};
ojson family_document(const FamilyQuery& q, const RunConfig& cfg);
ojson assembly_document(const FamilyQuery& q, const RunConfig& cfg);

// Key material for the result cache.
std::string cache_material(const std::string& command, const RunConfig& cfg, const std::vector<std::string>& inputs);

// Human-readable rendering of a pages document.
std::string pages_table(const ojson& pages, const linalg::Ring& R, bool cohomological);
std::string report_table(const ojson& report, const linalg::Ring& R);

} // namespace pchain::cli
