#pragma once

// Internal: the building blocks M ⊗_C D_chain(b, ?) shared by the homology
// and cohomology constructions.

#include "pchain/engine.hpp"
#include "pchain/error.hpp"

#include <map>
#include <tuple>

namespace pchain::engine::detail {

using linalg::Scalar;

struct Block {
  int b = 0, p = 0, chain = 0;
  std::vector<std::vector<int>> global;  // [t][local] -> index in simplices(p, b, t)
  std::vector<std::size_t> offset;       // tensor presentation offsets
  std::vector<std::size_t> nt;           // simplices per t
  linalg::Simplified simp;
  std::size_t old_dim = 0;
  std::size_t old_index(int t, std::size_t i, std::size_t local) const { return offset[t] + i * nt[t] + local; }
};

// Blocks M ⊗_C D_chain(b, ?); chain -1 takes every chain of length p.
class Builder {
public:
  Builder(const CatModule& M, const NerveComplex& nc, const std::vector<std::vector<Chain>>& chains)
      : M_(M), nc_(nc), C_(*nc.C) {
    const auto& nerve = *nc.nerve;
    const int n = C_.num_objects();
    pos_.resize(nc.p_max + 1);
    for (int p = 0; p <= nc.p_max; ++p) {
      std::map<fincat::Chain, int> chain_id;
      for (std::size_t c = 0; c < chains[p].size(); ++c) chain_id[chains[p][c]] = static_cast<int>(c);
      chain_id_.push_back(chain_id);
      pos_[p].resize(static_cast<std::size_t>(n) * n);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          const auto& simp = nerve.simplices(p, s, t);
          auto& v = pos_[p][s * n + t];
          std::map<int, int> next;
          for (const auto& x : simp) {
            const int c = chain_id.at(x.chain);
            v.push_back({c, next[c]++});
          }
        }
    }
  }

  int chain_index(int p, const fincat::Chain& c) const {
    auto it = chain_id_[p].find(c);
    return it == chain_id_[p].end() ? -1 : it->second;
  }

  const Block& block(int b, int p, int chain) {
    auto key = std::make_tuple(b, p, chain);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return it->second;
    const auto& nerve = *nc_.nerve;
    const int n = C_.num_objects();
    Block B;
    B.b = b;
    B.p = p;
    B.chain = chain;
    B.global.resize(n);
    B.nt.resize(n);
    for (int t = 0; t < n; ++t) {
      const auto& v = pos_[p][b * n + t];
      for (std::size_t x = 0; x < v.size(); ++x)
        if (chain < 0 || v[x].first == chain) B.global[t].push_back(static_cast<int>(x));
      B.nt[t] = B.global[t].size();
    }
    CatModule D = catmod::permutation_module(nc_.C, M_.ring, catmod::Variance::Covariant, B.nt, [&](int f) {
      const int t = C_.src(f), t2 = C_.tgt(f);
      std::vector<int> img;
      for (int g : B.global[t]) img.push_back(slot(chain, p, b, t2, nerve.postcompose(p, b, t, g, f)));
      return img;
    });
    catmod::TensorPresentation tp = catmod::tensor_presentation(M_, D);
    B.offset = tp.offset;
    B.old_dim = tp.module.gens;
    B.simp = linalg::simplify(tp.module);
    return blocks_.emplace(key, std::move(B)).first->second;
  }

  int local(int p, int s, int t, int global) const {
    return pos_[p][s * C_.num_objects() + t][global].second;
  }
  // coordinate inside a block; all-chain blocks keep the global order
  int slot(int chain, int p, int s, int t, int global) const { return chain < 0 ? global : local(p, s, t, global); }
  int chain_of(int p, int s, int t, int global) const {
    return pos_[p][s * C_.num_objects() + t][global].first;
  }

  // old-coordinate map of face_i from block (b, p, chain) to (b, p-1, chain')
  SparseMatrix face_old(const Block& src, const Block& tgt, int i) const {
    const auto& nerve = *nc_.nerve;
    const Ring& R = M_.ring;
    SparseMatrix F(R, tgt.old_dim, src.old_dim);
    const Scalar sign(i % 2 ? -1 : 1);
    for (int t = 0; t < C_.num_objects(); ++t)
      for (std::size_t im = 0; im < M_.rank(t); ++im)
        for (std::size_t j = 0; j < src.nt[t]; ++j) {
          const int f = nerve.face(src.p, src.b, t, src.global[t][j], i);
          if (f < 0) continue;
          if (tgt.chain >= 0 && chain_of(src.p - 1, src.b, t, f) != tgt.chain)
            fail(ErrorKind::InvalidArgument, "face of a simplex lands outside the removed chain");
          const std::size_t l = static_cast<std::size_t>(slot(tgt.chain, src.p - 1, src.b, t, f));
          F.cols[src.old_index(t, im, j)] = {{tgt.old_index(t, im, l), sign}};
        }
    return F;
  }

  // old-coordinate map σ ↦ σ∘f from block (b, p, chain) to (b', p, chain), f: b' -> b
  SparseMatrix precompose_old(const Block& src, const Block& tgt, int f) const {
    const auto& nerve = *nc_.nerve;
    const Ring& R = M_.ring;
    SparseMatrix F(R, tgt.old_dim, src.old_dim);
    for (int t = 0; t < C_.num_objects(); ++t)
      for (std::size_t im = 0; im < M_.rank(t); ++im)
        for (std::size_t j = 0; j < src.nt[t]; ++j) {
          const int g = nerve.precompose(src.p, src.b, t, src.global[t][j], f);
          const std::size_t l = static_cast<std::size_t>(slot(tgt.chain, src.p, tgt.b, t, g));
          F.cols[src.old_index(t, im, j)] = {{tgt.old_index(t, im, l), Scalar(1)}};
        }
    return F;
  }

  SparseMatrix to_new(const Block& tgt, const SparseMatrix& old, const Block& src) const {
    return tgt.simp.to_new.mul(old).mul(src.simp.to_old);
  }

private:
  const CatModule& M_;
  const NerveComplex& nc_;
  const Category& C_;
  std::vector<std::vector<std::vector<std::pair<int, int>>>> pos_;  // [p][s*n+t][global] = (chain, local)
  std::vector<std::map<fincat::Chain, int>> chain_id_;
  std::map<std::tuple<int, int, int>, Block> blocks_;
};

} // namespace pchain::engine::detail
