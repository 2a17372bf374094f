#include "pchain/engine.hpp"
#include "pchain/engine_detail.hpp"
#include "pchain/error.hpp"
#include "blocks.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pchain::engine {

using linalg::Scalar;
using linalg::Vector;

// ------------------------------------------------------------ nerve complex

SparseMatrix NerveComplex::differential(int p, int s, int t) const {
  const Ring R = Ring::integers();
  SparseMatrix D(R, rank(p - 1, s, t), rank(p, s, t));
  for (std::size_t x = 0; x < D.ncols(); ++x) {
    SparseVec col;
    for (int i = 0; i <= p; ++i) {
      const int f = nerve->face(p, s, t, static_cast<int>(x), i);
      if (f < 0) continue;
      SparseVec term{{static_cast<std::size_t>(f), Scalar(i % 2 ? -1 : 1)}};
      linalg::sparse_axpy(R, col, Scalar(1), term);
    }
    D.cols[x] = std::move(col);
  }
  return D;
}

bool NerveComplex::squares_to_zero() const {
  const int n = C->num_objects();
  for (int p = 2; p <= p_max; ++p)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        SparseMatrix a = differential(p - 1, s, t), b = differential(p, s, t);
        SparseMatrix c = a.mul(b);
        for (const auto& col : c.cols)
          if (!col.empty()) return false;
      }
  return true;
}

NerveComplex build_nerve_complex(CatPtr C, int p_max) {
  NerveComplex N;
  N.C = C;
  N.p_max = p_max;
  N.nerve = std::make_shared<fincat::TildeNerve>(C, p_max);
  return N;
}

namespace detail {

int resolve_p_max(const Category& C, const Options& opt) {
  const int bound = fincat::chain_bound(C);
  return opt.p_max < 0 ? bound : std::min(opt.p_max, bound);
}

} // namespace detail

// ------------------------------------------------------------- Tor complex

namespace {

using detail::Block;
using detail::Builder;

void add_block(SparseMatrix& D, const SparseMatrix& piece, std::size_t r0, std::size_t c0, const Scalar& coef) {
  for (std::size_t j = 0; j < piece.ncols(); ++j) {
    SparseVec v;
    for (const auto& [i, x] : piece.cols[j]) v.push_back({i + r0, x});
    linalg::sparse_axpy(D.ring, D.cols[c0 + j], coef, v);
  }
}

} // namespace

TorComplex build_tor_complex(const CatModule& M, const CatModule& N, const Options& opt) {
  if (!M.contravariant() || N.contravariant())
    fail(ErrorKind::VarianceMismatch, "Tor needs M contravariant and N covariant");
  if (M.ring != N.ring) fail(ErrorKind::RingMismatch, "Tor: modules over different rings");
  TorComplex T;
  T.C = M.base;
  T.M = M;
  T.N = N;
  const Category& C = *T.C;
  T.p_max = detail::resolve_p_max(C, opt);
  T.q_max = opt.q_max < 0 ? opt.n_max + 1 : opt.q_max;
  T.chains = fincat::enumerate_chains(C, T.p_max);
  T.nerve = build_nerve_complex(T.C, T.p_max);
  auto Cop = std::make_shared<const Category>(C.opposite());
  T.Q = catmod::free_resolution(N.over_opposite(Cop), T.q_max, opt.strategy);
  const Ring& R = M.ring;
  // every (p, q) with q ≤ q_max, so per-chain vertical complexes are complete
  const int n_top = T.p_max + T.q_max;

  Builder B(M, T.nerve, T.chains);
  FilteredComplex& K = T.K;
  K.ring = R;
  K.n_lo = 0;
  K.n_hi = n_top;
  K.p_lo = 0;
  K.p_hi = T.p_max;
  T.cells.resize(n_top + 1);
  std::vector<std::map<std::tuple<int, int, std::size_t>, std::size_t>> where(n_top + 1);  // (p, chain, k) -> cell
  for (int n = 0; n <= n_top; ++n) {
    std::vector<std::size_t> start;
    std::vector<SparseMatrix> rel;
    std::size_t pos = 0;
    for (int p = 0; p <= T.p_max; ++p) {
      start.push_back(pos);
      const int q = n - p;
      SparseMatrix prel(R, 0, 0);
      const std::size_t pstart = pos;
      if (q >= 0 && q <= T.q_max) {
        for (int ch = 0; ch < static_cast<int>(T.chains[p].size()); ++ch)
          for (std::size_t k = 0; k < T.Q.F[q].rank(); ++k) {
            const Block& blk = B.block(T.Q.F[q].gens[k], p, ch);
            TorComplex::Cell cell{p, q, ch, k, pos, pos + blk.simp.module.gens};
            for (const auto& col : blk.simp.module.rel.cols) {
              SparseVec v;
              for (const auto& [i, x] : col) v.push_back({i + pos - pstart, x});
              prel.cols.push_back(std::move(v));
            }
            where[n][{p, ch, k}] = T.cells[n].size();
            T.cells[n].push_back(cell);
            pos = cell.end;
          }
      }
      prel.rows = pos - pstart;
      rel.push_back(std::move(prel));
    }
    start.push_back(pos);
    K.start.push_back(std::move(start));
    K.rel.push_back(std::move(rel));
  }

  for (int n = 0; n <= n_top; ++n) {
    SparseMatrix D(R, n == 0 ? 0 : K.dim(n - 1), K.dim(n));
    if (n > 0)
      for (const auto& cell : T.cells[n]) {
        const int b = T.Q.F[cell.q].gens[cell.k];
        const Block& src = B.block(b, cell.p, cell.chain);
        // horizontal: faces
        if (cell.p > 0) {
          const auto& chain = T.chains[cell.p][cell.chain];
          for (int i = 0; i <= cell.p; ++i) {
            fincat::Chain c2 = chain;
            c2.erase(c2.begin() + i);
            const int ch2 = B.chain_index(cell.p - 1, c2);
            if (ch2 < 0) continue;
            const auto& tcell = T.cells[n - 1][where[n - 1].at({cell.p - 1, ch2, cell.k})];
            const Block& tgt = B.block(b, cell.p - 1, ch2);
            SparseMatrix piece = B.to_new(tgt, B.face_old(src, tgt, i), src);
            add_block(D, piece, tcell.begin, cell.begin, Scalar(1));
          }
        }
        // vertical: (-1)^p times the resolution differential
        if (cell.q > 0) {
          const Scalar sign(cell.p % 2 ? -1 : 1);
          const auto& img = T.Q.d[cell.q][cell.k];
          const auto& F1 = T.Q.F[cell.q - 1];
          for (const auto& [idx, coef] : img) {
            const auto& [k2, f] = F1.basis[b][idx];
            const auto& tcell = T.cells[n - 1][where[n - 1].at({cell.p, cell.chain, k2})];
            const Block& tgt = B.block(F1.gens[k2], cell.p, cell.chain);
            SparseMatrix piece = B.to_new(tgt, B.precompose_old(src, tgt, f), src);
            add_block(D, piece, tcell.begin, cell.begin, R.mul(sign, coef));
          }
        }
      }
    K.d.push_back(std::move(D));
  }

  // comparison with M ⊗ Q
  T.MQ = catmod::tensor_complex(T.Q, M.over_opposite(Cop));
  const auto& nerve = *T.nerve.nerve;
  for (int n = 0; n <= n_top; ++n) {
    const std::size_t rows = n <= T.q_max ? T.MQ.dims[n] : 0;
    SparseMatrix E(R, rows, K.dim(n));
    if (n <= T.q_max) {
      std::vector<std::size_t> fo;
      std::size_t acc = 0;
      for (int c : T.Q.F[n].gens) {
        fo.push_back(acc);
        acc += M.rank(c);
      }
      for (const auto& cell : T.cells[n]) {
        if (cell.p != 0) continue;
        const int b = T.Q.F[n].gens[cell.k];
        const Block& blk = B.block(b, 0, cell.chain);
        SparseMatrix old(R, rows, blk.old_dim);
        for (int t = 0; t < C.num_objects(); ++t)
          for (std::size_t im = 0; im < M.rank(t); ++im)
            for (std::size_t j = 0; j < blk.nt[t]; ++j) {
              const auto& key = nerve.simplices(0, b, t)[blk.global[t][j]].key;
              const int g = C.compose(key[1], key[0]);
              const Matrix& Mg = M.action[g];  // rank(b) x rank(t)
              SparseVec v;
              for (std::size_t r = 0; r < Mg.rows(); ++r)
                if (sgn(Mg.at(r, im)) != 0) v.push_back({fo[cell.k] + r, Mg.at(r, im)});
              old.cols[blk.old_index(t, im, j)] = std::move(v);
            }
        SparseMatrix piece = old.mul(blk.simp.to_old);
        add_block(E, piece, 0, cell.begin, Scalar(1));
      }
    }
    T.eps.push_back(std::move(E));
  }
  return T;
}

std::vector<std::size_t> TorComplex::chain_coordinates(int p, int chain, int q) const {
  std::vector<std::size_t> out;
  const int n = p + q;
  if (n < 0 || n >= static_cast<int>(cells.size())) return out;
  for (const auto& c : cells[n])
    if (c.p == p && c.chain == chain)
      for (std::size_t i = c.begin; i < c.end; ++i) out.push_back(i);
  return out;
}

FPComplex TorComplex::chain_complex(int p, int chain) const {
  FPComplex X;
  X.ring = K.ring;
  const int top = static_cast<int>(cells.size()) - 1 - p;
  std::vector<std::vector<std::size_t>> coords;
  for (int q = 0; q <= top; ++q) coords.push_back(chain_coordinates(p, chain, q));
  for (int q = 0; q <= top; ++q) {
    const int n = p + q;
    std::map<std::size_t, std::size_t> loc;
    for (std::size_t i = 0; i < coords[q].size(); ++i) loc[coords[q][i]] = i;
    X.dims.push_back(coords[q].size());
    // relations of the chain's cells
    SparseMatrix rel(K.ring, coords[q].size(), 0);
    const std::size_t b0 = K.lo(n, p);
    for (const auto& col : K.block_relations(n, p).cols) {
      if (col.empty() || !loc.count(col.front().first + b0)) continue;
      SparseVec v;
      for (const auto& [i, x] : col) v.push_back({loc.at(i + b0), x});
      rel.cols.push_back(std::move(v));
    }
    X.rel.push_back(std::move(rel));
    SparseMatrix d(K.ring, q == 0 ? 0 : coords[q - 1].size(), coords[q].size());
    if (q > 0) {
      std::map<std::size_t, std::size_t> lo2;
      for (std::size_t i = 0; i < coords[q - 1].size(); ++i) lo2[coords[q - 1][i]] = i;
      const Scalar sign(p % 2 ? -1 : 1);
      for (std::size_t j = 0; j < coords[q].size(); ++j)
        for (const auto& [i, x] : K.d[n].cols[coords[q][j]]) {
          auto it = lo2.find(i);
          if (it != lo2.end()) d.cols[j].push_back({it->second, K.ring.mul(sign, x)});
        }
    }
    X.d.push_back(std::move(d));
  }
  return X;
}

SparseMatrix TorComplex::chain_face(int p, int chain, int i, int q, int& target_chain) const {
  fincat::Chain c2 = chains[p][chain];
  c2.erase(c2.begin() + i);
  target_chain = -1;
  for (std::size_t c = 0; c < chains[p - 1].size(); ++c)
    if (chains[p - 1][c] == c2) target_chain = static_cast<int>(c);
  auto src = chain_coordinates(p, chain, q);
  auto tgt = chain_coordinates(p - 1, target_chain, q);
  SparseMatrix F(K.ring, tgt.size(), src.size());
  if (target_chain < 0) return F;
  // the face is the part of d landing in the target chain, with the
  // alternating sign removed; only face i joins these two chains
  std::map<std::size_t, std::size_t> loc;
  for (std::size_t k = 0; k < tgt.size(); ++k) loc[tgt[k]] = k;
  const Scalar sign(i % 2 ? -1 : 1);
  for (std::size_t j = 0; j < src.size(); ++j)
    for (const auto& [r, x] : K.d[p + q].cols[src[j]]) {
      auto it = loc.find(r);
      if (it != loc.end()) F.cols[j].push_back({it->second, K.ring.mul(sign, x)});
    }
  return F;
}

// --------------------------------------------------------------- convergence

namespace detail {

Matrix order_diagonal(const Ring& R, const std::vector<mpz_class>& orders) {
  Matrix D(R, orders.size(), 0);
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] != 0) {
      Vector v(orders.size());
      v[i] = Scalar(orders[i]);
      D.append_column(v);
    }
  return D;
}

std::vector<Canonical> graded_in(const SubQuotient& H, const std::vector<Matrix>& filtration) {
  const Ring& R = H.ring();
  Matrix D = order_diagonal(R, H.orders());
  Matrix prev(R, H.num_gens(), 0);
  std::vector<Canonical> out;
  for (const Matrix& F : filtration) {
    SubQuotient g = SubQuotient::compute(R, H.num_gens(), Matrix::hcat(F, D), Matrix::hcat(prev, D));
    out.push_back(g.canonical());
    prev = Matrix::hcat(prev, F);
  }
  return out;
}

} // namespace detail

TorRun run_tor(const CatModule& M, const CatModule& N, const Options& opt) {
  TorRun run;
  run.complex = build_tor_complex(M, N, opt);
  const TorComplex& T = run.complex;
  const int cert = std::min(opt.n_max, T.q_max - 1);
  run.ss = spectral_pages(T.K, 0, cert, opt.jobs);
  std::vector<Canonical> oracle = catmod::tor(M, N, cert, opt.strategy);
  ConvergenceReport& rep = run.report;
  rep.certified_max = cert;
  rep.all_match = true;
  for (int n = 0; n <= cert; ++n) {
    DegreeReport dr;
    dr.n = n;
    dr.oracle = oracle[n];
    FilteredHomology fh = filtered_homology(T.K, n);
    dr.total = fh.homology.canonical();
    SubQuotient Hq = T.MQ.homology(n);
    Matrix phi = linalg::induced_map(fh.homology, Hq, T.eps[n]);
    dr.eps_iso = linalg::map_invariants(phi, fh.homology.orders(), Hq.orders()).is_iso() &&
                 Hq.canonical() == oracle[n];
    std::vector<Matrix> images;
    for (const Matrix& F : fh.filtration) images.push_back(phi * F);
    std::vector<Canonical> graded = detail::graded_in(Hq, images);
    for (int p = T.K.p_lo; p <= T.K.p_hi; ++p) {
      CellReport c;
      c.p = p;
      c.q = n - p;
      c.graded = graded[p - T.K.p_lo];
      const PageEntry* e = run.ss.infinity().find(p, n - p);
      c.einf = e ? e->module.canonical() : Canonical::free(M.ring, 0);
      c.match = c.graded == c.einf;
      if (!c.match && rep.first_mismatch.empty()) {
        rep.first_mismatch = "(" + std::to_string(c.p) + "," + std::to_string(c.q) + ")";
        rep.all_match = false;
      }
      dr.cells.push_back(c);
    }
    if ((!dr.eps_iso || dr.total != dr.oracle) && rep.first_mismatch.empty()) {
      rep.first_mismatch = "total degree " + std::to_string(n);
      rep.all_match = false;
    }
    rep.degrees.push_back(std::move(dr));
  }
  return run;
}

ConvergenceReport converge_and_compare(const CatModule& M, const CatModule& N, const Options& opt) {
  TorRun run = run_tor(M, N, opt);
  if (!run.report.all_match) fail(ErrorKind::ComparisonFailed, "E-infinity differs from the oracle at " + run.report.first_mismatch);
  return run.report;
}

} // namespace pchain::engine
