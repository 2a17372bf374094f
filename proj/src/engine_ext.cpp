#include "blocks.hpp"
#include "pchain/engine.hpp"
#include "pchain/engine_detail.hpp"
#include "pchain/error.hpp"

#include <algorithm>
#include <map>

namespace pchain::engine {

using catmod::FreeModule;
using linalg::Scalar;
using linalg::SpanSolver;
using linalg::Vector;

namespace {

SparseVec dense_to_sparse(const Vector& v) { return linalg::sparse_from_dense(v); }

Vector apply_to(const SparseMatrix& A, const SparseVec& x) {
  return linalg::dense_from_sparse(A.apply(x), A.rows);
}

} // namespace

// The total resolution is built column by column: generators of a free
// resolution P^(p) of K_p = M ⊗_C D_p(?, ??) get the differential
// d_{P^(p)} + L with L landing in lower columns, chosen so that ∂∂ = 0 and
// the degree-0 generators cover the horizontal differential of K.
ExtRun ext_pages(const CatModule& M, const CatModule& N, const Options& opt) {
  if (!M.contravariant() || !N.contravariant()) fail(ErrorKind::VarianceMismatch, "Ext needs both modules contravariant");
  if (M.ring != N.ring) fail(ErrorKind::RingMismatch, "Ext: modules over different rings");
  CatPtr Cp = M.base;
  const Category& C = *Cp;
  const Ring& R = M.ring;
  const int p_max = detail::resolve_p_max(C, opt);
  const int n_top = opt.q_max < 0 ? opt.n_max + 1 : opt.q_max;
  const int cert = std::min(opt.n_max, n_top - 1);
  auto chains = fincat::enumerate_chains(C, p_max);
  NerveComplex nc = build_nerve_complex(Cp, p_max);
  detail::Builder B(M, nc, chains);
  const int n_obj = C.num_objects();

  // K_p with its horizontal differential and the augmentation K_0 -> M
  std::vector<CatModule> K(p_max + 1);
  std::vector<std::vector<SparseMatrix>> dh(p_max + 1);  // dh[p][s]: K_p(s) -> K_{p-1}(s)
  std::vector<SparseMatrix> aug(n_obj);
  for (int p = 0; p <= p_max; ++p) {
    CatModule& Kp = K[p];
    Kp.base = Cp;
    Kp.variance = catmod::Variance::Contravariant;
    Kp.ring = R;
    for (int s = 0; s < n_obj; ++s) Kp.value.push_back(B.block(s, p, -1).simp.module);
    for (int u = 0; u < C.num_morphisms(); ++u) {
      const auto& src = B.block(C.tgt(u), p, -1);
      const auto& tgt = B.block(C.src(u), p, -1);
      Kp.action.push_back(B.to_new(tgt, B.precompose_old(src, tgt, u), src).to_dense());
    }
    if (p > 0)
      for (int s = 0; s < n_obj; ++s) {
        const auto& src = B.block(s, p, -1);
        const auto& tgt = B.block(s, p - 1, -1);
        SparseMatrix sum(R, tgt.old_dim, src.old_dim);
        for (int i = 0; i <= p; ++i) {
          SparseMatrix f = B.face_old(src, tgt, i);
          for (std::size_t j = 0; j < f.ncols(); ++j) linalg::sparse_axpy(R, sum.cols[j], Scalar(1), f.cols[j]);
        }
        dh[p].push_back(B.to_new(tgt, sum, src));
      }
  }
  const auto& nerve = *nc.nerve;
  for (int s = 0; s < n_obj; ++s) {
    const auto& blk = B.block(s, 0, -1);
    SparseMatrix old(R, M.rank(s), blk.old_dim);
    for (int t = 0; t < n_obj; ++t)
      for (std::size_t im = 0; im < M.rank(t); ++im)
        for (std::size_t j = 0; j < blk.nt[t]; ++j) {
          const auto& key = nerve.simplices(0, s, t)[blk.global[t][j]].key;
          const Matrix& Mg = M.action[C.compose(key[1], key[0])];
          SparseVec v;
          for (std::size_t r = 0; r < Mg.rows(); ++r)
            if (sgn(Mg.at(r, im)) != 0) v.push_back({r, Mg.at(r, im)});
          old.cols[blk.old_index(t, im, j)] = std::move(v);
        }
    aug[s] = old.mul(blk.simp.to_old);
  }

  std::vector<Resolution> P;
  for (int p = 0; p <= p_max; ++p) P.push_back(catmod::free_resolution(K[p], std::max(0, n_top - p), opt.strategy));

  // total generators per degree, appended column by column
  std::vector<std::vector<int>> gens(n_top + 1), label(n_top + 1);
  std::vector<std::vector<SparseVec>> dvec(n_top + 1);
  std::vector<std::vector<std::size_t>> first(p_max + 1, std::vector<std::size_t>(n_top + 1, 0));  // first gen of column p
  for (int p = 0; p <= p_max; ++p) {
    std::vector<FreeModule> prev;
    std::vector<std::size_t> nprev;
    for (int m = 0; m <= n_top; ++m) {
      prev.emplace_back(Cp, gens[m]);
      nprev.push_back(gens[m].size());
    }
    const int q_hi = n_top - p;
    std::vector<std::vector<SparseVec>> L(q_hi + 1);
    std::map<std::pair<int, int>, SpanSolver> solvers;
    std::map<std::pair<int, int>, std::size_t> width;  // unknowns in F_{p-1}
    // constraint system at degree mm, object b: ∂ on F_{p-1}, plus the cover
    // of K_{p-1} in degree p-1 with its relations as free variables
    auto solver = [&](int mm, int b) -> const SpanSolver& {
      auto key = std::make_pair(mm, b);
      auto it = solvers.find(key);
      if (it != solvers.end()) return it->second;
      const std::size_t nc_ = prev[mm].dim[b];
      const std::size_t nr = mm >= 1 ? prev[mm - 1].dim[b] : 0;
      const bool cover = mm == p - 1;
      const std::size_t nk = cover ? K[p - 1].rank(b) : 0;
      const auto& krel = K[p - 1].value[b].rel;
      Matrix A(R, nr + nk, nc_ + (cover ? krel.ncols() : 0));
      if (mm >= 1) {
        SparseMatrix D = catmod::eval_free_map(prev[mm], std::vector<SparseVec>(dvec[mm].begin(), dvec[mm].begin() + nprev[mm]),
                                               prev[mm - 1], b, R);
        for (std::size_t j = 0; j < D.ncols(); ++j)
          for (const auto& [i, x] : D.cols[j]) A.at(i, j) = x;
      }
      if (cover) {
        const FreeModule& Q0 = P[p - 1].F[0];
        SparseMatrix E = catmod::eval_free_map(Q0, P[p - 1].d[0], K[p - 1], b);
        // columns of column p-1, degree p-1 start at first[p-1][p-1]
        const std::size_t g0 = first[p - 1][mm];
        const std::size_t off = g0 < prev[mm].rank() ? prev[mm].offset[b][g0] : prev[mm].dim[b];
        for (std::size_t j = 0; j < E.ncols(); ++j)
          for (const auto& [i, x] : E.cols[j]) A.at(nr + i, off + j) = x;
        for (std::size_t c = 0; c < krel.ncols(); ++c)
          for (const auto& [i, x] : krel.cols[c]) A.at(nr + i, nc_ + c) = x;
      }
      width[key] = nc_;
      return solvers.emplace(key, SpanSolver(A)).first->second;
    };
    for (int q = 0; q <= q_hi; ++q) {
      const int m = p + q;
      const FreeModule& Fq = P[p].F[q];
      first[p][m] = gens[m].size();
      L[q].resize(Fq.rank());
      for (std::size_t k = 0; k < Fq.rank(); ++k) {
        const int b = Fq.gens[k];
        if (p == 0 || m - 1 < 0) continue;
        const int mm = m - 1;
        const SpanSolver& S = solver(mm, b);
        const std::size_t nr = mm >= 1 ? prev[mm - 1].dim[b] : 0;
        Vector rhs(S.ambient());
        if (q == 0) {
          Vector e = apply_to(dh[p][b], P[p].d[0][k]);
          for (std::size_t i = 0; i < e.size(); ++i) rhs[nr + i] = e[i];
        } else {
          // -L(d x)
          SparseMatrix Ld = catmod::eval_free_map(P[p].F[q - 1], L[q - 1], prev[mm - 1], b, R);
          Vector w = apply_to(Ld, P[p].d[q][k]);
          for (std::size_t i = 0; i < w.size(); ++i) rhs[i] = R.neg(w[i]);
        }
        auto sol = S.solve(rhs);
        if (!sol) fail(ErrorKind::LiftFailed, "no lower-column correction for a generator");
        Vector x(sol->begin(), sol->begin() + width.at({mm, b}));
        L[q][k] = dense_to_sparse(x);
      }
      // append the generators of P^(p)_q to degree m
      for (std::size_t k = 0; k < Fq.rank(); ++k) {
        gens[m].push_back(Fq.gens[k]);
        label[m].push_back(p);
      }
      FreeModule cur_prev(Cp, m >= 1 ? gens[m - 1] : std::vector<int>{});
      for (std::size_t k = 0; k < Fq.rank(); ++k) {
        const int b = Fq.gens[k];
        if (m == 0) {
          dvec[0].push_back(dense_to_sparse(apply_to(aug[b], P[0].d[0][k])));
          continue;
        }
        SparseVec v = L[q][k];
        if (q >= 1) {
          const FreeModule& F1 = P[p].F[q - 1];
          SparseVec w;
          for (const auto& [idx, coef] : P[p].d[q][k]) {
            const auto& [k2, f] = F1.basis[b][idx];
            w.push_back({cur_prev.index(b, first[p][m - 1] + k2, f), coef});
          }
          std::sort(w.begin(), w.end(), [](const auto& a, const auto& c) { return a.first < c.first; });
          linalg::sparse_axpy(R, v, Scalar(1), w);
        }
        dvec[m].push_back(std::move(v));
      }
    }
  }

  ExtRun run;
  run.P.C = Cp;
  run.P.ring = R;
  for (int m = 0; m <= n_top; ++m) {
    run.P.F.emplace_back(Cp, gens[m]);
    run.P.d.push_back(dvec[m]);
  }
  run.label = label;
  run.resolution_exact = catmod::resolution_is_exact(run.P, M);

  // Hom(P, N) regraded homologically: T_{-n} = Hom(P_n, N), block -p holds
  // the generators of column p
  FPComplex H = catmod::hom_cocomplex(run.P, N);
  FilteredComplex& F = run.K;
  F.ring = R;
  F.n_lo = -n_top;
  F.n_hi = 0;
  F.p_lo = -p_max;
  F.p_hi = 0;
  std::vector<std::vector<std::size_t>> perm(n_top + 1);  // old coordinate of each new one
  std::vector<std::vector<std::size_t>> inv(n_top + 1);
  for (int i = 0; i <= n_top; ++i) {
    const int n = n_top - i;
    std::vector<std::size_t> off;
    std::size_t acc = 0;
    for (int g : gens[n]) {
      off.push_back(acc);
      acc += N.rank(g);
    }
    std::vector<std::size_t> start;
    std::vector<SparseMatrix> rel;
    for (int pp = -p_max; pp <= 0; ++pp) {
      start.push_back(perm[n].size());
      SparseMatrix br(R, 0, 0);
      const std::size_t b0 = perm[n].size();
      for (std::size_t k = 0; k < gens[n].size(); ++k) {
        if (label[n][k] != -pp) continue;
        const std::size_t here = perm[n].size();
        for (std::size_t j = 0; j < N.rank(gens[n][k]); ++j) perm[n].push_back(off[k] + j);
        for (const auto& col : N.value[gens[n][k]].rel.cols) {
          SparseVec v;
          for (const auto& [r, x] : col) v.push_back({here - b0 + r, x});
          br.cols.push_back(std::move(v));
        }
      }
      br.rows = perm[n].size() - b0;
      rel.push_back(std::move(br));
    }
    start.push_back(perm[n].size());
    inv[n].assign(perm[n].size(), 0);
    for (std::size_t a = 0; a < perm[n].size(); ++a) inv[n][perm[n][a]] = a;
    F.start.push_back(std::move(start));
    F.rel.push_back(std::move(rel));
  }
  for (int i = 0; i <= n_top; ++i) {
    const int n = n_top - i;
    if (n == n_top) {
      F.d.emplace_back(R, 0, perm[n].size());
      continue;
    }
    const SparseMatrix& D = H.d[n + 1];  // C^n -> C^{n+1}
    SparseMatrix E(R, perm[n + 1].size(), perm[n].size());
    for (std::size_t a = 0; a < perm[n].size(); ++a) {
      SparseVec v;
      for (const auto& [r, x] : D.cols[perm[n][a]]) v.push_back({inv[n + 1][r], x});
      std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
      E.cols[a] = std::move(v);
    }
    F.d.push_back(std::move(E));
  }
  run.ss = spectral_pages(F, -cert, 0, opt.jobs);

  std::vector<Canonical> oracle = catmod::ext(M, N, cert, opt.strategy);
  ConvergenceReport& rep = run.report;
  rep.certified_max = cert;
  rep.all_match = run.resolution_exact;
  if (!run.resolution_exact) rep.first_mismatch = "filtered resolution not exact";
  for (int n = 0; n <= cert; ++n) {
    DegreeReport dr;
    dr.n = n;
    dr.oracle = oracle[n];
    FilteredHomology fh = filtered_homology(F, -n);
    dr.total = fh.homology.canonical();
    dr.eps_iso = dr.total == dr.oracle;
    for (int p = 0; p <= p_max; ++p) {
      CellReport c;
      c.p = p;
      c.q = n - p;
      c.graded = fh.graded[-p - F.p_lo];
      const PageEntry* e = run.ss.infinity().find(-p, -(n - p));
      c.einf = e ? e->module.canonical() : Canonical::free(R, 0);
      c.match = c.graded == c.einf;
      if (!c.match && rep.first_mismatch.empty()) {
        rep.first_mismatch = "(" + std::to_string(c.p) + "," + std::to_string(c.q) + ")";
        rep.all_match = false;
      }
      dr.cells.push_back(c);
    }
    if (!dr.eps_iso && rep.first_mismatch.empty()) {
      rep.first_mismatch = "total degree " + std::to_string(n);
      rep.all_match = false;
    }
    rep.degrees.push_back(std::move(dr));
  }

  // E_1 against products of group-ring Ext
  if (C.is_left_free()) {
    run.e1_checked = true;
    const Page& E1 = run.ss.pages.front();
    for (int p = 0; p <= p_max; ++p) {
      std::vector<std::vector<Canonical>> per_chain;
      for (const auto& ch : chains[p]) {
        detail::ChainModule cm = detail::chain_module(Cp, M, ch);
        CatModule Nc = catmod::restrict_module(cm.inclusion, N);
        per_chain.push_back(catmod::ext(cm.A, Nc, cert, opt.strategy));
      }
      for (int q = 0; p + q <= cert; ++q) {
        E1Check e;
        e.p = p;
        e.q = q;
        std::vector<Canonical> parts;
        for (const auto& g : per_chain) parts.push_back(g[q]);
        e.direct = Canonical::direct_sum(parts);
        const PageEntry* x = E1.find(-p, -q);
        e.filtered = x ? x->module.canonical() : Canonical::free(R, 0);
        e.match = e.direct == e.filtered;
        run.e1.push_back(std::move(e));
      }
    }
  }
  return run;
}

} // namespace pchain::engine
