#include "pchain/engine.hpp"
#include "pchain/engine_detail.hpp"
#include "pchain/error.hpp"
#include "pchain/parallel.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

namespace pchain::engine {

using linalg::Scalar;
using linalg::Vector;

namespace detail {

ChainModule chain_module(CatPtr C, const CatModule& M, const Chain& chain) {
  const Category& c = *C;
  ChainModule out;
  out.biset = fincat::chain_biset(c, chain);
  const auto& S = out.biset;
  const int c0 = S.reps.front(), cp = S.reps.back();
  out.inclusion = fincat::automorphism_subcategory(C, c0);
  if (chain.size() == 1) {
    out.A = catmod::restrict_module(out.inclusion, M);
    return out;
  }
  const Ring& R = M.ring;
  const std::size_t m = M.rank(cp), s = S.size();
  FPModule T(R, m * s);
  for (const auto& r : M.value[cp].rel.cols)
    for (std::size_t x = 0; x < s; ++x) {
      SparseVec v;
      for (const auto& [i, a] : r) v.push_back({i * s + x, a});
      T.rel.cols.push_back(std::move(v));
    }
  // (e_i · u) ⊗ x = e_i ⊗ (u · x)
  for (std::size_t a = 0; a < S.left_aut.size(); ++a) {
    const int u = S.left_aut[a];
    if (c.is_identity(u)) continue;
    const Matrix& Mu = M.action[u];
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t x = 0; x < s; ++x) {
        SparseVec v;
        for (std::size_t r = 0; r < m; ++r)
          if (sgn(Mu.at(r, i)) != 0) v.push_back({r * s + x, Mu.at(r, i)});
        SparseVec w{{i * s + static_cast<std::size_t>(S.left[a][x]), Scalar(1)}};
        linalg::sparse_axpy(R, v, Scalar(-1), w);
        if (!v.empty()) T.rel.cols.push_back(std::move(v));
      }
  }
  linalg::Simplified simp = linalg::simplify(T);
  out.to_new = simp.to_new;
  out.to_old = simp.to_old;
  CatModule& A = out.A;
  A.base = out.inclusion.source;
  A.variance = catmod::Variance::Contravariant;
  A.ring = R;
  A.value = {simp.module};
  for (std::size_t j = 0; j < S.right_aut.size(); ++j) {
    SparseMatrix old(R, m * s, m * s);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t x = 0; x < s; ++x) old.cols[i * s + x] = {{i * s + static_cast<std::size_t>(S.right[j][x]), Scalar(1)}};
    A.action.push_back(simp.to_new.mul(old).mul(simp.to_old).to_dense());
  }
  A.check();
  return out;
}

namespace {

// Chain complex of free modules reduced along unit entries of the
// differentials; homology is preserved.
struct SparseChainComplex {
  Ring ring;
  std::vector<std::size_t> dims;
  std::vector<std::vector<SparseVec>> d;  // d[q][j]: column j of C_q -> C_{q-1}

  void reduce() {
    const int top = static_cast<int>(dims.size()) - 1;
    std::vector<std::vector<char>> alive(top + 1);
    std::vector<std::vector<std::set<std::size_t>>> rows(top + 1);  // rows[q][x]: columns of d[q] hitting x
    for (int q = 0; q <= top; ++q) {
      alive[q].assign(dims[q], 1);
      if (q > 0) {
        rows[q].resize(dims[q - 1]);
        for (std::size_t j = 0; j < dims[q]; ++j)
          for (const auto& [i, x] : d[q][j]) rows[q][i].insert(j);
      }
    }
    auto set_col = [&](int q, std::size_t j, SparseVec v) {
      for (const auto& [i, x] : d[q][j]) rows[q][i].erase(j);
      d[q][j] = std::move(v);
      for (const auto& [i, x] : d[q][j]) rows[q][i].insert(j);
    };
    for (int q = 1; q <= top; ++q) {
      for (std::size_t y = 0; y < dims[q]; ++y) {
        if (!alive[q][y]) continue;
        // unit entry whose row is shortest
        std::size_t best = SIZE_MAX, bx = 0;
        Scalar bu;
        for (const auto& [i, x] : d[q][y])
          if (ring.is_unit(x) && rows[q][i].size() < best) {
            best = rows[q][i].size();
            bx = i;
            bu = x;
          }
        if (best == SIZE_MAX) continue;
        const SparseVec cy = d[q][y];
        const Scalar uinv = ring.inverse(bu);
        std::vector<std::size_t> hit(rows[q][bx].begin(), rows[q][bx].end());
        for (std::size_t j : hit) {
          if (j == y) continue;
          const Scalar* b = linalg::sparse_find(d[q][j], bx);
          Scalar coef = ring.neg(ring.mul(*b, uinv));
          SparseVec v = d[q][j];
          linalg::sparse_axpy(ring, v, coef, cy);
          set_col(q, j, std::move(v));
        }
        set_col(q, y, {});
        alive[q][y] = 0;
        alive[q - 1][bx] = 0;
        // drop column bx of d[q-1] and row y of d[q+1]
        if (q - 1 >= 1) set_col(q - 1, bx, {});
        if (q + 1 <= top) {
          std::vector<std::size_t> up(rows[q + 1][y].begin(), rows[q + 1][y].end());
          for (std::size_t j : up) {
            SparseVec v;
            for (const auto& e : d[q + 1][j])
              if (e.first != y) v.push_back(e);
            set_col(q + 1, j, std::move(v));
          }
        }
      }
    }
    // compact
    std::vector<std::vector<long>> pos(top + 1);
    std::vector<std::size_t> nd(top + 1, 0);
    for (int q = 0; q <= top; ++q) {
      pos[q].assign(dims[q], -1);
      for (std::size_t j = 0; j < dims[q]; ++j)
        if (alive[q][j]) pos[q][j] = static_cast<long>(nd[q]++);
    }
    std::vector<std::vector<SparseVec>> nd_d(top + 1);
    for (int q = 0; q <= top; ++q) {
      nd_d[q].resize(nd[q]);
      if (q == 0) continue;
      for (std::size_t j = 0; j < dims[q]; ++j) {
        if (!alive[q][j]) continue;
        SparseVec v;
        for (const auto& [i, x] : d[q][j]) {
          if (pos[q - 1][i] < 0) fail(ErrorKind::InvalidArgument, "reduction left an entry in a removed row");
          v.push_back({static_cast<std::size_t>(pos[q - 1][i]), x});
        }
        nd_d[q][pos[q][j]] = std::move(v);
      }
    }
    dims = nd;
    d = std::move(nd_d);
  }

  FPComplex complex() const {
    FPComplex K;
    K.ring = ring;
    for (std::size_t q = 0; q < dims.size(); ++q) {
      K.dims.push_back(dims[q]);
      K.rel.emplace_back(ring, dims[q], 0);
      SparseMatrix D(ring, q == 0 ? 0 : dims[q - 1], dims[q]);
      D.cols = d[q];
      K.d.push_back(std::move(D));
    }
    return K;
  }
};

// words of length q in the non-identity elements, base-(|G|-1) digits
void word(std::size_t idx, int q, std::size_t base, std::vector<int>& out) {
  out.assign(q, 0);
  for (int k = q - 1; k >= 0; --k) {
    out[k] = static_cast<int>(idx % base);
    idx /= base;
  }
}

} // namespace

std::vector<Canonical> group_ring_tor(const CatModule& A, const CatModule& N, int q_top) {
  const Category& G = *A.base;
  if (G.num_objects() != 1) fail(ErrorKind::InvalidArgument, "group ring Tor needs a one-object category");
  if (!A.value[0].is_free_presentation() || !N.value[0].is_free_presentation())
    return catmod::tor(A, N, q_top);
  const Ring& R = A.ring;
  std::vector<int> nonid;
  for (int g = 0; g < G.num_morphisms(); ++g)
    if (!G.is_identity(g)) nonid.push_back(g);
  std::vector<int> slot(G.num_morphisms(), -1);
  for (std::size_t k = 0; k < nonid.size(); ++k) slot[nonid[k]] = static_cast<int>(k);
  const std::size_t base = nonid.size(), da = A.rank(0), dn = N.rank(0);
  SparseChainComplex X;
  X.ring = R;
  std::vector<std::size_t> words(q_top + 2, 1);
  for (int q = 1; q <= q_top + 1; ++q) words[q] = words[q - 1] * base;
  for (int q = 0; q <= q_top + 1; ++q) X.dims.push_back(da * words[q] * dn);
  auto index = [&](std::size_t i, std::size_t w, std::size_t j, int q) { return (i * words[q] + w) * dn + j; };
  auto encode = [&](const std::vector<int>& ws) {
    std::size_t w = 0;
    for (int s : ws) w = w * base + static_cast<std::size_t>(s);
    return w;
  };
  X.d.resize(q_top + 2);
  std::vector<int> ws, ws2;
  for (int q = 0; q <= q_top + 1; ++q) {
    X.d[q].resize(X.dims[q]);
    if (q == 0) continue;
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t w = 0; w < words[q]; ++w)
        for (std::size_t j = 0; j < dn; ++j) {
          word(w, q, base, ws);
          SparseVec col;
          auto add = [&](std::size_t row, const Scalar& c) {
            SparseVec t{{row, c}};
            linalg::sparse_axpy(R, col, Scalar(1), t);
          };
          // (a · g_1)[g_2 | … ]n
          const Matrix& Ag = A.action[nonid[ws[0]]];
          ws2.assign(ws.begin() + 1, ws.end());
          const std::size_t tail = encode(ws2);
          for (std::size_t r = 0; r < da; ++r)
            if (sgn(Ag.at(r, i)) != 0) add(index(r, tail, j, q - 1), Ag.at(r, i));
          // merged neighbours; identity products vanish
          for (int k = 1; k < q; ++k) {
            const int g = G.compose(nonid[ws[k - 1]], nonid[ws[k]]);
            if (G.is_identity(g)) continue;
            ws2.assign(ws.begin(), ws.end());
            ws2[k - 1] = slot[g];
            ws2.erase(ws2.begin() + k);
            add(index(i, encode(ws2), j, q - 1), Scalar(k % 2 ? -1 : 1));
          }
          // [ … | g_{q-1}] (g_q · n)
          const Matrix& Ng = N.action[nonid[ws[q - 1]]];
          ws2.assign(ws.begin(), ws.end() - 1);
          const std::size_t head = encode(ws2);
          const Scalar sign(q % 2 ? -1 : 1);
          for (std::size_t r = 0; r < dn; ++r)
            if (sgn(Ng.at(r, j)) != 0) add(index(i, head, r, q - 1), R.mul(sign, Ng.at(r, j)));
          X.d[q][index(i, w, j, q)] = std::move(col);
        }
  }
  X.reduce();
  FPComplex K = X.complex();
  std::vector<Canonical> out;
  for (int q = 0; q <= q_top; ++q) out.push_back(K.homology(q).canonical());
  return out;
}

std::vector<E1Summand> e1_direct_chains(const CatModule& M, const CatModule& N,
                                        const std::vector<std::vector<Chain>>& chains, int q_top, int jobs) {
  CatPtr C = M.base;
  if (!C->is_left_free()) fail(ErrorKind::NotLeftFree, "E1 identification needs a left-free category");
  std::vector<std::pair<int, std::size_t>> items;
  for (std::size_t p = 0; p < chains.size(); ++p)
    for (std::size_t c = 0; c < chains[p].size(); ++c) items.push_back({static_cast<int>(p), c});
  std::vector<E1Summand> out(items.size());
  parallel_for(items.size(), jobs, [&](std::size_t k) {
    const auto [p, c] = items[k];
    const Chain& chain = chains[p][c];
    ChainModule cm = chain_module(C, M, chain);
    CatModule Nc = catmod::restrict_module(cm.inclusion, N);
    out[k] = E1Summand{p, chain, group_ring_tor(cm.A, Nc, q_top)};
  });
  return out;
}

bool exact_at(const Matrix& f, const Matrix& g, const std::vector<mpz_class>& here,
              const std::vector<mpz_class>& next) {
  const Ring& R = f.ring();
  const std::size_t n = here.size();
  Matrix Dh = order_diagonal(R, here), Dn = order_diagonal(R, next);
  // ker g: x with g x ∈ span(Dn)
  Matrix A = Matrix::hcat(g, Dn);
  Matrix ker = linalg::kernel_basis(A);
  Matrix K = Matrix::hcat(ker.row_range(0, n), Dh);
  Matrix I = Matrix::hcat(f, Dh);
  linalg::SpanSolver sk(K), si(I);
  for (std::size_t j = 0; j < I.cols(); ++j)
    if (!sk.contains(I.column(j))) return false;
  for (std::size_t j = 0; j < K.cols(); ++j)
    if (!si.contains(K.column(j))) return false;
  return true;
}

} // namespace detail

// ------------------------------------------------------------ E¹ identities

std::vector<E1Summand> e1_direct(const CatModule& M, const CatModule& N, const Options& opt) {
  const int p_max = detail::resolve_p_max(*M.base, opt);
  const int q_max = opt.q_max < 0 ? opt.n_max + 1 : opt.q_max;
  return detail::e1_direct_chains(M, N, fincat::enumerate_chains(*M.base, p_max), q_max - 1, opt.jobs);
}

E1Report verify_e1(const TorRun& run, const Options& opt) {
  const TorComplex& T = run.complex;
  const int q_top = T.q_max - 1;
  std::vector<E1Summand> direct = detail::e1_direct_chains(T.M, T.N, T.chains, q_top, opt.jobs);
  E1Report rep;
  rep.all_match = true;
  std::map<std::pair<int, int>, std::vector<Canonical>> column;
  std::size_t k = 0;
  for (int p = 0; p <= T.p_max; ++p)
    for (std::size_t c = 0; c < T.chains[p].size(); ++c, ++k) {
      FPComplex X = T.chain_complex(p, static_cast<int>(c));
      for (int q = 0; q <= q_top && q < X.top(); ++q) {
        E1Check e;
        e.p = p;
        e.q = q;
        e.chain = T.chains[p][c];
        e.direct = direct[k].groups[q];
        e.filtered = X.homology(q).canonical();
        e.match = e.direct == e.filtered;
        rep.all_match = rep.all_match && e.match;
        column[{p, q}].push_back(e.direct);
        rep.checks.push_back(std::move(e));
      }
    }
  // whole columns against the first page
  for (const auto& entry : run.ss.pages.front().entries) {
    auto it = column.find({entry.p, entry.q});
    E1Check e;
    e.p = entry.p;
    e.q = entry.q;
    e.direct = it == column.end() ? Canonical::free(T.K.ring, 0) : Canonical::direct_sum(it->second);
    e.filtered = entry.module.canonical();
    e.match = e.direct == e.filtered;
    rep.all_match = rep.all_match && e.match;
    rep.checks.push_back(std::move(e));
  }
  return rep;
}

namespace {

// Solves A X = B modulo the target orders and reduces X modulo the source
// orders of A.
Matrix solve_mod(const Matrix& A, const Matrix& B, const std::vector<mpz_class>& tgt,
                 const std::vector<mpz_class>& src) {
  const Ring& R = A.ring();
  Matrix G = Matrix::hcat(A, detail::order_diagonal(R, tgt));
  linalg::SpanSolver S(G);
  Matrix X(R, A.cols(), B.cols());
  for (std::size_t j = 0; j < B.cols(); ++j) {
    auto c = S.solve(B.column(j));
    if (!c) fail(ErrorKind::LiftFailed, "comparison map is not invertible");
    for (std::size_t i = 0; i < A.cols(); ++i) {
      Scalar x = (*c)[i];
      if (src[i] != 0) {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), x.get_num_mpz_t(), src[i].get_mpz_t());
        x = Scalar(r);
      }
      X.at(i, j) = x;
    }
  }
  return X;
}

bool equal_mod(const Vector& a, const Vector& b, const std::vector<mpz_class>& orders) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    Scalar d = a[i] - b[i];
    if (orders[i] != 0) {
      mpz_class r;
      mpz_fdiv_r(r.get_mpz_t(), d.get_num_mpz_t(), orders[i].get_mpz_t());
      d = Scalar(r);
    }
    if (sgn(d) != 0) return false;
  }
  return true;
}

fincat::Functor into_sub(const fincat::Functor& aut, const fincat::Functor& sub, int object) {
  fincat::Functor F;
  F.source = aut.source;
  F.target = sub.source;
  F.on_objects = {object};
  std::map<int, int> back;
  for (std::size_t m = 0; m < sub.on_morphisms.size(); ++m) back[sub.on_morphisms[m]] = static_cast<int>(m);
  for (int m : aut.on_morphisms) F.on_morphisms.push_back(back.at(m));
  F.check();
  return F;
}

} // namespace

D1Report d1_components(const TorRun& run, int p, int chain, const Options& /*opt*/) {
  const TorComplex& T = run.complex;
  if (p < 1 || p > T.p_max) fail(ErrorKind::InvalidArgument, "d1 components need 1 <= p <= p_max");
  const Category& C = *T.C;
  const Ring& R = T.K.ring;
  D1Report rep;
  rep.p = p;
  rep.chain = T.chains[p][chain];
  const int q_top = T.q_max - 1;
  FPComplex Xs = T.chain_complex(p, chain);
  std::vector<SubQuotient> Hs;
  for (int q = 0; q <= q_top; ++q) Hs.push_back(Xs.homology(q));
  std::vector<int> targets;
  for (int i = 0; i <= p; ++i) {
    D1Component comp;
    comp.i = i;
    int tc = -1;
    T.chain_face(p, chain, i, 0, tc);
    targets.push_back(tc);
    comp.target = T.chains[p - 1][tc];
    FPComplex Xt = T.chain_complex(p - 1, tc);
    for (int q = 0; q <= q_top; ++q) {
      SubQuotient Ht = Xt.homology(q);
      int dummy = 0;
      Matrix m = linalg::induced_map(Hs[q], Ht, T.chain_face(p, chain, i, q, dummy));
      comp.filtered_invariants.push_back(linalg::map_invariants(m, Hs[q].orders(), Ht.orders()));
      comp.filtered.push_back(std::move(m));
    }
    rep.components.push_back(std::move(comp));
  }

  // i = 0 through the full subcategory on c_0, c_1
  if (C.is_left_free()) {
    const Chain& ch = rep.chain;
    const int c0 = C.rep(ch[0]), c1 = C.rep(ch[1]);
    detail::ChainModule cmA = detail::chain_module(T.C, T.M, ch);
    Chain tail(ch.begin() + 1, ch.end());
    detail::ChainModule cmY = detail::chain_module(T.C, T.M, tail);
    fincat::Functor sub = fincat::full_subcategory(T.C, {c0, c1});
    fincat::Functor i_inc = into_sub(cmA.inclusion, sub, 0);
    fincat::Functor j_inc = into_sub(cmY.inclusion, sub, 1);
    CatModule ND = catmod::restrict_module(sub, T.N);
    catmod::Induced jY = catmod::induce_with_unit(j_inc, cmY.A);
    catmod::TorPushforward phi_j = catmod::tor_pushforward(j_inc, cmY.A, jY.module, {jY.unit(0)}, ND, q_top);
    // η: m ⊗ (φ_0, tail) ↦ (m ⊗ tail) ⊗ φ_0
    const auto& S = cmA.biset;
    const std::size_t s = S.size();
    Matrix eta(R, jY.module.rank(0), cmA.A.rank(0));
    fincat::ChainBiset St;
    if (tail.size() > 1) St = fincat::chain_biset(C, tail);
    std::map<int, int> dmor;
    for (std::size_t k = 0; k < sub.on_morphisms.size(); ++k) dmor[sub.on_morphisms[k]] = static_cast<int>(k);
    for (std::size_t g = 0; g < cmA.A.rank(0); ++g) {
      SparseVec col;
      for (const auto& [old, coef] : cmA.to_old.cols[g]) {
        const std::size_t im = old / s, x = old % s;
        const auto& w = S.elements[x];
        const int phi0 = dmor.at(w[0]);
        SparseVec ycoords;
        if (tail.size() == 1) {
          ycoords = {{im, Scalar(1)}};
        } else {
          std::vector<int> rest(w.begin() + 1, w.end());
          const int e = St.find(rest);
          if (e < 0) fail(ErrorKind::InvalidArgument, "tail of a chain string is not a string");
          ycoords = cmY.to_new.cols[im * St.size() + static_cast<std::size_t>(e)];
        }
        for (const auto& [yi, yc] : ycoords) {
          SparseVec gen = jY.generator(0, 0, yi, phi0);
          linalg::sparse_axpy(R, col, R.mul(coef, yc), gen);
        }
      }
      for (const auto& [r, x] : col) eta.at(r, g) = x;
    }
    catmod::TorPushforward psi = catmod::tor_pushforward(i_inc, cmA.A, jY.module, {eta}, ND, q_top);
    D1Component& c0comp = rep.components[0];
    for (int q = 0; q <= q_top; ++q) {
      Matrix X = solve_mod(phi_j.map[q], psi.map[q], phi_j.target[q].orders(), phi_j.source[q].orders());
      c0comp.direct_invariants.push_back(
          linalg::map_invariants(X, psi.source[q].orders(), phi_j.source[q].orders()));
      c0comp.direct.push_back(std::move(X));
    }
  }

  // Σ (-1)^i components against the page differential on this chain's classes
  rep.alternating_sum_matches = true;
  const Page& E1 = run.ss.pages.front();
  for (int q = 0; q <= q_top; ++q) {
    const int n = p + q;
    if (n > run.ss.n_hi || n - 1 < run.ss.n_lo) continue;
    const PageEntry* src = E1.find(p, q);
    const PageEntry* tgt = E1.find(p - 1, q);
    const PageDifferential* pd = nullptr;
    for (const auto& d : E1.differentials)
      if (d.p == p && d.q == q) pd = &d;
    if (!src || !tgt || !pd) continue;
    auto coords = T.chain_coordinates(p, chain, q);
    const std::size_t b0 = T.K.lo(n, p), t0 = T.K.lo(n - 1, p - 1), nt = T.K.hi(n - 1, p - 1) - t0;
    for (std::size_t g = 0; g < Hs[q].num_gens(); ++g) {
      Vector x = Hs[q].generators().column(g);
      Vector xb(src->module.ambient());
      for (std::size_t k = 0; k < coords.size(); ++k) xb[coords[k] - b0] = x[k];
      auto cs = src->module.coords(xb);
      if (!cs) {
        rep.alternating_sum_matches = false;
        continue;
      }
      Vector viaPage = tgt->module.reduce(pd->matrix.apply(*cs));
      Vector y(nt);
      for (int i = 0; i <= p; ++i) {
        int tc = -1;
        SparseMatrix F = T.chain_face(p, chain, i, q, tc);
        auto tcoords = T.chain_coordinates(p - 1, tc, q);
        const Scalar sign(i % 2 ? -1 : 1);
        for (std::size_t j = 0; j < F.ncols(); ++j)
          for (const auto& [r, v] : F.cols[j]) R.addmul(y[tcoords[r] - t0], R.mul(sign, v), x[j]);
      }
      auto ct = tgt->module.coords(y);
      if (!ct || !equal_mod(viaPage, tgt->module.reduce(*ct), tgt->module.orders())) rep.alternating_sum_matches = false;
    }
  }
  return rep;
}

// ------------------------------------------------------ two-column sequence

LesReport two_column_les(const TorRun& run, const Options& opt) {
  const TorComplex& T = run.complex;
  for (int p = 2; p < static_cast<int>(T.chains.size()); ++p)
    if (!T.chains[p].empty()) fail(ErrorKind::NotTwoColumn, "chains of length " + std::to_string(p) + " exist");
  if (fincat::chain_bound(*T.C) >= 2) fail(ErrorKind::NotTwoColumn, "chains of length 2 exist");
  const Ring& R = T.K.ring;
  const Page& E1 = run.ss.pages.front();
  const int cert = run.report.certified_max;
  const int top = std::min(opt.n_max, cert);
  struct Node {
    std::string name;
    int q;
    std::vector<mpz_class> orders;
    Canonical group;
  };
  // nodes from the top: E1(0,top), H_top, E1(1,top-1), E1(0,top-1), H_{top-1}, ..., E1(0,0), H_0
  std::vector<Node> nodes;
  std::vector<Matrix> maps;  // maps[k]: nodes[k] -> nodes[k+1]
  std::vector<FilteredHomology> H(top + 1);
  for (int q = 0; q <= top; ++q) H[q] = filtered_homology(T.K, q);
  auto e1 = [&](int p, int q) -> const PageEntry* { return E1.find(p, q); };
  auto d1 = [&](int q) -> const Matrix* {
    for (const auto& d : E1.differentials)
      if (d.p == 1 && d.q == q) return &d.matrix;
    return nullptr;
  };
  // edge map E1(0,q) -> H_q
  auto edge = [&](int q) {
    return H[q].homology.coords_of(e1(0, q)->reps);
  };
  // H_q -> E1(1,q-1): block-1 part of a cycle
  auto proj = [&](int q) {
    const PageEntry* e = e1(1, q - 1);
    const SubQuotient& Hq = H[q].homology;
    if (!e) return Matrix(R, 0, Hq.num_gens());
    const std::size_t b0 = T.K.lo(q, 1), b1 = T.K.hi(q, 1);
    Matrix out(R, e->module.num_gens(), Hq.num_gens());
    for (std::size_t g = 0; g < Hq.num_gens(); ++g) {
      Vector x = Hq.generators().column(g);
      Vector v(x.begin() + b0, x.begin() + b1);
      auto c = e->module.coords(v);
      if (!c) fail(ErrorKind::ComparisonFailed, "cycle leaves the first column numerator");
      Vector r = e->module.reduce(*c);
      for (std::size_t i = 0; i < r.size(); ++i) out.at(i, g) = r[i];
    }
    return out;
  };
  auto gens_of = [&](int p, int q) -> std::size_t {
    const PageEntry* e = e1(p, q);
    return e ? e->module.num_gens() : 0;
  };
  // d1 out of E1(1,q); zero when column 1 is empty
  auto d1_map = [&](int q) -> std::optional<Matrix> {
    if (!e1(1, q)) return Matrix(R, gens_of(0, q), 0);
    if (const Matrix* d = d1(q)) return *d;
    return std::nullopt;
  };
  auto push_node = [&](const std::string& name, int q, const PageEntry* e) {
    if (e) nodes.push_back({name, q, e->module.orders(), e->module.canonical()});
    else nodes.push_back({name, q, {}, Canonical::free(R, 0)});
  };
  for (int q = top; q >= 0; --q) {
    push_node("E1(0," + std::to_string(q) + ")", q, e1(0, q));
    maps.push_back(edge(q));
    nodes.push_back({"Tor(" + std::to_string(q) + ")", q, H[q].homology.orders(), H[q].homology.canonical()});
    if (q == 0) break;
    maps.push_back(proj(q));
    push_node("E1(1," + std::to_string(q - 1) + ")", q - 1, e1(1, q - 1));
    maps.push_back(*d1_map(q - 1));
  }
  LesReport rep;
  rep.exact = true;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    LesNode ln;
    ln.name = nodes[k].name;
    ln.q = nodes[k].q;
    ln.group = nodes[k].group;
    const std::size_t g = nodes[k].orders.size();
    Matrix in, out;
    std::vector<mpz_class> next;
    bool ok = true;
    if (k == 0) {
      auto d = d1_map(top);
      if (d) in = *d;
      else ok = false;
    } else {
      in = maps[k - 1];
    }
    if (k + 1 < nodes.size()) {
      out = maps[k];
      next = nodes[k + 1].orders;
    } else {
      out = Matrix(R, 0, g);
    }
    ln.checked = ok;
    ln.exact = ok && detail::exact_at(in, out, nodes[k].orders, next);
    if (ok) rep.exact = rep.exact && ln.exact;
    rep.nodes.push_back(std::move(ln));
  }
  return rep;
}

} // namespace pchain::engine
