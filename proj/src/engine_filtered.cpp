#include "pchain/engine.hpp"
#include "pchain/error.hpp"
#include "pchain/parallel.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace pchain::engine {

using linalg::RowEchelon;
using linalg::Scalar;
using linalg::Vector;

std::size_t FilteredComplex::lo(int n, int p) const {
  if (!has(n)) return 0;
  const auto& s = start[n - n_lo];
  if (p <= p_lo) return 0;
  if (p > p_hi) return s.back();
  return s[p - p_lo];
}

std::size_t FilteredComplex::hi(int n, int p) const { return lo(n, p + 1); }

SparseMatrix FilteredComplex::relations(int n) const {
  SparseMatrix R(ring, dim(n), 0);
  if (!has(n)) return R;
  for (int p = p_lo; p <= p_hi; ++p) {
    const std::size_t off = lo(n, p);
    for (const auto& col : block_relations(n, p).cols) {
      SparseVec v;
      for (const auto& [i, x] : col) v.push_back({i + off, x});
      R.cols.push_back(std::move(v));
    }
  }
  return R;
}

FPComplex FilteredComplex::total() const {
  FPComplex T;
  T.ring = ring;
  for (int n = n_lo; n <= n_hi; ++n) {
    T.dims.push_back(dim(n));
    T.rel.push_back(relations(n));
    T.d.push_back(d[n - n_lo]);
  }
  return T;
}

bool FilteredComplex::squares_to_zero() const { return total().squares_to_zero(); }

bool FilteredComplex::respects_filtration() const {
  for (int n = n_lo + 1; n <= n_hi; ++n)
    for (int p = p_lo; p <= p_hi; ++p)
      for (std::size_t j = lo(n, p); j < hi(n, p); ++j)
        for (const auto& [i, x] : d[n - n_lo].cols[j])
          if (i >= hi(n - 1, p)) return false;
  return true;
}

const PageEntry* Page::find(int p, int q) const {
  for (const auto& e : entries)
    if (e.p == p && e.q == q) return &e;
  return nullptr;
}

namespace {

// Class representatives x ∈ Z^r_p(T_n) whose block-p parts form an echelon
// basis of the projection of Z^r_p; supported on blocks (p - r, p].
class LiftTable {
public:
  explicit LiftTable(const FilteredComplex& K) : K_(K) {}

  int effective(int p, int r) const { return std::min(r, p - K_.p_lo + 1); }

  const Matrix& get(int n, int p, int r) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find({n, p, effective(p, r)});
    if (it == table_.end()) fail(ErrorKind::InvalidArgument, "lift table queried before computation");
    return it->second;
  }

  bool ready(int n, int p, int r) const {
    std::lock_guard<std::mutex> lock(mu_);
    return table_.count({n, p, effective(p, r)}) > 0;
  }

  void compute(int n, int p, int r) {
    const int re = effective(p, r);
    if (ready(n, p, re)) return;
    Matrix m = build(n, p, re);
    std::lock_guard<std::mutex> lock(mu_);
    table_.emplace(std::make_tuple(n, p, re), std::move(m));
  }

private:
  Matrix build(int n, int p, int r) const {
    const Ring& R = K_.ring;
    const std::size_t dim = K_.dim(n);
    const std::size_t b0 = K_.lo(n, p), b1 = K_.hi(n, p), nb = b1 - b0;
    if (nb == 0) return Matrix(R, dim, 0);
    if (r == 0 || !K_.has(n - 1) || K_.dim(n - 1) == 0) {
      Matrix I(R, dim, nb);
      for (std::size_t j = 0; j < nb; ++j) I.at(b0 + j, j) = 1;
      return I;
    }
    // columns: T_n coordinates of blocks (p - r, p], then relations of the
    // constrained rows
    const int plow = std::max(p - r + 1, K_.p_lo);
    const std::size_t c0 = K_.lo(n, plow), ncol = b1 - c0;
    const std::size_t r0 = K_.lo(n - 1, plow), r1 = K_.hi(n - 1, p);
    const SparseMatrix& d = K_.d[n - K_.n_lo];
    SparseMatrix A(R, r1 - r0, 0);
    for (std::size_t j = c0; j < b1; ++j) {
      SparseVec v;
      for (const auto& [i, x] : d.cols[j])
        if (i >= r0 && i < r1) v.push_back({i - r0, x});
      A.cols.push_back(std::move(v));
    }
    for (int q = plow; q <= p; ++q) {
      const std::size_t off = K_.lo(n - 1, q) - r0;
      for (const auto& col : K_.block_relations(n - 1, q).cols) {
        SparseVec v;
        for (const auto& [i, x] : col) v.push_back({i + off, x});
        A.cols.push_back(std::move(v));
      }
    }
    Matrix ker = linalg::kernel_sparse(A);
    // rows of W: kernel vectors with block-p coordinates first
    const std::size_t below = b0 - c0;
    Matrix W(R, ker.cols(), ncol);
    for (std::size_t k = 0; k < ker.cols(); ++k) {
      for (std::size_t j = 0; j < nb; ++j) W.at(k, j) = ker.at(below + j, k);
      for (std::size_t j = 0; j < below; ++j) W.at(k, nb + j) = ker.at(j, k);
    }
    RowEchelon e = linalg::row_echelon(W, false);
    std::size_t m = 0;
    while (m < e.rank && e.pivots[m] < nb) ++m;
    Matrix out(R, dim, m);
    for (std::size_t k = 0; k < m; ++k) {
      for (std::size_t j = 0; j < nb; ++j) out.at(b0 + j, k) = e.E.at(k, j);
      for (std::size_t j = 0; j < below; ++j) out.at(c0 + j, k) = e.E.at(k, nb + j);
    }
    return out;
  }

  const FilteredComplex& K_;
  mutable std::mutex mu_;
  std::map<std::tuple<int, int, int>, Matrix> table_;
};

Vector apply_sparse(const SparseMatrix& d, const Vector& x) {
  Vector y(d.rows);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (sgn(x[j]) == 0) continue;
    for (const auto& [i, v] : d.cols[j]) d.ring.addmul(y[i], x[j], v);
  }
  return y;
}

PageEntry compute_entry(const FilteredComplex& K, const LiftTable& lifts, int n, int p, int r) {
  const Ring& R = K.ring;
  const std::size_t b0 = K.lo(n, p), b1 = K.hi(n, p), nb = b1 - b0;
  const SparseMatrix& rel = K.block_relations(n, p);
  PageEntry e;
  e.p = p;
  e.q = n - p;
  const Matrix& L = lifts.get(n, p, r);
  // numerator: block parts of lifts, then relations
  Matrix Z(R, nb, L.cols() + rel.ncols());
  for (std::size_t k = 0; k < L.cols(); ++k)
    for (std::size_t j = 0; j < nb; ++j) Z.at(j, k) = L.at(b0 + j, k);
  for (std::size_t c = 0; c < rel.ncols(); ++c)
    for (const auto& [i, x] : rel.cols[c]) Z.at(i, L.cols() + c) = x;
  // denominator: block p of d(block p of T_{n+1}) and of d(lifts(n+1, p+s, s))
  std::vector<Vector> bcols;
  if (K.has(n + 1)) {
    const SparseMatrix& d = K.d[n + 1 - K.n_lo];
    for (std::size_t j = K.lo(n + 1, p); j < K.hi(n + 1, p); ++j) {
      Vector v(nb);
      bool any = false;
      for (const auto& [i, x] : d.cols[j])
        if (i >= b0 && i < b1) {
          v[i - b0] = x;
          any = true;
        }
      if (any) bcols.push_back(std::move(v));
    }
    for (int s = 1; s < r && p + s <= K.p_hi; ++s) {
      const Matrix& Ls = lifts.get(n + 1, p + s, s);
      for (std::size_t k = 0; k < Ls.cols(); ++k) {
        Vector y = apply_sparse(d, Ls.column(k));
        Vector v(y.begin() + b0, y.begin() + b1);
        if (std::any_of(v.begin(), v.end(), [](const Scalar& x) { return sgn(x) != 0; })) bcols.push_back(std::move(v));
      }
    }
  }
  Matrix B(R, nb, bcols.size() + rel.ncols());
  for (std::size_t c = 0; c < bcols.size(); ++c) B.set_column(c, bcols[c]);
  for (std::size_t c = 0; c < rel.ncols(); ++c)
    for (const auto& [i, x] : rel.cols[c]) B.at(i, bcols.size() + c) = x;
  e.module = SubQuotient::compute(R, nb, Z, B);
  // full representatives
  const Matrix& lift = e.module.lift_matrix();
  e.reps = Matrix(R, K.dim(n), e.module.num_gens());
  for (std::size_t g = 0; g < e.module.num_gens(); ++g) {
    for (std::size_t k = 0; k < L.cols(); ++k) {
      const Scalar& c = lift.at(k, g);
      if (sgn(c) == 0) continue;
      for (std::size_t i = 0; i < L.rows(); ++i)
        if (sgn(L.at(i, k)) != 0) R.addmul(e.reps.at(i, g), c, L.at(i, k));
    }
    for (std::size_t c = 0; c < rel.ncols(); ++c) {
      const Scalar& a = lift.at(L.cols() + c, g);
      if (sgn(a) == 0) continue;
      for (const auto& [i, x] : rel.cols[c]) R.addmul(e.reps.at(b0 + i, g), a, x);
    }
  }
  return e;
}

PageDifferential compute_differential(const FilteredComplex& K, const PageEntry& src, const PageEntry& tgt, int r) {
  const int n = src.p + src.q;
  PageDifferential pd;
  pd.p = src.p;
  pd.q = src.q;
  pd.tp = tgt.p;
  pd.tq = tgt.q;
  const std::size_t t0 = K.lo(n - 1, tgt.p), t1 = K.hi(n - 1, tgt.p);
  pd.matrix = Matrix(K.ring, tgt.module.num_gens(), src.module.num_gens());
  const SparseMatrix& d = K.d[n - K.n_lo];
  for (std::size_t g = 0; g < src.module.num_gens(); ++g) {
    Vector y = apply_sparse(d, src.reps.column(g));
    Vector v(y.begin() + t0, y.begin() + t1);
    auto c = tgt.module.coords(v);
    if (!c) fail(ErrorKind::ComparisonFailed, "page differential leaves the target numerator at r = " +
                                                  std::to_string(r));
    Vector red = tgt.module.reduce(*c);
    for (std::size_t i = 0; i < red.size(); ++i) pd.matrix.at(i, g) = red[i];
  }
  return pd;
}

bool is_zero_map(const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (sgn(m.at(i, j)) != 0) return false;
  return true;
}

} // namespace

SpectralSequence spectral_pages(const FilteredComplex& K, int n_lo, int n_hi, int jobs) {
  if (!K.respects_filtration()) fail(ErrorKind::InvalidArgument, "differential raises the filtration");
  SpectralSequence ss;
  ss.n_lo = n_lo;
  ss.n_hi = n_hi;
  ss.p_lo = K.p_lo;
  ss.p_hi = K.p_hi;
  ss.bottom_is_edge = n_lo <= K.n_lo;
  LiftTable lifts(K);
  const int r_inf = std::max(1, K.p_hi - K.p_lo + 1);
  std::vector<std::pair<int, int>> cells;  // (n, p) in the band
  for (int n = n_lo; n <= n_hi; ++n)
    for (int p = K.p_lo; p <= K.p_hi; ++p) cells.push_back({n, p});
  for (int r = 1; r <= r_inf; ++r) {
    std::vector<std::pair<int, int>> need;
    for (int n = n_lo; n <= n_hi + 1; ++n)
      if (K.has(n))
        for (int p = K.p_lo; p <= K.p_hi; ++p) need.push_back({n, p});
    parallel_for(need.size(), jobs, [&](std::size_t i) { lifts.compute(need[i].first, need[i].second, r); });
    Page page;
    page.r = r;
    page.entries.resize(cells.size());
    parallel_for(cells.size(), jobs, [&](std::size_t i) {
      page.entries[i] = compute_entry(K, lifts, cells[i].first, cells[i].second, r);
    });
    std::vector<std::pair<std::size_t, std::size_t>> arrows;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto [n, p] = cells[i];
      if (n - 1 < n_lo || p - r < K.p_lo) continue;
      for (std::size_t j = 0; j < cells.size(); ++j)
        if (cells[j].first == n - 1 && cells[j].second == p - r) arrows.push_back({i, j});
    }
    page.differentials.resize(arrows.size());
    parallel_for(arrows.size(), jobs, [&](std::size_t a) {
      page.differentials[a] =
          compute_differential(K, page.entries[arrows[a].first], page.entries[arrows[a].second], r);
    });
    ss.pages.push_back(std::move(page));
  }
  ss.stable_from = r_inf;
  for (int r = r_inf - 1; r >= 1; --r) {
    const Page& pg = ss.pages[r - 1];
    bool zero = std::all_of(pg.differentials.begin(), pg.differentials.end(),
                            [](const PageDifferential& d) { return is_zero_map(d.matrix); });
    if (!zero) break;
    ss.stable_from = r;
  }
  return ss;
}

std::vector<std::string> SpectralSequence::check_pages() const {
  std::vector<std::string> bad;
  for (std::size_t k = 0; k + 1 < pages.size(); ++k) {
    const Page& pg = pages[k];
    for (const auto& e : pg.entries) {
      const int n = e.p + e.q;
      const PageDifferential* out = nullptr;
      const PageDifferential* in = nullptr;
      for (const auto& d : pg.differentials) {
        if (d.p == e.p && d.q == e.q) out = &d;
        if (d.tp == e.p && d.tq == e.q) in = &d;
      }
      // differentials leaving the band are unknown unless the index range rules them out
      const bool out_known = out || e.p - pg.r < p_lo || (n - 1 < n_lo && bottom_is_edge);
      const bool in_known = in || e.p + pg.r > p_hi;
      if (!out_known || !in_known) continue;
      const Ring& R = e.module.ring();
      std::vector<mpz_class> here = e.module.orders();
      // d_out∘d_in = 0 modulo orders
      if (out && in) {
        Matrix comp = out->matrix * in->matrix;
        const auto& tgt_orders = pg.find(out->tp, out->tq)->module.orders();
        for (std::size_t i = 0; i < comp.rows(); ++i)
          for (std::size_t j = 0; j < comp.cols(); ++j) {
            Scalar x = comp.at(i, j);
            if (tgt_orders[i] != 0) {
              mpz_class rr;
              mpz_fdiv_r(rr.get_mpz_t(), x.get_num_mpz_t(), tgt_orders[i].get_mpz_t());
              x = Scalar(rr);
            }
            if (sgn(x) != 0) {
              std::ostringstream os;
              os << "d^" << pg.r << " squares to a nonzero map at (" << e.p << "," << e.q << ")";
              bad.push_back(os.str());
              i = comp.rows();
              break;
            }
          }
      }
      // homology of the page through cyclic presentations
      const std::size_t g = here.size();
      auto cyclic_rel = [&](const std::vector<mpz_class>& ord) {
        SparseMatrix rel(R, ord.size(), 0);
        for (std::size_t i = 0; i < ord.size(); ++i)
          if (ord[i] != 0) rel.cols.push_back({{i, Scalar(ord[i])}});
        return rel;
      };
      SparseMatrix dout = out ? SparseMatrix::from_dense(out->matrix) : SparseMatrix(R, 0, g);
      SparseMatrix din = in ? SparseMatrix::from_dense(in->matrix) : SparseMatrix(R, g, 0);
      SparseMatrix rel_t = out ? cyclic_rel(pg.find(out->tp, out->tq)->module.orders()) : SparseMatrix(R, 0, 0);
      SubQuotient h = linalg::homology_fp(dout, rel_t, din, cyclic_rel(here));
      const PageEntry* next = pages[k + 1].find(e.p, e.q);
      if (!next || h.canonical() != next->module.canonical()) {
        std::ostringstream os;
        os << "E^" << pg.r + 1 << "(" << e.p << "," << e.q << ") differs from the homology of E^" << pg.r;
        bad.push_back(os.str());
      }
    }
  }
  return bad;
}

FilteredHomology filtered_homology(const FilteredComplex& K, int n) {
  const Ring& R = K.ring;
  FilteredHomology fh;
  fh.n = n;
  const std::size_t dim = K.dim(n);
  SparseMatrix rel_here = K.relations(n);
  // cycles of F_p for every p, computed from the restricted differential
  std::vector<Matrix> cycles;
  for (int p = K.p_lo; p <= K.p_hi; ++p) {
    const std::size_t cols = K.hi(n, p);
    if (!K.has(n - 1)) {
      Matrix I(R, dim, cols);
      for (std::size_t j = 0; j < cols; ++j) I.at(j, j) = 1;
      cycles.push_back(std::move(I));
      continue;
    }
    const SparseMatrix& d = K.d[n - K.n_lo];
    SparseMatrix rel_t = K.relations(n - 1);
    SparseMatrix A(R, K.dim(n - 1), 0);
    for (std::size_t j = 0; j < cols; ++j) A.cols.push_back(d.cols[j]);
    for (const auto& c : rel_t.cols) A.cols.push_back(c);
    Matrix ker = linalg::kernel_sparse(A);
    Matrix Z(R, dim, ker.cols());
    for (std::size_t k = 0; k < ker.cols(); ++k)
      for (std::size_t j = 0; j < cols; ++j) Z.at(j, k) = ker.at(j, k);
    cycles.push_back(std::move(Z));
  }
  Matrix Zall = cycles.empty() ? Matrix(R, dim, 0) : cycles.back();
  Matrix Zg = Matrix::hcat(Zall, rel_here.to_dense());
  Matrix Bg(R, dim, 0);
  if (K.has(n + 1)) Bg = K.d[n + 1 - K.n_lo].to_dense();
  if (rel_here.ncols()) Bg = Matrix::hcat(Bg, rel_here.to_dense());
  fh.homology = SubQuotient::compute(R, dim, Zg, Bg);
  const auto& ord = fh.homology.orders();
  Matrix D(R, ord.size(), 0);
  for (std::size_t i = 0; i < ord.size(); ++i)
    if (ord[i] != 0) {
      Vector v(ord.size());
      v[i] = Scalar(ord[i]);
      D.append_column(v);
    }
  Matrix prev(R, ord.size(), 0);
  for (const Matrix& Z : cycles) {
    Matrix coords = fh.homology.coords_of(Z);
    fh.filtration.push_back(coords);
    SubQuotient g = SubQuotient::compute(R, ord.size(), Matrix::hcat(coords, D), Matrix::hcat(prev, D));
    fh.graded.push_back(g.canonical());
    prev = Matrix::hcat(prev, coords);
  }
  return fh;
}

} // namespace pchain::engine
