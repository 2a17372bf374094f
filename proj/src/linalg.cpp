#include "pchain/linalg.hpp"
#include "pchain/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace pchain::linalg {

namespace {

// Quotient used to clear an entry below a pivot: exact over fields, truncated
// over Z so the remainder is strictly smaller than the pivot.
Scalar clearing_quotient(const Ring& ring, const Scalar& a, const Scalar& pivot) {
  if (ring.is_field()) return ring.mul(a, ring.inverse(pivot));
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_num_mpz_t(), pivot.get_num_mpz_t());
  return Scalar(q);
}

bool divides(const Ring& ring, const Scalar& d, const Scalar& x) {
  if (ring.is_field()) return sgn(d) != 0 || sgn(x) == 0;
  if (sgn(d) == 0) return sgn(x) == 0;
  return mpz_divisible_p(x.get_num_mpz_t(), d.get_num_mpz_t()) != 0;
}

} // namespace

RowEchelon row_echelon(const Matrix& W0, bool track) {
  const Ring& ring = W0.ring();
  RowEchelon out;
  out.E = W0;
  Matrix& W = out.E;
  const std::size_t m = W.rows(), n = W.cols();
  if (track) out.T = Matrix::identity(ring, m);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    bool have_pivot = false;
    for (;;) {
      long best = -1;
      for (std::size_t i = r; i < m; ++i) {
        if (sgn(W.at(i, c)) == 0) continue;
        if (best < 0 || ring.cmp_size(W.at(i, c), W.at(best, c)) < 0) best = static_cast<long>(i);
      }
      if (best < 0) break;
      have_pivot = true;
      if (static_cast<std::size_t>(best) != r) {
        W.swap_rows(r, best);
        if (track) out.T.swap_rows(r, best);
      }
      bool clean = true;
      const Scalar piv = W.at(r, c);
      for (std::size_t i = r + 1; i < m; ++i) {
        if (sgn(W.at(i, c)) == 0) continue;
        Scalar q = clearing_quotient(ring, W.at(i, c), piv);
        if (sgn(q) != 0) {
          Scalar nq = ring.neg(q);
          W.row_addmul(i, r, nq);
          if (track) out.T.row_addmul(i, r, nq);
        }
        if (sgn(W.at(i, c)) != 0) clean = false;
      }
      if (clean) break;
    }
    if (!have_pivot) continue;
    if (ring.is_integers() && sgn(W.at(r, c)) < 0) {
      W.row_negate(r);
      if (track) out.T.row_negate(r);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  return out;
}

SmithForm smith_normal_form(const Matrix& A) {
  const Ring& ring = A.ring();
  const std::size_t m = A.rows(), n = A.cols();
  SmithForm sf;
  sf.S = A;
  sf.U = Matrix::identity(ring, m);
  sf.Uinv = Matrix::identity(ring, m);
  sf.V = Matrix::identity(ring, n);
  Matrix& S = sf.S;

  auto row_add = [&](std::size_t a, std::size_t b, const Scalar& c) {
    // row_a += c row_b; U^{-1} gets col_b -= c col_a
    S.row_addmul(a, b, c);
    sf.U.row_addmul(a, b, c);
    sf.Uinv.col_addmul(b, a, ring.neg(c));
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    S.swap_rows(a, b);
    sf.U.swap_rows(a, b);
    sf.Uinv.swap_cols(a, b);
  };
  auto col_add = [&](std::size_t a, std::size_t b, const Scalar& c) {
    S.col_addmul(a, b, c);
    sf.V.col_addmul(a, b, c);
  };
  auto col_swap = [&](std::size_t a, std::size_t b) {
    S.swap_cols(a, b);
    sf.V.swap_cols(a, b);
  };

  std::size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    long bi = -1, bj = -1;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j) {
        if (sgn(S.at(i, j)) == 0) continue;
        if (bi < 0 || ring.cmp_size(S.at(i, j), S.at(bi, bj)) < 0) {
          bi = static_cast<long>(i);
          bj = static_cast<long>(j);
        }
      }
    if (bi < 0) break;
    if (static_cast<std::size_t>(bi) != t) row_swap(t, bi);
    if (static_cast<std::size_t>(bj) != t) col_swap(t, bj);

    for (;;) {
      bool dirty = false;
      const Scalar piv = S.at(t, t);
      for (std::size_t i = t + 1; i < m; ++i) {
        if (sgn(S.at(i, t)) == 0) continue;
        Scalar q = clearing_quotient(ring, S.at(i, t), piv);
        if (sgn(q) != 0) row_add(i, t, ring.neg(q));
        if (sgn(S.at(i, t)) != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (sgn(S.at(t, j)) == 0) continue;
        Scalar q = clearing_quotient(ring, S.at(t, j), piv);
        if (sgn(q) != 0) col_add(j, t, ring.neg(q));
        if (sgn(S.at(t, j)) != 0) dirty = true;
      }
      if (dirty) {
        // re-pivot on the smallest remainder in row t or column t
        long ri = static_cast<long>(t), rj = static_cast<long>(t);
        for (std::size_t i = t + 1; i < m; ++i)
          if (sgn(S.at(i, t)) != 0 && ring.cmp_size(S.at(i, t), S.at(ri, rj)) < 0) {
            ri = static_cast<long>(i);
            rj = static_cast<long>(t);
          }
        for (std::size_t j = t + 1; j < n; ++j)
          if (sgn(S.at(t, j)) != 0 && ring.cmp_size(S.at(t, j), S.at(ri, rj)) < 0) {
            ri = static_cast<long>(t);
            rj = static_cast<long>(j);
          }
        if (static_cast<std::size_t>(ri) != t) row_swap(t, ri);
        if (static_cast<std::size_t>(rj) != t) col_swap(t, rj);
        continue;
      }
      long fi = -1;
      for (std::size_t i = t + 1; i < m && fi < 0; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!divides(ring, piv, S.at(i, j))) {
            fi = static_cast<long>(i);
            break;
          }
      if (fi < 0) break;
      row_add(t, fi, Scalar(1));
    }
    if (ring.is_integers() && sgn(S.at(t, t)) < 0) {
      S.row_negate(t);
      sf.U.row_negate(t);
      sf.Uinv.col_negate(t);
    }
  }
  sf.rank = t;
  return sf;
}

Matrix kernel_basis(const Matrix& A) {
  RowEchelon e = row_echelon(A.transpose(), true);
  const std::size_t n = A.cols();
  Matrix K(A.ring(), n, n - e.rank);
  for (std::size_t k = e.rank; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) K.at(j, k - e.rank) = e.T.at(k, j);
  return K;
}

Matrix image_basis(const Matrix& A) {
  RowEchelon e = row_echelon(A.transpose(), false);
  return e.E.row_range(0, e.rank).transpose();
}

std::size_t rank(const Matrix& A) { return row_echelon(A, false).rank; }

std::optional<Matrix> solve(const Matrix& A, const Matrix& B) {
  if (A.rows() != B.rows()) fail(ErrorKind::DimensionMismatch, "solve: row counts differ");
  SpanSolver s(A);
  Matrix X(A.ring(), A.cols(), B.cols());
  for (std::size_t j = 0; j < B.cols(); ++j) {
    auto c = s.solve(B.column(j));
    if (!c) return std::nullopt;
    X.set_column(j, *c);
  }
  return X;
}

// ---------------------------------------------------------------- SpanSolver

SpanSolver::SpanSolver(const Matrix& gens)
    : ring_(gens.ring()), ambient_(gens.rows()), ngens_(gens.cols()) {
  ech_ = row_echelon(gens.transpose(), true);
}

std::optional<Vector> SpanSolver::basis_coords(const Vector& v) const {
  if (v.size() != ambient_) fail(ErrorKind::DimensionMismatch, "span solver: vector length");
  Vector res = v;
  Vector y(ech_.rank);
  for (std::size_t i = 0; i < ech_.rank; ++i) {
    const std::size_t p = ech_.pivots[i];
    if (sgn(res[p]) == 0) continue;
    const Scalar& piv = ech_.E.at(i, p);
    if (!divides(ring_, piv, res[p])) return std::nullopt;
    Scalar q = ring_.is_field() ? ring_.mul(res[p], ring_.inverse(piv)) : Scalar(res[p] / piv);
    y[i] = q;
    const Scalar* row = ech_.E.row_ptr(i);
    for (std::size_t c = p; c < ambient_; ++c)
      if (sgn(row[c]) != 0) ring_.submul(res[c], q, row[c]);
  }
  for (const auto& x : res)
    if (sgn(x) != 0) return std::nullopt;
  return y;
}

std::optional<Vector> SpanSolver::solve(const Vector& v) const {
  auto y = basis_coords(v);
  if (!y) return std::nullopt;
  Vector c(ngens_);
  for (std::size_t i = 0; i < ech_.rank; ++i) {
    if (sgn((*y)[i]) == 0) continue;
    const Scalar* row = ech_.T.row_ptr(i);
    for (std::size_t j = 0; j < ngens_; ++j)
      if (sgn(row[j]) != 0) ring_.addmul(c[j], (*y)[i], row[j]);
  }
  return c;
}

Matrix SpanSolver::basis() const { return ech_.E.row_range(0, ech_.rank).transpose(); }

Matrix SpanSolver::basis_in_gens() const {
  if (ech_.T.rows() == 0) return Matrix(ring_, ngens_, 0);
  return ech_.T.row_range(0, ech_.rank).transpose();
}

// ----------------------------------------------------------- sparse elimination

Elimination eliminate_units(const Ring& ring, std::size_t n, std::vector<SparseVec> forms) {
  Elimination out;
  out.n = n;
  const std::size_t nf = forms.size();
  std::vector<std::vector<std::size_t>> col(n);
  for (std::size_t r = 0; r < nf; ++r)
    for (const auto& [j, v] : forms[r]) col[j].push_back(r);

  auto has_unit = [&](const SparseVec& f) {
    for (const auto& e : f)
      if (ring.is_unit(e.second)) return true;
    return false;
  };
  std::set<std::pair<std::size_t, std::size_t>> cand;
  std::vector<std::size_t> key(nf, 0);
  std::vector<char> in_cand(nf, 0), alive(nf, 1);
  auto refresh = [&](std::size_t r) {
    if (in_cand[r]) cand.erase({key[r], r});
    in_cand[r] = 0;
    if (alive[r] && !forms[r].empty() && has_unit(forms[r])) {
      key[r] = forms[r].size();
      cand.insert({key[r], r});
      in_cand[r] = 1;
    }
  };
  for (std::size_t r = 0; r < nf; ++r) refresh(r);

  std::vector<char> eliminated(n, 0);
  std::vector<std::size_t> order;
  std::vector<SparseVec> pending(n);  // eliminated var -> combination of other vars

  while (!cand.empty()) {
    const std::size_t r = cand.begin()->second;
    cand.erase(cand.begin());
    in_cand[r] = 0;
    const SparseVec f = forms[r];
    std::size_t j = n;
    std::size_t best = 0;
    Scalar u;
    for (const auto& [k, v] : f) {
      if (!ring.is_unit(v)) continue;
      if (j == n || col[k].size() < best) {
        j = k;
        best = col[k].size();
        u = v;
      }
    }
    Scalar inv = ring.inverse(u);
    Scalar minus_inv = ring.neg(inv);
    SparseVec e;
    for (const auto& [k, v] : f)
      if (k != j) e.push_back({k, ring.mul(minus_inv, v)});
    pending[j] = e;
    eliminated[j] = 1;
    order.push_back(j);
    alive[r] = 0;
    forms[r].clear();

    std::vector<std::size_t> users;
    users.swap(col[j]);
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    for (std::size_t r2 : users) {
      if (!alive[r2]) continue;
      const Scalar* c = sparse_find(forms[r2], j);
      if (!c) continue;
      Scalar coef = ring.mul(ring.neg(*c), inv);
      sparse_axpy(ring, forms[r2], coef, f);
      for (const auto& [k, v] : f)
        if (k != j && (col[k].empty() || col[k].back() != r2)) col[k].push_back(r2);
      refresh(r2);
    }
  }

  out.position.assign(n, -1);
  for (std::size_t k = 0; k < n; ++k)
    if (!eliminated[k]) {
      out.position[k] = static_cast<long>(out.survivors.size());
      out.survivors.push_back(k);
    }
  out.expr.assign(n, {});
  for (std::size_t k : out.survivors) out.expr[k] = {{static_cast<std::size_t>(out.position[k]), Scalar(1)}};
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    SparseVec acc;
    for (const auto& [k, v] : pending[*it]) sparse_axpy(ring, acc, v, out.expr[k]);
    out.expr[*it] = std::move(acc);
  }
  for (std::size_t r = 0; r < nf; ++r) {
    if (!alive[r] || forms[r].empty()) continue;
    SparseVec g;
    g.reserve(forms[r].size());
    for (const auto& [k, v] : forms[r]) g.push_back({static_cast<std::size_t>(out.position[k]), v});
    out.residual.push_back(std::move(g));
  }
  return out;
}

Matrix kernel_sparse(const SparseMatrix& A) {
  const Ring& ring = A.ring;
  const std::size_t n = A.ncols();
  SparseMatrix At = A.transpose();  // columns of At are rows of A
  Elimination el = eliminate_units(ring, n, At.cols);
  const std::size_t s = el.survivors.size();
  Matrix R(ring, el.residual.size(), s);
  for (std::size_t i = 0; i < el.residual.size(); ++i)
    for (const auto& [k, v] : el.residual[i]) R.at(i, k) = v;
  Matrix Ks = R.rows() == 0 ? Matrix::identity(ring, s) : kernel_basis(R);
  Matrix K(ring, n, Ks.cols());
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& [k, v] : el.expr[j]) {
      const Scalar* row = Ks.row_ptr(k);
      Scalar* out = K.row_ptr(j);
      for (std::size_t c = 0; c < Ks.cols(); ++c)
        if (sgn(row[c]) != 0) ring.addmul(out[c], v, row[c]);
    }
  return K;
}

// ------------------------------------------------------------------ modules

std::string scalar_to_string(const Scalar& x) { return x.get_str(); }

std::string Canonical::to_string() const {
  std::ostringstream os;
  bool first = true;
  auto sep = [&] {
    if (!first) os << " + ";
    first = false;
  };
  std::string base = ring.is_integers() ? "Z" : ring.tag() == "Q" ? "Q" : "F" + std::to_string(ring.p());
  if (free_rank > 0) {
    sep();
    os << base;
    if (free_rank > 1) os << "^" << free_rank;
  }
  std::map<mpz_class, std::size_t> mult;
  for (const auto& d : torsion) ++mult[d];
  for (const auto& [d, k] : mult) {
    sep();
    os << "Z/" << d.get_str();
    if (k > 1) os << "^" << k;
  }
  if (first) os << "0";
  return os.str();
}

Canonical Canonical::direct_sum(const std::vector<Canonical>& parts) {
  Canonical out;
  if (parts.empty()) return out;
  out.ring = parts.front().ring;
  for (const auto& p : parts) {
    out.free_rank += p.free_rank;
    out.torsion.insert(out.torsion.end(), p.torsion.begin(), p.torsion.end());
  }
  if (out.torsion.empty()) return out;
  // recombine into an invariant factor chain
  Matrix D(out.ring, out.torsion.size(), out.torsion.size());
  for (std::size_t i = 0; i < out.torsion.size(); ++i) D.at(i, i) = Scalar(out.torsion[i]);
  SmithForm sf = smith_normal_form(D);
  out.torsion.clear();
  for (std::size_t i = 0; i < sf.rank; ++i) {
    mpz_class d = sf.S.at(i, i).get_num();
    if (d > 1) out.torsion.push_back(d);
  }
  return out;
}

FPModule FPModule::from_relation_rows(Ring r, std::size_t g, const Matrix& rows) {
  if (rows.rows() > 0 && rows.cols() != g) fail(ErrorKind::DimensionMismatch, "relation row length");
  SparseMatrix rel(r, g, 0);
  for (std::size_t i = 0; i < rows.rows(); ++i) rel.cols.push_back(sparse_from_dense(rows.row(i)));
  return FPModule(r, g, std::move(rel));
}

Matrix FPModule::relation_rows() const { return rel.to_dense().transpose(); }

Simplified simplify(const FPModule& m) {
  Elimination el = eliminate_units(m.ring, m.gens, m.rel.cols);
  Simplified s;
  const std::size_t k = el.survivors.size();
  s.module = FPModule(m.ring, k);
  s.module.rel.cols = std::move(el.residual);
  s.to_new = SparseMatrix(m.ring, k, m.gens);
  for (std::size_t j = 0; j < m.gens; ++j) s.to_new.cols[j] = std::move(el.expr[j]);
  s.to_old = SparseMatrix(m.ring, m.gens, k);
  for (std::size_t i = 0; i < k; ++i) s.to_old.cols[i] = {{el.survivors[i], Scalar(1)}};
  return s;
}

Canonical FPModule::canonical() const {
  Simplified s = simplify(*this);
  Canonical c;
  c.ring = ring;
  const std::size_t g = s.module.gens;
  if (s.module.rel.cols.empty()) {
    c.free_rank = g;
    return c;
  }
  SmithForm sf = smith_normal_form(s.module.rel.to_dense());
  c.free_rank = g - sf.rank;
  for (std::size_t i = 0; i < sf.rank; ++i) {
    const Scalar& d = sf.S.at(i, i);
    if (!ring.is_field() && d != 1) c.torsion.push_back(d.get_num());
  }
  return c;
}

bool FPModule::is_relation(const Vector& v) const {
  if (rel.cols.empty()) {
    for (const auto& x : v)
      if (sgn(x) != 0) return false;
    return true;
  }
  return SpanSolver(rel.to_dense()).contains(v);
}

// -------------------------------------------------------------- SubQuotient

SubQuotient SubQuotient::compute(Ring ring, std::size_t ambient, const Matrix& Zg, const Matrix& Bg) {
  if (Zg.rows() != ambient && Zg.cols() > 0) fail(ErrorKind::DimensionMismatch, "subquotient: Z rows");
  if (Bg.rows() != ambient && Bg.cols() > 0) fail(ErrorKind::DimensionMismatch, "subquotient: B rows");
  SubQuotient q;
  q.ring_ = ring;
  q.ambient_ = ambient;
  Matrix Z = Zg.cols() > 0 ? Zg : Matrix(ring, ambient, 0);
  q.span_ = SpanSolver(Z);
  const std::size_t k = q.span_.rank();

  std::vector<SparseVec> rels;
  rels.reserve(Bg.cols());
  for (std::size_t j = 0; j < Bg.cols(); ++j) {
    auto y = q.span_.basis_coords(Bg.column(j));
    if (!y) fail(ErrorKind::NotASubmodule, "boundary generator outside the cycle span");
    SparseVec sv = sparse_from_dense(*y);
    if (!sv.empty()) rels.push_back(std::move(sv));
  }
  q.elim_ = eliminate_units(ring, k, std::move(rels));
  const std::size_t s = q.elim_.survivors.size();
  Matrix R(ring, s, q.elim_.residual.size());
  for (std::size_t c = 0; c < q.elim_.residual.size(); ++c)
    for (const auto& [i, v] : q.elim_.residual[c]) R.at(i, c) = v;

  Matrix Uinv;
  std::vector<Scalar> diag(s);
  std::size_t rk = 0;
  if (R.cols() == 0) {
    q.U_ = Matrix::identity(ring, s);
    Uinv = Matrix::identity(ring, s);
  } else {
    SmithForm sf = smith_normal_form(R);
    q.U_ = std::move(sf.U);
    Uinv = std::move(sf.Uinv);
    rk = sf.rank;
    for (std::size_t i = 0; i < rk; ++i) diag[i] = sf.S.at(i, i);
  }
  q.canon_.ring = ring;
  for (std::size_t i = 0; i < s; ++i) {
    if (i < rk) {
      if (ring.is_field() || diag[i] == 1) continue;
      q.kept_.push_back(i);
      q.orders_.push_back(diag[i].get_num());
      q.canon_.torsion.push_back(diag[i].get_num());
    } else {
      q.kept_.push_back(i);
      q.orders_.push_back(0);
      ++q.canon_.free_rank;
    }
  }
  // generator i in survivor coordinates: column kept_[i] of Uinv; in basis
  // coordinates through the inclusion of survivors.
  const std::size_t ng = q.kept_.size();
  Matrix inBasis(ring, k, ng);
  for (std::size_t g = 0; g < ng; ++g)
    for (std::size_t t = 0; t < s; ++t) {
      const Scalar& v = Uinv.at(t, q.kept_[g]);
      if (sgn(v) != 0) inBasis.at(q.elim_.survivors[t], g) = v;
    }
  q.gens_ = q.span_.basis() * inBasis;
  if (k == 0) q.gens_ = Matrix(ring, ambient, ng);
  Matrix big = q.span_.basis_in_gens();
  q.lift_ = (big.cols() == 0) ? Matrix(ring, Z.cols(), ng) : big * inBasis;
  return q;
}

Vector SubQuotient::reduce(Vector c) const {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (orders_[i] == 0) continue;
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), c[i].get_num_mpz_t(), orders_[i].get_mpz_t());
    c[i] = Scalar(r);
  }
  return c;
}

std::optional<Vector> SubQuotient::coords(const Vector& v) const {
  auto y = span_.basis_coords(v);
  if (!y) return std::nullopt;
  const std::size_t s = elim_.survivors.size();
  Vector z(s);
  for (std::size_t j = 0; j < y->size(); ++j) {
    if (sgn((*y)[j]) == 0) continue;
    for (const auto& [t, c] : elim_.expr[j]) ring_.addmul(z[t], (*y)[j], c);
  }
  Vector out(kept_.size());
  for (std::size_t g = 0; g < kept_.size(); ++g) {
    const Scalar* row = U_.row_ptr(kept_[g]);
    for (std::size_t t = 0; t < s; ++t)
      if (sgn(row[t]) != 0 && sgn(z[t]) != 0) ring_.addmul(out[g], row[t], z[t]);
  }
  return reduce(std::move(out));
}

Matrix SubQuotient::coords_of(const Matrix& cols) const {
  Matrix out(ring_, num_gens(), cols.cols());
  for (std::size_t j = 0; j < cols.cols(); ++j) {
    auto c = coords(cols.column(j));
    if (!c) fail(ErrorKind::NotASubmodule, "vector outside the cycle span");
    out.set_column(j, *c);
  }
  return out;
}

FPModule SubQuotient::as_module() const {
  FPModule m(ring_, num_gens());
  for (std::size_t i = 0; i < num_gens(); ++i)
    if (orders_[i] != 0) m.rel.cols.push_back({{i, Scalar(orders_[i])}});
  return m;
}

SubQuotient homology_at(const Matrix& d_out, const Matrix& d_in) {
  const Ring& ring = d_out.cols() ? d_out.ring() : d_in.ring();
  if (d_out.cols() != d_in.rows()) fail(ErrorKind::DimensionMismatch, "homology: inner dimensions differ");
  if (d_out.rows() > 0 && d_in.cols() > 0 && !(d_out * d_in).is_zero())
    fail(ErrorKind::CompositionNonzero, "consecutive differentials do not compose to zero");
  const std::size_t n = d_out.cols();
  Matrix Z = d_out.rows() == 0 ? Matrix::identity(ring, n) : kernel_sparse(SparseMatrix::from_dense(d_out));
  return SubQuotient::compute(ring, n, Z, d_in);
}

SubQuotient homology_fp(const SparseMatrix& d_out, const SparseMatrix& rel_target, const SparseMatrix& d_in,
                        const SparseMatrix& rel_here) {
  const Ring& ring = d_out.ring;
  const std::size_t n = d_out.ncols();
  Matrix Z;
  if (d_out.rows == 0) {
    Z = Matrix::identity(ring, n);
  } else {
    SparseMatrix big(ring, d_out.rows, 0);
    big.cols = d_out.cols;
    big.cols.insert(big.cols.end(), rel_target.cols.begin(), rel_target.cols.end());
    Matrix K = kernel_sparse(big);
    Z = K.row_range(0, n);
  }
  Matrix B(ring, n, d_in.ncols() + rel_here.ncols());
  for (std::size_t j = 0; j < d_in.ncols(); ++j)
    for (const auto& [i, v] : d_in.cols[j]) B.at(i, j) = v;
  for (std::size_t j = 0; j < rel_here.ncols(); ++j)
    for (const auto& [i, v] : rel_here.cols[j]) B.at(i, d_in.ncols() + j) = v;
  return SubQuotient::compute(ring, n, Z, B);
}

} // namespace pchain::linalg

namespace pchain::linalg {

SubQuotient FPComplex::homology(int n) const {
  if (n < 0 || n > top()) fail(ErrorKind::InvalidArgument, "homology degree outside the complex");
  SparseMatrix out = n == 0 ? SparseMatrix(ring, 0, dims[0]) : d[n];
  SparseMatrix relt = n == 0 ? SparseMatrix(ring, 0, 0) : rel[n - 1];
  SparseMatrix in = n == top() ? SparseMatrix(ring, dims[n], 0) : d[n + 1];
  return homology_fp(out, relt, in, rel[n]);
}

bool FPComplex::squares_to_zero() const {
  for (int n = 2; n <= top(); ++n) {
    SparseMatrix dd = d[n - 1].mul(d[n]);
    FPModule target(ring, dims[n - 2], rel[n - 2]);
    for (const auto& c : dd.cols)
      if (!c.empty() && !target.is_relation(dense_from_sparse(c, dims[n - 2]))) return false;
  }
  return true;
}

MapInvariants map_invariants(const Matrix& A, const std::vector<mpz_class>& so, const std::vector<mpz_class>& to) {
  const Ring& ring = A.ring();
  const std::size_t ns = so.size(), nt = to.size();
  auto diag = [&](const std::vector<mpz_class>& o) {
    SparseMatrix D(ring, o.size(), 0);
    for (std::size_t i = 0; i < o.size(); ++i)
      if (o[i] != 0) D.cols.push_back({{i, Scalar(o[i])}});
    return D;
  };
  SparseMatrix Ds = diag(so), Dt = diag(to);
  SparseMatrix As = A.cols() ? SparseMatrix::from_dense(A) : SparseMatrix(ring, nt, ns);
  SparseMatrix none(ring, ns, 0);
  MapInvariants m;
  m.kernel = homology_fp(As, Dt, none, Ds).canonical();
  Matrix Zdense(ring, nt, As.ncols() + Dt.ncols());
  Matrix Bdense(ring, nt, Dt.ncols());
  for (std::size_t j = 0; j < As.ncols(); ++j)
    for (const auto& [i, v] : As.cols[j]) Zdense.at(i, j) = v;
  for (std::size_t j = 0; j < Dt.ncols(); ++j)
    for (const auto& [i, v] : Dt.cols[j]) {
      Zdense.at(i, As.ncols() + j) = v;
      Bdense.at(i, j) = v;
    }
  m.image = SubQuotient::compute(ring, nt, Zdense, Bdense).canonical();
  FPModule cok(ring, nt);
  cok.rel.cols = As.cols;
  cok.rel.cols.insert(cok.rel.cols.end(), Dt.cols.begin(), Dt.cols.end());
  m.cokernel = cok.canonical();
  return m;
}

Matrix induced_map(const SubQuotient& src, const SubQuotient& tgt, const SparseMatrix& f) {
  const Ring& ring = src.ring();
  Matrix out(ring, tgt.num_gens(), src.num_gens());
  const Matrix& G = src.generators();
  for (std::size_t g = 0; g < src.num_gens(); ++g) {
    SparseVec v = f.apply(sparse_from_dense(G.column(g)));
    auto c = tgt.coords(dense_from_sparse(v, tgt.ambient()));
    if (!c) fail(ErrorKind::NotASubmodule, "induced map: image leaves the target cycles");
    out.set_column(g, *c);
  }
  return out;
}

} // namespace pchain::linalg
