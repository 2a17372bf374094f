#include "pchain/matrix.hpp"

#include "pchain/error.hpp"

#include <algorithm>

namespace pchain::linalg {

namespace {
void check_same(const Ring& a, const Ring& b) {
  if (a != b) fail(ErrorKind::RingMismatch, a.tag() + " vs " + b.tag());
}
} // namespace

Matrix Matrix::identity(Ring ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(Ring ring, const std::vector<std::vector<long>>& rows, std::size_t cols) {
  if (!rows.empty()) cols = rows[0].size();
  Matrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail(ErrorKind::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m.at(i, j) = ring.from_int(rows[i][j]);
  }
  return m;
}

Matrix Matrix::from_columns(Ring ring, std::size_t rows, const std::vector<std::vector<Scalar>>& cols) {
  Matrix m(ring, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) fail(ErrorKind::DimensionMismatch, "column length");
    for (std::size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
  }
  return m;
}

std::vector<Scalar> Matrix::column(std::size_t j) const {
  std::vector<Scalar> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = at(i, j);
  return v;
}

std::vector<Scalar> Matrix::row(std::size_t i) const {
  return std::vector<Scalar>(row_ptr(i), row_ptr(i) + cols_);
}

void Matrix::set_column(std::size_t j, const std::vector<Scalar>& v) {
  for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
}

Matrix Matrix::transpose() const {
  Matrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& o) const {
  check_same(ring_, o.ring_);
  if (cols_ != o.rows_) fail(ErrorKind::DimensionMismatch, "matrix product shapes");
  Matrix r(ring_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const Scalar* a = row_ptr(i);
    Scalar* out = r.row_ptr(i);
    for (std::size_t k = 0; k < cols_; ++k) {
      if (sgn(a[k]) == 0) continue;
      const Scalar* b = o.row_ptr(k);
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (sgn(b[j]) != 0) ring_.addmul(out[j], a[k], b[j]);
    }
  }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  check_same(ring_, o.ring_);
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorKind::DimensionMismatch, "matrix sum shapes");
  Matrix r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) ring_.add(r.data_[k], o.data_[k]);
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
  check_same(ring_, o.ring_);
  if (rows_ != o.rows_ || cols_ != o.cols_) fail(ErrorKind::DimensionMismatch, "matrix difference shapes");
  Matrix r = *this;
  for (std::size_t k = 0; k < data_.size(); ++k) ring_.sub(r.data_[k], o.data_[k]);
  return r;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix r(ring_, rows_, cols_);
  for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = ring_.mul(data_[k], s);
  return r;
}

bool Matrix::operator==(const Matrix& o) const {
  return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& x) { return sgn(x) == 0; });
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (at(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

std::vector<Scalar> Matrix::apply(const std::vector<Scalar>& v) const {
  if (v.size() != cols_) fail(ErrorKind::DimensionMismatch, "matrix-vector shapes");
  std::vector<Scalar> r(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const Scalar* a = row_ptr(i);
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn(a[j]) != 0 && sgn(v[j]) != 0) ring_.addmul(r[i], a[j], v[j]);
  }
  return r;
}

Matrix Matrix::columns(const std::vector<std::size_t>& idx) const {
  Matrix r(ring_, rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < idx.size(); ++k) r.at(i, k) = at(i, idx[k]);
  return r;
}

Matrix Matrix::col_range(std::size_t begin, std::size_t end) const {
  Matrix r(ring_, rows_, end - begin);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = begin; j < end; ++j) r.at(i, j - begin) = at(i, j);
  return r;
}

Matrix Matrix::row_range(std::size_t begin, std::size_t end) const {
  Matrix r(ring_, end - begin, cols_);
  for (std::size_t i = begin; i < end; ++i)
    for (std::size_t j = 0; j < cols_; ++j) r.at(i - begin, j) = at(i, j);
  return r;
}

Matrix Matrix::rows_subset(const std::vector<std::size_t>& idx) const {
  Matrix r(ring_, idx.size(), cols_);
  for (std::size_t k = 0; k < idx.size(); ++k)
    for (std::size_t j = 0; j < cols_; ++j) r.at(k, j) = at(idx[k], j);
  return r;
}

void Matrix::paste(const Matrix& block, std::size_t r0, std::size_t c0) {
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) at(r0 + i, c0 + j) = block.at(i, j);
}

void Matrix::add_block(const Matrix& block, std::size_t r0, std::size_t c0, const Scalar& coef) {
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j)
      if (sgn(block.at(i, j)) != 0) ring_.addmul(at(r0 + i, c0 + j), block.at(i, j), coef);
}

Matrix Matrix::hcat(const Matrix& a, const Matrix& b) {
  check_same(a.ring_, b.ring_);
  if (a.rows_ != b.rows_) fail(ErrorKind::DimensionMismatch, "hcat row counts");
  Matrix r(a.ring_, a.rows_, a.cols_ + b.cols_);
  r.paste(a, 0, 0);
  r.paste(b, 0, a.cols_);
  return r;
}

Matrix Matrix::vcat(const Matrix& a, const Matrix& b) {
  check_same(a.ring_, b.ring_);
  if (a.cols_ != b.cols_) fail(ErrorKind::DimensionMismatch, "vcat column counts");
  Matrix r(a.ring_, a.rows_ + b.rows_, a.cols_);
  r.paste(a, 0, 0);
  r.paste(b, a.rows_, 0);
  return r;
}

void Matrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
}

void Matrix::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
}

void Matrix::row_addmul(std::size_t a, std::size_t b, const Scalar& c) {
  if (sgn(c) == 0) return;
  Scalar* ra = row_ptr(a);
  const Scalar* rb = row_ptr(b);
  for (std::size_t j = 0; j < cols_; ++j)
    if (sgn(rb[j]) != 0) ring_.addmul(ra[j], c, rb[j]);
}

void Matrix::col_addmul(std::size_t a, std::size_t b, const Scalar& c) {
  if (sgn(c) == 0) return;
  for (std::size_t i = 0; i < rows_; ++i)
    if (sgn(at(i, b)) != 0) ring_.addmul(at(i, a), c, at(i, b));
}

void Matrix::row_negate(std::size_t a) {
  for (std::size_t j = 0; j < cols_; ++j) at(a, j) = ring_.neg(at(a, j));
}

void Matrix::col_negate(std::size_t a) {
  for (std::size_t i = 0; i < rows_; ++i) at(i, a) = ring_.neg(at(i, a));
}

void Matrix::append_column(const std::vector<Scalar>& v) {
  if (v.size() != rows_) fail(ErrorKind::DimensionMismatch, "append_column length");
  Matrix r(ring_, rows_, cols_ + 1);
  r.paste(*this, 0, 0);
  for (std::size_t i = 0; i < rows_; ++i) r.at(i, cols_) = v[i];
  *this = std::move(r);
}

SparseVec sparse_from_dense(const Vector& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (sgn(v[i]) != 0) s.emplace_back(i, v[i]);
  return s;
}

Vector dense_from_sparse(const SparseVec& v, std::size_t n) {
  Vector d(n);
  for (const auto& [i, x] : v) d[i] = x;
  return d;
}

void sparse_axpy(const Ring& ring, SparseVec& acc, const Scalar& c, const SparseVec& v) {
  if (sgn(c) == 0 || v.empty()) return;
  SparseVec out;
  out.reserve(acc.size() + v.size());
  std::size_t a = 0, b = 0;
  while (a < acc.size() || b < v.size()) {
    if (b == v.size() || (a < acc.size() && acc[a].first < v[b].first)) {
      out.push_back(std::move(acc[a]));
      ++a;
    } else if (a == acc.size() || v[b].first < acc[a].first) {
      out.emplace_back(v[b].first, ring.mul(c, v[b].second));
      if (sgn(out.back().second) == 0) out.pop_back();
      ++b;
    } else {
      Scalar x = std::move(acc[a].second);
      ring.addmul(x, c, v[b].second);
      if (sgn(x) != 0) out.emplace_back(acc[a].first, std::move(x));
      ++a;
      ++b;
    }
  }
  acc = std::move(out);
}

const Scalar* sparse_find(const SparseVec& v, std::size_t idx) {
  auto it = std::lower_bound(v.begin(), v.end(), idx,
                             [](const std::pair<std::size_t, Scalar>& e, std::size_t k) { return e.first < k; });
  if (it != v.end() && it->first == idx) return &it->second;
  return nullptr;
}

SparseMatrix SparseMatrix::from_dense(const Matrix& m) {
  SparseMatrix s(m.ring(), m.rows(), m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (sgn(m.at(i, j)) != 0) s.cols[j].emplace_back(i, m.at(i, j));
  return s;
}

Matrix SparseMatrix::to_dense() const {
  Matrix m(ring, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, x] : cols[j]) m.at(i, j) = x;
  return m;
}

SparseMatrix SparseMatrix::transpose() const {
  SparseMatrix t(ring, cols.size(), rows);
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, x] : cols[j]) t.cols[i].emplace_back(j, x);
  return t;
}

SparseVec SparseMatrix::apply(const SparseVec& v) const {
  SparseVec acc;
  for (const auto& [j, x] : v) sparse_axpy(ring, acc, x, cols[j]);
  return acc;
}

SparseMatrix SparseMatrix::mul(const SparseMatrix& other) const {
  if (other.rows != cols.size()) fail(ErrorKind::DimensionMismatch, "sparse product shapes");
  SparseMatrix r(ring, rows, other.cols.size());
  for (std::size_t j = 0; j < other.cols.size(); ++j) r.cols[j] = apply(other.cols[j]);
  return r;
}

} // namespace pchain::linalg
