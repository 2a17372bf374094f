#include "doctest.h"
#include "pchain/linalg.hpp"
#include "pchain/error.hpp"

#include <random>

using namespace pchain::linalg;
using pchain::Error;
using pchain::ErrorKind;

namespace {

Ring ZZ = Ring::integers();

// exact determinant by cofactor-free fraction elimination over Q
Scalar det(const Matrix& A) {
  const std::size_t n = A.rows();
  std::vector<std::vector<Scalar>> m(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = A.at(i, j);
  Scalar d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      d = -d;
    }
    d *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      Scalar f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return d;
}

Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Matrix A(ZZ, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) A.set(i, j, Scalar(dist(rng)));
  return A;
}

Matrix random_unimodular(std::mt19937& rng, std::size_t n) {
  Matrix U = Matrix::identity(ZZ, n);
  std::uniform_int_distribution<int> idx(0, static_cast<int>(n) - 1), coef(-2, 2);
  for (int k = 0; k < 3 * static_cast<int>(n); ++k) {
    int a = idx(rng), b = idx(rng);
    if (a != b) U.row_addmul(a, b, Scalar(coef(rng)));
  }
  return U;
}

} // namespace

TEST_CASE("smith form of small matrices") {
  auto sf = smith_normal_form(Matrix::from_rows(ZZ, {{2, 4}, {6, 8}}));
  CHECK(sf.S == Matrix::from_rows(ZZ, {{2, 0}, {0, 4}}));
  auto id = smith_normal_form(Matrix::identity(ZZ, 2));
  CHECK(id.S.is_identity());
  CHECK(id.U.is_identity());
  CHECK(id.V.is_identity());
  auto z = smith_normal_form(Matrix(ZZ, 3, 2));
  CHECK(z.S.is_zero());
  CHECK(z.U.is_identity());
  CHECK(z.V.is_identity());
}

TEST_CASE("smith form on random matrices") {
  std::mt19937 rng(7);
  for (int t = 0; t < 60; ++t) {
    std::size_t r = 1 + rng() % 7, c = 1 + rng() % 7;
    Matrix A = random_matrix(rng, r, c, -9, 9);
    auto sf = smith_normal_form(A);
    CHECK(sf.U * A * sf.V == sf.S);
    CHECK(abs(det(sf.U)) == 1);
    CHECK(abs(det(sf.V)) == 1);
    CHECK((sf.U * sf.Uinv).is_identity());
    for (std::size_t i = 0; i + 1 < sf.rank; ++i)
      CHECK(mpz_divisible_p(sf.S.at(i + 1, i + 1).get_num_mpz_t(), sf.S.at(i, i).get_num_mpz_t()));
  }
}

TEST_CASE("kernels") {
  CHECK(kernel_basis(Matrix::identity(ZZ, 2)).cols() == 0);
  Matrix k = kernel_basis(Matrix::from_rows(ZZ, {{1, 1}}));
  REQUIRE(k.cols() == 1);
  CHECK(abs(k.at(0, 0)) == 1);
  CHECK(k.at(0, 0) == -k.at(1, 0));
  Matrix q = Matrix::from_rows(Ring::rationals(), {{2, 4}, {6, 8}});
  CHECK(kernel_basis(q).cols() == 0);
  // saturation: kernel of [2 4] over Z is spanned by (2,-1)
  Matrix s = kernel_basis(Matrix::from_rows(ZZ, {{2, 4}}));
  REQUIRE(s.cols() == 1);
  CHECK(abs(s.at(1, 0)) == 1);
}

TEST_CASE("rank nullity over fields") {
  std::mt19937 rng(11);
  for (Ring R : {Ring::rationals(), Ring::prime_field(2), Ring::prime_field(5)}) {
    for (int t = 0; t < 30; ++t) {
      std::size_t r = 1 + rng() % 6, c = 1 + rng() % 6;
      Matrix A(R, r, c);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) A.set(i, j, Scalar(static_cast<long>(rng() % 5) - 2));
      Matrix K = kernel_basis(A);
      CHECK((A * K).is_zero());
      CHECK(K.cols() + rank(A) == c);
      CHECK(kernel_sparse(SparseMatrix::from_dense(A)).cols() == K.cols());
    }
  }
}

TEST_CASE("homology_at examples") {
  auto h = homology_at(Matrix(ZZ, 1, 1), Matrix::from_rows(ZZ, {{2}}));
  CHECK(h.canonical().free_rank == 0);
  CHECK(h.canonical().torsion == std::vector<mpz_class>{2});
  CHECK(homology_at(Matrix::identity(ZZ, 2), Matrix(ZZ, 2, 1)).canonical().is_zero());
  CHECK(homology_at(Matrix(ZZ, 1, 3), Matrix(ZZ, 3, 1)).canonical().free_rank == 3);
  CHECK_THROWS_AS(homology_at(Matrix::identity(ZZ, 1), Matrix::identity(ZZ, 1)), Error);
  try {
    homology_at(Matrix::identity(ZZ, 2), Matrix::identity(ZZ, 3));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("subquotient examples") {
  auto q = SubQuotient::compute(ZZ, 2, Matrix::identity(ZZ, 2), Matrix::from_rows(ZZ, {{2, 0}, {0, 2}}));
  CHECK(q.canonical().torsion == std::vector<mpz_class>{2, 2});
  Matrix B = Matrix::from_rows(ZZ, {{1, 2}, {3, 4}});
  CHECK(SubQuotient::compute(ZZ, 2, B, B).canonical().is_zero());
  auto f = SubQuotient::compute(ZZ, 2, Matrix::from_rows(ZZ, {{1}, {0}}), Matrix(ZZ, 2, 0));
  CHECK(f.canonical().free_rank == 1);
  try {
    SubQuotient::compute(ZZ, 2, Matrix::from_rows(ZZ, {{2}, {0}}), Matrix::from_rows(ZZ, {{1}, {0}}));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotASubmodule);
  }
}

TEST_CASE("subquotient coordinates and lifts") {
  std::mt19937 rng(3);
  for (int t = 0; t < 40; ++t) {
    std::size_t n = 2 + rng() % 5;
    Matrix Z = random_matrix(rng, n, 1 + rng() % n, -3, 3);
    Matrix C = random_matrix(rng, Z.cols(), rng() % 4, -4, 4);
    Matrix B = Z * C;
    auto q = SubQuotient::compute(ZZ, n, Z, B);
    CHECK(Z * q.lift_matrix() == q.generators());
    // generators have unit coordinates
    Matrix G = q.coords_of(q.generators());
    for (std::size_t i = 0; i < q.num_gens(); ++i)
      for (std::size_t j = 0; j < q.num_gens(); ++j) CHECK(G.at(i, j) == (i == j ? 1 : 0));
    // boundaries vanish
    Matrix Bc = q.coords_of(B);
    CHECK(Bc.is_zero());
    // invariance under basis change of the ambient
    Matrix U = random_unimodular(rng, n);
    auto q2 = SubQuotient::compute(ZZ, n, U * Z, U * B);
    CHECK(q2.canonical() == q.canonical());
  }
}

TEST_CASE("sparse elimination presentations") {
  // Z^3 / <(1,2,0),(0,3,3)> = Z/3 + Z
  FPModule m = FPModule::from_relation_rows(ZZ, 3, Matrix::from_rows(ZZ, {{1, 2, 0}, {0, 3, 3}}));
  Canonical c = m.canonical();
  CHECK(c.free_rank == 1);
  CHECK(c.torsion == std::vector<mpz_class>{3});
  Simplified s = simplify(m);
  CHECK(s.module.canonical() == c);
  CHECK(Canonical::direct_sum({c, c}).torsion == std::vector<mpz_class>{3, 3});
  Canonical d{ZZ, 0, {2}}, e{ZZ, 0, {3}};
  CHECK(Canonical::direct_sum({d, e}).torsion == std::vector<mpz_class>{6});
  CHECK(Canonical::direct_sum({d, e}).to_string() == "Z/6");
}
