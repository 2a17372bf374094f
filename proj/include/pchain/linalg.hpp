#pragma once

#include "pchain/matrix.hpp"

#include <optional>
#include <string>

namespace pchain::linalg {

// T * W = E with T invertible (unimodular over Z) and E in row echelon form:
// rows [0, rank) are nonzero with strictly increasing pivot columns.
struct RowEchelon {
  Matrix E;
  Matrix T;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

RowEchelon row_echelon(const Matrix& W, bool track_transform = true);

struct SmithForm {
  Matrix U, S, V;
  Matrix Uinv;  // U^{-1}
  std::size_t rank = 0;
};

// U * A * V = S over the integers; pivots by smallest absolute value, then
// lowest row index, then lowest column index.
SmithForm smith_normal_form(const Matrix& A);

// Columns span {x : A x = 0}; over Z the lattice is saturated.
Matrix kernel_basis(const Matrix& A);
// Echelon basis of the column span of A.
Matrix image_basis(const Matrix& A);
std::size_t rank(const Matrix& A);
// X with A X = B, or nullopt.
std::optional<Matrix> solve(const Matrix& A, const Matrix& B);

// Solver for membership and coordinates in the column span of a generating set.
class SpanSolver {
public:
  SpanSolver() = default;
  explicit SpanSolver(const Matrix& gens);

  std::size_t ambient() const { return ambient_; }
  std::size_t rank() const { return ech_.rank; }
  // Coordinates with respect to basis() columns.
  std::optional<Vector> basis_coords(const Vector& v) const;
  // c with gens * c = v.
  std::optional<Vector> solve(const Vector& v) const;
  bool contains(const Vector& v) const { return basis_coords(v).has_value(); }
  Matrix basis() const;
  // basis() = gens * basis_in_gens()
  Matrix basis_in_gens() const;

private:
  Ring ring_;
  std::size_t ambient_ = 0, ngens_ = 0;
  RowEchelon ech_;
};

// Result of eliminating variables through unit pivots in a family of sparse
// linear forms. For solution sets: y = expr * z with residual(z) = 0. For
// quotients R^n / span(forms): generator j maps to expr[j].
struct Elimination {
  std::size_t n = 0;
  std::vector<std::size_t> survivors;
  std::vector<long> position;  // original index -> survivor position, -1 if eliminated
  std::vector<SparseVec> expr;
  std::vector<SparseVec> residual;
};

Elimination eliminate_units(const Ring& ring, std::size_t n, std::vector<SparseVec> forms);

// Dense kernel basis of a sparse matrix (x with A x = 0).
Matrix kernel_sparse(const SparseMatrix& A);

struct Canonical {
  Ring ring;
  std::size_t free_rank = 0;
  std::vector<mpz_class> torsion;  // d_1 | d_2 | ..., all > 1

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const Canonical& o) const {
    return ring == o.ring && free_rank == o.free_rank && torsion == o.torsion;
  }
  bool operator!=(const Canonical& o) const { return !(*this == o); }
  std::string to_string() const;
  static Canonical direct_sum(const std::vector<Canonical>& parts);
  static Canonical free(Ring r, std::size_t n) { return Canonical{r, n, {}}; }
};

// Presented module R^gens / span(columns of rel).
struct FPModule {
  Ring ring;
  std::size_t gens = 0;
  SparseMatrix rel;

  FPModule() = default;
  FPModule(Ring r, std::size_t g) : ring(r), gens(g), rel(r, g, 0) {}
  FPModule(Ring r, std::size_t g, SparseMatrix relations) : ring(r), gens(g), rel(std::move(relations)) {}
  static FPModule free(Ring r, std::size_t g) { return FPModule(r, g); }
  // Relations given as rows of length g.
  static FPModule from_relation_rows(Ring r, std::size_t g, const Matrix& rows);
  Matrix relation_rows() const;
  bool is_free_presentation() const { return rel.cols.empty(); }
  Canonical canonical() const;
  // Membership of v in the relation span.
  bool is_relation(const Vector& v) const;
  Matrix rel_dense() const { return rel.to_dense(); }
};

struct Simplified {
  FPModule module;
  SparseMatrix to_new;  // module.gens x original gens
  SparseMatrix to_old;  // original gens x module.gens
};

Simplified simplify(const FPModule& m);

// span(Z) / span(B) inside R^ambient, with canonical generators, coordinates
// and lifts to the original generating set of Z.
class SubQuotient {
public:
  SubQuotient() = default;
  static SubQuotient compute(Ring ring, std::size_t ambient, const Matrix& Zgens, const Matrix& Bgens);

  const Canonical& canonical() const { return canon_; }
  std::size_t ambient() const { return ambient_; }
  std::size_t num_gens() const { return orders_.size(); }
  // d > 1 for a torsion generator, 0 for a free one.
  const std::vector<mpz_class>& orders() const { return orders_; }
  const Matrix& generators() const { return gens_; }
  // generators() = Zgens * lift_matrix()
  const Matrix& lift_matrix() const { return lift_; }
  std::optional<Vector> coords(const Vector& v) const;
  // Coordinates of each column; throws NotASubmodule when one lies outside span(Z).
  Matrix coords_of(const Matrix& cols) const;
  Vector reduce(Vector c) const;
  const Ring& ring() const { return ring_; }
  // Presentation of the quotient on its canonical generators.
  FPModule as_module() const;

private:
  Ring ring_;
  std::size_t ambient_ = 0;
  SpanSolver span_;
  Elimination elim_;
  Matrix U_;                              // SNF transform on survivor coordinates
  std::vector<std::size_t> kept_;         // rows of U giving canonical coordinates
  std::vector<mpz_class> orders_;
  Matrix gens_, lift_;
  Canonical canon_;
};

// ker(d_out) / im(d_in) for a complex of free modules (the zero-composite
// condition is checked).
SubQuotient homology_at(const Matrix& d_out, const Matrix& d_in);

// Homology at the middle of C_{n+1} -> C_n -> C_{n-1} where each C is a
// presented module: d_out is g_{n-1} x g_n, d_in is g_n x g_{n+1}, rel_* are
// relation columns of C_{n-1} and C_n.
SubQuotient homology_fp(const SparseMatrix& d_out, const SparseMatrix& rel_target, const SparseMatrix& d_in,
                        const SparseMatrix& rel_here);

// Chain complex of presented modules in degrees 0..top; d[n]: C_n -> C_{n-1}
// (d[0] has no rows).
struct FPComplex {
  Ring ring;
  std::vector<std::size_t> dims;
  std::vector<SparseMatrix> rel;
  std::vector<SparseMatrix> d;

  int top() const { return static_cast<int>(dims.size()) - 1; }
  // valid for 0 <= n < top(), and for n = top() when the complex ends there
  SubQuotient homology(int n) const;
  // d[n-1] * d[n] lands in the relations of C_{n-2}
  bool squares_to_zero() const;
};

// Kernel, image and cokernel of a map between direct sums of cyclic modules
// given on canonical generators (order 0 = free).
struct MapInvariants {
  Canonical kernel, image, cokernel;
  bool is_iso() const { return kernel.is_zero() && cokernel.is_zero(); }
  bool operator==(const MapInvariants& o) const {
    return kernel == o.kernel && image == o.image && cokernel == o.cokernel;
  }
};

MapInvariants map_invariants(const Matrix& A, const std::vector<mpz_class>& src_orders,
                             const std::vector<mpz_class>& tgt_orders);

// Matrix of the map induced between two subquotients by a linear map f on
// ambients (tgt.num_gens x src.num_gens).
Matrix induced_map(const SubQuotient& src, const SubQuotient& tgt, const SparseMatrix& f);

std::string scalar_to_string(const Scalar& x);

} // namespace pchain::linalg
