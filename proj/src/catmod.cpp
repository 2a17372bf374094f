#include "pchain/catmod.hpp"
#include "pchain/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <sstream>

namespace pchain::catmod {

using linalg::dense_from_sparse;
using linalg::sparse_axpy;
using linalg::sparse_from_dense;
using linalg::SpanSolver;
using linalg::SubQuotient;

const char* variance_name(Variance v) { return v == Variance::Covariant ? "co" : "contra"; }

namespace {

SparseVec dense_times_sparse(const Matrix& m, const SparseVec& v) {
  const Ring& R = m.ring();
  Vector acc(m.rows());
  for (const auto& [j, x] : v)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (sgn(m.at(i, j)) != 0) R.addmul(acc[i], m.at(i, j), x);
  return sparse_from_dense(acc);
}

bool in_relations(const FPModule& V, const SpanSolver* S, const Vector& v) {
  bool zero = std::all_of(v.begin(), v.end(), [](const Scalar& x) { return sgn(x) == 0; });
  if (zero) return true;
  if (V.rel.cols.empty()) return false;
  return S->contains(v);
}

} // namespace

// ------------------------------------------------------------------ modules

std::vector<std::string> CatModule::violations() const {
  std::vector<std::string> out;
  const Category& C = *base;
  if (static_cast<int>(value.size()) != C.num_objects()) {
    out.push_back("module has " + std::to_string(value.size()) + " values for " + std::to_string(C.num_objects()) +
                  " objects");
    return out;
  }
  if (static_cast<int>(action.size()) != C.num_morphisms()) {
    out.push_back("module has " + std::to_string(action.size()) + " action matrices for " +
                  std::to_string(C.num_morphisms()) + " morphisms");
    return out;
  }
  for (int c = 0; c < C.num_objects(); ++c) {
    if (value[c].ring != ring) out.push_back("value at " + C.object_name(c) + " over the wrong ring");
    if (value[c].rel.rows != value[c].gens && !value[c].rel.cols.empty())
      out.push_back("relations at " + C.object_name(c) + " have the wrong length");
  }
  for (int f = 0; f < C.num_morphisms(); ++f) {
    const std::size_t ra = rank(C.src(f)), rb = rank(C.tgt(f));
    const std::size_t want_r = contravariant() ? ra : rb, want_c = contravariant() ? rb : ra;
    if (action[f].rows() != want_r || action[f].cols() != want_c)
      out.push_back("action of " + C.morphism_name(f) + " has shape " + std::to_string(action[f].rows()) + "x" +
                    std::to_string(action[f].cols()) + ", expected " + std::to_string(want_r) + "x" +
                    std::to_string(want_c));
  }
  if (!out.empty()) return out;
  std::vector<SpanSolver> solvers(C.num_objects());
  for (int c = 0; c < C.num_objects(); ++c)
    if (!value[c].rel.cols.empty()) solvers[c] = SpanSolver(value[c].rel.to_dense());
  // a matrix equals another modulo relations of the object its columns live in
  auto congruent = [&](const Matrix& A, const Matrix& B, int obj) {
    Matrix D = A - B;
    for (std::size_t j = 0; j < D.cols(); ++j)
      if (!in_relations(value[obj], &solvers[obj], D.column(j))) return false;
    return true;
  };
  for (int c = 0; c < C.num_objects(); ++c)
    if (!congruent(action[C.identity(c)], Matrix::identity(ring, rank(c)), c))
      out.push_back("identity of " + C.object_name(c) + " does not act as the identity");
  for (int f = 0; f < C.num_morphisms(); ++f) {
    int from = contravariant() ? C.tgt(f) : C.src(f), to = contravariant() ? C.src(f) : C.tgt(f);
    const auto& rel = value[from].rel;
    for (const auto& r : rel.cols) {
      SparseVec img = dense_times_sparse(action[f], r);
      if (!in_relations(value[to], &solvers[to], dense_from_sparse(img, rank(to)))) {
        out.push_back("action of " + C.morphism_name(f) + " does not preserve relations");
        break;
      }
    }
  }
  for (int g = 0; g < C.num_morphisms(); ++g)
    for (int f = 0; f < C.num_morphisms(); ++f) {
      int gf = C.compose(g, f);
      if (gf < 0) continue;
      Matrix prod = contravariant() ? action[f] * action[g] : action[g] * action[f];
      int obj = contravariant() ? C.src(f) : C.tgt(g);
      if (!congruent(prod, action[gf], obj))
        out.push_back("functoriality fails on (" + C.morphism_name(g) + ", " + C.morphism_name(f) + ")");
    }
  return out;
}

void CatModule::check() const {
  auto v = violations();
  if (!v.empty()) fail(ErrorKind::NotAFunctor, v.front());
}

CatModule CatModule::over_opposite(CatPtr opposite) const {
  CatModule M = *this;
  M.base = std::move(opposite);
  M.variance = contravariant() ? Variance::Covariant : Variance::Contravariant;
  return M;
}

std::string CatModule::canonical_string() const {
  std::ostringstream os;
  os << base->canonical_string() << "|mod;" << variance_name(variance) << ';' << ring.tag();
  for (const auto& v : value) {
    os << "|v" << v.gens << ':';
    for (const auto& c : v.rel.cols) {
      os << '[';
      for (const auto& [i, x] : c) os << i << '=' << x.get_str() << ',';
      os << ']';
    }
  }
  for (const auto& a : action) {
    os << "|a" << a.rows() << 'x' << a.cols() << ':';
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) os << a.at(i, j).get_str() << ',';
  }
  return os.str();
}

CatModule constant_module(CatPtr C, Ring R, Variance v, std::size_t rank) {
  CatModule M;
  M.base = C;
  M.variance = v;
  M.ring = R;
  M.value.assign(C->num_objects(), FPModule(R, rank));
  M.action.assign(C->num_morphisms(), Matrix::identity(R, rank));
  return M;
}

CatModule permutation_module(CatPtr C, Ring R, Variance v, const std::vector<std::size_t>& sizes,
                             const std::function<std::vector<int>(int)>& on_morphism) {
  CatModule M;
  M.base = C;
  M.variance = v;
  M.ring = R;
  for (std::size_t s : sizes) M.value.emplace_back(R, s);
  for (int f = 0; f < C->num_morphisms(); ++f) {
    // map of sets from the domain value to the codomain value
    const int from = v == Variance::Contravariant ? C->tgt(f) : C->src(f);
    const int to = v == Variance::Contravariant ? C->src(f) : C->tgt(f);
    std::vector<int> img = on_morphism(f);
    Matrix A(R, sizes[to], sizes[from]);
    for (std::size_t x = 0; x < sizes[from]; ++x)
      if (img[x] >= 0) A.set(img[x], x, Scalar(1));
    M.action.push_back(std::move(A));
  }
  return M;
}

CatModule orbit_permutation_module(CatPtr C, Ring R) {
  const Category& c = *C;
  // elements at object a: (d, orbit of aut(d) on mor(a, d)) with least member
  std::vector<std::vector<std::pair<int, int>>> elems(c.num_objects());
  std::vector<std::map<int, int>> orbit_of(c.num_objects());  // morphism -> element index
  for (int a = 0; a < c.num_objects(); ++a)
    for (int cls = 0; cls < c.num_classes(); ++cls) {
      int d = c.rep(cls);
      for (int h : c.hom(a, d)) {
        if (orbit_of[a].count(h)) continue;
        int idx = static_cast<int>(elems[a].size());
        elems[a].push_back({d, h});
        for (int u : c.aut(d)) orbit_of[a][c.compose(u, h)] = idx;
      }
    }
  std::vector<std::size_t> sizes;
  for (const auto& e : elems) sizes.push_back(e.size());
  return permutation_module(C, R, Variance::Contravariant, sizes, [&](int f) {
    // f: a -> b, element [h: b -> d] maps to [h∘f]
    const int a = c.src(f), b = c.tgt(f);
    std::vector<int> img(elems[b].size());
    for (std::size_t x = 0; x < elems[b].size(); ++x) img[x] = orbit_of[a].at(c.compose(elems[b][x].second, f));
    return img;
  });
}

CatModule augmentation_module(CatPtr C, Ring R, Variance v) {
  const Category& c = *C;
  const bool co = v == Variance::Covariant;
  // permutation basis at a: morphisms d -> a (co) or a -> d (contra), d over representatives
  std::vector<std::vector<int>> elems(c.num_objects());
  std::vector<std::map<int, int>> pos(c.num_objects());
  for (int a = 0; a < c.num_objects(); ++a)
    for (int cls = 0; cls < c.num_classes(); ++cls)
      for (int h : co ? c.hom(c.rep(cls), a) : c.hom(a, c.rep(cls))) {
        pos[a][h] = static_cast<int>(elems[a].size());
        elems[a].push_back(h);
      }
  CatModule M;
  M.base = C;
  M.variance = v;
  M.ring = R;
  for (int a = 0; a < c.num_objects(); ++a) M.value.emplace_back(R, elems[a].size() - 1);
  for (int f = 0; f < c.num_morphisms(); ++f) {
    const int from = co ? c.src(f) : c.tgt(f), to = co ? c.tgt(f) : c.src(f);
    auto image = [&](int x) {
      int h = elems[from][x];
      return pos[to].at(co ? c.compose(f, h) : c.compose(h, f));
    };
    Matrix A(R, elems[to].size() - 1, elems[from].size() - 1);
    const int base_img = image(0);
    for (std::size_t x = 1; x < elems[from].size(); ++x) {
      // e_x - e_0 ↦ e_{fx} - e_{f0}, written in the basis e_y - e_0 of the target
      int y = image(static_cast<int>(x));
      if (y != 0) A.at(y - 1, x - 1) += 1;
      if (base_img != 0) A.at(base_img - 1, x - 1) -= 1;
    }
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < A.cols(); ++j) R.normalize(A.at(i, j));
    M.action.push_back(std::move(A));
  }
  return M;
}

// ------------------------------------------------------------------ tensor

TensorPresentation tensor_presentation(const CatModule& M, const CatModule& N) {
  if (M.base.get() != N.base.get() && M.base->canonical_string() != N.base->canonical_string())
    fail(ErrorKind::BaseMismatch, "tensor: modules over different categories");
  if (M.ring != N.ring) fail(ErrorKind::RingMismatch, "tensor: modules over different rings");
  if (!M.contravariant() || N.contravariant())
    fail(ErrorKind::VarianceMismatch, "tensor: needs a contravariant and a covariant module");
  const Category& C = *M.base;
  const Ring& R = M.ring;
  TensorPresentation T;
  std::size_t total = 0;
  for (int c = 0; c < C.num_objects(); ++c) {
    T.offset.push_back(total);
    total += M.rank(c) * N.rank(c);
  }
  T.module = FPModule(R, total);
  auto& rels = T.module.rel.cols;
  for (int c = 0; c < C.num_objects(); ++c) {
    const std::size_t m = M.rank(c), n = N.rank(c), o = T.offset[c];
    for (const auto& r : M.value[c].rel.cols)
      for (std::size_t j = 0; j < n; ++j) {
        SparseVec v;
        for (const auto& [i, x] : r) v.push_back({o + i * n + j, x});
        rels.push_back(std::move(v));
      }
    for (const auto& s : N.value[c].rel.cols)
      for (std::size_t i = 0; i < m; ++i) {
        SparseVec v;
        for (const auto& [j, x] : s) v.push_back({o + i * n + j, x});
        rels.push_back(std::move(v));
      }
  }
  // φ: a -> b; (M(φ) e_i) ⊗ e_j at a minus e_i ⊗ (N(φ) e_j) at b, i < m_b, j < n_a
  for (int f = 0; f < C.num_morphisms(); ++f) {
    if (C.is_identity(f)) continue;
    const int a = C.src(f), b = C.tgt(f);
    const Matrix& Mf = M.action[f];  // m_a x m_b
    const Matrix& Nf = N.action[f];  // n_b x n_a
    const std::size_t ma = M.rank(a), mb = M.rank(b), na = N.rank(a), nb = N.rank(b);
    for (std::size_t i = 0; i < mb; ++i)
      for (std::size_t j = 0; j < na; ++j) {
        SparseVec v;
        for (std::size_t i2 = 0; i2 < ma; ++i2)
          if (sgn(Mf.at(i2, i)) != 0) v.push_back({T.offset[a] + i2 * na + j, Mf.at(i2, i)});
        SparseVec w;
        for (std::size_t j2 = 0; j2 < nb; ++j2)
          if (sgn(Nf.at(j2, j)) != 0) w.push_back({T.offset[b] + i * nb + j2, Nf.at(j2, j)});
        std::sort(v.begin(), v.end());
        sparse_axpy(R, v, Scalar(-1), w);
        if (!v.empty()) rels.push_back(std::move(v));
      }
  }
  T.module.rel.rows = total;
  return T;
}

Canonical tensor_over_C(const CatModule& M, const CatModule& N) { return tensor_presentation(M, N).module.canonical(); }

// ------------------------------------------------------- restrict / induce

CatModule restrict_module(const Functor& F, const CatModule& M) {
  F.check();
  if (F.target.get() != M.base.get() && F.target->canonical_string() != M.base->canonical_string())
    fail(ErrorKind::BaseMismatch, "restriction: module not over the target category");
  CatModule X;
  X.base = F.source;
  X.variance = M.variance;
  X.ring = M.ring;
  for (int b = 0; b < F.source->num_objects(); ++b) X.value.push_back(M.value[F.on_objects[b]]);
  for (int f = 0; f < F.source->num_morphisms(); ++f) X.action.push_back(M.action[F.on_morphisms[f]]);
  return X;
}

namespace {

Induced induce_contravariant(const Functor& F, const CatModule& X) {
  const Category& B = *F.source;
  const Category& C = *F.target;
  const Ring& R = X.ring;
  Induced out;
  out.functor = F;
  for (int b = 0; b < B.num_objects(); ++b) out.source_rank.push_back(X.rank(b));
  // N_d(b) = R mor_C(d, F b), covariant in b by post-composition with F(f)
  std::vector<TensorPresentation> pres(C.num_objects());
  std::vector<linalg::Simplified> simp(C.num_objects());
  out.nsize.assign(C.num_objects(), {});
  for (int d = 0; d < C.num_objects(); ++d) {
    std::vector<std::size_t> sizes;
    for (int b = 0; b < B.num_objects(); ++b) sizes.push_back(C.hom(d, F.on_objects[b]).size());
    out.nsize[d] = sizes;
    CatModule Nd = permutation_module(F.source, R, Variance::Covariant, sizes, [&](int f) {
      const int b = B.src(f);
      const auto& hs = C.hom(d, F.on_objects[b]);
      std::vector<int> img;
      for (int h : hs) img.push_back(C.hom_index(C.compose(F.on_morphisms[f], h)));
      return img;
    });
    pres[d] = tensor_presentation(X, Nd);
    simp[d] = linalg::simplify(pres[d].module);
    out.offset.push_back(pres[d].offset);
    out.to_new.push_back(simp[d].to_new);
  }
  CatModule& Y = out.module;
  Y.base = F.target;
  Y.variance = Variance::Contravariant;
  Y.ring = R;
  for (int d = 0; d < C.num_objects(); ++d) Y.value.push_back(simp[d].module);
  for (int u = 0; u < C.num_morphisms(); ++u) {
    // u: d' -> d acts by (b, i, h) ↦ (b, i, h∘u)
    const int dp = C.src(u), d = C.tgt(u);
    const std::size_t rows = simp[dp].module.gens, cols = simp[d].module.gens;
    Matrix A(R, rows, cols);
    for (std::size_t g = 0; g < cols; ++g) {
      SparseVec acc;
      for (const auto& [old, coef] : simp[d].to_old.cols[g]) {
        // decode old generator of pres[d]
        int b = 0;
        while (b + 1 < B.num_objects() && pres[d].offset[b + 1] <= old) ++b;
        const std::size_t local = old - pres[d].offset[b], n = out.nsize[d][b];
        const std::size_t i = local / n, hpos = local % n;
        const int h = C.hom(d, F.on_objects[b])[hpos];
        sparse_axpy(R, acc, coef, out.generator(dp, b, i, C.compose(h, u)));
      }
      for (const auto& [r, x] : acc) A.at(r, g) = x;
    }
    Y.action.push_back(std::move(A));
  }
  return out;
}

} // namespace

SparseVec Induced::generator(int d, int b, std::size_t i, int h) const {
  const Category& C = *functor.target;
  return to_new[d].cols[offset[d][b] + i * nsize[d][b] + C.hom_index(h)];
}

Matrix Induced::unit(int b) const {
  const int c = functor.on_objects[b];
  Matrix U(module.ring, module.rank(c), source_rank[b]);
  for (std::size_t i = 0; i < source_rank[b]; ++i)
    for (const auto& [r, x] : generator(c, b, i, functor.target->identity(c))) U.at(r, i) = x;
  return U;
}

Induced induce_with_unit(const Functor& F, const CatModule& X) {
  F.check();
  if (!X.contravariant()) fail(ErrorKind::VarianceMismatch, "induction with unit needs a contravariant module");
  if (F.source.get() != X.base.get() && F.source->canonical_string() != X.base->canonical_string())
    fail(ErrorKind::BaseMismatch, "induction: module not over the source category");
  return induce_contravariant(F, X);
}

CatModule induce_module(const Functor& F, const CatModule& X) {
  F.check();
  if (F.source.get() != X.base.get() && F.source->canonical_string() != X.base->canonical_string())
    fail(ErrorKind::BaseMismatch, "induction: module not over the source category");
  if (X.contravariant()) return induce_contravariant(F, X).module;
  auto Bop = std::make_shared<const Category>(F.source->opposite());
  auto Cop = std::make_shared<const Category>(F.target->opposite());
  Functor Fop{Bop, Cop, F.on_objects, F.on_morphisms};
  CatModule Y = induce_contravariant(Fop, X.over_opposite(Bop)).module;
  return Y.over_opposite(F.target);
}

// ------------------------------------------------------------ free modules

FreeModule::FreeModule(CatPtr c, std::vector<int> g) : C(std::move(c)), gens(std::move(g)) {
  const int n = C->num_objects();
  offset.assign(n, {});
  dim.assign(n, 0);
  basis.assign(n, {});
  for (int a = 0; a < n; ++a) {
    std::size_t o = 0;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      offset[a].push_back(o);
      for (int f : C->hom(a, gens[k])) basis[a].push_back({k, f});
      o += C->hom(a, gens[k]).size();
    }
    dim[a] = o;
  }
}

SparseMatrix FreeModule::action(int u) const {
  const int a = C->src(u), b = C->tgt(u);
  SparseMatrix A(Ring(), dim[a], dim[b]);
  for (std::size_t x = 0; x < dim[b]; ++x) {
    const auto& [k, f] = basis[b][x];
    A.cols[x] = {{index(a, k, C->compose(f, u)), Scalar(1)}};
  }
  return A;
}

CatModule FreeModule::as_module(Ring R) const {
  CatModule M;
  M.base = C;
  M.variance = Variance::Contravariant;
  M.ring = R;
  for (int a = 0; a < C->num_objects(); ++a) M.value.emplace_back(R, dim[a]);
  for (int u = 0; u < C->num_morphisms(); ++u) {
    SparseMatrix s = action(u);
    s.ring = R;
    M.action.push_back(s.to_dense());
  }
  return M;
}

SparseMatrix eval_free_map(const FreeModule& F, const std::vector<SparseVec>& images, const FreeModule& T, int a,
                           const Ring& R) {
  SparseMatrix A(R, T.dim[a], F.dim[a]);
  for (std::size_t x = 0; x < F.dim[a]; ++x) {
    const auto& [k, f] = F.basis[a][x];
    const int ck = F.gens[k];
    SparseVec col;
    for (const auto& [idx, coef] : images[k]) {
      const auto& [l, h] = T.basis[ck][idx];
      col.push_back({T.index(a, l, F.C->compose(h, f)), coef});
    }
    std::sort(col.begin(), col.end(), [](const auto& p, const auto& q) { return p.first < q.first; });
    SparseVec merged;
    for (auto& e : col) {
      if (!merged.empty() && merged.back().first == e.first) {
        R.add(merged.back().second, e.second);
        if (sgn(merged.back().second) == 0) merged.pop_back();
      } else {
        merged.push_back(e);
      }
    }
    A.cols[x] = std::move(merged);
  }
  return A;
}

SparseMatrix eval_free_map(const FreeModule& F, const std::vector<SparseVec>& images, const CatModule& T, int a) {
  SparseMatrix A(T.ring, T.rank(a), F.dim[a]);
  for (std::size_t x = 0; x < F.dim[a]; ++x) {
    const auto& [k, f] = F.basis[a][x];
    A.cols[x] = dense_times_sparse(T.action[f], images[k]);
  }
  return A;
}

// -------------------------------------------------------------- resolutions

SparseMatrix Resolution::differential_at(int i, int a) const {
  if (i < 1 || i > length()) fail(ErrorKind::InvalidArgument, "differential degree out of range");
  return eval_free_map(F[i], d[i], F[i - 1], a, ring);
}

std::vector<std::size_t> Resolution::ranks() const {
  std::vector<std::size_t> r;
  for (const auto& f : F) r.push_back(f.rank());
  return r;
}

namespace {

std::vector<int> processing_order(const Category& C, ResolutionStrategy s) {
  std::vector<int> order(C.num_objects());
  std::iota(order.begin(), order.end(), 0);
  if (s == ResolutionStrategy::Full) return order;
  // longest run of non-isomorphisms leaving an object; maximal objects first
  std::vector<int> height(C.num_objects(), -1);
  std::function<int(int, int)> h = [&](int c, int depth) -> int {
    if (height[c] >= 0) return height[c];
    if (depth > C.num_objects()) return 0;
    int best = 0;
    for (int d = 0; d < C.num_objects(); ++d)
      if (C.class_of(d) != C.class_of(c) && !C.noniso_morphisms(c, d).empty())
        best = std::max(best, 1 + h(d, depth + 1));
    return height[c] = best;
  };
  for (int c = 0; c < C.num_objects(); ++c) h(c, 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return height[a] < height[b]; });
  return order;
}

Matrix sparse_columns_to_dense(const Ring& R, std::size_t rows, const std::vector<SparseVec>& cols) {
  Matrix A(R, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [i, x] : cols[j]) A.at(i, j) = x;
  return A;
}

} // namespace

Resolution free_resolution(const CatModule& M, int length, ResolutionStrategy strategy) {
  if (!M.contravariant()) fail(ErrorKind::VarianceMismatch, "free_resolution expects a contravariant module");
  const Category& C = *M.base;
  const Ring& R = M.ring;
  Resolution res;
  res.C = M.base;
  res.ring = R;
  const auto order = processing_order(C, strategy);
  for (int i = 0; i <= length; ++i) {
    // target T = M (i = 0) or F_{i-1}; K(a) = candidates to hit
    std::vector<int> gen_obj;
    std::vector<SparseVec> images;
    auto tdim = [&](int a) { return i == 0 ? M.rank(a) : res.F[i - 1].dim[a]; };
    for (int a : order) {
      std::vector<SparseVec> candidates;
      if (i == 0) {
        for (std::size_t j = 0; j < M.rank(a); ++j) candidates.push_back({{j, Scalar(1)}});
      } else {
        SparseMatrix dprev = i == 1 ? eval_free_map(res.F[0], res.d[0], M, a) : res.differential_at(i - 1, a);
        const std::size_t n = dprev.ncols();
        if (i == 1) dprev.cols.insert(dprev.cols.end(), M.value[a].rel.cols.begin(), M.value[a].rel.cols.end());
        Matrix K = linalg::kernel_sparse(dprev);
        for (std::size_t j = 0; j < K.cols(); ++j) {
          SparseVec v;
          for (std::size_t r = 0; r < n; ++r)
            if (sgn(K.at(r, j)) != 0) v.push_back({r, K.at(r, j)});
          if (!v.empty()) candidates.push_back(std::move(v));
        }
      }
      if (candidates.empty()) continue;
      if (strategy == ResolutionStrategy::Full) {
        for (auto& v : candidates) {
          gen_obj.push_back(a);
          images.push_back(std::move(v));
        }
        continue;
      }
      // current span at a: images of the generators so far, and relations of M
      FreeModule partial(M.base, gen_obj);
      SparseMatrix cur = i == 0 ? eval_free_map(partial, images, M, a)
                                : eval_free_map(partial, images, res.F[i - 1], a, R);
      std::vector<SparseVec> span = cur.cols;
      if (i == 0) span.insert(span.end(), M.value[a].rel.cols.begin(), M.value[a].rel.cols.end());
      const std::size_t dim = tdim(a);
      SpanSolver S(sparse_columns_to_dense(R, dim, span));
      for (auto& v : candidates) {
        if (S.contains(dense_from_sparse(v, dim))) continue;
        for (int u : C.hom(a, a)) {
          if (i == 0) {
            span.push_back(dense_times_sparse(M.action[u], v));
          } else {
            SparseMatrix act = res.F[i - 1].action(u);
            act.ring = R;
            span.push_back(act.apply(v));
          }
        }
        gen_obj.push_back(a);
        images.push_back(std::move(v));
        S = SpanSolver(sparse_columns_to_dense(R, dim, span));
      }
    }
    res.F.emplace_back(M.base, gen_obj);
    res.d.push_back(std::move(images));
  }
  return res;
}

bool resolution_is_exact(const Resolution& res, const CatModule& M) {
  const Category& C = *res.C;
  const Ring& R = res.ring;
  for (int a = 0; a < C.num_objects(); ++a) {
    SparseMatrix eps = eval_free_map(res.F[0], res.d[0], M, a);
    FPModule cok(R, M.rank(a));
    cok.rel.cols = eps.cols;
    cok.rel.cols.insert(cok.rel.cols.end(), M.value[a].rel.cols.begin(), M.value[a].rel.cols.end());
    if (!cok.canonical().is_zero()) return false;
    for (int i = 0; i < res.length(); ++i) {
      SparseMatrix out = i == 0 ? eps : res.differential_at(i, a);
      SparseMatrix relt = i == 0 ? M.value[a].rel : SparseMatrix(R, res.F[i - 1].dim[a], 0);
      SparseMatrix in = res.differential_at(i + 1, a);
      SparseMatrix none(R, res.F[i].dim[a], 0);
      if (!linalg::homology_fp(out, relt, in, none).canonical().is_zero()) return false;
    }
  }
  return true;
}

SparseMatrix tensor_map(const FreeModule& F, const std::vector<SparseVec>& images, const FreeModule& G,
                        const CatModule& N) {
  const Ring& R = N.ring;
  std::vector<std::size_t> fo, go;
  std::size_t fd = 0, gd = 0;
  for (int c : F.gens) {
    fo.push_back(fd);
    fd += N.rank(c);
  }
  for (int c : G.gens) {
    go.push_back(gd);
    gd += N.rank(c);
  }
  SparseMatrix A(R, gd, fd);
  for (std::size_t k = 0; k < F.rank(); ++k) {
    const int ck = F.gens[k];
    const std::size_t nk = N.rank(ck);
    std::vector<Vector> cols(nk, Vector(gd));
    for (const auto& [idx, coef] : images[k]) {
      const auto& [l, h] = G.basis[ck][idx];
      const Matrix& Nh = N.action[h];  // rank(d_l) x rank(c_k)
      for (std::size_t j = 0; j < nk; ++j)
        for (std::size_t r = 0; r < Nh.rows(); ++r)
          if (sgn(Nh.at(r, j)) != 0) R.addmul(cols[j][go[l] + r], coef, Nh.at(r, j));
    }
    for (std::size_t j = 0; j < nk; ++j) A.cols[fo[k] + j] = sparse_from_dense(cols[j]);
  }
  return A;
}

FPComplex tensor_complex(const Resolution& F, const CatModule& N) {
  if (N.contravariant()) fail(ErrorKind::VarianceMismatch, "tensor complex needs a covariant module");
  const Ring& R = N.ring;
  FPComplex K;
  K.ring = R;
  for (int i = 0; i <= F.length(); ++i) {
    std::size_t dim = 0;
    SparseMatrix rel(R, 0, 0);
    for (int c : F.F[i].gens) {
      for (const auto& r : N.value[c].rel.cols) {
        SparseVec v;
        for (const auto& [j, x] : r) v.push_back({dim + j, x});
        rel.cols.push_back(std::move(v));
      }
      dim += N.rank(c);
    }
    rel.rows = dim;
    K.dims.push_back(dim);
    K.rel.push_back(std::move(rel));
    if (i == 0) K.d.emplace_back(R, 0, dim);
    else K.d.push_back(tensor_map(F.F[i], F.d[i], F.F[i - 1], N));
  }
  return K;
}

FPComplex hom_cocomplex(const Resolution& F, const CatModule& N) {
  if (!N.contravariant()) fail(ErrorKind::VarianceMismatch, "Hom complex needs a contravariant module");
  const Ring& R = N.ring;
  FPComplex K;
  K.ring = R;
  std::vector<std::vector<std::size_t>> offs;
  for (int i = 0; i <= F.length(); ++i) {
    std::size_t dim = 0;
    SparseMatrix rel(R, 0, 0);
    std::vector<std::size_t> off;
    for (int c : F.F[i].gens) {
      off.push_back(dim);
      for (const auto& r : N.value[c].rel.cols) {
        SparseVec v;
        for (const auto& [j, x] : r) v.push_back({dim + j, x});
        rel.cols.push_back(std::move(v));
      }
      dim += N.rank(c);
    }
    rel.rows = dim;
    K.dims.push_back(dim);
    K.rel.push_back(std::move(rel));
    offs.push_back(off);
    if (i == 0) {
      K.d.emplace_back(R, dim, 0);
      continue;
    }
    // (δφ)_k = Σ coef N(h) φ_l for d(e_k) = Σ coef (l, h)
    Matrix D(R, dim, K.dims[i - 1]);
    for (std::size_t k = 0; k < F.F[i].rank(); ++k) {
      const int ck = F.F[i].gens[k];
      for (const auto& [idx, coef] : F.d[i][k]) {
        const auto& [l, h] = F.F[i - 1].basis[ck][idx];
        const Matrix& Nh = N.action[h];  // rank(c_k) x rank(d_l)
        for (std::size_t r = 0; r < Nh.rows(); ++r)
          for (std::size_t c = 0; c < Nh.cols(); ++c)
            if (sgn(Nh.at(r, c)) != 0) R.addmul(D.at(off[k] + r, offs[i - 1][l] + c), coef, Nh.at(r, c));
      }
    }
    K.d.push_back(SparseMatrix::from_dense(D));
  }
  return K;
}

SubQuotient cohomology(const FPComplex& K, int n) {
  if (n < 0 || n >= K.top()) fail(ErrorKind::InvalidArgument, "cohomology degree outside the trusted range");
  const Ring& R = K.ring;
  SparseMatrix in = n == 0 ? SparseMatrix(R, K.dims[0], 0) : K.d[n];
  return linalg::homology_fp(K.d[n + 1], K.rel[n + 1], in, K.rel[n]);
}

std::vector<Canonical> tor(const CatModule& M, const CatModule& N, int n_max, ResolutionStrategy s) {
  if (!M.contravariant() || N.contravariant())
    fail(ErrorKind::VarianceMismatch, "Tor needs M contravariant and N covariant");
  if (M.ring != N.ring) fail(ErrorKind::RingMismatch, "Tor: modules over different rings");
  Resolution F = free_resolution(M, n_max + 1, s);
  FPComplex K = tensor_complex(F, N);
  std::vector<Canonical> out;
  for (int q = 0; q <= n_max; ++q) out.push_back(K.homology(q).canonical());
  return out;
}

std::vector<Canonical> ext(const CatModule& M, const CatModule& N, int n_max, ResolutionStrategy s) {
  if (!M.contravariant() || !N.contravariant())
    fail(ErrorKind::VarianceMismatch, "Ext needs both modules contravariant");
  if (M.ring != N.ring) fail(ErrorKind::RingMismatch, "Ext: modules over different rings");
  Resolution F = free_resolution(M, n_max + 1, s);
  FPComplex K = hom_cocomplex(F, N);
  std::vector<Canonical> out;
  for (int q = 0; q <= n_max; ++q) out.push_back(cohomology(K, q).canonical());
  return out;
}

// ------------------------------------------------------------- induction

FreeModule induce_free(const Functor& F, const FreeModule& P, CatPtr C) {
  std::vector<int> gens;
  for (int b : P.gens) gens.push_back(F.on_objects[b]);
  return FreeModule(std::move(C), gens);
}

std::vector<SparseVec> induce_images(const Functor& F, const FreeModule& P, const std::vector<SparseVec>& images,
                                     const FreeModule& Ptarget, const FreeModule& induced_target, const Ring& R) {
  std::vector<SparseVec> out;
  for (std::size_t k = 0; k < images.size(); ++k) {
    const int bk = P.gens[k];
    const int ck = F.on_objects[bk];
    SparseVec acc;
    for (const auto& [idx, coef] : images[k]) {
      const auto& [l, h] = Ptarget.basis[bk][idx];
      sparse_axpy(R, acc, coef, {{induced_target.index(ck, l, F.on_morphisms[h]), Scalar(1)}});
    }
    out.push_back(std::move(acc));
  }
  return out;
}

namespace {

// x with A x ≡ b modulo the relation columns rel, or nullopt.
std::optional<Vector> solve_mod(const SparseMatrix& A, const SparseMatrix& rel, const Vector& b) {
  const Ring& R = A.ring;
  Matrix W(R, b.size(), A.ncols() + rel.ncols());
  for (std::size_t j = 0; j < A.ncols(); ++j)
    for (const auto& [i, x] : A.cols[j]) W.at(i, j) = x;
  for (std::size_t j = 0; j < rel.ncols(); ++j)
    for (const auto& [i, x] : rel.cols[j]) W.at(i, A.ncols() + j) = x;
  auto y = SpanSolver(W).solve(b);
  if (!y) return std::nullopt;
  y->resize(A.ncols());
  return y;
}

} // namespace

std::vector<std::vector<SparseVec>> lift_chain_map(const Resolution& P, const Resolution& Q, const CatModule& M,
                                                   int top) {
  const Ring& R = Q.ring;
  std::vector<std::vector<SparseVec>> phi(top + 1);
  for (int i = 0; i <= top; ++i) {
    const FreeModule& Pi = P.F[i];
    for (std::size_t k = 0; k < Pi.rank(); ++k) {
      const int a = Pi.gens[k];
      Vector target;
      SparseMatrix A, rel;
      if (i == 0) {
        target = dense_from_sparse(P.d[0][k], M.rank(a));
        A = eval_free_map(Q.F[0], Q.d[0], M, a);
        rel = M.value[a].rel;
      } else {
        SparseMatrix prev = eval_free_map(P.F[i - 1], phi[i - 1], Q.F[i - 1], a, R);
        target = dense_from_sparse(prev.apply(P.d[i][k]), Q.F[i - 1].dim[a]);
        A = Q.differential_at(i, a);
        rel = SparseMatrix(R, Q.F[i - 1].dim[a], 0);
      }
      auto x = solve_mod(A, rel, target);
      if (!x) fail(ErrorKind::LiftFailed, "chain map lift has no solution in degree " + std::to_string(i));
      phi[i].push_back(sparse_from_dense(*x));
    }
  }
  return phi;
}

TorPushforward tor_pushforward(const Functor& F, const CatModule& X, const CatModule& Y,
                               const std::vector<Matrix>& eta, const CatModule& N, int n_max) {
  F.check();
  if (!X.contravariant() || !Y.contravariant() || N.contravariant())
    fail(ErrorKind::VarianceMismatch, "pushforward needs contravariant X, Y and covariant N");
  const Ring& R = N.ring;
  const int len = n_max + 1;
  Resolution P = free_resolution(X, len);
  Resolution IP;
  IP.C = F.target;
  IP.ring = R;
  for (int i = 0; i <= len; ++i) IP.F.push_back(induce_free(F, P.F[i], F.target));
  std::vector<SparseVec> aug;
  for (std::size_t k = 0; k < P.F[0].rank(); ++k) {
    const int b = P.F[0].gens[k];
    aug.push_back(SparseMatrix::from_dense(eta[b]).apply(P.d[0][k]));
  }
  IP.d.push_back(std::move(aug));
  for (int i = 1; i <= len; ++i) IP.d.push_back(induce_images(F, P.F[i], P.d[i], P.F[i - 1], IP.F[i - 1], R));
  Resolution Q = free_resolution(Y, len);
  auto phi = lift_chain_map(IP, Q, Y, len);
  FPComplex S = tensor_complex(IP, N);
  FPComplex T = tensor_complex(Q, N);
  TorPushforward out;
  for (int q = 0; q <= n_max; ++q) {
    out.source.push_back(S.homology(q));
    out.target.push_back(T.homology(q));
    SparseMatrix Phi = tensor_map(IP.F[q], phi[q], Q.F[q], N);
    out.map.push_back(linalg::induced_map(out.source.back(), out.target.back(), Phi));
  }
  return out;
}

std::vector<AssemblyDegree> assembly_tor(const Functor& F, const CatModule& N, int n_max) {
  if (N.contravariant()) fail(ErrorKind::VarianceMismatch, "assembly needs a covariant coefficient module");
  const Ring& R = N.ring;
  CatModule RB = constant_module(F.source, R, Variance::Contravariant);
  CatModule RC = constant_module(F.target, R, Variance::Contravariant);
  std::vector<Matrix> eta(F.source->num_objects(), Matrix::identity(R, 1));
  TorPushforward tp = tor_pushforward(F, RB, RC, eta, N, n_max);
  std::vector<AssemblyDegree> out;
  for (int q = 0; q <= n_max; ++q) {
    AssemblyDegree deg;
    deg.q = q;
    deg.source = tp.source[q].canonical();
    deg.target = tp.target[q].canonical();
    deg.map = tp.map[q];
    deg.invariants = linalg::map_invariants(deg.map, tp.source[q].orders(), tp.target[q].orders());
    out.push_back(std::move(deg));
  }
  return out;
}

} // namespace pchain::catmod
