#include "oracles.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace oracle {

using pchain::linalg::Scalar;

namespace {

// Words of length q over the non-identity elements 1..n-1, in base (n-1).
std::size_t word_count(int n, int q) {
  std::size_t c = 1;
  for (int i = 0; i < q; ++i) c *= static_cast<std::size_t>(n - 1);
  return c;
}

std::vector<int> decode(std::size_t w, int n, int q) {
  std::vector<int> g(q);
  for (int i = q - 1; i >= 0; --i) {
    g[i] = static_cast<int>(w % (n - 1)) + 1;
    w /= (n - 1);
  }
  return g;
}

// -1 when some letter is the identity
long encode(const std::vector<int>& g, int n) {
  long w = 0;
  for (int x : g) {
    if (x == 0) return -1;
    w = w * (n - 1) + (x - 1);
  }
  return w;
}

} // namespace

std::vector<Canonical> dense_homology(const Ring& R, const std::vector<std::size_t>& dims,
                                      const std::vector<Matrix>& d) {
  // rank and torsion of each differential from its Smith form
  const int top = static_cast<int>(dims.size()) - 1;
  std::vector<std::size_t> rk(top + 2, 0);
  std::vector<std::vector<mpz_class>> tors(top + 2);
  for (int n = 1; n <= top; ++n) {
    if (d[n].rows() == 0 || d[n].cols() == 0) continue;
    auto sf = pchain::linalg::smith_normal_form(d[n]);
    rk[n] = sf.rank;
    for (std::size_t i = 0; i < sf.rank; ++i)
      if (!R.is_field() && sf.S.at(i, i) != 1) tors[n].push_back(sf.S.at(i, i).get_num());
  }
  std::vector<Canonical> out;
  for (int n = 0; n < top; ++n) {
    Canonical c;
    c.ring = R;
    c.free_rank = dims[n] - rk[n] - rk[n + 1];
    c.torsion = tors[n + 1];
    out.push_back(c);
  }
  return out;
}

std::vector<Canonical> bar_tor(const pchain::groups::FiniteGroup& G, const Ring& R, const std::vector<Matrix>& right,
                               const std::vector<Matrix>& left, int q_max) {
  const int n = G.order();
  const std::size_t a = right[0].rows(), b = left[0].rows();
  const int top = q_max + 1;
  std::vector<std::size_t> dims;
  for (int q = 0; q <= top; ++q) dims.push_back(a * b * word_count(n, q));
  auto idx = [&](std::size_t i, std::size_t w, std::size_t j) { return (w * a + i) * b + j; };
  std::vector<Matrix> d(top + 1);
  for (int q = 1; q <= top; ++q) {
    Matrix D(R, dims[q - 1], dims[q]);
    for (std::size_t w = 0; w < word_count(n, q); ++w) {
      auto g = decode(w, n, q);
      for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) {
          const std::size_t col = idx(i, w, j);
          // a·g1 ⊗ [g2..gq] ⊗ b
          {
            std::vector<int> rest(g.begin() + 1, g.end());
            long w2 = encode(rest, n);
            if (w2 >= 0)
              for (std::size_t i2 = 0; i2 < a; ++i2)
                if (sgn(right[g[0]].at(i2, i)) != 0)
                  R.add(D.at(idx(i2, w2, j), col), right[g[0]].at(i2, i));
          }
          for (int k = 1; k < q; ++k) {
            std::vector<int> h;
            for (int t = 0; t < q; ++t) {
              if (t == k) continue;
              h.push_back(t == k - 1 ? G.mul(g[k - 1], g[k]) : g[t]);
            }
            long w2 = encode(h, n);
            if (w2 < 0) continue;
            R.add(D.at(idx(i, w2, j), col), R.from_int((k % 2) ? -1 : 1));
          }
          {
            std::vector<int> rest(g.begin(), g.end() - 1);
            long w2 = encode(rest, n);
            if (w2 >= 0)
              for (std::size_t j2 = 0; j2 < b; ++j2)
                if (sgn(left[g[q - 1]].at(j2, j)) != 0) {
                  Scalar c = R.from_int((q % 2) ? -1 : 1);
                  R.addmul(D.at(idx(i, w2, j2), col), c, left[g[q - 1]].at(j2, j));
                }
          }
        }
    }
    d[q] = D;
  }
  return dense_homology(R, dims, d);
}

std::vector<Canonical> bar_cohomology(const pchain::groups::FiniteGroup& G, const Ring& R,
                                      const std::vector<Matrix>& left, int q_max) {
  const int n = G.order();
  const std::size_t b = left[0].rows();
  const int top = q_max + 1;
  std::vector<std::size_t> dims;
  for (int q = 0; q <= top; ++q) dims.push_back(b * word_count(n, q));
  // coboundary δ_q: C^{q} -> C^{q+1}; homology of the chain complex with
  // C_q := C^{top - q} reversed
  std::vector<Matrix> delta(top);
  for (int q = 0; q < top; ++q) {
    Matrix D(R, dims[q + 1], dims[q]);
    for (std::size_t w = 0; w < word_count(n, q + 1); ++w) {
      auto g = decode(w, n, q + 1);
      for (std::size_t j = 0; j < b; ++j) {
        const std::size_t row = w * b + j;
        // g1 · f(g2..g_{q+1})
        {
          std::vector<int> rest(g.begin() + 1, g.end());
          long w2 = encode(rest, n);
          if (w2 >= 0)
            for (std::size_t j2 = 0; j2 < b; ++j2)
              if (sgn(left[g[0]].at(j, j2)) != 0) R.add(D.at(row, w2 * b + j2), left[g[0]].at(j, j2));
        }
        for (int k = 1; k <= q; ++k) {
          std::vector<int> h;
          for (int t = 0; t <= q; ++t) {
            if (t == k) continue;
            h.push_back(t == k - 1 ? G.mul(g[k - 1], g[k]) : g[t]);
          }
          long w2 = encode(h, n);
          if (w2 < 0) continue;
          R.add(D.at(row, w2 * b + j), R.from_int((k % 2) ? -1 : 1));
        }
        {
          std::vector<int> rest(g.begin(), g.end() - 1);
          long w2 = encode(rest, n);
          if (w2 >= 0) R.add(D.at(row, w2 * b + j), R.from_int(((q + 1) % 2) ? -1 : 1));
        }
      }
    }
    delta[q] = D;
  }
  std::vector<Canonical> out;
  for (int q = 0; q <= q_max; ++q) {
    Matrix in = q == 0 ? Matrix(R, dims[0], 0) : delta[q - 1];
    out.push_back(pchain::linalg::homology_at(delta[q], in).canonical());
  }
  return out;
}

std::size_t balanced_product_count(const pchain::fincat::Category& C, const pchain::fincat::ChainBiset& S, int s,
                                   int t) {
  const int c0 = S.reps.front(), cp = S.reps.back();
  const auto& A = C.hom(s, c0);
  const auto& B = C.hom(cp, t);
  if (A.empty() || B.empty() || S.size() == 0) return 0;
  // triples (β, x, α) modulo (βv, x, α) ~ (β, v x, α) and (β, x w, α) ~ (β, x, w α)
  std::set<std::tuple<int, int, int>> seen;
  std::size_t orbits = 0;
  for (int beta : B)
    for (std::size_t x = 0; x < S.size(); ++x)
      for (int alpha : A) {
        auto start = std::make_tuple(beta, static_cast<int>(x), alpha);
        if (seen.count(start)) continue;
        ++orbits;
        std::vector<std::tuple<int, int, int>> stack{start};
        seen.insert(start);
        while (!stack.empty()) {
          auto [b, y, a] = stack.back();
          stack.pop_back();
          for (std::size_t i = 0; i < S.left_aut.size(); ++i) {
            int v = S.left_aut[i];
            // (β, v y, α) ~ (β v, y, α)
            auto nx = std::make_tuple(C.compose(b, C.inverse(v)), S.left[i][y], a);
            if (seen.insert(nx).second) stack.push_back(nx);
          }
          for (std::size_t j = 0; j < S.right_aut.size(); ++j) {
            int w = S.right_aut[j];
            auto nx = std::make_tuple(b, S.right[j][y], C.compose(C.inverse(w), a));
            if (seen.insert(nx).second) stack.push_back(nx);
          }
        }
      }
  return orbits;
}

std::vector<std::vector<int>> brute_force_subgroups(const pchain::groups::FiniteGroup& G) {
  const int n = G.order();
  std::vector<std::vector<int>> out;
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    if (!(mask & 1ul)) continue;
    std::vector<int> e;
    for (int i = 0; i < n; ++i)
      if (mask & (1ul << i)) e.push_back(i);
    bool closed = true;
    for (int x : e)
      for (int y : e)
        if (!(mask & (1ul << G.mul(x, y)))) closed = false;
    if (closed) out.push_back(e);
  }
  return out;
}

std::size_t brute_force_gmaps(const pchain::groups::FiniteGroup& G, const std::vector<int>& H,
                              const std::vector<int>& K) {
  // cosets as sorted element sets
  auto cosets = [&](const std::vector<int>& S) {
    std::set<std::vector<int>> cs;
    for (int g = 0; g < G.order(); ++g) {
      std::vector<int> c;
      for (int s : S) c.push_back(G.mul(g, s));
      std::sort(c.begin(), c.end());
      cs.insert(c);
    }
    return std::vector<std::vector<int>>(cs.begin(), cs.end());
  };
  auto X = cosets(H), Y = cosets(K);
  auto which = [&](const std::vector<std::vector<int>>& cs, int g) {
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (std::binary_search(cs[i].begin(), cs[i].end(), g)) return static_cast<int>(i);
    return -1;
  };
  // action tables
  std::vector<std::vector<int>> ax(G.order(), std::vector<int>(X.size())), ay(G.order(), std::vector<int>(Y.size()));
  for (int g = 0; g < G.order(); ++g) {
    for (std::size_t i = 0; i < X.size(); ++i) ax[g][i] = which(X, G.mul(g, X[i][0]));
    for (std::size_t i = 0; i < Y.size(); ++i) ay[g][i] = which(Y, G.mul(g, Y[i][0]));
  }
  std::size_t count = 0;
  std::vector<int> f(X.size(), 0);
  for (;;) {
    bool ok = true;
    for (int g = 0; g < G.order() && ok; ++g)
      for (std::size_t i = 0; i < X.size() && ok; ++i) ok = f[ax[g][i]] == ay[g][f[i]];
    if (ok) ++count;
    std::size_t i = 0;
    while (i < f.size() && ++f[i] == static_cast<int>(Y.size())) f[i++] = 0;
    if (i == f.size()) break;
  }
  return count;
}

} // namespace oracle
