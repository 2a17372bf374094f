#include "pchain/groups.hpp"
#include "pchain/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace pchain::groups {

FiniteGroup FiniteGroup::from_table(const std::vector<std::vector<int>>& t) {
  const int n = static_cast<int>(t.size());
  if (n == 0) fail(ErrorKind::ValidationError, "group table is empty");
  for (const auto& row : t) {
    if (static_cast<int>(row.size()) != n) fail(ErrorKind::ValidationError, "group table is not square");
    for (int x : row)
      if (x < 0 || x >= n) fail(ErrorKind::ValidationError, "group table entry out of range");
  }
  int e = -1;
  for (int a = 0; a < n && e < 0; ++a) {
    bool ok = true;
    for (int b = 0; b < n && ok; ++b) ok = t[a][b] == b && t[b][a] == b;
    if (ok) e = a;
  }
  if (e < 0) fail(ErrorKind::ValidationError, "group table has no identity");
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]])
          fail(ErrorKind::ValidationError, "group table not associative at (" + std::to_string(a) + ", " +
                                               std::to_string(b) + ", " + std::to_string(c) + ")");
  // swap labels e and 0
  std::vector<int> relabel(n);
  std::iota(relabel.begin(), relabel.end(), 0);
  std::swap(relabel[0], relabel[e]);
  FiniteGroup G;
  G.table_.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) G.table_[relabel[a]][relabel[b]] = relabel[t[a][b]];
  G.inv_.assign(n, -1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (G.table_[a][b] == 0 && G.table_[b][a] == 0) G.inv_[a] = b;
  for (int a = 0; a < n; ++a)
    if (G.inv_[a] < 0) fail(ErrorKind::ValidationError, "element " + std::to_string(a) + " has no inverse");
  return G;
}

FiniteGroup FiniteGroup::from_permutations(const std::vector<std::vector<int>>& gens) {
  std::size_t d = 0;
  for (const auto& g : gens) d = std::max(d, g.size());
  auto pad = [&](std::vector<int> p) {
    for (std::size_t i = p.size(); i < d; ++i) p.push_back(static_cast<int>(i));
    return p;
  };
  std::vector<int> id(d);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> gs;
  for (const auto& g : gens) {
    auto p = pad(g);
    std::vector<int> seen(d, 0);
    for (int x : p) {
      if (x < 0 || static_cast<std::size_t>(x) >= d || seen[x]) fail(ErrorKind::ValidationError, "not a permutation");
      seen[x] = 1;
    }
    gs.push_back(std::move(p));
  }
  // composition convention: (a*b)(x) = a(b(x))
  auto compose = [&](const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> c(d);
    for (std::size_t x = 0; x < d; ++x) c[x] = a[b[x]];
    return c;
  };
  std::vector<std::vector<int>> elems{id};
  std::map<std::vector<int>, int> index{{id, 0}};
  for (std::size_t q = 0; q < elems.size(); ++q) {
    for (const auto& g : gs) {
      auto h = compose(elems[q], g);
      if (index.emplace(h, static_cast<int>(elems.size())).second) elems.push_back(h);
    }
    if (elems.size() > 100000) fail(ErrorKind::GroupTooLarge, "permutation group too large to tabulate");
  }
  const int n = static_cast<int>(elems.size());
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
  return from_table(t);
}

std::vector<int> FiniteGroup::parse_cycles(const std::string& s, int degree) {
  std::vector<int> p(degree);
  std::iota(p.begin(), p.end(), 0);
  std::vector<int> cyc;
  bool open = false;
  std::size_t i = 0;
  auto close_cycle = [&] {
    for (std::size_t k = 0; k < cyc.size(); ++k) p[cyc[k]] = cyc[(k + 1) % cyc.size()];
    cyc.clear();
  };
  while (i < s.size()) {
    char ch = s[i];
    if (ch == '(') {
      if (open) fail(ErrorKind::ParseError, "nested parenthesis in cycle notation");
      open = true;
      ++i;
    } else if (ch == ')') {
      if (!open) fail(ErrorKind::ParseError, "unbalanced parenthesis in cycle notation");
      open = false;
      close_cycle();
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      int v = std::stoi(s.substr(i, j - i));
      if (!open || v < 1 || v > degree) fail(ErrorKind::ParseError, "bad point in cycle notation: " + s);
      cyc.push_back(v - 1);
      i = j;
    } else if (ch == ' ' || ch == ',') {
      ++i;
    } else {
      fail(ErrorKind::ParseError, std::string("unexpected character in cycle notation: ") + ch);
    }
  }
  if (open) fail(ErrorKind::ParseError, "unterminated cycle");
  return p;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  return from_table(t);
}

FiniteGroup FiniteGroup::symmetric(int n) {
  if (n <= 1) return cyclic(1);
  std::vector<int> swap(n), cycle(n);
  std::iota(swap.begin(), swap.end(), 0);
  std::swap(swap[0], swap[1]);
  for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
  return from_permutations({swap, cycle});
}

FiniteGroup FiniteGroup::product(const FiniteGroup& a, const FiniteGroup& b) {
  const int na = a.order(), nb = b.order();
  std::vector<std::vector<int>> t(na * nb, std::vector<int>(na * nb));
  for (int x = 0; x < na * nb; ++x)
    for (int y = 0; y < na * nb; ++y) t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  return from_table(t);
}

std::string FiniteGroup::canonical_string() const {
  std::ostringstream os;
  os << "group;" << order();
  for (const auto& r : table_)
    for (int x : r) os << ',' << x;
  return os.str();
}

Subgroup closure(const FiniteGroup& G, const std::vector<int>& gens) {
  std::vector<char> in(G.order(), 0);
  std::vector<int> elems{0};
  in[0] = 1;
  for (std::size_t q = 0; q < elems.size(); ++q)
    for (int g : gens) {
      int h = G.mul(elems[q], g);
      if (!in[h]) {
        in[h] = 1;
        elems.push_back(h);
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

bool is_subgroup(const FiniteGroup& G, const std::vector<int>& e) {
  if (e.empty()) return false;
  std::set<int> s(e.begin(), e.end());
  if (!s.count(0)) return false;
  for (int a : s) {
    if (!s.count(G.inv(a))) return false;
    for (int b : s)
      if (!s.count(G.mul(a, b))) return false;
  }
  return true;
}

Subgroup conjugate(const FiniteGroup& G, const Subgroup& H, int g) {
  Subgroup out;
  for (int h : H) out.push_back(G.mul(G.mul(G.inv(g), h), g));
  std::sort(out.begin(), out.end());
  return out;
}

bool subset(const Subgroup& a, const Subgroup& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

int Lattice::index_of(const Subgroup& H) const {
  for (std::size_t i = 0; i < subgroups.size(); ++i)
    if (subgroups[i].elements == H) return static_cast<int>(i);
  return -1;
}

Lattice subgroup_lattice(const FiniteGroup& G, int bound) {
  if (G.order() > bound)
    fail(ErrorKind::GroupTooLarge,
         "group of order " + std::to_string(G.order()) + " exceeds the bound " + std::to_string(bound));
  std::set<Subgroup> found{{0}};
  std::vector<Subgroup> queue{{0}};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const Subgroup H = queue[q];
    for (int g = 0; g < G.order(); ++g) {
      if (std::binary_search(H.begin(), H.end(), g)) continue;
      auto gens = H;
      gens.push_back(g);
      Subgroup K = closure(G, gens);
      if (found.insert(K).second) queue.push_back(K);
    }
  }
  std::vector<Subgroup> subs(found.begin(), found.end());
  std::stable_sort(subs.begin(), subs.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  Lattice L;
  for (const auto& H : subs) L.subgroups.push_back({H, -1, {}, {}});
  for (std::size_t i = 0; i < subs.size(); ++i) {
    auto& info = L.subgroups[i];
    if (info.conj_class < 0) {
      info.conj_class = L.num_conj_classes++;
      for (int g = 0; g < G.order(); ++g) {
        int j = L.index_of(conjugate(G, subs[i], g));
        L.subgroups[j].conj_class = info.conj_class;
      }
    }
    for (int g = 0; g < G.order(); ++g)
      if (conjugate(G, subs[i], g) == subs[i]) info.normalizer.push_back(g);
    std::set<int> seen;
    for (int g : info.normalizer) {
      int rep = G.order();
      for (int h : subs[i]) rep = std::min(rep, G.mul(g, h));
      if (seen.insert(rep).second) info.weyl_reps.push_back(rep);
    }
    std::sort(info.weyl_reps.begin(), info.weyl_reps.end());
  }
  return L;
}

bool Family::has(int i) const { return std::binary_search(members.begin(), members.end(), i); }

Family family_all(const Lattice& L) {
  Family F;
  F.members.resize(L.subgroups.size());
  std::iota(F.members.begin(), F.members.end(), 0);
  return F;
}

Family family_trivial(const Lattice&) { return Family{{0}}; }

Family make_family(const FiniteGroup& G, const Lattice& L, const std::vector<Subgroup>& subs, bool close) {
  std::set<int> given, closed;
  for (auto H : subs) {
    std::sort(H.begin(), H.end());
    H.erase(std::unique(H.begin(), H.end()), H.end());
    if (!is_subgroup(G, H)) fail(ErrorKind::ValidationError, "family member is not a subgroup");
    int i = L.index_of(H);
    given.insert(i);
    for (int g = 0; g < G.order(); ++g) closed.insert(L.index_of(conjugate(G, H, g)));
  }
  if (!close && closed != given) fail(ErrorKind::ValidationError, "family is not closed under conjugation");
  return Family{std::vector<int>(closed.begin(), closed.end())};
}

std::vector<int> maximal_members(const Lattice& L, const Family& F) {
  std::vector<int> out;
  for (int i : F.members) {
    bool maximal = true;
    for (int j : F.members)
      if (j != i && L.contains(i, j)) maximal = false;
    if (maximal) out.push_back(i);
  }
  return out;
}

std::string orbit_object_name(const FiniteGroup& G, const Lattice& L, int idx) {
  const auto& H = L.subgroups[idx].elements;
  if (H.size() == 1) return "G/1";
  if (static_cast<int>(H.size()) == G.order()) return "G/G";
  return "G/H" + std::to_string(idx);
}

fincat::Category orbit_category(const FiniteGroup& G, const Lattice& L, const Family& F) {
  std::vector<std::string> objects;
  for (int i : F.members) objects.push_back(orbit_object_name(G, L, i));
  const int k = static_cast<int>(F.members.size());
  std::vector<fincat::Morphism> mors;
  std::map<std::array<int, 3>, int> id;  // (a, b, coset rep) -> morphism
  std::vector<int> rep_of;
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) {
      const auto& H = L.subgroups[F.members[a]].elements;
      const auto& K = L.subgroups[F.members[b]].elements;
      std::set<int> reps;
      for (int g = 0; g < G.order(); ++g) {
        if (!subset(conjugate(G, H, g), K)) continue;
        int r = G.order();
        for (int x : K) r = std::min(r, G.mul(g, x));
        reps.insert(r);
      }
      for (int r : reps) {
        id[{a, b, r}] = static_cast<int>(mors.size());
        mors.push_back({"f" + std::to_string(F.members[a]) + "_" + std::to_string(F.members[b]) + "_" + std::to_string(r), a, b});
        rep_of.push_back(r);
      }
    }
  std::vector<std::array<int, 3>> comp;
  const int m = static_cast<int>(mors.size());
  for (int f = 0; f < m; ++f)
    for (int g = 0; g < m; ++g) {
      if (mors[f].tgt != mors[g].src) continue;
      const auto& Lg = L.subgroups[F.members[mors[g].tgt]].elements;
      int prod = G.mul(rep_of[f], rep_of[g]);
      int r = G.order();
      for (int x : Lg) r = std::min(r, G.mul(prod, x));
      comp.push_back({g, f, id.at({mors[f].src, mors[g].tgt, r})});
    }
  std::vector<int> identity(k);
  for (int a = 0; a < k; ++a) identity[a] = id.at({a, a, 0});
  return fincat::Category::from_table(objects, mors, comp, identity);
}

int orbit_morphism_rep(const fincat::Category& C, int f) {
  const auto& name = C.morphism_name(f);
  auto pos = name.rfind('_');
  if (pos == std::string::npos) fail(ErrorKind::InvalidArgument, "not an orbit category morphism");
  return std::stoi(name.substr(pos + 1));
}

bool check_M(const Lattice& L, const Family& F) {
  auto maxes = maximal_members(L, F);
  for (int i : F.members) {
    if (L.subgroups[i].elements.size() == 1) continue;
    int count = 0;
    for (int j : maxes)
      if (L.contains(i, j)) ++count;
    if (count != 1) return false;
  }
  return true;
}

bool check_NM(const Lattice& L, const Family& F) {
  for (int j : maximal_members(L, F))
    if (L.subgroups[j].normalizer != L.subgroups[j].elements) return false;
  return true;
}

CofinalityReport cofinal_inclusion_check(const Lattice& L, const Family& small, const Family& big) {
  for (int i : small.members)
    if (!big.has(i)) fail(ErrorKind::FamilyMismatch, "subfamily is not contained in the family");
  CofinalityReport rep;
  for (int h : big.members) {
    if (small.has(h)) {
      rep.witness[h] = h;
      continue;
    }
    std::vector<int> over;
    for (int l : small.members)
      if (L.contains(h, l)) over.push_back(l);
    int top = -1;
    for (int l : over) {
      bool is_max = std::all_of(over.begin(), over.end(), [&](int x) { return L.contains(x, l); });
      if (is_max) top = l;
    }
    if (top < 0) {
      rep.cofinal = false;
      if (rep.counterexample < 0) rep.counterexample = h;
      continue;
    }
    rep.witness[h] = top;
  }
  return rep;
}

Family reduce_family(const Lattice& L, const Family& F) {
  auto maxes = maximal_members(L, F);
  std::set<int> keep(maxes.begin(), maxes.end());
  for (int i : F.members) {
    int count = 0;
    for (int j : maxes)
      if (L.contains(i, j)) ++count;
    if (count > 1) keep.insert(i);
  }
  return Family{std::vector<int>(keep.begin(), keep.end())};
}

fincat::Functor family_inclusion(const Family& small, const Family& big, fincat::CatPtr Csmall, fincat::CatPtr Cbig) {
  for (int i : small.members)
    if (!big.has(i)) fail(ErrorKind::FamilyMismatch, "subfamily is not contained in the family");
  return fincat::Functor::inclusion_by_name(std::move(Csmall), std::move(Cbig));
}

fincat::Category group_category(const FiniteGroup& G) {
  std::vector<fincat::Morphism> mors;
  for (int g = 0; g < G.order(); ++g) mors.push_back({"g" + std::to_string(g), 0, 0});
  std::vector<std::array<int, 3>> comp;
  for (int a = 0; a < G.order(); ++a)
    for (int b = 0; b < G.order(); ++b) comp.push_back({a, b, G.mul(a, b)});
  return fincat::Category::from_table({"*"}, mors, comp, {0});
}

} // namespace pchain::groups
