#include "pchain/category.hpp"
#include "pchain/error.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace pchain::fincat {

namespace {

struct Table {
  int nobj = 0, nmor = 0;
  std::vector<Morphism> mors;
  std::vector<int> comp;  // -1 undefined
  std::vector<int> identity;
};

std::vector<std::string> check_table(const Table& t, const std::vector<std::string>& onames) {
  std::vector<std::string> out;
  auto mname = [&](int f) { return t.mors[f].name; };
  const std::size_t M = static_cast<std::size_t>(t.nmor);
  auto comp = [&](int g, int f) { return t.comp[static_cast<std::size_t>(g) * M + f]; };
  for (int c = 0; c < t.nobj; ++c) {
    int e = t.identity[c];
    if (e < 0) {
      out.push_back("object " + onames[c] + " has no identity");
      continue;
    }
    if (t.mors[e].src != c || t.mors[e].tgt != c)
      out.push_back("identity " + mname(e) + " of " + onames[c] + " is not an endomorphism of it");
  }
  for (int g = 0; g < t.nmor; ++g)
    for (int f = 0; f < t.nmor; ++f) {
      int gf = comp(g, f);
      bool composable = t.mors[f].tgt == t.mors[g].src;
      if (composable && gf < 0) out.push_back("composite (" + mname(g) + ", " + mname(f) + ") missing");
      if (!composable && gf >= 0)
        out.push_back("composite (" + mname(g) + ", " + mname(f) + ") defined for non-composable pair");
      if (composable && gf >= 0 && (t.mors[gf].src != t.mors[f].src || t.mors[gf].tgt != t.mors[g].tgt))
        out.push_back("composite (" + mname(g) + ", " + mname(f) + ", " + mname(gf) + ") has wrong source or target");
    }
  if (!out.empty()) return out;
  for (int f = 0; f < t.nmor; ++f) {
    int ea = t.identity[t.mors[f].src], eb = t.identity[t.mors[f].tgt];
    if (comp(f, ea) != f) out.push_back("identity law fails: (" + mname(f) + ", " + mname(ea) + ")");
    if (comp(eb, f) != f) out.push_back("identity law fails: (" + mname(eb) + ", " + mname(f) + ")");
  }
  for (int f = 0; f < t.nmor; ++f)
    for (int g = 0; g < t.nmor; ++g) {
      if (t.mors[f].tgt != t.mors[g].src) continue;
      int gf = comp(g, f);
      for (int h = 0; h < t.nmor; ++h) {
        if (t.mors[g].tgt != t.mors[h].src) continue;
        if (comp(h, gf) != comp(comp(h, g), f))
          out.push_back("associativity fails on (" + mname(h) + ", " + mname(g) + ", " + mname(f) + ")");
      }
    }
  return out;
}

// Names to indices, recording every unresolved reference.
Table table_from_data(const CategoryData& d, std::vector<std::string>& errs) {
  Table t;
  std::map<std::string, int> oid, mid;
  t.nobj = static_cast<int>(d.objects.size());
  for (int i = 0; i < t.nobj; ++i)
    if (!oid.emplace(d.objects[i], i).second) errs.push_back("duplicate object " + d.objects[i]);
  t.nmor = static_cast<int>(d.morphisms.size());
  for (int i = 0; i < t.nmor; ++i) {
    const auto& m = d.morphisms[i];
    if (!mid.emplace(m.id, i).second) errs.push_back("duplicate morphism " + m.id);
    Morphism mm{m.id, -1, -1};
    if (auto it = oid.find(m.src); it != oid.end()) mm.src = it->second;
    else errs.push_back("morphism " + m.id + " has unknown source " + m.src);
    if (auto it = oid.find(m.tgt); it != oid.end()) mm.tgt = it->second;
    else errs.push_back("morphism " + m.id + " has unknown target " + m.tgt);
    t.mors.push_back(mm);
  }
  t.comp.assign(static_cast<std::size_t>(t.nmor) * t.nmor, -1);
  for (const auto& [g, f, gf] : d.compose) {
    auto ig = mid.find(g), jf = mid.find(f), kgf = mid.find(gf);
    if (ig == mid.end() || jf == mid.end() || kgf == mid.end()) {
      errs.push_back("composition entry (" + g + ", " + f + ", " + gf + ") names an unknown morphism");
      continue;
    }
    int& slot = t.comp[static_cast<std::size_t>(ig->second) * t.nmor + jf->second];
    if (slot >= 0 && slot != kgf->second) errs.push_back("composite (" + g + ", " + f + ") given twice");
    slot = kgf->second;
  }
  t.identity.assign(t.nobj, -1);
  for (const auto& [o, m] : d.identity) {
    auto io = oid.find(o);
    auto im = mid.find(m);
    if (io == oid.end() || im == mid.end()) {
      errs.push_back("identity entry " + o + " -> " + m + " names an unknown entity");
      continue;
    }
    t.identity[io->second] = im->second;
  }
  return t;
}

} // namespace

std::vector<std::string> validate(const CategoryData& data) {
  std::vector<std::string> errs;
  Table t = table_from_data(data, errs);
  if (!errs.empty()) return errs;
  return check_table(t, data.objects);
}

Category Category::from_data(const CategoryData& data) {
  std::vector<std::string> errs;
  Table t = table_from_data(data, errs);
  if (errs.empty()) errs = check_table(t, data.objects);
  if (!errs.empty()) {
    std::string msg = "invalid category:";
    for (const auto& e : errs) msg += "\n  " + e;
    fail(ErrorKind::ValidationError, msg);
  }
  Category C;
  C.objects_ = data.objects;
  C.mors_ = std::move(t.mors);
  C.comp_ = std::move(t.comp);
  C.identity_ = std::move(t.identity);
  C.finalize();
  return C;
}

Category Category::from_table(std::vector<std::string> objects, std::vector<Morphism> morphisms,
                              const std::vector<std::array<int, 3>>& compose, std::vector<int> identity) {
  Table t;
  t.nobj = static_cast<int>(objects.size());
  t.nmor = static_cast<int>(morphisms.size());
  t.mors = std::move(morphisms);
  t.comp.assign(static_cast<std::size_t>(t.nmor) * t.nmor, -1);
  for (const auto& [g, f, gf] : compose) t.comp[static_cast<std::size_t>(g) * t.nmor + f] = gf;
  t.identity = std::move(identity);
  auto errs = check_table(t, objects);
  if (!errs.empty()) {
    std::string msg = "invalid category:";
    for (const auto& e : errs) msg += "\n  " + e;
    fail(ErrorKind::ValidationError, msg);
  }
  Category C;
  C.objects_ = std::move(objects);
  C.mors_ = std::move(t.mors);
  C.comp_ = std::move(t.comp);
  C.identity_ = std::move(t.identity);
  C.finalize();
  return C;
}

CategoryData Category::to_data() const {
  CategoryData d;
  d.objects = objects_;
  for (const auto& m : mors_) d.morphisms.push_back({m.name, objects_[m.src], objects_[m.tgt]});
  for (int g = 0; g < num_morphisms(); ++g)
    for (int f = 0; f < num_morphisms(); ++f) {
      int gf = compose(g, f);
      if (gf >= 0) d.compose.push_back({mors_[g].name, mors_[f].name, mors_[gf].name});
    }
  for (int c = 0; c < num_objects(); ++c) d.identity[objects_[c]] = mors_[identity_[c]].name;
  return d;
}

void Category::finalize() {
  const int n = num_objects(), m = num_morphisms();
  hom_.assign(static_cast<std::size_t>(n) * n, {});
  hom_pos_.assign(m, -1);
  for (int f = 0; f < m; ++f) {
    auto& h = hom_[static_cast<std::size_t>(mors_[f].src) * n + mors_[f].tgt];
    hom_pos_[f] = static_cast<int>(h.size());
    h.push_back(f);
  }
  inverse_.assign(m, -1);
  for (int f = 0; f < m; ++f)
    for (int g : hom(mors_[f].tgt, mors_[f].src))
      if (compose(g, f) == identity_[mors_[f].src] && compose(f, g) == identity_[mors_[f].tgt]) {
        inverse_[f] = g;
        break;
      }
  class_of_.assign(n, -1);
  witness_.assign(n, -1);
  reps_.clear();
  members_.clear();
  for (int c = 0; c < n; ++c) {
    if (class_of_[c] >= 0) continue;
    int cls = static_cast<int>(reps_.size());
    reps_.push_back(c);
    members_.push_back({});
    for (int d = c; d < n; ++d) {
      if (class_of_[d] >= 0) continue;
      int w = -1;
      for (int f : hom(d, c))
        if (inverse_[f] >= 0) {
          w = f;
          break;
        }
      if (w < 0) continue;
      class_of_[d] = cls;
      witness_[d] = (d == c) ? identity_[c] : w;
      members_.back().push_back(d);
    }
  }
  aut_.assign(n, {});
  isos_from_.assign(n, {});
  aut_pos_.assign(m, -1);
  for (int f = 0; f < m; ++f) {
    if (inverse_[f] < 0) continue;
    isos_from_[mors_[f].src].push_back(f);
    if (mors_[f].src == mors_[f].tgt) {
      aut_pos_[f] = static_cast<int>(aut_[mors_[f].src].size());
      aut_[mors_[f].src].push_back(f);
    }
  }
  ei_ = true;
  for (int f = 0; f < m; ++f)
    if (mors_[f].src == mors_[f].tgt && inverse_[f] < 0) ei_ = false;
  left_free_ = true;
  for (int f = 0; f < m && left_free_; ++f)
    for (int u : aut_[mors_[f].tgt])
      if (u != identity_[mors_[f].tgt] && compose(u, f) == f) {
        left_free_ = false;
        break;
      }
}

int Category::find_object(const std::string& name) const {
  for (int i = 0; i < num_objects(); ++i)
    if (objects_[i] == name) return i;
  return -1;
}

int Category::find_morphism(const std::string& name) const {
  for (int i = 0; i < num_morphisms(); ++i)
    if (mors_[i].name == name) return i;
  return -1;
}

std::vector<int> Category::noniso_morphisms(int a, int b) const {
  std::vector<int> out;
  for (int f : hom(a, b))
    if (inverse_[f] < 0) out.push_back(f);
  return out;
}

bool Category::is_groupoid() const {
  return std::all_of(inverse_.begin(), inverse_.end(), [](int g) { return g >= 0; });
}

Category Category::opposite() const {
  Category C;
  C.objects_ = objects_;
  C.mors_ = mors_;
  for (auto& mm : C.mors_) std::swap(mm.src, mm.tgt);
  const std::size_t M = mors_.size();
  C.comp_.assign(M * M, -1);
  for (std::size_t g = 0; g < M; ++g)
    for (std::size_t f = 0; f < M; ++f) C.comp_[g * M + f] = comp_[f * M + g];
  C.identity_ = identity_;
  C.finalize();
  return C;
}

int Category::final_object() const {
  for (int c = 0; c < num_objects(); ++c) {
    bool ok = true;
    for (int a = 0; a < num_objects() && ok; ++a) ok = hom(a, c).size() == 1;
    if (ok) return c;
  }
  return -1;
}

int Category::initial_object() const {
  for (int c = 0; c < num_objects(); ++c) {
    bool ok = true;
    for (int a = 0; a < num_objects() && ok; ++a) ok = hom(c, a).size() == 1;
    if (ok) return c;
  }
  return -1;
}

std::string Category::canonical_string() const {
  std::ostringstream os;
  os << "cat;" << objects_.size();
  for (const auto& o : objects_) os << ';' << o;
  os << '|' << mors_.size();
  for (const auto& mm : mors_) os << ';' << mm.name << ',' << mm.src << ',' << mm.tgt;
  os << '|';
  for (int v : comp_) os << v << ',';
  os << '|';
  for (int v : identity_) os << v << ',';
  return os.str();
}

// ------------------------------------------------------------------ Functor

void Functor::check() const {
  const Category& B = *source;
  const Category& C = *target;
  if (static_cast<int>(on_objects.size()) != B.num_objects() ||
      static_cast<int>(on_morphisms.size()) != B.num_morphisms())
    fail(ErrorKind::NotAFunctor, "functor tables have the wrong size");
  for (int c : on_objects)
    if (c < 0 || c >= C.num_objects()) fail(ErrorKind::NotAFunctor, "object image out of range");
  for (int f = 0; f < B.num_morphisms(); ++f) {
    int Ff = on_morphisms[f];
    if (Ff < 0 || Ff >= C.num_morphisms()) fail(ErrorKind::NotAFunctor, "morphism image out of range");
    if (C.src(Ff) != on_objects[B.src(f)] || C.tgt(Ff) != on_objects[B.tgt(f)])
      fail(ErrorKind::NotAFunctor, "image of " + B.morphism_name(f) + " has the wrong endpoints");
  }
  for (int c = 0; c < B.num_objects(); ++c)
    if (on_morphisms[B.identity(c)] != C.identity(on_objects[c]))
      fail(ErrorKind::NotAFunctor, "identity of " + B.object_name(c) + " not preserved");
  for (int g = 0; g < B.num_morphisms(); ++g)
    for (int f = 0; f < B.num_morphisms(); ++f) {
      int gf = B.compose(g, f);
      if (gf < 0) continue;
      if (C.compose(on_morphisms[g], on_morphisms[f]) != on_morphisms[gf])
        fail(ErrorKind::NotAFunctor,
             "composition of " + B.morphism_name(g) + " and " + B.morphism_name(f) + " not preserved");
    }
}

Functor Functor::identity(CatPtr c) {
  Functor F;
  F.source = c;
  F.target = c;
  F.on_objects.resize(c->num_objects());
  std::iota(F.on_objects.begin(), F.on_objects.end(), 0);
  F.on_morphisms.resize(c->num_morphisms());
  std::iota(F.on_morphisms.begin(), F.on_morphisms.end(), 0);
  return F;
}

Functor Functor::inclusion_by_name(CatPtr sub, CatPtr ambient) {
  Functor F;
  F.source = sub;
  F.target = ambient;
  for (int c = 0; c < sub->num_objects(); ++c) {
    int x = ambient->find_object(sub->object_name(c));
    if (x < 0) fail(ErrorKind::NotAFunctor, "object " + sub->object_name(c) + " missing from the ambient category");
    F.on_objects.push_back(x);
  }
  for (int f = 0; f < sub->num_morphisms(); ++f) {
    int x = ambient->find_morphism(sub->morphism_name(f));
    if (x < 0) fail(ErrorKind::NotAFunctor, "morphism " + sub->morphism_name(f) + " missing from the ambient category");
    F.on_morphisms.push_back(x);
  }
  F.check();
  return F;
}

// ------------------------------------------------------------------- chains

namespace {

std::vector<std::vector<char>> class_graph(const Category& C) {
  const int k = C.num_classes();
  std::vector<std::vector<char>> g(k, std::vector<char>(k, 0));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) g[a][b] = !C.noniso_morphisms(C.rep(a), C.rep(b)).empty();
  return g;
}

} // namespace

int chain_bound(const Category& C) {
  auto g = class_graph(C);
  const int k = C.num_classes();
  // longest path by memoized DFS; a gray revisit means a cycle
  std::vector<int> state(k, 0), longest(k, 0);
  std::function<void(int)> dfs = [&](int a) {
    state[a] = 1;
    int best = 0;
    for (int b = 0; b < k; ++b) {
      if (!g[a][b]) continue;
      if (state[b] == 1)
        fail(ErrorKind::UnboundedChains, "composable non-isomorphisms return to the class of " +
                                             C.object_name(C.rep(a)) + "; chains have unbounded length");
      if (state[b] == 0) dfs(b);
      best = std::max(best, longest[b] + 1);
    }
    longest[a] = best;
    state[a] = 2;
  };
  int bound = 0;
  for (int a = 0; a < k; ++a) {
    if (state[a] == 0) dfs(a);
    bound = std::max(bound, longest[a]);
  }
  return bound;
}

std::vector<std::vector<Chain>> enumerate_chains(const Category& C, int p_max) {
  chain_bound(C);
  auto g = class_graph(C);
  const int k = C.num_classes();
  std::vector<std::vector<Chain>> out(p_max + 1);
  for (int a = 0; a < k; ++a) out[0].push_back({a});
  for (int p = 1; p <= p_max; ++p)
    for (const Chain& c : out[p - 1])
      for (int b = 0; b < k; ++b)
        if (g[c.back()][b]) {
          Chain d = c;
          d.push_back(b);
          out[p].push_back(std::move(d));
        }
  for (auto& level : out) std::sort(level.begin(), level.end());
  return out;
}

int ChainBiset::find(const std::vector<int>& tuple) const {
  auto it = index.find(tuple);
  return it == index.end() ? -1 : it->second;
}

ChainBiset chain_biset(const Category& C, const Chain& chain) {
  ChainBiset S;
  S.chain = chain;
  const int p = static_cast<int>(chain.size()) - 1;
  for (int cls : chain) S.reps.push_back(C.rep(cls));
  S.right_aut = C.aut(S.reps.front());
  S.left_aut = C.aut(S.reps.back());
  if (p == 0) {
    for (int u : S.right_aut) {
      S.index[{u}] = static_cast<int>(S.elements.size());
      S.elements.push_back({u});
    }
  } else {
    std::vector<std::vector<int>> sets(p);
    for (int i = 0; i < p; ++i) sets[i] = C.noniso_morphisms(S.reps[i], S.reps[i + 1]);
    bool empty = std::any_of(sets.begin(), sets.end(), [](const auto& s) { return s.empty(); });
    if (!empty) {
      std::vector<std::size_t> pos(p, 0);
      for (;;) {
        std::vector<int> t(p);
        for (int i = 0; i < p; ++i) t[i] = sets[i][pos[i]];
        if (!S.index.count(t)) {
          const int id = static_cast<int>(S.elements.size());
          S.elements.push_back(t);
          std::vector<std::vector<int>> queue{t};
          S.index[t] = id;
          for (std::size_t q = 0; q < queue.size(); ++q) {
            const auto cur = queue[q];
            for (int i = 1; i < p; ++i)
              for (int u : C.aut(S.reps[i])) {
                auto nx = cur;
                nx[i] = C.compose(cur[i], C.inverse(u));
                nx[i - 1] = C.compose(u, cur[i - 1]);
                if (S.index.emplace(nx, id).second) queue.push_back(std::move(nx));
              }
          }
        }
        int i = p - 1;
        while (i >= 0 && ++pos[i] == sets[i].size()) {
          pos[i] = 0;
          --i;
        }
        if (i < 0) break;
      }
    }
  }
  const std::size_t n = S.elements.size();
  S.left.assign(S.left_aut.size(), std::vector<int>(n));
  S.right.assign(S.right_aut.size(), std::vector<int>(n));
  for (std::size_t x = 0; x < n; ++x) {
    const auto& t = S.elements[x];
    for (std::size_t i = 0; i < S.left_aut.size(); ++i) {
      auto nx = t;
      nx.back() = C.compose(S.left_aut[i], t.back());
      S.left[i][x] = S.find(nx);
    }
    for (std::size_t j = 0; j < S.right_aut.size(); ++j) {
      auto nx = t;
      nx.front() = C.compose(t.front(), S.right_aut[j]);
      S.right[j][x] = S.find(nx);
    }
  }
  return S;
}

// ------------------------------------------------------------- tilde nerve

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent[a] = b;
  }
};

} // namespace

TildeNerve::TildeNerve(CatPtr C, int p_max) : C_(std::move(C)), p_max_(p_max), n_(C_->num_objects()) {
  const Category& c = *C_;
  if (p_max > 0) chain_bound(c);
  std::vector<std::vector<int>> noniso_out(n_);
  for (int f = 0; f < c.num_morphisms(); ++f)
    if (!c.is_iso(f)) noniso_out[c.src(f)].push_back(f);
  std::vector<std::vector<int>> out_of(n_);
  for (int f = 0; f < c.num_morphisms(); ++f) out_of[c.src(f)].push_back(f);

  table_.assign(static_cast<std::size_t>(p_max + 1) * n_ * n_, {});
  for (int p = 0; p <= p_max; ++p) {
    // all diagrams (α, φ_0..φ_{p-1}, β) in lexicographic order
    std::vector<std::vector<int>> diagrams;
    std::vector<int> cur;
    std::function<void(int, int)> extend = [&](int obj, int depth) {
      if (depth == p) {
        for (int b : out_of[obj]) {
          cur.push_back(b);
          diagrams.push_back(cur);
          cur.pop_back();
        }
        return;
      }
      for (int f : noniso_out[obj]) {
        cur.push_back(f);
        extend(c.tgt(f), depth + 1);
        cur.pop_back();
      }
    };
    for (int a = 0; a < c.num_morphisms(); ++a) {
      cur = {a};
      extend(c.tgt(a), 0);
    }
    std::map<std::vector<int>, int> idx;
    for (std::size_t i = 0; i < diagrams.size(); ++i) idx.emplace(diagrams[i], static_cast<int>(i));
    UnionFind uf(diagrams.size());
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
      const auto& d = diagrams[i];
      for (int pos = 0; pos <= p; ++pos) {
        const int obj = c.tgt(d[pos]);
        for (int u : c.isos_from(obj)) {
          if (c.is_identity(u)) continue;
          auto nx = d;
          nx[pos] = c.compose(u, d[pos]);
          nx[pos + 1] = c.compose(d[pos + 1], c.inverse(u));
          auto it = idx.find(nx);
          if (it != idx.end()) uf.unite(static_cast<int>(i), it->second);
        }
      }
    }
    // roots are least members since diagrams are sorted and unite keeps the smaller index
    std::vector<int> class_index(diagrams.size(), -1);
    for (std::size_t i = 0; i < diagrams.size(); ++i) {
      int r = uf.find(static_cast<int>(i));
      if (r == static_cast<int>(i)) {
        const auto& d = diagrams[i];
        const int s = c.src(d.front()), t = c.tgt(d.back());
        auto& list = table_[(static_cast<std::size_t>(p) * n_ + s) * n_ + t];
        class_index[i] = static_cast<int>(list.size());
        Simplex sx;
        sx.key = d;
        for (int k = 0; k <= p; ++k) sx.chain.push_back(c.class_of(c.tgt(d[k])));
        list.push_back(std::move(sx));
      }
      lookup_[diagrams[i]] = class_index[r];
    }
  }
}

const std::vector<TildeNerve::Simplex>& TildeNerve::simplices(int p, int s, int t) const {
  if (p < 0 || p > p_max_) return empty_;
  return table_[(static_cast<std::size_t>(p) * n_ + s) * n_ + t];
}

int TildeNerve::find(const std::vector<int>& d) const {
  for (std::size_t k = 1; k + 1 < d.size(); ++k)
    if (C_->is_iso(d[k])) return -1;
  auto it = lookup_.find(d);
  if (it == lookup_.end()) fail(ErrorKind::InvalidArgument, "diagram outside the enumerated nerve");
  return it->second;
}

int TildeNerve::face(int p, int s, int t, int idx, int i) const {
  const auto& d = simplices(p, s, t)[idx].key;
  std::vector<int> f;
  f.reserve(d.size() - 1);
  // d = (α, φ_0, …, φ_{p-1}, β); removing c_i merges positions i and i+1
  for (int k = 0; k <= p; ++k) {
    if (k == i) {
      f.push_back(C_->compose(d[k + 1], d[k]));
      ++k;
      for (int j = k + 1; j <= p + 1; ++j) f.push_back(d[j]);
      break;
    }
    f.push_back(d[k]);
  }
  return find(f);
}

int TildeNerve::precompose(int p, int s, int t, int idx, int f) const {
  auto d = simplices(p, s, t)[idx].key;
  d.front() = C_->compose(d.front(), f);
  return find(d);
}

int TildeNerve::postcompose(int p, int s, int t, int idx, int g) const {
  auto d = simplices(p, s, t)[idx].key;
  d.back() = C_->compose(g, d.back());
  return find(d);
}

} // namespace pchain::fincat

namespace pchain::fincat {

Category poset_category(const std::vector<std::string>& names, const std::vector<std::pair<int, int>>& less) {
  const int n = static_cast<int>(names.size());
  std::vector<std::vector<char>> le(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) le[i][i] = 1;
  for (const auto& [a, b] : less) le[a][b] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (le[i][j] && le[j][i]) fail(ErrorKind::ValidationError, "order relation has a cycle");
  std::vector<Morphism> mors;
  std::vector<std::vector<int>> id(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (le[i][j]) {
        id[i][j] = static_cast<int>(mors.size());
        mors.push_back({names[i] + "<=" + names[j], i, j});
      }
  std::vector<std::array<int, 3>> comp;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (le[i][j] && le[j][k]) comp.push_back({id[j][k], id[i][j], id[i][k]});
  std::vector<int> ident(n);
  for (int i = 0; i < n; ++i) ident[i] = id[i][i];
  return Category::from_table(names, mors, comp, ident);
}

Category linear_order(int n) {
  std::vector<std::string> names;
  std::vector<std::pair<int, int>> less;
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    if (i > 0) less.push_back({i - 1, i});
  }
  return poset_category(names, less);
}

Functor full_subcategory(CatPtr C, const std::vector<int>& objects) {
  std::vector<int> new_id(C->num_objects(), -1);
  std::vector<std::string> names;
  for (int c : objects) {
    if (c < 0 || c >= C->num_objects() || new_id[c] >= 0) fail(ErrorKind::InvalidArgument, "bad object list");
    new_id[c] = static_cast<int>(names.size());
    names.push_back(C->object_name(c));
  }
  std::vector<int> mor_new(C->num_morphisms(), -1), on_mor;
  std::vector<Morphism> mors;
  for (int f = 0; f < C->num_morphisms(); ++f) {
    const int a = new_id[C->src(f)], b = new_id[C->tgt(f)];
    if (a < 0 || b < 0) continue;
    mor_new[f] = static_cast<int>(mors.size());
    mors.push_back({C->morphism_name(f), a, b});
    on_mor.push_back(f);
  }
  std::vector<std::array<int, 3>> comp;
  for (int g : on_mor)
    for (int f : on_mor)
      if (C->tgt(f) == C->src(g)) comp.push_back({mor_new[g], mor_new[f], mor_new[C->compose(g, f)]});
  std::vector<int> ids;
  for (int c : objects) ids.push_back(mor_new[C->identity(c)]);
  auto sub = std::make_shared<const Category>(Category::from_table(names, mors, comp, ids));
  return Functor{sub, C, objects, on_mor};
}

Functor automorphism_subcategory(CatPtr C, int c) {
  const auto& aut = C->aut(c);
  std::vector<Morphism> mors;
  std::vector<int> pos(C->num_morphisms(), -1);
  for (int u : aut) {
    pos[u] = static_cast<int>(mors.size());
    mors.push_back({C->morphism_name(u), 0, 0});
  }
  std::vector<std::array<int, 3>> comp;
  for (int g : aut)
    for (int f : aut) comp.push_back({pos[g], pos[f], pos[C->compose(g, f)]});
  auto sub = std::make_shared<const Category>(Category::from_table({C->object_name(c)}, mors, comp, {pos[C->identity(c)]}));
  return Functor{sub, C, {c}, aut};
}

} // namespace pchain::fincat
