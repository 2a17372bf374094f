#include "pchain/io.hpp"

#include "pchain/cache.hpp"
#include "pchain/error.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace pchain::io {

using groups::Family;
using groups::FiniteGroup;
using groups::Lattice;

// ------------------------------------------------------------- primitives

ojson scalar_to_json(const Scalar& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return ojson(x.get_num().get_si());
  return ojson(x.get_str());
}

Scalar scalar_from_json(const json& x, const Ring& R) {
  Scalar v;
  if (x.is_number_integer()) {
    v = R.from_int(x.get<long>());
    return v;
  }
  if (!x.is_string()) fail(ErrorKind::ParseError, "matrix entry must be an integer or a \"a/b\" string, got " + x.dump());
  try {
    v = Scalar(x.get<std::string>());
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::ParseError, "malformed number " + x.dump());
  }
  if (v.get_den() == 0) fail(ErrorKind::ParseError, "zero denominator in " + x.dump());
  v.canonicalize();
  try {
    R.normalize(v);
  } catch (const Error& e) {
    fail(ErrorKind::ValidationError, "entry " + x.dump() + " is not an element of " + R.tag());
  }
  return v;
}

ojson matrix_to_json(const Matrix& A) {
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < A.rows(); ++i) {
    ojson r = ojson::array();
    for (std::size_t j = 0; j < A.cols(); ++j) r.push_back(scalar_to_json(A.at(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix matrix_from_json(const json& rows, const Ring& R, std::size_t nrows, std::size_t ncols, const std::string& what) {
  if (!rows.is_array()) fail(ErrorKind::ParseError, what + ": matrix must be an array of rows");
  // an empty array stands for any matrix with a zero dimension
  if (rows.empty() && (nrows == 0 || ncols == 0)) return Matrix(R, nrows, ncols);
  if (rows.size() != nrows)
    fail(ErrorKind::ValidationError, what + ": expected " + std::to_string(nrows) + " rows, got " + std::to_string(rows.size()));
  Matrix A(R, nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i) {
    const json& r = rows[i];
    if (!r.is_array() || r.size() != ncols)
      fail(ErrorKind::ValidationError, what + ": row " + std::to_string(i) + " should have " + std::to_string(ncols) + " entries");
    for (std::size_t j = 0; j < ncols; ++j) A.at(i, j) = scalar_from_json(r[j], R);
  }
  return A;
}

ojson ring_to_json(const Ring& R) {
  ojson o;
  switch (R.kind()) {
    case Ring::Kind::Integers: o["ring"] = "Z"; break;
    case Ring::Kind::Rationals: o["ring"] = "Q"; break;
    case Ring::Kind::PrimeField:
      o["ring"] = "Fp";
      o["p"] = R.p();
      break;
  }
  return o;
}

Ring ring_from_json(const json& x) {
  if (x.is_string()) return Ring::parse(x.get<std::string>());
  if (!x.is_object() || !x.contains("ring")) fail(ErrorKind::ParseError, "ring must be \"Z\", \"Q\", \"Fp:p\" or {\"ring\":…}");
  const std::string tag = x.at("ring").get<std::string>();
  if (tag == "Fp") {
    if (!x.contains("p")) fail(ErrorKind::ParseError, "prime field needs \"p\"");
    return Ring::prime_field(x.at("p").get<long>());
  }
  return Ring::parse(tag);
}

ojson canonical_to_json(const Canonical& c) {
  ojson o;
  o["free_rank"] = c.free_rank;
  ojson t = ojson::array();
  for (const auto& d : c.torsion) t.push_back(d.fits_slong_p() ? ojson(d.get_si()) : ojson(d.get_str()));
  o["torsion"] = t;
  return o;
}

std::string format_module(const Canonical& c) {
  if (c.is_zero()) return "0";
  std::string base;
  switch (c.ring.kind()) {
    case Ring::Kind::Integers: base = "Z"; break;
    case Ring::Kind::Rationals: base = "Q"; break;
    case Ring::Kind::PrimeField: base = "F_" + std::to_string(c.ring.p()); break;
  }
  std::vector<std::string> parts;
  if (c.free_rank == 1) parts.push_back(base);
  if (c.free_rank > 1) parts.push_back(base + "^" + std::to_string(c.free_rank));
  for (const auto& d : c.torsion) parts.push_back("Z/" + d.get_str());
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " ⊕ " : "") + parts[i];
  return out;
}

json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    const auto cut = what.find("parse error");
    if (cut != std::string::npos) what = what.substr(cut);
    fail(ErrorKind::ParseError, origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::ParseError, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// --------------------------------------------------------------- entities

namespace {

const json& need(const json& x, const char* key, const std::string& what) {
  if (!x.is_object() || !x.contains(key)) fail(ErrorKind::ParseError, what + ": missing \"" + key + "\"");
  return x.at(key);
}

std::string str(const json& x, const std::string& what) {
  if (!x.is_string()) fail(ErrorKind::ParseError, what + ": expected a string, got " + x.dump());
  return x.get<std::string>();
}

long integer(const json& x, const std::string& what) {
  if (!x.is_number_integer()) fail(ErrorKind::ParseError, what + ": expected an integer, got " + x.dump());
  return x.get<long>();
}

catmod::Variance variance_from(const json& x, const std::string& what) {
  const std::string v = str(x, what);
  if (v == "contra" || v == "contravariant") return catmod::Variance::Contravariant;
  if (v == "co" || v == "covariant") return catmod::Variance::Covariant;
  fail(ErrorKind::ParseError, what + ": variance must be \"contra\" or \"co\"");
}

std::vector<int> cycle_perm(const json& gen, int degree, const std::string& what) {
  if (gen.is_string()) return FiniteGroup::parse_cycles(gen.get<std::string>(), degree);
  std::vector<int> img(degree);
  for (int i = 0; i < degree; ++i) img[i] = i;
  if (!gen.is_array()) fail(ErrorKind::ParseError, what + ": generator must be cycle notation or a list of cycles");
  for (const auto& cyc : gen) {
    if (!cyc.is_array() || cyc.empty()) fail(ErrorKind::ParseError, what + ": empty cycle");
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const long a = integer(cyc[i], what), b = integer(cyc[(i + 1) % cyc.size()], what);
      if (a < 1 || a > degree || b < 1) fail(ErrorKind::ParseError, what + ": points are 1-based");
      img[a - 1] = static_cast<int>(b - 1);
    }
  }
  return img;
}

int max_point(const json& gen) {
  int m = 0;
  if (gen.is_string()) {
    std::string num;
    for (char ch : gen.get<std::string>() + " ") {
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        num += ch;
      } else if (!num.empty()) {
        m = std::max(m, std::stoi(num));
        num.clear();
      }
    }
    return m;
  }
  if (gen.is_array())
    for (const auto& cyc : gen)
      if (cyc.is_array())
        for (const auto& a : cyc)
          if (a.is_number_integer()) m = std::max(m, a.get<int>());
  return m;
}

} // namespace

ojson category_to_json(const fincat::Category& C) {
  const fincat::CategoryData d = C.to_data();
  ojson o;
  o["objects"] = d.objects;
  ojson mors = ojson::array();
  for (const auto& m : d.morphisms) mors.push_back({{"id", m.id}, {"src", m.src}, {"tgt", m.tgt}});
  o["morphisms"] = mors;
  ojson comp = ojson::array();
  for (const auto& c : d.compose) comp.push_back({c[0], c[1], c[2]});
  o["compose"] = comp;
  ojson id = ojson::object();
  for (const auto& obj : d.objects) id[obj] = d.identity.at(obj);
  o["identity"] = id;
  return o;
}

fincat::CategoryData category_data_from_json(const json& x) {
  const std::string what = "category";
  fincat::CategoryData d;
  for (const auto& o : need(x, "objects", what)) d.objects.push_back(str(o, what + " object"));
  for (const auto& m : need(x, "morphisms", what))
    d.morphisms.push_back({str(need(m, "id", what), what), str(need(m, "src", what), what), str(need(m, "tgt", what), what)});
  for (const auto& c : need(x, "compose", what)) {
    if (!c.is_array() || c.size() != 3) fail(ErrorKind::ParseError, "compose entries are [g, f, g∘f]");
    d.compose.push_back({str(c[0], what), str(c[1], what), str(c[2], what)});
  }
  const json& id = need(x, "identity", what);
  if (!id.is_object()) fail(ErrorKind::ParseError, "identity must map objects to morphisms");
  for (const auto& [k, v] : id.items()) d.identity[k] = str(v, what + " identity");
  return d;
}

ojson group_to_json(const FiniteGroup& G) {
  ojson o;
  o["order"] = G.order();
  o["table"] = G.table();
  return o;
}

FiniteGroup group_from_json(const json& x) {
  const std::string what = "group";
  if (x.contains("builtin")) {
    const std::string b = str(x.at("builtin"), what);
    if (b == "cyclic") return FiniteGroup::cyclic(static_cast<int>(integer(need(x, "n", what), what)));
    if (b == "symmetric") return FiniteGroup::symmetric(static_cast<int>(integer(need(x, "n", what), what)));
    if (b == "product") {
      const json& f = need(x, "factors", what);
      if (!f.is_array() || f.empty()) fail(ErrorKind::ParseError, "product needs a list of factors");
      FiniteGroup G = group_from_json(f[0]);
      for (std::size_t i = 1; i < f.size(); ++i) G = FiniteGroup::product(G, group_from_json(f[i]));
      return G;
    }
    fail(ErrorKind::ParseError, "unknown builtin group " + b);
  }
  if (x.contains("table")) {
    std::vector<std::vector<int>> t;
    for (const auto& r : x.at("table")) {
      std::vector<int> row;
      for (const auto& v : r) row.push_back(static_cast<int>(integer(v, what + " table")));
      t.push_back(std::move(row));
    }
    if (x.contains("order") && integer(x.at("order"), what) != static_cast<long>(t.size()))
      fail(ErrorKind::ValidationError, "group order does not match the table size");
    return FiniteGroup::from_table(t);
  }
  const json& gens = need(x, "perm_gens", what);
  if (!gens.is_array() || gens.empty()) fail(ErrorKind::ParseError, "perm_gens must be a nonempty list");
  int degree = 0;
  if (x.contains("degree")) {
    degree = static_cast<int>(integer(x.at("degree"), what));
  } else {
    for (const auto& g : gens) degree = std::max(degree, max_point(g));
  }
  std::vector<std::vector<int>> perms;
  for (const auto& g : gens) perms.push_back(cycle_perm(g, degree, what));
  return FiniteGroup::from_permutations(perms);
}

ojson family_to_json(const Lattice& L, const Family& F, const std::string& group) {
  ojson o;
  o["group"] = group;
  ojson subs = ojson::array();
  for (int i : F.members) subs.push_back(L.subgroups[i].elements);
  o["subgroups"] = subs;
  o["closure"] = "none";
  return o;
}

Family family_from_json(const json& x, const FiniteGroup& G, const Lattice& L) {
  const std::string what = "family";
  const json& s = need(x, "subgroups", what);
  if (s.is_string()) {
    const std::string k = s.get<std::string>();
    if (k == "all" || k == "ALL") return groups::family_all(L);
    if (k == "trivial" || k == "TR") return groups::family_trivial(L);
    fail(ErrorKind::ParseError, "family: subgroups must be \"all\", \"trivial\" or a list");
  }
  const std::string closure = x.contains("closure") ? str(x.at("closure"), what) : "auto";
  if (closure != "auto" && closure != "none") fail(ErrorKind::ParseError, "closure must be \"auto\" or \"none\"");
  const bool close = closure == "auto";
  std::vector<groups::Subgroup> subs;
  for (const auto& h : s) {
    std::vector<int> elems;
    for (const auto& e : h) {
      const long v = integer(e, what);
      if (v < 0 || v >= G.order()) fail(ErrorKind::ValidationError, "family: element " + std::to_string(v) + " outside the group");
      elems.push_back(static_cast<int>(v));
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (close) {
      subs.push_back(groups::closure(G, elems));
    } else {
      if (!groups::is_subgroup(G, elems)) fail(ErrorKind::ValidationError, "family: listed set is not a subgroup");
      subs.push_back(elems);
    }
  }
  return groups::make_family(G, L, subs, close);
}

ojson module_to_json(const CatModule& M, const std::string& category) {
  const fincat::Category& C = *M.base;
  ojson o;
  o["category"] = category;
  o["variance"] = M.contravariant() ? "contra" : "co";
  o["ring"] = ring_to_json(M.ring)["ring"];
  if (M.ring.kind() == Ring::Kind::PrimeField) o["p"] = M.ring.p();
  ojson values = ojson::object();
  for (int c = 0; c < C.num_objects(); ++c) {
    ojson v;
    v["rank"] = M.rank(c);
    v["relations"] = matrix_to_json(M.value[c].relation_rows());
    values[C.object_name(c)] = v;
  }
  o["values"] = values;
  ojson action = ojson::object();
  for (int f = 0; f < C.num_morphisms(); ++f) action[C.morphism_name(f)] = matrix_to_json(M.action[f]);
  o["action"] = action;
  return o;
}

CatModule module_from_json(const json& x, CatPtr Cp, const Ring& R) {
  const fincat::Category& C = *Cp;
  const std::string what = "module";
  if (x.contains("ring") && ring_from_json(x.contains("p") ? json{{"ring", x.at("ring")}, {"p", x.at("p")}} : x.at("ring")) != R)
    fail(ErrorKind::RingMismatch, "module is declared over a different ring than the run");
  const catmod::Variance var = variance_from(need(x, "variance", what), what);
  if (x.contains("builtin")) {
    const std::string b = str(x.at("builtin"), what);
    if (b == "constant") {
      const long rank = x.contains("rank") ? integer(x.at("rank"), what) : 1;
      if (rank < 0) fail(ErrorKind::ValidationError, "module rank must be nonnegative");
      return catmod::constant_module(Cp, R, var, static_cast<std::size_t>(rank));
    }
    if (b == "orbit_permutation") {
      if (var != catmod::Variance::Contravariant) fail(ErrorKind::VarianceMismatch, "the orbit permutation module is contravariant");
      return catmod::orbit_permutation_module(Cp, R);
    }
    if (b == "augmentation") return catmod::augmentation_module(Cp, R, var);
    fail(ErrorKind::ParseError, "unknown builtin module " + b);
  }
  CatModule M;
  M.base = Cp;
  M.variance = var;
  M.ring = R;
  const json& values = need(x, "values", what);
  if (!values.is_object()) fail(ErrorKind::ParseError, "module values must map objects to {rank, relations}");
  for (const auto& [k, v] : values.items())
    if (C.find_object(k) < 0) fail(ErrorKind::ValidationError, "module value for unknown object " + k);
  for (int c = 0; c < C.num_objects(); ++c) {
    const std::string& name = C.object_name(c);
    if (!values.contains(name)) {
      M.value.emplace_back(R, 0);
      continue;
    }
    const json& v = values.at(name);
    const long g = integer(need(v, "rank", what), what + " rank");
    if (g < 0) fail(ErrorKind::ValidationError, "module rank must be nonnegative");
    const std::size_t gens = static_cast<std::size_t>(g);
    if (v.contains("relations") && !v.at("relations").empty()) {
      const json& rel = v.at("relations");
      Matrix rows = matrix_from_json(rel, R, rel.size(), gens, "relations at " + name);
      M.value.push_back(linalg::FPModule::from_relation_rows(R, gens, rows));
    } else {
      M.value.emplace_back(R, gens);
    }
  }
  const json empty = json::object();
  const json& action = x.contains("action") ? x.at("action") : empty;
  if (!action.is_object()) fail(ErrorKind::ParseError, "module action must map morphisms to matrices");
  for (const auto& [k, v] : action.items())
    if (C.find_morphism(k) < 0) fail(ErrorKind::ValidationError, "action given for unknown morphism " + k);
  for (int f = 0; f < C.num_morphisms(); ++f) {
    const std::size_t ra = M.rank(C.src(f)), rb = M.rank(C.tgt(f));
    const std::size_t rows = M.contravariant() ? ra : rb, cols = M.contravariant() ? rb : ra;
    const std::string& name = C.morphism_name(f);
    if (action.contains(name)) {
      M.action.push_back(matrix_from_json(action.at(name), R, rows, cols, "action of " + name));
    } else if (C.is_identity(f)) {
      M.action.push_back(Matrix::identity(R, ra));
    } else if (rows == 0 || cols == 0) {
      M.action.emplace_back(R, rows, cols);
    } else {
      fail(ErrorKind::ValidationError, "no action given for morphism " + name);
    }
  }
  return M;
}

// -------------------------------------------------------------- workspace

void Workspace::load_file(const std::string& path) {
  const std::string text = read_file(path);
  const json doc = parse_text(text, path);
  load(doc, {path, sha256_hex(text)});
}

void Workspace::add(const std::string& kind, const std::string& name, const json& body, const std::string& file) {
  auto& m = raw_[kind];
  if (m.count(name)) fail(ErrorKind::ValidationError, kind + " name " + name + " defined twice");
  m[name] = {body, file};
}

void Workspace::load(const json& doc, const Provenance& from) {
  if (!doc.is_object()) fail(ErrorKind::ParseError, from.file + ": top level must be an object");
  files_.push_back(from);
  static const std::map<std::string, std::string> sections = {
      {"groups", "group"}, {"families", "family"}, {"categories", "category"}, {"modules", "module"}};
  if (doc.contains("kind")) {
    const std::string kind = str(doc.at("kind"), from.file);
    bool known = false;
    for (const auto& [s, k] : sections) known = known || k == kind;
    if (!known) fail(ErrorKind::ParseError, from.file + ": unknown kind " + kind);
    json body = doc;
    body.erase("kind");
    const std::string name = str(need(doc, "name", from.file), from.file);
    body.erase("name");
    add(kind, name, body, from.file);
    return;
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "description") continue;
    auto it = sections.find(key);
    if (it == sections.end()) fail(ErrorKind::ParseError, from.file + ": unknown section " + key);
    if (!value.is_object()) fail(ErrorKind::ParseError, from.file + ": section " + key + " must map names to entities");
    for (const auto& [name, body] : value.items()) add(it->second, name, body, from.file);
  }
}

std::vector<std::string> Workspace::finalize() {
  std::vector<std::string> bad;
  auto attempt = [&](const std::string& label, const std::string& file, const auto& body) {
    try {
      body();
    } catch (const Error& e) {
      bad.push_back(file + ": " + label + ": " + e.what());
    } catch (const json::exception& e) {
      bad.push_back(file + ": " + label + ": " + std::string(error_kind_name(ErrorKind::ParseError)) + ": " + e.what());
    }
  };
  for (const auto& [name, raw] : raw_["group"])
    attempt("group " + name, raw.file, [&] {
      FiniteGroup G = group_from_json(raw.body);
      lattices_[name] = groups::subgroup_lattice(G);
      groups_[name] = std::move(G);
    });
  for (const auto& [name, raw] : raw_["family"])
    attempt("family " + name, raw.file, [&] {
      const std::string g = str(need(raw.body, "group", "family"), "family");
      if (!groups_.count(g)) fail(ErrorKind::ValidationError, "unknown or invalid group " + g);
      families_[name] = {g, family_from_json(raw.body, groups_.at(g), lattices_.at(g))};
    });
  for (const auto& [name, raw] : raw_["category"])
    attempt("category " + name, raw.file, [&] {
      const json& b = raw.body;
      if (b.contains("orbit")) {
        const json& o = b.at("orbit");
        const std::string fam = o.is_string() ? o.get<std::string>() : str(need(o, "family", "orbit"), "orbit");
        if (!families_.count(fam)) fail(ErrorKind::ValidationError, "unknown or invalid family " + fam);
        const auto& fe = families_.at(fam);
        categories_[name] = std::make_shared<const fincat::Category>(
            groups::orbit_category(groups_.at(fe.group), lattices_.at(fe.group), fe.family));
        category_family_[name] = fam;
      } else if (b.contains("group")) {
        const std::string g = str(b.at("group"), "category");
        if (!groups_.count(g)) fail(ErrorKind::ValidationError, "unknown or invalid group " + g);
        categories_[name] = std::make_shared<const fincat::Category>(groups::group_category(groups_.at(g)));
      } else if (b.contains("linear_order")) {
        const long n = integer(b.at("linear_order"), "linear_order");
        if (n < 1) fail(ErrorKind::ValidationError, "linear order needs at least one object");
        categories_[name] = std::make_shared<const fincat::Category>(fincat::linear_order(static_cast<int>(n)));
      } else if (b.contains("poset")) {
        const json& p = b.at("poset");
        std::vector<std::string> objs;
        for (const auto& o : need(p, "objects", "poset")) objs.push_back(str(o, "poset"));
        auto idx = [&](const json& v) {
          auto it = std::find(objs.begin(), objs.end(), str(v, "poset"));
          if (it == objs.end()) fail(ErrorKind::ValidationError, "poset relation names unknown object " + v.dump());
          return static_cast<int>(it - objs.begin());
        };
        std::vector<std::pair<int, int>> less;
        for (const auto& r : need(p, "less", "poset")) {
          if (!r.is_array() || r.size() != 2) fail(ErrorKind::ParseError, "poset relations are [a, b] pairs");
          less.push_back({idx(r[0]), idx(r[1])});
        }
        categories_[name] = std::make_shared<const fincat::Category>(fincat::poset_category(objs, less));
      } else {
        categories_[name] = std::make_shared<const fincat::Category>(fincat::Category::from_data(category_data_from_json(b)));
      }
    });
  for (const auto& [name, raw] : raw_["module"])
    attempt("module " + name, raw.file, [&] {
      const std::string c = str(need(raw.body, "category", "module"), "module");
      if (!categories_.count(c)) fail(ErrorKind::ValidationError, "unknown or invalid category " + c);
      CatModule M = module_from_json(raw.body, categories_.at(c), ring_);
      auto v = M.violations();
      if (!v.empty()) {
        std::string msg = v[0];
        for (std::size_t i = 1; i < v.size(); ++i) msg += "; " + v[i];
        fail(ErrorKind::NotAFunctor, msg);
      }
      modules_[name] = std::move(M);
      module_category_[name] = c;
    });
  return bad;
}

namespace {
template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const std::string& kind) {
  auto it = m.find(name);
  if (it == m.end()) fail(ErrorKind::InvalidArgument, "no valid " + kind + " named " + name);
  return it->second;
}
} // namespace

const FiniteGroup& Workspace::group(const std::string& name) const { return lookup(groups_, name, "group"); }
const Lattice& Workspace::lattice(const std::string& name) const { return lookup(lattices_, name, "group"); }
const Workspace::FamilyEntry& Workspace::family(const std::string& name) const { return lookup(families_, name, "family"); }
CatPtr Workspace::category(const std::string& name) const { return lookup(categories_, name, "category"); }
std::string Workspace::category_family(const std::string& name) const {
  auto it = category_family_.find(name);
  return it == category_family_.end() ? std::string() : it->second;
}
const CatModule& Workspace::module(const std::string& name) const { return lookup(modules_, name, "module"); }
const std::string& Workspace::module_category(const std::string& name) const {
  return lookup(module_category_, name, "module");
}

std::vector<std::string> Workspace::names(const std::string& kind) const {
  std::vector<std::string> out;
  auto it = raw_.find(kind);
  if (it != raw_.end())
    for (const auto& [n, r] : it->second) out.push_back(n);
  return out;
}

// ---------------------------------------------------------------- results

namespace {

std::pair<int, int> shown(int p, int q, bool coh) { return coh ? std::make_pair(-p, -q) : std::make_pair(p, q); }

} // namespace

ojson page_to_json(const engine::Page& P, bool cohomological) {
  ojson o;
  o["r"] = P.r;
  ojson entries = ojson::array();
  for (const auto& e : P.entries) {
    auto [p, q] = shown(e.p, e.q, cohomological);
    ojson x;
    x["p"] = p;
    x["q"] = q;
    const Canonical c = e.module.canonical();
    x["free_rank"] = c.free_rank;
    x["torsion"] = canonical_to_json(c)["torsion"];
    entries.push_back(std::move(x));
  }
  o["entries"] = entries;
  ojson diffs = ojson::array();
  for (const auto& d : P.differentials) {
    auto [p, q] = shown(d.p, d.q, cohomological);
    auto [tp, tq] = shown(d.tp, d.tq, cohomological);
    ojson x;
    x["from"] = {p, q};
    x["to"] = {tp, tq};
    x["matrix"] = matrix_to_json(d.matrix);
    diffs.push_back(std::move(x));
  }
  o["differentials"] = diffs;
  return o;
}

ojson pages_to_json(const engine::SpectralSequence& ss, int r_max, bool cohomological) {
  ojson o;
  o["stable_from"] = ss.stable_from;
  ojson pages = ojson::array();
  for (const auto& P : ss.pages)
    if (r_max < 0 || P.r <= r_max) pages.push_back(page_to_json(P, cohomological));
  o["pages"] = pages;
  o["infinity"] = page_to_json(ss.infinity(), cohomological);
  return o;
}

ojson report_to_json(const engine::ConvergenceReport& rep) {
  ojson o;
  o["certified_max"] = rep.certified_max;
  o["all_match"] = rep.all_match;
  o["first_mismatch"] = rep.first_mismatch;
  ojson degrees = ojson::array();
  for (const auto& d : rep.degrees) {
    ojson x;
    x["n"] = d.n;
    x["oracle"] = canonical_to_json(d.oracle);
    x["total"] = canonical_to_json(d.total);
    x["eps_iso"] = d.eps_iso;
    ojson cells = ojson::array();
    for (const auto& c : d.cells) {
      ojson y;
      y["p"] = c.p;
      y["q"] = c.q;
      y["graded"] = canonical_to_json(c.graded);
      y["einf"] = canonical_to_json(c.einf);
      y["match"] = c.match;
      cells.push_back(std::move(y));
    }
    x["cells"] = cells;
    degrees.push_back(std::move(x));
  }
  o["degrees"] = degrees;
  return o;
}

} // namespace pchain::io
