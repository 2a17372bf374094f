// pchain: command-line front end. Exit codes: 0 ok, 1 validation failure
// (validate only), 2 verdict mismatch, 3 unbounded chains, 4 bad input.

#include "pchain/cache.hpp"
#include "pchain/commands.hpp"
#include "pchain/error.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <optional>

using namespace pchain;
using cli::ojson;

namespace {

constexpr int kOk = 0, kInvalid = 1, kMismatch = 2, kUnbounded = 3, kInput = 4;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::UnboundedChains: return kUnbounded;
    case ErrorKind::ComparisonFailed: return kMismatch;
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
    case ErrorKind::NotAFunctor:
    case ErrorKind::VarianceMismatch:
    case ErrorKind::RingMismatch:
    case ErrorKind::BaseMismatch:
    case ErrorKind::FamilyMismatch:
    case ErrorKind::GroupTooLarge:
    case ErrorKind::InvalidArgument:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::NotLeftFree:
    case ErrorKind::NotTwoColumn: return kInput;
    default: return kInvalid;
  }
}

struct Flags {
  std::string ring = "Z";
  int n_max = 3, p_max = -1, q_max = -1, r_max = -1, jobs = 1;
  std::string cache_dir, format = "json", out_dir;
  std::vector<std::string> files;
  std::string category, M, N, group, family, subfamily;
  bool reduce = false, assembly = false;
};

cli::RunConfig config_of(const Flags& f) {
  cli::RunConfig c;
  c.ring = linalg::Ring::parse(f.ring);
  c.n_max = f.n_max;
  c.p_max = f.p_max;
  c.q_max = f.q_max;
  c.r_max = f.r_max;
  c.jobs = f.jobs;
  return c;
}

io::Workspace load(const Flags& f, const linalg::Ring& R) {
  io::Workspace ws(R);
  for (const auto& path : f.files) ws.load_file(path);
  auto bad = ws.finalize();
  if (!bad.empty()) {
    for (const auto& b : bad) std::cerr << b << "\n";
    fail(ErrorKind::ValidationError, std::to_string(bad.size()) + " invalid entities");
  }
  return ws;
}

// A workspace module, or builtin:constant[:rank] / builtin:orbit_permutation
// / builtin:augmentation on the category named by --category (or by the
// other module).
catmod::CatModule resolve_module(const io::Workspace& ws, const std::string& ref, const std::string& category,
                                 catmod::Variance v, const linalg::Ring& R) {
  const std::string prefix = "builtin:";
  if (ref.rfind(prefix, 0) != 0) {
    const catmod::CatModule& M = ws.module(ref);
    if (M.variance != v)
      fail(ErrorKind::VarianceMismatch, "module " + ref + " must be " + catmod::variance_name(v));
    return M;
  }
  if (category.empty()) fail(ErrorKind::InvalidArgument, "builtin module " + ref + " needs --category");
  fincat::CatPtr C = ws.category(category);
  std::string kind = ref.substr(prefix.size());
  std::size_t rank = 1;
  if (auto colon = kind.find(':'); colon != std::string::npos) {
    try {
      rank = std::stoul(kind.substr(colon + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidArgument, "bad rank in " + ref);
    }
    kind = kind.substr(0, colon);
  }
  if (kind == "constant") return catmod::constant_module(C, R, v, rank);
  if (kind == "augmentation") return catmod::augmentation_module(C, R, v);
  if (kind == "orbit_permutation") {
    if (v != catmod::Variance::Contravariant) fail(ErrorKind::VarianceMismatch, "orbit permutation module is contravariant");
    return catmod::orbit_permutation_module(C, R);
  }
  fail(ErrorKind::InvalidArgument, "unknown builtin module " + ref);
}

std::string category_for(const io::Workspace& ws, const Flags& f) {
  if (!f.category.empty()) return f.category;
  for (const auto* s : {&f.M, &f.N})
    if (!s->empty() && s->rfind("builtin:", 0) != 0) return ws.module_category(*s);
  return {};
}

void emit(const Flags& f, const ojson& doc, const std::string& table) {
  if (f.format == "table")
    std::cout << table;
  else
    std::cout << doc.dump(2) << "\n";
}

void write_outputs(const Flags& f, const ojson& doc) {
  if (f.out_dir.empty()) return;
  const std::string dir = f.out_dir + "/";
  io::write_atomic(dir + "result.json", doc.dump(2) + "\n");
  if (doc.contains("spectral_sequence")) {
    const ojson& ss = doc.at("spectral_sequence");
    for (const auto& P : ss.at("pages")) io::write_atomic(dir + "E" + std::to_string(P.at("r").get<int>()) + ".json", P.dump(2) + "\n");
    io::write_atomic(dir + "Einf.json", ss.at("infinity").dump(2) + "\n");
  }
  if (doc.contains("report")) io::write_atomic(dir + "report.json", doc.at("report").dump(2) + "\n");
}

// Looks the document up in the cache before computing it.
ojson cached(const Flags& f, const std::string& command, const cli::RunConfig& cfg, const std::vector<std::string>& inputs,
             const std::function<ojson()>& compute) {
  io::Cache cache = io::Cache::from_environment(f.cache_dir);
  const std::string key = io::Cache::key(cli::cache_material(command, cfg, inputs));
  if (auto hit = cache.get(key)) {
    try {
      return ojson::parse(*hit);
    } catch (const ojson::exception&) {
      // unreadable entry: recompute and overwrite
    }
  }
  ojson doc = compute();
  cache.put(key, doc.dump(2) + "\n");
  return doc;
}

int cmd_validate(const Flags& f) {
  if (f.files.empty()) fail(ErrorKind::InvalidArgument, "validate needs at least one file");
  io::Workspace ws(linalg::Ring::parse(f.ring));
  for (const auto& path : f.files) ws.load_file(path);
  auto bad = ws.finalize();
  ojson doc;
  doc["command"] = "validate";
  ojson files = ojson::array();
  for (const auto& p : ws.provenance()) files.push_back({{"file", p.file}, {"sha256", p.sha256}});
  doc["files"] = files;
  ojson counts;
  for (const char* k : {"group", "family", "category", "module"}) counts[k] = ws.names(k).size();
  doc["entities"] = counts;
  doc["violations"] = bad;
  doc["valid"] = bad.empty();
  std::string table;
  for (const auto& b : bad) table += b + "\n";
  table += bad.empty() ? "valid\n" : std::to_string(bad.size()) + " violation(s)\n";
  emit(f, doc, table);
  return bad.empty() ? kOk : kInvalid;
}

int cmd_chains(const Flags& f) {
  const auto R = linalg::Ring::parse(f.ring);
  io::Workspace ws = load(f, R);
  if (f.category.empty()) fail(ErrorKind::InvalidArgument, "chains needs --category");
  ojson doc = cli::chains_document(*ws.category(f.category), f.p_max);
  std::string table = "chain bound " + std::to_string(doc.at("chain_bound").get<int>()) + "\n";
  const auto& counts = doc.at("counts");
  for (std::size_t p = 0; p < counts.size(); ++p) table += "  p=" + std::to_string(p) + ": " + std::to_string(counts[p].get<int>()) + "\n";
  for (const auto& c : doc.at("chains")) {
    table += "  ";
    bool first = true;
    for (const auto& o : c.at("objects")) {
      table += (first ? "" : " < ") + o.get<std::string>();
      first = false;
    }
    table += "   |S| = " + std::to_string(c.at("biset_size").get<int>()) + "\n";
  }
  emit(f, doc, table);
  return kOk;
}

int cmd_pair(const Flags& f, const std::string& command) {
  cli::RunConfig cfg = config_of(f);
  io::Workspace ws = load(f, cfg.ring);
  if (f.M.empty() || f.N.empty()) fail(ErrorKind::InvalidArgument, command + " needs --M and --N");
  const std::string cat = category_for(ws, f);
  const bool ext = command == "ext";
  const auto vN = ext ? catmod::Variance::Contravariant : catmod::Variance::Covariant;
  catmod::CatModule M = resolve_module(ws, f.M, cat, catmod::Variance::Contravariant, cfg.ring);
  catmod::CatModule N = resolve_module(ws, f.N, cat, vN, cfg.ring);
  if (N.base->canonical_string() == M.base->canonical_string()) N.base = M.base;
  cli::Named nm{f.M, &M}, nn{f.N, &N};
  ojson doc = cached(f, command, cfg, {f.M, f.N, M.canonical_string(), N.canonical_string()}, [&] {
    bool ok = false;
    ojson d = command == "ss" ? cli::ss_document(nm, nn, cfg, ok)
              : ext           ? cli::ext_document(nm, nn, cfg, ok)
                              : cli::tor_document(nm, nn, cfg);
    return d;
  });
  write_outputs(f, doc);
  std::string table;
  if (command == "tor") {
    for (const auto& t : doc.at("tor"))
      table += "Tor_" + std::to_string(t.at("n").get<int>()) + " = " +
               io::format_module(linalg::Canonical{cfg.ring, t.at("free_rank").get<std::size_t>(), [&] {
                 std::vector<mpz_class> v;
                 for (const auto& x : t.at("torsion")) v.push_back(x.is_string() ? mpz_class(x.get<std::string>()) : mpz_class(x.get<long>()));
                 return v;
               }()}) +
               "\n";
    emit(f, doc, table);
    return kOk;
  }
  table = cli::pages_table(doc.at("spectral_sequence"), cfg.ring, ext) + cli::report_table(doc.at("report"), cfg.ring);
  table += "verdict: " + doc.at("verdict").get<std::string>() + "\n";
  emit(f, doc, table);
  return doc.at("verdict") == "all-match" ? kOk : kMismatch;
}

groups::Family family_named(const io::Workspace& ws, const std::string& name, const std::string& group) {
  const auto& L = ws.lattice(group);
  if (name == "ALL" || name == "all") return groups::family_all(L);
  if (name == "TR" || name == "trivial") return groups::family_trivial(L);
  const auto& fe = ws.family(name);
  if (fe.group != group) fail(ErrorKind::FamilyMismatch, "family " + name + " belongs to group " + fe.group);
  return fe.family;
}

int cmd_family(const Flags& f, bool assembly_only) {
  cli::RunConfig cfg = config_of(f);
  io::Workspace ws = load(f, cfg.ring);
  if (f.group.empty() || f.family.empty()) fail(ErrorKind::InvalidArgument, "needs --group and --family");
  if (f.subfamily.empty() == !f.reduce) fail(ErrorKind::InvalidArgument, "give exactly one of --subfamily and --reduce");
  cli::FamilyQuery q;
  q.G = &ws.group(f.group);
  q.L = &ws.lattice(f.group);
  q.family = family_named(ws, f.family, f.group);
  if (!f.reduce) q.subfamily = family_named(ws, f.subfamily, f.group);
  q.reduce = f.reduce;
  q.assembly = f.assembly || assembly_only;
  std::optional<catmod::CatModule> N;
  if (!f.N.empty()) {
    N = ws.module(f.N);
    if (N->contravariant()) fail(ErrorKind::VarianceMismatch, "assembly coefficients must be covariant");
    q.N = &*N;
  }
  ojson doc = assembly_only ? cli::assembly_document(q, cfg) : cli::family_document(q, cfg);
  write_outputs(f, doc);
  std::string table;
  auto names = [](const ojson& fam) {
    std::string s;
    for (const auto& m : fam) s += (s.empty() ? "" : ", ") + m.at("object").get<std::string>();
    return "{" + s + "}";
  };
  table += "family     " + names(doc.at("family")) + "\n";
  table += "subfamily  " + names(doc.at("subfamily")) + "\n";
  if (!assembly_only) {
    table += std::string("cofinal    ") + (doc.at("cofinal").get<bool>() ? "yes" : "no") + "\n";
    for (const auto& w : doc.at("witnesses"))
      table += "  K_H for " + w.at("H").at("object").get<std::string>() + " is " + w.at("K_H").at("object").get<std::string>() + "\n";
    if (!doc.at("counterexample").is_null())
      table += "  no maximum above " + doc.at("counterexample").at("object").get<std::string>() + "\n";
    table += "reduced    " + names(doc.at("reduced_family")) + "\n";
    table += std::string("(M) ") + (doc.at("predicates").at("M").get<bool>() ? "holds" : "fails") + ", (NM) " +
             (doc.at("predicates").at("NM").get<bool>() ? "holds" : "fails") + "\n";
  }
  const char* key = assembly_only ? "degrees" : "assembly";
  if (doc.contains(key))
    for (const auto& d : doc.at(key))
      table += "  assembly q=" + std::to_string(d.at("q").get<int>()) + (d.at("iso").get<bool>() ? " iso" : " not iso") + "\n";
  emit(f, doc, table);
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-chain spectral sequence over finite categories"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Flags f;
  app.add_option("--ring", f.ring, "Z, Q or Fp:p")->capture_default_str();
  app.add_option("--nmax", f.n_max, "highest total degree")->capture_default_str();
  app.add_option("--pmax", f.p_max, "chain length bound (default: chain bound)");
  app.add_option("--qmax", f.q_max, "resolution depth (default: nmax + 1)");
  app.add_option("--rmax", f.r_max, "last page printed (E^inf is always printed)");
  app.add_option("--jobs", f.jobs, "worker threads")->capture_default_str();
  app.add_option("--cache-dir", f.cache_dir, "result cache; PCHAIN_CACHE overrides");
  app.add_option("--format", f.format, "json or table")->check(CLI::IsMember({"json", "table"}))->capture_default_str();
  app.add_option("--out", f.out_dir, "directory for page and report files");

  auto files = [&](CLI::App* sub) { sub->add_option("files", f.files, "bundle or entity files")->required(); };
  auto* validate = app.add_subcommand("validate", "check bundles and entity files");
  files(validate);
  auto* chains = app.add_subcommand("chains", "list p-chains and biset sizes");
  chains->add_option("--category", f.category)->required();
  files(chains);
  std::map<std::string, CLI::App*> pair;
  for (const char* name : {"ss", "ext", "tor"}) {
    auto* s = app.add_subcommand(name, std::string(name) == "ss"    ? "spectral sequence converging to Tor"
                                       : std::string(name) == "ext" ? "cohomological spectral sequence converging to Ext"
                                                                    : "Tor from a free resolution");
    s->add_option("--M", f.M, "contravariant module, or builtin:constant | builtin:orbit_permutation | builtin:augmentation");
    s->add_option("--N", f.N, "second module");
    s->add_option("--category", f.category, "category for builtin modules");
    files(s);
    pair[name] = s;
  }
  std::map<std::string, CLI::App*> fam;
  for (const char* name : {"family", "assembly"}) {
    auto* s = app.add_subcommand(name, std::string(name) == "family" ? "cofinality, reduction and (M)/(NM) for a family"
                                                                     : "Tor assembly across a family inclusion");
    s->add_option("--group", f.group)->required();
    s->add_option("--family", f.family, "family name, ALL or TR")->required();
    s->add_option("--subfamily", f.subfamily);
    s->add_flag("--reduce", f.reduce, "use the maximal-element reduction as subfamily");
    s->add_option("--N", f.N, "covariant coefficients on Or(G, family); default constant");
    if (std::string(name) == "family") s->add_flag("--assembly", f.assembly, "also compare Tor across the inclusion");
    files(s);
    fam[name] = s;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  }

  try {
    if (*validate) return cmd_validate(f);
    if (*chains) return cmd_chains(f);
    for (const auto& [name, s] : pair)
      if (*s) return cmd_pair(f, name);
    if (*fam["family"]) return cmd_family(f, false);
    if (*fam["assembly"]) return cmd_family(f, true);
  } catch (const Error& e) {
    std::cerr << "pchain: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "pchain: " << e.what() << "\n";
    return kInput;
  }
  return kInvalid;
}
