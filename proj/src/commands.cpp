#include "pchain/commands.hpp"

#include "pchain/cache.hpp"
#include "pchain/error.hpp"

#include <map>
#include <set>
#include <sstream>

namespace pchain::cli {

using catmod::CatModule;
using groups::Family;
using io::canonical_to_json;
using linalg::Canonical;

engine::Options RunConfig::options(const fincat::Category& C) const {
  if (n_max < 0) fail(ErrorKind::InvalidArgument, "n_max must be nonnegative");
  if (q_max >= 0 && q_max < n_max + 1)
    fail(ErrorKind::InvalidArgument, "q_max must be at least n_max + 1 = " + std::to_string(n_max + 1));
  const int bound = fincat::chain_bound(C);
  if (p_max >= 0 && p_max < bound)
    fail(ErrorKind::InvalidArgument, "p_max " + std::to_string(p_max) + " is below the chain bound " + std::to_string(bound));
  if (jobs < 1) fail(ErrorKind::InvalidArgument, "jobs must be positive");
  engine::Options o;
  o.n_max = n_max;
  o.p_max = p_max < 0 ? bound : std::min(p_max, bound);
  o.q_max = q_max < 0 ? n_max + 1 : q_max;
  o.jobs = jobs;
  o.strategy = strategy;
  return o;
}

std::string RunConfig::canonical_string() const {
  std::ostringstream os;
  os << "ring=" << ring.tag() << ";n=" << n_max << ";p=" << p_max << ";q=" << q_max << ";r=" << r_max
     << ";strategy=" << static_cast<int>(strategy);
  return os.str();
}

namespace {

ojson config_json(const RunConfig& cfg, const engine::Options& o) {
  ojson c;
  c["ring"] = cfg.ring.tag();
  c["n_max"] = o.n_max;
  c["p_max"] = o.p_max;
  c["q_max"] = o.q_max;
  c["r_max"] = cfg.r_max;
  return c;
}

ojson inputs_json(const Named& M, const Named& N) {
  ojson in;
  in["M"] = M.name;
  in["N"] = N.name;
  in["category_sha256"] = io::sha256_hex(M.module->base->canonical_string());
  in["M_sha256"] = io::sha256_hex(M.module->canonical_string());
  in["N_sha256"] = io::sha256_hex(N.module->canonical_string());
  return in;
}

void same_base(const CatModule& M, const CatModule& N) {
  if (M.base.get() != N.base.get() && M.base->canonical_string() != N.base->canonical_string())
    fail(ErrorKind::BaseMismatch, "M and N live on different categories");
}

ojson strings(const std::vector<std::string>& v) {
  ojson a = ojson::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

ojson subgroup_json(const groups::FiniteGroup& G, const groups::Lattice& L, int i) {
  ojson o;
  o["index"] = i;
  o["object"] = groups::orbit_object_name(G, L, i);
  o["order"] = L.subgroups[i].elements.size();
  o["elements"] = L.subgroups[i].elements;
  return o;
}

ojson family_members(const groups::FiniteGroup& G, const groups::Lattice& L, const Family& F) {
  ojson a = ojson::array();
  for (int i : F.members) a.push_back(subgroup_json(G, L, i));
  return a;
}

Canonical canonical_from(const ojson& x, const linalg::Ring& R) {
  Canonical c{R, x.at("free_rank").get<std::size_t>(), {}};
  for (const auto& t : x.at("torsion"))
    c.torsion.push_back(t.is_string() ? mpz_class(t.get<std::string>()) : mpz_class(t.get<long>()));
  return c;
}

} // namespace

ojson ss_document(const Named& M, const Named& N, const RunConfig& cfg, bool& all_match) {
  same_base(*M.module, *N.module);
  const engine::Options o = cfg.options(*M.module->base);
  engine::TorRun run = engine::run_tor(*M.module, *N.module, o);
  const auto page_problems = run.ss.check_pages();
  all_match = run.report.all_match && page_problems.empty();
  ojson doc;
  doc["command"] = "ss";
  doc["format_version"] = io::Cache::format_version;
  doc["inputs"] = inputs_json(M, N);
  doc["config"] = config_json(cfg, o);
  doc["spectral_sequence"] = io::pages_to_json(run.ss, cfg.r_max, false);
  doc["page_checks"] = strings(page_problems);
  doc["report"] = io::report_to_json(run.report);
  doc["verdict"] = all_match ? "all-match" : "mismatch";
  return doc;
}

ojson ext_document(const Named& M, const Named& N, const RunConfig& cfg, bool& all_match) {
  same_base(*M.module, *N.module);
  const engine::Options o = cfg.options(*M.module->base);
  engine::ExtRun run = engine::ext_pages(*M.module, *N.module, o);
  const auto page_problems = run.ss.check_pages();
  bool e1_ok = true;
  ojson e1 = ojson::array();
  for (const auto& c : run.e1) {
    e1_ok = e1_ok && c.match;
    ojson x;
    x["p"] = c.p;
    x["q"] = c.q;
    x["direct"] = canonical_to_json(c.direct);
    x["filtered"] = canonical_to_json(c.filtered);
    x["match"] = c.match;
    e1.push_back(std::move(x));
  }
  all_match = run.report.all_match && page_problems.empty() && e1_ok;
  ojson doc;
  doc["command"] = "ext";
  doc["format_version"] = io::Cache::format_version;
  doc["inputs"] = inputs_json(M, N);
  doc["config"] = config_json(cfg, o);
  doc["resolution_exact"] = run.resolution_exact;
  doc["spectral_sequence"] = io::pages_to_json(run.ss, cfg.r_max, true);
  doc["page_checks"] = strings(page_problems);
  doc["report"] = io::report_to_json(run.report);
  doc["e1_checked"] = run.e1_checked;
  doc["e1"] = e1;
  doc["verdict"] = all_match ? "all-match" : "mismatch";
  return doc;
}

ojson tor_document(const Named& M, const Named& N, const RunConfig& cfg) {
  same_base(*M.module, *N.module);
  if (cfg.n_max < 0) fail(ErrorKind::InvalidArgument, "n_max must be nonnegative");
  auto groups_ = catmod::tor(*M.module, *N.module, cfg.n_max, cfg.strategy);
  ojson doc;
  doc["command"] = "tor";
  doc["format_version"] = io::Cache::format_version;
  doc["inputs"] = inputs_json(M, N);
  doc["ring"] = cfg.ring.tag();
  doc["n_max"] = cfg.n_max;
  ojson t = ojson::array();
  for (std::size_t n = 0; n < groups_.size(); ++n) {
    ojson x = canonical_to_json(groups_[n]);
    x["n"] = n;
    t.push_back(std::move(x));
  }
  doc["tor"] = t;
  return doc;
}

ojson chains_document(const fincat::Category& C, int p_max) {
  const int bound = fincat::chain_bound(C);
  const int pm = p_max < 0 ? bound : p_max;
  auto chains = fincat::enumerate_chains(C, pm);
  ojson doc;
  doc["command"] = "chains";
  doc["chain_bound"] = bound;
  doc["p_max"] = pm;
  ojson counts = ojson::array();
  ojson list = ojson::array();
  for (int p = 0; p <= pm; ++p) {
    counts.push_back(p < static_cast<int>(chains.size()) ? chains[p].size() : 0);
    if (p >= static_cast<int>(chains.size())) continue;
    for (const auto& ch : chains[p]) {
      ojson x;
      x["p"] = p;
      ojson objs = ojson::array();
      for (int cls : ch) objs.push_back(C.object_name(C.rep(cls)));
      x["objects"] = objs;
      x["biset_size"] = fincat::chain_biset(C, ch).size();
      list.push_back(std::move(x));
    }
  }
  doc["counts"] = counts;
  doc["chains"] = list;
  return doc;
}

namespace {

Family subfamily_of(const FamilyQuery& q) {
  Family sub = q.reduce ? groups::reduce_family(*q.L, q.family) : q.subfamily;
  for (int i : sub.members)
    if (!q.family.has(i)) fail(ErrorKind::FamilyMismatch, "subfamily member " + std::to_string(i) + " is not in the family");
  return sub;
}

ojson assembly_degrees(const FamilyQuery& q, const Family& sub, const RunConfig& cfg, bool& iso) {
  auto Cbig = std::make_shared<const fincat::Category>(groups::orbit_category(*q.G, *q.L, q.family));
  auto Csmall = std::make_shared<const fincat::Category>(groups::orbit_category(*q.G, *q.L, sub));
  fincat::Functor F = groups::family_inclusion(sub, q.family, Csmall, Cbig);
  CatModule N = q.N ? *q.N : catmod::constant_module(Cbig, cfg.ring, catmod::Variance::Covariant);
  if (q.N) {
    if (N.base->canonical_string() != Cbig->canonical_string())
      fail(ErrorKind::BaseMismatch, "coefficient module does not live on the orbit category of the family");
    N.base = Cbig;
  }
  if (N.ring != cfg.ring) fail(ErrorKind::RingMismatch, "coefficient module over a different ring");
  auto degrees = catmod::assembly_tor(F, N, cfg.n_max);
  iso = true;
  ojson a = ojson::array();
  for (const auto& d : degrees) {
    ojson x;
    x["q"] = d.q;
    x["source"] = canonical_to_json(d.source);
    x["target"] = canonical_to_json(d.target);
    x["kernel"] = canonical_to_json(d.invariants.kernel);
    x["cokernel"] = canonical_to_json(d.invariants.cokernel);
    x["iso"] = d.invariants.is_iso();
    iso = iso && d.invariants.is_iso();
    a.push_back(std::move(x));
  }
  return a;
}

} // namespace

ojson family_document(const FamilyQuery& q, const RunConfig& cfg) {
  const Family sub = subfamily_of(q);
  auto rep = groups::cofinal_inclusion_check(*q.L, sub, q.family);
  ojson doc;
  doc["command"] = "family";
  doc["group_order"] = q.G->order();
  doc["family"] = family_members(*q.G, *q.L, q.family);
  doc["subfamily"] = family_members(*q.G, *q.L, sub);
  doc["subfamily_is_reduction"] = q.reduce;
  doc["cofinal"] = rep.cofinal;
  ojson w = ojson::array();
  for (const auto& [h, k] : rep.witness) w.push_back({{"H", subgroup_json(*q.G, *q.L, h)}, {"K_H", subgroup_json(*q.G, *q.L, k)}});
  doc["witnesses"] = w;
  doc["counterexample"] = rep.counterexample < 0 ? ojson(nullptr) : subgroup_json(*q.G, *q.L, rep.counterexample);
  doc["reduced_family"] = family_members(*q.G, *q.L, groups::reduce_family(*q.L, q.family));
  doc["predicates"] = {{"M", groups::check_M(*q.L, q.family)}, {"NM", groups::check_NM(*q.L, q.family)}};
  if (q.assembly) {
    bool iso = false;
    doc["assembly"] = assembly_degrees(q, sub, cfg, iso);
    doc["assembly_iso"] = iso;
  }
  return doc;
}

ojson assembly_document(const FamilyQuery& q, const RunConfig& cfg) {
  const Family sub = subfamily_of(q);
  bool iso = false;
  ojson doc;
  doc["command"] = "assembly";
  doc["ring"] = cfg.ring.tag();
  doc["n_max"] = cfg.n_max;
  doc["family"] = family_members(*q.G, *q.L, q.family);
  doc["subfamily"] = family_members(*q.G, *q.L, sub);
  doc["degrees"] = assembly_degrees(q, sub, cfg, iso);
  doc["iso"] = iso;
  return doc;
}

std::string cache_material(const std::string& command, const RunConfig& cfg, const std::vector<std::string>& inputs) {
  std::string m = command + "\n" + cfg.canonical_string() + "\n";
  for (const auto& s : inputs) m += io::sha256_hex(s) + "\n";
  return m;
}

namespace {

std::size_t display_width(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char ch : s) n += (ch & 0xC0) != 0x80;
  return n;
}

std::string pad(const std::string& s, std::size_t w) {
  const std::size_t d = display_width(s);
  return s + std::string(w > d ? w - d : 0, ' ');
}

void page_table(std::ostringstream& os, const ojson& page, const std::string& title, const linalg::Ring& R) {
  std::map<std::pair<int, int>, std::string> cell;
  std::set<int> ps, qs;
  for (const auto& e : page.at("entries")) {
    const int p = e.at("p").get<int>(), q = e.at("q").get<int>();
    cell[{p, q}] = io::format_module(canonical_from(e, R));
    ps.insert(p);
    qs.insert(q);
  }
  os << title << "\n";
  if (ps.empty()) {
    os << "  (no entries)\n";
    return;
  }
  std::size_t w = 1;
  for (const auto& [k, v] : cell) w = std::max(w, display_width(v));
  os << "  " << pad("q\\p", 5);
  for (int p : ps) os << " " << pad(std::to_string(p), w);
  os << "\n";
  for (auto it = qs.rbegin(); it != qs.rend(); ++it) {
    os << "  " << pad(std::to_string(*it), 5);
    for (int p : ps) {
      auto c = cell.find({p, *it});
      os << " " << pad(c == cell.end() ? "." : c->second, w);
    }
    os << "\n";
  }
  auto is_zero = [](const ojson& m) {
    for (const auto& row : m)
      for (const auto& x : row)
        if (!x.is_number_integer() || x.get<long>() != 0) return false;
    return true;
  };
  bool nonzero = false;
  for (const auto& d : page.at("differentials")) nonzero = nonzero || !is_zero(d.at("matrix"));
  if (nonzero) os << "  (nonzero differentials present)\n";
}

} // namespace

std::string pages_table(const ojson& pages, const linalg::Ring& R, bool cohomological) {
  std::ostringstream os;
  const std::string E = cohomological ? "E_" : "E^";
  for (const auto& P : pages.at("pages")) page_table(os, P, E + std::to_string(P.at("r").get<int>()), R);
  page_table(os, pages.at("infinity"), E + "inf (stable from r = " + std::to_string(pages.at("stable_from").get<int>()) + ")", R);
  return os.str();
}

std::string report_table(const ojson& report, const linalg::Ring& R) {
  std::ostringstream os;
  os << "certified total degrees 0.." << report.at("certified_max").get<int>() << "\n";
  for (const auto& d : report.at("degrees")) {
    os << "  n=" << d.at("n").get<int>() << "  oracle " << io::format_module(canonical_from(d.at("oracle"), R)) << "  total "
       << io::format_module(canonical_from(d.at("total"), R)) << (d.at("eps_iso").get<bool>() ? "" : "  [total differs]") << "\n";
    for (const auto& c : d.at("cells"))
      os << "    (" << c.at("p").get<int>() << "," << c.at("q").get<int>() << ") "
         << io::format_module(canonical_from(c.at("einf"), R)) << (c.at("match").get<bool>() ? "" : "  [mismatch]") << "\n";
  }
  os << (report.at("all_match").get<bool>() ? "all cells match" : "mismatch at " + report.at("first_mismatch").get<std::string>()) << "\n";
  return os.str();
}

} // namespace pchain::cli
