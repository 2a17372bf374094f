// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "oracles.hpp"
#include "pchain/commands.hpp"
#include "pchain/engine.hpp"
#include "pchain/error.hpp"
#include "pchain/io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace pchain;
using linalg::Canonical;
using linalg::Matrix;
using linalg::Ring;
using linalg::Scalar;

namespace {

const std::vector<std::string> kInstances = {"trivial",   "arrow",    "poset3",   "group_z2",    "group_z3",
                                             "orbit_z2",  "orbit_z3", "orbit_z4", "orbit_z2xz2", "orbit_s3"};

std::string fixtures;

struct Instance {
  std::string name;
  std::unique_ptr<io::Workspace> ws;
  const catmod::CatModule& mod(const std::string& m) const { return ws->module(m); }
  fincat::CatPtr cat() const { return ws->category("C"); }
};

Instance load(const std::string& name, const Ring& R) {
  Instance in{name, std::make_unique<io::Workspace>(R)};
  in.ws->load_file(fixtures + "/" + name + ".json");
  auto bad = in.ws->finalize();
  if (!bad.empty()) throw std::runtime_error(name + ": " + bad.front());
  return in;
}

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.ok) ++failures;
  std::printf("%s %2d %s (%.1fs)%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs, o.detail.empty() ? "" : ": ",
              o.detail.c_str());
  std::fflush(stdout);
}

const std::vector<std::pair<std::string, std::string>> kPairs = {{"Zc", "Zco"}, {"Zc", "N1"}, {"M1", "Zco"}, {"M1", "N1"}};

std::string label(const std::string& inst, const Ring& R, const std::string& M, const std::string& N) {
  return inst + "/" + R.tag() + "/" + M + "," + N;
}

std::vector<Matrix> trivial_action(const groups::FiniteGroup& G, const Ring& R) {
  return std::vector<Matrix>(G.order(), Matrix::identity(R, 1));
}

// Exact determinant by elimination over Q.
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

Matrix random_matrix(std::mt19937& rng, const Ring& Z, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Matrix A(Z, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) A.set(i, j, Scalar(dist(rng)));
  return A;
}

Matrix random_unimodular(std::mt19937& rng, const Ring& Z, std::size_t n) {
  Matrix U = Matrix::identity(Z, n);
  std::uniform_int_distribution<int> idx(0, static_cast<int>(n) - 1), coef(-2, 2);
  for (int k = 0; k < 3 * static_cast<int>(n); ++k) {
    int a = idx(rng), b = idx(rng);
    if (a != b) U.row_addmul(a, b, Scalar(coef(rng)));
  }
  return U;
}

// Criteria 1 and 11 share one pass: every run is made at jobs 1 and jobs 8.
struct SuiteResult {
  Outcome convergence, determinism;
  double worst_instance = 0, total = 0;
  int runs = 0;
};

SuiteResult run_suite() {
  SuiteResult res;
  for (const Ring& R : {Ring::integers(), Ring::prime_field(2)}) {
    for (const auto& name : kInstances) {
      auto in = load(name, R);
      double inst_secs = 0;
      for (const auto& [m, n] : kPairs) {
        cli::RunConfig cfg;
        cfg.ring = R;
        cfg.n_max = 3;
        cli::Named M{m, &in.mod(m)}, N{n, &in.mod(n)};
        bool match1 = false, match8 = false;
        auto t0 = std::chrono::steady_clock::now();
        auto d1 = cli::ss_document(M, N, cfg, match1);
        inst_secs += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        cfg.jobs = 8;
        auto d8 = cli::ss_document(M, N, cfg, match8);
        ++res.runs;
        if (!match1) res.convergence.fail(label(name, R, m, n) + " first mismatch " + d1["report"].value("first_mismatch", std::string()));
        if (d1["report"]["certified_max"].get<int>() < 3) res.convergence.fail(label(name, R, m, n) + " certified below 3");
        if (d1.dump(2) != d8.dump(2)) res.determinism.fail(label(name, R, m, n) + " differs between jobs 1 and 8");
      }
      res.worst_instance = std::max(res.worst_instance, inst_secs);
      res.total += inst_secs;
    }
  }
  return res;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  app.add_option("--fixtures", fixtures, "fixture directory")->required();
  CLI11_PARSE(app, argc, argv);

  const Ring Z = Ring::integers();
  SuiteResult suite;
  bool suite_ran = false;

  report(1, "oracle convergence, rings Z and F_2, total degree <= 3", [&] {
    suite = run_suite();
    suite_ran = true;
    Outcome o = suite.convergence;
    if (suite.worst_instance > 60) o.fail("an instance took " + std::to_string(suite.worst_instance) + "s");
    if (suite.total > 900) o.fail("suite took " + std::to_string(suite.total) + "s");
    if (o.ok) {
      std::ostringstream s;
      s.precision(2);
      s << std::fixed << suite.runs << " runs, slowest instance " << suite.worst_instance << "s";
      o.detail = s.str();
    }
    return o;
  });

  report(2, "E1 matches group-ring Tor summand by summand, ring Z, q <= 3", [&] {
    Outcome o;
    std::size_t checks = 0;
    for (const auto& name : kInstances) {
      auto in = load(name, Z);
      if (!in.cat()->is_left_free()) {
        o.fail(name + " is not left-free");
        continue;
      }
      for (const auto& [m, n] : kPairs) {
        engine::Options opt;
        opt.n_max = 3;
        auto run = engine::run_tor(in.mod(m), in.mod(n), opt);
        auto rep = engine::verify_e1(run, opt);
        checks += rep.checks.size();
        if (rep.checks.empty()) o.fail(label(name, Z, m, n) + " produced no checks");
        for (const auto& c : rep.checks)
          if (!c.match) o.fail(label(name, Z, m, n) + " at (" + std::to_string(c.p) + "," + std::to_string(c.q) + ")");
      }
    }
    if (o.ok) o.detail = std::to_string(checks) + " summand and column checks";
    return o;
  });

  report(3, "one-object Z/2 collapses to (Z, Z/2, 0, Z/2)", [&] {
    Outcome o;
    auto in = load("group_z2", Z);
    engine::Options opt;
    opt.n_max = 3;
    auto run = engine::run_tor(in.mod("Zc"), in.mod("Zco"), opt);
    auto G = in.ws->group("G");
    auto expect = oracle::bar_tor(G, Z, trivial_action(G, Z), trivial_action(G, Z), 3);
    const std::vector<Canonical> literal = {Canonical::free(Z, 1), Canonical{Z, 0, {mpz_class(2)}}, Canonical{Z, 0, {}},
                                            Canonical{Z, 0, {mpz_class(2)}}};
    if (expect != literal) o.fail("bar oracle disagrees with the expected column");
    if (!run.report.all_match) o.fail("convergence mismatch");
    for (const auto& page : run.ss.pages)
      for (const auto& e : page.entries)
        if (e.p != 0 && !e.module.canonical().is_zero()) o.fail("nonzero entry outside column 0 on E" + std::to_string(page.r));
    for (int q = 0; q <= 3; ++q) {
      const auto* e = run.ss.infinity().find(0, q);
      if (e == nullptr || e->module.canonical() != expect[q])
        o.fail("E^inf(0," + std::to_string(q) + ") is " + (e ? io::format_module(e->module.canonical()) : "missing"));
    }
    return o;
  });

  report(4, "over Q, E1 vanishes above row 0 and E2 = E^inf", [&] {
    Outcome o;
    const Ring Q = Ring::rationals();
    for (const auto& name : kInstances) {
      auto in = load(name, Q);
      for (const auto& [m, n] : kPairs) {
        engine::Options opt;
        opt.n_max = 3;
        auto run = engine::run_tor(in.mod(m), in.mod(n), opt);
        if (!run.report.all_match) o.fail(label(name, Q, m, n) + " convergence mismatch");
        for (const auto& e : run.ss.pages.front().entries)
          if (e.q > 0 && !e.module.canonical().is_zero())
            o.fail(label(name, Q, m, n) + " E1(" + std::to_string(e.p) + "," + std::to_string(e.q) + ") nonzero");
        if (run.ss.stable_from > 2) o.fail(label(name, Q, m, n) + " stable only from E" + std::to_string(run.ss.stable_from));
      }
    }
    return o;
  });

  report(5, "final object: Tor_0 = N(c0), Tor_q = 0 for 1 <= q <= 3", [&] {
    Outcome o;
    int seen = 0;
    for (const auto& name : kInstances) {
      auto in = load(name, Z);
      int c0 = in.cat()->final_object();
      if (c0 < 0) continue;
      ++seen;
      for (const std::string n : {"Zco", "N1"}) {
        engine::Options opt;
        opt.n_max = 3;
        const auto& N = in.mod(n);
        auto run = engine::run_tor(in.mod("Zc"), N, opt);
        if (!run.report.all_match) o.fail(label(name, Z, "Zc", n) + " convergence mismatch");
        Canonical at_final = N.value[c0].canonical();
        const auto& deg = run.report.degrees;
        if (deg.size() < 4) {
          o.fail(label(name, Z, "Zc", n) + " fewer than 4 degrees");
          continue;
        }
        if (deg[0].total != at_final || deg[0].oracle != at_final)
          o.fail(label(name, Z, "Zc", n) + " Tor_0 = " + io::format_module(deg[0].total) + ", N(c0) = " + io::format_module(at_final));
        for (int q = 1; q <= 3; ++q)
          if (!deg[q].total.is_zero() || !deg[q].oracle.is_zero())
            o.fail(label(name, Z, "Zc", n) + " Tor_" + std::to_string(q) + " nonzero");
      }
    }
    if (seen == 0) o.fail("no fixture with a final object");
    if (o.ok) o.detail = std::to_string(seen) + " categories with a final object";
    return o;
  });

  report(6, "family reduction on S3 is an assembly iso; V4 proper subgroups is not cofinal", [&] {
    Outcome o;
    io::Workspace ws(Z);
    ws.load_file(fixtures + "/families.json");
    auto bad = ws.finalize();
    if (!bad.empty()) throw std::runtime_error(bad.front());
    cli::RunConfig cfg;
    cfg.n_max = 3;

    cli::FamilyQuery s3;
    s3.G = &ws.group("S3");
    s3.L = &ws.lattice("S3");
    s3.family = ws.family("S3_ALL").family;
    s3.reduce = true;
    s3.assembly = true;
    auto a = cli::family_document(s3, cfg);
    if (!a["cofinal"].get<bool>()) o.fail("S3 reduction not cofinal");
    if (!a["assembly_iso"].get<bool>()) o.fail("S3 assembly not an iso in degrees <= 3");
    if (a["assembly"].size() < 4) o.fail("S3 assembly has fewer than 4 degrees");

    cli::FamilyQuery v4;
    v4.G = &ws.group("V4");
    v4.L = &ws.lattice("V4");
    v4.family = ws.family("V4_ALL").family;
    v4.subfamily = ws.family("V4_PROPER").family;
    v4.assembly = true;
    auto b = cli::family_document(v4, cfg);
    bool not_cofinal = !b["cofinal"].get<bool>() && !b["counterexample"].is_null() &&
                       b["counterexample"]["order"].get<std::size_t>() == v4.G->order();
    bool degree0_differs = !b["assembly"].at(0)["iso"].get<bool>();
    if (!not_cofinal && !degree0_differs) o.fail("V4 proper inclusion neither detected by cofinality nor in degree 0");
    if (o.ok) o.detail = std::string("V4: cofinal false with witness G") + (degree0_differs ? ", degree 0 not iso" : ", degree 0 iso");
    return o;
  });

  report(7, "two-column sequence exact on Or(Z/p), p = 2, 3, 5; Or(Z/4) refused", [&] {
    Outcome o;
    for (const std::string name : {"orbit_z2", "orbit_z3", "orbit_z5"}) {
      auto in = load(name, Z);
      engine::Options opt;
      opt.n_max = 4;
      auto run = engine::run_tor(in.mod("Zc"), in.mod("Zco"), opt);
      opt.n_max = 3;
      auto les = engine::two_column_les(run, opt);
      if (!les.exact) o.fail(name + " not exact");
      for (const auto& node : les.nodes)
        if (!node.checked || !node.exact) o.fail(name + " node " + node.name + " q=" + std::to_string(node.q));
    }
    auto in = load("orbit_z4", Z);
    engine::Options opt;
    auto run = engine::run_tor(in.mod("Zc"), in.mod("Zco"), opt);
    try {
      engine::two_column_les(run, opt);
      o.fail("orbit_z4 accepted");
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotTwoColumn) o.fail(std::string("orbit_z4 raised ") + e.what());
    }
    return o;
  });

  report(8, "d1 face 0 on Or(Z/2) equals the partial assembly, q <= 3", [&] {
    Outcome o;
    auto in = load("orbit_z2", Z);
    engine::Options opt;
    opt.n_max = 3;
    auto run = engine::run_tor(in.mod("Zc"), in.mod("Zco"), opt);
    if (run.complex.chains.size() < 2 || run.complex.chains[1].size() != 1) {
      o.fail("expected a single 1-chain");
      return o;
    }
    auto rep = engine::d1_components(run, 1, 0, opt);
    if (!rep.alternating_sum_matches) o.fail("alternating sum differs from the page differential");
    const engine::D1Component* c0 = nullptr;
    for (const auto& c : rep.components)
      if (c.i == 0) c0 = &c;
    if (c0 == nullptr) {
      o.fail("no i = 0 component");
      return o;
    }
    if (c0->direct_invariants.size() < 4 || c0->filtered_invariants.size() < 4) o.fail("fewer than 4 degrees");
    for (std::size_t q = 0; q < std::min<std::size_t>(4, c0->direct_invariants.size()); ++q)
      if (q >= c0->filtered_invariants.size() || !(c0->direct_invariants[q] == c0->filtered_invariants[q]))
        o.fail("q=" + std::to_string(q) + " invariants differ");
    return o;
  });

  report(9, "non-degenerate tilde-nerve simplices = balanced product counts, p <= 3", [&] {
    Outcome o;
    std::size_t cells = 0;
    for (const auto& name : kInstances) {
      auto in = load(name, Z);
      auto C = in.cat();
      fincat::TildeNerve nerve(C, 3);
      auto chains = fincat::enumerate_chains(*C, 3);
      for (int p = 0; p <= 3; ++p)
        for (int s = 0; s < C->num_objects(); ++s)
          for (int t = 0; t < C->num_objects(); ++t) {
            std::size_t expect = 0;
            if (p < static_cast<int>(chains.size()))
              for (const auto& c : chains[p]) expect += oracle::balanced_product_count(*C, fincat::chain_biset(*C, c), s, t);
            ++cells;
            if (nerve.simplices(p, s, t).size() != expect)
              o.fail(name + " p=" + std::to_string(p) + " (" + C->object_name(s) + "," + C->object_name(t) + ")");
          }
    }
    if (o.ok) o.detail = std::to_string(cells) + " (p, s, t) cells";
    return o;
  });

  report(10, "Smith form on 500 random matrices; subquotients invariant under basis change", [&] {
    Outcome o;
    std::mt19937 rng(20261014);
    for (int t = 0; t < 500; ++t) {
      std::size_t r = 1 + rng() % 12, c = 1 + rng() % 12;
      Matrix A = random_matrix(rng, Z, r, c, -9, 9);
      auto sf = linalg::smith_normal_form(A);
      if (!(sf.U * A * sf.V == sf.S)) o.fail("U A V != S at trial " + std::to_string(t));
      if (abs(det(sf.U)) != 1 || abs(det(sf.V)) != 1) o.fail("transform not unimodular at trial " + std::to_string(t));
      for (std::size_t i = 0; i < std::min(r, c); ++i)
        for (std::size_t j = 0; j < std::min(r, c); ++j)
          if (i != j && sf.S.at(i, j) != 0) o.fail("S not diagonal at trial " + std::to_string(t));
      for (std::size_t i = 0; i + 1 < sf.rank; ++i)
        if (!mpz_divisible_p(sf.S.at(i + 1, i + 1).get_num_mpz_t(), sf.S.at(i, i).get_num_mpz_t()))
          o.fail("divisibility fails at trial " + std::to_string(t));
    }
    for (int t = 0; t < 200; ++t) {
      std::size_t n = 2 + rng() % 8;
      Matrix Zg = random_matrix(rng, Z, n, 1 + rng() % n, -3, 3);
      Matrix B = Zg * random_matrix(rng, Z, Zg.cols(), rng() % 5, -4, 4);
      auto q = linalg::SubQuotient::compute(Z, n, Zg, B);
      Matrix U = random_unimodular(rng, Z, n);
      auto q2 = linalg::SubQuotient::compute(Z, n, U * Zg, U * B);
      if (q2.canonical() != q.canonical()) o.fail("subquotient changed at trial " + std::to_string(t));
    }
    return o;
  });

  report(11, "criterion-1 documents byte-identical at jobs 1 and jobs 8", [&] {
    if (!suite_ran) suite = run_suite();
    Outcome o = suite.determinism;
    if (o.ok) o.detail = std::to_string(suite.runs) + " documents compared";
    return o;
  });

  return failures == 0 ? 0 : 1;
}
