#include "doctest.h"
#include "pchain/cache.hpp"
#include "pchain/commands.hpp"
#include "pchain/error.hpp"
#include "pchain/io.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace pchain;
using linalg::Canonical;
using linalg::Ring;

namespace {

const std::string kFixtures = PCHAIN_FIXTURES;

io::Workspace load(const std::string& file, Ring R = Ring::integers()) {
  io::Workspace ws(R);
  ws.load_file(kFixtures + "/" + file);
  auto bad = ws.finalize();
  REQUIRE(bad.empty());
  return ws;
}

// Serializes every entity of ws into one bundle; orbit and other derived
// categories come back as explicit tables.
io::json to_bundle(const io::Workspace& ws) {
  io::ojson b;
  for (const auto& g : ws.names("group")) b["groups"][g] = io::group_to_json(ws.group(g));
  for (const auto& f : ws.names("family")) {
    const auto& e = ws.family(f);
    b["families"][f] = io::family_to_json(ws.lattice(e.group), e.family, e.group);
  }
  for (const auto& c : ws.names("category")) b["categories"][c] = io::category_to_json(*ws.category(c));
  for (const auto& m : ws.names("module")) b["modules"][m] = io::module_to_json(ws.module(m), ws.module_category(m));
  return io::json::parse(b.dump());
}

std::string temp_dir(const std::string& tag) {
  auto p = std::filesystem::temp_directory_path() / ("pchain-test-" + tag + "-" + std::to_string(::getpid()));
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

} // namespace

TEST_CASE("serialize then parse preserves every fixture entity") {
  for (const char* f : {"trivial.json", "arrow.json", "poset3.json", "group_z2.json", "group_z3.json", "orbit_z2.json",
                        "orbit_z4.json", "orbit_z2xz2.json", "orbit_s3.json", "families.json"}) {
    for (const Ring& R : {Ring::integers(), Ring::prime_field(2)}) {
      CAPTURE(f);
      auto a = load(f, R);
      io::Workspace b(R);
      b.load(to_bundle(a), {"round-trip", ""});
      REQUIRE(b.finalize().empty());
      for (const auto& g : a.names("group"))
        CHECK(io::sha256_hex(a.group(g).canonical_string()) == io::sha256_hex(b.group(g).canonical_string()));
      for (const auto& fam : a.names("family")) CHECK(a.family(fam).family.members == b.family(fam).family.members);
      for (const auto& c : a.names("category"))
        CHECK(io::sha256_hex(a.category(c)->canonical_string()) == io::sha256_hex(b.category(c)->canonical_string()));
      for (const auto& m : a.names("module"))
        CHECK(io::sha256_hex(a.module(m).canonical_string()) == io::sha256_hex(b.module(m).canonical_string()));
    }
  }
}

TEST_CASE("scalars and modules format as expected") {
  Ring Z = Ring::integers();
  Ring Q = Ring::rationals();
  CHECK(io::scalar_from_json(io::json(-3), Z) == -3);
  CHECK(io::scalar_from_json(io::json("2/6"), Q) == linalg::Scalar(1, 3));
  CHECK(io::scalar_to_json(linalg::Scalar(1, 3)).get<std::string>() == "1/3");
  CHECK(io::format_module(Canonical{Z, 2, {mpz_class(2)}}) == "Z^2 ⊕ Z/2");
  CHECK(io::format_module(Canonical{Z, 0, {}}) == "0");
  CHECK(io::format_module(Canonical::free(Ring::prime_field(2), 3)) == "F_2^3");
}

TEST_CASE("syntax errors carry line and column") {
  try {
    io::parse_text("{\n  \"a\": 1,\n  \"b\": ]\n}", "x.json");
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("x.json:3:") != std::string::npos);
  }
}

TEST_CASE("invalid fixtures are rejected") {
  io::Workspace ws(Ring::integers());
  ws.load_file(kFixtures + "/invalid/bad_action.json");
  auto bad = ws.finalize();
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].find("NotAFunctor") != std::string::npos);

  io::Workspace nc(Ring::integers());
  nc.load_file(kFixtures + "/invalid/not_closed.json");
  bad = nc.finalize();
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].find("conjugation") != std::string::npos);

  io::Workspace z(Ring::prime_field(3));
  z.load(io::json::parse(R"({"categories": {"C": {"poset": {"objects": ["a"], "less": []}}},
                            "modules": {"M": {"category": "C", "ring": "Z", "values": {"a": {"rank": 1}}, "action": {}}}})"),
         {"inline", ""});
  bad = z.finalize();
  REQUIRE(bad.size() == 1);
  CHECK(bad[0].find("RingMismatch") != std::string::npos);
}

TEST_CASE("sha256 and atomic writes") {
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  auto dir = temp_dir("atomic");
  auto path = dir + "/out.json";
  io::write_atomic(path, "one");
  io::write_atomic(path, "two");
  CHECK(io::read_file(path) == "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("cache lookups return what was stored") {
  auto dir = temp_dir("cache");
  io::Cache c(dir);
  auto k = io::Cache::key("material");
  CHECK(k != io::Cache::key("other material"));
  CHECK(!c.get(k));
  c.put(k, "payload");
  REQUIRE(c.get(k));
  CHECK(*c.get(k) == "payload");
  CHECK(!io::Cache().enabled());

  ::setenv("PCHAIN_CACHE", dir.c_str(), 1);
  CHECK(io::Cache::from_environment("/elsewhere").dir() == dir);
  ::unsetenv("PCHAIN_CACHE");
  CHECK(io::Cache::from_environment("/elsewhere").dir() == "/elsewhere");
  std::filesystem::remove_all(dir);
}

TEST_CASE("documents ignore the job count") {
  auto ws = load("orbit_z3.json");
  cli::RunConfig a, b;
  b.jobs = 3;
  CHECK(a.canonical_string() == b.canonical_string());
  cli::Named M{"M1", &ws.module("M1")}, N{"N1", &ws.module("N1")};
  bool ma = false, mb = false;
  auto da = cli::ss_document(M, N, a, ma);
  auto db = cli::ss_document(M, N, b, mb);
  CHECK(ma);
  CHECK(da.dump() == db.dump());
}

TEST_CASE("run configuration bounds") {
  auto ws = load("orbit_z4.json");
  cli::RunConfig cfg;
  cfg.q_max = 2;  // below n_max + 1
  CHECK_THROWS_AS(cfg.options(*ws.category("C")), Error);
  cfg.q_max = -1;
  cfg.p_max = 1;  // below the chain bound 2
  CHECK_THROWS_AS(cfg.options(*ws.category("C")), Error);
  cfg.p_max = 2;
  CHECK_NOTHROW(cfg.options(*ws.category("C")));
}
