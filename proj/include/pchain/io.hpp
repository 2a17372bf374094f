#pragma once

#include "pchain/catmod.hpp"
#include "pchain/category.hpp"
#include "pchain/engine.hpp"
#include "pchain/groups.hpp"
#include "pchain/linalg.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pchain::io {

using json = nlohmann::json;
// output documents keep insertion order so runs serialize identically
using ojson = nlohmann::ordered_json;

using catmod::CatModule;
using fincat::CatPtr;
using linalg::Canonical;
using linalg::Matrix;
using linalg::Ring;
using linalg::Scalar;

// ------------------------------------------------------------- primitives

// Integers that fit in 64 bits become JSON numbers, everything else "a/b"
// or a decimal string.
ojson scalar_to_json(const Scalar& x);
Scalar scalar_from_json(const json& x, const Ring& R);
ojson matrix_to_json(const Matrix& A);
// A rows x cols matrix; throws ValidationError naming `what` on a shape error.
Matrix matrix_from_json(const json& rows, const Ring& R, std::size_t nrows, std::size_t ncols, const std::string& what);
ojson ring_to_json(const Ring& R);
Ring ring_from_json(const json& x);
ojson canonical_to_json(const Canonical& c);
// "Z^2 ⊕ Z/2 ⊕ Z/4", "F_2^3", "0"
std::string format_module(const Canonical& c);

// Parses text, turning syntax errors into ParseError with line and column.
json parse_text(const std::string& text, const std::string& origin);
std::string read_file(const std::string& path);

// --------------------------------------------------------------- entities

ojson category_to_json(const fincat::Category& C);
fincat::CategoryData category_data_from_json(const json& x);
ojson group_to_json(const groups::FiniteGroup& G);
groups::FiniteGroup group_from_json(const json& x);
ojson family_to_json(const groups::Lattice& L, const groups::Family& F, const std::string& group);
// "subgroups": "all" | "trivial" | [[element ids]…]; "closure": "auto"
// takes subgroup and conjugation closure, "none" rejects anything else.
groups::Family family_from_json(const json& x, const groups::FiniteGroup& G, const groups::Lattice& L);
ojson module_to_json(const CatModule& M, const std::string& category);
CatModule module_from_json(const json& x, CatPtr C, const Ring& R);

// -------------------------------------------------------------- workspace

struct Provenance {
  std::string file;
  std::string sha256;  // of the file contents
};

// Named groups, families, categories and modules read from bundles, plus
// single-entity files carrying "kind" and "name". Entities are built by
// finalize(); modules are read over the workspace ring.
class Workspace {
public:
  explicit Workspace(Ring R) : ring_(R) {}

  void load_file(const std::string& path);
  void load(const json& doc, const Provenance& from);
  // Builds every entity in dependency order; one line per violation.
  std::vector<std::string> finalize();

  const Ring& ring() const { return ring_; }
  const groups::FiniteGroup& group(const std::string& name) const;
  const groups::Lattice& lattice(const std::string& name) const;
  struct FamilyEntry {
    std::string group;
    groups::Family family;
  };
  const FamilyEntry& family(const std::string& name) const;
  CatPtr category(const std::string& name) const;
  // name of the orbit family behind a category, empty otherwise
  std::string category_family(const std::string& name) const;
  const CatModule& module(const std::string& name) const;
  const std::string& module_category(const std::string& name) const;

  std::vector<std::string> names(const std::string& kind) const;
  const std::vector<Provenance>& provenance() const { return files_; }

private:
  struct Raw {
    json body;
    std::string file;
  };
  Ring ring_;
  std::vector<Provenance> files_;
  std::map<std::string, std::map<std::string, Raw>> raw_;  // kind -> name -> body
  std::map<std::string, groups::FiniteGroup> groups_;
  std::map<std::string, groups::Lattice> lattices_;
  std::map<std::string, FamilyEntry> families_;
  std::map<std::string, CatPtr> categories_;
  std::map<std::string, std::string> category_family_;
  std::map<std::string, CatModule> modules_;
  std::map<std::string, std::string> module_category_;

  void add(const std::string& kind, const std::string& name, const json& body, const std::string& file);
};

// ---------------------------------------------------------------- results

// Entries and differentials of one page; with cohomological = true the
// stored homological indices (-p, -q) are printed as (p, q).
ojson page_to_json(const engine::Page& P, bool cohomological);
ojson pages_to_json(const engine::SpectralSequence& ss, int r_max, bool cohomological);
ojson report_to_json(const engine::ConvergenceReport& rep);

} // namespace pchain::io
