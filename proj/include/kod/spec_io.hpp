// Reading manifold, almost complex structure, family and sample files.
//
// All files are JSON with string entries in the expression grammar. Parsing
// is strict: unknown keys are errors, and semantic checks report every
// problem found rather than the first one.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "kod/acs.hpp"
#include "kod/family.hpp"

namespace kod {

struct AcsSpec {
  std::string manifold;
  PolyMatrix J;
};

ManifoldSpec parse_manifold(const std::string& text);
AcsSpec parse_acs(const std::string& text, const ManifoldSpec& m);
FamilySpec parse_family(const std::string& text);
std::vector<Scalar> parse_samples(const std::string& text);

/// sigma and epsilon for the generalized Calabi-Yau check. Terms are keyed
/// by wedges of basis names: e1^e2 for sigma (frame basis), phi1^phi2 and
/// phibar1 for epsilon (complex basis).
struct GcyInput {
  Form sigma;
  Form epsilon;
};

GcyInput parse_gcy(const std::string& text, const AcsData& acs);
/// "builtin" selects the file shipped for the manifold.
GcyInput load_gcy(const std::string& ref, const AcsData& acs);

/// JSON text that parse_manifold / parse_acs read back to the same data.
std::string manifold_json(const ManifoldSpec& m);
std::string acs_json(const ManifoldSpec& m, const PolyMatrix& J);

/// Built-in data files keyed by "<kind>/<name>", kind one of manifolds, acs,
/// families, samples.
const std::map<std::string, std::string>& builtin_files();

/// Text of a built-in (when `ref` names one of the given kind) or of the file
/// at path `ref`.
std::string load_text(const std::string& kind, const std::string& ref);

ManifoldSpec load_manifold(const std::string& ref);
/// "builtin" and "standard" select the structure shipped with the manifold.
AcsData load_acs(const ManifoldSpec& m, const std::string& ref);
FamilySpec load_family(const std::string& ref);
std::vector<Scalar> load_samples(const std::string& ref);

}  // namespace kod
