#pragma once

#include "rslv/ast.hpp"
#include "rslv/core.hpp"

namespace rslv {

// Deliberate defects, selectable one at a time in tests to demonstrate that
// the verification pipeline catches broken encodings. All false in
// production.
struct Mutations {
  bool drop_exhale_check = false;   // skip sufficiency checks when exhaling
  bool drop_havoc = false;          // keep stale callee state at call sites
  bool drop_coupling = false;       // never emit coupling invariants
  bool swap_holds_plus_cur = false;   // flip sign of holds under (+l, cur)
  bool swap_holds_minus_cur = false;  // flip sign of holds under (-l, cur)
};

struct EncodeResult {
  core::CProgram program;
  std::vector<FrontError> errors;
  bool ok() const { return errors.empty(); }
};

// Translates a type-checked surface program into the verification IR:
// resource kinds become predicates, trusted value declarations become
// uninterpreted functions, and each impure function body becomes a method of
// inhale/exhale/assert statements. Pure functions are inlined.
EncodeResult encode(const front::Program& p, const Mutations& mut = {});

// Lowers a surface type (never a struct; those are flattened by the caller).
core::CType lower_type(const front::Type& t);

}  // namespace rslv
