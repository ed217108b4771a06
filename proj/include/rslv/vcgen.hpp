#pragma once

#include "rslv/core.hpp"
#include "rslv/encoder.hpp"

namespace rslv {

// A single proof obligation: `goal` must hold under the conjunction of
// `path`. Free symbols (including the resource-heap snapshots) are listed in
// `symbols`; sorts and uninterpreted functions come from the CProgram.
struct Obligation {
  std::string method;
  int index = 0;  // deterministic emission order within the method
  ObKind kind = ObKind::AssertFailure;
  Span span;
  std::string note;
  core::CExprP goal;
  std::vector<core::CExprP> path;
  std::map<std::string, core::CType> symbols;
  bool warning = false;  // leak checks never fail a method
};

struct VcOptions {
  bool check_leaks = false;
  Mutations mut;  // only drop_exhale_check applies here
};

struct MethodVcs {
  std::string method;
  Span span;
  std::vector<Obligation> obligations;
};

// Symbolically executes each method: inhale/exhale walk their assertion
// left-to-right and update the per-predicate resource heaps as they pass
// each acc(..) conjunct; labels snapshot the state for old[..]; branches
// fork (no joins). Obligations are emitted in execution order.
std::vector<MethodVcs> vcgen(const core::CProgram& p,
                             const VcOptions& opts = {});

}  // namespace rslv
