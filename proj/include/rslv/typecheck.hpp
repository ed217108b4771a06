#pragma once

#include "rslv/ast.hpp"

namespace rslv::front {

struct CheckResult {
  std::vector<FrontError> errors;
  bool ok() const { return errors.empty(); }
};

// Resolves names, infers expression types in place, reclassifies generic
// calls into MapGet / resource constructors, and enforces the well-formedness
// rules of the surface language:
//  - resource(..) only in positive conjunctive spec positions
//  - old(..) not in preconditions, never nested
//  - holds/old/resource never in pure function bodies or branch conditions
//  - pure functions form a call DAG, return a value, and are side-effect free
//  - trusted declarations have no body; everything else has one
//  - mutable references only to structs; calls pass plain variables for them
CheckResult typecheck(Program& p);

// True if f may be called inside expressions (pure body or trusted
// uninterpreted function).
bool spec_callable(const FunctionDecl& f);

}  // namespace rslv::front
