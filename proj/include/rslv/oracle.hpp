#pragma once

#include "rslv/core.hpp"

namespace rslv {

// The oracle executes methods concretely over small finite domains,
// enumerating every input (and every value at each havoc), and checks each
// obligation by evaluation. It shares no code with the symbolic pipeline
// beyond the IR itself, so a violation it finds in a method the prover
// accepted means one of the two is wrong.
struct OracleOptions {
  int domain_size = 2;        // elements per uninterpreted sort
  int amount_max = 3;         // integers range over -1..amount_max
  long long budget = 20'000'000;  // evaluation steps before giving up
  long long uf_budget = 4096;     // max function-table combinations
};

enum class OracleVerdict { NoViolation, Violation, Incomplete };

struct OracleFinding {
  OracleVerdict verdict = OracleVerdict::NoViolation;
  ObKind kind = ObKind::AssertFailure;  // Violation only
  Span span;
  std::string note;
  std::string witness;  // inputs that triggered the violation
  std::string reason;   // Incomplete only
};

OracleFinding oracle_check_method(const core::CProgram& p,
                                  const core::CMethod& m,
                                  const OracleOptions& opts);

std::vector<std::pair<std::string, OracleFinding>> oracle_check(
    const core::CProgram& p, const OracleOptions& opts);

}  // namespace rslv
