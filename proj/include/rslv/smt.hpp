#pragma once

#include "rslv/vcgen.hpp"

namespace rslv {

enum class SmtVerdict { Proved, Refuted, Unknown, SolverError };

struct SmtResult {
  SmtVerdict verdict = SmtVerdict::SolverError;
  std::string detail;  // raw solver output for unknown/error cases
};

struct SolverConfig {
  std::string command;        // shell command; reads SMT-LIB2 on stdin
  double timeout_secs = 10;   // per obligation; exceeded -> Unknown
  int jobs = 0;               // 0 = hardware concurrency
  std::string dump_dir;       // when set, write every script here
};

// Renders one self-contained SMT-LIB2 script: declarations, the path
// assumptions, and the negated goal; unsat means the obligation holds.
std::string to_smt2(const core::CProgram& decls, const Obligation& ob);

// Runs `cfg.command` in a shell with `script` on stdin.
SmtResult run_solver(const SolverConfig& cfg, const std::string& script);

// Checks the obligations of all methods in parallel; results are indexed
// like the flattened obligation list of `vcs`.
std::vector<std::vector<SmtResult>> check_all(const core::CProgram& decls,
                                              const std::vector<MethodVcs>& vcs,
                                              const SolverConfig& cfg);

// Priority: explicit value > RSLV_SMT_CMD environment variable > a `z3`
// binary on PATH > the bundled solver shim.
std::string resolve_solver_command(const std::string& explicit_cmd);

}  // namespace rslv
