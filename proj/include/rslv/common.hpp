#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rslv {

// Source location, 1-based. line == 0 means "no location".
struct Span {
  int line = 0;
  int col = 0;
  bool valid() const { return line > 0; }
};

enum class BinOp { Add, Sub, Mul, Eq, Ne, Lt, Le, Gt, Ge, And, Or, Implies };
enum class UnOp { Neg, Not };

const char* bin_op_str(BinOp op);

// Classification of proof obligations and of the diagnostics derived
// from them.
enum class ObKind {
  InsufficientResource,
  AssertFailure,
  PostconditionFailure,
  PreconditionAtCallFailure,
  CouplingInvariantFailure,
  NegativeAmount,
  Leak,  // only emitted under --warn-leaks; never fails a method
};

const char* ob_kind_str(ObKind k);
std::optional<ObKind> ob_kind_from_str(const std::string& s);

struct Diagnostic {
  ObKind kind;
  std::string message;
  Span span;
  std::string note;   // extra context, e.g. "call to withdraw"
  std::string model;  // solver model text for refuted obligations
  bool warning = false;
};

// A compile-time error (lexing, parsing, resolution, typing).
struct FrontError {
  std::string message;
  Span span;
};

}  // namespace rslv
