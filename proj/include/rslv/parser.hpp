#pragma once

#include "rslv/ast.hpp"
#include "rslv/lexer.hpp"

namespace rslv::front {

struct ParseResult {
  Program program;
  std::vector<FrontError> errors;
  bool ok() const { return errors.empty(); }
};

ParseResult parse(const std::vector<Token>& tokens);

// Convenience: tokenize + parse.
ParseResult parse_text(const std::string& text);

}  // namespace rslv::front
