#pragma once

#include <string>
#include <vector>

#include "rslv/common.hpp"

namespace rslv::front {

enum class Tok {
  Ident,
  Int,
  // keywords
  KwStruct, KwImpl, KwFn, KwLet, KwIf, KwElse, KwAssert, KwTrue, KwFalse,
  KwOld, KwHolds, KwResource, KwForall, KwProduce, KwConsume, KwSelf, KwMut,
  KwMap,
  // punctuation
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Semi, Colon, Arrow, Hash, Bang, Amp, Dot, Pipe,
  Plus, Minus, Star, Assign, EqEq, NotEq, Lt, Le, Gt, Ge,
  AndAnd, OrOr, Implies,
  Error,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  int64_t int_val = 0;
  Span span;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by Eof
  std::vector<FrontError> errors;
};

LexResult tokenize(const std::string& text);

}  // namespace rslv::front
