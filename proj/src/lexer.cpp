#include "rslv/lexer.hpp"

#include <cctype>
#include <map>

namespace rslv::front {

namespace {

const std::map<std::string, Tok>& keywords() {
  static const std::map<std::string, Tok> kw = {
      {"struct", Tok::KwStruct}, {"impl", Tok::KwImpl},
      {"fn", Tok::KwFn},         {"let", Tok::KwLet},
      {"if", Tok::KwIf},         {"else", Tok::KwElse},
      {"assert", Tok::KwAssert}, {"true", Tok::KwTrue},
      {"false", Tok::KwFalse},   {"old", Tok::KwOld},
      {"holds", Tok::KwHolds},   {"resource", Tok::KwResource},
      {"forall", Tok::KwForall}, {"produce", Tok::KwProduce},
      {"consume", Tok::KwConsume}, {"self", Tok::KwSelf},
      {"mut", Tok::KwMut},       {"Map", Tok::KwMap},
  };
  return kw;
}

}  // namespace

LexResult tokenize(const std::string& text) {
  LexResult out;
  size_t i = 0;
  int line = 1, col = 1;
  auto here = [&] { return Span{line, col}; };
  auto advance = [&](size_t n) {
    for (size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto push = [&](Tok k, Span sp, std::string t) {
    out.tokens.push_back({k, std::move(t), 0, sp});
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    // line comments
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Span sp = here();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) ||
              text[j] == '_'))
        ++j;
      std::string word = text.substr(i, j - i);
      advance(j - i);
      auto it = keywords().find(word);
      push(it != keywords().end() ? it->second : Tok::Ident, sp, word);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[j])))
        ++j;
      std::string num = text.substr(i, j - i);
      advance(j - i);
      Token t{Tok::Int, num, std::stoll(num), sp};
      out.tokens.push_back(t);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (two('=', '=') && i + 2 < text.size() && text[i + 2] == '>') {
      advance(3);
      push(Tok::Implies, sp, "==>");
    } else if (two('=', '=')) {
      advance(2);
      push(Tok::EqEq, sp, "==");
    } else if (two('!', '=')) {
      advance(2);
      push(Tok::NotEq, sp, "!=");
    } else if (two('<', '=')) {
      advance(2);
      push(Tok::Le, sp, "<=");
    } else if (two('>', '=')) {
      advance(2);
      push(Tok::Ge, sp, ">=");
    } else if (two('&', '&')) {
      advance(2);
      push(Tok::AndAnd, sp, "&&");
    } else if (two('|', '|')) {
      advance(2);
      push(Tok::OrOr, sp, "||");
    } else if (two('-', '>')) {
      advance(2);
      push(Tok::Arrow, sp, "->");
    } else {
      Tok k = Tok::Error;
      switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case '[': k = Tok::LBracket; break;
        case ']': k = Tok::RBracket; break;
        case ',': k = Tok::Comma; break;
        case ';': k = Tok::Semi; break;
        case ':': k = Tok::Colon; break;
        case '#': k = Tok::Hash; break;
        case '!': k = Tok::Bang; break;
        case '&': k = Tok::Amp; break;
        case '.': k = Tok::Dot; break;
        case '|': k = Tok::Pipe; break;
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '=': k = Tok::Assign; break;
        case '<': k = Tok::Lt; break;
        case '>': k = Tok::Gt; break;
        default: break;
      }
      std::string t(1, c);
      advance(1);
      if (k == Tok::Error) {
        out.errors.push_back({"illegal character '" + t + "'", sp});
      }
      push(k, sp, t);
    }
  }
  out.tokens.push_back({Tok::Eof, "", 0, here()});
  return out;
}

}  // namespace rslv::front
