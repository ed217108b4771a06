#include "rslv/parser.hpp"

#include <stdexcept>

namespace rslv::front {

namespace {

struct ParseError : std::runtime_error {
  Span span;
  ParseError(std::string msg, Span sp)
      : std::runtime_error(std::move(msg)), span(sp) {}
};

struct Attr {
  std::string name;
  ExprP arg;  // null for marker attributes like #[pure]
  Span span;
};

class Parser {
 public:
  explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

  Program parse_program() {
    Program p;
    while (!at(Tok::Eof)) parse_item(p);
    return p;
  }

 private:
  const std::vector<Token>& toks_;
  size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  const Token& next() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError("expected " + expected + ", found '" +
                         (cur().kind == Tok::Eof ? "<eof>" : cur().text) + "'",
                     cur().span);
  }
  const Token& expect(Tok k, const std::string& what) {
    if (!at(k)) fail(what);
    return next();
  }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }

  // -- attributes -----------------------------------------------------------

  std::vector<Attr> parse_attrs() {
    std::vector<Attr> attrs;
    while (at(Tok::Hash)) {
      Span sp = next().span;
      expect(Tok::LBracket, "'['");
      std::string name = expect(Tok::Ident, "attribute name").text;
      Attr a{name, nullptr, sp};
      if (accept(Tok::LParen)) {
        a.arg = parse_expr();
        expect(Tok::RParen, "')'");
      }
      expect(Tok::RBracket, "']'");
      attrs.push_back(std::move(a));
    }
    return attrs;
  }

  static bool has_attr(const std::vector<Attr>& attrs, const std::string& n) {
    for (auto& a : attrs)
      if (a.name == n) return true;
    return false;
  }

  // -- types ----------------------------------------------------------------

  Type parse_type() {
    if (at(Tok::KwMap)) {
      next();
      expect(Tok::LBracket, "'['");
      std::vector<Type> keys;
      keys.push_back(parse_type());
      while (accept(Tok::Comma)) keys.push_back(parse_type());
      expect(Tok::RBracket, "']'");
      const Token& v = expect(Tok::Ident, "map value type");
      if (v.text != "Int")
        throw ParseError("map value type must be Int", v.span);
      return Type::map_of(std::move(keys));
    }
    const Token& t = expect(Tok::Ident, "type");
    if (t.text == "Int") return Type::integer();
    if (t.text == "U32") return Type::u32();
    if (t.text == "Bool") return Type::boolean();
    // Struct names vs. uninterpreted id sorts are resolved during checking.
    return Type::id(t.text);
  }

  // -- items ----------------------------------------------------------------

  void parse_item(Program& p) {
    auto attrs = parse_attrs();
    if (at(Tok::KwStruct)) {
      if (has_attr(attrs, "resource_kind")) {
        parse_resource_kind(p, attrs);
      } else {
        parse_struct(p, attrs);
      }
      return;
    }
    if (at(Tok::KwImpl)) {
      if (!attrs.empty())
        throw ParseError("attributes are not allowed on impl blocks",
                         attrs.front().span);
      parse_impl(p);
      return;
    }
    if (at(Tok::KwFn)) {
      p.functions.push_back(parse_fn(attrs, ""));
      return;
    }
    fail("item (struct, impl, or fn)");
  }

  void parse_resource_kind(Program& p, const std::vector<Attr>& attrs) {
    for (auto& a : attrs)
      if (a.name != "resource_kind")
        throw ParseError("unexpected attribute '" + a.name +
                             "' on resource kind",
                         a.span);
    Span sp = expect(Tok::KwStruct, "'struct'").span;
    ResourceKindDecl d;
    d.span = sp;
    d.name = expect(Tok::Ident, "resource kind name").text;
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      d.params.push_back(parse_type());
      while (accept(Tok::Comma)) d.params.push_back(parse_type());
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Semi, "';'");
    p.resource_kinds.push_back(std::move(d));
  }

  void parse_struct(Program& p, const std::vector<Attr>& attrs) {
    StructDecl d;
    for (auto& a : attrs) {
      if (a.name == "invariant_twostate" && a.arg) {
        d.coupling_invariants.push_back(a.arg);
      } else {
        throw ParseError("unexpected attribute '" + a.name + "' on struct",
                         a.span);
      }
    }
    d.span = expect(Tok::KwStruct, "'struct'").span;
    d.name = expect(Tok::Ident, "struct name").text;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      std::string fname = expect(Tok::Ident, "field name").text;
      expect(Tok::Colon, "':'");
      Type ft = parse_type();
      d.fields.emplace_back(fname, ft);
      if (!accept(Tok::Comma)) break;
    }
    expect(Tok::RBrace, "'}'");
    p.structs.push_back(std::move(d));
  }

  void parse_impl(Program& p) {
    expect(Tok::KwImpl, "'impl'");
    std::string owner = expect(Tok::Ident, "struct name").text;
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      auto attrs = parse_attrs();
      p.functions.push_back(parse_fn(attrs, owner));
    }
    expect(Tok::RBrace, "'}'");
  }

  FunctionDecl parse_fn(const std::vector<Attr>& attrs,
                        const std::string& owner) {
    FunctionDecl f;
    f.owner = owner;
    for (auto& a : attrs) {
      if (a.name == "requires" && a.arg) {
        f.requires_.push_back(a.arg);
      } else if (a.name == "ensures" && a.arg) {
        f.ensures_.push_back(a.arg);
      } else if (a.name == "pure" && !a.arg) {
        f.pure = true;
      } else if (a.name == "trusted" && !a.arg) {
        f.trusted = true;
      } else {
        throw ParseError("unexpected attribute '" + a.name + "' on fn",
                         a.span);
      }
    }
    f.span = expect(Tok::KwFn, "'fn'").span;
    f.name = expect(Tok::Ident, "function name").text;
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      f.params.push_back(parse_param(owner));
      while (accept(Tok::Comma)) f.params.push_back(parse_param(owner));
    }
    expect(Tok::RParen, "')'");
    if (accept(Tok::Arrow)) {
      f.ret = parse_type();
      f.has_ret = true;
    }
    if (accept(Tok::Semi)) {
      return f;  // no body (trusted)
    }
    if (f.pure) {
      expect(Tok::LBrace, "'{'");
      f.pure_body = parse_expr();
      expect(Tok::RBrace, "'}'");
      f.has_body = true;
      return f;
    }
    f.body = parse_block();
    f.has_body = true;
    return f;
  }

  Param parse_param(const std::string& owner) {
    Param prm;
    prm.span = cur().span;
    if (at(Tok::Amp)) {
      next();
      bool is_mut = accept(Tok::KwMut);
      if (at(Tok::KwSelf)) {
        next();
        prm.name = "self";
        prm.type = Type::struct_ref(owner);
        prm.mode = is_mut ? ParamMode::MutRef : ParamMode::SharedRef;
        return prm;
      }
      fail("'self' after '&'");
    }
    prm.name = expect(Tok::Ident, "parameter name").text;
    expect(Tok::Colon, "':'");
    if (accept(Tok::Amp)) {
      bool is_mut = accept(Tok::KwMut);
      prm.type = parse_type();
      prm.mode = is_mut ? ParamMode::MutRef : ParamMode::SharedRef;
      return prm;
    }
    prm.type = parse_type();
    prm.mode = ParamMode::Value;
    return prm;
  }

  // -- statements -----------------------------------------------------------

  std::vector<Stmt> parse_block() {
    expect(Tok::LBrace, "'{'");
    std::vector<Stmt> body;
    while (!at(Tok::RBrace)) body.push_back(parse_stmt());
    expect(Tok::RBrace, "'}'");
    return body;
  }

  Stmt parse_stmt() {
    Stmt s;
    s.span = cur().span;
    if (at(Tok::KwLet)) {
      next();
      s.kind = StmtKind::Let;
      s.name = expect(Tok::Ident, "variable name").text;
      if (accept(Tok::Colon)) {
        s.let_type = parse_type();
        s.has_type = true;
      }
      expect(Tok::Assign, "'='");
      s.expr = parse_expr();
      expect(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::KwProduce) || at(Tok::KwConsume)) {
      s.kind = at(Tok::KwProduce) ? StmtKind::Produce : StmtKind::Consume;
      next();
      expect(Tok::Bang, "'!'");
      expect(Tok::LParen, "'('");
      s.expr = parse_expr();
      expect(Tok::RParen, "')'");
      expect(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::KwAssert)) {
      next();
      s.kind = StmtKind::Assert;
      expect(Tok::LParen, "'('");
      s.expr = parse_expr();
      expect(Tok::RParen, "')'");
      expect(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::KwIf)) {
      next();
      s.kind = StmtKind::If;
      s.expr = parse_expr();
      s.then_body = parse_block();
      if (accept(Tok::KwElse)) s.else_body = parse_block();
      return s;
    }
    if (at(Tok::LBrace)) {
      s.kind = StmtKind::Block;
      s.then_body = parse_block();
      return s;
    }
    // Expression-shaped statements: calls, map inserts, field assignments.
    ExprP e = parse_postfix();
    if (e->kind == ExprKind::PureCall && e->name == "insert" &&
        e->has_receiver && e->args[0]->kind == ExprKind::FieldRead) {
      if (e->args.size() < 3)
        throw ParseError("insert needs at least one key and a value", e->span);
      s.kind = StmtKind::Insert;
      s.target = e->args[0];
      for (size_t i = 1; i + 1 < e->args.size(); ++i)
        s.args.push_back(e->args[i]);
      s.expr = e->args.back();
      expect(Tok::Semi, "';'");
      return s;
    }
    if (e->kind == ExprKind::PureCall) {
      s.kind = StmtKind::Call;
      s.name = e->name;
      if (e->has_receiver) {
        s.receiver = e->args[0];
        s.args.assign(e->args.begin() + 1, e->args.end());
      } else {
        s.args = e->args;
      }
      expect(Tok::Semi, "';'");
      return s;
    }
    if (e->kind == ExprKind::FieldRead && at(Tok::Assign)) {
      next();
      s.kind = StmtKind::FieldAssign;
      s.target = e;
      s.expr = parse_expr();
      expect(Tok::Semi, "';'");
      return s;
    }
    fail("statement");
  }

  // -- expressions ----------------------------------------------------------

  ExprP parse_expr() { return parse_implies(); }

  ExprP parse_implies() {
    ExprP l = parse_or();
    if (accept(Tok::Implies)) {
      ExprP r = parse_implies();  // right-associative
      ExprP e = mk_expr(ExprKind::Binary, l->span);
      e->bin = BinOp::Implies;
      e->args = {l, r};
      return e;
    }
    return l;
  }

  ExprP parse_or() { return parse_binchain(Tok::OrOr, BinOp::Or, [&] { return parse_and(); }); }
  ExprP parse_and() { return parse_binchain(Tok::AndAnd, BinOp::And, [&] { return parse_cmp(); }); }

  template <typename F>
  ExprP parse_binchain(Tok tk, BinOp op, F sub) {
    ExprP l = sub();
    while (at(tk)) {
      next();
      ExprP r = sub();
      ExprP e = mk_expr(ExprKind::Binary, l->span);
      e->bin = op;
      e->args = {l, r};
      l = e;
    }
    return l;
  }

  ExprP parse_cmp() {
    ExprP l = parse_add();
    BinOp op;
    switch (cur().kind) {
      case Tok::EqEq: op = BinOp::Eq; break;
      case Tok::NotEq: op = BinOp::Ne; break;
      case Tok::Lt: op = BinOp::Lt; break;
      case Tok::Le: op = BinOp::Le; break;
      case Tok::Gt: op = BinOp::Gt; break;
      case Tok::Ge: op = BinOp::Ge; break;
      default: return l;
    }
    next();
    ExprP r = parse_add();
    ExprP e = mk_expr(ExprKind::Binary, l->span);
    e->bin = op;
    e->args = {l, r};
    return e;
  }

  ExprP parse_add() {
    ExprP l = parse_mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOp op = at(Tok::Plus) ? BinOp::Add : BinOp::Sub;
      next();
      ExprP r = parse_mul();
      ExprP e = mk_expr(ExprKind::Binary, l->span);
      e->bin = op;
      e->args = {l, r};
      l = e;
    }
    return l;
  }

  ExprP parse_mul() {
    ExprP l = parse_unary();
    while (at(Tok::Star)) {
      next();
      ExprP r = parse_unary();
      ExprP e = mk_expr(ExprKind::Binary, l->span);
      e->bin = BinOp::Mul;
      e->args = {l, r};
      l = e;
    }
    return l;
  }

  ExprP parse_unary() {
    if (at(Tok::Bang)) {
      Span sp = next().span;
      ExprP e = mk_expr(ExprKind::Unary, sp);
      e->un = UnOp::Not;
      e->args = {parse_unary()};
      return e;
    }
    if (at(Tok::Minus)) {
      Span sp = next().span;
      ExprP e = mk_expr(ExprKind::Unary, sp);
      e->un = UnOp::Neg;
      e->args = {parse_unary()};
      return e;
    }
    return parse_postfix();
  }

  ExprP parse_postfix() {
    ExprP e = parse_primary();
    for (;;) {
      if (accept(Tok::Dot)) {
        std::string field = expect(Tok::Ident, "field or method name").text;
        if (accept(Tok::LParen)) {
          ExprP call = mk_expr(ExprKind::PureCall, e->span);
          call->name = field;
          call->has_receiver = true;
          call->args.push_back(e);
          if (!at(Tok::RParen)) {
            call->args.push_back(parse_expr());
            while (accept(Tok::Comma)) call->args.push_back(parse_expr());
          }
          expect(Tok::RParen, "')'");
          e = call;
        } else {
          ExprP fr = mk_expr(ExprKind::FieldRead, e->span);
          fr->name = field;
          fr->args = {e};
          e = fr;
        }
        continue;
      }
      break;
    }
    return e;
  }

  ExprP parse_primary() {
    Span sp = cur().span;
    if (at(Tok::Int)) {
      ExprP e = mk_expr(ExprKind::IntLit, sp);
      e->int_val = next().int_val;
      return e;
    }
    if (at(Tok::KwTrue) || at(Tok::KwFalse)) {
      ExprP e = mk_expr(ExprKind::BoolLit, sp);
      e->bool_val = at(Tok::KwTrue);
      next();
      return e;
    }
    if (accept(Tok::LParen)) {
      ExprP e = parse_expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::KwSelf)) {
      next();
      ExprP e = mk_expr(ExprKind::Var, sp);
      e->name = "self";
      return e;
    }
    if (at(Tok::KwOld)) {
      next();
      expect(Tok::LParen, "'('");
      ExprP e = mk_expr(ExprKind::Old, sp);
      e->args = {parse_expr()};
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::KwHolds)) {
      next();
      expect(Tok::LParen, "'('");
      ExprP e = mk_expr(ExprKind::Holds, sp);
      e->args = {parse_expr()};
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::KwResource)) {
      next();
      expect(Tok::LParen, "'('");
      ExprP ctor = parse_expr();
      expect(Tok::Comma, "','");
      ExprP amt = parse_expr();
      expect(Tok::RParen, "')'");
      ExprP e = mk_expr(ExprKind::ResourceAtom, sp);
      e->args = {ctor, amt};
      return e;
    }
    if (at(Tok::KwForall)) {
      next();
      expect(Tok::LParen, "'('");
      expect(Tok::Pipe, "'|'");
      ExprP e = mk_expr(ExprKind::Forall, sp);
      do {
        Param b;
        b.span = cur().span;
        b.name = expect(Tok::Ident, "binder name").text;
        expect(Tok::Colon, "':'");
        b.type = parse_type();
        e->binders.push_back(std::move(b));
      } while (accept(Tok::Comma));
      expect(Tok::Pipe, "'|'");
      e->args = {parse_expr()};
      expect(Tok::RParen, "')'");
      return e;
    }
    if (at(Tok::KwIf)) {
      // spec conditional expression: if c { t } else { e }
      next();
      ExprP e = mk_expr(ExprKind::Cond, sp);
      ExprP c = parse_expr();
      expect(Tok::LBrace, "'{'");
      ExprP t = parse_expr();
      expect(Tok::RBrace, "'}'");
      ExprP els;
      if (accept(Tok::KwElse)) {
        expect(Tok::LBrace, "'{'");
        els = parse_expr();
        expect(Tok::RBrace, "'}'");
      } else {
        els = mk_expr(ExprKind::BoolLit, sp);
        els->bool_val = true;
      }
      e->args = {c, t, els};
      return e;
    }
    if (at(Tok::Ident)) {
      std::string name = next().text;
      if (accept(Tok::LParen)) {
        ExprP e = mk_expr(ExprKind::PureCall, sp);
        e->name = name;
        if (!at(Tok::RParen)) {
          e->args.push_back(parse_expr());
          while (accept(Tok::Comma)) e->args.push_back(parse_expr());
        }
        expect(Tok::RParen, "')'");
        return e;
      }
      ExprP e = mk_expr(ExprKind::Var, sp);
      e->name = name;
      return e;
    }
    fail("expression");
  }
};

}  // namespace

ParseResult parse(const std::vector<Token>& tokens) {
  ParseResult r;
  Parser p(tokens);
  try {
    r.program = p.parse_program();
  } catch (const ParseError& e) {
    r.errors.push_back({e.what(), e.span});
  }
  return r;
}

ParseResult parse_text(const std::string& text) {
  auto lexed = tokenize(text);
  if (!lexed.errors.empty()) {
    ParseResult r;
    r.errors = lexed.errors;
    return r;
  }
  return parse(lexed.tokens);
}

}  // namespace rslv::front
