#include "rslv/ast.hpp"

#include <functional>
#include <set>
#include <sstream>

namespace rslv::front {

ExprP mk_expr(ExprKind k, Span sp) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = sp;
  return e;
}

// ---------------------------------------------------------------------------
// Types

bool Type::operator==(const Type& o) const {
  return kind == o.kind && name == o.name && keys == o.keys;
}

std::string Type::str() const {
  switch (kind) {
    case Unit: return "()";
    case Int: return "Int";
    case U32: return "U32";
    case Bool: return "Bool";
    case Id: return name;
    case Struct: return name;
    case Map: {
      std::string s = "Map[";
      for (size_t i = 0; i < keys.size(); ++i) {
        if (i) s += ",";
        s += keys[i].str();
      }
      return s + "]Int";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Program lookups

const ResourceKindDecl* Program::find_kind(const std::string& n) const {
  for (auto& k : resource_kinds)
    if (k.name == n) return &k;
  return nullptr;
}

const StructDecl* Program::find_struct(const std::string& n) const {
  for (auto& s : structs)
    if (s.name == n) return &s;
  return nullptr;
}

const FunctionDecl* Program::find_function(const std::string& owner,
                                           const std::string& n) const {
  for (auto& f : functions)
    if (f.owner == owner && f.name == n) return &f;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Structural equality (spans and inferred types ignored)

bool same_expr(const ExprP& a, const ExprP& b) {
  if (!a || !b) return !a && !b;
  if (a->kind != b->kind) return false;
  if (a->int_val != b->int_val || a->bool_val != b->bool_val ||
      a->name != b->name || a->has_receiver != b->has_receiver)
    return false;
  if (a->kind == ExprKind::Binary && a->bin != b->bin) return false;
  if (a->kind == ExprKind::Unary && a->un != b->un) return false;
  if (a->binders.size() != b->binders.size()) return false;
  for (size_t i = 0; i < a->binders.size(); ++i) {
    if (a->binders[i].name != b->binders[i].name ||
        !(a->binders[i].type == b->binders[i].type))
      return false;
  }
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!same_expr(a->args[i], b->args[i])) return false;
  return true;
}

namespace {

bool same_exprs(const std::vector<ExprP>& a, const std::vector<ExprP>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!same_expr(a[i], b[i])) return false;
  return true;
}

bool same_stmt(const Stmt& a, const Stmt& b);

bool same_body(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (!same_stmt(a[i], b[i])) return false;
  return true;
}

bool same_stmt(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  if (a.has_type != b.has_type) return false;
  if (a.has_type && !(a.let_type == b.let_type)) return false;
  if (!same_expr(a.expr, b.expr) || !same_expr(a.target, b.target) ||
      !same_expr(a.receiver, b.receiver))
    return false;
  return same_exprs(a.args, b.args) && same_body(a.then_body, b.then_body) &&
         same_body(a.else_body, b.else_body);
}

bool same_params(const std::vector<Param>& a, const std::vector<Param>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || !(a[i].type == b[i].type) ||
        a[i].mode != b[i].mode)
      return false;
  }
  return true;
}

}  // namespace

bool same_program(const Program& a, const Program& b) {
  if (a.resource_kinds.size() != b.resource_kinds.size() ||
      a.structs.size() != b.structs.size() ||
      a.functions.size() != b.functions.size())
    return false;
  for (size_t i = 0; i < a.resource_kinds.size(); ++i) {
    if (a.resource_kinds[i].name != b.resource_kinds[i].name ||
        !(a.resource_kinds[i].params == b.resource_kinds[i].params))
      return false;
  }
  for (size_t i = 0; i < a.structs.size(); ++i) {
    auto& x = a.structs[i];
    auto& y = b.structs[i];
    if (x.name != y.name || x.fields != y.fields) return false;
    if (!same_exprs(x.coupling_invariants, y.coupling_invariants))
      return false;
  }
  for (size_t i = 0; i < a.functions.size(); ++i) {
    auto& x = a.functions[i];
    auto& y = b.functions[i];
    if (x.name != y.name || x.owner != y.owner || x.pure != y.pure ||
        x.trusted != y.trusted || x.has_ret != y.has_ret ||
        x.has_body != y.has_body)
      return false;
    if (x.has_ret && !(x.ret == y.ret)) return false;
    if (!same_params(x.params, y.params)) return false;
    if (!same_exprs(x.requires_, y.requires_) ||
        !same_exprs(x.ensures_, y.ensures_))
      return false;
    if (!same_expr(x.pure_body, y.pure_body)) return false;
    if (!same_body(x.body, y.body)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Printer (output reparses to a structurally equal program)

namespace {

class Printer {
 public:
  std::string out;
  int depth = 0;

  void line(const std::string& s) {
    out.append(static_cast<size_t>(depth) * 4, ' ');
    out += s;
    out += "\n";
  }

  void expr(std::string& s, const ExprP& e) {
    switch (e->kind) {
      case ExprKind::IntLit:
        s += std::to_string(e->int_val);
        return;
      case ExprKind::BoolLit:
        s += e->bool_val ? "true" : "false";
        return;
      case ExprKind::Var:
        s += e->name;
        return;
      case ExprKind::FieldRead:
        expr(s, e->args[0]);
        s += "." + e->name;
        return;
      case ExprKind::MapGet:
        expr(s, e->args[0]);
        s += ".get(";
        args_from(s, e, 1);
        s += ")";
        return;
      case ExprKind::PureCall:
        if (e->has_receiver) {
          expr(s, e->args[0]);
          s += "." + e->name + "(";
          args_from(s, e, 1);
        } else {
          s += e->name + "(";
          args_from(s, e, 0);
        }
        s += ")";
        return;
      case ExprKind::Unary:
        s += (e->un == UnOp::Not) ? "!" : "-";
        paren(s, e->args[0]);
        return;
      case ExprKind::Binary:
        paren(s, e->args[0]);
        s += std::string(" ") + bin_op_str(e->bin) + " ";
        paren(s, e->args[1]);
        return;
      case ExprKind::Cond:
        s += "if ";
        expr(s, e->args[0]);
        s += " { ";
        expr(s, e->args[1]);
        s += " } else { ";
        expr(s, e->args[2]);
        s += " }";
        return;
      case ExprKind::Forall: {
        s += "forall(|";
        for (size_t i = 0; i < e->binders.size(); ++i) {
          if (i) s += ", ";
          s += e->binders[i].name + ": " + e->binders[i].type.str();
        }
        s += "| ";
        expr(s, e->args[0]);
        s += ")";
        return;
      }
      case ExprKind::Old:
        s += "old(";
        expr(s, e->args[0]);
        s += ")";
        return;
      case ExprKind::Holds:
        s += "holds(";
        expr(s, e->args[0]);
        s += ")";
        return;
      case ExprKind::ResourceAtom:
        s += "resource(";
        expr(s, e->args[0]);
        s += ", ";
        expr(s, e->args[1]);
        s += ")";
        return;
      case ExprKind::Ctor:
        s += e->name + "(";
        args_from(s, e, 0);
        s += ")";
        return;
    }
  }

  // Wraps compound subexpressions in parentheses so that the printed text
  // reparses with the same tree shape regardless of precedence.
  void paren(std::string& s, const ExprP& e) {
    bool atom = e->kind != ExprKind::Binary && e->kind != ExprKind::Cond;
    if (!atom) s += "(";
    expr(s, e);
    if (!atom) s += ")";
  }

  void args_from(std::string& s, const ExprP& e, size_t start) {
    for (size_t i = start; i < e->args.size(); ++i) {
      if (i > start) s += ", ";
      expr(s, e->args[i]);
    }
  }

  std::string estr(const ExprP& e) {
    std::string s;
    expr(s, e);
    return s;
  }

  void stmt(const Stmt& st) {
    switch (st.kind) {
      case StmtKind::Let: {
        std::string s = "let " + st.name;
        if (st.has_type) s += ": " + st.let_type.str();
        s += " = " + estr(st.expr) + ";";
        line(s);
        return;
      }
      case StmtKind::Insert: {
        std::string s = estr(st.target) + ".insert(";
        for (auto& k : st.args) s += estr(k) + ", ";
        s += estr(st.expr) + ");";
        line(s);
        return;
      }
      case StmtKind::FieldAssign:
        line(estr(st.target) + " = " + estr(st.expr) + ";");
        return;
      case StmtKind::Call: {
        std::string s;
        if (st.receiver) s += estr(st.receiver) + ".";
        s += st.name + "(";
        for (size_t i = 0; i < st.args.size(); ++i) {
          if (i) s += ", ";
          s += estr(st.args[i]);
        }
        s += ");";
        line(s);
        return;
      }
      case StmtKind::Produce:
        line("produce!(" + estr(st.expr) + ");");
        return;
      case StmtKind::Consume:
        line("consume!(" + estr(st.expr) + ");");
        return;
      case StmtKind::Assert:
        line("assert(" + estr(st.expr) + ");");
        return;
      case StmtKind::If:
        line("if " + estr(st.expr) + " {");
        block(st.then_body);
        if (!st.else_body.empty()) {
          line("} else {");
          block(st.else_body);
        }
        line("}");
        return;
      case StmtKind::Block:
        line("{");
        block(st.then_body);
        line("}");
        return;
    }
  }

  void block(const std::vector<Stmt>& body) {
    ++depth;
    for (auto& st : body) stmt(st);
    --depth;
  }

  void fn(const FunctionDecl& f) {
    for (auto& r : f.requires_) line("#[requires(" + estr(r) + ")]");
    for (auto& e : f.ensures_) line("#[ensures(" + estr(e) + ")]");
    if (f.pure) line("#[pure]");
    if (f.trusted) line("#[trusted]");
    std::string sig = "fn " + f.name + "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) sig += ", ";
      auto& p = f.params[i];
      if (p.name == "self") {
        sig += (p.mode == ParamMode::MutRef) ? "&mut self" : "&self";
      } else {
        sig += p.name + ": ";
        if (p.mode == ParamMode::MutRef) sig += "&mut ";
        else if (p.mode == ParamMode::SharedRef) sig += "&";
        sig += p.type.str();
      }
    }
    sig += ")";
    if (f.has_ret) sig += " -> " + f.ret.str();
    if (!f.has_body) {
      line(sig + ";");
      return;
    }
    if (f.pure) {
      line(sig + " { " + estr(f.pure_body) + " }");
      return;
    }
    line(sig + " {");
    block(f.body);
    line("}");
  }
};

}  // namespace

std::string print_expr(const ExprP& e) {
  Printer pr;
  return pr.estr(e);
}

std::string print_program(const Program& p) {
  Printer pr;
  for (auto& k : p.resource_kinds) {
    pr.line("#[resource_kind]");
    std::string s = "struct " + k.name + "(";
    for (size_t i = 0; i < k.params.size(); ++i) {
      if (i) s += ", ";
      s += k.params[i].str();
    }
    pr.line(s + ");");
    pr.line("");
  }
  for (auto& sd : p.structs) {
    for (auto& inv : sd.coupling_invariants)
      pr.line("#[invariant_twostate(" + pr.estr(inv) + ")]");
    pr.line("struct " + sd.name + " {");
    ++pr.depth;
    for (auto& [fname, ftype] : sd.fields) pr.line(fname + ": " + ftype.str() + ",");
    --pr.depth;
    pr.line("}");
    pr.line("");
    // methods, in declaration order
    bool any = false;
    for (auto& f : p.functions)
      if (f.owner == sd.name) any = true;
    if (any) {
      pr.line("impl " + sd.name + " {");
      ++pr.depth;
      for (auto& f : p.functions) {
        if (f.owner != sd.name) continue;
        pr.fn(f);
        pr.line("");
      }
      --pr.depth;
      pr.line("}");
      pr.line("");
    }
  }
  for (auto& f : p.functions) {
    if (!f.owner.empty()) continue;
    pr.fn(f);
    pr.line("");
  }
  return pr.out;
}

// ---------------------------------------------------------------------------
// Substitution

ExprP subst_expr(const ExprP& e, const std::map<std::string, ExprP>& sub) {
  if (!e) return nullptr;
  if (e->kind == ExprKind::Var) {
    auto it = sub.find(e->name);
    if (it != sub.end()) return it->second;
    return e;
  }
  if (e->kind == ExprKind::Forall) {
    std::map<std::string, ExprP> inner = sub;
    for (auto& b : e->binders) inner.erase(b.name);
    if (inner.empty()) return e;
    // avoid capture: rename any binder that occurs in a replacement
    std::set<std::string> repl_vars;
    std::function<void(const ExprP&)> collect = [&](const ExprP& x) {
      if (!x) return;
      if (x->kind == ExprKind::Var) repl_vars.insert(x->name);
      for (auto& a : x->args) collect(a);
    };
    for (auto& [k, v] : inner) {
      (void)k;
      collect(v);
    }
    ExprP c = std::make_shared<Expr>(*e);
    for (auto& b : c->binders) {
      if (!repl_vars.count(b.name)) continue;
      std::string fresh = b.name;
      do {
        fresh += "_";
      } while (repl_vars.count(fresh) || inner.count(fresh));
      ExprP v = std::make_shared<Expr>();
      v->kind = ExprKind::Var;
      v->name = fresh;
      v->span = b.span;
      v->type = b.type;
      inner[b.name] = v;
      b.name = fresh;
    }
    c->args = {subst_expr(e->args[0], inner)};
    return c;
  }
  bool changed = false;
  std::vector<ExprP> nargs;
  nargs.reserve(e->args.size());
  for (auto& a : e->args) {
    ExprP na = subst_expr(a, sub);
    changed |= (na != a);
    nargs.push_back(na);
  }
  if (!changed) return e;
  ExprP c = std::make_shared<Expr>(*e);
  c->args = std::move(nargs);
  return c;
}

}  // namespace rslv::front
