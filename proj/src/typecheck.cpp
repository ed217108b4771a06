#include "rslv/typecheck.hpp"

#include <set>
#include <stdexcept>

namespace rslv::front {

bool spec_callable(const FunctionDecl& f) {
  return f.pure || (f.trusted && f.has_ret && !f.has_body);
}

namespace {

struct CheckError : std::runtime_error {
  Span span;
  CheckError(std::string msg, Span sp)
      : std::runtime_error(std::move(msg)), span(sp) {}
};

struct VarInfo {
  Type type;
  bool mutable_struct = false;
};

using Env = std::map<std::string, VarInfo>;

// Where an expression occurs; controls which spec constructs are legal.
struct Ctx {
  bool allow_old = false;
  bool allow_holds = false;
  bool allow_resource = false;  // only via the assertion grammar
  bool inside_old = false;
  const char* where = "expression";
};

class Checker {
 public:
  explicit Checker(Program& p) : p_(p) {}

  void run(std::vector<FrontError>& errors) {
    try {
      check_decls();
    } catch (const CheckError& e) {
      errors.push_back({e.what(), e.span});
      return;
    }
    for (auto& f : p_.functions) {
      try {
        check_function(f);
      } catch (const CheckError& e) {
        errors.push_back({e.what(), e.span});
      }
    }
    for (auto& s : p_.structs) {
      for (auto& inv : s.coupling_invariants) {
        try {
          check_invariant(s, inv);
        } catch (const CheckError& e) {
          errors.push_back({e.what(), e.span});
        }
      }
    }
    if (errors.empty()) check_pure_dag(errors);
  }

 private:
  Program& p_;

  [[noreturn]] static void err(const std::string& msg, Span sp) {
    throw CheckError(msg, sp);
  }

  // A type as written may name a struct; resolve it.
  Type resolve_type(Type t, Span sp) {
    if (t.kind == Type::Id && p_.find_struct(t.name))
      return Type::struct_ref(t.name);
    if (t.kind == Type::Map) {
      for (auto& k : t.keys) {
        Type rk = resolve_type(k, sp);
        if (!(rk.kind == Type::Int || rk.kind == Type::U32 ||
              rk.kind == Type::Id))
          err("map key type must be an integer or identifier sort, got " +
                  rk.str(),
              sp);
        k = rk;
      }
    }
    return t;
  }

  void check_decls() {
    std::set<std::string> names;
    for (auto& k : p_.resource_kinds) {
      if (!names.insert(k.name).second)
        err("duplicate declaration of '" + k.name + "'", k.span);
      for (auto& t : k.params) {
        t = resolve_type(t, k.span);
        if (!t.is_value_type())
          err("resource kind parameter must be a value type, got " + t.str(),
              k.span);
      }
    }
    for (auto& s : p_.structs) {
      if (!names.insert(s.name).second)
        err("duplicate declaration of '" + s.name + "'", s.span);
      std::set<std::string> fields;
      for (auto& [fname, ftype] : s.fields) {
        if (!fields.insert(fname).second)
          err("duplicate field '" + fname + "' in struct " + s.name, s.span);
        ftype = resolve_type(ftype, s.span);
        if (!(ftype.is_value_type() || ftype.kind == Type::Map))
          err("struct field '" + fname + "' has unsupported type " +
                  ftype.str(),
              s.span);
      }
    }
    std::set<std::string> fns;
    for (auto& f : p_.functions) {
      if (!fns.insert(f.qualified_name()).second)
        err("duplicate function '" + f.qualified_name() + "'", f.span);
      if (!f.owner.empty() && !p_.find_struct(f.owner))
        err("impl block for unknown struct '" + f.owner + "'", f.span);
      std::set<std::string> pnames;
      for (auto& prm : f.params) {
        if (!pnames.insert(prm.name).second)
          err("duplicate parameter '" + prm.name + "'", prm.span);
        prm.type = resolve_type(prm.type, prm.span);
        if (prm.mode == ParamMode::Value && !prm.type.is_value_type())
          err("parameter '" + prm.name +
                  "' passed by value must have a value type",
              prm.span);
        if (prm.mode != ParamMode::Value && prm.type.kind != Type::Struct)
          err("reference parameter '" + prm.name + "' must name a struct",
              prm.span);
      }
      if (f.has_ret) {
        f.ret = resolve_type(f.ret, f.span);
        if (!f.ret.is_value_type())
          err("function '" + f.name + "' must return a value type", f.span);
      }
      if (f.trusted && f.has_body)
        err("trusted function '" + f.name + "' must not have a body", f.span);
      if (!f.trusted && !f.has_body)
        err("function '" + f.name + "' needs a body (or mark it trusted)",
            f.span);
      if (f.pure) {
        if (!f.has_ret)
          err("pure function '" + f.name + "' must return a value", f.span);
        if (!f.requires_.empty() && !f.trusted)
          err("pure function '" + f.name + "' cannot have preconditions",
              f.span);
        for (auto& prm : f.params)
          if (prm.mode == ParamMode::MutRef)
            err("pure function '" + f.name +
                    "' cannot take a mutable reference",
                prm.span);
      } else if (f.has_ret && f.has_body) {
        err("only pure functions may return a value", f.span);
      }
      if (f.trusted && f.has_ret && !f.pure) f.pure = true;  // treat as UF
      if (f.trusted && f.has_ret && !f.owner.empty())
        err("trusted uninterpreted function '" + f.name +
                "' must be a free function",
            f.span);
    }
  }

  Env make_env(const FunctionDecl& f) {
    Env env;
    for (auto& prm : f.params)
      env[prm.name] = {prm.type, prm.mode == ParamMode::MutRef};
    return env;
  }

  void check_function(FunctionDecl& f) {
    Env env = make_env(f);
    // specs
    for (auto& r : f.requires_) {
      Ctx c;
      c.allow_holds = true;
      c.where = "precondition";
      check_assertion(r, env, c);
    }
    for (auto& e : f.ensures_) {
      Ctx c;
      c.allow_holds = true;
      c.allow_old = true;
      c.where = "postcondition";
      check_assertion(e, env, c);
    }
    if (!f.has_body) return;
    if (f.pure) {
      Ctx c;
      c.where = "pure function body";
      Type t = check_expr(f.pure_body, env, c);
      if (!compatible(t, f.ret))
        err("pure function '" + f.name + "' returns " + f.ret.str() +
                " but its body has type " + t.str(),
            f.pure_body->span);
      return;
    }
    Env scope = env;
    check_body(f.body, scope);
  }

  void check_invariant(const StructDecl& s, const ExprP& inv) {
    Env env;
    env["self"] = {Type::struct_ref(s.name), true};
    Ctx c;
    c.allow_holds = true;
    c.allow_old = true;
    c.where = "coupling invariant";
    Type t = check_expr(inv, env, c);
    if (t.kind != Type::Bool)
      err("coupling invariant must be boolean", inv->span);
  }

  // -- statements -----------------------------------------------------------

  void check_body(std::vector<Stmt>& body, Env env) {
    for (auto& st : body) check_stmt(st, env);
  }

  void check_stmt(Stmt& st, Env& env) {
    switch (st.kind) {
      case StmtKind::Let: {
        Ctx c;
        c.where = "let initializer";
        Type t = check_expr(st.expr, env, c);
        if (st.has_type) {
          if (!compatible(t, st.let_type))
            err("let '" + st.name + "' declared " + st.let_type.str() +
                    " but initialized with " + t.str(),
                st.span);
          t = st.let_type;
        }
        if (!t.is_value_type())
          err("let bindings must have value types, got " + t.str(), st.span);
        env[st.name] = {t, false};
        return;
      }
      case StmtKind::Insert: {
        Type mt = check_mut_field(st.target, env);
        if (mt.kind != Type::Map)
          err("insert target must be a map field", st.span);
        if (st.args.size() != mt.keys.size())
          err("map takes " + std::to_string(mt.keys.size()) + " key(s), got " +
                  std::to_string(st.args.size()),
              st.span);
        Ctx c;
        c.where = "insert key";
        for (size_t i = 0; i < st.args.size(); ++i) {
          Type kt = check_expr(st.args[i], env, c);
          if (!compatible(kt, mt.keys[i]))
            err("map key " + std::to_string(i + 1) + " expects " +
                    mt.keys[i].str() + ", got " + kt.str(),
                st.args[i]->span);
        }
        Ctx cv;
        cv.where = "insert value";
        Type vt = check_expr(st.expr, env, cv);
        if (!vt.is_integer_like())
          err("map values are integers, got " + vt.str(), st.expr->span);
        return;
      }
      case StmtKind::FieldAssign: {
        Type ft = check_mut_field(st.target, env);
        Ctx c;
        c.where = "assignment";
        Type vt = check_expr(st.expr, env, c);
        if (!compatible(vt, ft))
          err("cannot assign " + vt.str() + " to field of type " + ft.str(),
              st.span);
        return;
      }
      case StmtKind::Call:
        check_call(st, env);
        return;
      case StmtKind::Produce:
      case StmtKind::Consume: {
        Ctx c;
        c.allow_holds = true;
        c.where = st.kind == StmtKind::Produce ? "produce!" : "consume!";
        check_assertion(st.expr, env, c);
        return;
      }
      case StmtKind::Assert: {
        Ctx c;
        c.allow_holds = true;
        c.allow_old = true;
        c.where = "assert";
        Type t = check_expr(st.expr, env, c);
        if (t.kind != Type::Bool) err("assert expects a boolean", st.span);
        return;
      }
      case StmtKind::If: {
        Ctx c;
        c.where = "branch condition";
        Type t = check_expr(st.expr, env, c);
        if (t.kind != Type::Bool)
          err("branch condition must be boolean", st.span);
        Env then_env = env;
        check_body(st.then_body, then_env);
        Env else_env = env;
        check_body(st.else_body, else_env);
        return;
      }
      case StmtKind::Block: {
        Env inner = env;
        check_body(st.then_body, inner);
        return;
      }
    }
  }

  Type check_mut_field(const ExprP& target, Env& env) {
    if (!target || target->kind != ExprKind::FieldRead ||
        target->args[0]->kind != ExprKind::Var)
      err("update target must be <var>.<field>", target ? target->span
                                                        : Span{});
    const ExprP& base = target->args[0];
    auto it = env.find(base->name);
    if (it == env.end()) err("unknown variable '" + base->name + "'", base->span);
    if (it->second.type.kind != Type::Struct)
      err("'" + base->name + "' is not a struct", base->span);
    if (!it->second.mutable_struct)
      err("'" + base->name + "' is not mutable here", base->span);
    base->type = it->second.type;
    const StructDecl* sd = p_.find_struct(it->second.type.name);
    for (auto& [fname, ftype] : sd->fields) {
      if (fname == target->name) {
        target->type = ftype;
        return ftype;
      }
    }
    err("struct " + sd->name + " has no field '" + target->name + "'",
        target->span);
  }

  void check_call(Stmt& st, Env& env) {
    std::string owner;
    if (st.receiver) {
      Ctx c;
      c.where = "call receiver";
      Type rt = check_expr(st.receiver, env, c);
      if (rt.kind != Type::Struct)
        err("method call receiver must be a struct", st.receiver->span);
      owner = rt.name;
    }
    const FunctionDecl* callee = p_.find_function(owner, st.name);
    if (!callee)
      err("unknown function '" +
              (owner.empty() ? st.name : owner + "::" + st.name) + "'",
          st.span);
    if (spec_callable(*callee) && callee->has_ret)
      err("'" + st.name + "' is pure; its result would be discarded", st.span);
    // parameters excluding the receiver
    std::vector<const Param*> formals;
    size_t self_at = SIZE_MAX;
    for (size_t i = 0; i < callee->params.size(); ++i) {
      if (callee->params[i].name == "self")
        self_at = i;
      else
        formals.push_back(&callee->params[i]);
    }
    if (!owner.empty()) {
      if (self_at == SIZE_MAX)
        err("'" + st.name + "' is not a method", st.span);
      const Param& sp = callee->params[self_at];
      if (sp.mode == ParamMode::MutRef) require_mut_var(st.receiver, env);
    } else if (self_at != SIZE_MAX) {
      err("'" + st.name + "' is a method; call it on a struct", st.span);
    }
    if (st.args.size() != formals.size())
      err("'" + st.name + "' takes " + std::to_string(formals.size()) +
              " argument(s), got " + std::to_string(st.args.size()),
          st.span);
    for (size_t i = 0; i < st.args.size(); ++i) {
      Ctx c;
      c.where = "call argument";
      Type at = check_expr(st.args[i], env, c);
      if (!compatible(at, formals[i]->type))
        err("argument " + std::to_string(i + 1) + " of '" + st.name +
                "' expects " + formals[i]->type.str() + ", got " + at.str(),
            st.args[i]->span);
      if (formals[i]->mode == ParamMode::MutRef)
        require_mut_var(st.args[i], env);
    }
  }

  void require_mut_var(const ExprP& arg, Env& env) {
    if (arg->kind != ExprKind::Var)
      err("mutable reference arguments must be plain variables", arg->span);
    auto it = env.find(arg->name);
    if (it == env.end() || !it->second.mutable_struct)
      err("'" + arg->name + "' is not a mutable struct here", arg->span);
  }

  // -- assertion grammar ----------------------------------------------------
  //
  // assertion ::= assertion && assertion
  //             | pure ==> assertion
  //             | if pure { assertion } else { assertion }
  //             | resource(Kind(args), amt)
  //             | pure boolean expression

  void check_assertion(const ExprP& e, Env& env, Ctx c) {
    if (e->kind == ExprKind::Binary && e->bin == BinOp::And) {
      check_assertion(e->args[0], env, c);
      check_assertion(e->args[1], env, c);
      e->type = Type::boolean();
      return;
    }
    if (e->kind == ExprKind::Binary && e->bin == BinOp::Implies) {
      Ctx pc = c;
      pc.allow_resource = false;
      Type ct = check_expr(e->args[0], env, pc);
      if (ct.kind != Type::Bool)
        err("left of '==>' must be boolean", e->args[0]->span);
      check_assertion(e->args[1], env, c);
      e->type = Type::boolean();
      return;
    }
    if (e->kind == ExprKind::Cond) {
      Ctx pc = c;
      pc.allow_resource = false;
      Type ct = check_expr(e->args[0], env, pc);
      if (ct.kind != Type::Bool)
        err("spec conditional guard must be boolean", e->args[0]->span);
      check_assertion(e->args[1], env, c);
      check_assertion(e->args[2], env, c);
      e->type = Type::boolean();
      return;
    }
    if (e->kind == ExprKind::ResourceAtom) {
      check_ctor(e->args[0], env, c);
      Ctx ac = c;
      ac.allow_resource = false;
      Type at = check_expr(e->args[1], env, ac);
      if (!at.is_integer_like())
        err("resource amount must be an integer, got " + at.str(),
            e->args[1]->span);
      e->type = Type::boolean();
      return;
    }
    Ctx pc = c;
    pc.allow_resource = false;
    Type t = check_expr(e, env, pc);
    if (t.kind != Type::Bool)
      err(std::string(c.where) + " must be boolean, got " + t.str(), e->span);
  }

  void check_ctor(ExprP& e, Env& env, Ctx c) {
    if (e->kind != ExprKind::PureCall && e->kind != ExprKind::Ctor)
      err("expected a resource constructor Kind(..)", e->span);
    if (e->kind == ExprKind::PureCall && e->has_receiver)
      err("expected a resource constructor Kind(..)", e->span);
    const ResourceKindDecl* k = p_.find_kind(e->name);
    if (!k) err("unknown resource kind '" + e->name + "'", e->span);
    e->kind = ExprKind::Ctor;
    if (e->args.size() != k->params.size())
      err("resource kind " + k->name + " takes " +
              std::to_string(k->params.size()) + " argument(s), got " +
              std::to_string(e->args.size()),
          e->span);
    Ctx ac = c;
    ac.allow_resource = false;
    for (size_t i = 0; i < e->args.size(); ++i) {
      Type at = check_expr(e->args[i], env, ac);
      if (!compatible(at, k->params[i]))
        err("argument " + std::to_string(i + 1) + " of " + k->name +
                " expects " + k->params[i].str() + ", got " + at.str(),
            e->args[i]->span);
    }
    e->type = Type::unit();
  }

  // -- pure expressions -----------------------------------------------------

  static bool compatible(const Type& got, const Type& want) {
    if (got == want) return true;
    // U32 and Int are interchangeable integers; U32 adds a nonnegativity
    // constraint handled by the encoder, not a distinct sort.
    return got.is_integer_like() && want.is_integer_like();
  }

  Type check_expr(const ExprP& e, Env& env, Ctx c) {
    Type t = check_expr_inner(e, env, c);
    e->type = t;
    return t;
  }

  Type check_expr_inner(const ExprP& e, Env& env, Ctx c) {
    switch (e->kind) {
      case ExprKind::IntLit:
        return Type::integer();
      case ExprKind::BoolLit:
        return Type::boolean();
      case ExprKind::Var: {
        auto it = env.find(e->name);
        if (it == env.end())
          err("unknown variable '" + e->name + "'", e->span);
        return it->second.type;
      }
      case ExprKind::FieldRead: {
        Type bt = check_expr(e->args[0], env, c);
        if (bt.kind != Type::Struct)
          err("field access on non-struct value", e->span);
        const StructDecl* sd = p_.find_struct(bt.name);
        for (auto& [fname, ftype] : sd->fields)
          if (fname == e->name) return ftype;
        err("struct " + sd->name + " has no field '" + e->name + "'",
            e->span);
      }
      case ExprKind::MapGet: {
        Type mt = check_expr(e->args[0], env, c);
        if (mt.kind != Type::Map) err("'.get' on a non-map value", e->span);
        if (e->args.size() - 1 != mt.keys.size())
          err("map takes " + std::to_string(mt.keys.size()) + " key(s)",
              e->span);
        for (size_t i = 1; i < e->args.size(); ++i) {
          Type kt = check_expr(e->args[i], env, c);
          if (!compatible(kt, mt.keys[i - 1]))
            err("map key " + std::to_string(i) + " expects " +
                    mt.keys[i - 1].str() + ", got " + kt.str(),
                e->args[i]->span);
        }
        return Type::integer();
      }
      case ExprKind::PureCall:
        return check_pure_call(e, env, c);
      case ExprKind::Unary: {
        Type t = check_expr(e->args[0], env, c);
        if (e->un == UnOp::Not) {
          if (t.kind != Type::Bool) err("'!' expects a boolean", e->span);
          return Type::boolean();
        }
        if (!t.is_integer_like()) err("'-' expects an integer", e->span);
        return Type::integer();
      }
      case ExprKind::Binary: {
        Type l = check_expr(e->args[0], env, c);
        Type r = check_expr(e->args[1], env, c);
        switch (e->bin) {
          case BinOp::Add:
          case BinOp::Sub:
          case BinOp::Mul:
            if (!l.is_integer_like() || !r.is_integer_like())
              err(std::string("'") + bin_op_str(e->bin) +
                      "' expects integers",
                  e->span);
            return Type::integer();
          case BinOp::Lt:
          case BinOp::Le:
          case BinOp::Gt:
          case BinOp::Ge:
            if (!l.is_integer_like() || !r.is_integer_like())
              err(std::string("'") + bin_op_str(e->bin) +
                      "' expects integers",
                  e->span);
            return Type::boolean();
          case BinOp::Eq:
          case BinOp::Ne:
            if (!compatible(l, r) || l.kind == Type::Struct ||
                l.kind == Type::Map)
              err("'==' operands must be comparable values of the same type",
                  e->span);
            return Type::boolean();
          case BinOp::And:
          case BinOp::Or:
          case BinOp::Implies:
            if (l.kind != Type::Bool || r.kind != Type::Bool)
              err(std::string("'") + bin_op_str(e->bin) +
                      "' expects booleans",
                  e->span);
            return Type::boolean();
        }
        err("bad operator", e->span);
      }
      case ExprKind::Cond: {
        Type ct = check_expr(e->args[0], env, c);
        if (ct.kind != Type::Bool)
          err("conditional guard must be boolean", e->span);
        Type tt = check_expr(e->args[1], env, c);
        Type et = check_expr(e->args[2], env, c);
        if (!compatible(tt, et))
          err("conditional branches have different types: " + tt.str() +
                  " vs " + et.str(),
              e->span);
        return tt;
      }
      case ExprKind::Forall: {
        Env inner = env;
        for (auto& b : e->binders) {
          b.type = resolve_type(b.type, b.span);
          if (!b.type.is_value_type())
            err("quantified variable '" + b.name + "' must have a value type",
                b.span);
          inner[b.name] = {b.type, false};
        }
        Type bt = check_expr(e->args[0], inner, c);
        if (bt.kind != Type::Bool)
          err("quantifier body must be boolean", e->span);
        return Type::boolean();
      }
      case ExprKind::Old: {
        if (!c.allow_old)
          err(std::string("old(..) is not allowed in a ") + c.where, e->span);
        if (c.inside_old) err("old(..) cannot be nested", e->span);
        Ctx inner = c;
        inner.inside_old = true;
        return check_expr(e->args[0], env, inner);
      }
      case ExprKind::Holds: {
        if (!c.allow_holds)
          err(std::string("holds(..) is not allowed in a ") + c.where,
              e->span);
        ExprP ctor = e->args[0];
        check_ctor(ctor, env, c);
        e->args[0] = ctor;
        return Type::integer();
      }
      case ExprKind::ResourceAtom:
        err(std::string("resource(..) may only appear as a conjunct of a "
                        "precondition, postcondition, produce! or consume!") +
                " (found in a " + c.where + ")",
            e->span);
      case ExprKind::Ctor:
        err("resource constructors only appear inside holds/resource",
            e->span);
    }
    err("bad expression", e->span);
  }

  Type check_pure_call(const ExprP& e, Env& env, Ctx c) {
    std::string owner;
    size_t first_arg = 0;
    if (e->has_receiver) {
      Type rt = check_expr(e->args[0], env, c);
      if (rt.kind == Type::Map) {
        // `m.get(k..)` parsed generically; reclassify.
        if (e->name != "get")
          err("maps only support '.get' in expressions", e->span);
        e->kind = ExprKind::MapGet;
        return check_expr_inner(e, env, c);
      }
      if (rt.kind != Type::Struct)
        err("method call on non-struct value", e->span);
      owner = rt.name;
      first_arg = 1;
    }
    const FunctionDecl* callee = p_.find_function(owner, e->name);
    if (!callee) {
      // A receiver-less call to a resource kind name only makes sense inside
      // holds/resource, which route through check_ctor; anything else here is
      // an unknown function.
      if (owner.empty() && p_.find_kind(e->name))
        err("resource constructor '" + e->name +
                "' may only appear inside holds(..) or resource(..)",
            e->span);
      err("unknown function '" +
              (owner.empty() ? e->name : owner + "::" + e->name) + "'",
          e->span);
    }
    if (!spec_callable(*callee))
      err("'" + e->name + "' is not pure and cannot be used in expressions",
          e->span);
    std::vector<const Param*> formals;
    for (auto& prm : callee->params)
      if (prm.name != "self") formals.push_back(&prm);
    bool has_self = formals.size() != callee->params.size();
    if (e->has_receiver != has_self)
      err(has_self ? "'" + e->name + "' is a method; call it on a struct"
                   : "'" + e->name + "' is not a method",
          e->span);
    if (e->args.size() - first_arg != formals.size())
      err("'" + e->name + "' takes " + std::to_string(formals.size()) +
              " argument(s), got " +
              std::to_string(e->args.size() - first_arg),
          e->span);
    for (size_t i = 0; i < formals.size(); ++i) {
      Type at = check_expr(e->args[first_arg + i], env, c);
      if (!compatible(at, formals[i]->type))
        err("argument " + std::to_string(i + 1) + " of '" + e->name +
                "' expects " + formals[i]->type.str() + ", got " + at.str(),
            e->args[first_arg + i]->span);
    }
    return callee->ret;
  }

  // -- pure call graph ------------------------------------------------------

  void collect_calls(const ExprP& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == ExprKind::PureCall) {
      std::string owner;
      if (e->has_receiver && e->args[0]->type.kind == Type::Struct)
        owner = e->args[0]->type.name;
      if (auto* f = p_.find_function(owner, e->name))
        out.insert(f->qualified_name());
    }
    for (auto& a : e->args) collect_calls(a, out);
  }

  void check_pure_dag(std::vector<FrontError>& errors) {
    std::map<std::string, std::set<std::string>> deps;
    std::map<std::string, const FunctionDecl*> byname;
    for (auto& f : p_.functions) {
      if (!spec_callable(f) || !f.has_body) continue;
      byname[f.qualified_name()] = &f;
      collect_calls(f.pure_body, deps[f.qualified_name()]);
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    std::map<std::string, int> state;
    std::vector<std::string> stack;
    auto dfs = [&](auto&& self, const std::string& n) -> bool {
      state[n] = 1;
      for (auto& m : deps[n]) {
        if (!byname.count(m)) continue;
        if (state[m] == 1) {
          errors.push_back({"pure functions must not be recursive: cycle "
                            "through '" +
                                m + "'",
                            byname[m]->span});
          return false;
        }
        if (state[m] == 0 && !self(self, m)) return false;
      }
      state[n] = 2;
      return true;
    };
    for (auto& [n, _] : deps)
      if (state[n] == 0 && !dfs(dfs, n)) return;
  }
};

}  // namespace

CheckResult typecheck(Program& p) {
  CheckResult r;
  Checker(p).run(r.errors);
  return r;
}

}  // namespace rslv::front
